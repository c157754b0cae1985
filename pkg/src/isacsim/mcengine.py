"""Monte Carlo engine: runs rounds, pools per-round samples and estimates
the five metrics (coverage, throughput, detection, false alarm, average
sensing probability) with 95% confidence intervals.

Rounds are independent given their derived streams, so they can execute in
parallel; partial results are merged in round order, making every estimate
independent of the worker count.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import streams
from .scenario import (
    ScenarioConfig,
    _comm_sinr_all,
    associate,
    build_realization,
    compute_link_stats,
    sensing_observation,
)

Z95 = 1.959963984540054


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class MetricEstimate:
    """Point estimate with a 95% confidence interval."""

    name: str
    mean: float
    ci95_low: float
    ci95_high: float
    sample_count: int

    @property
    def width(self) -> float:
        return self.ci95_high - self.ci95_low


@dataclass
class RoundResult:
    """Per-round samples produced by run_round."""

    round_index: int
    sinr: np.ndarray
    rate: np.ndarray
    loads: np.ndarray
    present: float
    absent: float
    has_sensing: bool
    n_uavs: int
    n_residents: int


@dataclass
class RunResult:
    """Pooled samples of a batch of rounds (in round order)."""

    config: ScenarioConfig
    n_rounds: int
    sinr: np.ndarray             # all resident-round SINR samples
    rate: np.ndarray             # matching Shannon rates, bit/s
    sensing_present: np.ndarray  # per sensing round
    sensing_absent: np.ndarray
    max_uav_load: np.ndarray     # per round
    rounds_without_uavs: int = 0

    @property
    def n_comm_samples(self) -> int:
        return len(self.sinr)

    @property
    def n_sensing_rounds(self) -> int:
        return len(self.sensing_present)


def run_round(config: ScenarioConfig, round_index: int,
              domain: int = streams.SIM_DOMAIN) -> RoundResult:
    """Build one realization, associate, and compute all round statistics."""
    realization = build_realization(config, round_index, domain)
    stats = compute_link_stats(realization, config)
    amap = associate(realization, config, stats)
    sinr, rate = _comm_sinr_all(realization, config, stats, amap)
    if realization.n_uavs > 0:
        present, absent = sensing_observation(realization, config)
        has_sensing = True
    else:
        present = absent = math.nan
        has_sensing = False
    return RoundResult(round_index=round_index, sinr=sinr, rate=rate,
                       loads=amap.loads, present=present, absent=absent,
                       has_sensing=has_sensing, n_uavs=realization.n_uavs,
                       n_residents=realization.n_residents)


def _run_chunk(config: ScenarioConfig, domain: int, start: int, stop: int):
    sinr, rate, present, absent, max_load = [], [], [], [], []
    skipped = 0
    for i in range(start, stop):
        rr = run_round(config, i, domain)
        sinr.append(rr.sinr)
        rate.append(rr.rate)
        max_load.append(rr.loads[1:].max() if rr.n_uavs else 0.0)
        if rr.has_sensing:
            present.append(rr.present)
            absent.append(rr.absent)
        else:
            skipped += 1
    cat = lambda parts: np.concatenate(parts) if parts else np.zeros(0)
    return (cat(sinr), cat(rate), np.asarray(present), np.asarray(absent),
            np.asarray(max_load), skipped)


def run_many(config: ScenarioConfig, rounds: int, parallelism: int = 1,
             domain: int = streams.SIM_DOMAIN) -> RunResult:
    """Run `rounds` rounds and pool their samples in round order."""
    if rounds <= 0:
        raise ValueError("rounds must be positive")
    if parallelism <= 1 or rounds < 4:
        parts = [_run_chunk(config, domain, 0, rounds)]
    else:
        chunk = max(1, min(1000, -(-rounds // (parallelism * 4))))
        spans = [(s, min(s + chunk, rounds)) for s in range(0, rounds, chunk)]
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(_run_chunk, config, domain, a, b)
                       for a, b in spans]
            parts = [f.result() for f in futures]
    merge = lambda idx: np.concatenate([p[idx] for p in parts])
    return RunResult(config=config, n_rounds=rounds,
                     sinr=merge(0), rate=merge(1),
                     sensing_present=merge(2), sensing_absent=merge(3),
                     max_uav_load=merge(4),
                     rounds_without_uavs=sum(p[5] for p in parts))


def wilson_interval(successes: int, n: int):
    """Wilson score 95% interval for a binomial proportion."""
    if n == 0:
        raise ValueError("empty sample")
    p = successes / n
    z2 = Z95 * Z95
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = Z95 * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    # clamp away float residue so the interval always brackets the estimate
    return p, min(p, max(0.0, center - half)), max(p, min(1.0, center + half))


def _proportion_estimate(name: str, indicator: np.ndarray) -> MetricEstimate:
    n = len(indicator)
    if n == 0:
        raise ValueError(f"empty sample for {name}")
    p, lo, hi = wilson_interval(int(indicator.sum()), n)
    return MetricEstimate(name, p, lo, hi, n)


def coverage_probability(result: RunResult,
                         threshold: Optional[float] = None) -> MetricEstimate:
    """Fraction of resident-rounds whose SINR exceeds the threshold."""
    if threshold is None:
        threshold = result.config.coverage_threshold
    return _proportion_estimate("coverage", result.sinr > threshold)


def throughput(result: RunResult) -> MetricEstimate:
    """Mean per-resident Shannon rate (bit/s), normal-approximation CI."""
    n = result.n_comm_samples
    if n == 0:
        raise ValueError("empty sample for throughput")
    mean = float(result.rate.mean())
    half = Z95 * float(result.rate.std(ddof=1)) / math.sqrt(n) if n > 1 else 0.0
    return MetricEstimate("throughput", mean, mean - half, mean + half, n)


def detection_probability(result: RunResult,
                          tau: Optional[float] = None) -> MetricEstimate:
    """P[test statistic with target present > tau] over sensing rounds."""
    if tau is None:
        tau = result.config.sensing.detection_threshold
    return _proportion_estimate("pd", result.sensing_present > tau)


def false_alarm_probability(result: RunResult,
                            tau: Optional[float] = None) -> MetricEstimate:
    """P[test statistic without the target > tau], same coupled draws."""
    if tau is None:
        tau = result.config.sensing.detection_threshold
    return _proportion_estimate("pfa", result.sensing_absent > tau)


def average_sensing_probability(pd: MetricEstimate, pfa: MetricEstimate,
                                result: Optional[RunResult] = None,
                                tau: Optional[float] = None) -> MetricEstimate:
    """ASP = Pd * (1 - Pfa), the joint sensing figure of merit.

    The CI uses the delta method; when the underlying run is supplied the
    Pd/Pfa covariance is estimated from the coupled per-round indicators,
    otherwise the two estimates are treated as uncorrelated.
    """
    mean = pd.mean * (1.0 - pfa.mean)
    n = min(pd.sample_count, pfa.sample_count)
    se_pd = (pd.width / 2.0) / Z95
    se_pfa = (pfa.width / 2.0) / Z95
    cov = 0.0
    if result is not None and result.n_sensing_rounds > 1:
        if tau is None:
            tau = result.config.sensing.detection_threshold
        d = (result.sensing_present > tau).astype(float)
        f = (result.sensing_absent > tau).astype(float)
        cov = float(np.cov(d, f, ddof=1)[0, 1]) / len(d)
    var = ((1.0 - pfa.mean) ** 2 * se_pd ** 2 + pd.mean ** 2 * se_pfa ** 2
           - 2.0 * pd.mean * (1.0 - pfa.mean) * cov)
    half = Z95 * math.sqrt(max(var, 0.0))
    return MetricEstimate("asp", mean, max(0.0, mean - half),
                          min(1.0, mean + half), n)


def calibrate_threshold(config: ScenarioConfig, target_pfa: float = 0.05,
                        pilot_rounds: int = 4000, rel_tol: float = 0.1,
                        parallelism: int = 1, max_iter: int = 80) -> float:
    """Find tau such that the estimated false-alarm rate matches the target.

    Runs pilot rounds on a dedicated stream domain (fresh simulation rounds
    never reuse them) and bisects on tau until the pilot estimate is within
    rel_tol (relative) of the target.
    """
    if not 0.0 < target_pfa <= 1.0:
        raise ValueError("target_pfa must be in (0, 1]")
    if target_pfa == 1.0:
        return 0.0  # every statistic exceeds a zero threshold
    pilot = run_many(config, pilot_rounds, parallelism, domain=streams.CAL_DOMAIN)
    absent = pilot.sensing_absent
    if len(absent) == 0:
        raise CalibrationError("no sensing rounds in pilot run (no UAVs?)")
    lo, hi = 0.0, float(absent.max()) * 2.0
    pfa_of = lambda tau: float(np.mean(absent > tau))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        pfa = pfa_of(mid)
        if abs(pfa - target_pfa) <= rel_tol * target_pfa:
            return mid
        if pfa > target_pfa:
            lo = mid
        else:
            hi = mid
    raise CalibrationError(
        f"target Pfa {target_pfa} unreachable at pilot resolution: attained "
        f"range [{pfa_of(hi)}, {pfa_of(lo)}] around tau in [{lo}, {hi}]")
