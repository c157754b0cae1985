"""One Monte Carlo realization: node placement, blockage and fading draws,
capacity-constrained association and per-link SINR.

Each round derives its own random stream from (master seed, round index)
and the UAV-distribution coordinates, so realizations are reproducible
and independent across rounds, and rounds can run concurrently.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import kernels, streams
from .channel import (
    CommChannelParams,
    SensingChannelParams,
    _bs_gain,
    _uav_mean_gain,
    _uav_state_gain,
    beam_gain,
    free_space_reference,
    los_probability,
    radar_reference,
)
from .pointprocess import DiskRegion, RpdiParams, sample_php, sample_rpdi

ROLE_BS = "bs"
ROLE_UAV = "uav"
ROLE_RESIDENT = "resident"

TARGET_POLICIES = ("random", "nearest")


@dataclass(frozen=True)
class Node:
    """A placed entity with 3-D position and role."""

    x: float
    y: float
    z: float
    role: str


@dataclass(frozen=True)
class ScenarioConfig:
    """All physical and statistical parameters of one experiment.

    Powers are watts, distances meters, bandwidth Hz.  Paper-anchored
    defaults: 1500 m region, BS at 50 m, UAV mean count 14, 20 Mbps UAV
    capacity cap, 2 GHz carrier, UAV height 150 m.  Everything else
    (powers, noise, densities, sensing parameters) has no published value
    and is a documented, configurable default.
    """

    region: DiskRegion = field(default_factory=lambda: DiskRegion(1500.0))
    bs_height: float = 50.0
    uav_height: float = 150.0
    uav_beta: float = 2e-3
    resident_beta: float = 2e-3
    uav_mean_count: float = 14.0
    resident_mean_count: float = 100.0
    hole_radius: float = 0.0
    bs_tx_power: float = 10.0        # 40 dBm
    uav_tx_power: float = 1.0        # 30 dBm
    sensing_tx_power: float = 1.0e10  # 130 dBm effective (aperture^2 + processing gain)
    bandwidth: float = 1.0e7
    noise_power: float = 1.9952623149688827e-13  # -97 dBm
    coverage_threshold: float = 1.0  # 0 dB
    uav_capacity: float = 2.0e7
    comm: CommChannelParams = field(default_factory=CommChannelParams)
    sensing: SensingChannelParams = field(default_factory=SensingChannelParams)
    master_seed: int = 0
    sensing_target_policy: str = "random"

    def __post_init__(self):
        for name in ("uav_mean_count", "resident_mean_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("bs_tx_power", "uav_tx_power", "sensing_tx_power",
                     "bandwidth", "noise_power", "coverage_threshold",
                     "uav_capacity"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.uav_beta < 0 or self.resident_beta < 0:
            raise ValueError("beta must be >= 0")
        if not 0 <= self.hole_radius < self.region.radius:
            raise ValueError("hole_radius must satisfy hole_radius < region.radius")
        if self.bs_height < 1.0:
            raise ValueError("bs_height must be >= 1 m (reference distance)")
        if self.uav_height < 1.0:
            raise ValueError("uav_height must be >= 1 m (reference distance)")
        if abs(self.uav_height - self.bs_height) < 1.0:
            raise ValueError("uav_height must differ from bs_height by >= 1 m")
        if self.sensing_target_policy not in TARGET_POLICIES:
            raise ValueError(f"sensing_target_policy must be one of {TARGET_POLICIES}")
        if self.master_seed < 0:
            raise ValueError("master_seed must be >= 0")

    @property
    def uav_region(self) -> DiskRegion:
        return DiskRegion(radius=self.region.radius, hole_radius=self.hole_radius,
                          center_x=self.region.center_x, center_y=self.region.center_y)

    def with_cell(self, height: float, hole_radius: float, beta: float) -> "ScenarioConfig":
        return replace(self, uav_height=height, hole_radius=hole_radius, uav_beta=beta)

    def round_rng(self, round_index: int, domain: int = streams.SIM_DOMAIN):
        return streams.derive_rng(self.master_seed, domain, self.uav_height,
                                  self.hole_radius, self.uav_beta, round_index)


@dataclass
class AssociationMap:
    """Result of the association strategy.

    serving[i] is the device index of resident i (0 = BS, 1..k = UAVs);
    loads are the final per-device offered loads in bit/s.
    """

    serving: np.ndarray
    loads: np.ndarray
    counts: np.ndarray

    def members(self, device: int) -> np.ndarray:
        return np.flatnonzero(self.serving == device)

    @property
    def max_uav_load(self) -> float:
        return float(self.loads[1:].max()) if len(self.loads) > 1 else 0.0


@dataclass
class Realization:
    """One Monte Carlo draw: node sets, blockage states, fading draws."""

    round_index: int
    config: ScenarioConfig
    bs: Node
    uav_positions: np.ndarray       # (k, 3)
    resident_positions: np.ndarray  # (m, 3)
    los_state: np.ndarray           # (m, k) bool, True = LoS
    fading: np.ndarray              # (m, k+1), column 0 = BS link
    sensing_target: int             # -1 when no UAVs
    sensing_fading: np.ndarray      # (k,) Rayleigh power draws
    association: Optional[AssociationMap] = None

    @property
    def n_uavs(self) -> int:
        return len(self.uav_positions)

    @property
    def n_residents(self) -> int:
        return len(self.resident_positions)

    @property
    def uavs(self):
        return [Node(x, y, z, ROLE_UAV) for x, y, z in self.uav_positions]

    @property
    def residents(self):
        return [Node(x, y, z, ROLE_RESIDENT) for x, y, z in self.resident_positions]


@dataclass
class LinkStats:
    """Per-link power tables for one realization (devices on axis 1, BS first)."""

    mean_power: np.ndarray      # (m, k+1) average over blockage and fading
    inst_power: np.ndarray      # (m, k+1) drawn blockage state times fading
    dist3d: np.ndarray          # (m, k+1)
    spectral_eff: np.ndarray    # (m, k+1) log2(1 + mean-power SINR)


def build_realization(config: ScenarioConfig, round_index: int,
                      domain: int = streams.SIM_DOMAIN) -> Realization:
    """Draw placements, blockage states and fading for one round."""
    rng = config.round_rng(round_index, domain)
    region = config.region

    uav_pts = sample_php(
        RpdiParams(config.uav_beta, config.uav_mean_count, config.uav_region), rng
    ).points if config.uav_mean_count > 0 else np.zeros((0, 2))
    res_pts = sample_rpdi(
        RpdiParams(config.resident_beta, config.resident_mean_count, region), rng
    ).points if config.resident_mean_count > 0 else np.zeros((0, 2))

    k = len(uav_pts)
    m = len(res_pts)
    uav_xyz = np.column_stack((uav_pts, np.full(k, config.uav_height)))
    res_xyz = np.column_stack((res_pts, np.zeros(m)))
    bs = Node(region.center_x, region.center_y, config.bs_height, ROLE_BS)

    # blockage, one draw per UAV-resident link, reused all round
    horiz = np.hypot(res_xyz[:, 0, None] - uav_xyz[None, :, 0],
                     res_xyz[:, 1, None] - uav_xyz[None, :, 1])
    elev = np.arctan2(config.uav_height, horiz)
    p_los = los_probability(elev, config.comm)
    los = rng.random((m, k)) < p_los

    # fading, one draw per resident-device link (column 0 = BS)
    shapes = np.empty((m, k + 1))
    shapes[:, 0] = config.comm.bs_nakagami_m
    shapes[:, 1:] = np.where(los, config.comm.nakagami_m_los,
                             config.comm.nakagami_m_nlos)
    fading = rng.gamma(shapes, 1.0 / shapes) if m else np.zeros((m, k + 1))

    if k > 0:
        if config.sensing_target_policy == "nearest":
            d = np.linalg.norm(uav_xyz - np.array([bs.x, bs.y, bs.z]), axis=1)
            target = int(np.argmin(d))
        else:
            target = int(rng.integers(k))
        sensing_fading = rng.exponential(1.0, k)
    else:
        target = -1
        sensing_fading = np.zeros(0)

    return Realization(round_index=round_index, config=config, bs=bs,
                       uav_positions=uav_xyz, resident_positions=res_xyz,
                       los_state=los, fading=fading, sensing_target=target,
                       sensing_fading=sensing_fading)


def compute_link_stats(realization: Realization,
                       config: ScenarioConfig) -> LinkStats:
    """Power tables for every resident-device pair of one realization."""
    m = realization.n_residents
    k = realization.n_uavs
    res = realization.resident_positions
    uav = realization.uav_positions
    bs = realization.bs

    d_bs = np.sqrt((res[:, 0] - bs.x) ** 2 + (res[:, 1] - bs.y) ** 2 + bs.z ** 2)
    horiz = np.hypot(res[:, 0, None] - uav[None, :, 0],
                     res[:, 1, None] - uav[None, :, 1])
    d_uav = np.sqrt(horiz ** 2 + config.uav_height ** 2)
    if (m and np.min(d_bs) < 1.0) or (m and k and np.min(d_uav) < 1.0):
        raise ValueError("inside reference distance (1 m)")

    elev = np.arctan2(config.uav_height, horiz)
    p_los = los_probability(elev, config.comm)

    tx = np.empty(k + 1)
    tx[0] = config.bs_tx_power
    tx[1:] = config.uav_tx_power

    mean_gain = np.empty((m, k + 1))
    mean_gain[:, 0] = _bs_gain(d_bs, config.comm)
    mean_gain[:, 1:] = _uav_mean_gain(d_uav, p_los, config.comm)
    state_gain = np.empty((m, k + 1))
    state_gain[:, 0] = mean_gain[:, 0]
    state_gain[:, 1:] = _uav_state_gain(d_uav, realization.los_state, config.comm)

    mean_power = tx * mean_gain
    inst_power = tx * state_gain * realization.fading

    dist3d = np.empty((m, k + 1))
    dist3d[:, 0] = d_bs
    dist3d[:, 1:] = d_uav

    total = mean_power.sum(axis=1, keepdims=True)
    sinr_bar = mean_power / (total - mean_power + config.noise_power)
    spectral_eff = np.log2(1.0 + sinr_bar)

    return LinkStats(mean_power=mean_power, inst_power=inst_power,
                     dist3d=dist3d, spectral_eff=spectral_eff)


def associate(realization: Realization, config: ScenarioConfig,
              stats: Optional[LinkStats] = None) -> AssociationMap:
    """Strongest-average-received-power association with the UAV capacity cap.

    Residents pick the device with the highest mean received power; any UAV
    whose offered load exceeds the cap sheds its farthest resident, who
    re-picks among devices that never dropped them and are below the cap
    (the BS always qualifies).  Deterministic: ties resolve to the smaller
    device/resident index, and overloaded UAVs are processed smallest
    index first.
    """
    if stats is None:
        stats = compute_link_stats(realization, config)
    m, k1 = stats.mean_power.shape
    serving = kernels.associate(stats.mean_power, stats.spectral_eff,
                                stats.dist3d, config.bandwidth, config.uav_capacity)
    counts = np.bincount(serving, minlength=k1) if m else np.zeros(k1, dtype=int)
    sums = (np.bincount(serving, weights=stats.spectral_eff[np.arange(m), serving],
                        minlength=k1) if m else np.zeros(k1))
    loads = np.zeros(k1)
    nz = counts > 0
    loads[nz] = (config.bandwidth / counts[nz]) * sums[nz]
    amap = AssociationMap(serving=serving, loads=loads, counts=counts)
    realization.association = amap
    return amap


def _comm_sinr_all(realization: Realization, config: ScenarioConfig,
                   stats: LinkStats, amap: AssociationMap):
    """Instantaneous SINR and Shannon rate for every resident of the round."""
    m = realization.n_residents
    if m == 0:
        return np.zeros(0), np.zeros(0)
    rows = np.arange(m)
    signal = stats.inst_power[rows, amap.serving]
    interference = stats.inst_power.sum(axis=1) - signal
    sinr = signal / (interference + config.noise_power)
    share = config.bandwidth / amap.counts[amap.serving]
    rate = share * np.log2(1.0 + sinr)
    return sinr, rate


def comm_sinr(resident_index: int, realization: Realization,
              config: ScenarioConfig) -> float:
    """SINR of one resident; all non-serving devices count as interference."""
    if realization.association is None:
        raise ValueError("association required: run associate() first")
    stats = compute_link_stats(realization, config)
    sinr, _ = _comm_sinr_all(realization, config, stats, realization.association)
    return float(sinr[resident_index])


def sensing_observation(realization: Realization, config: ScenarioConfig):
    """Coupled sensing test statistics for one round.

    The BS boresight points at the round's target UAV.  The echo follows
    the two-way radar equation; every other UAV's downlink transmission
    arrives one-way, weighted by the squared-exponential beam pattern at
    its angular offset from boresight.  Returns (present, absent) =
    (S + I + N, I + N) computed from the same interference and noise draw,
    so present >= absent holds round by round.
    """
    k = realization.n_uavs
    if k == 0:
        raise ValueError("no UAVs: sensing undefined for this round")
    bs = realization.bs
    vec = realization.uav_positions - np.array([bs.x, bs.y, bs.z])
    dist = np.linalg.norm(vec, axis=1)
    if np.min(dist) < 1.0:
        raise ValueError("inside reference distance (1 m)")
    t = realization.sensing_target
    boresight = vec[t] / dist[t]
    cos_off = np.clip(vec @ boresight / dist, -1.0, 1.0)
    offsets = np.arccos(cos_off)

    sp = config.sensing
    echo = (config.sensing_tx_power * sp.radar_cross_section
            * radar_reference(sp.carrier_frequency)
            * dist[t] ** (-2.0 * sp.sensing_path_loss_exponent)
            * realization.sensing_fading[t])

    k1 = free_space_reference(sp.carrier_frequency)
    one_way = (config.uav_tx_power * beam_gain(offsets, sp.beam_std) * k1
               * dist ** (-sp.sensing_path_loss_exponent)
               * realization.sensing_fading)
    interference = float(one_way.sum() - one_way[t])

    absent = interference + config.noise_power
    present = echo + absent
    return float(present), float(absent)
