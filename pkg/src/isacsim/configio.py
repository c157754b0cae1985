"""Flat key-value configuration files.

Every key carries its unit in the name (``*_m``, ``*_dbm``, ``*_hz``).
Absent keys fall back to the documented defaults; unknown keys are a hard
error.  parse_config returns the scenario, the sweep grid and the run
settings plus the set of keys the file actually provided, so the manifest
can record which values were defaulted.
"""

from dataclasses import dataclass
from typing import Optional, Set

from .channel import CommChannelParams, SensingChannelParams, dbm_to_watts, watts_to_dbm
from .pointprocess import DiskRegion
from .scenario import ScenarioConfig
from .sweep import SweepGrid


class ConfigError(ValueError):
    pass


def _parse_float(text):
    return float(text)


def _parse_int(text):
    value = float(text)
    if value != int(value):
        raise ValueError("expected an integer")
    return int(value)


def _parse_float_list(text):
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_str(text):
    return text


# key -> (parser, default).  Paper-anchored defaults are listed in PAPER_KEYS.
KEY_TABLE = {
    "region_radius_m": (_parse_float, 1500.0),
    "hole_radius_m": (_parse_float, 0.0),
    "bs_height_m": (_parse_float, 50.0),
    "uav_height_m": (_parse_float, 150.0),
    "uav_beta_per_m": (_parse_float, 2e-3),
    "uav_mean_count": (_parse_float, 14.0),
    "resident_beta_per_m": (_parse_float, 2e-3),
    "resident_mean_count": (_parse_float, 100.0),
    "bs_tx_power_dbm": (_parse_float, 40.0),
    "uav_tx_power_dbm": (_parse_float, 30.0),
    "sensing_tx_power_dbm": (_parse_float, 130.0),
    "bandwidth_hz": (_parse_float, 1.0e7),
    "noise_power_dbm": (_parse_float, -97.0),
    "coverage_threshold_db": (_parse_float, 0.0),
    "uav_capacity_bps": (_parse_float, 2.0e7),
    "carrier_frequency_hz": (_parse_float, 2.0e9),
    "los_path_loss_exponent": (_parse_float, 2.0),
    "nlos_path_loss_exponent": (_parse_float, 3.0),
    "nlos_extra_loss_db": (_parse_float, 20.0),
    "nakagami_m_los": (_parse_float, 3.0),
    "nakagami_m_nlos": (_parse_float, 1.0),
    "bs_path_loss_exponent": (_parse_float, 3.0),
    "bs_nakagami_m": (_parse_float, 2.0),
    "blockage_a": (_parse_float, 12.08),
    "blockage_b": (_parse_float, 0.11),
    "beam_std_rad": (_parse_float, 0.2),
    "radar_cross_section_m2": (_parse_float, 1.0),
    "sensing_path_loss_exponent": (_parse_float, 2.0),
    "detection_threshold_dbm": (_parse_float, float(watts_to_dbm(1.7366135567376148e-09))),
    "sensing_target_policy": (_parse_str, "random"),
    "master_seed": (_parse_int, 0),
    "rounds": (_parse_int, 10000),
    "parallelism": (_parse_int, 1),
    "rounds_per_cell": (_parse_int, 10000),
    "sweep_heights_m": (_parse_float_list, (100.0, 150.0, 200.0, 300.0)),
    "sweep_hole_radii_m": (_parse_float_list,
                           (0.0, 100.0, 200.0, 300.0, 400.0, 500.0)),
    "sweep_betas_per_m": (_parse_float_list, (5e-4, 1e-3, 2e-3, 4e-3, 8e-3)),
    "calibration_target_pfa": (_parse_float, 0.05),
    "calibration_rounds": (_parse_int, 4000),
}

# Defaults anchored to published values (region/BS geometry, UAV count and
# capacity cap, carrier and the LoS/NLoS path-loss rule; 150 m is the fixed
# sensing-study height).
PAPER_KEYS = frozenset({
    "region_radius_m", "bs_height_m", "uav_height_m", "uav_mean_count",
    "uav_capacity_bps", "carrier_frequency_hz", "los_path_loss_exponent",
    "nlos_path_loss_exponent", "nlos_extra_loss_db",
})


@dataclass
class RunSettings:
    rounds: int
    parallelism: int
    rounds_per_cell: int
    calibration_target_pfa: float
    calibration_rounds: int


@dataclass
class ParsedConfig:
    scenario: ScenarioConfig
    grid: SweepGrid
    run: RunSettings
    provided_keys: Set[str]
    values: dict


def read_key_values(path: str) -> dict:
    """Read `key = value` lines; '#' starts a comment; blank lines ignored."""
    raw = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', "
                                  f"got {stripped!r}")
            key, text = (part.strip() for part in stripped.split("=", 1))
            if key not in KEY_TABLE:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in raw:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            parser, _ = KEY_TABLE[key]
            try:
                raw[key] = parser(text)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: invalid value for "
                                  f"{key!r}: {exc}") from exc
    return raw


def build_config(values: dict) -> ParsedConfig:
    """Assemble the typed configuration from a complete key-value dict."""
    v = dict(values)
    provided = set(v)
    for key, (_, default) in KEY_TABLE.items():
        v.setdefault(key, default)
    try:
        comm = CommChannelParams(
            carrier_frequency=v["carrier_frequency_hz"],
            los_path_loss_exponent=v["los_path_loss_exponent"],
            nlos_path_loss_exponent=v["nlos_path_loss_exponent"],
            nlos_extra_loss_db=v["nlos_extra_loss_db"],
            nakagami_m_los=v["nakagami_m_los"],
            nakagami_m_nlos=v["nakagami_m_nlos"],
            bs_path_loss_exponent=v["bs_path_loss_exponent"],
            bs_nakagami_m=v["bs_nakagami_m"],
            blockage_a=v["blockage_a"],
            blockage_b=v["blockage_b"],
        )
        sensing = SensingChannelParams(
            beam_std=v["beam_std_rad"],
            radar_cross_section=v["radar_cross_section_m2"],
            sensing_path_loss_exponent=v["sensing_path_loss_exponent"],
            detection_threshold=float(dbm_to_watts(v["detection_threshold_dbm"])),
            carrier_frequency=v["carrier_frequency_hz"],
        )
        scenario = ScenarioConfig(
            region=DiskRegion(radius=v["region_radius_m"]),
            bs_height=v["bs_height_m"],
            uav_height=v["uav_height_m"],
            uav_beta=v["uav_beta_per_m"],
            resident_beta=v["resident_beta_per_m"],
            uav_mean_count=v["uav_mean_count"],
            resident_mean_count=v["resident_mean_count"],
            hole_radius=v["hole_radius_m"],
            bs_tx_power=float(dbm_to_watts(v["bs_tx_power_dbm"])),
            uav_tx_power=float(dbm_to_watts(v["uav_tx_power_dbm"])),
            sensing_tx_power=float(dbm_to_watts(v["sensing_tx_power_dbm"])),
            bandwidth=v["bandwidth_hz"],
            noise_power=float(dbm_to_watts(v["noise_power_dbm"])),
            coverage_threshold=10.0 ** (v["coverage_threshold_db"] / 10.0),
            uav_capacity=v["uav_capacity_bps"],
            comm=comm,
            sensing=sensing,
            master_seed=v["master_seed"],
            sensing_target_policy=v["sensing_target_policy"],
        )
        grid = SweepGrid(
            heights=tuple(v["sweep_heights_m"]),
            hole_radii=tuple(v["sweep_hole_radii_m"]),
            betas=tuple(v["sweep_betas_per_m"]),
            rounds_per_cell=v["rounds_per_cell"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    run = RunSettings(
        rounds=v["rounds"],
        parallelism=v["parallelism"],
        rounds_per_cell=v["rounds_per_cell"],
        calibration_target_pfa=v["calibration_target_pfa"],
        calibration_rounds=v["calibration_rounds"],
    )
    return ParsedConfig(scenario=scenario, grid=grid, run=run,
                        provided_keys=provided, values=v)


def parse_config(path: Optional[str]) -> ParsedConfig:
    """Parse a config file (None means all defaults)."""
    values = read_key_values(path) if path is not None else {}
    return build_config(values)


def manifest_values(parsed: ParsedConfig) -> dict:
    """Resolved flat config with per-key provenance for the run manifest."""
    out = {}
    for key in sorted(KEY_TABLE):
        value = parsed.values[key]
        if isinstance(value, tuple):
            value = list(value)
        out[key] = {
            "value": value,
            "source": "file" if key in parsed.provided_keys else "default",
            "paper_anchored_default": key in PAPER_KEYS,
        }
    return out
