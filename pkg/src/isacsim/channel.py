"""Channel models: path loss, elevation-dependent blockage, Nakagami-m
fading for the communication links and a Gaussian-beam monostatic sensing
link with Rayleigh fading.

Conventions: powers in watts, distances in meters, angles in radians.
Path loss is anchored at a 1 m free-space reference, with the propagation
constant fixed at c = 3e8 m/s.  At 2 GHz the one-way reference is
(lambda/4/pi)^2 = -38.46 dB.
"""

import math
from dataclasses import dataclass

import numpy as np

C_LIGHT = 3.0e8

BS_RESIDENT = "bs-resident"
UAV_RESIDENT = "uav-resident"


def db_to_linear(x):
    return 10.0 ** (np.asarray(x, dtype=np.float64) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=np.float64))


def dbm_to_watts(x):
    return 1e-3 * 10.0 ** (np.asarray(x, dtype=np.float64) / 10.0)


def watts_to_dbm(x):
    return 10.0 * np.log10(np.asarray(x, dtype=np.float64) / 1e-3)


@dataclass(frozen=True)
class CommChannelParams:
    """Downlink channel parameters.

    UAV-resident links split LoS/NLoS by an elevation-angle sigmoid; NLoS
    raises the path-loss exponent and adds a fixed excess loss.  BS-resident
    links use a single exponent with no blockage split.  Defaults follow a
    dense-urban air-to-ground parameterization; the sigmoid pair (a, b) is
    configurable.
    """

    carrier_frequency: float = 2.0e9
    los_path_loss_exponent: float = 2.0
    nlos_path_loss_exponent: float = 3.0
    nlos_extra_loss_db: float = 20.0
    nakagami_m_los: float = 3.0
    nakagami_m_nlos: float = 1.0
    bs_path_loss_exponent: float = 3.0
    bs_nakagami_m: float = 2.0
    blockage_a: float = 12.08
    blockage_b: float = 0.11

    def __post_init__(self):
        if self.carrier_frequency <= 0:
            raise ValueError("carrier_frequency must be positive")
        for name in ("los_path_loss_exponent", "nlos_path_loss_exponent",
                     "bs_path_loss_exponent"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be >= 2")
        for name in ("nakagami_m_los", "nakagami_m_nlos", "bs_nakagami_m"):
            if getattr(self, name) < 0.5:
                raise ValueError(f"{name}: invalid Nakagami shape (must be >= 0.5)")


@dataclass(frozen=True)
class SensingChannelParams:
    """Monostatic sensing link parameters.

    The Gaussian beam width, cross-section, detection threshold and the
    sensing transmit power (in the scenario config) have no reference
    values; defaults are chosen so detection is geometry-limited at the
    default deployment scale and are all configurable.
    """

    beam_std: float = 0.2               # rad
    radar_cross_section: float = 1.0    # m^2
    sensing_path_loss_exponent: float = 2.0  # per one-way leg
    detection_threshold: float = 1.7366135567376148e-09  # W; calibrated at defaults
    carrier_frequency: float = 2.0e9

    def __post_init__(self):
        if self.beam_std <= 0:
            raise ValueError("beam_std must be positive")
        if self.radar_cross_section <= 0:
            raise ValueError("radar_cross_section must be positive")
        if self.sensing_path_loss_exponent < 2:
            raise ValueError("sensing_path_loss_exponent must be >= 2")
        if self.detection_threshold <= 0:
            raise ValueError("detection_threshold must be positive")
        if self.carrier_frequency <= 0:
            raise ValueError("carrier_frequency must be positive")


@dataclass(frozen=True)
class LinkGeometry:
    """Geometry of one link; derived quantities keep the invariants exact."""

    horizontal_distance: float
    height_difference: float

    @property
    def euclidean_distance(self) -> float:
        return math.hypot(self.horizontal_distance, self.height_difference)

    @property
    def elevation_angle(self) -> float:
        return math.atan2(abs(self.height_difference), self.horizontal_distance)


def free_space_reference(frequency: float) -> float:
    """One-way free-space gain at the 1 m reference: (lambda/4/pi)^2."""
    lam = C_LIGHT / frequency
    return (lam / (4.0 * math.pi)) ** 2


def radar_reference(frequency: float) -> float:
    """Monostatic reference lambda^2/(4 pi)^3 of the radar equation."""
    lam = C_LIGHT / frequency
    return lam ** 2 / (4.0 * math.pi) ** 3


def beam_gain(offset_angle, beam_std):
    """Gaussian beam gain exp(-theta^2 / (2 sigma^2)); boresight is 1."""
    if beam_std <= 0:
        raise ValueError("beam_std must be positive")
    off = np.asarray(offset_angle, dtype=np.float64)
    out = np.exp(-(off * off) / (2.0 * beam_std * beam_std))
    return float(out) if np.isscalar(offset_angle) else out


def los_probability(elevation_angle, params: CommChannelParams):
    """Elevation-angle sigmoid P_LoS = 1/(1 + a*exp(-b*(theta_deg - a)))."""
    theta_deg = np.degrees(np.asarray(elevation_angle, dtype=np.float64))
    a, b = params.blockage_a, params.blockage_b
    out = 1.0 / (1.0 + a * np.exp(-b * (theta_deg - a)))
    return float(out) if np.isscalar(elevation_angle) else out


def _uav_mean_gain(distance, p_los, params: CommChannelParams):
    """Blockage-averaged path gain of a UAV-resident link (fading averages out)."""
    k = free_space_reference(params.carrier_frequency)
    excess = 10.0 ** (-params.nlos_extra_loss_db / 10.0)
    d = np.asarray(distance, dtype=np.float64)
    return k * (p_los * d ** -params.los_path_loss_exponent
                + (1.0 - p_los) * d ** -params.nlos_path_loss_exponent * excess)


def _uav_state_gain(distance, los_state, params: CommChannelParams):
    """Path gain of a UAV-resident link conditioned on the drawn blockage state."""
    k = free_space_reference(params.carrier_frequency)
    excess = 10.0 ** (-params.nlos_extra_loss_db / 10.0)
    d = np.asarray(distance, dtype=np.float64)
    los_gain = k * d ** -params.los_path_loss_exponent
    nlos_gain = k * d ** -params.nlos_path_loss_exponent * excess
    return np.where(los_state, los_gain, nlos_gain)


def _bs_gain(distance, params: CommChannelParams):
    """Path gain of a BS-resident link (single exponent, no blockage split)."""
    k = free_space_reference(params.carrier_frequency)
    d = np.asarray(distance, dtype=np.float64)
    return k * d ** -params.bs_path_loss_exponent


def _check_distance(distance):
    if np.any(np.asarray(distance) < 1.0):
        raise ValueError("inside reference distance (1 m)")


def mean_received_power(tx_power: float, geometry: LinkGeometry, link_kind: str,
                        params: CommChannelParams) -> float:
    """Received power averaged over blockage and (unit-mean) fading.

    This is the quantity the strongest-average-power association compares.
    """
    d = geometry.euclidean_distance
    _check_distance(d)
    if link_kind == BS_RESIDENT:
        return tx_power * float(_bs_gain(d, params))
    if link_kind == UAV_RESIDENT:
        p_los = los_probability(geometry.elevation_angle, params)
        return tx_power * float(_uav_mean_gain(d, p_los, params))
    raise ValueError(f"unknown link kind {link_kind!r}")


def sample_blockage(elevation_angle: float, params: CommChannelParams,
                    rng: np.random.Generator) -> bool:
    """Draw the LoS/NLoS state of one link (True = LoS).

    Drawn once per link per round; the state is reused for every power
    computed in that round.
    """
    return bool(rng.random() < los_probability(elevation_angle, params))


def sample_fading_power(shape_m, mean_power, rng: np.random.Generator, size=None):
    """Nakagami-m power fading: Gamma(shape=m, scale=mean/m), unit mean for
    mean_power=1.  m=1 is Rayleigh (exponential power)."""
    if np.any(np.asarray(shape_m) < 0.5):
        raise ValueError("invalid Nakagami shape (must be >= 0.5)")
    if np.any(np.asarray(mean_power) <= 0):
        raise ValueError("mean_power must be positive")
    return rng.gamma(shape_m, np.asarray(mean_power) / np.asarray(shape_m), size)


def instantaneous_received_power(tx_power: float, geometry: LinkGeometry,
                                 los_state: bool, fading_draw: float,
                                 link_kind: str, params: CommChannelParams) -> float:
    """Received power for one drawn (blockage, fading) pair."""
    d = geometry.euclidean_distance
    _check_distance(d)
    if link_kind == BS_RESIDENT:
        gain = float(_bs_gain(d, params))
    elif link_kind == UAV_RESIDENT:
        gain = float(_uav_state_gain(d, los_state, params))
    else:
        raise ValueError(f"unknown link kind {link_kind!r}")
    return tx_power * gain * fading_draw


def radar_echo_power(tx_power: float, target_geometry: LinkGeometry,
                     offset_angle: float, fading_draw: float,
                     params: SensingChannelParams) -> float:
    """Monostatic echo power via the radar equation.

    The Gaussian beam applies on both transmit and receive (same aperture),
    and the two-way path loss is d^(-2*alpha) per the one-way exponent.
    """
    d = target_geometry.euclidean_distance
    _check_distance(d)
    g = beam_gain(offset_angle, params.beam_std)
    kr = radar_reference(params.carrier_frequency)
    return (tx_power * g * g * params.radar_cross_section * kr
            * d ** (-2.0 * params.sensing_path_loss_exponent) * fading_draw)
