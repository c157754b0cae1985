"""Monte Carlo simulator for sensing-assisted UAV/BS networks.

Places residents and UAVs around a central base station with inhomogeneous
point processes, applies blockage/fading channel models, runs a capacity-
constrained association strategy and estimates communication and sensing
metrics over parameter sweeps.
"""

from .channel import (
    CommChannelParams,
    LinkGeometry,
    SensingChannelParams,
    beam_gain,
    instantaneous_received_power,
    los_probability,
    mean_received_power,
    radar_echo_power,
    sample_blockage,
    sample_fading_power,
)
from .kernels import available_backends, backend_name
from .mcengine import (
    MetricEstimate,
    RunResult,
    average_sensing_probability,
    calibrate_threshold,
    coverage_probability,
    detection_probability,
    false_alarm_probability,
    run_many,
    run_round,
    throughput,
)
from .pointprocess import (
    DiskRegion,
    PointSet,
    RpdiParams,
    normalize_density,
    sample_mhcpp,
    sample_php,
    sample_ppp_disk,
    sample_rpdi,
    sample_thomas_pcp,
)
from .scenario import (
    AssociationMap,
    Node,
    Realization,
    ScenarioConfig,
    associate,
    build_realization,
    comm_sinr,
    sensing_observation,
)
from .sweep import SweepGrid, SweepResult, argmax_cell, emit_results, run_sweep
from .version import __version__

