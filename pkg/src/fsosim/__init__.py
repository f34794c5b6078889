"""Simulator for gimbal-plus-mirror stabilized free-space optical links.

Subsystems: geodetic pointing geometry, Gaussian-beam and atmospheric link
budgets, actuator/sensor dynamics, the staged acquisition-and-tracking loop,
loss/throughput mapping, scenario configs and a deterministic CLI.
"""

from .apt import (
    AptStateMachine,
    TrackingSeries,
    TrackingStats,
    component_rng,
    pid_step,
    run_apt,
    tracking_stats,
)
from .calibrate import CalibrationResult, MeanLossAnchor, calibrate_coupling
from .dynamics import (
    AxisDisturbance,
    BeaconSpec,
    CmosSpec,
    DisturbanceGenerator,
    DisturbanceProfile,
    FsmSpec,
    FsmState,
    GimbalSpec,
    GimbalState,
    ImuSpec,
    SensorFrame,
    SinusoidComponent,
    beacon_visible,
    cmos_measure,
    fsm_step,
    gimbal_step,
    imu_measure,
)
from .geometry import (
    CoincidentEndpointsError,
    EcefVector,
    GeodeticPosition,
    PointingAngles,
    angular_separation,
    geodetic_to_ecef,
    pointing_solution,
)
from .link import (
    LossSeries,
    SummaryStats,
    ThroughputSeries,
    TransceiverSpec,
    downtime_fraction,
    loss_statistics,
    loss_timeseries,
    summarize,
    throughput_timeseries,
)
from .optics import (
    AntennaSpec,
    AtmosphereModel,
    BeamModel,
    CouplingModel,
    LinkBudget,
    atmospheric_loss_db,
    beam_radius_m,
    coupling_loss_db,
    diffraction_loss_db,
    distance_sweep,
    far_field_divergence,
    jitter_excess_db,
    kim_size_exponent,
    link_budget,
)
from .scenario import (
    AptParams,
    ControllerGains,
    Scenario,
    ScenarioError,
    default_scenario,
    load_scenario,
    resolve_scenario,
)
from .states import AptState

__version__ = "0.1.0"

__all__ = [
    "AntennaSpec",
    "AptParams",
    "AptState",
    "AptStateMachine",
    "AtmosphereModel",
    "AxisDisturbance",
    "BeaconSpec",
    "BeamModel",
    "CalibrationResult",
    "CmosSpec",
    "CoincidentEndpointsError",
    "ControllerGains",
    "CouplingModel",
    "DisturbanceGenerator",
    "DisturbanceProfile",
    "EcefVector",
    "FsmSpec",
    "FsmState",
    "GeodeticPosition",
    "GimbalSpec",
    "GimbalState",
    "ImuSpec",
    "LinkBudget",
    "LossSeries",
    "MeanLossAnchor",
    "PointingAngles",
    "Scenario",
    "ScenarioError",
    "SensorFrame",
    "SinusoidComponent",
    "SummaryStats",
    "ThroughputSeries",
    "TrackingSeries",
    "TrackingStats",
    "TransceiverSpec",
    "angular_separation",
    "atmospheric_loss_db",
    "beacon_visible",
    "beam_radius_m",
    "calibrate_coupling",
    "cmos_measure",
    "component_rng",
    "coupling_loss_db",
    "default_scenario",
    "diffraction_loss_db",
    "distance_sweep",
    "downtime_fraction",
    "far_field_divergence",
    "fsm_step",
    "geodetic_to_ecef",
    "gimbal_step",
    "imu_measure",
    "jitter_excess_db",
    "kim_size_exponent",
    "link_budget",
    "load_scenario",
    "loss_statistics",
    "loss_timeseries",
    "pid_step",
    "pointing_solution",
    "resolve_scenario",
    "run_apt",
    "summarize",
    "throughput_timeseries",
    "tracking_stats",
    "__version__",
]
