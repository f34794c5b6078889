"""Scenario configuration: JSON schema, validation, and resolved dataclasses.

A scenario file is a JSON object with human-friendly units encoded in the
key names (deg, km, mm, mrad, urad).  Everything is converted to SI (m, rad)
when the file is resolved into a `Scenario`.  Omitted groups fall back to
the documented defaults below; unknown keys are rejected so typos cannot
silently change an experiment.

Schema reference (defaults in parentheses):

    schema_version            int, must equal 1
    name                      str
    nodes.a / nodes.b         latitude_deg, longitude_deg, altitude_m
    beam                      wavelength_nm (1550), waist_radius_mm (40.5)
    antenna                   aperture_diameter_mm (90), magnification (10),
                              insertion_loss_db (2.942)
    atmosphere                visibility_km (null = unlimited)
    link                      fixed_loss_db (null = compute from the model)
    coupling                  base_loss_db, rolloff_halfwidth_urad
    transceiver               rated_gbps (10), effective_tcp_gbps (9.27),
                              tcp_efficiency (0.988), max_tolerable_loss_db (24.1)
    gimbal                    azimuth_range_deg (90), pitch_range_deg (60),
                              bandwidth_hz (20), max_rate_deg_s (28.65)
    fsm1 / fsm2               range_urad (212), bandwidth_hz (300 / 600)
    cmos0 / cmos1 / cmos2     fov_pitch_mrad, fov_azimuth_mrad, pixels (288),
                              frame_rate_hz (1000), centroid_noise_urad
    imu                       rate_noise_urad_s (30)
    beacons.bl0/bl1/bl2       wavelength_nm, divergence_mrad
    disturbance.pitch/azimuth sinusoids: [{amplitude_urad, frequency_hz,
                              phase_deg}], noise_rms_urad, noise_bandwidth_hz
    control.coarse/fsm1/fsm2  kp, ki, kd
    apt                       acquisition_bias_urad (2000),
                              fine_capture_threshold_urad (5000),
                              link_threshold_urad (50), link_dwell_s (0.5),
                              lock_loss_frames (50), stats_warmup_s (10),
                              stabilize_rate_threshold_urad_s (5000),
                              stabilize_dwell_s (0.1),
                              fine1_enabled (true), fine2_enabled (true)
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .dynamics import (
    AxisDisturbance,
    BeaconSpec,
    CmosSpec,
    DisturbanceProfile,
    FsmSpec,
    GimbalSpec,
    ImuSpec,
    SinusoidComponent,
)
from .geometry import GeodeticPosition, geodetic_to_ecef
from .link import TransceiverSpec
from .optics import AntennaSpec, AtmosphereModel, BeamModel, CouplingModel

SCHEMA_VERSION = 1

_DEG = math.pi / 180.0
_MRAD = 1e-3
_URAD = 1e-6


class ScenarioError(ValueError):
    """Scenario file failed validation; `field` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class ControllerGains:
    """PID gains for one tracking loop (error rad -> command rad)."""

    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0


@dataclass(frozen=True)
class AptParams:
    """State-machine thresholds and timing for the acquisition chain."""

    acquisition_bias_rad: float = 2000e-6
    fine_capture_threshold_rad: float = 5000e-6
    link_threshold_rad: float = 50e-6
    link_dwell_s: float = 0.5
    lock_loss_frames: int = 50
    stats_warmup_s: float = 10.0
    stabilize_rate_threshold_rad_s: float = 5000e-6
    stabilize_dwell_s: float = 0.1
    fine1_enabled: bool = True
    fine2_enabled: bool = True


@dataclass(frozen=True)
class Scenario:
    """Fully resolved, validated configuration for one simulated link."""

    name: str
    node_a: GeodeticPosition
    node_b: GeodeticPosition
    beam: BeamModel
    antenna: AntennaSpec
    atmosphere: AtmosphereModel
    coupling: CouplingModel
    transceiver: TransceiverSpec
    fixed_loss_db: float | None
    gimbal: GimbalSpec
    fsm1: FsmSpec
    fsm2: FsmSpec
    cmos0: CmosSpec
    cmos1: CmosSpec
    cmos2: CmosSpec
    imu: ImuSpec
    beacon_bl0: BeaconSpec
    beacon_bl1: BeaconSpec
    beacon_bl2: BeaconSpec
    disturbance: DisturbanceProfile
    gains_coarse: ControllerGains
    gains_fsm1: ControllerGains
    gains_fsm2: ControllerGains
    apt: AptParams
    digest: str

    @property
    def distance_m(self) -> float:
        a = geodetic_to_ecef(self.node_a)
        b = geodetic_to_ecef(self.node_b)
        return math.sqrt((b.x_m - a.x_m) ** 2 + (b.y_m - a.y_m) ** 2 + (b.z_m - a.z_m) ** 2)


# ---------------------------------------------------------------------------
# defaults (calibrated; see scripts/tune_defaults.py for how they were chosen)

DEFAULTS: dict = {
    "schema_version": SCHEMA_VERSION,
    "name": "unnamed",
    "nodes": {
        "a": {"latitude_deg": 41.30000, "longitude_deg": -72.90000, "altitude_m": 40.0},
        "b": {"latitude_deg": 41.30000, "longitude_deg": -72.88806014, "altitude_m": 40.0},
    },
    "beam": {"wavelength_nm": 1550.0, "waist_radius_mm": 40.5},
    "antenna": {"aperture_diameter_mm": 90.0, "magnification": 10.0, "insertion_loss_db": 2.942},
    "atmosphere": {"visibility_km": None},
    "link": {"fixed_loss_db": None},
    "coupling": {"base_loss_db": 6.435, "rolloff_halfwidth_urad": 7.0},
    "transceiver": {
        "rated_gbps": 10.0,
        "effective_tcp_gbps": 9.27,
        "tcp_efficiency": 0.988,
        "max_tolerable_loss_db": 24.1,
    },
    "gimbal": {
        "azimuth_range_deg": 90.0,
        "pitch_range_deg": 60.0,
        "bandwidth_hz": 20.0,
        "max_rate_deg_s": 28.6479,
    },
    "fsm1": {"range_urad": 212.0, "bandwidth_hz": 300.0},
    "fsm2": {"range_urad": 212.0, "bandwidth_hz": 600.0},
    "cmos0": {
        "fov_pitch_mrad": 40.0,
        "fov_azimuth_mrad": 40.0,
        "pixels": 288,
        "frame_rate_hz": 1000.0,
        "centroid_noise_urad": 50.0,
    },
    # fine trackers sit behind the 10:1 telescope, so their sky-referred FOV
    # is the sensor FOV divided by the magnification
    "cmos1": {
        "fov_pitch_mrad": 1.0,
        "fov_azimuth_mrad": 1.3,
        "pixels": 288,
        "frame_rate_hz": 1000.0,
        "centroid_noise_urad": 3.0,
    },
    "cmos2": {
        "fov_pitch_mrad": 1.0,
        "fov_azimuth_mrad": 1.3,
        "pixels": 288,
        "frame_rate_hz": 1000.0,
        "centroid_noise_urad": 3.7,
    },
    "imu": {"rate_noise_urad_s": 30.0},
    "beacons": {
        "bl0": {"wavelength_nm": 940.0, "divergence_mrad": 35.0},
        "bl1": {"wavelength_nm": 638.0, "divergence_mrad": 6.0},
        "bl2": {"wavelength_nm": 852.0, "divergence_mrad": 6.0},
    },
    # vibration noise band sits above the gimbal lag corner, below the FSM
    # loops; its rms fixes the coarse-only residual
    "disturbance": {
        "pitch": {
            "sinusoids": [{"amplitude_urad": 50.0, "frequency_hz": 0.5, "phase_deg": 0.0}],
            "noise_rms_urad": 117.0,
            "noise_bandwidth_hz": 6.0,
        },
        "azimuth": {
            "sinusoids": [{"amplitude_urad": 50.0, "frequency_hz": 0.5, "phase_deg": 90.0}],
            "noise_rms_urad": 117.0,
            "noise_bandwidth_hz": 6.0,
        },
    },
    "control": {
        "coarse": {"kp": 0.0, "ki": 6.3, "kd": 0.0},
        "fsm1": {"kp": 0.0, "ki": 67.0, "kd": 0.0},
        "fsm2": {"kp": 0.0, "ki": 250.0, "kd": 0.0},
    },
    "apt": {
        "acquisition_bias_urad": 2000.0,
        "fine_capture_threshold_urad": 5000.0,
        "link_threshold_urad": 50.0,
        "link_dwell_s": 0.5,
        "lock_loss_frames": 50,
        "stats_warmup_s": 10.0,
        "stabilize_rate_threshold_urad_s": 5000.0,
        "stabilize_dwell_s": 0.1,
        "fine1_enabled": True,
        "fine2_enabled": True,
    },
}


# ---------------------------------------------------------------------------
# validation helpers

def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioError(f"{path}.{key}" if path else key, "unknown key")


def _number(obj: dict, key: str, path: str, low: float | None = None,
            high: float | None = None, allow_none: bool = False) -> float | None:
    value = obj[key]
    field = f"{path}.{key}"
    if value is None:
        if allow_none:
            return None
        raise ScenarioError(field, "must be a number")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(field, f"expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(field, "must be finite")
    if low is not None and value < low:
        raise ScenarioError(field, f"must be >= {low}")
    if high is not None and value > high:
        raise ScenarioError(field, f"must be <= {high}")
    return value


def _positive(obj: dict, key: str, path: str) -> float:
    value = _number(obj, key, path)
    if value <= 0.0:
        raise ScenarioError(f"{path}.{key}", "must be positive")
    return value


def _integer(obj: dict, key: str, path: str, low: int = 1) -> int:
    value = obj[key]
    field = f"{path}.{key}"
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(field, "expected an integer")
    if value < low:
        raise ScenarioError(field, f"must be >= {low}")
    return value


def _boolean(obj: dict, key: str, path: str) -> bool:
    value = obj[key]
    if not isinstance(value, bool):
        raise ScenarioError(f"{path}.{key}", "expected true or false")
    return value


def _merge_defaults(raw: dict, defaults: dict) -> dict:
    """Fill omitted keys from defaults, recursively (dicts only)."""
    merged = copy.deepcopy(defaults)
    for key, value in raw.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge_defaults(value, merged[key])
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _node(obj: dict, path: str) -> GeodeticPosition:
    _check_keys(obj, {"latitude_deg", "longitude_deg", "altitude_m"}, path)
    for key in ("latitude_deg", "longitude_deg", "altitude_m"):
        if key not in obj:
            raise ScenarioError(f"{path}.{key}", "missing required key")
    lat = _number(obj, "latitude_deg", path, low=-90.0, high=90.0)
    lon = _number(obj, "longitude_deg", path, low=-180.0, high=180.0)
    alt = _number(obj, "altitude_m", path)
    return GeodeticPosition(lat * _DEG, lon * _DEG, alt)


def _cmos(obj: dict, path: str) -> CmosSpec:
    _check_keys(obj, {"fov_pitch_mrad", "fov_azimuth_mrad", "pixels", "frame_rate_hz",
                      "centroid_noise_urad"}, path)
    return CmosSpec(
        fov_pitch_rad=_positive(obj, "fov_pitch_mrad", path) * _MRAD,
        fov_azimuth_rad=_positive(obj, "fov_azimuth_mrad", path) * _MRAD,
        pixels=_integer(obj, "pixels", path),
        frame_rate_hz=_positive(obj, "frame_rate_hz", path),
        centroid_noise_rad=_number(obj, "centroid_noise_urad", path, low=0.0) * _URAD,
    )


def _beacon(obj: dict, path: str) -> BeaconSpec:
    _check_keys(obj, {"wavelength_nm", "divergence_mrad"}, path)
    return BeaconSpec(
        wavelength_m=_positive(obj, "wavelength_nm", path) * 1e-9,
        divergence_full_angle_rad=_positive(obj, "divergence_mrad", path) * _MRAD,
    )


def _axis_disturbance(obj: dict, path: str) -> AxisDisturbance:
    _check_keys(obj, {"sinusoids", "noise_rms_urad", "noise_bandwidth_hz"}, path)
    raw_sines = obj["sinusoids"]
    if not isinstance(raw_sines, list):
        raise ScenarioError(f"{path}.sinusoids", "expected a list")
    sines = []
    for i, entry in enumerate(raw_sines):
        spath = f"{path}.sinusoids[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError(spath, "expected an object")
        _check_keys(entry, {"amplitude_urad", "frequency_hz", "phase_deg"}, spath)
        sines.append(SinusoidComponent(
            amplitude_rad=_number(entry, "amplitude_urad", spath, low=0.0) * _URAD,
            frequency_hz=_positive(entry, "frequency_hz", spath),
            phase_rad=_number(entry, "phase_deg", spath) * _DEG,
        ))
    return AxisDisturbance(
        sinusoids=tuple(sines),
        noise_rms_rad=_number(obj, "noise_rms_urad", path, low=0.0) * _URAD,
        noise_bandwidth_hz=_positive(obj, "noise_bandwidth_hz", path),
    )


def _gains(obj: dict, path: str) -> ControllerGains:
    _check_keys(obj, {"kp", "ki", "kd"}, path)
    return ControllerGains(
        kp=_number(obj, "kp", path, low=0.0),
        ki=_number(obj, "ki", path, low=0.0),
        kd=_number(obj, "kd", path, low=0.0),
    )


def resolve_scenario(raw: dict) -> Scenario:
    """Validate a parsed scenario object and resolve it against the defaults."""
    if not isinstance(raw, dict):
        raise ScenarioError("", "scenario must be a JSON object")
    _check_keys(raw, set(DEFAULTS.keys()), "")
    if "schema_version" not in raw:
        raise ScenarioError("schema_version", "missing required key")
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ScenarioError("schema_version", f"expected {SCHEMA_VERSION}, got {raw['schema_version']!r}")

    cfg = _merge_defaults(raw, DEFAULTS)

    name = cfg["name"]
    if not isinstance(name, str) or not name:
        raise ScenarioError("name", "expected a non-empty string")

    nodes = cfg["nodes"]
    _check_keys(nodes, {"a", "b"}, "nodes")
    node_a = _node(nodes["a"], "nodes.a")
    node_b = _node(nodes["b"], "nodes.b")

    beam_obj = cfg["beam"]
    _check_keys(beam_obj, {"wavelength_nm", "waist_radius_mm"}, "beam")
    wavelength_m = _positive(beam_obj, "wavelength_nm", "beam") * 1e-9
    beam = BeamModel(wavelength_m=wavelength_m,
                     waist_radius_m=_positive(beam_obj, "waist_radius_mm", "beam") * 1e-3)

    ant_obj = cfg["antenna"]
    _check_keys(ant_obj, {"aperture_diameter_mm", "magnification", "insertion_loss_db"}, "antenna")
    antenna = AntennaSpec(
        aperture_diameter_m=_positive(ant_obj, "aperture_diameter_mm", "antenna") * 1e-3,
        magnification=_positive(ant_obj, "magnification", "antenna"),
        insertion_loss_db=_number(ant_obj, "insertion_loss_db", "antenna", low=0.0),
    )
    if beam.waist_radius_m > antenna.aperture_radius_m:
        raise ScenarioError("beam.waist_radius_mm", "exceeds the antenna aperture radius")

    atm_obj = cfg["atmosphere"]
    _check_keys(atm_obj, {"visibility_km"}, "atmosphere")
    vis_km = _number(atm_obj, "visibility_km", "atmosphere", allow_none=True)
    if vis_km is not None and vis_km <= 0.0:
        raise ScenarioError("atmosphere.visibility_km", "must be positive or null")
    atmosphere = AtmosphereModel(
        visibility_m=math.inf if vis_km is None else vis_km * 1000.0,
        wavelength_m=wavelength_m,
    )

    link_obj = cfg["link"]
    _check_keys(link_obj, {"fixed_loss_db"}, "link")
    fixed_loss_db = _number(link_obj, "fixed_loss_db", "link", allow_none=True)
    if fixed_loss_db is not None and fixed_loss_db < 0.0:
        raise ScenarioError("link.fixed_loss_db", "must be >= 0 or null")

    cpl_obj = cfg["coupling"]
    _check_keys(cpl_obj, {"base_loss_db", "rolloff_halfwidth_urad"}, "coupling")
    coupling = CouplingModel(
        base_coupling_loss_db=_positive(cpl_obj, "base_loss_db", "coupling"),
        rolloff_halfwidth_rad=_positive(cpl_obj, "rolloff_halfwidth_urad", "coupling") * _URAD,
    )

    trx_obj = cfg["transceiver"]
    _check_keys(trx_obj, {"rated_gbps", "effective_tcp_gbps", "tcp_efficiency",
                          "max_tolerable_loss_db"}, "transceiver")
    tcp_eff = _positive(trx_obj, "tcp_efficiency", "transceiver")
    if tcp_eff > 1.0:
        raise ScenarioError("transceiver.tcp_efficiency", "must be <= 1")
    transceiver = TransceiverSpec(
        rated_gbps=_positive(trx_obj, "rated_gbps", "transceiver"),
        effective_tcp_gbps=_positive(trx_obj, "effective_tcp_gbps", "transceiver"),
        tcp_efficiency=tcp_eff,
        max_tolerable_loss_db=_positive(trx_obj, "max_tolerable_loss_db", "transceiver"),
    )
    if transceiver.effective_tcp_gbps > transceiver.rated_gbps:
        raise ScenarioError("transceiver.effective_tcp_gbps", "exceeds rated_gbps")

    gim_obj = cfg["gimbal"]
    _check_keys(gim_obj, {"azimuth_range_deg", "pitch_range_deg", "bandwidth_hz",
                          "max_rate_deg_s"}, "gimbal")
    gimbal = GimbalSpec(
        azimuth_range_rad=_positive(gim_obj, "azimuth_range_deg", "gimbal") * _DEG,
        pitch_range_rad=_positive(gim_obj, "pitch_range_deg", "gimbal") * _DEG,
        bandwidth_hz=_positive(gim_obj, "bandwidth_hz", "gimbal"),
        max_rate_rad_s=_positive(gim_obj, "max_rate_deg_s", "gimbal") * _DEG,
    )

    fsm_specs = []
    for key in ("fsm1", "fsm2"):
        fsm_obj = cfg[key]
        _check_keys(fsm_obj, {"range_urad", "bandwidth_hz"}, key)
        fsm_specs.append(FsmSpec(
            range_rad=_positive(fsm_obj, "range_urad", key) * _URAD,
            bandwidth_hz=_positive(fsm_obj, "bandwidth_hz", key),
        ))

    cmos0 = _cmos(cfg["cmos0"], "cmos0")
    cmos1 = _cmos(cfg["cmos1"], "cmos1")
    cmos2 = _cmos(cfg["cmos2"], "cmos2")
    for key, fine in (("cmos1", cmos1), ("cmos2", cmos2)):
        if fine.fov_pitch_rad > cmos0.fov_pitch_rad or fine.fov_azimuth_rad > cmos0.fov_azimuth_rad:
            raise ScenarioError(f"{key}.fov_pitch_mrad", "fine FOV exceeds the coarse camera FOV")

    imu_obj = cfg["imu"]
    _check_keys(imu_obj, {"rate_noise_urad_s"}, "imu")
    imu = ImuSpec(rate_noise_rad_s=_number(imu_obj, "rate_noise_urad_s", "imu", low=0.0) * _URAD)

    bcn_obj = cfg["beacons"]
    _check_keys(bcn_obj, {"bl0", "bl1", "bl2"}, "beacons")
    bl0 = _beacon(bcn_obj["bl0"], "beacons.bl0")
    bl1 = _beacon(bcn_obj["bl1"], "beacons.bl1")
    bl2 = _beacon(bcn_obj["bl2"], "beacons.bl2")

    dist_obj = cfg["disturbance"]
    _check_keys(dist_obj, {"pitch", "azimuth"}, "disturbance")
    disturbance = DisturbanceProfile(
        pitch=_axis_disturbance(dist_obj["pitch"], "disturbance.pitch"),
        azimuth=_axis_disturbance(dist_obj["azimuth"], "disturbance.azimuth"),
    )

    ctl_obj = cfg["control"]
    _check_keys(ctl_obj, {"coarse", "fsm1", "fsm2"}, "control")
    gains_coarse = _gains(ctl_obj["coarse"], "control.coarse")
    gains_fsm1 = _gains(ctl_obj["fsm1"], "control.fsm1")
    gains_fsm2 = _gains(ctl_obj["fsm2"], "control.fsm2")

    apt_obj = cfg["apt"]
    _check_keys(apt_obj, {"acquisition_bias_urad", "fine_capture_threshold_urad",
                          "link_threshold_urad", "link_dwell_s", "lock_loss_frames",
                          "stats_warmup_s", "stabilize_rate_threshold_urad_s",
                          "stabilize_dwell_s", "fine1_enabled", "fine2_enabled"}, "apt")
    apt = AptParams(
        acquisition_bias_rad=_number(apt_obj, "acquisition_bias_urad", "apt", low=0.0) * _URAD,
        fine_capture_threshold_rad=_positive(apt_obj, "fine_capture_threshold_urad", "apt") * _URAD,
        link_threshold_rad=_positive(apt_obj, "link_threshold_urad", "apt") * _URAD,
        link_dwell_s=_positive(apt_obj, "link_dwell_s", "apt"),
        lock_loss_frames=_integer(apt_obj, "lock_loss_frames", "apt"),
        stats_warmup_s=_number(apt_obj, "stats_warmup_s", "apt", low=0.0),
        stabilize_rate_threshold_rad_s=_positive(apt_obj, "stabilize_rate_threshold_urad_s", "apt") * _URAD,
        stabilize_dwell_s=_positive(apt_obj, "stabilize_dwell_s", "apt"),
        fine1_enabled=_boolean(apt_obj, "fine1_enabled", "apt"),
        fine2_enabled=_boolean(apt_obj, "fine2_enabled", "apt"),
    )
    if apt.fine2_enabled and not apt.fine1_enabled:
        raise ScenarioError("apt.fine2_enabled", "second fine stage requires the first")
    if apt.acquisition_bias_rad >= 0.5 * min(cmos0.fov_pitch_rad, cmos0.fov_azimuth_rad):
        raise ScenarioError("apt.acquisition_bias_urad", "must lie inside the coarse camera half-FOV")

    digest = hashlib.sha256(
        json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()

    return Scenario(
        name=name,
        node_a=node_a,
        node_b=node_b,
        beam=beam,
        antenna=antenna,
        atmosphere=atmosphere,
        coupling=coupling,
        transceiver=transceiver,
        fixed_loss_db=fixed_loss_db,
        gimbal=gimbal,
        fsm1=fsm_specs[0],
        fsm2=fsm_specs[1],
        cmos0=cmos0,
        cmos1=cmos1,
        cmos2=cmos2,
        imu=imu,
        beacon_bl0=bl0,
        beacon_bl1=bl1,
        beacon_bl2=bl2,
        disturbance=disturbance,
        gains_coarse=gains_coarse,
        gains_fsm1=gains_fsm1,
        gains_fsm2=gains_fsm2,
        apt=apt,
        digest=digest,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario JSON file.

    Raises ScenarioError for malformed JSON (with line/column) or any
    schema violation.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            str(path), f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return resolve_scenario(raw)


def default_scenario(name: str = "default") -> Scenario:
    """The shipped defaults as a resolved Scenario (used by tests/calibration)."""
    raw = copy.deepcopy(DEFAULTS)
    raw["name"] = name
    return resolve_scenario(raw)
