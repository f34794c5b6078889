"""Plant models for the tracking simulation: actuators, sensors, platform motion.

Axes follow the mount convention: `pitch` tilts the line of sight vertically,
`azimuth` rotates it horizontally.  All angles are radians, rates rad/s.

Actuators are first-order lags toward their command.  The discrete update
uses the exact exponential step, so a small-step response reaches 63.2% of
the command after 1/(2 pi bandwidth) seconds regardless of dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal


# ---------------------------------------------------------------------------
# actuators

@dataclass(frozen=True)
class GimbalSpec:
    """Two-axis coarse gimbal."""

    azimuth_range_rad: float = math.pi / 2  # +/- about boresight
    pitch_range_rad: float = math.pi / 3
    bandwidth_hz: float = 20.0
    max_rate_rad_s: float = 0.5

    def __post_init__(self) -> None:
        if min(self.azimuth_range_rad, self.pitch_range_rad) <= 0.0:
            raise ValueError("gimbal ranges must be positive")
        if self.bandwidth_hz <= 0.0 or self.max_rate_rad_s <= 0.0:
            raise ValueError("bandwidth_hz and max_rate_rad_s must be positive")


@dataclass
class GimbalState:
    azimuth_rad: float = 0.0
    pitch_rad: float = 0.0
    azimuth_rate_rad_s: float = 0.0
    pitch_rate_rad_s: float = 0.0


@dataclass(frozen=True)
class FsmSpec:
    """Fast steering mirror stage; deflection is the line-of-sight correction."""

    range_rad: float = 212e-6
    bandwidth_hz: float = 300.0

    def __post_init__(self) -> None:
        if self.range_rad <= 0.0 or self.bandwidth_hz <= 0.0:
            raise ValueError("range_rad and bandwidth_hz must be positive")


@dataclass
class FsmState:
    pitch_rad: float = 0.0
    azimuth_rad: float = 0.0


def lag_alpha(bandwidth_hz: float, dt_s: float) -> float:
    """Exact discrete gain of a first-order lag with the given bandwidth."""
    return 1.0 - math.exp(-2.0 * math.pi * bandwidth_hz * dt_s)


def first_order_step(position: float, command: float, alpha: float, max_delta: float) -> float:
    """One lag step toward command; the move is clamped to +/- max_delta."""
    delta = alpha * (command - position)
    if delta > max_delta:
        delta = max_delta
    elif delta < -max_delta:
        delta = -max_delta
    return position + delta


def _clamp(x: float, limit: float) -> float:
    if x > limit:
        return limit
    if x < -limit:
        return -limit
    return x


def gimbal_step(
    state: GimbalState, spec: GimbalSpec, command_az_rad: float, command_pitch_rad: float, dt_s: float
) -> GimbalState:
    """Advance the gimbal one tick toward the commanded angles.

    Angle moves are limited by the slew rate and the axis ranges; the
    returned rates are the realized (post-clamp) rates.
    """
    if dt_s <= 0.0:
        raise ValueError("dt_s must be positive")
    alpha = lag_alpha(spec.bandwidth_hz, dt_s)
    max_delta = spec.max_rate_rad_s * dt_s
    az = _clamp(first_order_step(state.azimuth_rad, command_az_rad, alpha, max_delta),
                spec.azimuth_range_rad)
    pitch = _clamp(first_order_step(state.pitch_rad, command_pitch_rad, alpha, max_delta),
                   spec.pitch_range_rad)
    return GimbalState(
        azimuth_rad=az,
        pitch_rad=pitch,
        azimuth_rate_rad_s=(az - state.azimuth_rad) / dt_s,
        pitch_rate_rad_s=(pitch - state.pitch_rad) / dt_s,
    )


def fsm_step(
    state: FsmState, spec: FsmSpec, command_pitch_rad: float, command_az_rad: float, dt_s: float
) -> FsmState:
    """Advance a steering mirror one tick; deflections clamp to +/- range."""
    if dt_s <= 0.0:
        raise ValueError("dt_s must be positive")
    alpha = lag_alpha(spec.bandwidth_hz, dt_s)
    return FsmState(
        pitch_rad=_clamp(first_order_step(state.pitch_rad, command_pitch_rad, alpha, math.inf),
                         spec.range_rad),
        azimuth_rad=_clamp(first_order_step(state.azimuth_rad, command_az_rad, alpha, math.inf),
                           spec.range_rad),
    )


# ---------------------------------------------------------------------------
# sensors

@dataclass(frozen=True)
class CmosSpec:
    """Centroid camera.  Pixel pitch is FOV / pixels per axis."""

    fov_pitch_rad: float
    fov_azimuth_rad: float
    pixels: int = 288
    frame_rate_hz: float = 1000.0
    centroid_noise_rad: float = 0.0

    def __post_init__(self) -> None:
        if min(self.fov_pitch_rad, self.fov_azimuth_rad) <= 0.0:
            raise ValueError("fields of view must be positive")
        if self.pixels <= 0:
            raise ValueError("pixels must be positive")
        if self.frame_rate_hz <= 0.0:
            raise ValueError("frame_rate_hz must be positive")
        if self.centroid_noise_rad < 0.0:
            raise ValueError("centroid_noise_rad must be >= 0")

    @property
    def pixel_pitch_pitch_rad(self) -> float:
        return self.fov_pitch_rad / self.pixels

    @property
    def pixel_pitch_azimuth_rad(self) -> float:
        return self.fov_azimuth_rad / self.pixels


@dataclass(frozen=True)
class SensorFrame:
    valid: bool
    offset_pitch_rad: float
    offset_azimuth_rad: float


def quantize_half_away(value: float, pitch: float) -> float:
    """Round to the nearest multiple of pitch, halves away from zero."""
    if pitch <= 0.0:
        raise ValueError("pitch must be positive")
    return math.copysign(math.floor(abs(value) / pitch + 0.5), value) * pitch


def cmos_measure(
    spec: CmosSpec,
    true_pitch_rad: float,
    true_azimuth_rad: float,
    beacon_seen: bool,
    rng: np.random.Generator,
) -> SensorFrame:
    """One centroid frame.

    Invalid when the beacon is absent or the true offset falls outside the
    field of view on either axis.  Valid frames report the true offset plus
    centroid noise, quantized to the pixel pitch and clamped to the FOV.
    """
    half_pitch = 0.5 * spec.fov_pitch_rad
    half_az = 0.5 * spec.fov_azimuth_rad
    if (not beacon_seen) or abs(true_pitch_rad) > half_pitch or abs(true_azimuth_rad) > half_az:
        return SensorFrame(valid=False, offset_pitch_rad=0.0, offset_azimuth_rad=0.0)
    noisy_pitch = true_pitch_rad + spec.centroid_noise_rad * rng.standard_normal()
    noisy_az = true_azimuth_rad + spec.centroid_noise_rad * rng.standard_normal()
    pitch = _clamp(quantize_half_away(noisy_pitch, spec.pixel_pitch_pitch_rad), half_pitch)
    az = _clamp(quantize_half_away(noisy_az, spec.pixel_pitch_azimuth_rad), half_az)
    return SensorFrame(valid=True, offset_pitch_rad=pitch, offset_azimuth_rad=az)


@dataclass(frozen=True)
class ImuSpec:
    """Angular-rate sensor used for platform stabilization feedforward."""

    rate_noise_rad_s: float = 0.0

    def __post_init__(self) -> None:
        if self.rate_noise_rad_s < 0.0:
            raise ValueError("rate_noise_rad_s must be >= 0")


def imu_measure(spec: ImuSpec, true_rate_rad_s: float, rng: np.random.Generator) -> float:
    """Measured base angular rate: truth plus white Gaussian noise."""
    return true_rate_rad_s + spec.rate_noise_rad_s * rng.standard_normal()


@dataclass(frozen=True)
class BeaconSpec:
    """Hard-edged beacon cone; divergence is the full cone angle."""

    wavelength_m: float
    divergence_full_angle_rad: float

    def __post_init__(self) -> None:
        if self.wavelength_m <= 0.0 or self.divergence_full_angle_rad <= 0.0:
            raise ValueError("beacon parameters must be positive")


def beacon_visible(beacon: BeaconSpec, transmitter_error_rad: float) -> bool:
    """True when the receiver sits inside the beacon cone (edge inclusive)."""
    if transmitter_error_rad < 0.0:
        raise ValueError("transmitter_error_rad must be >= 0")
    return transmitter_error_rad <= 0.5 * beacon.divergence_full_angle_rad


# ---------------------------------------------------------------------------
# platform disturbance

@dataclass(frozen=True)
class SinusoidComponent:
    amplitude_rad: float
    frequency_hz: float
    phase_rad: float = 0.0


@dataclass(frozen=True)
class AxisDisturbance:
    sinusoids: tuple[SinusoidComponent, ...] = ()
    noise_rms_rad: float = 0.0
    noise_bandwidth_hz: float = 1.0

    def __post_init__(self) -> None:
        if self.noise_rms_rad < 0.0:
            raise ValueError("noise_rms_rad must be >= 0")
        if self.noise_bandwidth_hz <= 0.0:
            raise ValueError("noise_bandwidth_hz must be positive")


@dataclass(frozen=True)
class DisturbanceProfile:
    pitch: AxisDisturbance = field(default_factory=AxisDisturbance)
    azimuth: AxisDisturbance = field(default_factory=AxisDisturbance)


def _sinusoid_series(axis: AxisDisturbance, t_s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t_s)
    for comp in axis.sinusoids:
        out += comp.amplitude_rad * np.sin(2.0 * math.pi * comp.frequency_hz * t_s + comp.phase_rad)
    return out


class DisturbanceGenerator:
    """Deterministic base-motion source for one run.

    The noise term is white Gaussian shaped by a 4th-order Butterworth
    low-pass at the configured bandwidth and rescaled so its steady-state
    rms matches the configured value.  The filter is warmed up before t=0
    so the process is stationary from the first sample.
    """

    def __init__(self, profile: DisturbanceProfile, rng: np.random.Generator, rate_hz: float = 1000.0):
        self.profile = profile
        self.rate_hz = rate_hz
        self._rng = rng
        self._filters = {}
        for name, axis in (("pitch", profile.pitch), ("azimuth", profile.azimuth)):
            self._filters[name] = self._make_filter(axis)

    def _make_filter(self, axis: AxisDisturbance):
        if axis.noise_rms_rad == 0.0:
            return None
        bw = min(axis.noise_bandwidth_hz, 0.45 * self.rate_hz)
        b, a = signal.butter(4, bw, fs=self.rate_hz)
        # white-noise gain of the filter: sqrt(sum h^2) from the impulse response
        impulse_len = max(64, int(20.0 * self.rate_hz / bw))
        impulse = np.zeros(impulse_len)
        impulse[0] = 1.0
        h = signal.lfilter(b, a, impulse)
        gain = math.sqrt(float(np.sum(h * h)))
        scale = axis.noise_rms_rad / gain
        # warm up the filter state on pre-roll noise so t=0 is stationary
        warmup = min(int(6.0 * self.rate_hz / bw), 60_000)
        zi = signal.lfiltic(b, a, [0.0], [0.0])
        if warmup > 0:
            _, zi = signal.lfilter(b, a, scale * self._rng.standard_normal(warmup), zi=zi)
        return (b, a, scale, zi)

    def _noise_series(self, name: str, n: int) -> np.ndarray:
        filt = self._filters[name]
        if filt is None:
            return np.zeros(n)
        b, a, scale, zi = filt
        out, zi = signal.lfilter(b, a, scale * self._rng.standard_normal(n), zi=zi)
        self._filters[name] = (b, a, scale, zi)
        return out

    def series(self, n_samples: int, t0_s: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        """(pitch, azimuth) base-angle arrays for n_samples consecutive ticks."""
        t = t0_s + np.arange(n_samples) / self.rate_hz
        pitch = _sinusoid_series(self.profile.pitch, t) + self._noise_series("pitch", n_samples)
        az = _sinusoid_series(self.profile.azimuth, t) + self._noise_series("azimuth", n_samples)
        return pitch, az


def disturbance_sample(generator: DisturbanceGenerator, n_samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Convenience wrapper over DisturbanceGenerator.series for one batch."""
    return generator.series(n_samples)
