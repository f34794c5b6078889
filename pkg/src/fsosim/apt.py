"""Acquisition, pointing and tracking: state machine and 1 kHz loop simulation.

Stage nesting
-------------
The simulation runs in error space about the nominal (RTK-derived) pointing
solution.  Per axis, with base motion d(t), gimbal correction g(t) and
mirror deflections f1, f2:

    coarse error  e0 = bias + d - g     (seen by CMOS0)
    mid error     e1 = e0 - f1          (seen by CMOS1)
    residual      e2 = e1 - f2          (seen by CMOS2; couples into the fiber)

so each loop acts on the error left by the stages upstream of it.  The IMU
feedforward integrates measured base rate into the gimbal command in every
state; the three vision loops are enabled per state.  All loops run at the
common 1 kHz tick.

Determinism
-----------
A run is seeded by a single 64-bit integer.  Independent component streams
are derived with fixed labels (disturbance=1, cmos0=2, cmos1=3, cmos2=4,
imu=5) via numpy SeedSequence spawn keys, so the same scenario and seed
reproduce bit-identical output and adding a consumer never perturbs the
other streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DisturbanceGenerator, lag_alpha
from .link import summarize
from .scenario import AptParams, Scenario
from .states import AptState

TICK_RATE_HZ = 1000.0

RNG_STREAM_LABELS = {
    "disturbance": 1,
    "cmos0": 2,
    "cmos1": 3,
    "cmos2": 4,
    "imu": 5,
}


def component_rng(seed: int, component: str) -> np.random.Generator:
    """Derive the named component's generator from the run seed."""
    label = RNG_STREAM_LABELS[component]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(label,))))


# ---------------------------------------------------------------------------
# controller

def pid_step(
    kp: float,
    ki: float,
    kd: float,
    error: float,
    integrator: float,
    previous_error: float,
    dt_s: float,
    output_limit: float,
) -> tuple[float, float]:
    """One PID update; returns (command, new_integrator).

    The integrator is clamped so the integral term alone cannot exceed the
    output limit (anti-windup for saturated actuators).
    """
    integrator += error * dt_s
    if ki > 0.0:
        bound = output_limit / ki
        if integrator > bound:
            integrator = bound
        elif integrator < -bound:
            integrator = -bound
    command = kp * error + ki * integrator + kd * (error - previous_error) / dt_s
    return command, integrator


# ---------------------------------------------------------------------------
# state machine

class AptStateMachine:
    """Transition logic of the acquisition chain, one call per tick.

    Edges:
      Stabilize   -> Acquire     stabilization converged (dwell)
      Acquire     -> CoarseTrack coarse camera lock
      CoarseTrack -> FineTrack1  measured coarse radial below the capture
                                 threshold and mid camera lock (stage enabled)
      FineTrack1  -> FineTrack2  fine camera lock (stage enabled)
      FineTrack2  -> Linked      measured residual below the link threshold
                                 for the dwell time
      any tracking state -> Reacquire   required locks absent for
                                 lock_loss_frames consecutive ticks
      Reacquire   -> Acquire     immediately
    """

    def __init__(self, params: AptParams, fine1_enabled: bool = True, fine2_enabled: bool = True):
        self.params = params
        self.fine1_enabled = fine1_enabled
        self.fine2_enabled = fine2_enabled
        self.state = AptState.STABILIZE
        self.lock_loss_count = 0
        self.link_dwell_count = 0
        self.stabilize_count = 0

    def set_fine_enabled(self, fine1: bool, fine2: bool) -> None:
        self.fine1_enabled = fine1
        self.fine2_enabled = fine2

    def step(
        self,
        stabilize_ok: bool,
        lock0: bool,
        lock1: bool,
        lock2: bool,
        coarse_radial_rad: float,
        fine_radial_rad: float,
    ) -> AptState:
        """Advance one tick.  Radial arguments are measured magnitudes."""
        p = self.params
        state = self.state

        if state == AptState.STABILIZE:
            self.stabilize_count = self.stabilize_count + 1 if stabilize_ok else 0
            if self.stabilize_count >= p.stabilize_dwell_s * TICK_RATE_HZ:
                state = AptState.ACQUIRE
        elif state == AptState.ACQUIRE:
            if lock0:
                state = AptState.COARSE_TRACK
                self.lock_loss_count = 0
        elif state == AptState.REACQUIRE:
            state = AptState.ACQUIRE
        else:
            # tracking states: debounced lock supervision first
            if state == AptState.COARSE_TRACK:
                locks_ok = lock0
            elif state == AptState.FINE_TRACK1:
                locks_ok = lock0 and lock1
            else:  # FINE_TRACK2, LINKED
                locks_ok = lock0 and lock1 and lock2
            self.lock_loss_count = 0 if locks_ok else self.lock_loss_count + 1
            if self.lock_loss_count >= p.lock_loss_frames:
                state = AptState.REACQUIRE
                self.lock_loss_count = 0
                self.link_dwell_count = 0
            elif state == AptState.COARSE_TRACK:
                if (
                    self.fine1_enabled
                    and lock1
                    and coarse_radial_rad < p.fine_capture_threshold_rad
                ):
                    state = AptState.FINE_TRACK1
            elif state == AptState.FINE_TRACK1:
                if self.fine2_enabled and lock2:
                    state = AptState.FINE_TRACK2
            elif state == AptState.FINE_TRACK2:
                if fine_radial_rad < p.link_threshold_rad:
                    self.link_dwell_count += 1
                    if self.link_dwell_count >= p.link_dwell_s * TICK_RATE_HZ:
                        state = AptState.LINKED
                else:
                    self.link_dwell_count = 0

        self.state = state
        return state


# ---------------------------------------------------------------------------
# tracking series

@dataclass(frozen=True)
class TrackingSeries:
    """Per-tick tracking record of one run (fixed 1 kHz timestamps)."""

    t_s: np.ndarray
    state: np.ndarray  # int8 AptState values
    error_pitch_rad: np.ndarray
    error_azimuth_rad: np.ndarray
    gimbal_azimuth_rad: np.ndarray
    gimbal_pitch_rad: np.ndarray
    fsm1_pitch_rad: np.ndarray
    fsm1_azimuth_rad: np.ndarray
    fsm2_pitch_rad: np.ndarray
    fsm2_azimuth_rad: np.ndarray
    lock0: np.ndarray
    lock1: np.ndarray
    lock2: np.ndarray
    scenario_name: str
    scenario_digest: str
    seed: int

    def __len__(self) -> int:
        return self.t_s.size

    def window(self, t0_s: float, t1_s: float) -> "TrackingSeries":
        """Samples with t0_s <= t < t1_s.  Raises on an empty selection."""
        mask = (self.t_s >= t0_s) & (self.t_s < t1_s)
        if not mask.any():
            raise ValueError(f"window [{t0_s}, {t1_s}) selects no samples")
        return TrackingSeries(
            t_s=self.t_s[mask],
            state=self.state[mask],
            error_pitch_rad=self.error_pitch_rad[mask],
            error_azimuth_rad=self.error_azimuth_rad[mask],
            gimbal_azimuth_rad=self.gimbal_azimuth_rad[mask],
            gimbal_pitch_rad=self.gimbal_pitch_rad[mask],
            fsm1_pitch_rad=self.fsm1_pitch_rad[mask],
            fsm1_azimuth_rad=self.fsm1_azimuth_rad[mask],
            fsm2_pitch_rad=self.fsm2_pitch_rad[mask],
            fsm2_azimuth_rad=self.fsm2_azimuth_rad[mask],
            lock0=self.lock0[mask],
            lock1=self.lock1[mask],
            lock2=self.lock2[mask],
            scenario_name=self.scenario_name,
            scenario_digest=self.scenario_digest,
            seed=self.seed,
        )


@dataclass(frozen=True)
class TrackingStats:
    """Pointing-residual statistics over a window (all angles in radians)."""

    radial_mean_rad: float
    radial_std_rad: float
    pitch_mean_rad: float
    pitch_std_rad: float
    azimuth_mean_rad: float
    azimuth_std_rad: float
    count: int


def tracking_stats(series: TrackingSeries, t0_s: float | None = None,
                   t1_s: float | None = None) -> TrackingStats:
    """Residual statistics, optionally restricted to [t0_s, t1_s)."""
    if t0_s is not None or t1_s is not None:
        series = series.window(
            t0_s if t0_s is not None else float(series.t_s[0]),
            t1_s if t1_s is not None else float(series.t_s[-1]) + 1.0,
        )
    radial = np.hypot(series.error_pitch_rad, series.error_azimuth_rad)
    s_r = summarize(radial)
    s_p = summarize(series.error_pitch_rad)
    s_a = summarize(series.error_azimuth_rad)
    return TrackingStats(
        radial_mean_rad=s_r.mean,
        radial_std_rad=s_r.std,
        pitch_mean_rad=s_p.mean,
        pitch_std_rad=s_p.std,
        azimuth_mean_rad=s_a.mean,
        azimuth_std_rad=s_a.std,
        count=s_r.count,
    )


# ---------------------------------------------------------------------------
# simulation loop

def run_apt(
    scenario: Scenario,
    duration_s: float,
    seed: int,
    enable_fine1: bool | None = None,
    enable_fine2: bool | None = None,
    fine_after_s: float = 0.0,
    initial_state: AptState = AptState.STABILIZE,
    enable_feedforward: bool = True,
) -> TrackingSeries:
    """Simulate the full acquisition/tracking chain for duration_s seconds.

    `enable_fine1` / `enable_fine2` select which fine stages may engage
    (None takes the scenario's apt.fine1_enabled / apt.fine2_enabled);
    `fine_after_s` keeps both fine stages disabled until that time, which
    reproduces the delayed-activation tracking experiment.
    `enable_feedforward` switches the IMU rate feedforward into the gimbal
    command (off leaves the vision loops on their own).  Identical
    arguments produce bit-identical series.
    """
    if duration_s <= 0.0:
        raise ValueError("duration_s must be positive")
    if enable_fine1 is None:
        enable_fine1 = scenario.apt.fine1_enabled
    if enable_fine2 is None:
        enable_fine2 = scenario.apt.fine2_enabled
    if enable_fine2 and not enable_fine1:
        raise ValueError("enable_fine2 requires enable_fine1")
    dt = 1.0 / TICK_RATE_HZ
    n = int(round(duration_s * TICK_RATE_HZ))

    # component noise streams (fixed labels; see module docstring)
    dist_gen = DisturbanceGenerator(
        scenario.disturbance, component_rng(seed, "disturbance"), TICK_RATE_HZ
    )
    base = dist_gen.series(n + 1, t0_s=-dt)
    base_pitch, base_az = base[0], base[1]
    rate_pitch = np.diff(base_pitch) / dt
    rate_az = np.diff(base_az) / dt
    base_pitch = base_pitch[1:]
    base_az = base_az[1:]

    noise = {}
    for cam in ("cmos0", "cmos1", "cmos2"):
        rng = component_rng(seed, cam)
        sigma = getattr(scenario, cam).centroid_noise_rad
        noise[cam] = (sigma * rng.standard_normal(n), sigma * rng.standard_normal(n))
    imu_rng = component_rng(seed, "imu")
    imu_sigma = scenario.imu.rate_noise_rad_s
    imu_noise_pitch = imu_sigma * imu_rng.standard_normal(n)
    imu_noise_az = imu_sigma * imu_rng.standard_normal(n)

    # hoisted plant constants
    alpha_g = lag_alpha(scenario.gimbal.bandwidth_hz, dt)
    alpha_f1 = lag_alpha(scenario.fsm1.bandwidth_hz, dt)
    alpha_f2 = lag_alpha(scenario.fsm2.bandwidth_hz, dt)
    g_max_delta = scenario.gimbal.max_rate_rad_s * dt
    g_range_az = scenario.gimbal.azimuth_range_rad
    g_range_p = scenario.gimbal.pitch_range_rad
    f1_range = scenario.fsm1.range_rad
    f2_range = scenario.fsm2.range_rad

    cams = []
    for cam_name in ("cmos0", "cmos1", "cmos2"):
        cam = getattr(scenario, cam_name)
        cams.append((
            0.5 * cam.fov_pitch_rad,
            0.5 * cam.fov_azimuth_rad,
            cam.fov_pitch_rad / cam.pixels,
            cam.fov_azimuth_rad / cam.pixels,
        ))
    (c0_half_p, c0_half_a, c0_pp, c0_pa) = cams[0]
    (c1_half_p, c1_half_a, c1_pp, c1_pa) = cams[1]
    (c2_half_p, c2_half_a, c2_pp, c2_pa) = cams[2]

    bl0_half = 0.5 * scenario.beacon_bl0.divergence_full_angle_rad
    bl1_half = 0.5 * scenario.beacon_bl1.divergence_full_angle_rad
    bl2_half = 0.5 * scenario.beacon_bl2.divergence_full_angle_rad

    gc = scenario.gains_coarse
    g1 = scenario.gains_fsm1
    g2 = scenario.gains_fsm2
    p = scenario.apt
    stab_thresh = p.stabilize_rate_threshold_rad_s

    # acquisition bias split evenly across axes (radial magnitude preserved)
    bias = p.acquisition_bias_rad / math.sqrt(2.0)

    machine = AptStateMachine(p, enable_fine1 and fine_after_s <= 0.0,
                              enable_fine2 and fine_after_s <= 0.0)

    # output buffers
    out_state = np.empty(n, dtype=np.int8)
    out_e2p = np.empty(n)
    out_e2a = np.empty(n)
    out_gaz = np.empty(n)
    out_gp = np.empty(n)
    out_f1p = np.empty(n)
    out_f1a = np.empty(n)
    out_f2p = np.empty(n)
    out_f2a = np.empty(n)
    out_l0 = np.empty(n, dtype=bool)
    out_l1 = np.empty(n, dtype=bool)
    out_l2 = np.empty(n, dtype=bool)

    # plant state
    g_az = g_p = 0.0              # gimbal correction
    f1_p = f1_a = f2_p = f2_a = 0.0   # mirror deflections
    ff_p = ff_a = 0.0             # feedforward command (integrated IMU rate)
    vis_p = vis_a = 0.0           # coarse vision integrators
    i1_p = i1_a = i2_p = i2_a = 0.0   # fine-loop integrators
    pe0_p = pe0_a = 0.0           # previous errors (for D terms)
    pe1_p = pe1_a = pe2_p = pe2_a = 0.0
    # errors as of the previous tick (sensors see these)
    e0_p = e0_a = bias
    e1_p, e1_a = e0_p, e0_a
    e2_p, e2_a = e0_p, e0_a
    prev_g_rate_p = prev_g_rate_a = 0.0

    machine.state = initial_state
    if initial_state == AptState.LINKED:
        e0_p = e0_a = e1_p = e1_a = e2_p = e2_a = 0.0

    n0p, n0a = noise["cmos0"]
    n1p, n1a = noise["cmos1"]
    n2p, n2a = noise["cmos2"]

    floor = math.floor
    hypot = math.hypot

    for i in range(n):
        if fine_after_s > 0.0 and i == int(fine_after_s * TICK_RATE_HZ):
            machine.set_fine_enabled(enable_fine1, enable_fine2)

        # --- sensing (previous-tick errors; one-frame latency) ---
        coarse_radial = hypot(e0_p, e0_a)
        seen0 = coarse_radial <= bl0_half
        seen1 = coarse_radial <= bl1_half
        seen2 = coarse_radial <= bl2_half

        valid0 = seen0 and abs(e0_p) <= c0_half_p and abs(e0_a) <= c0_half_a
        if valid0:
            m0_p = floor(abs(e0_p + n0p[i]) / c0_pp + 0.5) * c0_pp
            m0_p = m0_p if e0_p + n0p[i] >= 0.0 else -m0_p
            m0_a = floor(abs(e0_a + n0a[i]) / c0_pa + 0.5) * c0_pa
            m0_a = m0_a if e0_a + n0a[i] >= 0.0 else -m0_a
            if m0_p > c0_half_p: m0_p = c0_half_p
            elif m0_p < -c0_half_p: m0_p = -c0_half_p
            if m0_a > c0_half_a: m0_a = c0_half_a
            elif m0_a < -c0_half_a: m0_a = -c0_half_a
        else:
            m0_p = m0_a = 0.0

        valid1 = seen1 and abs(e1_p) <= c1_half_p and abs(e1_a) <= c1_half_a
        if valid1:
            m1_p = floor(abs(e1_p + n1p[i]) / c1_pp + 0.5) * c1_pp
            m1_p = m1_p if e1_p + n1p[i] >= 0.0 else -m1_p
            m1_a = floor(abs(e1_a + n1a[i]) / c1_pa + 0.5) * c1_pa
            m1_a = m1_a if e1_a + n1a[i] >= 0.0 else -m1_a
            if m1_p > c1_half_p: m1_p = c1_half_p
            elif m1_p < -c1_half_p: m1_p = -c1_half_p
            if m1_a > c1_half_a: m1_a = c1_half_a
            elif m1_a < -c1_half_a: m1_a = -c1_half_a
        else:
            m1_p = m1_a = 0.0

        valid2 = seen2 and abs(e2_p) <= c2_half_p and abs(e2_a) <= c2_half_a
        if valid2:
            m2_p = floor(abs(e2_p + n2p[i]) / c2_pp + 0.5) * c2_pp
            m2_p = m2_p if e2_p + n2p[i] >= 0.0 else -m2_p
            m2_a = floor(abs(e2_a + n2a[i]) / c2_pa + 0.5) * c2_pa
            m2_a = m2_a if e2_a + n2a[i] >= 0.0 else -m2_a
            if m2_p > c2_half_p: m2_p = c2_half_p
            elif m2_p < -c2_half_p: m2_p = -c2_half_p
            if m2_a > c2_half_a: m2_a = c2_half_a
            elif m2_a < -c2_half_a: m2_a = -c2_half_a
        else:
            m2_p = m2_a = 0.0

        imu_rate_p = rate_pitch[i] + imu_noise_pitch[i]
        imu_rate_a = rate_az[i] + imu_noise_az[i]

        # --- state machine ---
        stab_ok = (abs(prev_g_rate_p - imu_rate_p) < stab_thresh
                   and abs(prev_g_rate_a - imu_rate_a) < stab_thresh)
        state = machine.step(
            stab_ok, valid0, valid1, valid2,
            hypot(m0_p, m0_a), hypot(m2_p, m2_a),
        )
        if state == AptState.REACQUIRE or state == AptState.ACQUIRE:
            vis_p = vis_a = 0.0
            i1_p = i1_a = i2_p = i2_a = 0.0

        coarse_active = state >= AptState.COARSE_TRACK and state != AptState.REACQUIRE
        f1_active = state in (AptState.FINE_TRACK1, AptState.FINE_TRACK2, AptState.LINKED)
        f2_active = state in (AptState.FINE_TRACK2, AptState.LINKED)

        # --- control ---
        if enable_feedforward:
            ff_p += imu_rate_p * dt
            ff_a += imu_rate_a * dt
        if coarse_active:
            cmd_p, vis_p = pid_step(gc.kp, gc.ki, gc.kd, m0_p, vis_p, pe0_p, dt, g_range_p)
            cmd_a, vis_a = pid_step(gc.kp, gc.ki, gc.kd, m0_a, vis_a, pe0_a, dt, g_range_az)
            pe0_p, pe0_a = m0_p, m0_a
        else:
            cmd_p = cmd_a = 0.0
            pe0_p = pe0_a = 0.0
        # integral control carries the absolute vision command; proportional-only
        # configurations steer relative to the current position instead
        if gc.ki > 0.0:
            g_cmd_p = ff_p + cmd_p
            g_cmd_a = ff_a + cmd_a
        else:
            g_cmd_p = g_p + cmd_p
            g_cmd_a = g_az + cmd_a

        if f1_active:
            f1_cmd_p, i1_p = pid_step(g1.kp, g1.ki, g1.kd, m1_p, i1_p, pe1_p, dt, f1_range)
            f1_cmd_a, i1_a = pid_step(g1.kp, g1.ki, g1.kd, m1_a, i1_a, pe1_a, dt, f1_range)
            # command accumulates on the current deflection for proportional action
            f1_cmd_p += f1_p if g1.ki == 0.0 else 0.0
            f1_cmd_a += f1_a if g1.ki == 0.0 else 0.0
            pe1_p, pe1_a = m1_p, m1_a
        else:
            f1_cmd_p = f1_cmd_a = 0.0
            pe1_p = pe1_a = 0.0
        if f2_active:
            f2_cmd_p, i2_p = pid_step(g2.kp, g2.ki, g2.kd, m2_p, i2_p, pe2_p, dt, f2_range)
            f2_cmd_a, i2_a = pid_step(g2.kp, g2.ki, g2.kd, m2_a, i2_a, pe2_a, dt, f2_range)
            f2_cmd_p += f2_p if g2.ki == 0.0 else 0.0
            f2_cmd_a += f2_a if g2.ki == 0.0 else 0.0
            pe2_p, pe2_a = m2_p, m2_a
        else:
            f2_cmd_p = f2_cmd_a = 0.0
            pe2_p = pe2_a = 0.0

        # --- actuators ---
        new_g_p = g_p + alpha_g * (g_cmd_p - g_p)
        dlt = new_g_p - g_p
        if dlt > g_max_delta: new_g_p = g_p + g_max_delta
        elif dlt < -g_max_delta: new_g_p = g_p - g_max_delta
        if new_g_p > g_range_p: new_g_p = g_range_p
        elif new_g_p < -g_range_p: new_g_p = -g_range_p
        prev_g_rate_p = (new_g_p - g_p) / dt
        g_p = new_g_p

        new_g_a = g_az + alpha_g * (g_cmd_a - g_az)
        dlt = new_g_a - g_az
        if dlt > g_max_delta: new_g_a = g_az + g_max_delta
        elif dlt < -g_max_delta: new_g_a = g_az - g_max_delta
        if new_g_a > g_range_az: new_g_a = g_range_az
        elif new_g_a < -g_range_az: new_g_a = -g_range_az
        prev_g_rate_a = (new_g_a - g_az) / dt
        g_az = new_g_a

        f1_p += alpha_f1 * (f1_cmd_p - f1_p)
        if f1_p > f1_range: f1_p = f1_range
        elif f1_p < -f1_range: f1_p = -f1_range
        f1_a += alpha_f1 * (f1_cmd_a - f1_a)
        if f1_a > f1_range: f1_a = f1_range
        elif f1_a < -f1_range: f1_a = -f1_range

        f2_p += alpha_f2 * (f2_cmd_p - f2_p)
        if f2_p > f2_range: f2_p = f2_range
        elif f2_p < -f2_range: f2_p = -f2_range
        f2_a += alpha_f2 * (f2_cmd_a - f2_a)
        if f2_a > f2_range: f2_a = f2_range
        elif f2_a < -f2_range: f2_a = -f2_range

        # --- new errors ---
        e0_p = bias + base_pitch[i] - g_p
        e0_a = bias + base_az[i] - g_az
        e1_p = e0_p - f1_p
        e1_a = e0_a - f1_a
        e2_p = e1_p - f2_p
        e2_a = e1_a - f2_a

        out_state[i] = state
        out_e2p[i] = e2_p
        out_e2a[i] = e2_a
        out_gaz[i] = g_az
        out_gp[i] = g_p
        out_f1p[i] = f1_p
        out_f1a[i] = f1_a
        out_f2p[i] = f2_p
        out_f2a[i] = f2_a
        out_l0[i] = valid0
        out_l1[i] = valid1
        out_l2[i] = valid2

    return TrackingSeries(
        t_s=np.arange(n) / TICK_RATE_HZ,
        state=out_state,
        error_pitch_rad=out_e2p,
        error_azimuth_rad=out_e2a,
        gimbal_azimuth_rad=out_gaz,
        gimbal_pitch_rad=out_gp,
        fsm1_pitch_rad=out_f1p,
        fsm1_azimuth_rad=out_f1a,
        fsm2_pitch_rad=out_f2p,
        fsm2_azimuth_rad=out_f2a,
        lock0=out_l0,
        lock1=out_l1,
        lock2=out_l2,
        scenario_name=scenario.name,
        scenario_digest=scenario.digest,
        seed=seed,
    )
