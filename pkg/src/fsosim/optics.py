"""Optical link budget: Gaussian-beam diffraction, visibility attenuation, fiber coupling.

All lengths in meters, angles in radians, losses in positive dB.  The Kim
visibility model works in km and nm internally; conversion happens at the
boundary of `atmospheric_loss_db`.

The total budget is additive in dB:

    total = diffraction + optics insertion + atmosphere
            + fiber-coupling base + pointing-jitter excess
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# exact conversion from base-e extinction to dB
DB_PER_NEPER = 10.0 / math.log(10.0)

# Kim model reference wavelength [nm]
_KIM_REFERENCE_NM = 550.0


@dataclass(frozen=True)
class AntennaSpec:
    """Transmit/receive telescope: Cassegrain aperture plus internal losses."""

    aperture_diameter_m: float = 0.090
    magnification: float = 10.0
    insertion_loss_db: float = 0.0

    def __post_init__(self) -> None:
        if self.aperture_diameter_m <= 0.0:
            raise ValueError("aperture_diameter_m must be positive")
        if self.magnification <= 0.0:
            raise ValueError("magnification must be positive")
        if self.insertion_loss_db < 0.0:
            raise ValueError("insertion_loss_db must be >= 0")

    @property
    def aperture_radius_m(self) -> float:
        return 0.5 * self.aperture_diameter_m


@dataclass(frozen=True)
class BeamModel:
    """Fundamental-mode Gaussian beam launched from the transmit aperture."""

    wavelength_m: float
    waist_radius_m: float

    def __post_init__(self) -> None:
        if self.wavelength_m <= 0.0:
            raise ValueError("wavelength_m must be positive")
        if self.waist_radius_m <= 0.0:
            raise ValueError("waist_radius_m must be positive")

    @property
    def rayleigh_range_m(self) -> float:
        return math.pi * self.waist_radius_m**2 / self.wavelength_m


@dataclass(frozen=True)
class AtmosphereModel:
    """Clear-air/haze/fog extinction parameterized by meteorological visibility.

    visibility_m may be math.inf for a lossless path.
    """

    visibility_m: float
    wavelength_m: float

    def __post_init__(self) -> None:
        if not (self.visibility_m > 0.0):
            raise ValueError("visibility_m must be positive (math.inf allowed)")
        if self.wavelength_m <= 0.0:
            raise ValueError("wavelength_m must be positive")


@dataclass(frozen=True)
class CouplingModel:
    """Single-mode-fiber coupling: flat base loss plus quadratic-in-dB rolloff.

    rolloff_halfwidth_rad is the radial pointing error at which the coupling
    penalty reaches one neper (+4.343 dB) above base.
    """

    base_coupling_loss_db: float
    rolloff_halfwidth_rad: float

    def __post_init__(self) -> None:
        if self.base_coupling_loss_db <= 0.0:
            raise ValueError("base_coupling_loss_db must be positive")
        if self.rolloff_halfwidth_rad <= 0.0:
            raise ValueError("rolloff_halfwidth_rad must be positive")


@dataclass(frozen=True)
class LinkBudget:
    """Additive dB budget; total_db is the exact sum of the five terms."""

    diffraction_db: float
    optics_db: float
    atmosphere_db: float
    coupling_base_db: float
    jitter_excess_db: float
    total_db: float


def far_field_divergence(beam: BeamModel) -> float:
    """Far-field half-angle divergence of the Gaussian beam: lambda / (pi w0)."""
    return beam.wavelength_m / (math.pi * beam.waist_radius_m)


def beam_radius_m(beam: BeamModel, distance_m: float) -> float:
    """1/e^2 intensity radius after propagating distance_m."""
    if distance_m < 0.0:
        raise ValueError("distance_m must be >= 0")
    return beam.waist_radius_m * math.sqrt(1.0 + (distance_m / beam.rayleigh_range_m) ** 2)


def diffraction_loss_db(
    beam: BeamModel, tx: AntennaSpec, rx: AntennaSpec, distance_m: float
) -> float:
    """Geometric capture loss of the expanded beam at the receive aperture.

    The captured power fraction of a Gaussian of radius w(z) over a circular
    aperture of radius a is 1 - exp(-2 a^2 / w(z)^2).  At distance 0 all
    transmitted power is inside the (co-located) aperture and the loss is 0
    by convention.
    """
    if beam.waist_radius_m > tx.aperture_radius_m:
        raise ValueError("waist_radius_m exceeds transmit aperture radius")
    if distance_m < 0.0:
        raise ValueError("distance_m must be >= 0")
    if distance_m == 0.0:
        return 0.0
    w = beam_radius_m(beam, distance_m)
    a = rx.aperture_radius_m
    captured = 1.0 - math.exp(-2.0 * a * a / (w * w))
    return -10.0 * math.log10(captured)


def kim_size_exponent(visibility_m: float) -> float:
    """Particle-size exponent q of the Kim visibility model (piecewise in V)."""
    v_km = visibility_m / 1000.0
    if v_km > 50.0:
        return 1.6
    if v_km > 6.0:
        return 1.3
    if v_km > 1.0:
        return 0.16 * v_km + 0.34
    if v_km > 0.5:
        return v_km - 0.5
    return 0.0


def atmospheric_loss_db(atm: AtmosphereModel, distance_m: float) -> float:
    """Kim-model extinction over the path, in dB.

    beta = (3.912 / V_km) (lambda_nm / 550)^-q  [1/km], loss = 4.343 beta d.
    """
    if distance_m < 0.0:
        raise ValueError("distance_m must be >= 0")
    if math.isinf(atm.visibility_m):
        return 0.0
    v_km = atm.visibility_m / 1000.0
    lam_nm = atm.wavelength_m * 1e9
    q = kim_size_exponent(atm.visibility_m)
    beta_per_km = (3.912 / v_km) * (lam_nm / _KIM_REFERENCE_NM) ** (-q)
    return DB_PER_NEPER * beta_per_km * (distance_m / 1000.0)


def coupling_loss_db(cm: CouplingModel, radial_error_rad: float) -> float:
    """Fiber-coupling loss at a given radial pointing error.

    base + 4.343 (err / theta_c)^2, i.e. a Gaussian overlap expressed in dB.
    """
    if radial_error_rad < 0.0:
        raise ValueError("radial_error_rad must be >= 0")
    ratio = radial_error_rad / cm.rolloff_halfwidth_rad
    return cm.base_coupling_loss_db + DB_PER_NEPER * ratio * ratio


def jitter_excess_db(cm: CouplingModel, radial_error_rad: float) -> float:
    """Coupling penalty above the base loss for a radial pointing error."""
    return coupling_loss_db(cm, radial_error_rad) - cm.base_coupling_loss_db


def link_budget(
    beam: BeamModel,
    tx: AntennaSpec,
    rx: AntennaSpec,
    atm: AtmosphereModel,
    cm: CouplingModel,
    distance_m: float,
    radial_error_rad: float = 0.0,
) -> LinkBudget:
    """Full additive budget at one distance and instantaneous pointing error."""
    diffraction = diffraction_loss_db(beam, tx, rx, distance_m)
    optics = tx.insertion_loss_db + rx.insertion_loss_db
    atmosphere = atmospheric_loss_db(atm, distance_m)
    excess = jitter_excess_db(cm, radial_error_rad)
    total = diffraction + optics + atmosphere + cm.base_coupling_loss_db + excess
    return LinkBudget(
        diffraction_db=diffraction,
        optics_db=optics,
        atmosphere_db=atmosphere,
        coupling_base_db=cm.base_coupling_loss_db,
        jitter_excess_db=excess,
        total_db=total,
    )


def distance_sweep(
    beam: BeamModel,
    tx: AntennaSpec,
    rx: AntennaSpec,
    atm: AtmosphereModel,
    cm: CouplingModel,
    d_min_m: float,
    d_max_m: float,
    steps: int,
) -> list[tuple[float, float, float]]:
    """Sampled (distance_m, diffraction_db, total_static_db) rows.

    total_static_db is the propagation-path loss: diffraction plus optics
    insertion plus atmosphere.  Receiver-side fiber-coupling terms and the
    pointing-jitter excess are excluded; they do not depend on distance.
    Distances are linearly spaced, endpoints included.
    """
    if not (0.0 < d_min_m <= d_max_m):
        raise ValueError("require 0 < d_min_m <= d_max_m")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    rows = []
    span = d_max_m - d_min_m
    for i in range(steps):
        d = d_min_m + span * i / (steps - 1)
        budget = link_budget(beam, tx, rx, atm, cm, d, 0.0)
        static = budget.diffraction_db + budget.optics_db + budget.atmosphere_db
        rows.append((d, budget.diffraction_db, static))
    return rows
