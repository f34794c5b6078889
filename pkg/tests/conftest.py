import copy

import pytest

from fsosim import default_scenario, resolve_scenario
from fsosim.scenario import DEFAULTS


@pytest.fixture(scope="session")
def scenario():
    return default_scenario()


def make_scenario(**overrides):
    """Resolved scenario from the defaults with dotted-path overrides.

    make_scenario(**{"cmos0.centroid_noise_urad": 0.0}) patches one leaf.
    """
    raw = copy.deepcopy(DEFAULTS)
    for dotted, value in overrides.items():
        node = raw
        *parents, leaf = dotted.split(".")
        for key in parents:
            node = node[key]
        node[leaf] = value
    return resolve_scenario(raw)


def zero_noise_overrides():
    """Overrides that remove every stochastic term from the defaults."""
    return {
        "cmos0.centroid_noise_urad": 0.0,
        "cmos1.centroid_noise_urad": 0.0,
        "cmos2.centroid_noise_urad": 0.0,
        "imu.rate_noise_urad_s": 0.0,
        "disturbance.pitch.noise_rms_urad": 0.0,
        "disturbance.azimuth.noise_rms_urad": 0.0,
        "disturbance.pitch.sinusoids": [],
        "disturbance.azimuth.sinusoids": [],
    }


@pytest.fixture(scope="session")
def zero_noise_scenario():
    return make_scenario(**zero_noise_overrides())
