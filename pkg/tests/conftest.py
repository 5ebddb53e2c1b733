import pytest

from meshlink import phy
from meshlink.presets import power_by_name, preset_by_name


@pytest.fixture
def emp_model():
    return phy.default_radio_model(phy.EMPIRICAL)


@pytest.fixture
def ds_model():
    return phy.default_radio_model(phy.DATASHEET)


@pytest.fixture
def long_slow():
    return preset_by_name("LongSlow")


@pytest.fixture
def short_turbo():
    return preset_by_name("ShortTurbo")


@pytest.fixture
def max_power():
    return power_by_name("Max")
