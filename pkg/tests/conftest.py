import math

import pytest

from wvlab import (ConstantDriver, MathieuDriver, PhysicalParams,
                   SinSquaredDriver, sigma_eval)


@pytest.fixture(scope="session")
def params():
    return PhysicalParams(m=1.0, hbar=1.0, hbar2=1.0)


@pytest.fixture(scope="session")
def static_driver(params):
    return ConstantDriver.from_frequency(1.0, params)


@pytest.fixture(scope="session")
def static_state(static_driver, params):
    return sigma_eval(static_driver, params, 0.0)


@pytest.fixture(scope="session")
def sin2_driver():
    return SinSquaredDriver(sigma0=1.0, varpi0=1.0)


@pytest.fixture(scope="session")
def sin2_gentle():
    # slower modulation keeps phase-rotation rates low enough for the
    # 1e-5 residual budget at dt = 1e-3
    return SinSquaredDriver(sigma0=1.0, varpi0=0.5)


@pytest.fixture(scope="session")
def mathieu_driver(params):
    driver = MathieuDriver(a=1.0, g=0.2)
    driver.trajectory(params, 5.0 * math.pi + 1.0)  # warm the cache once
    return driver
