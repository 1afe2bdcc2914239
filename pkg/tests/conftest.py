import math

import pytest

from entrobounds import densities as dn


@pytest.fixture(scope="session")
def std_normal():
    return dn.gaussian(0.0, 1.0)


@pytest.fixture(scope="session")
def unit_uniform():
    return dn.uniform(0.0, 1.0)


@pytest.fixture(scope="session")
def triangle():
    u = dn.uniform(0.0, 1.0)
    return dn.convolve(u, u)


def triangle_pdf(x: float) -> float:
    """Analytic density of the sum of two independent U[0,1]."""
    if 0.0 <= x <= 1.0:
        return x
    if 1.0 < x <= 2.0:
        return 2.0 - x
    return 0.0


def gen_normal_entropy(alpha: float, v: float, n: int = 1) -> float:
    """Closed-form entropy of the exponential-power density, via the
    scipy gamma function (independent of the package's own gamma)."""
    from scipy.special import gamma as sp_gamma

    return n / alpha + n * math.log(
        2.0 * sp_gamma(1.0 + 1.0 / alpha) * (alpha * v / n) ** (1.0 / alpha)
    )
