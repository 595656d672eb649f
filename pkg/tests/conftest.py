import mpmath
import pytest

from jacdecomp import numerics


@pytest.fixture(autouse=True)
def _restore_numeric_config():
    prec = mpmath.mp.prec
    eps = numerics.epsilon()
    yield
    mpmath.mp.prec = prec
    numerics.set_epsilon(eps)
