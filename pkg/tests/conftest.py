import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from focusfocus.core import InvariantPolynomial, ModelParams

settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

# a cubic with every monomial of degree <= 3 that matters for S1, S2 and their mixed partials
GENERIC_S = InvariantPolynomial.from_coeffs(
    {(1, 0): 0.3, (0, 1): -0.2, (2, 0): 0.5, (1, 1): 0.4, (3, 0): 0.7, (0, 3): 0.6}
)
# the classification-generic instance used by the suite examples
SUITE_S = InvariantPolynomial.from_coeffs({(1, 0): 0.3, (0, 1): 0.2, (1, 1): 0.1})


@pytest.fixture
def zero_params():
    return ModelParams(epsilon=0.1, delta=0.3)


@pytest.fixture
def generic_params():
    return ModelParams(epsilon=0.1, delta=0.3, invariant=GENERIC_S)


@pytest.fixture(params=["zero", "generic"])
def any_params(request):
    inv = InvariantPolynomial.zero() if request.param == "zero" else GENERIC_S
    return ModelParams(epsilon=0.1, delta=0.3, invariant=inv)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def cclose(a, b, tol=1e-12):
    return abs(complex(a) - complex(b)) <= tol


def pt_close(pt, p, q, tol=1e-12):
    return cclose(pt.p, p, tol) and cclose(pt.q, q, tol)


LN2 = math.log(2.0)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, name: str, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d} {name:34s} {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
