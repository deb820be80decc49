import numpy as np
import pytest
from hypothesis import settings

from openxxz import _kernels
from openxxz.algebra import make_params

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(params=BACKENDS)
def kernel_backend(request):
    with _kernels.backend_ctx(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def params3():
    return make_params(0.3, 0.7, 0.2, 3)


def random_lambda(rng):
    return complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
