import pytest

from sympb import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Compile the jitted kernels once so per-test timings measure the
    # algorithms, not compilation.
    kernels.warm_up()
