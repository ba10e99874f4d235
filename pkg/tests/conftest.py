import pytest
from hypothesis import settings

from expsmooth import kernels

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    """Every importable kernel module, compiled and pure Python."""
    return kernels.backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
