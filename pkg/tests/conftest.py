import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_mass(rng, shape, zero_prob=0.2):
    w = rng.exponential(size=shape)
    w[rng.random(shape) < zero_prob] = 0.0
    if w.sum() == 0:
        w.flat[0] = 1.0
    return w / w.sum()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
