import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pointspec.config import Configuration, validate

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_config(seed: int, n: int, spread: float = 1.0, min_sep: float = 0.2) -> Configuration:
    """Centers drawn until pairwise separations exceed ``min_sep``; alphas uniform in [-1, 1]."""
    rng = np.random.default_rng(seed)
    while True:
        y = rng.normal(scale=spread, size=(n, 3))
        d = np.linalg.norm(y[:, None] - y[None], axis=-1) + np.eye(n) * 1e9
        if d.min() > min_sep:
            break
    return validate(Configuration(y, rng.uniform(-1, 1, size=n), f"random({seed})"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
