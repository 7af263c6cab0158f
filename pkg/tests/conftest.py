import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qbs.aqp import TableData
from qbs.bootstrap import SampleResults

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def alternating_sample() -> SampleResults:
    """Eight tuple results, half ones, f = 0.5."""
    return SampleResults((0, 1, 0, 1, 0, 1, 0, 1), population_size=16)


@pytest.fixture
def make_flag_table():
    """Synthetic (id, flag) tables with an exact number of flag=1 rows."""

    def build(total_rows: int, ones: int, shuffle_seed: int | None = None) -> TableData:
        flags = np.zeros(total_rows, dtype=int)
        flags[:ones] = 1
        if shuffle_seed is not None:
            np.random.Generator(np.random.PCG64(shuffle_seed)).shuffle(flags)
        rows = tuple((i, int(flag)) for i, flag in enumerate(flags))
        return TableData(("id", "flag"), rows)

    return build
