import numpy as np
import pytest

from vlasovwave.grid import build_grid
from vlasovwave.presets import InitialData, make_profile_1d, make_profile_2d


def desk_initial_data(v_center=0.5):
    return InitialData(
        f0=make_profile_2d("bump2d", 0.0, 1.0, v_center, 1.0, 1.0),
        a0=make_profile_1d("zero"),
        a1=make_profile_1d("zero"))


def desk_grid(nx, nv=None, t_final=5.0, init=None):
    init = init or desk_initial_data()
    return build_grid(-6.0, 6.0, -4.0, 4.0, nx, nv or nx, t_final,
                      support_x=init.field_data_support_x(),
                      support_v=init.f0.support_v())


@pytest.fixture(scope="session")
def small_coupled_run():
    """Coupled desk-preset run at nx=64, reused by several test modules."""
    from vlasovwave.coupling import run
    init = desk_initial_data()
    grid = desk_grid(64, init=init)
    return run(grid, init), init, grid


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
