import pytest

from lorenzhb.continuation import ContinuationSchedule, initial_guess_h5, run
from lorenzhb.hbsystem import LorenzParams
from lorenzhb.taylor_verify import TaylorConfig, verify_cycle


@pytest.fixture(scope="session")
def params():
    return LorenzParams()


@pytest.fixture(scope="session")
def default_result(params):
    """The default pipeline run (stock guess, schedule 5..35), solved once."""
    return run(params, ContinuationSchedule(), initial_guess_h5())


@pytest.fixture(scope="session")
def cycle_solution(default_result):
    return default_result.solution


@pytest.fixture(scope="session")
def verification(cycle_solution, params):
    """Extended-precision round trip of the default solution, run once."""
    return verify_cycle(cycle_solution, TaylorConfig(), params)
