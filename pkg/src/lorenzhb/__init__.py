"""Harmonic-balance computation of periodic orbits of the Lorenz system.

Each phase coordinate is approximated by a trigonometric polynomial with
an unknown fundamental frequency; projecting the flow's defect onto the
retained harmonics yields a closed algebraic system solved by Newton's
method with continuation in the harmonic count.  Candidate cycles are
verified independently by an extended-precision Taylor-series integrator
run forward and backward over one period.
"""

__version__ = "0.1.0"

from .continuation import (
    ContinuationError,
    ContinuationResult,
    ContinuationSchedule,
    initial_guess_h5,
    lift,
    run,
)
from .hbsystem import (
    HarmonicSolution,
    LorenzParams,
    ResidualSystem,
    equilibrium_solution,
    pack,
    unpack,
)
from .newton import (
    NewtonConfig,
    NewtonReport,
    NewtonStatus,
    SolutionClass,
    newton_solve,
)
from .solution_io import SolutionFile, load_solution, save_solution
from .taylor_verify import TaylorConfig, VerificationReport, integrate, verify_cycle
from .trigpoly import TrigPolynomial

__all__ = [
    "__version__",
    "TrigPolynomial",
    "LorenzParams",
    "HarmonicSolution",
    "ResidualSystem",
    "equilibrium_solution",
    "pack",
    "unpack",
    "NewtonConfig",
    "NewtonReport",
    "NewtonStatus",
    "SolutionClass",
    "newton_solve",
    "ContinuationSchedule",
    "ContinuationResult",
    "ContinuationError",
    "initial_guess_h5",
    "lift",
    "run",
    "TaylorConfig",
    "VerificationReport",
    "integrate",
    "verify_cycle",
    "SolutionFile",
    "save_solution",
    "load_solution",
]
