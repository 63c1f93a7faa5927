"""Dense Newton iteration with LU-backed linear solves.

The Jacobian is factored with partial pivoting (largest column magnitude,
ties to the lowest row index) and never inverted; each step solves the
linear system J du = F.  Convergence is judged on the residual max-norm.
A converged result is classified as a genuine cycle or as a member of the
zero-amplitude equilibrium family by the size of its amplitude entries.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

log = logging.getLogger(__name__)

__all__ = [
    "NewtonConfig",
    "NewtonReport",
    "NewtonStatus",
    "SolutionClass",
    "SingularMatrixError",
    "LUFactors",
    "lu_factor",
    "classify_vector",
    "lu_solve",
    "newton_solve",
]

AMPLITUDE_FLOOR = 1e-6  # below this max amplitude a result counts as equilibrium


class NewtonStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    SINGULAR_JACOBIAN = "SingularJacobian"


class SolutionClass(enum.Enum):
    CYCLE = "Cycle"
    EQUILIBRIUM_FAMILY = "EquilibriumFamily"
    UNKNOWN = "Unknown"


class SingularMatrixError(RuntimeError):
    """Raised by lu_factor when elimination meets an exactly zero pivot."""


@dataclass(frozen=True)
class NewtonConfig:
    tol: float = 1e-8
    max_iter: int = 200
    step_damping: float = 1.0

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not 0.0 < self.step_damping <= 1.0:
            raise ValueError("step_damping must lie in (0, 1]")


@dataclass
class NewtonReport:
    status: NewtonStatus
    iterations: int
    final_residual_norm: float
    classification: SolutionClass
    condition_estimate: float = float("nan")
    residual_history: list[float] = field(default_factory=list)
    slow_convergence: bool = False

    @property
    def converged(self) -> bool:
        return self.status is NewtonStatus.CONVERGED


@dataclass(frozen=True)
class LUFactors:
    """P A = L U factorization handle (unit-diagonal L, partial pivoting)."""

    lu: np.ndarray
    piv: np.ndarray

    @property
    def n(self) -> int:
        return self.lu.shape[0]


def lu_factor(a: np.ndarray) -> LUFactors:
    """Factor a square matrix; an exactly zero pivot raises SingularMatrixError."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # scipy warns instead of raising on U[i,i]=0
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    diag = np.diagonal(lu)
    if np.any(diag == 0.0):
        k = int(np.nonzero(diag == 0.0)[0][0])
        raise SingularMatrixError(f"zero pivot at elimination step {k}")
    return LUFactors(lu, piv)


def lu_solve(factors: LUFactors, rhs: np.ndarray, transposed: bool = False) -> np.ndarray:
    """Solve A y = rhs (or A^T y = rhs) from an existing factorization."""
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (factors.n,):
        raise ValueError(f"rhs length {rhs.shape} does not match matrix size {factors.n}")
    return scipy.linalg.lu_solve(
        (factors.lu, factors.piv), rhs, trans=1 if transposed else 0, check_finite=False
    )


def estimate_condition_1norm(a_norm1: float, factors: LUFactors) -> float:
    """1-norm condition estimate via the classic power method on A^-1.

    Hager-style iteration: alternately solve with A and A^T, steering the
    probe vector toward the column of A^-1 with the largest 1-norm.  Cheap
    (a few solves) and typically correct to within a small factor, which is
    all the logging use demands.
    """
    n = factors.n
    x = np.full(n, 1.0 / n)
    est = 0.0
    for _ in range(5):
        y = lu_solve(factors, x)
        est = float(np.abs(y).sum())
        xi = np.where(y >= 0.0, 1.0, -1.0)
        z = lu_solve(factors, xi, transposed=True)
        j = int(np.argmax(np.abs(z)))
        if np.abs(z[j]) <= z @ x:
            break
        x = np.zeros(n)
        x[j] = 1.0
    return a_norm1 * est


def classify_vector(u: np.ndarray, status: NewtonStatus) -> SolutionClass:
    """Equilibrium family on vanishing amplitudes, cycle on a converged
    positive-frequency result, unknown otherwise."""
    amp_norm = float(np.max(np.abs(u[4:]))) if u.size > 4 else 0.0
    if amp_norm < AMPLITUDE_FLOOR:
        return SolutionClass.EQUILIBRIUM_FAMILY
    if status is NewtonStatus.CONVERGED and u[0] > 0.0:
        return SolutionClass.CYCLE
    return SolutionClass.UNKNOWN


def _slow_convergence(history: list[float]) -> bool:
    # quadratic-rate sanity check over the last few recorded norms
    tail = history[-4:]
    for prev, cur in zip(tail, tail[1:]):
        if prev > 1e-100 and cur / prev**2 >= 1e6:
            return True
    return False


def newton_solve(sys, u0: np.ndarray, cfg: NewtonConfig = NewtonConfig()):
    """Run Newton's method on sys.residual / sys.jacobian from u0.

    Returns (u, NewtonReport).  The iteration is undamped unless
    cfg.step_damping says otherwise, stops as soon as the residual
    max-norm drops to cfg.tol, and reports SingularJacobian if elimination
    hits an exactly zero pivot while a step is still needed.
    """
    u = np.array(u0, dtype=float, copy=True)
    history: list[float] = []
    status = NewtonStatus.MAX_ITERATIONS
    iterations = 0

    for _ in range(cfg.max_iter + 1):
        f = sys.residual(u)
        norm = float(np.max(np.abs(f)))
        history.append(norm)
        if norm <= cfg.tol:
            status = NewtonStatus.CONVERGED
            break
        if iterations >= cfg.max_iter:
            status = NewtonStatus.MAX_ITERATIONS
            break
        jac = sys.jacobian(u)
        try:
            factors = lu_factor(jac)
        except SingularMatrixError as err:
            log.warning("newton: %s at iteration %d", err, iterations)
            status = NewtonStatus.SINGULAR_JACOBIAN
            break
        du = lu_solve(factors, f)
        u -= cfg.step_damping * du
        iterations += 1

    # condition estimate at the final point, for the record only
    try:
        jac = sys.jacobian(u)
        cond = estimate_condition_1norm(
            float(np.max(np.abs(jac).sum(axis=0))), lu_factor(jac)
        )
    except SingularMatrixError:
        cond = float("inf")

    report = NewtonReport(
        status=status,
        iterations=iterations,
        final_residual_norm=history[-1],
        classification=classify_vector(u, status),
        condition_estimate=cond,
        residual_history=history,
        slow_convergence=status is NewtonStatus.CONVERGED and _slow_convergence(history),
    )
    log.info(
        "newton: %s after %d iterations, |F|=%.3e, cond~%.2e, class=%s",
        report.status.value,
        report.iterations,
        report.final_residual_norm,
        report.condition_estimate,
        report.classification.value,
    )
    return u, report
