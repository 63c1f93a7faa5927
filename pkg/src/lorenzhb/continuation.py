"""Harmonic-count continuation.

A cycle solved at a small harmonic count is lifted (zero-padded) to serve
as the Newton starting point at the next larger count, which keeps each
solve inside the basin of the previous one.  The stock starting guess at
h=5 is the one known to pull Newton away from the equilibrium family:

    omega = 4,  x10 = x20 = x30 = 0,
    c1_i = -1 for i = 1..5,  s1_2 = 1,  every other amplitude 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import trigpoly as tp
from .hbsystem import (
    HarmonicSolution,
    LorenzParams,
    ResidualSystem,
    flip_frequency_sign,
    mirror_x1_x2,
    pack,
    project_cycle_parity,
    unknown_count,
    unpack,
)
from .newton import (
    NewtonConfig,
    NewtonReport,
    SolutionClass,
    classify_vector,
    newton_solve,
)

OMEGA_FLOOR = 1e-6  # frequencies below this mark a degenerate (non-cycle) root

log = logging.getLogger(__name__)

__all__ = [
    "ContinuationSchedule",
    "ContinuationError",
    "ContinuationResult",
    "initial_guess_h5",
    "lift",
    "run",
]

DEFAULT_STEPS = (5, 10, 15, 20, 25, 30, 35)


class ContinuationError(RuntimeError):
    """A continuation step failed; carries the harmonic count that broke."""

    def __init__(self, h: int, message: str, reports=None):
        super().__init__(f"continuation failed at h={h}: {message}")
        self.h = h
        self.reports = list(reports or [])


@dataclass(frozen=True)
class ContinuationSchedule:
    steps: tuple[int, ...] = DEFAULT_STEPS
    cfg: NewtonConfig = field(default_factory=NewtonConfig)

    def __post_init__(self):
        steps = tuple(int(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps or steps[0] < 1:
            raise ValueError("schedule needs at least one step with h >= 1")
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError(f"harmonic counts must be strictly increasing: {steps}")


@dataclass
class ContinuationResult:
    solution: HarmonicSolution
    reports: list[NewtonReport]
    step_solutions: list[HarmonicSolution]


def initial_guess_h5() -> np.ndarray:
    """The stock h=5 starting vector described above."""
    h = 5
    u = np.zeros(unknown_count(h))
    u[0] = 4.0
    u[4 : 4 + h] = -1.0  # c1_.. block
    u[4 + h + 1] = 1.0   # s1_2
    return u


def lift(u: np.ndarray, h_to: int) -> np.ndarray:
    """Zero-pad an unknown vector up to h_to harmonics.

    The source harmonic count is read off the vector length, 6h+4.
    """
    if (len(u) - 4) % 6 != 0:
        raise ValueError(f"vector length {len(u)} is not of the form 6h+4")
    h_from = (len(u) - 4) // 6
    if h_to < h_from:
        raise ValueError(f"cannot lift from h={h_from} down to h={h_to}")
    sol = unpack(u, h_from)
    lifted = HarmonicSolution(
        sol.omega,
        tp.pad(sol.x1, h_to),
        tp.pad(sol.x2, h_to),
        tp.pad(sol.x3, h_to),
    )
    return pack(lifted)


def run(
    params: LorenzParams,
    schedule: ContinuationSchedule,
    u0: np.ndarray,
    anchor: float | None = None,
    symmetrize_seed: bool = True,
) -> ContinuationResult:
    """Chain Newton solves over the schedule, lifting between steps.

    With symmetrize_seed on (the default) the seed is first projected onto
    the target cycle's parity pattern.  The raw stock guess carries
    parity-violating components (s1_2 and the even cosines) that throw the
    undamped iteration into degenerate frequency-zero varieties; inside
    the parity subspace, which Newton preserves exactly, those sinks are
    starved and the iteration lands on the cycle.  Pass False to use the
    seed verbatim, e.g. when hunting asymmetric orbits.

    Converged frequencies are normalized to omega > 0 through the exact
    (omega, sines) relabeling.  A symmetric run is also rotated to the
    conventional section phase right after the first solve (and once more
    at the end): t=0 at a descending anchor crossing with x1(0) < 0, the
    mirror map picking between the two crossings of one orbit.

    Any step that fails to converge, collapses onto the equilibrium
    family, or leaves no usable frequency aborts the whole run: continuing
    past a basin escape would silently corrupt everything downstream.
    """
    steps = schedule.steps
    if len(u0) != unknown_count(steps[0]):
        raise ValueError(
            f"u0 has length {len(u0)}, expected {unknown_count(steps[0])} for h={steps[0]}"
        )

    reports: list[NewtonReport] = []
    step_solutions = []
    u = np.asarray(u0, dtype=float)
    if symmetrize_seed:
        u = project_cycle_parity(u)
    h_prev = steps[0]
    for h in steps:
        if h != h_prev:
            u = lift(u, h)
        sys = ResidualSystem(params, h, anchor=anchor)
        u, report = newton_solve(sys, u, schedule.cfg)
        reports.append(report)
        log.info(
            "continuation h=%d: %s in %d iterations, |F|=%.3e",
            h,
            report.status.value,
            report.iterations,
            report.final_residual_norm,
        )
        if not report.converged:
            raise ContinuationError(h, f"Newton ended with {report.status.value}", reports)
        if report.classification is SolutionClass.EQUILIBRIUM_FAMILY:
            raise ContinuationError(h, "collapsed onto the equilibrium family", reports)
        if u[0] < 0.0:
            u = flip_frequency_sign(u)
        if u[0] <= OMEGA_FLOOR:
            raise ContinuationError(h, f"degenerate frequency omega={u[0]:.3e}", reports)
        if symmetrize_seed and (h == steps[0] or h == steps[-1]):
            u = _canonical_phase(sys, u, schedule.cfg)
        report.classification = classify_vector(u, report.status)
        step_solutions.append(unpack(u, h))
        h_prev = h

    return ContinuationResult(step_solutions[-1], reports, step_solutions)


def _anchor_crossing(sol: HarmonicSolution, anchor: float) -> float | None:
    """Time in [0, T) of a descending crossing of x3 through the anchor."""
    w = sol.omega
    period = 2.0 * np.pi / w
    x3 = sol.x3
    ts = np.linspace(0.0, period, 4097)
    k = np.arange(1, x3.h + 1)
    phases = np.outer(k * w, ts)
    vals = x3.a0 + x3.a @ np.cos(phases) + x3.b @ np.sin(phases) - anchor

    f = lambda t: tp.evaluate(x3, w, t) - anchor
    for a, b, fa, fb in zip(ts, ts[1:], vals, vals[1:]):
        if fa > 0.0 >= fb:  # descending crossing bracketed
            lo, hi = a, b
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if f(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    return None


def _canonical_phase(sys: ResidualSystem, u: np.ndarray, cfg: NewtonConfig) -> np.ndarray:
    """Report the cycle at its conventional section crossing.

    The anchor plane x3 = anchor is crossed several times per period; the
    convention here takes t=0 at a descending crossing (x3' < 0) with
    x1(0) < 0.  The solution is rotated there by an exact per-harmonic
    time shift, re-polished, and mirrored if the wrong sign came out.
    """
    h = sys.h
    sol = unpack(u, h)
    tau = _anchor_crossing(sol, sys.anchor)
    if tau is None:
        raise ContinuationError(h, "no descending anchor crossing found")
    w = sol.omega
    if not tp.evaluate(tp.differentiate(sol.x3, w), w, tau) < 0.0:
        raise ContinuationError(h, "anchor crossing is not descending")

    shifted = HarmonicSolution(
        w,
        tp.time_shift(sol.x1, w, tau),
        tp.time_shift(sol.x2, w, tau),
        tp.time_shift(sol.x3, w, tau),
    )
    u2, report = newton_solve(sys, pack(shifted), cfg)
    if not report.converged:
        raise ContinuationError(h, "re-polish at the canonical crossing diverged")
    if u2[0] < 0.0:
        u2 = flip_frequency_sign(u2)
    if unpack(u2, h).state_at(0.0)[0] > 0.0:
        u2 = mirror_x1_x2(u2)
    return u2
