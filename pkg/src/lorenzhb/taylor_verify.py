"""Independent cycle verification by extended-precision Taylor integration.

A candidate cycle is checked against the flow itself: its t=0 state is
integrated forward over one period and the endpoint compared with the
start, then integrated backward from the endpoint as a second opinion.
The integrator builds local Taylor series from the recurrences implied by
the quadratic right-hand side,

    (k+1) x1_{k+1} = sigma (x2_k - x1_k)
    (k+1) x2_{k+1} = r x1_k - x2_k - sum_{j=0..k} x1_j x3_{k-j}
    (k+1) x3_{k+1} = sum_{j=0..k} x1_j x2_{k-j} - b x3_k

and advances with adaptive steps sized so the last retained series term
stays below the configured tolerance.

All arithmetic runs on mpmath reals with at least 100 mantissa bits
(machine epsilon 2^-99 ~ 1.58e-30), far below anything double-precision
coefficients can carry, so the comparison digits measure the cycle, not
the checker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from . import trigpoly as tp
from .hbsystem import HarmonicSolution, LorenzParams

__all__ = [
    "PRECISION_BITS",
    "TaylorConfig",
    "VerificationReport",
    "StepUnderflowError",
    "measure_epsilon",
    "lorenz_rhs",
    "equilibrium_state",
    "taylor_coefficients",
    "integrate",
    "verify_cycle",
]

PRECISION_BITS = 100
DIGITS_CAP = 999  # reported for an exactly zero error


class StepUnderflowError(RuntimeError):
    """Adaptive step collapsed; the tolerance cannot be met."""


@dataclass(frozen=True)
class TaylorConfig:
    """Integrator knobs.

    Steps are always adaptive; fixed_order pins the series order (useful
    for deterministic tests) while leaving step control adaptive.
    """

    series_tol: float = 1e-25
    max_order: int = 60
    precision_bits: int = PRECISION_BITS
    fixed_order: int | None = None

    def __post_init__(self):
        if self.series_tol <= 0:
            raise ValueError("series_tol must be positive")
        if self.max_order < 2:
            raise ValueError("max_order must be at least 2")
        if self.precision_bits < 100:
            raise ValueError("precision_bits must honor the 100-bit contract")

    def order(self) -> int:
        if self.fixed_order is not None:
            return min(self.fixed_order, self.max_order)
        # classic work-per-accuracy heuristic: order ~ -ln(tol)/2
        return min(self.max_order, max(4, math.ceil(-math.log(self.series_tol) / 2.0) + 1))


@dataclass(frozen=True)
class VerificationReport:
    roundtrip_error: float
    reverse_error: float
    digits_roundtrip: int
    digits_reverse: int
    roundtrip_errors: tuple[float, float, float]
    reverse_errors: tuple[float, float, float]
    period: float
    initial_state: tuple[float, float, float]


def measure_epsilon(bits: int = PRECISION_BITS) -> float:
    """Smallest eps with 1 + eps > 1 in the working representation, measured."""
    with mp.workprec(bits):
        one = mp.mpf(1)
        eps = mp.mpf(1)
        while one + eps / 2 != one:
            eps = eps / 2
        return float(eps)


def lorenz_rhs(x, params: LorenzParams):
    """Right-hand side of the flow; works on floats and mpf alike."""
    x1, x2, x3 = x
    return [
        params.sigma * (x2 - x1),
        params.r * x1 - x2 - x1 * x3,
        x1 * x2 - params.b * x3,
    ]


def equilibrium_state(params: LorenzParams, branch: int = +1):
    """One of the nonzero fixed points, built at working precision."""
    xy = mp.sqrt(mp.mpf(params.b) * (mp.mpf(params.r) - 1))
    if branch < 0:
        xy = -xy
    return [xy, xy, mp.mpf(params.r) - 1]


def taylor_coefficients(x0, params: LorenzParams, order: int):
    """Series coefficients X_k, k = 0..order, for each coordinate.

    The scalar type of x0 is preserved (floats stay floats, mpf stays
    mpf), which keeps the double-precision cross-checks honest.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    sg, r, b = params.sigma, params.r, params.b
    x1 = [x0[0]]
    x2 = [x0[1]]
    x3 = [x0[2]]
    for k in range(order):
        conv13 = sum(x1[j] * x3[k - j] for j in range(k + 1))
        conv12 = sum(x1[j] * x2[k - j] for j in range(k + 1))
        x1.append(sg * (x2[k] - x1[k]) / (k + 1))
        x2.append((r * x1[k] - x2[k] - conv13) / (k + 1))
        x3.append((conv12 - b * x3[k]) / (k + 1))
    return [x1, x2, x3]


def _horner(coeffs, h):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * h + c
    return acc


def _step_size(coeffs, tol, order):
    """Largest h with |last term| h^order <= tol, times a 0.8 safety factor.

    If the top coefficient happens to vanish (parity at symmetric states)
    the next one down decides; if both vanish the series is effectively
    exact and the caller's remaining-span cap takes over.
    """
    best = None
    for m in (order, order - 1):
        mag = max(abs(c[m]) for c in coeffs)
        if mag > 0:
            cand = mp.mpf("0.8") * (mp.mpf(tol) / mag) ** (mp.mpf(1) / m)
            best = cand if best is None else min(best, cand)
    return best


def integrate(x0, t_span, cfg: TaylorConfig = TaylorConfig(), params: LorenzParams = LorenzParams()):
    """Advance x0 by t_span (negative for reverse time) in composed Taylor steps.

    Returns the endpoint as a list of three mpf values.
    """
    if t_span == 0:
        raise ValueError("t_span must be nonzero")
    with mp.workprec(cfg.precision_bits):
        state = [mp.mpf(float(v)) if not isinstance(v, mp.mpf) else v for v in x0]
        span = t_span if isinstance(t_span, mp.mpf) else mp.mpf(float(t_span))
        direction = 1 if span > 0 else -1
        total = abs(span)
        order = cfg.order()
        done = mp.mpf(0)
        while done < total:
            remaining = total - done
            coeffs = taylor_coefficients(state, params, order)
            h = _step_size(coeffs, cfg.series_tol, order)
            h = remaining if h is None else min(h, remaining)
            if h <= total * mp.mpf(1e-18):
                raise StepUnderflowError(f"step collapsed to {mp.nstr(h, 5)} after t={mp.nstr(done, 8)}")
            state = [_horner(c, direction * h) for c in coeffs]
            done += h
        return state


def _to_extended(p: tp.TrigPolynomial) -> tp.TrigPolynomial:
    return tp.TrigPolynomial(
        mp.mpf(float(p.a0)),
        [mp.mpf(float(v)) for v in p.a],
        [mp.mpf(float(v)) for v in p.b],
    )


def _digits(err: float) -> int:
    if err <= 0.0:
        return DIGITS_CAP
    return int(math.floor(-math.log10(err)))


def verify_cycle(
    sol: HarmonicSolution,
    cfg: TaylorConfig = TaylorConfig(),
    params: LorenzParams = LorenzParams(),
) -> VerificationReport:
    """Round-trip the candidate cycle over one period, forward and back.

    The t=0 state is evaluated from the trigonometric polynomials in
    extended precision, integrated forward by T = 2 pi / omega, and the
    endpoint integrated backward to close the loop.
    """
    if not sol.omega > 0:
        raise ValueError("omega must be positive")
    with mp.workprec(cfg.precision_bits):
        w = mp.mpf(float(sol.omega))
        period = 2 * mp.pi / w
        t0 = mp.mpf(0)
        x0 = [
            tp.evaluate(_to_extended(p), w, t0, cos=mp.cos, sin=mp.sin)
            for p in (sol.x1, sol.x2, sol.x3)
        ]
        forward = integrate(x0, period, cfg, params)
        backward = integrate(forward, -period, cfg, params)
        rt = tuple(float(abs(a - b)) for a, b in zip(forward, x0))
        rv = tuple(float(abs(a - b)) for a, b in zip(backward, x0))
        return VerificationReport(
            roundtrip_error=max(rt),
            reverse_error=max(rv),
            digits_roundtrip=_digits(max(rt)),
            digits_reverse=_digits(max(rv)),
            roundtrip_errors=rt,
            reverse_errors=rv,
            period=float(period),
            initial_state=tuple(float(v) for v in x0),
        )
