"""Closed algebraic system for Lorenz harmonic balance.

Substituting the trigonometric ansatz into

    x1' = sigma (x2 - x1)
    x2' = r x1 - x2 - x1 x3
    x3' = x1 x2 - b x3

and projecting each defect onto the retained harmonics yields 6h+3
polynomial equations in the 6h+4 unknowns.  The system is closed by the
anchor equation  x30 + sum_i c3_i = anchor  (default r-1), which pins the
trajectory's t=0 crossing of the plane x3 = r-1 through the nonzero
equilibria.

Unknown vector layout (length 6h+4):

    [ omega, x10, x20, x30, c1_1..c1_h, s1_1..s1_h,
      c2_1..c2_h, s2_1..s2_h, c3_1..c3_h, s3_1..s3_h ]

Residual row order: for each coordinate k = 1, 2, 3 the h cosine
projections (i = 1..h), the h sine projections, then the constant-term
equation; the anchor row comes last.  Rows are the Fourier coefficients of
the defect itself, so the k=1 constant row carries the factor sigma.

Every equation is affine-plus-bilinear in the unknowns (omega times an
amplitude, or amplitude times amplitude), so the Jacobian is assembled
analytically from the same convolution structure as the residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import trigpoly as tp
from .trigpoly import TrigPolynomial

__all__ = [
    "LorenzParams",
    "HarmonicSolution",
    "ResidualSystem",
    "pack",
    "unpack",
    "unknown_count",
    "equilibrium_solution",
    "flip_frequency_sign",
    "mirror_x1_x2",
    "project_cycle_parity",
]


@dataclass(frozen=True)
class LorenzParams:
    """System parameters; defaults are the classical chaotic values."""

    sigma: float = 10.0
    r: float = 28.0
    b: float = 8.0 / 3.0

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("b must be nonzero")
        if self.r <= 1:
            raise ValueError("r must exceed 1 (nonzero equilibria must exist)")

    def equilibrium_offset(self) -> float:
        """sqrt(b (r-1)), the +-x coordinate of the nonzero equilibria."""
        return math.sqrt(self.b * (self.r - 1.0))


@dataclass(frozen=True)
class HarmonicSolution:
    """A candidate cycle: frequency omega plus the three phase polynomials."""

    omega: float
    x1: TrigPolynomial
    x2: TrigPolynomial
    x3: TrigPolynomial

    def __post_init__(self):
        if not (self.x1.h == self.x2.h == self.x3.h):
            raise ValueError(
                f"coordinate polynomials disagree on h: "
                f"{self.x1.h}, {self.x2.h}, {self.x3.h}"
            )

    @property
    def h(self) -> int:
        return self.x1.h

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def state_at(self, t: float) -> np.ndarray:
        """Phase-space point of the approximate cycle at time t."""
        return np.array(
            [tp.evaluate(p, self.omega, t) for p in (self.x1, self.x2, self.x3)]
        )


def unknown_count(h: int) -> int:
    """Length of the unknown vector, 6h+4."""
    return 6 * h + 4


def _amp_offsets(h: int, k: int) -> tuple[int, int]:
    """Start indices of the cosine and sine blocks for coordinate k (1-based)."""
    c = 4 + (k - 1) * 2 * h
    return c, c + h


def pack(sol: HarmonicSolution) -> np.ndarray:
    """Flatten a solution into the unknown-vector layout."""
    h = sol.h
    u = np.empty(unknown_count(h))
    u[0] = sol.omega
    u[1], u[2], u[3] = sol.x1.a0, sol.x2.a0, sol.x3.a0
    for k, p in enumerate((sol.x1, sol.x2, sol.x3), start=1):
        c, s = _amp_offsets(h, k)
        u[c : c + h] = p.a
        u[s : s + h] = p.b
    return u


def unpack(u: np.ndarray, h: int) -> HarmonicSolution:
    """Inverse of :func:`pack`."""
    u = np.asarray(u, dtype=float)
    if u.shape != (unknown_count(h),):
        raise ValueError(f"expected vector of length {unknown_count(h)}, got {u.shape}")
    polys = []
    for k in range(1, 4):
        c, s = _amp_offsets(h, k)
        polys.append(TrigPolynomial(float(u[k]), u[c : c + h], u[s : s + h]))
    return HarmonicSolution(float(u[0]), *polys)


def equilibrium_solution(
    params: LorenzParams, h: int, branch: int = +1, omega: float = 1.0
) -> HarmonicSolution:
    """The zero-amplitude solution sitting on one of the nonzero equilibria.

    Valid for any omega; the branch sign selects between the two fixed
    points at (+-sqrt(b(r-1)), +-sqrt(b(r-1)), r-1).
    """
    xy = math.copysign(params.equilibrium_offset(), branch)
    return HarmonicSolution(
        omega,
        tp.constant(xy, h),
        tp.constant(xy, h),
        tp.constant(params.r - 1.0, h),
    )


def _vector_h(u) -> int:
    if (len(u) - 4) % 6 != 0:
        raise ValueError(f"vector length {len(u)} is not of the form 6h+4")
    return (len(u) - 4) // 6


def flip_frequency_sign(u: np.ndarray) -> np.ndarray:
    """Map (omega, sines) -> (-omega, -sines): an exact relabeling.

    The represented function of t is unchanged, since
    a cos(-i w t) - b sin(-i w t) = a cos(i w t) + b sin(i w t).
    Used to normalize converged solutions to omega > 0.
    """
    h = _vector_h(u)
    v = np.array(u, dtype=float, copy=True)
    v[0] = -v[0]
    for k in range(1, 4):
        _, s = _amp_offsets(h, k)
        v[s : s + h] = -v[s : s + h]
    return v


def mirror_x1_x2(u: np.ndarray) -> np.ndarray:
    """Negate the x1 and x2 parts (constants and amplitudes).

    This is the (x1, x2, x3) -> (-x1, -x2, x3) symmetry of the vector
    field; it maps solutions of the algebraic system to solutions.  For a
    cycle with the half-period parity pattern it equals a half-period time
    shift, so it selects between the two anchor crossings of one orbit.
    """
    h = _vector_h(u)
    v = np.array(u, dtype=float, copy=True)
    v[1] = -v[1]
    v[2] = -v[2]
    for k in (1, 2):
        c, _ = _amp_offsets(h, k)
        v[c : c + 2 * h] = -v[c : c + 2 * h]
    return v


def project_cycle_parity(u: np.ndarray) -> np.ndarray:
    """Drop the components forbidden by the target cycle's parity pattern.

    The sought orbit is invariant under the mirror symmetry composed with
    a half-period shift, which forces x10 = x20 = 0, even-index x1/x2
    amplitudes to zero and odd-index x3 amplitudes to zero.  The pattern
    is an exactly Newton-invariant subspace (the forbidden equation rows
    and Jacobian couplings assemble to exact zeros on it), and inside it
    the zero-amplitude equilibrium family cannot satisfy the anchor, so
    the iteration cannot collapse onto it.
    """
    h = _vector_h(u)
    v = np.array(u, dtype=float, copy=True)
    v[1] = 0.0
    v[2] = 0.0
    for k, forbidden in ((1, 0), (2, 0), (3, 1)):  # parity of the zeroed indices
        c, s = _amp_offsets(h, k)
        for i in range(1, h + 1):
            if i % 2 == forbidden:
                v[c + i - 1] = 0.0
                v[s + i - 1] = 0.0
    return v


class ResidualSystem:
    """Residual and Jacobian of the closed system at a fixed harmonic count."""

    def __init__(self, params: LorenzParams, h: int, anchor: float | None = None):
        if h < 1:
            raise ValueError("h must be at least 1")
        self.params = params
        self.h = int(h)
        self.anchor = params.r - 1.0 if anchor is None else float(anchor)

    @property
    def n(self) -> int:
        return unknown_count(self.h)

    def __repr__(self):
        return (
            f"ResidualSystem(h={self.h}, sigma={self.params.sigma}, "
            f"r={self.params.r}, b={self.params.b}, anchor={self.anchor})"
        )

    def _check(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got {u.shape}")
        return u

    def residual(self, u: np.ndarray) -> np.ndarray:
        """Residual vector F(u), length 6h+4.

        All product terms go through trigpoly.multiply_truncated so the
        convolution logic lives in exactly one place.
        """
        u = self._check(u)
        h = self.h
        sg, r, b = self.params.sigma, self.params.r, self.params.b
        sol = unpack(u, h)
        w, x1, x2, x3 = sol.omega, sol.x1, sol.x2, sol.x3

        p13 = tp.multiply_truncated(x1, x3, h)
        p12 = tp.multiply_truncated(x1, x2, h)

        # defect polynomials: d_k = x_k' - (rhs of coordinate k)
        d1 = tp.add(tp.differentiate(x1, w), tp.scale(tp.sub(x2, x1), -sg))
        d2 = tp.add(
            tp.add(tp.differentiate(x2, w), tp.scale(x1, -r)), tp.add(x2, p13)
        )
        d3 = tp.add(tp.differentiate(x3, w), tp.add(tp.scale(p12, -1.0), tp.scale(x3, b)))

        out = np.empty(self.n)
        for k, d in enumerate((d1, d2, d3)):
            base = k * (2 * h + 1)
            out[base : base + h] = d.a
            out[base + h : base + 2 * h] = d.b
            out[base + 2 * h] = d.a0
        out[-1] = (x3.a0 + math.fsum(x3.a)) - self.anchor
        return out

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        """Analytic Jacobian dF/du, shape (6h+4, 6h+4).

        Every residual entry is affine in u, so the matrix is exact up to
        rounding.  The bilinear product blocks reuse the convolution
        structure through trigpoly.multiplication_matrix.
        """
        u = self._check(u)
        h = self.h
        n = self.n
        sg, r, b = self.params.sigma, self.params.r, self.params.b
        sol = unpack(u, h)
        w, x1, x2, x3 = sol.omega, sol.x1, sol.x2, sol.x3

        J = np.zeros((n, n))
        i = np.arange(1, h + 1)
        iw = i * w

        # residual-row indices per coordinate block
        def rows(k):
            base = (k - 1) * (2 * h + 1)
            return (
                np.arange(base, base + h),          # cosine projections
                np.arange(base + h, base + 2 * h),  # sine projections
                base + 2 * h,                       # constant-term row
            )

        c1, s1 = _amp_offsets(h, 1)
        c2, s2 = _amp_offsets(h, 2)
        c3, s3 = _amp_offsets(h, 3)

        # k = 1:  i w s1_i + sg c1_i - sg c2_i ;  -i w c1_i + sg s1_i - sg s2_i ;
        #         sg x10 - sg x20
        rc, rs, r0 = rows(1)
        J[rc, 0] = i * x1.b
        J[rc, c1 + i - 1] += sg
        J[rc, s1 + i - 1] += iw
        J[rc, c2 + i - 1] += -sg
        J[rs, 0] = -i * x1.a
        J[rs, c1 + i - 1] += -iw
        J[rs, s1 + i - 1] += sg
        J[rs, s2 + i - 1] += -sg
        J[r0, 1] = sg
        J[r0, 2] = -sg

        # product rows [alpha0, alpha_i, beta_i] reordered to block order
        # [cos rows, sin rows, constant row]
        perm = np.concatenate([np.arange(1, 2 * h + 1), [0]])
        x1_cols = np.concatenate([[1], np.arange(c1, c1 + h), np.arange(s1, s1 + h)])
        x2_cols = np.concatenate([[2], np.arange(c2, c2 + h), np.arange(s2, s2 + h)])
        x3_cols = np.concatenate([[3], np.arange(c3, c3 + h), np.arange(s3, s3 + h)])

        # k = 2:  i w s2_i - r c1_i + c2_i + [x1 x3]_cos,i ;  etc.
        rc, rs, r0 = rows(2)
        J[rc, 0] = i * x2.b
        J[rc, s2 + i - 1] += iw
        J[rc, c1 + i - 1] += -r
        J[rc, c2 + i - 1] += 1.0
        J[rs, 0] = -i * x2.a
        J[rs, c2 + i - 1] += -iw
        J[rs, s1 + i - 1] += -r
        J[rs, s2 + i - 1] += 1.0
        J[r0, 1] += -r
        J[r0, 2] += 1.0
        block2 = np.concatenate([rc, rs, [r0]])
        J[np.ix_(block2, x1_cols)] += tp.multiplication_matrix(x3)[perm]
        J[np.ix_(block2, x3_cols)] += tp.multiplication_matrix(x1)[perm]

        # k = 3:  i w s3_i + b c3_i - [x1 x2]_cos,i ;  etc.
        rc, rs, r0 = rows(3)
        J[rc, 0] = i * x3.b
        J[rc, s3 + i - 1] += iw
        J[rc, c3 + i - 1] += b
        J[rs, 0] = -i * x3.a
        J[rs, c3 + i - 1] += -iw
        J[rs, s3 + i - 1] += b
        J[r0, 3] += b
        block3 = np.concatenate([rc, rs, [r0]])
        J[np.ix_(block3, x1_cols)] -= tp.multiplication_matrix(x2)[perm]
        J[np.ix_(block3, x2_cols)] -= tp.multiplication_matrix(x1)[perm]

        # anchor:  x30 + sum_i c3_i - anchor
        J[n - 1, 3] = 1.0
        J[n - 1, c3 : c3 + h] = 1.0
        return J
