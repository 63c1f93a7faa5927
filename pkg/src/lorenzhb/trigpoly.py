"""Arithmetic of truncated trigonometric polynomials.

A polynomial is a constant term plus cosine/sine amplitudes for harmonics
1..h of a shared fundamental frequency omega:

    p(t) = a0 + sum_{i=1..h} ( a_i cos(i w t) + b_i sin(i w t) )

Coefficients with index above h are identically zero; the truncated product
keeps that convention by dropping every harmonic above the requested output
count.  All operations are pure and leave their inputs untouched, so values
can be shared freely between threads.

The coefficient arrays are ordinary numpy arrays.  With dtype float64 this
is the fast solver path; with dtype object the same formulas run unchanged
on arbitrary-precision scalars (mpmath), which the verification code relies
on.  Products of polynomials with different fundamentals are not defined
and not supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TrigPolynomial",
    "zero",
    "constant",
    "evaluate",
    "differentiate",
    "multiply_truncated",
    "add",
    "sub",
    "scale",
    "pad",
    "time_shift",
    "multiplication_matrix",
]


def _as_coeff_array(values, h: int | None = None) -> np.ndarray:
    """Coerce to a 1-d coefficient array, keeping object dtype intact."""
    arr = np.array(values, copy=True)
    if arr.ndim != 1:
        raise ValueError(f"coefficient array must be 1-d, got shape {arr.shape}")
    if arr.dtype.kind in "iub":
        arr = arr.astype(float)
    if h is not None and arr.size != h:
        raise ValueError(f"expected {h} coefficients, got {arr.size}")
    return arr


@dataclass(frozen=True)
class TrigPolynomial:
    """Constant term plus cosine (a) and sine (b) amplitudes for harmonics 1..h."""

    a0: float
    a: np.ndarray = field(default_factory=lambda: np.zeros(0))
    b: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "a", _as_coeff_array(self.a))
        object.__setattr__(self, "b", _as_coeff_array(self.b, h=len(self.a)))

    @property
    def h(self) -> int:
        """Number of retained harmonics."""
        return len(self.a)

    def coeffs(self) -> np.ndarray:
        """Flat coefficient vector in the layout [a0, a_1..a_h, b_1..b_h]."""
        out = np.empty(2 * self.h + 1, dtype=np.result_type(self.a, float))
        out[0] = self.a0
        out[1 : self.h + 1] = self.a
        out[self.h + 1 :] = self.b
        return out

    @staticmethod
    def from_coeffs(v) -> "TrigPolynomial":
        """Inverse of :meth:`coeffs`; the vector length must be odd."""
        v = np.asarray(v)
        if v.ndim != 1 or v.size % 2 == 0:
            raise ValueError(f"flat coefficient vector must have odd length, got {v.size}")
        h = (v.size - 1) // 2
        return TrigPolynomial(v[0], v[1 : h + 1], v[h + 1 :])


def zero(h: int) -> TrigPolynomial:
    """The zero polynomial with h harmonics."""
    return TrigPolynomial(0.0, np.zeros(h), np.zeros(h))


def constant(value: float, h: int = 0) -> TrigPolynomial:
    """A constant polynomial, optionally padded to h harmonics."""
    return TrigPolynomial(value, np.zeros(h), np.zeros(h))


def evaluate(p: TrigPolynomial, omega, t, *, cos=math.cos, sin=math.sin):
    """Value of p at time t for fundamental frequency omega (rad/time).

    The trig kernels default to ``math.cos``/``math.sin``; pass
    ``mpmath.cos``/``mpmath.sin`` together with mpf arguments to evaluate
    at extended precision.
    """
    acc = p.a0
    for i in range(1, p.h + 1):
        arg = i * omega * t
        acc = acc + p.a[i - 1] * cos(arg) + p.b[i - 1] * sin(arg)
    return acc


def differentiate(p: TrigPolynomial, omega) -> TrigPolynomial:
    """Time derivative: kills the constant term and rotates each harmonic pair.

    d/dt [a_i cos(i w t) + b_i sin(i w t)] = (i w b_i) cos(i w t) - (i w a_i) sin(i w t)
    """
    k = np.arange(1, p.h + 1)
    zero_a0 = type(p.a0)(0) if not isinstance(p.a0, (int, float)) else 0.0
    return TrigPolynomial(zero_a0, (k * omega) * p.b, -(k * omega) * p.a)


def add(p: TrigPolynomial, q: TrigPolynomial) -> TrigPolynomial:
    """Coefficientwise sum; harmonic counts must match."""
    _require_same_h(p, q)
    return TrigPolynomial(p.a0 + q.a0, p.a + q.a, p.b + q.b)


def sub(p: TrigPolynomial, q: TrigPolynomial) -> TrigPolynomial:
    """Coefficientwise difference; harmonic counts must match."""
    _require_same_h(p, q)
    return TrigPolynomial(p.a0 - q.a0, p.a - q.a, p.b - q.b)


def scale(p: TrigPolynomial, s) -> TrigPolynomial:
    """Coefficientwise scaling by the scalar s."""
    return TrigPolynomial(s * p.a0, s * p.a, s * p.b)


def pad(p: TrigPolynomial, h_new: int) -> TrigPolynomial:
    """Append zero amplitudes so the polynomial carries h_new harmonics."""
    if h_new < p.h:
        raise ValueError(f"cannot pad from h={p.h} down to h={h_new}")
    if h_new == p.h:
        return p
    extra = np.zeros(h_new - p.h, dtype=p.a.dtype)
    return TrigPolynomial(p.a0, np.concatenate([p.a, extra]), np.concatenate([p.b, extra]))


def _require_same_h(p: TrigPolynomial, q: TrigPolynomial):
    if p.h != q.h:
        raise ValueError(f"harmonic counts differ: {p.h} vs {q.h}")


def multiply_truncated(p: TrigPolynomial, q: TrigPolynomial, h_out: int) -> TrigPolynomial:
    """Product of two polynomials, truncated to h_out harmonics.

    Both inputs must already carry exactly h_out harmonics (pad shorter
    operands first), so that dimension mistakes surface as errors instead
    of silent promotions.  Writing p = (a0, a, b) and q = (A0, A, B), the
    output coefficients are

        alpha_0 = a0 A0 + 1/2 sum_{m=1..h} (a_m A_m + b_m B_m)

        alpha_i = a0 A_i + a_i A0
                  + 1/2 sum_{m=1..h-i}  (a_m A_{m+i} + b_m B_{m+i})
                  + 1/2 sum_{m=1..i-1}  (a_m A_{i-m} - b_m B_{i-m})
                  + 1/2 sum_{m=i+1..h}  (a_m A_{m-i} + b_m B_{m-i})

        beta_i  = a0 B_i + b_i A0
                  + 1/2 sum_{m=1..h-i}  (a_m B_{m+i} - b_m A_{m+i})
                  + 1/2 sum_{m=1..i-1}  (a_m B_{i-m} + b_m A_{i-m})
                  + 1/2 sum_{m=i+1..h}  (-a_m B_{m-i} + b_m A_{m-i})

    and every harmonic above h_out is dropped.

    The accumulation order is fixed so results are bit-reproducible and the
    product commutes exactly: swapping p and q maps the first partial sum
    onto the third term-for-term and reverses the middle sum about m = i/2,
    so the middle sum is accumulated in symmetric (m, i-m) pairs and the
    first/third partial sums are combined before being added to the rest.
    Floating-point addition and multiplication are commutative, hence
    multiply_truncated(p, q, h) == multiply_truncated(q, p, h) bitwise.
    """
    if p.h != h_out or q.h != h_out:
        raise ValueError(
            f"operands must be padded to h_out={h_out} (got {p.h} and {q.h})"
        )
    h = h_out
    # 1-indexed local lists keep the index arithmetic identical to the
    # formulas above; index 0 holds the constant term.
    a = [p.a0] + list(p.a)
    b = [None] + list(p.b)
    A = [q.a0] + list(q.a)
    B = [None] + list(q.b)
    a0, A0 = a[0], A[0]

    s = 0.0
    for m in range(1, h + 1):
        s = s + (a[m] * A[m] + b[m] * B[m])
    alpha0 = a0 * A0 + 0.5 * s

    alpha = [None] * (h + 1)
    beta = [None] * (h + 1)
    for i in range(1, h + 1):
        head_a = a0 * A[i] + a[i] * A0
        head_b = a0 * B[i] + b[i] * A0

        s_up_a = 0.0  # m = 1 .. h-i, indices m+i
        s_up_b = 0.0
        for m in range(1, h - i + 1):
            s_up_a = s_up_a + (a[m] * A[m + i] + b[m] * B[m + i])
            s_up_b = s_up_b + (a[m] * B[m + i] - b[m] * A[m + i])

        s_dn_a = 0.0  # m = i+1 .. h, indices m-i
        s_dn_b = 0.0
        for m in range(i + 1, h + 1):
            s_dn_a = s_dn_a + (a[m] * A[m - i] + b[m] * B[m - i])
            s_dn_b = s_dn_b + (-a[m] * B[m - i] + b[m] * A[m - i])

        s_mid_a = 0.0  # m = 1 .. i-1, indices i-m, in (m, i-m) pairs
        s_mid_b = 0.0
        for m in range(1, (i - 1) // 2 + 1):
            n = i - m
            s_mid_a = s_mid_a + (
                (a[m] * A[i - m] - b[m] * B[i - m]) + (a[n] * A[i - n] - b[n] * B[i - n])
            )
            s_mid_b = s_mid_b + (
                (a[m] * B[i - m] + b[m] * A[i - m]) + (a[n] * B[i - n] + b[n] * A[i - n])
            )
        if i % 2 == 0 and i >= 2:
            m = i // 2
            s_mid_a = s_mid_a + (a[m] * A[m] - b[m] * B[m])
            s_mid_b = s_mid_b + (a[m] * B[m] + b[m] * A[m])

        alpha[i] = head_a + (0.5 * s_up_a + 0.5 * s_dn_a) + 0.5 * s_mid_a
        beta[i] = head_b + (0.5 * s_up_b + 0.5 * s_dn_b) + 0.5 * s_mid_b

    return TrigPolynomial(alpha0, np.array(alpha[1:]), np.array(beta[1:]))


def time_shift(p: TrigPolynomial, omega: float, tau: float) -> TrigPolynomial:
    """Polynomial representing t -> p(t + tau) for fundamental frequency omega.

    Per-harmonic rotation: with theta_i = i omega tau,

        a_i' = a_i cos(theta_i) + b_i sin(theta_i)
        b_i' = b_i cos(theta_i) - a_i sin(theta_i)

    Harmonic magnitudes (and hence zero harmonics) are preserved.
    """
    k = np.arange(1, p.h + 1)
    ck = np.cos(k * omega * tau)
    sk = np.sin(k * omega * tau)
    return TrigPolynomial(p.a0, p.a * ck + p.b * sk, p.b * ck - p.a * sk)


def multiplication_matrix(q: TrigPolynomial) -> np.ndarray:
    """Matrix of the linear map p -> multiply_truncated(p, q, q.h).

    Rows and columns use the flat layout [a0, a_1..a_h, b_1..b_h] of
    :meth:`TrigPolynomial.coeffs`, so ``M @ p.coeffs()`` reproduces the
    truncated product coefficients.  Because the product is bilinear this
    matrix is also the partial derivative of the product coefficients with
    respect to the coefficients of the other operand, which is what the
    analytic Jacobian assembly consumes.
    """
    h = q.h
    n = 2 * h + 1
    A = np.empty(h + 1)
    B = np.empty(h + 1)
    A[0] = q.a0
    A[1:] = q.a
    B[0] = 0.0
    B[1:] = q.b
    M = np.zeros((n, n))

    # constant row: a0*A0 + 1/2 sum (a_m A_m + b_m B_m)
    M[0, 0] = A[0]
    M[0, 1 : h + 1] = 0.5 * A[1:]
    M[0, h + 1 :] = 0.5 * B[1:]

    for i in range(1, h + 1):
        ra, rb = i, h + i
        M[ra, 0] += A[i]
        M[ra, i] += A[0]
        M[rb, 0] += B[i]
        M[rb, h + i] += A[0]
        # m = 1 .. h-i  (factors at index m+i)
        k = h - i
        if k > 0:
            M[ra, 1 : k + 1] += 0.5 * A[i + 1 : h + 1]
            M[ra, h + 1 : h + k + 1] += 0.5 * B[i + 1 : h + 1]
            M[rb, 1 : k + 1] += 0.5 * B[i + 1 : h + 1]
            M[rb, h + 1 : h + k + 1] -= 0.5 * A[i + 1 : h + 1]
        # m = 1 .. i-1  (factors at index i-m)
        if i > 1:
            M[ra, 1:i] += 0.5 * A[i - 1 : 0 : -1]
            M[ra, h + 1 : h + i] -= 0.5 * B[i - 1 : 0 : -1]
            M[rb, 1:i] += 0.5 * B[i - 1 : 0 : -1]
            M[rb, h + 1 : h + i] += 0.5 * A[i - 1 : 0 : -1]
        # m = i+1 .. h  (factors at index m-i)
        if k > 0:
            M[ra, i + 1 : h + 1] += 0.5 * A[1 : k + 1]
            M[ra, h + i + 1 : 2 * h + 1] += 0.5 * B[1 : k + 1]
            M[rb, i + 1 : h + 1] -= 0.5 * B[1 : k + 1]
            M[rb, h + i + 1 : 2 * h + 1] += 0.5 * A[1 : k + 1]
    return M
