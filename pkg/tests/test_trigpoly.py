import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lorenzhb.trigpoly as tp

import reference_cycle as ref


def random_poly(rng, h, scale=1.0):
    return tp.TrigPolynomial(
        scale * rng.standard_normal(),
        scale * rng.standard_normal(h),
        scale * rng.standard_normal(h),
    )


def quadrature_coeffs(p, q, h_out, omega=1.7):
    """Project the pointwise product onto {1, cos, sin} over one period.

    Uniform sampling over a full period integrates trigonometric
    polynomials exactly once the sample count clears the highest harmonic
    present (p.h + q.h + h_out here), so this is an independent oracle for
    the coefficient formulas.
    """
    n = 2 * (p.h + q.h + h_out) + 8
    t = np.arange(n) * (2.0 * np.pi / omega / n)

    def values(poly):
        i = np.arange(1, poly.h + 1)[:, None]
        return poly.a0 + (poly.a[:, None] * np.cos(i * omega * t)).sum(0) + (
            poly.b[:, None] * np.sin(i * omega * t)
        ).sum(0)

    f = values(p) * values(q)
    a0 = f.mean()
    a = np.array([2.0 * (f * np.cos(i * omega * t)).mean() for i in range(1, h_out + 1)])
    b = np.array([2.0 * (f * np.sin(i * omega * t)).mean() for i in range(1, h_out + 1)])
    return a0, a, b


# ---------------------------------------------------------------- evaluate

def test_evaluate_constant():
    p = tp.constant(5.0)
    assert tp.evaluate(p, 3.0, 1.7) == 5.0


def test_evaluate_single_cosine_at_zero():
    p = tp.TrigPolynomial(0.0, [1.0], [0.0])
    assert tp.evaluate(p, 2.0, 0.0) == 1.0


def test_evaluate_reference_x3_at_zero_hits_anchor():
    a = [c for c, _ in ref.TABLE_X3]
    b = [s for _, s in ref.TABLE_X3]
    p = tp.TrigPolynomial(ref.X30, a, b)
    assert tp.evaluate(p, 4.0, 0.0) == pytest.approx(27.0, abs=1e-6)


def test_evaluate_matches_manual_sum():
    p = tp.TrigPolynomial(0.5, [1.0, -2.0], [0.25, 3.0])
    w, t = 1.3, 0.37
    manual = 0.5 + math.cos(w * t) - 2 * math.cos(2 * w * t) \
        + 0.25 * math.sin(w * t) + 3 * math.sin(2 * w * t)
    assert tp.evaluate(p, w, t) == pytest.approx(manual, rel=1e-15)


# ----------------------------------------------------------- differentiate

def test_differentiate_constant_is_zero():
    d = tp.differentiate(tp.constant(7.0, h=3), 2.0)
    assert d.a0 == 0.0
    assert not d.a.any() and not d.b.any()


def test_differentiate_cosine():
    p = tp.TrigPolynomial(0.0, [1.0], [0.0])
    d = tp.differentiate(p, 3.0)
    assert d.a0 == 0.0
    assert d.a[0] == 0.0
    assert d.b[0] == -3.0


def test_differentiate_second_harmonic_sine():
    p = tp.TrigPolynomial(0.0, [0.0, 0.0], [0.0, 1.0])
    d = tp.differentiate(p, 2.0)
    assert d.a[1] == 4.0


def test_differentiate_matches_finite_difference():
    rng = np.random.default_rng(3)
    p = random_poly(rng, 6)
    w = 2.3
    d = tp.differentiate(p, w)
    for t in (0.1, 0.9, 2.2):
        eps = 1e-6
        fd = (tp.evaluate(p, w, t + eps) - tp.evaluate(p, w, t - eps)) / (2 * eps)
        assert tp.evaluate(d, w, t) == pytest.approx(fd, abs=1e-7)


# ------------------------------------------------------------ add and such

def test_add_identity_and_scale():
    rng = np.random.default_rng(4)
    p = random_poly(rng, 4)
    z = tp.zero(4)
    q = tp.add(p, z)
    assert q.a0 == p.a0 and np.array_equal(q.a, p.a) and np.array_equal(q.b, p.b)
    s = tp.scale(p, 0.0)
    assert s.a0 == 0.0 and not s.a.any() and not s.b.any()
    half = tp.scale(tp.add(p, p), 0.5)
    assert half.a0 == p.a0
    np.testing.assert_array_equal(half.a, p.a)
    np.testing.assert_array_equal(half.b, p.b)


def test_add_dimension_error():
    with pytest.raises(ValueError):
        tp.add(tp.zero(2), tp.zero(3))


def test_pad_examples():
    p = tp.TrigPolynomial(1.0, [2.0], [3.0])
    q = tp.pad(p, 3)
    assert q.h == 3
    np.testing.assert_array_equal(q.a, [2.0, 0.0, 0.0])
    np.testing.assert_array_equal(q.b, [3.0, 0.0, 0.0])
    assert tp.pad(p, 1) is p
    with pytest.raises(ValueError):
        tp.pad(q, 2)
    for t in (0.0, 0.4, 1.1):
        assert tp.evaluate(q, 2.0, t) == pytest.approx(tp.evaluate(p, 2.0, t), rel=1e-15)


def test_mismatched_amplitude_arrays_rejected():
    with pytest.raises(ValueError):
        tp.TrigPolynomial(0.0, [1.0, 2.0], [1.0])


# ---------------------------------------------------------------- product

def test_multiply_constants():
    r = tp.multiply_truncated(tp.constant(2.0), tp.constant(3.0), 0)
    assert r.a0 == 6.0 and r.h == 0


def test_multiply_cos_squared_keeps_second_harmonic():
    c = tp.TrigPolynomial(0.0, [1.0], [0.0])
    r = tp.multiply_truncated(tp.pad(c, 2), tp.pad(c, 2), 2)
    assert r.a0 == pytest.approx(0.5, abs=1e-15)
    np.testing.assert_allclose(r.a, [0.0, 0.5], atol=1e-15)
    np.testing.assert_allclose(r.b, [0.0, 0.0], atol=1e-15)


def test_multiply_cos_squared_truncated_to_one_harmonic():
    c = tp.TrigPolynomial(0.0, [1.0], [0.0])
    r = tp.multiply_truncated(c, c, 1)
    a0, a, b = quadrature_coeffs(c, c, 1)
    assert r.a0 == pytest.approx(a0, abs=1e-12)
    np.testing.assert_allclose(r.a, a, atol=1e-12)
    np.testing.assert_allclose(r.b, b, atol=1e-12)


def test_multiply_requires_padded_operands():
    with pytest.raises(ValueError):
        tp.multiply_truncated(tp.zero(2), tp.zero(3), 3)


@pytest.mark.parametrize("h", [1, 2, 5, 17])
def test_multiply_against_quadrature_projection(h):
    rng = np.random.default_rng(100 + h)
    for _ in range(10):
        p = random_poly(rng, h)
        q = random_poly(rng, h)
        r = tp.multiply_truncated(p, q, h)
        a0, a, b = quadrature_coeffs(p, q, h)
        assert abs(r.a0 - a0) <= 1e-10
        assert np.max(np.abs(r.a - a)) <= 1e-10
        assert np.max(np.abs(r.b - b)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(
    h=st.integers(1, 6),
    seed=st.integers(0, 2**32 - 1),
    t=st.floats(-2.0, 2.0),
)
def test_full_width_product_is_pointwise_exact(h, seed, t):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, h)
    q = random_poly(rng, h)
    full = tp.multiply_truncated(tp.pad(p, 2 * h), tp.pad(q, 2 * h), 2 * h)
    w = 1.9
    want = tp.evaluate(p, w, t) * tp.evaluate(q, w, t)
    got = tp.evaluate(full, w, t)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(h=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_truncation_drops_exactly_the_tail(h, seed):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, h)
    q = random_poly(rng, h)
    short = tp.multiply_truncated(p, q, h)
    full = tp.multiply_truncated(tp.pad(p, 2 * h), tp.pad(q, 2 * h), 2 * h)
    assert short.a0 == full.a0
    np.testing.assert_array_equal(short.a, full.a[:h])
    np.testing.assert_array_equal(short.b, full.b[:h])


@settings(max_examples=80, deadline=None)
@given(h=st.integers(1, 9), seed=st.integers(0, 2**32 - 1))
def test_multiply_commutes_bitwise(h, seed):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, h, scale=3.0)
    q = random_poly(rng, h, scale=0.3)
    pq = tp.multiply_truncated(p, q, h)
    qp = tp.multiply_truncated(q, p, h)
    assert pq.a0 == qp.a0
    np.testing.assert_array_equal(pq.a, qp.a)
    np.testing.assert_array_equal(pq.b, qp.b)


@settings(max_examples=40, deadline=None)
@given(h=st.integers(1, 8), w=st.floats(0.1, 10.0), seed=st.integers(0, 2**32 - 1))
def test_differentiate_kills_constants(h, w, seed):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, h)
    assert tp.differentiate(p, w).a0 == 0.0


# ------------------------------------------------------------- time shift

def test_time_shift_matches_pointwise():
    rng = np.random.default_rng(8)
    p = random_poly(rng, 5)
    w, tau = 2.1, 0.37
    shifted = tp.time_shift(p, w, tau)
    for t in (0.0, 0.3, 1.4):
        assert tp.evaluate(shifted, w, t) == pytest.approx(
            tp.evaluate(p, w, t + tau), rel=1e-13, abs=1e-13
        )


def test_time_shift_by_zero_is_identity():
    rng = np.random.default_rng(9)
    p = random_poly(rng, 3)
    s = tp.time_shift(p, 1.0, 0.0)
    np.testing.assert_array_equal(s.a, p.a)
    np.testing.assert_array_equal(s.b, p.b)


# --------------------------------------------------- multiplication matrix

@pytest.mark.parametrize("h", [1, 2, 5, 17])
def test_multiplication_matrix_agrees_with_product(h):
    rng = np.random.default_rng(200 + h)
    p = random_poly(rng, h)
    q = random_poly(rng, h)
    M = tp.multiplication_matrix(q)
    direct = tp.multiply_truncated(p, q, h).coeffs()
    np.testing.assert_allclose(M @ p.coeffs(), direct, atol=1e-13)


# ------------------------------------------------- extended-precision path

def test_product_formulas_run_on_extended_scalars():
    with mp.workprec(100):
        pm = tp.TrigPolynomial(mp.mpf("0.5"), [mp.mpf("1.25"), mp.mpf(2)],
                               [mp.mpf(3), mp.mpf("-0.75")])
        qm = tp.TrigPolynomial(mp.mpf(2), [mp.mpf(1), mp.mpf(0)],
                               [mp.mpf(0), mp.mpf(1)])
        rm = tp.multiply_truncated(pm, qm, 2)
        pf = tp.TrigPolynomial(0.5, [1.25, 2.0], [3.0, -0.75])
        qf = tp.TrigPolynomial(2.0, [1.0, 0.0], [0.0, 1.0])
        rf = tp.multiply_truncated(pf, qf, 2)
        assert float(rm.a0) == pytest.approx(rf.a0, rel=1e-15)
        for i in range(2):
            assert float(rm.a[i]) == pytest.approx(rf.a[i], rel=1e-15, abs=1e-15)
            assert float(rm.b[i]) == pytest.approx(rf.b[i], rel=1e-15, abs=1e-15)

        dm = tp.differentiate(pm, mp.mpf(3))
        assert dm.a0 == 0
        assert float(dm.a[0]) == pytest.approx(9.0)  # 1*3*b_1

        val = tp.evaluate(pm, mp.mpf(2), mp.mpf("0.3"), cos=mp.cos, sin=mp.sin)
        ref_val = tp.evaluate(pf, 2.0, 0.3)
        assert float(val) == pytest.approx(ref_val, rel=1e-15)
