"""Finite-field curve counting, quadratic residue symbols, L-functions."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homstab.ffcurves import (
    ConstantModulus,
    FqContext,
    FqPoly,
    NotSquarefree,
    QAdjSqrt,
    batch_charsums,
    batch_curve_data,
    central_value,
    curve_point_counts,
    enumerate_squarefree,
    frobenius_data,
    functional_equation_holds,
    is_squarefree,
    jacobi_symbol,
    lfunction_charsum,
    lfunction_from_frobenius,
    read_cache,
    rh_defect,
    write_cache,
)

import oracles


F3 = FqContext(3)
F5 = FqContext(5)


def poly(ctx, *coeffs):
    return FqPoly(ctx, tuple(coeffs))


def monics(ctx, deg):
    for tail in itertools.product(ctx.elements(), repeat=deg):
        yield FqPoly(ctx, tuple(tail) + (1,))


def flip_odd(coeffs):
    return tuple(c if i % 2 == 0 else -c for i, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# FqContext


def test_context_fields():
    assert (F3.p, F3.e, F3.q) == (3, 1, 3)
    assert (F5.p, F5.e, F5.q) == (5, 1, 5)
    F9 = FqContext(3, 2)
    assert (F9.p, F9.e, F9.q) == (3, 2, 9)


@pytest.mark.parametrize("bad", [1, 2, 4, 99, 101])
def test_context_rejects_bad_characteristic(bad):
    with pytest.raises(ValueError):
        FqContext(bad)


# ---------------------------------------------------------------------------
# jacobi_symbol


def test_jacobi_linear_example():
    # x = 2 mod (x + 1) and 2 is a nonsquare in F_3.
    assert jacobi_symbol(poly(F3, 0, 1), poly(F3, 1, 1)) == -1


def test_jacobi_square_numerator_is_one():
    x = FqPoly.x(F3)
    m = poly(F3, 1, 1)
    assert jacobi_symbol(x * x, m) == 1
    d = poly(F3, 1, 0, 1)
    assert jacobi_symbol(d * d, poly(F3, 2, 1)) == 1


def test_jacobi_zero_when_modulus_divides():
    d = poly(F3, 0, 2, 0, 1)
    assert jacobi_symbol(d, poly(F3, 1, 1)) == 0
    assert jacobi_symbol(d, poly(F3, 0, 1)) == 0


def test_jacobi_constant_modulus_raises():
    with pytest.raises(ConstantModulus):
        jacobi_symbol(FqPoly.x(F3), poly(F3, 2))


@pytest.mark.parametrize("ctx", [F3, F5])
def test_jacobi_matches_linear_oracle(ctx):
    # Against a linear modulus the symbol is a Legendre symbol at a point.
    for dc in itertools.product(ctx.elements(), repeat=3):
        dcoeffs = tuple(dc) + (1,)
        for a in ctx.elements():
            expected = oracles.naive_jacobi_linear(dcoeffs, a, ctx.p)
            got = jacobi_symbol(FqPoly(ctx, dcoeffs), poly(ctx, (-a) % ctx.p, 1))
            assert got == expected, (dcoeffs, a)


@pytest.mark.parametrize(
    "ctx,mcoeffs",
    [(F3, (1, 0, 1)), (F3, (1, 2, 0, 1)), (F5, (2, 0, 1))],
)
def test_jacobi_matches_root_oracle(ctx, mcoeffs):
    # Irreducible modulus: chi of d evaluated at a root upstairs.
    for dc in itertools.product(ctx.elements(), repeat=2):
        dcoeffs = tuple(dc) + (1,)
        expected = oracles.naive_jacobi_irreducible(dcoeffs, mcoeffs, ctx.p)
        assert jacobi_symbol(FqPoly(ctx, dcoeffs), FqPoly(ctx, mcoeffs)) == expected


f3_polys = st.lists(st.integers(0, 2), min_size=0, max_size=3).map(
    lambda tail: FqPoly(F3, tuple(tail) + (1,)))
f3_moduli = st.lists(st.integers(0, 2), min_size=1, max_size=3).map(
    lambda tail: FqPoly(F3, tuple(tail) + (1,)))


@settings(deadline=None, max_examples=60)
@given(f3_polys, f3_polys, f3_moduli)
def test_jacobi_multiplicative_in_numerator(d1, d2, m):
    assert jacobi_symbol(d1 * d2, m) == jacobi_symbol(d1, m) * jacobi_symbol(d2, m)


@settings(deadline=None, max_examples=60)
@given(f3_polys, f3_moduli, f3_moduli)
def test_jacobi_multiplicative_in_modulus(d, m1, m2):
    assert jacobi_symbol(d, m1 * m2) == jacobi_symbol(d, m1) * jacobi_symbol(d, m2)


# ---------------------------------------------------------------------------
# is_squarefree and enumerate_squarefree


def test_is_squarefree_examples():
    assert is_squarefree(poly(F3, 0, 2, 0, 1))
    assert not is_squarefree(poly(F3, 0, 0, 1))
    # (x+1)^2 (x+2) over F_5.
    a = poly(F5, 1, 1)
    assert not is_squarefree(a * a * poly(F5, 2, 1))


def test_enumerate_counts():
    assert len(list(enumerate_squarefree(F3, 1))) == 3
    assert len(list(enumerate_squarefree(F3, 2))) == 6
    assert len(list(enumerate_squarefree(F5, 3))) == 100
    for n in (2, 3, 4):
        count = len(list(enumerate_squarefree(F3, n)))
        assert count == 3 ** n - 3 ** (n - 1)


def test_enumerate_is_deterministic_and_complete():
    first = [d.coefficients for d in enumerate_squarefree(F3, 3)]
    second = [d.coefficients for d in enumerate_squarefree(F3, 3)]
    assert first == second
    brute = {d.coefficients for d in monics(F3, 3) if is_squarefree(d)}
    assert set(first) == brute
    assert len(first) == len(brute)


# ---------------------------------------------------------------------------
# curve_point_counts


def test_point_counts_x_cubed_minus_x():
    assert curve_point_counts(F3, poly(F3, 0, 2, 0, 1), 2) == [4, 16]


def test_point_counts_degree_one_is_projective_line():
    assert curve_point_counts(F3, FqPoly.x(F3), 3) == [4, 10, 28]


def test_point_counts_match_naive_oracle():
    for n in (3, 4):
        for d in enumerate_squarefree(F3, n):
            for k in (1, 2):
                expected = oracles.count_points_naive(3, d.coefficients, k)
                assert curve_point_counts(F3, d, k)[-1] == expected, (d.coefficients, k)


def test_point_counts_x3_plus_x_over_f5():
    d = poly(F5, 0, 1, 0, 1)
    assert curve_point_counts(F5, d, 1) == [oracles.count_points_naive(5, d.coefficients)]


def test_point_counts_rejects_square_factor():
    with pytest.raises(NotSquarefree):
        curve_point_counts(F3, poly(F3, 0, 0, 1), 1)


# ---------------------------------------------------------------------------
# frobenius_data


def test_frobenius_x_cubed_minus_x():
    data = frobenius_data(F3, poly(F3, 0, 2, 0, 1), k_max=2)
    assert data.genus == 1
    assert data.counts == (4,)
    assert data.charpoly == (1, 0, 3)
    assert data.theta_powersums == {1: 0, 2: -6}


def test_frobenius_degree_two():
    data = frobenius_data(F3, poly(F3, 2, 0, 1), k_max=1)
    assert data.genus == 0
    assert data.charpoly == (1,)
    # Even degree adjoins the eigenvalue 1.
    assert data.theta_powersums == {1: 1}
    assert lfunction_from_frobenius(data) == [1, -1]


def test_frobenius_degree_one():
    data = frobenius_data(F3, FqPoly.x(F3))
    assert data.genus == 0
    assert data.theta_powersums == {}
    assert lfunction_from_frobenius(data) == [1]
    # Requesting power sums of the empty eigenvalue set stores zeros.
    assert frobenius_data(F3, FqPoly.x(F3), k_max=2).theta_powersums == {1: 0, 2: 0}


def test_theta_powersums_track_traces():
    # Odd degree: p_k = q^k + 1 - N_k; even degree adds the extra 1.
    d_odd = poly(F3, 1, 2, 0, 1)
    counts = curve_point_counts(F3, d_odd, 3)
    data = frobenius_data(F3, d_odd, k_max=3)
    for k in (1, 2, 3):
        assert data.theta_powersums[k] == 3 ** k + 1 - counts[k - 1]
    d_even = poly(F3, 2, 1, 0, 0, 1)
    counts = curve_point_counts(F3, d_even, 3)
    data = frobenius_data(F3, d_even, k_max=3)
    for k in (1, 2, 3):
        assert data.theta_powersums[k] == 3 ** k + 1 - counts[k - 1] + 1


# ---------------------------------------------------------------------------
# lfunction_charsum and the dual-method identity


def test_charsum_x_cubed_minus_x():
    assert lfunction_charsum(F3, poly(F3, 0, 2, 0, 1)) == [1, 0, 3]


def test_charsum_constant_term_is_one():
    for d in enumerate_squarefree(F3, 3):
        assert lfunction_charsum(F3, d)[0] == 1


def test_charsum_degree_two():
    assert lfunction_charsum(F3, poly(F3, 2, 0, 1)) == [1, -1]


@pytest.mark.parametrize("ctx,degrees", [(F3, (1, 2, 3, 4)), (F5, (3,))])
def test_dual_method_agreement(ctx, degrees):
    # Character-sum coefficients equal the zeta-numerator reconstruction.
    for n in degrees:
        for d in enumerate_squarefree(ctx, n):
            assert lfunction_charsum(ctx, d) == lfunction_from_frobenius(
                frobenius_data(ctx, d)), d.coefficients


def test_functional_equation_and_rh_sample():
    for n in (3, 4, 5):
        for d in enumerate_squarefree(F3, n):
            data = frobenius_data(F3, d)
            assert functional_equation_holds(data)
            assert rh_defect(data) <= 1e-9


# ---------------------------------------------------------------------------
# central_value


def test_central_value_x_cubed_minus_x():
    cv = central_value(F3, poly(F3, 0, 2, 0, 1), 1)
    assert cv == QAdjSqrt(2, 0, 3)
    assert cv.is_rational()


def test_central_value_power_zero_is_one():
    assert central_value(F3, poly(F3, 0, 2, 0, 1), 0) == 1


def test_central_value_degree_two():
    cv = central_value(F3, poly(F3, 2, 0, 1), 1)
    assert cv == QAdjSqrt(1, Fraction(-1, 3), 3)
    assert str(cv) == "1 - (1/3)*sqrt(3)"


def test_central_value_powers_multiply():
    for d in enumerate_squarefree(F3, 3):
        one = central_value(F3, d, 1)
        assert central_value(F3, d, 2) == one * one
        assert central_value(F3, d, 3) == one ** 3


# ---------------------------------------------------------------------------
# pairing invariance


def manual_charsum(ctx, d):
    return tuple(
        sum(jacobi_symbol(d, m) for m in monics(ctx, i)) if i else 1
        for i in range(d.degree))


@pytest.mark.parametrize("n", [3, 4])
def test_scalar_twist_negates_odd_coefficients(n):
    # chi_{cd} for a nonsquare c mirrors the L-function in t.
    for d in enumerate_squarefree(F3, n):
        base = tuple(lfunction_charsum(F3, d))
        assert manual_charsum(F3, d.scale(2)) == flip_odd(base)


@pytest.mark.parametrize("n", [3, 4])
def test_substitution_twist(n):
    # d(x) -> c^{-n} d(cx) stays monic; it flips odd coefficients for odd
    # n (net nonsquare scalar) and is a symmetry for even n.
    for d in enumerate_squarefree(F3, n):
        coeffs = tuple(F3.mul(ci, F3.pow(2, (i - n) % 2))
                       for i, ci in enumerate(d.coefficients))
        twisted = lfunction_charsum(F3, FqPoly(F3, coeffs))
        base = tuple(lfunction_charsum(F3, d))
        assert tuple(twisted) == (flip_odd(base) if n % 2 else base)


# ---------------------------------------------------------------------------
# batches, towers, cache


def test_batch_matches_literal_loops():
    literal = [frobenius_data(F3, d) for d in enumerate_squarefree(F3, 3)]
    assert batch_curve_data(F3, 3) == literal
    sums = [lfunction_charsum(F3, d) for d in enumerate_squarefree(F3, 3)]
    assert batch_charsums(F3, 3) == sums


def test_extension_tower_theta():
    # Base-changing to F_9 squares the eigenvalues: p_k upstairs is p_2k.
    d = poly(F3, 0, 2, 0, 1)
    F9 = FqContext(3, 2)
    down = frobenius_data(F3, d, k_max=4)
    up = frobenius_data(F9, d.embed_to(F9), k_max=2)
    assert up.theta_powersums == {k: down.theta_powersums[2 * k] for k in (1, 2)}


def test_cache_round_trip(tmp_path):
    curves = batch_curve_data(F3, 3)
    path = tmp_path / "curves.bin"
    write_cache(path, F3, 3, curves)
    assert read_cache(path, F3) == curves


def test_cache_rejects_wrong_field(tmp_path):
    path = tmp_path / "curves.bin"
    write_cache(path, F3, 3, batch_curve_data(F3, 3))
    with pytest.raises(ValueError):
        read_cache(path, F5)


def test_cache_rejects_corrupt_header(tmp_path):
    path = tmp_path / "curves.bin"
    write_cache(path, F3, 3, batch_curve_data(F3, 3))
    blob = path.read_bytes()
    path.write_bytes(b"XX" + blob[2:])
    with pytest.raises(ValueError):
        read_cache(path, F3)
