"""Stable-homology generating series, Betti tables, fits, and vanishing."""

from fractions import Fraction

import pytest

from homstab import symfunc as sf
from homstab.partitions import partitions
from homstab.stable_series import (
    BRAID_SCHUR,
    BRAID_SYMPLECTIC,
    HYPERELLIPTIC_CLOSED,
    MCG_CLOSED,
    MCG_OPEN,
    SCHUR,
    SYMPLECTIC,
    InsufficientData,
    WindowTooSmall,
    betti_table,
    braid_series,
    closed_series,
    family_series,
    fit_rational,
    mcg_series,
    product_form_series,
    vanishing_report,
)
from homstab.symfunc import Window


def schur_slot(series, lam, z_max):
    return series.in_basis(sf.SCHUR).z_series(lam)[: z_max + 1]


# ---------------------------------------------------------------------------
# braid_series


def test_trivial_coefficients_give_one_minus_z():
    ser = braid_series(SCHUR, Window(0, 8, 2))
    assert schur_slot(ser, (), 8) == [1, -1] + [0] * 7


def test_second_exterior_power_slot_alternates():
    # s_2 slot carries lambda = (1,1): (1-z)/(1+z) = 1 - 2z + 2z^2 - ...
    ser = braid_series(SCHUR, Window(0, 6, 2))
    assert schur_slot(ser, (2,), 6) == [1, -2, 2, -2, 2, -2, 2]


def test_second_symmetric_power_slot_vanishes():
    # s_11 slot carries lambda = (2): zero by the width bound.
    ser = braid_series(SCHUR, Window(0, 8, 2))
    assert schur_slot(ser, (1, 1), 8) == [0] * 9


def test_narrow_window_rejected():
    with pytest.raises(WindowTooSmall):
        braid_series(SCHUR, Window(0, 4, 1))


def test_symplectic_variant_is_exp_minus_h2_twist():
    w = Window(0, 6, 6)
    schur_form = braid_series(SCHUR, w)
    symplectic_form = braid_series(SYMPLECTIC, w)
    twist = sf.pleth_exp(-sf.embed(sf.h(2, 6), w))
    assert sf.multiply(schur_form, twist) == symplectic_form


# ---------------------------------------------------------------------------
# closed_series and mcg_series


def test_closed_series_constant_slot_is_one():
    ser = closed_series(Window(0, 8, 2))
    assert schur_slot(ser, (), 8) == [1] + [0] * 8


def test_closed_series_has_no_odd_weight_terms():
    ser = closed_series(Window(0, 6, 8))
    for (k, lam), c in ser.in_basis(sf.SCHUR).terms.items():
        assert sum(lam) % 2 == 0, (k, lam, c)


def test_closed_series_arity_two_cancels_exactly():
    # The prefactor kills every weight-2 slot: in arity <= 2 the series
    # is (1/(1-z) + z*h_2/(1-z^2)) * ((1-z) - z*(1-z)/(1+z) * h_2) and
    # the h_2 contributions cancel term by term.
    ser = closed_series(Window(0, 8, 2))
    assert schur_slot(ser, (2,), 8) == [0] * 9
    assert schur_slot(ser, (1, 1), 8) == [0] * 9


def test_closed_series_first_nonzero_slots():
    ser = closed_series(Window(0, 2, 4)).in_basis(sf.SCHUR)
    # dim H_1 with (2,2)-coefficients is 1; slot carries the conjugate.
    assert ser.coefficient(1, (2, 2)) == -1
    assert ser.coefficient(2, (3, 1)) == 1


def test_closed_series_is_prefactor_times_symplectic_braid():
    # (1 + z + sum_j h_{2j} z^j) / (1 - z^2) times the symplectic braid
    # series, with every factor built from raw primitives.
    w = Window(0, 8, 6)
    num = sf.graded_const(1, w) + sf.z_pow(1, w)
    for j in range(1, w.max_arity // 2 + 1):
        num = num + sf.graded(sf.COMPLETE, {(j, (2 * j,)): Fraction(1)}, w)
    geom = sf.graded(sf.COMPLETE,
                     {(2 * i, ()): Fraction(1) for i in range(w.z_max // 2 + 1)},
                     w)
    assert num * geom * braid_series(SYMPLECTIC, w) == closed_series(w)


def test_open_mcg_constant_slot_counts_even_partitions():
    # Exp(z^2/(1-z^2)): partitions into even parts.
    ser = mcg_series("open", Window(0, 10, 2))
    row = schur_slot(ser, (), 10)
    expected = [len([p for p in partitions(k // 2)]) if k % 2 == 0 else 0
                for k in range(11)]
    assert row == expected


def test_mcg_s1_slot_open_versus_closed():
    # The degree-one class survives on the punctured surface; the extra
    # z*h_1 twist cancels it in the closed variant.
    w = Window(0, 4, 3)
    open_row = schur_slot(mcg_series("open", w), (1,), 4)
    closed_row = schur_slot(mcg_series("closed", w), (1,), 4)
    assert open_row == [0, -1, 0, -2, 0]
    assert closed_row == [0, 0, 0, -1, 0]


def test_mcg_closed_is_open_times_exp_zh1():
    w = Window(0, 8, 6)
    zh1 = sf.graded(sf.COMPLETE, {(1, (1,)): Fraction(1)}, w)
    assert mcg_series("open", w) * sf.pleth_exp(zh1) == mcg_series("closed", w)


def test_closed_and_open_mcg_agree_in_arity_zero():
    wo = Window(0, 8, 2)
    open_row = schur_slot(mcg_series("open", wo), (), 8)
    closed_row = schur_slot(mcg_series("closed", wo), (), 8)
    assert open_row == closed_row


def test_family_series_dispatch():
    w = Window(0, 4, 2)
    assert family_series(BRAID_SCHUR, w) == braid_series(SCHUR, w)
    assert family_series(BRAID_SYMPLECTIC, w) == braid_series(SYMPLECTIC, w)
    assert family_series(HYPERELLIPTIC_CLOSED, w) == closed_series(w)
    assert family_series(MCG_OPEN, w) == mcg_series("open", w)
    assert family_series(MCG_CLOSED, w) == mcg_series("closed", w)


# ---------------------------------------------------------------------------
# product_form_series


def test_product_form_matches_plethystic_form():
    w = Window(0, 8, 8)
    assert product_form_series(w) == braid_series(SCHUR, w)


def test_product_form_arity_zero_cancels_to_one_minus_z():
    ser = product_form_series(Window(0, 10, 2))
    assert schur_slot(ser, (), 10) == [1, -1] + [0] * 9


# ---------------------------------------------------------------------------
# betti_table


def test_betti_exterior_square_degree_zero():
    bt = betti_table(BRAID_SCHUR, [(1, 1)], 4)
    assert bt.entries[((1, 1), 0)] == 1


def test_betti_exterior_square_degree_three():
    bt = betti_table(BRAID_SCHUR, [(1, 1)], 4)
    assert bt.entries[((1, 1), 3)] == 2


def test_betti_symmetric_square_vanishes():
    bt = betti_table(BRAID_SCHUR, [(2,)], 8)
    assert all(bt.entries[((2,), k)] == 0 for k in range(9))


def test_betti_entries_nonnegative_integers():
    lams = [lam for w in range(0, 5) for lam in partitions(w)]
    bt = betti_table(BRAID_SCHUR, lams, 8)
    for value in bt.entries.values():
        assert isinstance(value, int)
        assert value >= 0


# ---------------------------------------------------------------------------
# vanishing_report


def test_symplectic_series_has_no_violations():
    ser = braid_series(SYMPLECTIC, Window(0, 8, 8))
    assert vanishing_report(ser) == []


def test_injected_monomial_is_flagged():
    bad = sf.graded(sf.SCHUR, {(0, (4,)): Fraction(1)}, Window(0, 2, 4))
    report = vanishing_report(bad)
    assert len(report) == 1
    assert report[0].z_exp == 0
    assert report[0].partition == (4,)


def test_closed_series_passes_vanishing():
    ser = closed_series(Window(0, 8, 8))
    for (k, lam), _ in ser.in_basis(sf.SCHUR).terms.items():
        assert sum(lam) % 2 == 0


# ---------------------------------------------------------------------------
# fit_rational


def test_fit_exterior_square_row():
    ser = braid_series(SCHUR, Window(0, 14, 2)).in_basis(sf.SCHUR)
    fit = fit_rational(ser.z_series((2,)), 6)
    assert str(fit) == "(1 - z)/(1 + z)"
    assert fit.num == (Fraction(1), Fraction(-1))
    assert fit.den == (1, 1)


def test_fit_trivial_row():
    ser = braid_series(SCHUR, Window(0, 14, 2)).in_basis(sf.SCHUR)
    fit = fit_rational(ser.z_series(()), 6)
    assert str(fit) == "1 - z"
    assert fit.den == (1,)


def test_fit_zero_row():
    fit = fit_rational([Fraction(0)] * 16, 6)
    assert str(fit) == "0"
    assert fit.num == ()


def test_fit_needs_enough_coefficients():
    with pytest.raises(InsufficientData):
        fit_rational([Fraction(1), Fraction(1)], 6)


# ---------------------------------------------------------------------------
# polynomial growth of Betti tails


@pytest.mark.parametrize(
    "lam",
    [(1, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1), (2, 2, 2), (3, 3)],
)
def test_betti_growth_degree_is_half_weight_minus_one(lam):
    # The Betti numbers are quasi-polynomial in k (the slope fluctuates
    # with a small period), so repeated finite differences never settle.
    # The robust statement is about the generating function: all poles
    # lie on the unit circle and the pole at z = 1 has order exactly
    # |lam|/2, i.e. growth of degree |lam|/2 - 1.
    weight = sum(lam)
    k_max = 2 * weight + 32
    bt = betti_table(BRAID_SCHUR, [lam], k_max)
    row = [Fraction(bt.entries[(lam, k)]) for k in range(k_max + 1)]
    fit = fit_rational(row, 6)
    # fit_rational only ever returns cyclotomic denominators, so a
    # successful fit already pins every pole to the unit circle.
    assert list(fit.factors).count(1) == weight // 2
