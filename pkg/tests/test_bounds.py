import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensorbounds.bounds import (
    BoundInputs,
    BoundKind,
    HypothesisError,
    HypothesisStatus,
    MissingDeterminantError,
    ParameterError,
    TheoremId,
    all_bounds,
    bound_inputs,
    gershgorin_disks,
    gershgorin_interval,
    lambda_max_upper_best,
    lambda_min_bounds,
    t1_sum_upper,
    t1_tail_product_lower,
    t2_chain,
    t3_bracket,
    t4_product_upper,
    t4_tail_product_lower,
    t5_product_bracket,
    t6_sum_upper,
)
from tensorbounds.tensor import from_unique_entries, identity_tensor

from reference import dense
from soundness import check_all, inputs_from

spectra = st.lists(st.floats(0.05, 60, allow_nan=False), min_size=2, max_size=12)


@settings(max_examples=300, deadline=None)
@given(spectra)
def test_bounds_hold_on_positive_spectra(lams):
    check_all(lams)


@pytest.mark.parametrize(
    "lams",
    [[1.1] * 3 + [1.0] * 3, [5.0] * 7, [100.0, 1e-3], [3.0, 2.0, 1.0], [50.0] + [0.1] * 9],
)
def test_bounds_hold_on_edge_spectra(lams):
    check_all(lams)


# Frozen values for d = 6, S = 66, det = 846720 by direct arithmetic.
COUPLED = BoundInputs(6, 66.0, 846720.0)


def test_frozen_coupled_quartic_values():
    assert t1_sum_upper(COUPLED, 1).value == pytest.approx(66 - 5 * (846720 / 66) ** (1 / 5), rel=1e-13)
    assert t4_product_upper(COUPLED, 1).value == pytest.approx(
        ((1 / 846720) * ((1 / 5) * 33**2) ** 5) ** (1 / 4), rel=1e-13
    )
    assert t6_sum_upper(COUPLED, 1).value == pytest.approx(4 / 846720 * (66 / 7) ** 7, rel=1e-13)
    assert t1_tail_product_lower(COUPLED, 1).value == pytest.approx((5 / 66) ** 5 * 846720, rel=1e-13)
    assert lambda_min_bounds(COUPLED).lower_simple == pytest.approx(846720 / 66)


def test_frozen_values_rounded():
    assert round(t1_sum_upper(COUPLED, 1).value, 2) == 32.84
    assert round(t4_product_upper(COUPLED, 1).value, 2) == 27.58
    assert round(t6_sum_upper(COUPLED, 1).value, 2) == 31.29


def test_simple_lower_bound_for_diagonal_quartic():
    inp = BoundInputs(6, 6.3, 1.331)
    assert lambda_min_bounds(inp).lower_simple == pytest.approx(0.21127, abs=1e-5)


@pytest.mark.parametrize(
    "fn,bad",
    [
        (t1_sum_upper, [0, 6]),
        (t1_tail_product_lower, [0, 6]),
        (t4_product_upper, [0, 5]),
        (t4_tail_product_lower, [1, 6]),
        (t6_sum_upper, [0, 7]),
    ],
)
def test_parameter_ranges(fn, bad):
    for k in bad:
        with pytest.raises(ParameterError):
            fn(COUPLED, k)


def test_bracket_ranges():
    with pytest.raises(ParameterError):
        t3_bracket(COUPLED, 3, 2)
    with pytest.raises(ParameterError):
        t5_product_bracket(COUPLED, 1, 5)
    with pytest.raises(ParameterError):
        t1_sum_upper(COUPLED, 1.5)


@pytest.mark.parametrize("S,det", [(0.0, 1.0), (-3.0, 1.0), (6.0, 0.0), (6.0, -2.0)])
def test_hypothesis_error(S, det):
    with pytest.raises(HypothesisError):
        t6_sum_upper(BoundInputs(6, S, det), 1)


@settings(max_examples=100, deadline=None)
@given(spectra, st.floats(0.1, 10))
def test_sum_bounds_scale_linearly(lams, c):
    inp = inputs_from(lams)
    scaled = inp.scaled(c)
    assert t6_sum_upper(scaled, 1).value == pytest.approx(c * t6_sum_upper(inp, 1).value, rel=1e-9)
    assert t1_sum_upper(scaled, 1).value == pytest.approx(c * t1_sum_upper(inp, 1).value, rel=1e-9, abs=1e-9 * c * inp.S)
    assert t1_tail_product_lower(scaled, 1).value == pytest.approx(c * t1_tail_product_lower(inp, 1).value, rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 40), st.floats(0.1, 100), st.floats(1e-6, 1.0))
def test_t6_monotone_in_k(d, mean, ratio):
    # Random (d, S, det) triple with det <= (S/d)^d, as AM-GM requires of a positive spectrum.
    S = d * mean
    det = ratio * mean**d
    inp = BoundInputs(d, S, det)
    values = [t6_sum_upper(inp, k).value for k in range(1, d + 1)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_log_space_matches_direct_path():
    lams = [3.0] * 100 + [2.0] * 100
    inp = inputs_from(lams)
    val = t6_sum_upper(inp, 1).value
    assert math.isfinite(val) and val >= 3.0
    expected = math.exp(2 * math.log(2) - sum(math.log(x) for x in lams) + 201 * math.log(inp.S / 201))
    assert val == pytest.approx(expected, rel=1e-9)
    check_all([3.0] * 30 + [2.0] * 30)


def test_constant_spectrum():
    inp = inputs_from([1.0] * 6)
    for b in t2_chain(inp, 3):
        assert b.value == pytest.approx(1.0)
    assert t1_sum_upper(inp, 1).value == pytest.approx(6 - 5 * (1 / 6) ** (1 / 5))
    assert t6_sum_upper(inp, 1).value >= 1.0
    check_all([1.0] * 6)


def test_best_upper_picks_smallest():
    value, source = lambda_max_upper_best(COUPLED)
    assert source is TheoremId.T4_PROD_UPPER
    assert value == pytest.approx(min(t1_sum_upper(COUPLED, 1).value, t4_product_upper(COUPLED, 1).value, t6_sum_upper(COUPLED, 1).value))


def test_all_bounds_skips_out_of_range():
    rows = all_bounds(inputs_from([2.0, 1.0]), k=1)
    ids = {b.theorem_id for b in rows}
    assert TheoremId.T4_PROD_UPPER not in ids
    assert TheoremId.T1_SUM_UPPER in ids
    assert {TheoremId.MIN_EIG_LOWER_SIMPLE, TheoremId.MIN_EIG_UPPER_MEAN} <= ids


def test_all_bounds_kinds():
    rows = all_bounds(COUPLED, k=2, l=3)
    t3 = [b for b in rows if b.theorem_id is TheoremId.T3_BRACKET]
    assert len(t3) == 2 and all(b.kind is BoundKind.INTERVAL for b in t3)
    assert any(b.theorem_id is TheoremId.T4_TAIL_PROD_LOWER for b in rows)


# Gershgorin ---------------------------------------------------------------


def brute_radii(t):
    a = dense(t)
    n, m = t.dimension, t.order
    out = []
    for i in range(n):
        total = 0.0
        for rest in product(range(n), repeat=m - 1):
            if rest != (i,) * (m - 1):
                total += abs(a[(i,) + rest])
        out.append(total)
    return out


def test_gershgorin_coupled_quartic(coupled_quartic):
    disks = gershgorin_disks(coupled_quartic)
    assert [(g.center, g.radius) for g in disks] == [(12.0, 6.0), (10.0, 6.0)]
    assert gershgorin_interval(disks) == (4.0, 18.0)


def test_gershgorin_sextic(sextic):
    disks = gershgorin_disks(sextic)
    assert [(g.center, g.radius) for g in disks] == [(10.0, 60.0), (8.0, 42.0)]
    assert gershgorin_interval(disks) == (-50.0, 70.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.data())
def test_gershgorin_radius_matches_raw_sum(m, n, data):
    from tensorbounds.tensor import all_canonical_indices

    keys = list(all_canonical_indices(m, n))
    vals = data.draw(st.lists(st.integers(-9, 9), min_size=len(keys), max_size=len(keys)))
    t = from_unique_entries(m, n, dict(zip(keys, map(float, vals))))
    assert [g.radius for g in gershgorin_disks(t)] == pytest.approx(brute_radii(t))


def test_identity_disks_have_zero_radius():
    assert all(g.radius == 0 and g.center == 1 for g in gershgorin_disks(identity_tensor(5, 3)))


# Inputs -------------------------------------------------------------------


def test_bound_inputs_n2(coupled_quartic, sextic):
    inp = bound_inputs(coupled_quartic)
    assert (inp.d, inp.S) == (6, 66.0)
    assert inp.det == pytest.approx(846720)
    assert inp.status is HypothesisStatus.VERIFIED_POSITIVE
    assert bound_inputs(sextic).status is HypothesisStatus.VIOLATED


def test_bound_inputs_matrix_path():
    t = from_unique_entries(2, 3, {(1, 1): 2.0, (1, 2): 1.0, (2, 2): 2.0, (3, 3): 1.0})
    inp = bound_inputs(t)
    assert inp.det == pytest.approx(3.0)
    assert inp.d == 3


def test_bound_inputs_requires_determinant_for_large_dimension():
    t = identity_tensor(4, 3)
    with pytest.raises(MissingDeterminantError, match="det="):
        bound_inputs(t)
    inp = bound_inputs(t, det=1.0)
    assert inp.status is HypothesisStatus.ASSUMED
    assert inp.d == 27 and inp.S == 27.0
