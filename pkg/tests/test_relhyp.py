from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lhyp.catalog import (DirectProduct, FiniteGroup, FreeGroup, LengthTable,
                          word_length_table)
from lhyp.errors import ConstructionError, InputError
from lhyp.ordgroup import LexElem
from lhyp.relhyp import (RelCayley, check_Pn, check_proper, check_qi, pn_L,
                         pn_threshold, scale_lengths, short_pair_report,
                         verify_relhyp_geodesics)

from helpers import L, f2_table, z_table

Z = FreeGroup(1)
F2 = FreeGroup(2)


def z_rc(N=2, radius=5, table_radius=10):
    return RelCayley(Z, z_table(table_radius), N, radius)


def f2_rc(N=1, radius=2, table_radius=4):
    return RelCayley(F2, f2_table(table_radius), N, radius)


def z_like_table(lengths):
    """Ad hoc symmetric table on powers of the Z generator."""
    values = {Z.identity(): L(0)}
    for k, v in lengths.items():
        values[(1,) * k] = L(v)
        values[(-1,) * k] = L(v)
    return LengthTable(Z, values)


# -- coset graphs ---------------------------------------------------------


def test_z_coset_graph_golden():
    rc = z_rc()
    assert len(rc) == 11
    assert rc.labels[0] == "1"
    i5 = rc.index("aaaaa")
    assert rc.dist[0][i5] == L(5)
    assert rc.rel_dist[0][i5] == 5
    assert rc.coset_length(i5) == L(5)
    assert rc.weight(0, i5) is None  # 5 > N, the edge is dropped
    assert rc.weight(rc.index("aaa"), i5) == L(2)
    assert rc.weight(0, 0) == L(0)
    with pytest.raises(InputError):
        rc.index("bb")


def test_f2_coset_graph_golden():
    rc = f2_rc()
    assert len(rc) == 17
    rep = check_qi(rc)
    assert rep.pairs_checked == 136 and rep.unreachable == 0
    assert rep.N_prime == 1
    assert rep.alpha == L(0) and rep.alpha_star == L(1)
    assert rep.upper_ok and rep.lower_ok and rep.witness is None


def test_kernel_cosets_fold_a_finite_factor():
    G = DirectProduct(FiniteGroup.cyclic(2), Z)
    values = {}
    for c in range(2):
        for k in range(-8, 9):
            z = (1,) * k if k >= 0 else (-1,) * (-k)
            values[(c, z)] = L(abs(k))
    table = LengthTable(G, values)
    rc = RelCayley(G, table, N=2, radius=4)
    assert len(rc) == 9
    assert all(len(mem) == 2 for mem in rc.members)
    assert rc.dist[0][rc.index("1|aaaa")] == L(4)


def test_z_qi_report_golden():
    rep = check_qi(z_rc())
    assert rep.N_prime == 2
    assert rep.alpha == L(0) and rep.alpha_star == L(1)
    assert rep.pairs_checked == 55 and rep.unreachable == 0
    assert rep.upper_ok and rep.lower_ok


# -- short pairs ----------------------------------------------------------


def test_z_short_pairs_collapse():
    rep = short_pair_report(z_rc())
    assert rep.checked == 18
    assert rep.ok and rep.witness is None


def test_short_pair_failure_is_witnessed():
    # a length bump makes the two-step 1 -> a -> aa geodesic with no
    # direct edge of weight <= N left to replace it
    table = z_like_table({1: 1, 2: 3, 3: 4, 4: 5, 5: 6, 6: 7})
    rc = RelCayley(Z, table, N=2, radius=3)
    rep = short_pair_report(rc)
    assert not rep.ok
    u, m, v = rep.witness
    iu, im, iv = rc.index(u), rc.index(m), rc.index(v)
    assert rc.weight(iu, im) + rc.weight(im, iv) == rc.dist[iu][iv]
    assert rc.weight(iu, iv) is None


# -- geodesic inequalities ------------------------------------------------


def test_z_two_edge_geodesics():
    rep = verify_relhyp_geodesics(z_rc(), 1, L(0))
    assert rep.two_edge_checked == 8 and rep.two_edge_ok
    assert rep.three_edge_checked == 0 and rep.three_edge_ok
    assert rep.witness is None


def test_z_three_edge_geodesics_at_wider_n():
    rc = z_rc(N=4, radius=5)
    rep = verify_relhyp_geodesics(rc, 1, L(0))
    assert rep.two_edge_checked > 0 and rep.two_edge_ok
    assert rep.three_edge_checked > 0 and rep.three_edge_ok


def test_geodesic_report_input_errors():
    rc = z_rc()
    with pytest.raises(InputError):
        verify_relhyp_geodesics(rc, 0, L(0))
    with pytest.raises(InputError):
        verify_relhyp_geodesics(rc, 1, LexElem((0, 0)))


@given(st.integers(min_value=1, max_value=3),
       st.integers(min_value=3, max_value=6))
def test_z_reports_hold_at_any_truncation(N, radius):
    rc = RelCayley(Z, z_table(12), N, radius)
    assert len(rc) == 2 * radius + 1
    assert short_pair_report(rc).ok
    qi = check_qi(rc)
    assert qi.upper_ok and qi.lower_ok
    geo = verify_relhyp_geodesics(rc, 1, L(0))
    assert geo.two_edge_ok and geo.three_edge_ok


# -- rescaling ------------------------------------------------------------


def test_scaled_table_gives_the_same_verdicts():
    rc = z_rc()
    rc3 = RelCayley(Z, scale_lengths(z_table(10), 3), N=6, radius=15)
    assert rc3.labels == rc.labels
    for i in range(len(rc)):
        assert rc3.dist[0][i] == rc.dist[0][i] * 3
    assert short_pair_report(rc3).ok == short_pair_report(rc).ok
    a, b = check_qi(rc3), check_qi(rc)
    assert (a.upper_ok, a.lower_ok) == (b.upper_ok, b.lower_ok)
    assert a.alpha_star == b.alpha_star * 3
    g3 = verify_relhyp_geodesics(rc3, 2, L(0))
    g1 = verify_relhyp_geodesics(rc, 2, L(0))
    assert (g3.two_edge_checked, g3.three_edge_checked) == \
        (g1.two_edge_checked, g1.three_edge_checked)
    assert g3.two_edge_ok and g3.three_edge_ok


def test_scale_needs_a_positive_factor():
    with pytest.raises(InputError):
        scale_lengths(z_table(4), 0)


# -- ball property --------------------------------------------------------


def test_f2_ball_property_golden():
    rep = check_Pn(F2, f2_table(4), 1, 2)
    assert rep.alpha == L(0) and rep.alpha_ok
    assert rep.generates
    assert rep.double_cosets == 5


def test_pn_zero_table_collapses_to_one_double_coset():
    G = FiniteGroup.cyclic(3)
    table = LengthTable(G, {g: L(0) for g in range(3)})
    rep = check_Pn(G, table, 0, 0)
    assert rep.alpha is None and rep.alpha_ok
    assert rep.generates
    assert rep.double_cosets == 1


def test_pn_needs_sane_arguments():
    with pytest.raises(InputError):
        check_Pn(F2, f2_table(4), 3, 2)
    with pytest.raises(InputError):
        pn_threshold(-1)
    with pytest.raises(InputError):
        pn_L(-1)


def test_threshold_brackets_are_certified():
    t = pn_threshold(0)
    assert t.lower == Fraction(363321, 8)
    assert t.upper == Fraction(1453287, 32)
    assert 45415 < t.lower < t.upper < 45416
    assert t.render() == ("6144*log2(154) + 768 + 2288*0 "
                          "in [363321/8, 1453287/32)")
    lo = pn_L(0)
    assert lo.lower == Fraction(363321, 32)
    assert lo.upper == Fraction(1453287, 128)
    assert lo.upper - lo.lower == Fraction(1536, 65536)
    assert 11353 < lo.lower < lo.upper < 11354


@given(st.integers(min_value=0, max_value=40))
def test_threshold_is_affine_in_delta(d):
    t0, td = pn_threshold(0), pn_threshold(d)
    assert td.lower == t0.lower + 2288 * d
    assert td.upper == t0.upper + 2288 * d
    l0, ld = pn_L(0), pn_L(d)
    assert ld.lower == l0.lower + 572 * d
    # the threshold is exactly four times L, including the brackets
    assert 4 * ld.lower == td.lower and 4 * ld.upper == td.upper


# -- properness tabulation ------------------------------------------------


def test_proper_rows_for_the_free_group():
    rep = check_proper(F2, f2_table(4), 2)
    assert rep.radius == 2 and rep.alpha == L(0)
    rows = [(r.N, r.ball_size, r.rel_diameter) for r in rep.rows]
    assert rows == [(1, 5, 1), (2, 17, 2)]


def test_proper_radius_must_be_positive():
    with pytest.raises(InputError):
        check_proper(F2, f2_table(4), 0)


# -- construction errors --------------------------------------------------


def test_relcayley_argument_validation():
    with pytest.raises(InputError):
        RelCayley(Z, z_table(4), 0, 2)
    with pytest.raises(InputError):
        RelCayley(Z, z_table(10), 1, 5, gens=[Z.parse("aa")])


def test_relcayley_needs_a_wide_enough_table():
    with pytest.raises(InputError):
        RelCayley(Z, z_table(6), 2, 5)


def test_relcayley_detects_asymmetric_lengths():
    table = LengthTable(Z, {(): L(0), (1,): L(1), (-1,): L(2)})
    with pytest.raises(InputError):
        RelCayley(Z, table, 1, 1)


def test_relcayley_rejects_length_varying_on_a_coset():
    G = DirectProduct(FiniteGroup.cyclic(2), Z)
    values = {(0, ()): L(0), (1, ()): L(0),
              (0, (1,)): L(1), (1, (1,)): L(5),
              (0, (-1,)): L(1), (1, (-1,)): L(5)}
    with pytest.raises(InputError):
        RelCayley(G, LengthTable(G, values), 1, 1)


def test_relcayley_disconnected_truncation():
    # a^5 is a vertex but every edge out of it weighs more than N
    table = z_like_table({1: 1, 2: 7, 4: 9, 5: 5, 6: 11, 10: 15})
    with pytest.raises(ConstructionError):
        RelCayley(Z, table, 2, 5)
