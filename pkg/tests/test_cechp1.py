from fractions import Fraction as QQ

import pytest

from liekoszul.cechp1 import (
    EquivariantSection,
    GluingError,
    IrrationalZeroError,
    RowModel,
    WindowError,
    _delta_matrix,
    assumption_check,
    atiyah_algebroid,
    cech_cohomology,
    cech_koszul,
    corollary_check,
    equivariant_H,
    first_page,
    fixed_point_set,
    line_bundle,
    lmat_flip,
    lmat_identity,
    lmat_mul,
    second_page_degeneration,
    vector_field_zeros,
    zero_section,
)
from liekoszul.complexes import betti, total
from liekoszul.exactla import ExactMatrix

from helpers import line_bundle_dims_by_counting


def test_line_bundle_cech_dims_match_counting_oracle():
    for d in range(-5, 5):
        assert cech_cohomology(line_bundle(d), 2) == line_bundle_dims_by_counting(d)


def test_cech_dims_stable_across_windows():
    for d in (-3, 0, 2):
        assert cech_cohomology(line_bundle(d), 1) == cech_cohomology(line_bundle(d), 4)


def test_window_guard_raises_on_truncated_image():
    # a window that cannot hold the chart-1 image must raise, never truncate
    sheaf = line_bundle(-2)
    bad = RowModel(sheaf, 1, chart0_hi=1, chart1_hi=(1,), window=((-1, 1),))
    with pytest.raises(WindowError):
        _delta_matrix(bad)


def test_random_rank_two_euler_characteristics():
    # h0 - h1 = degree + rank for any bundle on the line, an oracle that is
    # independent of the echelon machinery and of the window bookkeeping
    import random
    from liekoszul.cechp1 import SheafOnP1, lp_monomial
    rng = random.Random(17)
    for _ in range(40):
        a = rng.randrange(-3, 4)
        d = rng.randrange(-3, 4)
        b = rng.randrange(-3, 4)
        c = rng.choice([0, 1, -1, 2])
        sheaf = SheafOnP1(2, [[lp_monomial(a), lp_monomial(b, c)],
                              [lp_monomial(0, 0), lp_monomial(d)]])
        try:
            h0, h1 = cech_cohomology(sheaf, 2)
        except WindowError:
            h0, h1 = cech_cohomology(sheaf, 4)
        assert h0 - h1 == a + d + 2


def test_operator_bundle_cocycle_and_symbol():
    for d in range(-3, 4):
        a = atiyah_algebroid(d)  # constructor verifies both identities
        assert lmat_mul(a.transition, lmat_flip(a.transition)) == lmat_identity(2)
        assert a.transition[1][0] == {} and a.transition[1][1] == {2: QQ(-1)}
        if d == 0:
            assert a.transition[0][1] == {}  # block diagonal: O + tangent


def test_wedge_dual_dims():
    a0 = atiyah_algebroid(0)
    assert cech_cohomology(a0.wedge_dual(0), 2) == (1, 0)
    assert cech_cohomology(a0.wedge_dual(1), 2) == (1, 1)  # O + O(-2) pattern
    for d in range(-2, 4):
        det = atiyah_algebroid(d).wedge_dual(2)
        assert det.transition[0][0] == {-2: QQ(-1)}
        assert cech_cohomology(det, 2) == (0, 1)  # degree -2 regardless of d
        if d != 0:
            assert cech_cohomology(atiyah_algebroid(d).wedge_dual(1), 2) == (0, 0)


def test_equivariant_section_gluing():
    a1 = atiyah_algebroid(1)
    v = EquivariantSection(a1, (2, 3, 5))
    # chart-1 data is solved: w1 = -(2 z^2 + 3 z + 5), f1 = d*b + d*a*z
    assert v.w1 == {0: QQ(-5), 1: QQ(-3), 2: QQ(-2)}
    assert v.f1 == {0: QQ(3), 1: QQ(2)}
    assert v.f0 == {1: QQ(-5)}
    with pytest.raises(GluingError):
        EquivariantSection(a1, (0, 0, 1), scalar0=["0", "5"])  # forced -d*c = -1
    EquivariantSection(a1, (0, 0, 1), scalar0=["7", "-1"])  # admissible


def test_cech_koszul_zero_section_has_zero_contractions():
    a0 = atiyah_algebroid(0)
    model = cech_koszul(a0, zero_section(a0), 1)
    for p in (-2, -1):
        for q in (0, 1):
            assert model.double.dh(p, q).is_zero()


def test_cech_koszul_double_complex_valid():
    # construction verifies delta^2 = 0, i_V^2 = 0 and anticommutation
    a0 = atiyah_algebroid(0)
    model = cech_koszul(a0, EquivariantSection(a0, (0, 1, 0)), 1)
    assert model.double.p_lo == -2 and model.double.q_hi == 1
    assert not model.double.dh(-1, 0).is_zero()


def test_equivariant_h_zero_section_matches_first_page_sum():
    for d in (-2, 0, 3):
        a = atiyah_algebroid(d)
        hdims = equivariant_H(a, zero_section(a), 1)
        grid = first_page(a, 1).grid
        for k in hdims:
            assert hdims[k] == sum(v for (p, q), v in grid.items() if p + q == k)


def test_equivariant_h_examples():
    a0 = atiyah_algebroid(0)
    assert {k: v for k, v in equivariant_H(a0, zero_section(a0), 1).items() if v} \
        == {0: 2, -1: 2}
    v = EquivariantSection(a0, (0, 1, 0))
    assert {k: v_ for k, v_ in equivariant_H(a0, v, 1).items() if v_} == {0: 2, -1: 2}
    assert {k: v_ for k, v_ in equivariant_H(a0, v, 1, untwisted=True).items() if v_} \
        == {0: 2}


def test_unit_scalar_section_is_acyclic():
    a0 = atiyah_algebroid(0)
    v = EquivariantSection(a0, (0, 1, 0), scalar0=["1"])
    assert all(d == 0 for d in equivariant_H(a0, v, 1).values())


def test_euler_characteristic_invariance_over_sections():
    a0 = atiyah_algebroid(0)
    sections = [
        zero_section(a0),
        EquivariantSection(a0, (0, 1, 0)),
        EquivariantSection(a0, (0, 1, 0), scalar0=["1"]),
        EquivariantSection(a0, (-1, 0, 1)),
        EquivariantSection(a0, (0, 0, 1)),
        EquivariantSection(a0, (1, 0, 0)),
    ]
    chis = set()
    for s in sections:
        h = equivariant_H(a0, s, 1)
        chis.add(sum((-v if k % 2 else v) for k, v in h.items()))
    assert len(chis) == 1


def test_euler_characteristic_invariance_other_degrees():
    for d in (1, -1, 3):
        a = atiyah_algebroid(d)
        chi = lambda h: sum((-v if k % 2 else v) for k, v in h.items())
        base = chi(equivariant_H(a, zero_section(a), 1))
        assert chi(equivariant_H(a, EquivariantSection(a, (0, 1, 0)), 1)) == base


def test_untwisted_matches_handbuilt_model():
    # independent construction: functions row (chart deg <= 3, window [-3,3])
    # and forms row (chart0 deg <= 2, chart1 deg <= 1, window [-3,2]),
    # with delta and contraction by z d/dz assembled directly.
    f_chart = [("0", e) for e in range(4)] + [("1", e) for e in range(4)]
    f_win = list(range(-3, 4))
    w_chart = [("0", e) for e in range(3)] + [("1", e) for e in range(2)]
    w_win = list(range(-3, 3))

    def mat(rows, cols, entries):
        m = [[QQ(0)] * len(cols) for _ in range(len(rows))]
        for (r, c), val in entries.items():
            m[rows.index(r)][cols.index(c)] += QQ(val)
        return ExactMatrix.from_rows(m) if rows and cols else ExactMatrix.zeros(
            len(rows), len(cols))

    # Cech differential on functions: (s0, s1) -> s1(1/z) - s0
    df = {}
    for side, e in f_chart:
        df[((-e if side == "1" else e), (side, e))] = 1 if side == "1" else -1
    delta_fun = mat(f_win, f_chart, df)
    # on forms: chart-1 g dz' pulls back via -z^{-2}
    dw = {}
    for side, e in w_chart:
        if side == "0":
            dw[(e, (side, e))] = -1
        else:
            dw[((-2 - e), (side, e))] = -1
    delta_form = mat(w_win, w_chart, dw)
    # contraction by z d/dz: chart0 multiply by z; chart1 by -zeta; window by z
    ch = {}
    for side, e in w_chart:
        ch[((side, e + 1), (side, e))] = 1 if side == "0" else -1
    iv_chart = mat(f_chart, w_chart, ch)
    iv_win = mat(f_win, w_win, {(e + 1, e): 1 for e in w_win})

    from liekoszul.complexes import DoubleComplex
    dims = {(-1, 0): len(w_chart), (-1, 1): len(w_win),
            (0, 0): len(f_chart), (0, 1): len(f_win)}
    hand = DoubleComplex.from_commuting(
        -1, 0, 0, 1, dims,
        {(-1, 0): iv_chart, (-1, 1): iv_win},
        {(-1, 0): delta_form, (0, 0): delta_fun})
    hand_betti = {k: v for k, v in betti(total(hand)).items() if v}

    a0 = atiyah_algebroid(0)
    v = EquivariantSection(a0, (0, 1, 0))
    engine = {k: v_ for k, v_ in equivariant_H(a0, v, 1, untwisted=True).items() if v_}
    assert hand_betti == engine == {0: 2}


def test_vector_field_zeros_and_assumption():
    a0 = atiyah_algebroid(0)
    assert vector_field_zeros(EquivariantSection(a0, (0, 1, 0))) == [
        (QQ(0), 1), ("infinity", 1)]
    assert assumption_check(a0, EquivariantSection(a0, (0, 1, 0)))
    assert not assumption_check(a0, EquivariantSection(a0, (0, 0, 1)))  # double zero
    assert assumption_check(a0, EquivariantSection(a0, (-1, 0, 1)))     # +-1 simple
    assert not assumption_check(a0, EquivariantSection(a0, (1, 0, 0)))  # double at inf
    assert not assumption_check(a0, zero_section(a0))
    with pytest.raises(IrrationalZeroError):
        vector_field_zeros(EquivariantSection(a0, (-2, 0, 1)))  # roots sqrt(2)


def test_fixed_points_respect_scalar_part():
    a0 = atiyah_algebroid(0)
    v = EquivariantSection(a0, (0, 1, 0))
    assert fixed_point_set(v, untwisted=False) == [QQ(0), "infinity"]
    lifted = EquivariantSection(a0, (0, 1, 0), scalar0=["1"])
    assert fixed_point_set(lifted, untwisted=False) == []
    assert fixed_point_set(lifted, untwisted=True) == [QQ(0), "infinity"]
    # twisting obstructs the lift at infinity
    a2 = atiyah_algebroid(2)
    v2 = EquivariantSection(a2, (0, 1, 0))
    assert fixed_point_set(v2, untwisted=False) == [QQ(0)]


def test_corollary_untwisted_and_twisted():
    a0 = atiyah_algebroid(0)
    v = EquivariantSection(a0, (0, 1, 0))
    rep = corollary_check(a0, v, 1, untwisted=True)
    assert rep.predicted == {0: 2} and rep.match
    rep2 = corollary_check(a0, v, 1)
    assert rep2.predicted == {0: 2, -1: 2} and rep2.match
    two = corollary_check(a0, EquivariantSection(a0, (-1, 0, 1)), 1, untwisted=True)
    assert len(two.fixed_points) == 2 and two.match
    with pytest.raises(GluingError):
        corollary_check(a0, EquivariantSection(a0, (0, 0, 1)), 1)


def test_corollary_scales_with_fixed_point_count():
    a0 = atiyah_algebroid(0)
    for coeffs in [(0, 1, 0), (-1, 0, 1), (0, 1, -1)]:
        rep = corollary_check(a0, EquivariantSection(a0, coeffs), 1, untwisted=True)
        assert rep.predicted == {0: len(rep.fixed_points)}
        assert rep.match


def test_corollary_obstructed_lift():
    # d != 0: the canonical lift of z d/dz vanishes only at z = 0 because the
    # chart-1 scalar part is the nonzero constant d there
    for d in (2, 1, -1, 3):
        a = atiyah_algebroid(d)
        v = EquivariantSection(a, (0, 1, 0))
        rep = corollary_check(a, v, 1)
        assert rep.fixed_points == (QQ(0),)
        assert rep.predicted == {0: 1, -1: 1}
        assert rep.match


def test_corollary_twisted_two_finite_fixed_points():
    a0 = atiyah_algebroid(0)
    v = EquivariantSection(a0, (-1, 0, 1))  # zeros at +-1, none at infinity
    rep = corollary_check(a0, v, 1)
    assert set(rep.fixed_points) == {QQ(1), QQ(-1)}
    assert rep.predicted == {0: 2, -1: 2} and rep.match


def test_first_page_grids():
    grid0 = first_page(atiyah_algebroid(0), 1).grid
    assert {k: v for k, v in grid0.items() if v} == {
        (0, 0): 1, (-1, 0): 1, (-1, 1): 1, (-2, 1): 1}
    for d in (-2, 1, 3):
        grid = first_page(atiyah_algebroid(d), 1).grid
        assert {k: v for k, v in grid.items() if v} == {(0, 0): 1, (-2, 1): 1}


def test_first_page_untwisted():
    rep = first_page(atiyah_algebroid(0), 1, untwisted=True)
    assert {k: v for k, v in rep.grid.items() if v} == {(0, 0): 1, (-1, 1): 1}
    assert rep.consistent


def test_window_radius_must_be_positive():
    with pytest.raises(WindowError):
        cech_cohomology(line_bundle(0), 0)
    a0 = atiyah_algebroid(0)
    with pytest.raises(WindowError):
        cech_koszul(a0, zero_section(a0), 0)


def test_first_page_engine_consistency_and_d1():
    a0 = atiyah_algebroid(0)
    rep = first_page(a0, 1, EquivariantSection(a0, (0, 1, 0)))
    assert rep.consistent
    assert all(r == 0 for r in rep.d1_ranks.values())


def test_wedge_filtration_graded_pieces_are_cells():
    # quotients F_p / F_{p+1} in total degree p+q have the (p, q) cell dims
    a0 = atiyah_algebroid(0)
    model = cech_koszul(a0, EquivariantSection(a0, (0, 1, 0)), 1)
    from liekoszul.complexes import column_filtration
    filt = column_filtration(model.double)
    for p in range(-2, 1):
        for q in (0, 1):
            n = p + q
            got = filt.level(p, n).dim - filt.level(p + 1, n).dim
            assert got == model.double.cell_dim(p, q)


def test_wedge_filtration_converges_for_zero_section():
    from liekoszul.complexes import column_filtration
    from liekoszul.specseq import check_convergence
    for d in (-2, 0, 2):
        a = atiyah_algebroid(d)
        model = cech_koszul(a, zero_section(a), 1)
        filt = column_filtration(model.double)
        assert check_convergence(filt)
        # and the limit totals are the zero-section cohomology of the remark
        from liekoszul.specseq import run as ss_run
        totals = ss_run(filt).infinity_totals()
        h = equivariant_H(a, zero_section(a), 1)
        for k, v in h.items():
            assert totals.get(k, 0) == v


def test_second_page_degeneration_examples():
    a0 = atiyah_algebroid(0)
    v = EquivariantSection(a0, (0, 1, 0))
    rep = second_page_degeneration(a0, v, 1)
    assert rep.ok and rep.degeneration_page <= 2
    rep0 = second_page_degeneration(a0, zero_section(a0), 1)
    assert rep0.ok
    repu = second_page_degeneration(a0, v, 1, untwisted=True)
    assert repu.ok
    # limit totals agree with the equivariant cohomology
    h = equivariant_H(a0, v, 1)
    totals = {}
    for (q, k_minus_q), dim in rep.einf_dims.items():
        n = q + k_minus_q
        totals[n] = totals.get(n, 0) + dim
    assert totals == {k: v_ for k, v_ in h.items() if v_}
