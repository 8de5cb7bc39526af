"""Filtered phi-modules: degrees, slopes, admissibility, constructions."""

import random
from fractions import Fraction

import pytest

from padic_hodge.padics import UnramifiedField
from padic_hodge.modules import (FilteredPhiModule, Subspace,
                                 modular_form_module, tensor_slope_check)
from padic_hodge.errors import (EnumerationUnsupportedError, NotStableError,
                                PadicError)
from padic_hodge import generators as gen


def full2(field):
    return Subspace(field, 2, [[field.one(), field.zero()],
                               [field.zero(), field.one()]])


def line(field, vec):
    return Subspace(field, 2, [[field.coerce(c) for c in vec]])


def unit_module(field):
    return FilteredPhiModule(field, [[field.one()]],
                             [(0, Subspace(field, 1, [[field.one()]]))])


# -- degrees -----------------------------------------------------------------

def test_hodge_degree_examples(K5):
    m1 = FilteredPhiModule(K5, [[K5.coerce(Fraction(1, 5))]],
                           [(-1, Subspace(K5, 1, [[K5.one()]]))])
    h, th = m1.hodge_degree()
    assert th == -1 and h == {-1: 1}
    mf = modular_form_module(5, 2, 0, field=K5)
    h, th = mf.hodge_degree()
    assert th == -1 and h == {-1: 1, 0: 1}
    m0 = unit_module(K5)
    assert m0.hodge_degree() == ({0: 1}, 0)


def test_newton_slopes_diagonal(K5):
    a, b = 2, -1
    A = [[K5.coerce(5 ** a), K5.zero()], [K5.zero(), K5.coerce(Fraction(1, 5))]]
    m = FilteredPhiModule(K5, A, [(0, full2(K5))])
    assert m.newton_slopes() == sorted([Fraction(a), Fraction(b)])


def test_newton_slopes_companion(K5):
    A = [[K5.zero(), K5.coerce(-5)], [K5.one(), K5.zero()]]
    m = FilteredPhiModule(K5, A, [(0, full2(K5))])
    assert m.newton_slopes() == [Fraction(1, 2), Fraction(1, 2)]


def test_newton_slopes_semilinear(K25):
    # dim 2 over the unramified quadratic: A antidiagonal (0 p; 1 0) has
    # A sigma(A) = p * Id, so both slopes are 1/2
    A = [[K25.zero(), K25.coerce(5)], [K25.one(), K25.zero()]]
    full = Subspace(K25, 2, [[K25.one(), K25.zero()],
                             [K25.zero(), K25.one()]])
    m = FilteredPhiModule(K25, A, [(0, full)])
    assert m.newton_slopes() == [Fraction(1, 2), Fraction(1, 2)]
    assert m.t_N == 1


# -- stable subspaces ---------------------------------------------------------

def test_stable_subspaces_dim1(K5):
    m = unit_module(K5)
    subs = m.phi_stable_subspaces()
    assert [s.dimension for s in subs] == [0, 1]


def test_stable_subspaces_ordinary(K5):
    m = modular_form_module(5, 2, 1, field=K5)
    subs = m.phi_stable_subspaces()
    assert [s.dimension for s in subs] == [0, 1, 1, 2]
    # the two lines are eigenlines with t_N 0 and -1
    tns = sorted(m.sub_degrees(s)[1] for s in subs if s.dimension == 1)
    assert tns == [Fraction(-1), Fraction(0)]


def test_stable_subspaces_supersingular(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    assert [s.dimension for s in m.phi_stable_subspaces()] == [0, 2]


def test_scalar_block_unsupported(K5):
    A = [[K5.one(), K5.zero()], [K5.zero(), K5.one()]]
    m = FilteredPhiModule(K5, A, [(0, full2(K5))])
    with pytest.raises(EnumerationUnsupportedError):
        m.phi_stable_subspaces()


def test_induced_submodule(K5):
    m = modular_form_module(5, 2, 1, field=K5)
    lines = [S for S in m.phi_stable_subspaces() if S.dimension == 1]
    for S in lines:
        sub = m.induced_submodule(S)
        # slope-0 line gets the induced jump at the minimal jump of m
        if m.sub_degrees(S)[1] == 0:
            assert sub.jumps() == [-1] and sub.t_H == -1
    # a non-stable subspace is rejected with the violating image
    bad = line(K5, [1, 1])
    with pytest.raises(NotStableError):
        m.induced_submodule(bad)


def test_induced_on_full_is_same(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    sub = m.induced_submodule(m.full_space())
    assert sub.t_H == m.t_H and sub.t_N == m.t_N


# -- admissibility ------------------------------------------------------------

def test_wa_qp1_analog(K5):
    m = FilteredPhiModule(K5, [[K5.coerce(Fraction(1, 5))]],
                          [(-1, Subspace(K5, 1, [[K5.one()]]))])
    cert = m.is_weakly_admissible()
    assert cert.verdict and m.t_H == -1 and m.t_N == -1


def test_wa_supersingular(K5):
    assert modular_form_module(5, 2, 0, field=K5).is_weakly_admissible().verdict


def test_not_wa_eigenline_filtration(K5):
    m = modular_form_module(5, 2, 1, field=K5)
    neg = [S for S in m.phi_stable_subspaces()
           if S.dimension == 1 and m.sub_degrees(S)[1] == Fraction(-1)][0]
    vec = [c.coords[0].lift_fraction() for c in neg.basis[0]]
    bad = modular_form_module(5, 2, 1, filtration_line=vec, field=K5)
    cert = bad.is_weakly_admissible()
    assert not cert.verdict
    assert cert.witness is not None and cert.witness.subspace.equals(neg)
    assert cert.witness.t_H == 0 and cert.witness.t_N == -1


def test_n_condition_examples(K5):
    ss = modular_form_module(5, 2, 0, field=K5)
    assert ss.n_condition(0).verdict
    # diag(p^-1, 1) with jumps split across the eigenlines: an admissible
    # line avoids Fil^0, so the strict condition fails
    A = [[K5.coerce(Fraction(1, 5)), K5.zero()], [K5.zero(), K5.one()]]
    m = FilteredPhiModule(K5, A, [(-1, full2(K5)), (0, line(K5, [0, 1]))])
    cert = m.n_condition(0)
    assert not cert.verdict
    assert cert.witness.t_H == cert.witness.t_N == -1
    # dim 1 with jump 0: vacuous
    assert unit_module(K5).n_condition(0).verdict


# -- fil1 and ranks -------------------------------------------------------------

def test_fil1_examples(K5):
    ss = modular_form_module(5, 2, 0, field=K5)
    assert ss.fil1().dimension == 0
    assert ss.twist(1).fil1().dimension == 2
    om = modular_form_module(5, 2, 1, field=K5)
    f1 = om.fil1()
    assert f1.dimension == 1
    neg = [S for S in om.phi_stable_subspaces()
           if S.dimension == 1 and om.sub_degrees(S)[1] == Fraction(-1)][0]
    assert f1.equals(neg)


def test_rank_examples(K5):
    ss = modular_form_module(5, 2, 0, field=K5)
    om = modular_form_module(5, 2, 1, field=K5)
    assert ss.universal_norm_rank() == 0
    assert ss.twist(1).universal_norm_rank() == 2
    assert om.universal_norm_rank() == 1


def test_fil1_requires_weak_admissibility(K5):
    m = modular_form_module(5, 2, 1, field=K5)
    neg = [S for S in m.phi_stable_subspaces()
           if S.dimension == 1 and m.sub_degrees(S)[1] == Fraction(-1)][0]
    vec = [c.coords[0].lift_fraction() for c in neg.basis[0]]
    bad = modular_form_module(5, 2, 1, filtration_line=vec, field=K5)
    with pytest.raises(PadicError):
        bad.fil1()


# -- twist, tensor, wedge, tilde -------------------------------------------------

def test_twist_degree_shift_random(K5):
    rng = random.Random(31)
    for _ in range(10):
        m = gen.random_wa_module(K5, rng)
        k = rng.randint(-2, 2)
        tw = m.twist(k)
        assert tw.t_H == m.t_H - k * m.d
        assert tw.t_N == m.t_N - k * m.d
        assert tw.is_weakly_admissible().verdict


def test_twist_unit_example(K5):
    m = unit_module(K5)
    tw = m.twist(1)
    assert tw.jumps() == [-1] and tw.newton_slopes() == [Fraction(-1)]


def test_tensor_unit_is_identity(K5):
    m = modular_form_module(5, 2, 1, field=K5)
    tp = m.tensor_product(unit_module(K5))
    assert tp.t_H == m.t_H and tp.newton_slopes() == m.newton_slopes()
    h, _ = tp.hodge_degree()
    assert h == m.hodge_degree()[0]


def test_tensor_dim1_sums(K5):
    a = FilteredPhiModule(K5, [[K5.coerce(5)]],
                          [(2, Subspace(K5, 1, [[K5.one()]]))])
    b = FilteredPhiModule(K5, [[K5.coerce(Fraction(1, 5))]],
                          [(-1, Subspace(K5, 1, [[K5.one()]]))])
    tp = a.tensor_product(b)
    assert tp.jumps() == [1] and tp.newton_slopes() == [Fraction(0)]


def test_tensor_h_vector_convolution_oracle(K5):
    # brute-force dimension count of sum Fil^a (x) Fil^b
    rng = random.Random(33)
    m1 = gen.random_wa_module_d2(K5, rng)
    m2 = gen.random_wa_module_d2(K5, rng)
    tp = m1.tensor_product(m2)
    ops = m1.ops()
    from padic_hodge.linalg import column_space_basis
    jumps = sorted({a + b for a in m1.jumps() + [m1.jumps()[-1] + 1]
                    for b in m2.jumps() + [m2.jumps()[-1] + 1]})
    for j in range(min(tp.jumps()) - 1, max(tp.jumps()) + 2):
        vecs = []
        for a in range(-8, 9):
            b = j - a
            fa = m1.fil_at(a)
            fb = m2.fil_at(b)
            for u in fa.basis:
                for w in fb.basis:
                    vecs.append([x * y for x in u for y in w])
        dim = len(column_space_basis(vecs, ops)) if vecs else 0
        assert tp.fil_at(j).dimension == dim


def test_wedge_examples(K5):
    ss = modular_form_module(5, 2, 0, field=K5)
    w1 = ss.wedge_power(1)
    assert w1.t_H == ss.t_H and w1.t_N == ss.t_N
    top = ss.wedge_power(2)
    assert top.d == 1
    assert top.t_H == ss.t_H and top.t_N == ss.t_N
    assert top.jumps() == [-1]
    # weight-k top wedge: slope and jump both -(k-1)
    mf4 = modular_form_module(5, 4, 0, field=K5)
    top4 = mf4.wedge_power(2)
    assert top4.newton_slopes() == [Fraction(-3)] and top4.jumps() == [-3]


def test_wedge_top_random(K5):
    rng = random.Random(34)
    for _ in range(5):
        m = gen.random_wa_module(K5, rng, d=3)
        top = m.wedge_power(3)
        assert top.t_H == m.t_H and top.t_N == m.t_N


def test_tilde_examples(K5):
    ss = modular_form_module(5, 2, 0, field=K5)
    td = ss.erase_filtration_step(0)
    h, th = td.hodge_degree()
    assert th == ss.t_H - ss.hodge_degree()[0][0]  # t_H drops by h_0
    assert th == -2 and td.t_N == -1
    assert td.slope_bound_check(0, strict=True).verdict
    with pytest.raises(ValueError):
        td.erase_filtration_step(0)  # no longer a jump


def test_tilde_general_k(K5):
    # erase an interior jump: only Fil^k changes
    rng = random.Random(35)
    m = gen.random_wa_module(K5, rng, d=3)
    k = m.jumps()[1]
    td = m.erase_filtration_step(k)
    h_old, th_old = m.hodge_degree()
    h_new, th_new = td.hodge_degree()
    assert th_new == th_old - h_old[k]
    for j in range(min(m.jumps()) - 1, max(m.jumps()) + 2):
        if j == k:
            assert td.fil_at(j).equals(m.fil_at(k + 1))
        else:
            assert td.fil_at(j).equals(m.fil_at(j))


# -- slopes ---------------------------------------------------------------------

def test_slope_lambda(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    assert m.slope_lambda() == 0
    m1 = FilteredPhiModule(K5, [[K5.one()]],
                           [(-1, Subspace(K5, 1, [[K5.one()]]))])
    assert m1.slope_lambda() == -1


def test_slope_bound_check(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    assert m.slope_bound_check(0).verdict
    m1 = FilteredPhiModule(K5, [[K5.one()]],
                           [(-1, Subspace(K5, 1, [[K5.one()]]))])
    assert not m1.slope_bound_check(-1, strict=True).verdict
    assert m1.slope_bound_check(-1, strict=False).verdict


def test_tensor_slope_check_examples(K5):
    rng = random.Random(36)
    m = modular_form_module(5, 2, 1, field=K5)
    u = unit_module(K5)
    cert = tensor_slope_check(u, m, 0, m.max_subspace_slope())
    assert cert.verdict
    for _ in range(5):
        m1 = gen.random_wa_module_d2(K5, rng)
        m2 = gen.random_wa_module_d2(K5, rng)
        assert tensor_slope_check(m1, m2, m1.max_subspace_slope(),
                                  m2.max_subspace_slope()).verdict


# -- constructor validation -------------------------------------------------------

def test_modular_form_module_validation(K5):
    with pytest.raises(ValueError):
        modular_form_module(5, 1, 0, field=K5)
    with pytest.raises(ValueError):
        modular_form_module(5, 2, Fraction(1, 5), field=K5)


def test_filtration_validation(K5):
    A = [[K5.one(), K5.zero()], [K5.zero(), K5.coerce(5)]]
    with pytest.raises(ValueError):
        FilteredPhiModule(K5, A, [(0, line(K5, [1, 0])), (1, full2(K5))])
    with pytest.raises(ValueError):
        FilteredPhiModule(K5, A, [(0, line(K5, [1, 0]))])  # first not full
    from padic_hodge.errors import PrecisionError
    sing = [[K5.one(), K5.one()], [K5.one(), K5.one()]]
    with pytest.raises(PrecisionError):
        FilteredPhiModule(K5, sing, [(0, full2(K5))])


def test_rank_staircase():
    # j -> rank(twist(M, j)) is non-decreasing and reaches f*d beyond the
    # negated minimal Hodge jump; large twists spread valuations, so use a
    # wide window
    K = UnramifiedField(5, 1, 20, work_margin=120)
    rng = random.Random(37)
    for _ in range(8):
        m = gen.random_wa_module(K, rng)
        jmin = min(m.jumps())
        ranks = [m.twist(j).universal_norm_rank() for j in range(-3, -jmin + 2)]
        assert all(a <= b for a, b in zip(ranks, ranks[1:]))
        assert ranks[-1] == m.field.f * m.d
