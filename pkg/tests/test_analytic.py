"""Vector series: Phi, growth orders, membership, Wronskians, orbits,
and the contradiction engine."""

import random
from fractions import Fraction

import pytest

from padic_hodge.padics import UnramifiedField
from padic_hodge.series import TruncatedSeries, INFINITE
from padic_hodge import seriesops as so
from padic_hodge.seriesops import LogPolynomial
from padic_hodge.modules import FilteredPhiModule, Subspace, modular_form_module
from padic_hodge.analytic import (VectorSeries, phi_vec, phi_growth_order,
                                  check_membership, wronskian_det,
                                  phi_orbit_wedge, orbit_relation,
                                  contradiction_pipeline, det_log_divisibility)
from padic_hodge import generators as gen


def unit_module(field):
    return FilteredPhiModule(field, [[field.one()]],
                             [(0, Subspace(field, 1, [[field.one()]]))])


def diag_module(field, fracs, jumps=None):
    d = len(fracs)
    A = [[field.coerce(fracs[i]) if i == j else field.zero()
          for j in range(d)] for i in range(d)]
    full = Subspace(field, d, [[field.one() if i == j else field.zero()
                                for j in range(d)] for i in range(d)])
    filt = [(0, full)] if jumps is None else jumps
    return FilteredPhiModule(field, A, filt)


# -- phi on vectors ------------------------------------------------------------

def test_phi_vec_eigenvector_case(K5):
    # g = h * v with phi(v) = p^a v: Phi(g) = p^a phi(h) v
    m = diag_module(K5, [Fraction(25), Fraction(1, 5)])
    rng = random.Random(41)
    h = gen.random_poly_series(K5, rng, 20)
    zero = TruncatedSeries.zero(K5, 20)
    g = VectorSeries(m, [h, zero])
    out = phi_vec(g)
    expect = so.phi_op(h)._scalar_mul(25)
    assert out.components[0].truncate(out.n).equals(
        expect.truncate(out.components[0].n).truncate(out.n))
    assert out.components[1].is_zero


def test_phi_vec_unit_module_is_phi(K5):
    m = unit_module(K5)
    rng = random.Random(42)
    h = gen.random_poly_series(K5, rng, 20)
    g = VectorSeries(m, [h])
    out = phi_vec(g)
    ph = so.phi_op(h)
    assert out.components[0].equals(ph.truncate(out.n))


def test_phi_vec_matrix_substitution_oracle(K5):
    # generic 2-dim: component-wise expansion A . sigma-substituted parts
    rng = random.Random(43)
    A = [[K5.coerce(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
    while True:
        try:
            m = FilteredPhiModule(K5, A, [(0, Subspace(K5, 2,
                [[K5.one(), K5.zero()], [K5.zero(), K5.one()]]))])
            break
        except Exception:
            A = [[K5.coerce(rng.randint(-3, 3)) for _ in range(2)]
                 for _ in range(2)]
    h0 = gen.random_poly_series(K5, rng, 15)
    h1 = gen.random_poly_series(K5, rng, 15)
    g = VectorSeries(m, [h0, h1])
    out = phi_vec(g)
    p0, p1 = so.phi_op(h0), so.phi_op(h1)
    for i in range(2):
        expect = (p0._scalar_mul(A[i][0]) + p1._scalar_mul(A[i][1]))
        assert out.components[i].equals(expect.truncate(out.n))


# -- phi growth order ------------------------------------------------------------

def test_phi_growth_order_eigen_exact(K5):
    m = diag_module(K5, [Fraction(25), Fraction(1, 5)])
    rng = random.Random(44)
    b = gen.random_poly_series(K5, rng, 20, deg=2, unit_constant=True)
    # g = log^u b * v with phi(v) = p^2 v: order u + 2
    for u in (0, 1, 3):
        terms = [([K5.one(), K5.zero()], Fraction(2), LogPolynomial({u: b}))]
        g = VectorSeries.from_eigen_terms(m, terms, 40)
        po = phi_growth_order(g)
        assert po.exact and po.value == u + 2
    # constant eigenvector with slope 0
    m0 = diag_module(K5, [Fraction(1), Fraction(1, 5)])
    terms = [([K5.one(), K5.zero()], Fraction(0),
              LogPolynomial({0: TruncatedSeries.one(K5, 40)}))]
    g = VectorSeries.from_eigen_terms(m0, terms, 40)
    assert phi_growth_order(g).value == 0


def test_phi_growth_order_dominance(K5):
    m = diag_module(K5, [Fraction(1), Fraction(1)])
    rng = random.Random(45)
    b = gen.random_poly_series(K5, rng, 30, deg=1, unit_constant=True)
    terms = [([K5.one(), K5.zero()], Fraction(0), LogPolynomial({1: b})),
             ([K5.zero(), K5.one()], Fraction(0), LogPolynomial({3: b}))]
    g = VectorSeries.from_eigen_terms(m, terms, 40)
    assert phi_growth_order(g).value == 3


def test_phi_growth_order_estimate_flag(K5):
    # no eigen metadata: the result is an estimate, never exact
    m = modular_form_module(5, 2, 0, field=K5)
    rng = random.Random(46)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    po = phi_growth_order(g)
    assert not po.exact


# -- membership ------------------------------------------------------------------

def test_membership_log_multiple_is_member(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    rng = random.Random(47)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    rep = check_membership(g, 0, (0,), 0, 1, tilde=True)
    assert not rep.indeterminate
    assert all(row.status in ("member", "trivial") for row in rep.rows)


def test_membership_zero_vector(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    z = TruncatedSeries.zero(K5, 50, tail_zero=True)
    g = VectorSeries(m, [z, z])
    rep = check_membership(g, 0, (0,), 0, 2, tilde=True)
    assert rep.verdict


def test_membership_constant_off_position(K5):
    # a constant vector outside phi(Fil^0) fails the subspace condition at
    # (j = 0, n = 1) with an explicit margin
    m = modular_form_module(5, 2, 0, field=K5)
    one = TruncatedSeries.one(K5, 50)
    zero = TruncatedSeries.zero(K5, 50)
    g = VectorSeries(m, [one, zero])  # e1 not in phi^n(span(e1+e2))
    rep = check_membership(g, 0, (), 0, 1, tilde=True)
    assert not rep.verdict
    bad = [row for row in rep.rows if row.status == "non-member"]
    assert bad and bad[0].j == 0 and bad[0].n == 1
    assert bad[0].margin < 1


def test_membership_constant_in_position(K5):
    # the same constant vector placed on the twisted filtration line passes
    m = modular_form_module(5, 2, 0, field=K5)
    basis = m.fil_at(0).basis[0]
    img = m.apply_phi(list(basis))
    comps = [TruncatedSeries.make(K5, [c], n=50, tail_zero=True) for c in img]
    g = VectorSeries(m, comps)
    rep = check_membership(g, 0, (), 0, 1, tilde=True)
    assert rep.verdict


def test_membership_rejects_positive_v(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    z = TruncatedSeries.zero(K5, 20)
    g = VectorSeries(m, [z, z])
    with pytest.raises(ValueError):
        check_membership(g, 1, (), 0, 1)


def test_membership_psi_zero_flag(K5):
    m = unit_module(K5)
    onex = TruncatedSeries.make(K5, [1, 1], n=25)
    g = VectorSeries(m, [onex])
    rep = check_membership(g, 0, (), 1, 1, tilde=False)
    assert rep.psi_zero is True
    one = TruncatedSeries.one(K5, 25)
    g2 = VectorSeries(m, [one])
    rep2 = check_membership(g2, 0, (), 1, 1, tilde=False)
    assert rep2.psi_zero is False and not rep2.verdict


# -- wronskians and orbits ----------------------------------------------------------

def test_wronskian_log_one(K5):
    # components (log, 1): det [[log, 1], [1, 0]] = -1
    m = diag_module(K5, [Fraction(1), Fraction(5)])
    n = 60
    lg = so.log_series(K5, n).truncate(n)
    one = TruncatedSeries.one(K5, n)
    g = VectorSeries(m, [lg, one])
    w = wronskian_det(g, 2)
    minus_one = TruncatedSeries.make(K5, [-1], n=w.n)
    assert w.equals(minus_one)


def test_wronskian_proportional_columns(K5):
    m = diag_module(K5, [Fraction(1), Fraction(5)])
    rng = random.Random(48)
    h = gen.random_poly_series(K5, rng, 40)
    g = VectorSeries(m, [h, h._scalar_mul(3)])
    assert wronskian_det(g, 2).is_zero


def test_wronskian_scalar_times_fixed_vector(K5):
    m = diag_module(K5, [Fraction(1), Fraction(5)])
    rng = random.Random(49)
    h = gen.random_poly_series(K5, rng, 40)
    g = VectorSeries(m, [h._scalar_mul(2), h._scalar_mul(7)])
    assert wronskian_det(g, 2).is_zero


def test_orbit_wedge_colinear_is_zero(K5):
    m = diag_module(K5, [Fraction(25), Fraction(1, 5)])
    rng = random.Random(50)
    h = gen.random_poly_series(K5, rng, 30)
    zero = TruncatedSeries.zero(K5, 30)
    g = VectorSeries(m, [h, zero])
    assert phi_orbit_wedge(g, 1).is_zero


def test_orbit_wedge_n0_identity_case(K5):
    m = unit_module(K5)
    rng = random.Random(51)
    h = gen.random_poly_series(K5, rng, 30)
    g = VectorSeries(m, [h])
    assert phi_orbit_wedge(g, 0).equals(h)


def test_orbit_wedge_log_divisible(K5div):
    # synthetic member of the supersingular module: g and Phi(g) wedge to a
    # log^2-divisible series with bounded quotient
    m = modular_form_module(5, 2, 0, field=K5div)
    rng = random.Random(52)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    w = phi_orbit_wedge(g, 1)
    assert so.log_order(w, n_max=1) == 2


def test_orbit_relation_eigen_case(K5):
    # eigenvector times a series: v = 1 with coefficient p^a phi(h)/h
    m = diag_module(K5, [Fraction(25), Fraction(1, 5)])
    rng = random.Random(53)
    h = gen.random_poly_series(K5, rng, 30, deg=3, unit_constant=True)
    zero = TruncatedSeries.zero(K5, 30)
    g = VectorSeries(m, [h, zero])
    rel = orbit_relation(g, 2)
    assert rel.status == "ok" and rel.v == 1
    num, den = rel.coefficients[0]
    # cross-multiplied: num * h == den * (p^2 phi(h))
    lhs = num * h
    rhs = den * so.phi_op(h)._scalar_mul(25)
    mmin = min(lhs.n, rhs.n)
    assert lhs.truncate(mmin).equals(rhs.truncate(mmin))


def test_orbit_relation_generic_dim2_wedge_quotients(K5):
    m = modular_form_module(5, 2, 0, field=K5)
    rng = random.Random(54)
    g = gen.synthetic_member(m, rng, 60, mode="deep")
    rel = orbit_relation(g, 2)
    assert rel.status == "ok" and rel.v == 2
    # Cramer coefficients against the wedge quotients:
    # Phi^2(g) = a1 Phi(g) + a0 g with a1 = (g /\ Phi^2 g)/(g /\ Phi g)
    orbit = [g]
    from padic_hodge.analytic import phi_iterate
    orbit = phi_iterate(g, 2)
    def wedge(a, b):
        return (a.components[0] * b.components[1] -
                a.components[1] * b.components[0])
    w01 = wedge(orbit[0], orbit[1])
    w02 = wedge(orbit[0], orbit[2])
    w12 = wedge(orbit[1], orbit[2])
    num0, den0 = rel.coefficients[0]   # coefficient of g
    num1, den1 = rel.coefficients[1]   # coefficient of Phi(g)
    pairs = [(num1 * w01, den1 * w02), (num0 * w01, den0 * (-w12))]
    for lhs, rhs in pairs:
        mmin = min(lhs.n, rhs.n)
        assert lhs.truncate(mmin).equals(rhs.truncate(mmin))


def test_orbit_relation_zero(K5):
    m = unit_module(K5)
    z = TruncatedSeries.zero(K5, 20)
    g = VectorSeries(m, [z])
    rel = orbit_relation(g, 1)
    assert rel.status == "zero" and rel.v == 0


# -- contradiction pipeline ---------------------------------------------------------

def test_pipeline_supersingular_numbers(K5div):
    m = modular_form_module(5, 2, 0, field=K5div)
    rng = random.Random(55)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    rep = contradiction_pipeline(m, "dim2-det", g, n_max=1)
    assert rep.order_upper == 1 and rep.log_lower == 2
    assert rep.verdict == "forced zero"


def test_pipeline_zero_input_vacuous(K5div):
    m = modular_form_module(5, 2, 0, field=K5div)
    z = TruncatedSeries.zero(K5div, 125, tail_zero=True)
    g = VectorSeries(m, [z, z])
    rep = contradiction_pipeline(m, "dim2-det", g, n_max=1)
    assert rep.log_lower == INFINITE and rep.verdict == "forced zero"


def test_pipeline_wronskian_dichotomy():
    field = UnramifiedField(5, 1, 20, work_margin=300)
    rng = random.Random(56)
    for mode, expect_forced in (("strict", True), ("wa", False)):
        M, slopes, jumps = gen.split_module(field, rng, 2, mode)
        g = gen.synthetic_member(M, rng, 125, mode="adapted")
        rep = contradiction_pipeline(M, "wronskian", g, n_max=1)
        assert rep.verdict != "inconclusive"
        assert (rep.verdict == "forced zero") == expect_forced
        assert (M.t_H < M.t_N) == expect_forced


def test_pipeline_orbit_wedge_mode(K5div):
    m = modular_form_module(5, 2, 0, field=K5div).erase_filtration_step(0)
    rng = random.Random(57)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    rep = contradiction_pipeline(m, "orbit-wedge", g, n_max=1)
    # pente < 0 module: the top orbit wedge is forced to vanish
    assert rep.verdict == "forced zero"


def test_pipeline_soundness_evaluations(K5div):
    # whenever the verdict is forced zero on a constructed series, the
    # determinant evaluates below precision at the layer points
    from padic_hodge.cyclotomic import CyclotomicLayer
    from padic_hodge.seriesops import cyclotomic_evaluate
    m = modular_form_module(5, 2, 0, field=K5div)
    rng = random.Random(58)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    rep = contradiction_pipeline(m, "dim2-det", g, n_max=1)
    assert rep.verdict == "forced zero"
    assert rep.log_lower > rep.order_upper
    F = rep.det_series
    ev = cyclotomic_evaluate(F, CyclotomicLayer(K5div, 1))
    kind, floor = ev.classify(Fraction(1))
    assert kind == "zero"


# -- determinant log-divisibility ------------------------------------------------------

def test_det_divisibility_verified(K5div):
    rng = random.Random(59)
    for d in (2, 3):
        M = gen.random_wa_module_bounded(K5div, rng, d=d)
        gs = [gen.synthetic_member(M, rng, 125, mode="adapted")
              for _ in range(d)]
        rep = det_log_divisibility(gs, n_max=1)
        assert rep.verified and rep.log_lower >= -M.t_H


def test_det_divisibility_dim1_trivial(K5):
    m = unit_module(K5)
    rng = random.Random(60)
    h = gen.random_poly_series(K5, rng, 50, unit_constant=True)
    g = VectorSeries(m, [h])
    rep = det_log_divisibility([g], n_max=1)
    assert rep.verified and rep.t_H == 0


def test_det_divisibility_dependent_columns(K5):
    m = diag_module(K5, [Fraction(1), Fraction(5)],
                    jumps=None)
    rng = random.Random(61)
    h = gen.random_poly_series(K5, rng, 50)
    g1 = VectorSeries(m, [h, h._scalar_mul(2)])
    g2 = VectorSeries(m, [h._scalar_mul(3), h._scalar_mul(6)])
    rep = det_log_divisibility([g1, g2], n_max=1)
    assert rep.verified and rep.log_lower == INFINITE


def test_phi_orbit_membership_compatibility(K5div):
    # bounded combinations sum a_j Phi^j(g) of a member satisfy the same
    # layer conditions (in the tilde class, no psi constraint)
    m = modular_form_module(5, 2, 0, field=K5div)
    rng = random.Random(62)
    g = gen.synthetic_member(m, rng, 125, mode="deep")
    base = check_membership(g, 0, (0,), 0, 1, tilde=True)
    assert all(r.status in ("member", "trivial") for r in base.rows)
    from padic_hodge.analytic import phi_iterate
    orbit = phi_iterate(g, 2)
    a = [gen.random_poly_series(K5div, rng, 125, deg=2) for _ in range(3)]
    comps = None
    for coeff, vec in zip(a, orbit):
        add = [(coeff * c).truncate(125) for c in vec.components]
        comps = add if comps is None else [x + y for x, y in zip(comps, add)]
    h = VectorSeries(m, comps)
    rep = check_membership(h, 0, (0,), 0, 1, tilde=True)
    assert all(r.status in ("member", "trivial") for r in rep.rows)


def test_wronskian_phi_scaling_identity(K5):
    # det(Phi g, D Phi g) = p * lambda_1 lambda_2 * phi(det(g, D g)) on
    # split modules (lambda_i the Frobenius eigenvalues), as an exact
    # identity of truncated series
    field = K5
    rng = random.Random(63)
    M, slopes, _ = gen.split_module(field, rng, 2, "wa")
    g = gen.synthetic_member(M, rng, 60, mode="adapted")
    V = wronskian_det(g, 2)
    pg = phi_vec(g)
    Vp = wronskian_det(pg, 2)
    lam_prod = M.phi_matrix[0][0] * M.phi_matrix[1][1]
    expect = so.phi_op(V)._scalar_mul(lam_prod)._scalar_mul(5)
    mmin = min(Vp.n, expect.n)
    assert Vp.truncate(mmin).equals(expect.truncate(mmin))
