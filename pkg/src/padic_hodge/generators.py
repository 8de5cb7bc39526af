"""Seeded generators for the randomized verification suites.

Everything here is deterministic given a random.Random instance.  The
weakly admissible samplers are generate-and-certify: a draw is kept only if
the admissibility certificate passes, so the suites always run on verified
instances.  Synthetic members are built from log-power multiples of
filtration-adapted vectors; they satisfy every finitely checkable
hypothesis of the membership classes while leaving the asymptotic growth
condition to the structured/estimated order machinery.
"""

from fractions import Fraction

from .series import TruncatedSeries
from .seriesops import LogPolynomial
from .modules import FilteredPhiModule, Subspace
from .analytic import VectorSeries


def random_poly_series(field, rng, n, deg=None, unit_constant=False):
    """Random polynomial with integer coefficients, padded to degree n."""
    deg = n if deg is None else deg
    coeffs = [rng.randrange(field.p ** field.prec) for _ in range(deg + 1)]
    if unit_constant:
        c0 = coeffs[0]
        while c0 % field.p == 0:
            c0 = rng.randrange(field.p ** field.prec)
        coeffs[0] = c0
    return TruncatedSeries.make(field, coeffs, n=n)


def random_unit(rng, p):
    u = rng.randrange(1, p ** 3)
    while u % p == 0:
        u = rng.randrange(1, p ** 3)
    return u


def _unimodular(field, rng, d):
    """A small random integer matrix with unit determinant (shear product)."""
    m = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for _ in range(2 * d):
        i, j = rng.randrange(d), rng.randrange(d)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for k in range(d):
            m[i][k] += c * m[j][k]
    return [[field.coerce(c) for c in row] for row in m]


def split_module(field, rng, d=2, jumps_mode="wa"):
    """Diagonal Frobenius with coordinate filtration steps.

    jumps_mode 'wa' places each coordinate's jump at its slope (t_H = t_N
    on every stable subspace); 'strict' places it strictly below (a module
    of negative slope).  Slopes are distinct non-positive integers, so the
    stable subspaces are exactly the coordinate sums.
    """
    slopes = rng.sample(range(-3, 1), d)
    drop = 0 if jumps_mode == "wa" else rng.randint(1, 2)
    jumps = [s - drop for s in slopes]
    p = field.p
    A = [[field.coerce(Fraction(random_unit(rng, p)) * Fraction(p) ** slopes[i])
          if i == j else field.zero() for j in range(d)] for i in range(d)]
    filt = []
    distinct = sorted(set(jumps))
    for j in distinct:
        idx = [i for i in range(d) if jumps[i] >= j]
        vecs = []
        for i in idx:
            e = [field.zero() for _ in range(d)]
            e[i] = field.one()
            vecs.append(e)
        filt.append((j, Subspace(field, d, vecs)))
    return FilteredPhiModule(field, A, filt), slopes, jumps


def random_wa_module_d2(field, rng):
    """Weakly admissible dimension-2 module with distinct integer slopes and
    a generic (non-eigen) filtration line; admissible by construction and
    re-certified."""
    p = field.p
    while True:
        a = rng.randint(-3, 0)
        b = rng.randint(a + 1, 1)
        # j1 <= a keeps every eigenline admissible; j1 < j2 = a+b-j1 as well
        j1_max = min(a, (a + b - 1) // 2)
        j1 = rng.randint(j1_max - 2, j1_max)
        j2 = a + b - j1
        u1, u2 = random_unit(rng, p), random_unit(rng, p)
        D = [[field.coerce(Fraction(u1) * Fraction(p) ** a), field.zero()],
             [field.zero(), field.coerce(Fraction(u2) * Fraction(p) ** b)]]
        P = _unimodular(field, rng, 2)
        from .linalg import mat_mul, RingOps as _RingOps
        from .modules import _mat_inverse
        ops = _RingOps(field.zero, field.one)
        sigmaP = [[field.sigma(c) for c in row] for row in P]
        A = mat_mul(P, mat_mul(D, _mat_inverse(sigmaP, ops), ops), ops)
        line = [rng.randint(-4, 4) for _ in range(2)]
        if line == [0, 0]:
            continue
        full = Subspace(field, 2, [[field.one(), field.zero()],
                                   [field.zero(), field.one()]])
        filt = [(j1, full),
                (j2, Subspace(field, 2, [[field.coerce(c) for c in line]]))]
        try:
            M = FilteredPhiModule(field, A, filt)
            cert = M.is_weakly_admissible()
        except Exception:
            continue
        if cert.verdict:
            return M


def random_wa_module_d3(field, rng, max_tries=400):
    """Weakly admissible dimension-3 module (generate and certify)."""
    p = field.p
    from .linalg import mat_mul, RingOps as _RingOps
    from .modules import _mat_inverse
    ops = _RingOps(field.zero, field.one)
    for _ in range(max_tries):
        slopes = sorted(rng.sample(range(-3, 2), 3))
        t = sum(slopes)
        j1 = rng.randint(slopes[0] - 2, slopes[0])
        j3 = rng.randint(slopes[2], slopes[2] + 2)
        j2 = t - j1 - j3
        if not j1 < j2 < j3:
            continue
        D = [[field.coerce(Fraction(random_unit(rng, p)) * Fraction(p) ** slopes[i])
              if i == j else field.zero() for j in range(3)] for i in range(3)]
        P = _unimodular(field, rng, 3)
        sigmaP = [[field.sigma(c) for c in row] for row in P]
        A = mat_mul(P, mat_mul(D, _mat_inverse(sigmaP, ops), ops), ops)
        full = Subspace(field, 3, [[field.one() if i == j else field.zero()
                                    for j in range(3)] for i in range(3)])
        v1 = [rng.randint(-3, 3) for _ in range(3)]
        v2 = [rng.randint(-3, 3) for _ in range(3)]
        plane = Subspace(field, 3, [[field.coerce(c) for c in v1],
                                    [field.coerce(c) for c in v2]])
        if plane.dimension != 2:
            continue
        line = Subspace(field, 3, [[field.coerce(c) for c in v1]])
        filt = [(j1, full), (j2, plane), (j3, line)]
        try:
            M = FilteredPhiModule(field, A, filt)
            cert = M.is_weakly_admissible()
        except Exception:
            continue
        if cert.verdict:
            return M
    raise RuntimeError("could not sample a weakly admissible d=3 module")


def random_wa_module(field, rng, d=None):
    d = d or rng.choice([2, 2, 3])
    if d == 2:
        return random_wa_module_d2(field, rng)
    return random_wa_module_d3(field, rng)


def random_wa_module_bounded(field, rng, d=None, jump_floor=-3, th_floor=-4,
                             max_tries=300):
    """Weakly admissible module with a capped log-power budget: all jumps
    >= jump_floor and t_H >= th_floor, so determinant divisibility chains
    stay within the precision window of a division-sized field."""
    for _ in range(max_tries):
        M = random_wa_module(field, rng, d)
        if min(M.jumps()) >= jump_floor and M.t_H >= th_floor:
            return M
    raise RuntimeError("could not sample a bounded weakly admissible module")


def random_h0_ncond_module(field, rng):
    """Weakly admissible d=2 module with h_0 != 0 satisfying the strict
    degree condition on Fil^0-avoiding subspaces (always true for this
    family: slopes a < b <= -1, jumps {a+b, 0}, generic line)."""
    p = field.p
    while True:
        b = rng.randint(-2, -1)
        a = rng.randint(b - 2, b - 1)
        j1 = a + b
        u1, u2 = random_unit(rng, p), random_unit(rng, p)
        D = [[field.coerce(Fraction(u1) * Fraction(p) ** a), field.zero()],
             [field.zero(), field.coerce(Fraction(u2) * Fraction(p) ** b)]]
        from .linalg import mat_mul, RingOps as _RingOps
        from .modules import _mat_inverse
        ops = _RingOps(field.zero, field.one)
        P = _unimodular(field, rng, 2)
        sigmaP = [[field.sigma(c) for c in row] for row in P]
        A = mat_mul(P, mat_mul(D, _mat_inverse(sigmaP, ops), ops), ops)
        line = [rng.randint(-4, 4), rng.randint(-4, 4)]
        if line == [0, 0]:
            continue
        full = Subspace(field, 2, [[field.one(), field.zero()],
                                   [field.zero(), field.one()]])
        filt = [(j1, full),
                (0, Subspace(field, 2, [[field.coerce(c) for c in line]]))]
        try:
            M = FilteredPhiModule(field, A, filt)
        except Exception:
            continue
        if not M.is_weakly_admissible().verdict:
            continue
        if not M.n_condition(0).verdict:
            continue
        h, _ = M.hodge_degree()
        if h.get(0, 0) == 0:
            continue
        return M


def synthetic_member(module, rng, n, mode="deep", extra_log=0):
    """log-power multiple of filtration-adapted vectors.

    mode 'deep' uses the uniform exponent -min(jump) on every adapted
    vector (all nontrivial filtration conditions hold by exact vanishing);
    mode 'adapted' uses the exponent matching each vector's own level (the
    evaluations land exactly on the filtration steps -- use on modules
    whose steps are phi-stable when the phi-twisted class is tested).
    """
    field = module.field
    vectors, levels = module.adapted_basis()
    u_max = -min(module.jumps())
    comps = None
    for vec, level in zip(vectors, levels):
        u = (u_max if mode == "deep" else max(-level, 0)) + extra_log
        b = random_poly_series(field, rng, n, deg=2, unit_constant=True)
        cl = LogPolynomial({u: b})
        series = cl.expand(n)
        add = [series._scalar_mul(c) for c in vec]
        if comps is None:
            comps = add
        else:
            comps = [x + y for x, y in zip(comps, add)]
    return VectorSeries(module, comps)


def eigen_member(module, rng, n, log_powers=None):
    """Structured member over a split module: sum_l log^(u_l) b_l e_l with
    the eigen metadata attached (exact phi-twisted growth order)."""
    field = module.field
    d = module.d
    slopes = []
    for i in range(d):
        ei = [field.zero() for _ in range(d)]
        ei[i] = field.one()
        img = module.apply_phi(ei)
        slopes.append(Fraction(img[i].valuation()))
    terms = []
    for i in range(d):
        u = log_powers[i] if log_powers else rng.randint(0, 3)
        b = random_poly_series(field, rng, n, deg=2, unit_constant=True)
        vec = [field.one() if j == i else field.zero() for j in range(d)]
        terms.append((vec, slopes[i], LogPolynomial({u: b})))
    return VectorSeries.from_eigen_terms(module, terms, n), terms
