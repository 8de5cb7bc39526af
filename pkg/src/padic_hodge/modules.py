"""Filtered phi-modules over the unramified field K.

A module carries an invertible matrix A acting sigma-semilinearly
(phi(v) = A sigma(v)) and a decreasing exhaustive separated filtration,
stored as an ascending list of (jump, subspace) pairs whose first subspace
is the full space: Fil^i equals the subspace of the smallest listed jump
>= i, the full space below all jumps and 0 above them.

The Hodge degree is t_H = sum_j j*h_j over the jumps, the Newton degree
t_N the sum of Frobenius slopes (valuations of the eigenvalues of the
K-linear power phi^f, divided by f).  Weak admissibility demands
t_H = t_N globally and t_H <= t_N on every phi-stable subspace; the
enumeration of those subspaces is complete exactly in the regimes the
constructor of the lattice certifies, and errors loudly otherwise.
"""

from fractions import Fraction
from dataclasses import dataclass
from itertools import combinations, product as iter_product

from .errors import (PrecisionError, EnumerationUnsupportedError,
                     NotStableError, PadicError)
from .padics import UnramifiedField
from .linalg import (RingOps, echelon, solve, kernel, det, charpoly, mat_mul,
                     mat_vec, mat_transpose, column_space_basis, in_span)
from .polyroots import find_k_roots, newton_root_valuations


class Subspace:
    """A K-subspace of K^d, held as an echelonized row basis."""

    def __init__(self, field, dim_ambient, vectors):
        self.field = field
        self.dim_ambient = dim_ambient
        ops = RingOps(field.zero, field.one)
        self.basis = column_space_basis([list(v) for v in vectors], ops) \
            if vectors else []

    @property
    def dimension(self):
        return len(self.basis)

    def contains_vector(self, v, ops=None):
        ops = ops or RingOps(self.field.zero, self.field.one)
        ok, _ = in_span(self.basis, list(v), ops)
        return ok

    def contains(self, other):
        ops = RingOps(self.field.zero, self.field.one)
        return all(self.contains_vector(v, ops) for v in other.basis)

    def equals(self, other):
        return self.dimension == other.dimension and self.contains(other)

    def intersect(self, other):
        """Kernel-based intersection."""
        if not self.basis or not other.basis:
            return Subspace(self.field, self.dim_ambient, [])
        ops = RingOps(self.field.zero, self.field.one)
        # rows of [basis_self^T | -basis_other^T], kernel gives coefficients
        rows = []
        for i in range(self.dim_ambient):
            row = [b[i] for b in self.basis] + [-b[i] for b in other.basis]
            rows.append(row)
        ker = kernel(rows, ops)
        vecs = []
        for coeffs in ker:
            v = [self.field.zero() for _ in range(self.dim_ambient)]
            for c, b in zip(coeffs[:len(self.basis)], self.basis):
                v = [x + c * y for x, y in zip(v, b)]
            vecs.append(v)
        return Subspace(self.field, self.dim_ambient, vecs)

    def sum(self, other):
        return Subspace(self.field, self.dim_ambient,
                        [list(v) for v in self.basis] +
                        [list(v) for v in other.basis])

    def __repr__(self):
        return f"Subspace(dim {self.dimension} of {self.dim_ambient})"


@dataclass
class CertificateRow:
    subspace: Subspace
    t_H: int
    t_N: Fraction
    slope: Fraction | None


@dataclass
class Certificate:
    verdict: bool
    rows: list
    witness: CertificateRow | None = None
    note: str = ""


class FilteredPhiModule:
    def __init__(self, field: UnramifiedField, phi_matrix, filtration,
                 guard: int = 4, validate: bool = True):
        self.field = field
        self.d = len(phi_matrix)
        self.phi_matrix = [[field.coerce(c) for c in row] for row in phi_matrix]
        self.guard = guard
        self.filtration = []
        for j, sub in filtration:
            if not isinstance(sub, Subspace):
                sub = Subspace(field, self.d, sub)
            self.filtration.append((int(j), sub))
        if validate:
            self._validate()
        self._lattice = None

    # -- validation ------------------------------------------------------

    def _validate(self):
        ops = self.ops()
        if any(len(row) != self.d for row in self.phi_matrix):
            raise ValueError("phi matrix must be square")
        dt = det(self.phi_matrix, ops)
        if dt.is_zero:
            raise PrecisionError("phi not invertible at precision")
        jumps = [j for j, _ in self.filtration]
        if jumps != sorted(jumps) or len(set(jumps)) != len(jumps):
            raise ValueError(f"filtration jumps out of order: {jumps}")
        if not self.filtration:
            raise ValueError("filtration must not be empty")
        if self.filtration[0][1].dimension != self.d:
            raise ValueError("lowest filtration step must be the full space")
        dims = [sub.dimension for _, sub in self.filtration]
        if any(a <= b for a, b in zip(dims, dims[1:])):
            raise ValueError("filtration subspaces must strictly decrease")
        for (_, big), (_, small) in zip(self.filtration, self.filtration[1:]):
            if not big.contains(small):
                raise ValueError("filtration steps are not nested")

    def ops(self):
        return RingOps(self.field.zero, self.field.one, self.guard)

    # -- filtration accessors ---------------------------------------------

    def fil_at(self, j) -> Subspace:
        """Fil^j under the step convention."""
        for jj, sub in self.filtration:
            if j <= jj:
                return sub
        return Subspace(self.field, self.d, [])

    def jumps(self):
        return [j for j, _ in self.filtration]

    def full_space(self):
        return self.filtration[0][1]

    # -- basic invariants ---------------------------------------------------

    def hodge_degree(self):
        """(h: {j: h_j}, t_H)."""
        h = {}
        entries = self.filtration
        for idx, (j, sub) in enumerate(entries):
            nxt = entries[idx + 1][1].dimension if idx + 1 < len(entries) else 0
            h[j] = sub.dimension - nxt
        t_h = sum(j * m for j, m in h.items())
        return h, t_h

    @property
    def t_H(self):
        return self.hodge_degree()[1]

    def linearized_frobenius(self):
        """The K-linear matrix of phi^f: A sigma(A) ... sigma^(f-1)(A)."""
        field = self.field
        B = self.phi_matrix
        cur = self.phi_matrix
        ops = self.ops()
        for _ in range(1, field.f):
            cur = [[field.sigma(c) for c in row] for row in cur]
            B = mat_mul(B, cur, ops)
        return B

    def newton_slopes(self):
        """Sorted Frobenius slopes (each repeated with multiplicity)."""
        B = self.linearized_frobenius()
        cp = charpoly(B, self.ops())
        vals = newton_root_valuations(cp, self.guard)
        f = self.field.f
        return sorted(Fraction(v, f) for v in vals)

    @property
    def t_N(self) -> Fraction:
        return sum(self.newton_slopes(), Fraction(0))

    def slope_lambda(self) -> Fraction:
        if self.d == 0:
            raise ValueError("slope of the zero module is undefined")
        return Fraction(self.t_H - self.t_N, self.d)

    # -- phi action ----------------------------------------------------------

    def apply_phi(self, v):
        """phi(v) = A sigma(v)."""
        field = self.field
        sv = [field.sigma(c) for c in v]
        return mat_vec(self.phi_matrix, sv, self.ops())

    def apply_phi_subspace(self, S: Subspace) -> Subspace:
        return Subspace(self.field, self.d,
                        [self.apply_phi(v) for v in S.basis])

    def is_phi_stable(self, S: Subspace):
        ops = self.ops()
        for v in S.basis:
            img = self.apply_phi(v)
            ok, _ = in_span(S.basis, img, ops)
            if not ok:
                return False, img
        return True, None

    # -- subspace enumeration -------------------------------------------------

    def phi_stable_subspaces(self):
        """The complete finite list of phi-stable K-subspaces (0 and the
        full space included).

        Complete when the characteristic polynomial of the linearized phi^f
        is squarefree, or for d <= 3 through the primary decomposition;
        raises EnumerationUnsupportedError outside the certified regime
        (e.g. a scalar block, whose invariant lattice is infinite).
        """
        if self._lattice is not None:
            return self._lattice
        field = self.field
        ops = self.ops()
        B = self.linearized_frobenius()
        cp = charpoly(B, ops)
        roots, residual = find_k_roots(cp, field, self.guard)
        res_deg = len(residual) - 1
        if res_deg not in (0, 2, 3):
            raise EnumerationUnsupportedError(
                f"cannot certify the factor structure of a degree-{res_deg} "
                f"residual factor; non-generic, unsupported")
        components = []  # list of chains: each chain is a list of Subspace
        for r, mult in roots:
            components.append(self._primary_chain(B, r, mult, ops))
        if res_deg:
            # an irreducible residual factor of multiplicity one: its kernel
            # is a simple component
            if sum(m for _, m in roots) + res_deg != self.d:
                raise EnumerationUnsupportedError(
                    "residual factor has multiplicity > 1; unsupported")
            mat = self._poly_of_matrix(B, residual, ops)
            comp = Subspace(field, self.d, kernel(mat, ops))
            if comp.dimension != res_deg:
                raise PrecisionError(
                    "kernel of the irreducible factor has unexpected dimension")
            components.append([None, comp])  # None encodes the zero choice
        # B-invariant subspaces: sums of one choice per component chain
        choices = []
        for chain in components:
            opts = []
            for sub in chain:
                opts.append(sub)
            choices.append(opts)
        candidates = []
        for pick in iter_product(*choices):
            vecs = []
            for sub in pick:
                if sub is not None:
                    vecs.extend([list(v) for v in sub.basis])
            candidates.append(Subspace(field, self.d, vecs))
        # deduplicate and filter by phi-stability (sigma-semilinear!)
        out = []
        for S in candidates:
            if any(S.dimension == T.dimension and T.equals(S) for T in out):
                continue
            stable, _ = self.is_phi_stable(S)
            if stable:
                out.append(S)
        out.sort(key=lambda s: s.dimension)
        self._lattice = out
        return out

    def _poly_of_matrix(self, B, poly, ops):
        """poly(B) for a coefficient list over K."""
        n = self.d
        acc = [[poly[-1] * (ops.one() if i == j else ops.zero())
                for j in range(n)] for i in range(n)]
        for c in reversed(poly[:-1]):
            acc = mat_mul(acc, B, ops)
            for i in range(n):
                acc[i][i] = acc[i][i] + c
        return acc

    def _primary_chain(self, B, eigval, mult, ops):
        """Invariant-subspace chain of the primary component of an
        eigenvalue: None (zero choice) plus the strictly increasing
        B-invariant subspaces inside the component."""
        field = self.field
        n = self.d
        shifted = [[(B[i][j] - eigval) if i == j else B[i][j]
                    for j in range(n)] for i in range(n)]
        if mult == 1:
            line = Subspace(field, n, kernel(shifted, ops))
            if line.dimension != 1:
                raise PrecisionError("eigenline has unexpected dimension")
            return [None, line]
        # nilpotent structure on the component
        power = shifted
        for _ in range(mult - 1):
            power = mat_mul(power, shifted, ops)
        comp = Subspace(field, n, kernel(power, ops))
        if comp.dimension != mult:
            raise PrecisionError("primary component has unexpected dimension")
        ker1 = Subspace(field, n, kernel(shifted, ops)).intersect(comp)
        if ker1.dimension == mult:
            raise EnumerationUnsupportedError(
                "scalar block of dimension >= 2: the invariant lattice is "
                "infinite; non-generic, unsupported")
        if mult == 2:
            return [None, ker1, comp]
        if mult == 3:
            if ker1.dimension != 1:
                raise EnumerationUnsupportedError(
                    "multiple Jordan blocks share an eigenvalue; the "
                    "invariant lattice is infinite; non-generic, unsupported")
            sq = mat_mul(shifted, shifted, ops)
            ker2 = Subspace(field, n, kernel(sq, ops)).intersect(comp)
            return [None, ker1, ker2, comp]
        raise EnumerationUnsupportedError(
            f"primary component of multiplicity {mult} > 3; unsupported")

    # -- induced structures ---------------------------------------------------

    def induced_submodule(self, S: Subspace) -> "FilteredPhiModule":
        """The filtered phi-module structure on a phi-stable subspace, with
        the induced filtration Fil^j S = S intersect Fil^j."""
        if S.dimension == 0:
            raise ValueError("use the zero-module conventions directly")
        field = self.field
        ops = self.ops()
        stable, wit = self.is_phi_stable(S)
        if not stable:
            raise NotStableError("subspace is not phi-stable", witness=wit)
        basis_cols = mat_transpose([list(b) for b in S.basis])
        # matrix X with phi(basis_i) = sum_j X[j][i] basis_j
        cols = []
        for v in S.basis:
            img = self.apply_phi(v)
            x, _ = solve(basis_cols, img, ops)
            if x is None:
                raise NotStableError("image escapes the subspace at precision",
                                     witness=img)
            cols.append(x)
        X = mat_transpose(cols)
        # induced filtration: intersections with the ambient steps, recorded
        # at the jumps where the dimension actually drops
        inters = [S.intersect(sub) for _, sub in self.filtration]
        dims = [I.dimension for I in inters] + [0]
        chain = []
        for l, (j, _) in enumerate(self.filtration):
            if dims[l] > dims[l + 1]:
                rows = []
                for v in inters[l].basis:
                    c, _ = solve(basis_cols, list(v), ops)
                    rows.append(c)
                chain.append((j, Subspace(field, S.dimension, rows)))
        return FilteredPhiModule(field, X, chain, self.guard, validate=False)

    def zero_submodule_degrees(self):
        """(t_H, t_N) = (0, 0) for the zero module, by convention."""
        return 0, Fraction(0)

    # -- degrees of stable subspaces ------------------------------------------

    def sub_degrees(self, S: Subspace):
        """(t_H, t_N) of the induced filtered module on a stable subspace,
        with the zero-module convention (0, 0)."""
        if S.dimension == 0:
            return 0, Fraction(0)
        sub = self.induced_submodule(S)
        return sub.t_H, sub.t_N

    def induced_fil_dim(self, S: Subspace, j: int) -> int:
        return S.intersect(self.fil_at(j)).dimension

    # -- admissibility and slope verdicts --------------------------------------

    def is_weakly_admissible(self) -> Certificate:
        """t_H = t_N globally and t_H <= t_N on every phi-stable subspace."""
        rows = []
        witness = None
        verdict = (self.t_H == self.t_N)
        note = "" if verdict else "global degrees differ"
        for S in self.phi_stable_subspaces():
            if S.dimension == 0:
                continue
            th, tn = self.sub_degrees(S)
            lam = Fraction(th - tn, S.dimension)
            row = CertificateRow(S, th, tn, lam)
            rows.append(row)
            if th > tn:
                verdict = False
                if witness is None:
                    witness = row
                    note = (f"stable subspace of dimension {S.dimension} has "
                            f"t_H = {th} > t_N = {tn}")
        return Certificate(verdict, rows, witness, note)

    def n_condition(self, j: int) -> Certificate:
        """Every nonzero stable subspace with induced Fil^j = 0 has
        t_H < t_N (strictly)."""
        rows = []
        witness = None
        verdict = True
        for S in self.phi_stable_subspaces():
            if S.dimension == 0:
                continue
            if self.induced_fil_dim(S, j) != 0:
                continue
            th, tn = self.sub_degrees(S)
            row = CertificateRow(S, th, tn, Fraction(th - tn, S.dimension))
            rows.append(row)
            if th >= tn:
                verdict = False
                if witness is None:
                    witness = row
        return Certificate(verdict, rows, witness)

    def slope_bound_check(self, c, strict: bool = False) -> Certificate:
        """lambda(S) <= c (or < c) over all nonzero stable subspaces."""
        c = Fraction(c)
        rows = []
        worst = None
        verdict = True
        for S in self.phi_stable_subspaces():
            if S.dimension == 0:
                continue
            th, tn = self.sub_degrees(S)
            lam = Fraction(th - tn, S.dimension)
            row = CertificateRow(S, th, tn, lam)
            rows.append(row)
            if worst is None or lam > worst.slope:
                worst = row
            if (lam > c) or (strict and lam == c):
                verdict = False
        return Certificate(verdict, rows, worst)

    def max_subspace_slope(self) -> Fraction:
        """Exact max of lambda over nonzero stable subspaces."""
        best = None
        for S in self.phi_stable_subspaces():
            if S.dimension == 0:
                continue
            th, tn = self.sub_degrees(S)
            lam = Fraction(th - tn, S.dimension)
            if best is None or lam > best:
                best = lam
        return best

    # -- Fil^1 extraction and the rank formula ---------------------------------

    def fil1(self) -> Subspace:
        """Sum of the stable subspaces with induced Fil^0 = 0 and
        t_H = t_N; re-verified to satisfy both conditions itself."""
        adm = self.is_weakly_admissible()
        if not adm.verdict:
            raise PadicError(
                f"fil1 requires a weakly admissible module: {adm.note}")
        total = Subspace(self.field, self.d, [])
        pieces = []
        for S in self.phi_stable_subspaces():
            if S.dimension == 0:
                continue
            if self.induced_fil_dim(S, 0) != 0:
                continue
            th, tn = self.sub_degrees(S)
            if th == tn:
                pieces.append(S)
                total = total.sum(S)
        if total.dimension == 0:
            return total
        if self.induced_fil_dim(total, 0) != 0:
            raise PadicError("sum not admissible: the sum of qualifying "
                             "subspaces meets Fil^0")
        th, tn = self.sub_degrees(total)
        if th != tn:
            raise PadicError(
                f"sum not admissible: t_H = {th} != t_N = {tn} on the sum")
        return total

    def universal_norm_rank(self) -> int:
        """[K:Q_p] * dim fil1."""
        return self.field.f * self.fil1().dimension

    # -- constructions ----------------------------------------------------------

    def twist(self, k: int) -> "FilteredPhiModule":
        """Scale phi by p^(-k) and shift every filtration jump by -k."""
        if k == 0:
            return self
        field = self.field
        scale = field.scalar(Fraction(field.p) ** (-k))
        A = [[c * scale for c in row] for row in self.phi_matrix]
        filt = [(j - k, sub) for j, sub in self.filtration]
        return FilteredPhiModule(field, A, filt, self.guard, validate=False)

    def adapted_basis(self):
        """Vectors v_1..v_d with levels so that Fil^j = span(v_i: level_i >= j).

        Built by extending a basis of the deepest step backwards through the
        chain; levels are the jumps at which each vector enters.
        """
        field = self.field
        ops = self.ops()
        vectors = []
        levels = []
        for j, sub in reversed(self.filtration):
            for v in sub.basis:
                ok, _ = in_span(vectors, list(v), ops) if vectors else (False, None)
                if not ok:
                    vectors.append(list(v))
                    levels.append(j)
        return vectors, levels

    def in_adapted_coordinates(self):
        """(module in the adapted basis, change-of-basis matrix P columns).

        The returned module has the same abstract structure with filtration
        steps spanned by standard basis vectors.
        """
        field = self.field
        ops = self.ops()
        vectors, levels = self.adapted_basis()
        P = mat_transpose(vectors)  # columns are the adapted vectors
        Pinv = _mat_inverse(P, ops)
        sigmaP = [[field.sigma(c) for c in row] for row in P]
        A_ad = mat_mul(Pinv, mat_mul(self.phi_matrix, sigmaP, ops), ops)
        filt = []
        for j in self.jumps():
            idx = [i for i, lv in enumerate(levels) if lv >= j]
            vecs = []
            for i in idx:
                e = [field.zero() for _ in range(self.d)]
                e[i] = field.one()
                vecs.append(e)
            filt.append((j, Subspace(field, self.d, vecs)))
        mod = FilteredPhiModule(field, A_ad, filt, self.guard, validate=False)
        return mod, levels, P

    def tensor_product(self, other: "FilteredPhiModule") -> "FilteredPhiModule":
        """Tensor product with the convolved filtration
        Fil^j = sum_{a+b=j} Fil^a (x) Fil^b (built on adapted bases, where
        the convolution is the span of basis tensors with level sums >= j)."""
        if not self.field.compatible(other.field):
            raise ValueError("tensor factors over different fields")
        field = self.field
        m1, lv1, _ = self.in_adapted_coordinates()
        m2, lv2, _ = other.in_adapted_coordinates()
        d1, d2 = m1.d, m2.d
        ops = self.ops()
        A = [[None] * (d1 * d2) for _ in range(d1 * d2)]
        for i in range(d1):
            for j in range(d2):
                for k in range(d1):
                    for l in range(d2):
                        A[i * d2 + j][k * d2 + l] = \
                            m1.phi_matrix[i][k] * m2.phi_matrix[j][l]
        sums = sorted({a + b for a in lv1 for b in lv2})
        filt = []
        for j in sums:
            vecs = []
            for i in range(d1):
                for k in range(d2):
                    if lv1[i] + lv2[k] >= j:
                        e = [field.zero() for _ in range(d1 * d2)]
                        e[i * d2 + k] = field.one()
                        vecs.append(e)
            filt.append((j, Subspace(field, d1 * d2, vecs)))
        return FilteredPhiModule(field, A, filt, self.guard, validate=False)

    def wedge_power(self, v: int) -> "FilteredPhiModule":
        """Lambda^v with the filtration induced from the tensor convolution:
        on an adapted basis, spans of elementary wedges by level sums."""
        if not 1 <= v <= self.d:
            raise ValueError(f"wedge exponent must be in 1..{self.d}")
        field = self.field
        m, levels, _ = self.in_adapted_coordinates()
        idxsets = list(combinations(range(self.d), v))
        ops = self.ops()
        D = len(idxsets)
        A = [[None] * D for _ in range(D)]
        for col, J in enumerate(idxsets):
            for row, I in enumerate(idxsets):
                sub = [[m.phi_matrix[i][j] for j in J] for i in I]
                A[row][col] = det(sub, ops)
        sums = sorted({sum(levels[i] for i in I) for I in idxsets})
        filt = []
        for j in sums:
            vecs = []
            for row, I in enumerate(idxsets):
                if sum(levels[i] for i in I) >= j:
                    e = [field.zero() for _ in range(D)]
                    e[row] = field.one()
                    vecs.append(e)
            filt.append((j, Subspace(field, D, vecs)))
        return FilteredPhiModule(field, A, filt, self.guard, validate=False)

    def erase_filtration_step(self, k: int) -> "FilteredPhiModule":
        """Same phi; the filtration step at jump k erased (Fil^k becomes
        Fil^(k+1), everything else unchanged)."""
        jumps = self.jumps()
        if k not in jumps:
            raise ValueError(f"{k} is not a filtration jump of this module")
        idx = jumps.index(k)
        filt = [(j, sub) for j, sub in self.filtration]
        if idx > 0 and jumps[idx - 1] == k - 1:
            # the step merges into the previous one
            filt.pop(idx)
        else:
            filt[idx] = (k - 1, filt[idx][1])
        if not filt:
            raise ValueError("cannot erase the only filtration step of a "
                             "one-step filtration")
        return FilteredPhiModule(self.field, self.phi_matrix, filt,
                                 self.guard, validate=False)

    def __repr__(self):
        return (f"FilteredPhiModule(d={self.d}, f={self.field.f}, "
                f"jumps={self.jumps()})")


def _mat_inverse(A, ops):
    n = len(A)
    aug = [list(row) + [ops.one() if i == j else ops.zero()
                        for j in range(n)] for i, row in enumerate(A)]
    rows, pivots, _ = echelon(aug, ops, reduce_above=True)
    if len(pivots) != n:
        raise PrecisionError("matrix not invertible at precision")
    out = [[None] * n for _ in range(n)]
    for r, c in pivots:
        for j in range(n):
            out[c][j] = rows[r][n + j]
    return out


def tensor_slope_check(m1: FilteredPhiModule, m2: FilteredPhiModule,
                       c1, c2) -> Certificate:
    """Verify the slope bound lambda <= c1 + c2 on the tensor product of two
    modules of slopes <= c1 and <= c2."""
    pre1 = m1.slope_bound_check(c1)
    if not pre1.verdict:
        raise ValueError("first factor is not of slope <= c1")
    pre2 = m2.slope_bound_check(c2)
    if not pre2.verdict:
        raise ValueError("second factor is not of slope <= c2")
    return m1.tensor_product(m2).slope_bound_check(Fraction(c1) + Fraction(c2))


def modular_form_module(p: int, k_weight: int, a_p, filtration_line=None,
                        precision: int = 20, guard: int = 4,
                        field: UnramifiedField | None = None) -> FilteredPhiModule:
    """The rank-2 filtered module of a weight-k eigenform with Frobenius
    normalized so that t_N = t_H = -(k-1).

    phi = p^-(k-1) * C with C the companion matrix of
    X^2 - a_p X + p^(k-1); jumps at -(k-1) (full space) and 0 (a line,
    by default spanned by e1 + e2, generically not an eigenline).
    """
    if k_weight < 2:
        raise ValueError("weight must be >= 2")
    a_p = Fraction(a_p)
    field = field or UnramifiedField(p, 1, precision)
    from .padics import vp_fraction
    if a_p != 0 and vp_fraction(a_p, p) < 0:
        raise ValueError("a_p must be integral at p")
    scale = Fraction(p) ** (-(k_weight - 1))
    A = [[0, -scale * Fraction(p) ** (k_weight - 1)],
         [scale, scale * a_p]]
    mat = [[field.coerce(c) for c in row] for row in A]
    if filtration_line is None:
        filtration_line = [1, 1]
    line = Subspace(field, 2, [[field.coerce(c) for c in filtration_line]])
    full = Subspace(field, 2, [[field.one(), field.zero()],
                               [field.zero(), field.one()]])
    filt = [(-(k_weight - 1), full), (0, line)]
    return FilteredPhiModule(field, mat, filt, guard)
