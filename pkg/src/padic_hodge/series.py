"""Truncated power series over K with exact residue arithmetic.

A series is a coefficient vector a_0..a_N over K stored as f parallel
integer residue vectors: coefficient i equals p^shift * (sum_l coords[l][i]
t^l) and is known modulo p^(shift+rel).  Precision is tracked per series
(the uniform window of its coefficients); every ring operation propagates
the correct output precision using the minimum coefficient valuation of the
other factor.

Tail knowledge takes one of three forms:

* ``tail_zero`` -- the series is an exact polynomial;
* a profile bound (b, s, h) certifying v_p(a_i) >= -b - s*floor(log_p(i+h))
  for every i including the untracked tail (s is a log-power budget --
  log(1+x) itself has profile (0, 1, 0) -- and the index shift h absorbs
  differentiation, which moves coefficients down without growing them);
* nothing, in which case any tail-sensitive question raises TailBoundError.

The x <-> (1+x) basis conversions that make phi, psi and D cheap are exact
integer Taylor shifts from the packed kernel module.
"""

from fractions import Fraction
from dataclasses import dataclass
import math

from . import intpoly
from .errors import TailBoundError
from .padics import PadicScalar, FieldElement

INFINITE = math.inf


def _floor_logp(i: int, p: int) -> int:
    k = 0
    while i >= p:
        i //= p
        k += 1
    return k


class TruncatedSeries:
    __slots__ = ("field", "n", "shift", "rel", "coords", "bound", "tail_zero",
                 "_vmin")

    def __init__(self, field, n, shift, rel, coords, bound=None, tail_zero=False):
        self.field = field
        self.n = n
        self.shift = shift
        self.rel = rel
        self.coords = coords
        self.bound = _norm_profile(bound)
        self.tail_zero = tail_zero
        self._vmin = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def make(field, coefficients, n=None, bound=None, tail_zero=True, prec=None):
        """Series from a list of coefficients (FieldElement / int / Fraction).

        By default the input is taken to be an exact polynomial.
        """
        coeffs = [c if isinstance(c, FieldElement) else field.coerce(c)
                  for c in coefficients]
        if n is None:
            n = len(coeffs) - 1
        if len(coeffs) < n + 1:
            coeffs = coeffs + [field.zero()] * (n + 1 - len(coeffs))
        coeffs = coeffs[:n + 1]
        prec = prec if prec is not None else min((c.prec for c in coeffs),
                                                 default=field.work_prec)
        vals = [v for c in coeffs for v in [c.valuation_or_none()] if v is not None]
        shift = min([0] + vals)
        rel = prec - shift
        if rel <= 0:
            return TruncatedSeries.zero(field, n, prec=prec,
                                        bound=bound, tail_zero=tail_zero)
        cols = []
        for l in range(field.f):
            col = []
            for c in coeffs:
                col.append(c.coords[l].residue(shift, rel))
            cols.append(col)
        return TruncatedSeries(field, n, shift, rel, cols,
                               bound=_norm_profile(bound), tail_zero=tail_zero)

    @staticmethod
    def zero(field, n, prec=None, bound=None, tail_zero=True):
        prec = prec if prec is not None else field.work_prec
        cols = [[0] * (n + 1) for _ in range(field.f)]
        return TruncatedSeries(field, n, 0, prec, cols,
                               bound=bound, tail_zero=tail_zero)

    @staticmethod
    def one(field, n, prec=None):
        s = TruncatedSeries.zero(field, n, prec=prec)
        s.coords[0][0] = 1
        return s

    @staticmethod
    def x_plus_one_power(field, exponent, n, prec=None):
        """(1+x)^exponent as an exact polynomial (exponent >= 0) ."""
        prec = prec if prec is not None else field.work_prec
        mod = field.p ** prec
        col = [math.comb(exponent, i) % mod for i in range(min(exponent, n) + 1)]
        col += [0] * (n + 1 - len(col))
        cols = [col] + [[0] * (n + 1) for _ in range(field.f - 1)]
        return TruncatedSeries(field, n, 0, prec, cols, bound=(Fraction(0), 0),
                               tail_zero=True)

    # -- basic structure -------------------------------------------------

    @property
    def prec(self):
        return self.shift + self.rel

    @property
    def vmin(self):
        """Certified minimal coefficient valuation (prec if all residues 0)."""
        if self._vmin is None:
            p = self.field.p
            best = None
            for col in self.coords:
                for r in col:
                    if r:
                        v = 0
                        while r % p == 0:
                            r //= p
                            v += 1
                        if best is None or v < best:
                            best = v
                        if best == 0:
                            break
                if best == 0:
                    break
            self._vmin = self.prec if best is None else self.shift + best
        return self._vmin

    @property
    def is_zero(self):
        return all(r == 0 for col in self.coords for r in col)

    def effective_bound(self):
        """Profile (b, s, h) valid for all coefficients including the tail,
        or None when nothing is known about the tail."""
        if self.bound is not None:
            return self.bound
        if self.tail_zero:
            return (Fraction(max(0, -min(self.vmin, 0))), 0, 0)
        return None

    def coeff(self, i) -> FieldElement:
        p = self.field.p
        if i > self.n:
            if self.tail_zero:
                return self.field.zero(self.prec)
            raise IndexError(f"coefficient {i} beyond truncation degree {self.n}")
        scal = [PadicScalar.from_residue(p, self.shift, col[i], self.prec)
                for col in self.coords]
        return FieldElement(self.field, scal)

    def coefficients(self):
        return [self.coeff(i) for i in range(self.n + 1)]

    def residues(self, shift, rel):
        """Coordinate residue vectors aligned to the given window."""
        p = self.field.p
        mod = p ** rel
        mult = p ** (self.shift - shift)
        return [[r * mult % mod for r in col] for col in self.coords]

    def truncate(self, n_new):
        if n_new >= self.n:
            if self.tail_zero and n_new > self.n:
                cols = [col + [0] * (n_new - self.n) for col in self.coords]
                return TruncatedSeries(self.field, n_new, self.shift, self.rel,
                                       cols, self.bound, True)
            return self
        cols = [col[:n_new + 1] for col in self.coords]
        return TruncatedSeries(self.field, n_new, self.shift, self.rel, cols,
                               self.effective_bound(), False)

    def as_polynomial(self):
        """Reinterpret the tracked coefficients as an exact polynomial,
        dropping any claim about the original series' tail.  Legitimate when
        the caller is constructing a polynomial, not truncating a series."""
        return TruncatedSeries(self.field, self.n, self.shift, self.rel,
                               self.coords, None, True)

    def shift_x(self, k):
        """Multiply by x^k (k >= 0) or divide by x^k (k < 0; low coefficients
        are dropped and must be zero at precision for exact semantics)."""
        if k == 0:
            return self
        if k > 0:
            cols = [[0] * k + col[:max(0, self.n + 1 - k)] for col in self.coords]
            return TruncatedSeries(self.field, self.n, self.shift, self.rel,
                                   cols, self.bound, False)
        k = -k
        cols = [col[k:] for col in self.coords]
        return TruncatedSeries(self.field, self.n - k, self.shift, self.rel,
                               cols, self.bound, self.tail_zero)

    # -- ring operations ---------------------------------------------------

    def _n_eff(self):
        return INFINITE if self.tail_zero else self.n

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.make(self.field, [other], n=0)
        field = self.field
        prec = min(self.prec, other.prec)
        shift = min(self.shift, other.shift)
        rel = prec - shift
        na, nb = self._n_eff(), other._n_eff()
        if min(na, nb) == INFINITE:
            n_out = max(self.n, other.n)
            tz = True
        else:
            n_out = int(min(min(na, nb), max(self.n, other.n)))
            tz = False
        if rel <= 0:
            ba, bb = self.effective_bound(), other.effective_bound()
            bound = _merge_profiles(ba, bb)
            return TruncatedSeries.zero(field, n_out, prec=prec, bound=bound,
                                        tail_zero=tz)
        p = field.p
        mod = p ** rel
        ra = self.residues(shift, rel)
        rb = other.residues(shift, rel)
        cols = []
        for l in range(field.f):
            ca, cb = ra[l], rb[l]
            col = [0] * (n_out + 1)
            for i in range(min(len(ca), n_out + 1)):
                col[i] = ca[i]
            for i in range(min(len(cb), n_out + 1)):
                col[i] = (col[i] + cb[i]) % mod
            cols.append(col)
        bound = _merge_profiles(self.effective_bound(), other.effective_bound())
        return TruncatedSeries(field, n_out, shift, rel, cols, bound, tz)

    def __neg__(self):
        mod = self.field.p ** self.rel
        cols = [[(-r) % mod for r in col] for col in self.coords]
        return TruncatedSeries(self.field, self.n, self.shift, self.rel, cols,
                               self.bound, self.tail_zero)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.make(self.field, [other], n=0)
        return self + (-other)

    def _scalar_mul(self, c):
        """Multiply by an exact rational or a K scalar."""
        field = self.field
        if isinstance(c, (int, Fraction)):
            c = Fraction(c)
            if c == 0:
                return TruncatedSeries.zero(field, self.n,
                                            prec=self.prec, tail_zero=self.tail_zero)
            from .padics import vp_fraction
            v = vp_fraction(c, field.p)
            mod = field.p ** self.rel
            unit = Fraction(c, Fraction(field.p) ** v)
            u = unit.numerator * pow(unit.denominator, -1, mod) % mod
            cols = [[r * u % mod for r in col] for col in self.coords]
            b = self.effective_bound()
            bound = None if b is None else (b[0] - v, b[1], b[2])
            return TruncatedSeries(field, self.n, self.shift + v, self.rel,
                                   cols, bound, self.tail_zero)
        one_term = TruncatedSeries.make(field, [c], n=0)
        return self * one_term

    def __mul__(self, other):
        field = self.field
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, (int, Fraction)):
                return self._scalar_mul(other)
            return self._scalar_mul(field.coerce(other))
        p = field.p
        na, nb = self._n_eff(), other._n_eff()
        if min(na, nb) == INFINITE:
            n_out = self.n + other.n
            tz = True
        else:
            n_out = int(min(na, nb))
            tz = False
        prec = min(self.prec + other.vmin, other.prec + self.vmin)
        shift = self.shift + other.shift
        rel = prec - shift
        bound = _mul_profiles(self.effective_bound(), other.effective_bound())
        if rel <= 0:
            return TruncatedSeries.zero(field, n_out, prec=prec, bound=bound,
                                        tail_zero=tz)
        mod = p ** rel
        f = field.f
        raw = [None] * (2 * f - 1)
        for l in range(f):
            ca = self.coords[l]
            for m in range(f):
                cb = other.coords[m]
                pm = intpoly.polymul(ca, cb, mod, n_out + 1)
                k = l + m
                if raw[k] is None:
                    raw[k] = pm
                else:
                    raw[k] = [(x + y) % mod for x, y in zip(raw[k], pm)]
        cols = [raw[l] if raw[l] is not None else [0] * (n_out + 1)
                for l in range(f)]
        for k in range(f, 2 * f - 1):
            if raw[k] is None:
                continue
            row = field._red_rows[k - f]
            for l in range(f):
                if row[l]:
                    rl = row[l] % mod
                    cols[l] = [(x + rl * y) % mod
                               for x, y in zip(cols[l], raw[k])]
        return TruncatedSeries(field, n_out, shift, rel, cols, bound, tz)

    __rmul__ = __mul__

    def normalized(self):
        """Strip the largest common power of p from the residues into shift."""
        k = self.vmin - self.shift
        if k <= 0 or k >= self.rel:
            return self
        q = self.field.p ** k
        cols = [[r // q if r else 0 for r in col] for col in self.coords]
        return TruncatedSeries(self.field, self.n, self.shift + k,
                               self.rel - k, cols, self.bound, self.tail_zero)

    def equals(self, other):
        return (self - other).is_zero

    def __repr__(self):
        nz = [(i, self.coeff(i)) for i in range(min(self.n, 6) + 1)]
        body = " + ".join(f"({c!r})x^{i}" for i, c in nz if not c.is_zero)
        return (f"Series[N={self.n}, O(p^{self.prec})]"
                f"({body or '0'}{'' if self.n <= 6 else ' + ...'})")


# ----------------------------------------------------------------------
# tail bounds
# ----------------------------------------------------------------------

def _norm_profile(bound):
    if bound is None:
        return None
    if not isinstance(bound, tuple):
        return (Fraction(bound), 0, 0)
    if len(bound) == 2:
        return (Fraction(bound[0]), bound[1], 0)
    return (Fraction(bound[0]), bound[1], bound[2])


def _merge_profiles(ba, bb):
    """Profile dominating both inputs (for sums)."""
    if ba is None or bb is None:
        return None
    return (max(ba[0], bb[0]), max(ba[1], bb[1]), max(ba[2], bb[2]))


def _mul_profiles(ba, bb):
    """Profile of a product: constants and slopes add, shifts take the max."""
    if ba is None or bb is None:
        return None
    return (ba[0] + bb[0], ba[1] + bb[1], max(ba[2], bb[2]))


def tail_valuation_bound(series, weight: Fraction):
    """Lower bound for min_{i>N} (v_p(a_i) + i*weight), or None (exact tail 0).

    ``weight`` is the per-degree valuation weight of the evaluation point
    (1/e_n for the layer-n uniformizer, 1/(p^n (p-1)) for the rho_n norm).

    Raises TailBoundError when the series carries no tail information.
    """
    if series.tail_zero:
        return None
    prof = series.effective_bound()
    if prof is None:
        raise TailBoundError(
            "series carries no coefficient bound; tail-sensitive decision refused")
    b, s, h = prof
    p = series.field.p
    N = series.n
    # g(i) = i*weight - b - s*floor(log_p(i+h)) increases between powers of
    # p, so the minimum over i > N is attained at N+1 or where the floor
    # steps; candidate values at those points grow like p^k*weight - s*k,
    # so a few dozen steps always cover the minimum.
    k0 = _floor_logp(N + 1 + h, p)
    best = Fraction(N + 1) * weight - b - s * k0
    for k in range(k0 + 1, k0 + 40):
        i = max(p ** k - h, N + 1)
        cand = Fraction(i) * weight - b - s * k
        if cand < best:
            best = cand
    return best
