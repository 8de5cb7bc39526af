"""JSON (de)serialization for scalars, series and filtered modules.

Formats:

* scalar:  {"val": int|null, "unit": "<base-p digits, least significant
  first>", "prec": int}; plain ints and "a/b" strings are accepted as exact
  shorthand anywhere a scalar is expected.
* field element: array of f scalars (a bare scalar is shorthand when f=1).
* series:  {"trunc": N, "bound": rational-or-null, "coeffs": [field
  elements]} with optional "log_slope"/"index_shift" (the two extra profile
  components), "tail_zero" and "prec".
* log polynomial: {"terms": {"<exponent>": series, ...}}.
* module:  {"p": int, "f": int, "defpoly": [ints], "dim": d,
  "phi": [[field elements]] (rows), "filtration": [{"jump": j,
  "basis": [[field elements], ...]}, ...]} with optional "precision" and
  "work_margin".

Schema violations raise SchemaError carrying the path of the offending
field.
"""

from fractions import Fraction
import json

from .errors import SchemaError
from .padics import PadicScalar, FieldElement, UnramifiedField
from .series import TruncatedSeries
from .seriesops import LogPolynomial
from .modules import FilteredPhiModule, Subspace


def _fail(path, msg):
    raise SchemaError(f"{path}: {msg}")


def rational_to_json(x):
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_json(node, path):
    if node is None:
        return None
    if isinstance(node, int):
        return Fraction(node)
    if isinstance(node, str):
        try:
            if "/" in node:
                num, den = node.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(node))
        except (ValueError, ZeroDivisionError):
            _fail(path, f"not a rational: {node!r}")
    _fail(path, f"expected int, 'a/b' string or null, got {type(node).__name__}")


def _digits_to_str(digits, p):
    if p < 10:
        return "".join(str(d) for d in digits)
    return ".".join(str(d) for d in digits)


def _digits_from_str(s, p, path):
    if s == "":
        return 0
    try:
        if p < 10 and "." not in s:
            digs = [int(ch) for ch in s]
        else:
            digs = [int(part) for part in s.split(".")]
    except ValueError:
        _fail(path, f"bad digit string {s!r}")
    if any(d < 0 or d >= p for d in digs):
        _fail(path, f"digit out of range for base {p}")
    return sum(d * p ** i for i, d in enumerate(digs))


def scalar_to_json(s: PadicScalar):
    if s.is_zero:
        return {"val": None, "unit": "", "prec": s.prec}
    return {"val": s.val, "unit": _digits_to_str(s.digits(), s.p),
            "prec": s.prec}


def scalar_from_json(node, p, prec_default, path="scalar"):
    if isinstance(node, (int, str)):
        x = rational_from_json(node, path)
        return PadicScalar.from_rational(x, p, prec_default)
    if not isinstance(node, dict):
        _fail(path, "expected scalar object, int or string")
    prec = node.get("prec", prec_default)
    if not isinstance(prec, int):
        _fail(path + ".prec", "expected int")
    val = node.get("val")
    if val is None:
        return PadicScalar.zero(p, prec)
    if not isinstance(val, int):
        _fail(path + ".val", "expected int or null")
    unit = _digits_from_str(node.get("unit", ""), p, path + ".unit")
    if unit % p == 0:
        _fail(path + ".unit", "unit part must not be divisible by p")
    return PadicScalar.from_residue(p, val, unit, prec)


def element_to_json(a: FieldElement):
    return [scalar_to_json(c) for c in a.coords]


def element_from_json(node, field, path="element"):
    if isinstance(node, (int, str)):
        return field.coerce(rational_from_json(node, path))
    if not isinstance(node, list):
        _fail(path, "expected array of scalars (or int/string shorthand)")
    if len(node) != field.f:
        _fail(path, f"expected {field.f} coordinates, got {len(node)}")
    coords = [scalar_from_json(c, field.p, field.work_prec, f"{path}[{i}]")
              for i, c in enumerate(node)]
    return FieldElement(field, coords)


def series_to_json(s: TruncatedSeries):
    out = {
        "trunc": s.n,
        "bound": None,
        "coeffs": [element_to_json(s.coeff(i)) for i in range(s.n + 1)],
        "tail_zero": s.tail_zero,
        "prec": s.prec,
    }
    prof = s.effective_bound()
    if prof is not None:
        out["bound"] = rational_to_json(prof[0])
        if prof[1]:
            out["log_slope"] = prof[1]
        if prof[2]:
            out["index_shift"] = prof[2]
    return out


def series_from_json(node, field, path="series"):
    if not isinstance(node, dict):
        _fail(path, "expected series object")
    n = node.get("trunc")
    if not isinstance(n, int) or n < 0:
        _fail(path + ".trunc", "expected non-negative int")
    coeffs_node = node.get("coeffs")
    if not isinstance(coeffs_node, list):
        _fail(path + ".coeffs", "expected array")
    coeffs = [element_from_json(c, field, f"{path}.coeffs[{i}]")
              for i, c in enumerate(coeffs_node)]
    b = rational_from_json(node.get("bound"), path + ".bound")
    bound = None
    if b is not None:
        bound = (b, node.get("log_slope", 0), node.get("index_shift", 0))
    tail_zero = bool(node.get("tail_zero", bound is None))
    return TruncatedSeries.make(field, coeffs, n=n, bound=bound,
                                tail_zero=tail_zero,
                                prec=node.get("prec"))


def logpoly_to_json(lp: LogPolynomial):
    return {"terms": {str(i): series_to_json(c) for i, c in
                      sorted(lp.terms.items())}}


def logpoly_from_json(node, field, path="logpoly"):
    if not isinstance(node, dict) or "terms" not in node:
        _fail(path, "expected object with 'terms'")
    terms = {}
    for key, sub in node["terms"].items():
        try:
            i = int(key)
        except ValueError:
            _fail(f"{path}.terms.{key}", "exponent keys must be integers")
        terms[i] = series_from_json(sub, field, f"{path}.terms.{key}")
    return LogPolynomial(terms)


def module_to_json(m: FilteredPhiModule):
    return {
        "p": m.field.p,
        "f": m.field.f,
        "defpoly": list(m.field.defpoly),
        "dim": m.d,
        "precision": m.field.prec,
        "phi": [[element_to_json(c) for c in row] for row in m.phi_matrix],
        "filtration": [{"jump": j,
                        "basis": [[element_to_json(c) for c in vec]
                                  for vec in sub.basis]}
                       for j, sub in m.filtration],
    }


def module_from_json(node, path="module", precision=None, work_margin=None,
                     guard=4):
    if not isinstance(node, dict):
        _fail(path, "expected module object")
    for key in ("p", "dim", "phi", "filtration"):
        if key not in node:
            _fail(f"{path}.{key}", "missing required field")
    p = node["p"]
    f = node.get("f", 1)
    if not (isinstance(p, int) and isinstance(f, int)):
        _fail(path, "'p' and 'f' must be integers")
    prec = precision or node.get("precision", 20)
    margin = work_margin if work_margin is not None else \
        node.get("work_margin", 24)
    defpoly = node.get("defpoly")
    try:
        field = UnramifiedField(p, f, prec, defpoly=defpoly,
                               work_margin=margin)
    except ValueError as e:
        _fail(f"{path}.defpoly", str(e))
    d = node["dim"]
    phi_node = node["phi"]
    if not (isinstance(phi_node, list) and len(phi_node) == d and
            all(isinstance(r, list) and len(r) == d for r in phi_node)):
        _fail(f"{path}.phi", f"expected a {d}x{d} array of field elements")
    phi = [[element_from_json(c, field, f"{path}.phi[{i}][{j}]")
            for j, c in enumerate(row)] for i, row in enumerate(phi_node)]
    filt_node = node["filtration"]
    if not isinstance(filt_node, list) or not filt_node:
        _fail(f"{path}.filtration", "expected a non-empty array of steps")
    filtration = []
    for k, step in enumerate(filt_node):
        sp = f"{path}.filtration[{k}]"
        if not isinstance(step, dict) or "jump" not in step or \
                "basis" not in step:
            _fail(sp, "expected {'jump': int, 'basis': [[...]]}")
        j = step["jump"]
        if not isinstance(j, int):
            _fail(sp + ".jump", "expected int")
        vecs = []
        for vi, vec in enumerate(step["basis"]):
            if not isinstance(vec, list) or len(vec) != d:
                _fail(f"{sp}.basis[{vi}]", f"expected a length-{d} vector")
            vecs.append([element_from_json(c, field,
                                           f"{sp}.basis[{vi}][{ci}]")
                         for ci, c in enumerate(vec)])
        filtration.append((j, Subspace(field, d, vecs)))
    try:
        return FilteredPhiModule(field, phi, filtration, guard)
    except (ValueError, ArithmeticError) as e:
        _fail(path, f"invariant violation: {e}")


def parse_module_file(pathname, precision=None, work_margin=None, guard=4):
    """Load and fully validate a filtered module from a JSON file."""
    with open(pathname) as fobj:
        try:
            node = json.load(fobj)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{pathname}: invalid JSON: {e}") from e
    return module_from_json(node, path=str(pathname), precision=precision,
                            work_margin=work_margin, guard=guard)


def parse_series_file(pathname, field):
    with open(pathname) as fobj:
        try:
            node = json.load(fobj)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{pathname}: invalid JSON: {e}") from e
    return series_from_json(node, field, path=str(pathname))
