"""Packed big-integer kernels for polynomial arithmetic modulo p^R.

A coefficient vector with entries in [0, mod) is packed into one Python
integer using fixed-width limbs sized so that a full convolution cannot
overflow a limb.  Polynomial products then become single big-integer
multiplications, and Taylor shifts f(x) -> f(x + delta) become a
divide-and-conquer stack of such products.  Everything here is exact
integer arithmetic; reduction mod p^R happens only at unpack time.

These kernels are internal: the series layer is responsible for precision
bookkeeping and only hands in canonical residue vectors.
"""

from math import comb
from functools import lru_cache


def _limb_bits(mod: int, length: int) -> int:
    # products of two reduced coefficients, summed over <= length terms
    bound = (mod - 1) * (mod - 1) * max(length, 1)
    bits = bound.bit_length() + 1
    return ((bits + 7) // 8) * 8


def pack(coeffs, limb_bytes: int) -> int:
    buf = bytearray(limb_bytes * len(coeffs))
    pos = 0
    for c in coeffs:
        buf[pos:pos + limb_bytes] = c.to_bytes(limb_bytes, "little")
        pos += limb_bytes
    return int.from_bytes(buf, "little")


def unpack(n: int, count: int, limb_bytes: int):
    raw = n.to_bytes(limb_bytes * count, "little")
    out = []
    pos = 0
    for _ in range(count):
        out.append(int.from_bytes(raw[pos:pos + limb_bytes], "little"))
        pos += limb_bytes
    return out


def polymul(a, b, mod: int, out_len: int):
    """Truncated product of coefficient vectors ``a`` and ``b`` mod ``mod``.

    Returns the first ``out_len`` coefficients of a*b, entries reduced to
    [0, mod).
    """
    if not a or not b:
        return [0] * out_len
    # operands may arrive from wider residue windows; reduce before packing
    a = [x % mod for x in a]
    b = [x % mod for x in b]
    bits = _limb_bits(mod, min(len(a), len(b)))
    lb = bits // 8
    prod = pack(a, lb) * pack(b, lb)
    total = len(a) + len(b) - 1
    keep = min(out_len, total)
    res = unpack(prod, total, lb)[:keep]
    out = [c % mod for c in res]
    if keep < out_len:
        out.extend([0] * (out_len - keep))
    return out


def poly_add(a, b, mod: int):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % mod
    return out


@lru_cache(maxsize=None)
def _binomial_row(k: int, delta: int, mod: int):
    # coefficients of (x + delta)^k mod `mod`
    return tuple(comb(k, i) * pow(delta, k - i, mod) % mod for i in range(k + 1))


def taylor_shift(coeffs, delta: int, mod: int):
    """Coefficients of f(x + delta) given those of f, all mod ``mod``.

    Divide and conquer: f = lo + x^h * hi gives
    f(x+d) = lo(x+d) + (x+d)^h * hi(x+d).
    """
    n = len(coeffs)
    if n <= 16:
        out = [0] * n
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            row = _binomial_row(i, delta, mod)
            for j, r in enumerate(row):
                out[j] = (out[j] + c * r) % mod
        return out
    h = n // 2
    lo = taylor_shift(coeffs[:h], delta, mod)
    hi = taylor_shift(coeffs[h:], delta, mod)
    shifted_hi = polymul(hi, list(_binomial_row(h, delta, mod)), mod, n)
    out = [0] * n
    for i, c in enumerate(lo):
        out[i] = c
    for i, c in enumerate(shifted_hi):
        out[i] = (out[i] + c) % mod
    return out


def stretch(coeffs, factor: int, out_len: int):
    """Index dilation c_k -> position factor*k (substitution y -> y^factor)."""
    out = [0] * out_len
    for k, c in enumerate(coeffs):
        pos = k * factor
        if pos >= out_len:
            break
        out[pos] = c
    return out


def contract(coeffs, factor: int):
    """Keep indices divisible by ``factor`` and divide them by it."""
    return [coeffs[k] for k in range(0, len(coeffs), factor)]


def compose(f, g, mod: int, out_len: int):
    """Coefficients of f(g(x)) truncated to ``out_len``; needs g[0] == 0.

    Horner from the top; every step is one packed product.
    """
    if g and g[0] % mod != 0:
        raise ValueError("composition requires g(0) = 0")
    acc = [0] * out_len
    for c in reversed(f):
        acc = polymul(acc, g, mod, out_len)
        acc[0] = (acc[0] + c) % mod
    return acc


def invert_series(u, mod: int, out_len: int):
    """Inverse of a series with unit constant term, by Newton iteration."""
    u0 = u[0] % mod
    inv0 = pow(u0, -1, mod)
    v = [inv0]
    length = 1
    while length < out_len:
        length = min(2 * length, out_len)
        uv = polymul(u[:length], v, mod, length)
        # v <- v * (2 - u v)
        corr = [(-c) % mod for c in uv]
        corr[0] = (corr[0] + 2) % mod
        v = polymul(v, corr, mod, length)
    return v[:out_len]
