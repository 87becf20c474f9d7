"""TestFloat-style operand vectors with hardware-computed expected results.

File format, one record per line (hex digits zero-padded to the format
width, lowercase):

    op a b expected          binary ops (add, sub, mul, div, less)
    op a expected            unary ops (sqrt)

For `less` the expected field is a single digit, 1 or 0. Lines starting
with `#` are comments; the first line carries the format version.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterator

import numpy as np

from .ieee import FloatParams, is_nan_bits, pack_bits, split_bits

VECTOR_VERSION = "zklp-vectors v1"
BINARY_OPS = ("add", "sub", "mul", "div", "less")
UNARY_OPS = ("sqrt",)
BINARY_COUNT = 46464
UNARY_COUNT = 600


def special_values(fp: FloatParams) -> list[int]:
    E, M = fp.E, fp.M
    emax = (1 << E) - 1
    ones = (1 << M) - 1
    pos = [
        0,                              # +0
        pack_bits(0, emax, 0, fp),      # +inf
        fp.canonical_nan,               # quiet NaN
        pack_bits(0, emax, 1, fp),      # signalling NaN payload
        1,                              # min subnormal
        ones,                           # max subnormal
        pack_bits(0, 1, 0, fp),         # min normal
        pack_bits(0, emax - 1, ones, fp),  # max normal
        pack_bits(0, fp.bias, 0, fp),   # 1.0
        pack_bits(0, fp.bias, 1, fp),   # 1 + ulp
        pack_bits(0, fp.bias - 1, ones, fp),  # 1 - ulp/2
    ]
    sign = 1 << (E + M)
    return pos + [v | sign for v in pos]


def _hw(op: str, a: np.ndarray, b: np.ndarray | None, fp: FloatParams) -> list[int]:
    """Expected results from the host FPU via numpy."""
    x = a.astype(fp.udtype).view(fp.dtype)
    with np.errstate(all="ignore"):
        if op == "sqrt":
            r = np.sqrt(x)
        else:
            y = b.astype(fp.udtype).view(fp.dtype)
            if op == "less":
                return [int(v) for v in (x < y)]
            r = {"add": np.add, "sub": np.subtract, "mul": np.multiply, "div": np.divide}[op](x, y)
    return [int(v) for v in r.view(fp.udtype)]


# --- exact rational oracle for the second pass -------------------------------------

def _to_fraction(bits: int, fp: FloatParams) -> Fraction | None:
    s, e, m = split_bits(bits, fp)
    if e == (1 << fp.E) - 1:
        return None
    if e == 0:
        v = Fraction(m, 1 << (fp.M - fp.e_min)) if fp.M - fp.e_min >= 0 else Fraction(m * (1 << (fp.e_min - fp.M)))
    else:
        v = Fraction((1 << fp.M) | m) * Fraction(2) ** (e - fp.bias - fp.M)
    return -v if s else v


def _round_fraction(v: Fraction, sign_if_zero: int, fp: FloatParams) -> int:
    """Round a rational to the nearest representable value, ties to even."""
    if v == 0:
        return sign_if_zero << (fp.E + fp.M)
    s = 1 if v < 0 else 0
    v = abs(v)
    # exponent of the leading bit
    k = v.numerator.bit_length() - v.denominator.bit_length()
    if Fraction(2) ** k > v:
        k -= 1
    k = max(k, fp.e_min)
    scaled = v / Fraction(2) ** (k - fp.M)
    q, r = divmod(scaled.numerator, scaled.denominator)
    twice = 2 * r
    if twice > scaled.denominator or (twice == scaled.denominator and q & 1):
        q += 1
    if q == 1 << (fp.M + 1):
        q >>= 1
        k += 1
    if k > fp.bias:
        return pack_bits(s, (1 << fp.E) - 1, 0, fp)
    if q < (1 << fp.M):
        return pack_bits(s, 0, q, fp)
    return pack_bits(s, k + fp.bias, q - (1 << fp.M), fp)


def exact_result(op: str, a: int, b: int | None, fp: FloatParams) -> int:
    """Independent IEEE result from exact rational arithmetic."""
    inf = pack_bits(0, (1 << fp.E) - 1, 0, fp)
    sbit = 1 << (fp.E + fp.M)
    nan = fp.canonical_nan
    sa = a >> (fp.E + fp.M)
    xa = _to_fraction(a, fp)
    if op == "sqrt":
        if is_nan_bits(a, fp):
            return nan
        if xa is None:
            return nan if sa else inf
        if xa == 0:
            return a
        if xa < 0:
            return nan
        # floor(sqrt) at enough precision, then one sticky bit
        shift = 2 * (fp.M + 4) - (xa.numerator.bit_length() - xa.denominator.bit_length())
        shift += shift & 1
        scaled = xa * Fraction(2) ** shift
        n = math.isqrt(scaled.numerator // scaled.denominator)
        exact = n * n * scaled.denominator == scaled.numerator
        approx = Fraction(2 * n + (0 if exact else 1), 2) / Fraction(2) ** (shift // 2)
        return _round_fraction(approx if not exact else Fraction(n) / Fraction(2) ** (shift // 2), 0, fp)
    sb = b >> (fp.E + fp.M)
    xb = _to_fraction(b, fp)
    if op == "less":
        if is_nan_bits(a, fp) or is_nan_bits(b, fp):
            return 0
        ka = xa if xa is not None else (-math.inf if sa else math.inf)
        kb = xb if xb is not None else (-math.inf if sb else math.inf)
        return int(ka < kb)
    if is_nan_bits(a, fp) or is_nan_bits(b, fp):
        return nan
    if op == "sub":
        sb ^= 1
        xb = -xb if xb is not None else None
        op = "add"
    if op == "add":
        if xa is None or xb is None:
            if xa is None and xb is None:
                return nan if sa != sb else (inf | (sa * sbit))
            return (inf | (sa * sbit)) if xa is None else (inf | (sb * sbit))
        v = xa + xb
        return _round_fraction(v, sa & sb if v == 0 else 0, fp)
    s = sa ^ sb
    if op == "mul":
        if xa is None or xb is None:
            if (xa is not None and xa == 0) or (xb is not None and xb == 0):
                return nan
            return inf | (s * sbit)
        return _round_fraction(xa * xb, s, fp)
    if op == "div":
        if xa is None:
            return nan if xb is None else inf | (s * sbit)
        if xb is None:
            return s * sbit
        if xb == 0:
            return nan if xa == 0 else inf | (s * sbit)
        return _round_fraction(xa / xb, s, fp)
    raise ValueError(op)


# --- generation ---------------------------------------------------------------------

def _rand_bits(rng: random.Random, fp: FloatParams) -> int:
    return rng.getrandbits(fp.width)


def _rand_finite(rng: random.Random, fp: FloatParams, e_lo: int = 1, e_hi: int | None = None) -> int:
    e_hi = (1 << fp.E) - 2 if e_hi is None else e_hi
    return pack_bits(rng.getrandbits(1), rng.randint(e_lo, e_hi), rng.getrandbits(fp.M), fp)


def _boundary_mantissa(rng: random.Random, fp: FloatParams) -> int:
    M = fp.M
    kind = rng.randrange(5)
    if kind == 0:
        m = (1 << M) - 1
    elif kind == 1:
        m = 1 << rng.randrange(M)
    elif kind == 2:
        m = 0
    elif kind == 3:
        m = (1 << M) - 1 - (1 << rng.randrange(M))
    else:
        m = 1
    e = rng.choice([0, 1, 2, fp.bias, (1 << fp.E) - 2, (1 << fp.E) - 3, rng.randint(0, (1 << fp.E) - 2)])
    return pack_bits(rng.getrandbits(1), e, m, fp)


def _edge_pair(op: str, rng: random.Random, fp: FloatParams) -> tuple[int, int]:
    """Operands engineered to land on or next to a rounding tie."""
    E, M = fp.E, fp.M
    s1, ea, ma = split_bits(_rand_finite(rng, fp, 1, (1 << E) - 2), fp)
    if op in ("add", "sub", "less"):
        eb = max(0, ea - (M + 1) + rng.choice([-1, 0, 0, 1, 2]))
        mb = rng.choice([0, 0, rng.getrandbits(M), 1, (1 << M) - 1])
        sb = rng.getrandbits(1)
        return pack_bits(s1, ea, ma, fp), pack_bits(sb, eb, mb, fp)
    if op == "mul":
        i = rng.randint(1, M)
        j = M + 1 - i + rng.choice([0, 0, -1, 1])
        j = min(max(j, 1), M)
        e1 = rng.randint(1, (1 << E) - 2)
        e2 = rng.choice([fp.bias, rng.randint(1, (1 << E) - 2), max(1, (1 << E) - 1 - e1 - rng.randint(0, M + 4))])
        return pack_bits(rng.getrandbits(1), e1, 1 << (M - i), fp), pack_bits(rng.getrandbits(1), e2, 1 << (M - j), fp)
    if op == "div":
        # quotient with a short mantissa, sometimes exact
        mb = rng.getrandbits(M)
        eb = rng.randint(1, (1 << E) - 2)
        c = 1 + rng.getrandbits(rng.randint(1, 4))
        num = (((1 << M) | mb) * c)
        while num >= (1 << (M + 1)):
            num >>= 1
        ea2 = rng.randint(1, (1 << E) - 2)
        return pack_bits(rng.getrandbits(1), ea2, num - (1 << M), fp), pack_bits(rng.getrandbits(1), eb, mb, fp)
    raise ValueError(op)


def _tiny_pair(op: str, rng: random.Random, fp: FloatParams) -> tuple[int, int]:
    """Operands whose result sits in or near the subnormal range."""
    E = fp.E
    lo = rng.randint(0, 3)
    if op in ("add", "sub", "less"):
        return _rand_finite(rng, fp, 0, lo + 2), _rand_finite(rng, fp, 0, lo + 2)
    if op == "mul":
        e1 = rng.randint(1, fp.bias)
        e2 = max(0, fp.bias - e1 + rng.randint(-fp.M - 4, 2))
        return _rand_finite(rng, fp, e1, e1), _rand_finite(rng, fp, e2, e2)
    e1 = rng.randint(0, fp.bias)
    e2 = min((1 << E) - 2, e1 + fp.bias + rng.randint(-2, fp.M + 4))
    return _rand_finite(rng, fp, e1, e1), _rand_finite(rng, fp, e2, e2)


def _huge_pair(op: str, rng: random.Random, fp: FloatParams) -> tuple[int, int]:
    top = (1 << fp.E) - 2
    if op in ("add", "sub", "less"):
        return _rand_finite(rng, fp, top - 1, top), _rand_finite(rng, fp, top - 1, top)
    if op == "mul":
        e1 = rng.randint(fp.bias, top)
        return _rand_finite(rng, fp, e1, e1), _rand_finite(rng, fp, max(1, top + fp.bias - e1 - 1), top)
    return _rand_finite(rng, fp, top - 2, top), _rand_finite(rng, fp, 1, 3)


def _cancel_pair(rng: random.Random, fp: FloatParams) -> tuple[int, int]:
    a = _rand_finite(rng, fp)
    s, e, m = split_bits(a, fp)
    m2 = (m + rng.randint(-3, 3)) % (1 << fp.M)
    e2 = max(0, e + rng.choice([0, 0, -1, 1]))
    return a, pack_bits(1 - s, e2, m2, fp)


def generate_float_vectors(op: str, fp: FloatParams, seed: int = 0, count: int | None = None) -> list[tuple]:
    """Operand tuples with expected results, deterministic in (op, fp, seed)."""
    rng = random.Random(f"{seed}:{op}:{fp.name}")
    specials = special_values(fp)
    unary = op in UNARY_OPS
    if op not in BINARY_OPS + UNARY_OPS:
        raise ValueError(f"unknown op {op!r}")
    count = count or (UNARY_COUNT if unary else BINARY_COUNT)
    ops_a: list[int] = []
    ops_b: list[int] = []
    if unary:
        ops_a += specials
        while len(ops_a) < count:
            kind = rng.randrange(5)
            if kind == 0:
                ops_a.append(_boundary_mantissa(rng, fp))
            elif kind == 1:
                # exact squares and their neighbours
                x = np.array(_rand_finite(rng, fp, fp.bias // 2, fp.bias + fp.bias // 2), dtype=fp.udtype).view(fp.dtype)
                sq = int(np.array(x * x, dtype=fp.dtype).view(fp.udtype)) & ~(1 << (fp.width - 1))
                ops_a.append(min(max(sq + rng.choice([-1, 0, 0, 1]), 0), (1 << (fp.width - 1)) - 1))
            elif kind == 2:
                ops_a.append(_rand_finite(rng, fp, 0, 2))
            else:
                ops_a.append(_rand_bits(rng, fp))
        ops_a = ops_a[:count]
        exp = _hw(op, np.array(ops_a, dtype=np.uint64), None, fp)
        return [(op, a, e) for a, e in zip(ops_a, exp)]
    for x in specials:
        for y in specials:
            ops_a.append(x)
            ops_b.append(y)
    while len(ops_a) < count:
        kind = rng.randrange(8)
        if kind == 0:
            a, b = _boundary_mantissa(rng, fp), _boundary_mantissa(rng, fp)
        elif kind == 1:
            a, b = _boundary_mantissa(rng, fp), rng.choice(specials)
        elif kind == 2:
            a, b = _edge_pair(op, rng, fp)
        elif kind == 3:
            a, b = _tiny_pair(op, rng, fp)
        elif kind == 4:
            a, b = _huge_pair(op, rng, fp)
        elif kind == 5:
            a, b = _cancel_pair(rng, fp)
        else:
            a, b = _rand_bits(rng, fp), _rand_bits(rng, fp)
        if rng.getrandbits(1):
            a, b = b, a
        ops_a.append(a)
        ops_b.append(b)
    ops_a, ops_b = ops_a[:count], ops_b[:count]
    exp = _hw(op, np.array(ops_a, dtype=np.uint64), np.array(ops_b, dtype=np.uint64), fp)
    return [(op, a, b, e) for a, b, e in zip(ops_a, ops_b, exp)]


def verify_vectors(vectors: list[tuple], fp: FloatParams) -> list[int]:
    """Second evaluation pass with the exact rational oracle; returns the
    indices that disagree (NaN compared as a class)."""
    bad = []
    for idx, v in enumerate(vectors):
        op = v[0]
        if op in UNARY_OPS:
            want = exact_result(op, v[1], None, fp)
        else:
            want = exact_result(op, v[1], v[2], fp)
        got = v[-1]
        if op == "less":
            ok = got == want
        elif is_nan_bits(want, fp):
            ok = is_nan_bits(got, fp)
        else:
            ok = got == want
        if not ok:
            bad.append(idx)
    return bad


def format_vector(v: tuple, fp: FloatParams) -> str:
    w = fp.width // 4
    op = v[0]
    if op in UNARY_OPS:
        return f"{op} {v[1]:0{w}x} {v[2]:0{w}x}"
    if op == "less":
        return f"{op} {v[1]:0{w}x} {v[2]:0{w}x} {v[3]:x}"
    return f"{op} {v[1]:0{w}x} {v[2]:0{w}x} {v[3]:0{w}x}"


def write_vectors(vectors: list[tuple], fp: FloatParams, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {VECTOR_VERSION} {fp.name}\n")
        for v in vectors:
            fh.write(format_vector(v, fp) + "\n")


def read_vectors(path: str) -> tuple[str, Iterator[tuple]]:
    """Parse a vector file; raises ValueError naming the offending line."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(f"# {VECTOR_VERSION}"):
        raise ValueError(f"{path}:1: missing '# {VECTOR_VERSION}' header")
    fmt = lines[0].split()[-1]
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        op = parts[0]
        want = 3 if op in UNARY_OPS else 4
        if op not in BINARY_OPS + UNARY_OPS or len(parts) != want:
            raise ValueError(f"{path}:{lineno}: malformed record {line!r}")
        try:
            out.append((op, *(int(x, 16) for x in parts[1:])))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad hex field in {line!r}") from None
    return fmt, iter(out)
