"""IEEE 754 floating-point gadgets (round-to-nearest-even) over the
constraint system.

A FloatVar is (s, e, m, a): sign bit, unbiased exponent as a signed field
element, mantissa with its leading bit explicit (subnormals normalized),
and an abnormal flag for infinities and NaN. Encodings:

    +-0   e = e_zero, m = 0,    a = 0
    +-inf e = 2^(E-1), m = 2^M, a = 1
    NaN   s = 0, e = 2^(E-1), m = 0, a = 1
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import int_gadgets as ig
from .field_cs import INV2, LC, P, ConstraintSystem, as_int_array, register_hint, signed
from .ieee import FloatParams, decode, encode, to_bits
from .int_gadgets import and_, gadget, is_eq, is_zero, not_, or_, select, xor


@dataclass(frozen=True)
class FloatVar:
    s: LC
    e: LC
    m: LC
    a: LC
    fp: FloatParams

    @property
    def cs(self) -> ConstraintSystem:
        return self.s.cs

    def components(self) -> tuple[LC, LC, LC, LC]:
        return (self.s, self.e, self.m, self.a)


# --- hints ------------------------------------------------------------------------

_bitlen = np.frompyfunc(int.bit_length, 1, 1)


@register_hint("norm")
def _h_norm(m, *, width):
    """Left shift d bringing m's MSB to bit width-1 (0 when m = 0)."""
    bl = _bitlen(m)
    d = width - bl
    return [np.where((m == 0) | (bl > width), 0, d)]


@register_hint("split")
def _h_split(x, *, W):
    """x -> (u, b1, b2, v) with x = u*2^(W+2) + b1*2^(W+1) + b2*2^W + v."""
    return [x >> (W + 2), (x >> (W + 1)) & 1, (x >> W) & 1, x & ((1 << W) - 1)]


@register_hint("msb")
def _h_msb(x, *, bit):
    """x >> bit (the top bit for in-range x)."""
    return [x >> bit]


@register_hint("lsb")
def _h_lsb(x):
    """Parity of x read as a signed field element."""
    return [as_int_array((np.where(x > (P - 1) // 2, x - P, x) & 1) == 1)]


@register_hint("pow2_inv")
def _h_pow2_inv(t, *, K):
    """2^K / t for power-of-two t (0 when t = 0)."""
    safe = np.where(t == 0, 1, t)
    return [np.where(t == 0, 0, (1 << K) // safe)]


# --- construction -----------------------------------------------------------------

def _abn_parts(cs: ConstraintSystem, x: FloatVar) -> tuple[LC, LC]:
    """(is_inf, is_nan) for a well-formed FloatVar: inf = a*m/2^M."""
    inf = cs.mark_boolean(cs.mul(x.a, x.m) * pow(1 << x.fp.M, -1, P))
    nan = cs.mark_boolean(x.a - inf)
    return inf, nan


@gadget("new_float")
def new_float(cs: ConstraintSystem, s_hat: LC, e_hat: LC, m_hat: LC, fp: FloatParams,
              checked: bool = True) -> FloatVar:
    """Raw IEEE fields -> FloatVar, with shape checks unless `checked` is off."""
    E, M = fp.E, fp.M
    if checked:
        cs.assert_bool(s_hat)
        ig.range_check(cs, e_hat, E)
        ig.range_check(cs, m_hat, M)
    e_is_0 = is_zero(cs, e_hat)
    e_is_max = is_eq(cs, e_hat, (1 << E) - 1)
    m_is_0 = is_zero(cs, m_hat)
    m0 = m_hat + (1 << M) - e_is_0 * (1 << M)
    e0 = e_hat - fp.bias + e_is_0
    m0_is_0 = and_(cs, e_is_0, m_is_0)
    # subnormals: shift the leading one up to bit M
    d, = cs.hint("norm", [m0], 1, width=M + 1)
    m = cs.mul(m0, ig.pow2(cs, d, fp.k_max))
    ig.range_check(cs, m - (cs.const(1) - m0_is_0) * (1 << M), M)
    cs.assert_r1cs(m0_is_0, d, cs.const(0))
    e = select(cs, m0_is_0, fp.e_zero, e0 - d)
    is_nan = and_(cs, e_is_max, not_(cs, m_is_0))
    m = m - cs.mul(is_nan, m)
    s = cs.mark_boolean(s_hat - cs.mul(is_nan, s_hat))
    return FloatVar(s, e, m, e_is_max, fp)


def float_input(cs: ConstraintSystem, bits, fp: FloatParams, checked: bool = True) -> FloatVar:
    """Allocate raw private fields from IEEE bit patterns (one per instance)."""
    if cs.witness_mode:
        if isinstance(bits, np.ndarray):
            bits = bits.ravel().tolist()
        elif not isinstance(bits, (list, tuple)):
            bits = [bits]
        bits = [int(b) for b in bits]
        parts = [[(b >> (fp.E + fp.M)), (b >> fp.M) & ((1 << fp.E) - 1), b & ((1 << fp.M) - 1)]
                 for b in bits]
        cols = [[p[k] for p in parts] for k in range(3)]
    else:
        cols = [0, 0, 0]
    s, e, m = (cs.private(c) for c in cols)
    return new_float(cs, s, e, m, fp, checked)


def float_const(cs: ConstraintSystem, x, fp: FloatParams) -> FloatVar:
    s, e, m, a = encode(to_bits(x, fp), fp)
    return FloatVar(cs.const(s), cs.const(e), cs.const(m), cs.const(a), fp)


def float_select(cs: ConstraintSystem, cond: LC, t: FloatVar, f: FloatVar) -> FloatVar:
    return FloatVar(*(select(cs, cond, x, y) for x, y in zip(t.components(), f.components())), t.fp)


def output_bits(x: FloatVar) -> list[int]:
    """Decode witness values of a FloatVar back to IEEE bit patterns."""
    cs = x.cs
    vals = [cs.values(c) for c in x.components()]
    out = []
    for s, e, m, a in zip(*vals):
        out.append(decode(int(s), signed(int(e)), int(m), int(a), x.fp))
    return out


def well_formed(x: FloatVar) -> list[bool]:
    """Debug validator for the FloatVar class invariants, per instance."""
    res = []
    cs = x.cs
    fp = x.fp
    for s, e, m, a in zip(*(cs.values(c) for c in x.components())):
        s, e, m, a = int(s), signed(int(e)), int(m), int(a)
        ok = s in (0, 1) and a in (0, 1) and fp.e_zero <= e <= fp.e_abn
        if ok:
            try:
                decode(s, e, m, a, fp)
            except ValueError:
                ok = False
        res.append(ok)
    return res


# --- rounding -------------------------------------------------------------------

@gadget("round")
def round_float(cs: ConstraintSystem, e: LC, m: LC, N: int, K: int, de: LC, aux: LC,
                fp: FloatParams) -> tuple[LC, LC]:
    """Round an N-bit normalized mantissa to M+1 bits, ties to even.

    de is the extra right shift for subnormal results (0 <= de <= K) and
    aux is 1 when no nonzero bits were dropped before reaching m.
    """
    M = fp.M
    W = N - M - 2 + K
    if K:
        t = ig.pow2(cs, cs.const(K) - de, fp.k_max)
        mt = cs.mul(m, t)
    else:
        mt = m
    u, b1, b2, v = cs.hint("split", [mt], 4, W=W)
    ig.range_check(cs, u, M)
    cs.assert_bool(b1)
    cs.assert_bool(b2)
    ig.range_check(cs, v, W)
    cs.assert_equal(mt, u * (1 << (W + 2)) + b1 * (1 << (W + 1)) + b2 * (1 << W) + v)
    half = is_eq(cs, b2 * (1 << W) + v, 1 << W)
    if not (aux.is_constant() and aux.constant_value() == 1):
        half = and_(cs, half, aux)
    rnd = select(cs, half, b1, b2)
    mr = u * 2 + b1 + rnd
    if K:
        t2, = cs.hint("pow2_inv", [t], 1, K=K)
        cs.assert_r1cs(t, t2, cs.const(1 << K))
        mr = cs.mul(mr, t2)
    overflow = is_eq(cs, mr, 1 << (M + 1))
    return e + overflow, mr - overflow * (1 << M)


def _normalize(cs: ConstraintSystem, mag: LC, width: int, fp: FloatParams) -> tuple[LC, LC, LC]:
    """(mag << d, d, mag_is_0) with the MSB moved to bit width-1."""
    mag_is_0 = is_zero(cs, mag)
    d, = cs.hint("norm", [mag], 1, width=width)
    mn = cs.mul(mag, ig.pow2(cs, d, fp.k_max))
    ig.range_check(cs, mn - (cs.const(1) - mag_is_0) * (1 << (width - 1)), width - 1)
    cs.assert_r1cs(mag_is_0, d, cs.const(0))
    return mn, d, mag_is_0


def _subnormal_shift(cs: ConstraintSystem, e: LC, K: int, fp: FloatParams) -> LC:
    """max(min(e_min - e, K), 0)."""
    L = fp.E + 2
    v = cs.const(fp.e_min) - e
    _, _, sd = ig._sign_parts(cs, v - K, L)
    w = v - sd
    _, _, sw = ig._sign_parts(cs, w, L)
    return sw


def _finish(cs: ConstraintSystem, fp: FloatParams, s: LC, e: LC, m: LC, abn: LC, is_nan: LC,
            zero: LC) -> FloatVar:
    """Assemble the output encoding from a rounded finite candidate."""
    m_out = select(cs, abn, (cs.const(1) - is_nan) * (1 << fp.M), m)
    e_fin = select(cs, zero, fp.e_zero, e)
    e_out = select(cs, abn, fp.e_abn, e_fin)
    s_out = cs.mark_boolean(s - cs.mul(is_nan, s))
    return FloatVar(s_out, e_out, m_out, abn, fp)


# --- arithmetic -------------------------------------------------------------------

@gadget("negate")
def negate(cs: ConstraintSystem, x: FloatVar) -> FloatVar:
    _, nan = _abn_parts(cs, x)
    s = cs.mark_boolean(cs.mul(not_(cs, x.s), not_(cs, nan)))
    return FloatVar(s, x.e, x.m, x.a, x.fp)


def _toggle(x: FloatVar) -> FloatVar:
    return FloatVar(x.cs.mark_boolean(1 - x.s), x.e, x.m, x.a, x.fp)


@gadget("add")
def add(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> FloatVar:
    fp = x.fp
    E, M = fp.E, fp.M
    L = M + 3
    N = 2 * M + 5
    # align exponents
    c, shift_raw, dsh = ig._sign_parts(cs, y.e - x.e, E + 1)
    e_big = x.e + dsh
    _, _, sd = ig._sign_parts(cs, shift_raw - L, E + 1)
    shift = shift_raw - sd
    # signed mantissas
    smx = x.m - cs.mul(x.s, x.m) * 2
    smy = y.m - cs.mul(y.s, y.m) * 2
    big = select(cs, c, smy, smx)
    small = smx + smy - big
    total = big * (1 << L) + cs.mul(small, ig.pow2(cs, cs.const(L) - shift, fp.k_max))
    nonneg, mag, _ = ig._sign_parts(cs, total, N)
    s_sum = not_(cs, nonneg)
    mn, d, _ = _normalize(cs, mag, N, fp)
    e1, m1 = round_float(cs, e_big + 1 - d, mn, N, 0, cs.const(0), cs.const(1), fp)
    # special cases
    inf_x, nan_x = _abn_parts(cs, x)
    inf_y, nan_y = _abn_parts(cs, y)
    diff_s = xor(cs, x.s, y.s)
    is_nan = or_(cs, or_(cs, nan_x, nan_y), and_(cs, and_(cs, inf_x, inf_y), diff_s))
    zero = is_zero(cs, m1)
    # an exact cancellation leaves e1 unnormalized, so it cannot overflow
    ovf = and_(cs, ig.is_ge_zero(cs, e1 - fp.e_abn, E + 1), not_(cs, zero))
    abn = or_(cs, or_(cs, x.a, y.a), ovf)
    s = select(cs, diff_s, s_sum, x.s)
    return _finish(cs, fp, s, e1, m1, abn, is_nan, zero)


@gadget("sub")
def sub(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> FloatVar:
    return add(cs, x, _toggle(y))


@gadget("mul")
def mul(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> FloatVar:
    fp = x.fp
    E, M = fp.E, fp.M
    s = xor(cs, x.s, y.s)
    e = x.e + y.e
    m = cs.mul(x.m, y.m)
    b, = cs.hint("msb", [m], 1, bit=2 * M + 1)
    cs.assert_bool(b)
    ig.range_check(cs, m - b * (1 << (2 * M + 1)), 2 * M + 1)
    mn = m * 2 - cs.mul(b, m)
    en = e + b
    K = M + 2
    de = _subnormal_shift(cs, en, K, fp)
    e1, m1 = round_float(cs, en, mn, 2 * M + 2, K, de, cs.const(1), fp)
    ovf = ig.is_ge_zero(cs, e1 - fp.e_abn, E + 2)
    abn = or_(cs, or_(cs, x.a, y.a), ovf)
    m_is_0 = is_zero(cs, m1)
    is_nan = and_(cs, abn, m_is_0)
    return _finish(cs, fp, s, e1, m1, abn, is_nan, m_is_0)


@gadget("div")
def div(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> FloatVar:
    fp = x.fp
    E, M = fp.E, fp.M
    s = xor(cs, x.s, y.s)
    e = x.e - y.e
    my_is_0 = is_zero(cs, y.m)
    # a zero divisor is replaced so the hint and the identity stay defined
    my = y.m + my_is_0 * (1 << M)
    num = x.m * (1 << (M + 2))
    q, r = cs.hint("div", [num, my], 2)
    ig.range_check(cs, r, M + 1)
    ig.range_check(cs, my - 1 - r, M + 1)
    cs.assert_equal(num, cs.mul(q, my) + r)
    b, = cs.hint("msb", [q], 1, bit=M + 2)
    cs.assert_bool(b)
    ig.range_check(cs, q - b * (1 << (M + 2)), M + 2)
    qn = q * 2 - cs.mul(b, q)
    en = e - 1 + b
    K = M + 2
    de = _subnormal_shift(cs, en, K, fp)
    exact = is_zero(cs, r)
    e1, m1 = round_float(cs, en, qn, M + 3, K, de, exact, fp)
    inf_x, nan_x = _abn_parts(cs, x)
    inf_y, nan_y = _abn_parts(cs, y)
    mx_is_0 = is_zero(cs, x.m)
    is_nan = or_(cs, or_(cs, nan_x, nan_y),
                 or_(cs, and_(cs, mx_is_0, my_is_0), and_(cs, inf_x, inf_y)))
    ovf = ig.is_ge_zero(cs, e1 - fp.e_abn, E + 2)
    abn = or_(cs, or_(cs, x.a, my_is_0), ovf)
    zero = or_(cs, is_zero(cs, m1), inf_y)
    m1 = m1 - cs.mul(zero, m1)
    return _finish(cs, fp, s, e1, m1, abn, is_nan, zero)


@gadget("sqrt")
def sqrt(cs: ConstraintSystem, x: FloatVar) -> FloatVar:
    fp = x.fp
    E, M = fp.E, fp.M
    b, = cs.hint("lsb", [x.e], 1)
    cs.assert_bool(b)
    eh = (x.e - b) * INV2
    # an odd e - b would land eh far outside the exponent range
    ig.abs_sign(cs, eh, E - 1)
    X = (x.m + cs.mul(b, x.m)) * (1 << (M + 4))
    n, = cs.hint("sqrt", [X], 1)
    r = X - cs.mul(n, n)
    ig.range_check(cs, r, M + 4)
    ig.range_check(cs, n * 2 - r, M + 4)
    e1, m1 = round_float(cs, eh, n, M + 3, 0, cs.const(0), is_zero(cs, r), fp)
    m_is_0 = is_zero(cs, x.m)
    inf_x, _ = _abn_parts(cs, x)
    neg = and_(cs, x.s, not_(cs, m_is_0))
    abn = or_(cs, x.a, neg)
    pos_inf = and_(cs, inf_x, not_(cs, x.s))
    is_nan = cs.mark_boolean(abn - pos_inf)
    s = cs.mark_boolean(cs.mul(x.s, m_is_0))
    return _finish(cs, fp, s, e1, m1, abn, is_nan, m_is_0)


# --- comparison -------------------------------------------------------------------

def _order_key(cs: ConstraintSystem, x: FloatVar) -> LC:
    """Signed key, monotone in the real value; +0 and -0 share key 0."""
    k = (x.e - x.fp.e_zero) * (1 << (x.fp.M + 1)) + x.m
    return k - cs.mul(x.s, k) * 2


def _any_nan(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> LC:
    _, nx = _abn_parts(cs, x)
    _, ny = _abn_parts(cs, y)
    return or_(cs, nx, ny)


@gadget("cmp")
def less_than(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> LC:
    L = x.fp.E + x.fp.M + 3
    lt = ig.is_ge_zero(cs, _order_key(cs, y) - _order_key(cs, x) - 1, L)
    return and_(cs, lt, not_(cs, _any_nan(cs, x, y)))


@gadget("cmp")
def less_equal(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> LC:
    L = x.fp.E + x.fp.M + 3
    le = ig.is_ge_zero(cs, _order_key(cs, y) - _order_key(cs, x), L)
    return and_(cs, le, not_(cs, _any_nan(cs, x, y)))


def greater_than(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> LC:
    return less_than(cs, y, x)


def greater_equal(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> LC:
    return less_equal(cs, y, x)


@gadget("assert_eq")
def assert_eq_strict(cs: ConstraintSystem, x: FloatVar, y: FloatVar) -> None:
    for a, b in zip(x.components(), y.components()):
        cs.assert_equal(a, b)


@gadget("assert_eq")
def assert_eq_fuzzy(cs: ConstraintSystem, x: FloatVar, y: FloatVar, tau: FloatVar) -> None:
    d = sub(cs, x, y)
    mag = FloatVar(cs.const(0), d.e, d.m, d.a, d.fp)
    cs.assert_equal(less_than(cs, mag, tau), 1)


def fabs(x: FloatVar) -> FloatVar:
    """|x|: clear the sign (NaN already has s = 0)."""
    return FloatVar(x.cs.const(0), x.e, x.m, x.a, x.fp)


@gadget("floor")
def floor_frac(cs: ConstraintSystem, x: FloatVar, Q: int) -> tuple[LC, FloatVar]:
    """(floor(x), x - floor(x)) for finite x >= 0 with x < 2^(Q+1), Q <= M.

    The fractional part is exact, so it comes back as a FloatVar without
    rounding. Larger or abnormal inputs leave the system unsatisfied.
    """
    fp = x.fp
    E, M = fp.E, fp.M
    if Q > M:
        raise ValueError("Q must not exceed the mantissa width")
    K = M + 1
    cs.assert_equal(x.a, 0)
    ig.range_check(cs, cs.const(Q) - x.e, E + 2)
    # right shift M - e, clamped at K; exponents below -1 take the tiny path
    d = ig.min_(cs, cs.const(M) - x.e, cs.const(K), E + 2)
    q, rem = ig.shr_rem(cs, x.m, d, M + 1, K)
    mn, dn, rem_is_0 = _normalize(cs, rem, K, fp)
    e_frac = select(cs, rem_is_0, fp.e_zero, cs.const(-1) - dn)
    frac = FloatVar(cs.const(0), e_frac, mn, cs.const(0), fp)
    tiny = ig.is_ge_zero(cs, cs.const(-2) - x.e, E + 2)
    q = select(cs, tiny, 0, q)
    frac = float_select(cs, tiny, FloatVar(cs.const(0), x.e, x.m, x.a, fp), frac)
    return q, frac
