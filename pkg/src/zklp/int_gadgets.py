"""Bounded-integer gadgets over F_p: range checks, sign/abs, max/min,
power-of-two lookups, shifts, zero tests and boolean logic."""

from __future__ import annotations

import math
from functools import wraps

import numpy as np

from .field_cs import HALF, INV2, LC, P, ConstraintSystem, as_int_array, inv_or_zero, register_hint


def gadget(kind: str):
    """Tag a gadget so circuits can be scanned for the kinds they emit."""

    def deco(fn):
        @wraps(fn)
        def wrapper(cs, *args, **kwargs):
            cs.gadgets[kind] += 1
            return fn(cs, *args, **kwargs)

        return wrapper

    return deco


# --- hints ------------------------------------------------------------------------

@register_hint("dec")
def _h_dec(v, *, L, T):
    """Split v into ceil(L/T) chunks of T bits; the top chunk is unmasked."""
    n = -(-L // T)
    mask = (1 << T) - 1
    out = [(v >> (T * i)) & mask for i in range(n - 1)]
    out.append(v >> (T * (n - 1)))
    return out


@register_hint("bits")
def _h_bits(v, *, L):
    """Little-endian bits of v; the top output keeps any excess."""
    out = [(v >> i) & 1 for i in range(L - 1)]
    out.append(v >> (L - 1))
    return out


@register_hint("gez")
def _h_gez(v):
    """1 if v, read as a signed field element, is >= 0."""
    return [as_int_array(v <= HALF)]


@register_hint("inv")
def _h_inv(x):
    """x^-1, or 0 for x = 0."""
    return [inv_or_zero(x)]


@register_hint("pow2")
def _h_pow2(d, *, k_max):
    """2^d for d in [0, k_max], else 0 (keeps the witness finite)."""
    ok = d <= k_max
    ds = np.where(ok, d, 0)
    return [np.where(ok, np.left_shift(np.ones(len(d), dtype=object), ds), 0)]


@register_hint("div")
def _h_div(a, b):
    """(a // b, a % b) on canonical representatives; b = 0 gives (0, a)."""
    safe = np.where(b == 0, 1, b)
    q = np.where(b == 0, 0, a // safe)
    r = np.where(b == 0, a, a % safe)
    return [q, r]


_isqrt = np.frompyfunc(math.isqrt, 1, 1)


@register_hint("sqrt")
def _h_sqrt(x):
    """floor(sqrt(x))."""
    return [_isqrt(x)]


# --- range checks -----------------------------------------------------------------

@gadget("range_check")
def range_check(cs: ConstraintSystem, v: LC, L: int, method: str = "lookup") -> None:
    """Constrain v to [0, 2^L - 1]."""
    if (1 << L) >= P:
        raise ValueError("range bound must stay below p")
    if L == 0:
        cs.assert_equal(v, 0)
        return
    if method == "bits":
        bits = cs.hint("bits", [v], L, L=L)
        for b in bits:
            cs.assert_bool(b)
        cs.assert_equal(v, sum((b * (1 << i) for i, b in enumerate(bits)), cs.const(0)))
        return
    T = cs.chunk_bits
    table = cs.range_table()
    chunks = cs.hint("dec", [v], -(-L // T), L=L, T=T)
    for ch in chunks:
        cs.lookup(table, [ch])
    rem = L % T
    if rem:
        # narrower last chunk: shift it to the top of the table range
        cs.lookup(table, [chunks[-1] * (1 << (T - rem))])
    cs.assert_equal(v, sum((ch * (1 << (T * i)) for i, ch in enumerate(chunks)), cs.const(0)))


def _sign_parts(cs: ConstraintSystem, v: LC, L: int) -> tuple[LC, LC, LC]:
    """(sign, |v|, sign*v) for |v| < 2^L.

    Uses a one's-complement witness r = sign ? v : -v - 1 so that every v
    has exactly one accepted sign (zero is non-negative).
    """
    if (1 << (L + 1)) >= HALF:
        raise ValueError("bit length too large for signed decomposition")
    s, = cs.hint("gez", [v], 1)
    cs.assert_bool(s)
    t = cs.mul(s, v * 2 + 1)
    r = t - v - 1
    range_check(cs, r, L)
    sv = (t - s) * INV2
    return s, r + 1 - s, sv


@gadget("abs_sign")
def abs_sign(cs: ConstraintSystem, v: LC, L: int) -> tuple[LC, LC]:
    s, a, _ = _sign_parts(cs, v, L)
    return s, a


@gadget("is_ge_zero")
def is_ge_zero(cs: ConstraintSystem, v: LC, L: int) -> LC:
    return _sign_parts(cs, v, L)[0]


@gadget("max")
def max_(cs: ConstraintSystem, x: LC, y: LC, L: int) -> LC:
    _, _, sd = _sign_parts(cs, x - y, L)
    return y + sd


@gadget("min")
def min_(cs: ConstraintSystem, x: LC, y: LC, L: int) -> LC:
    _, _, sd = _sign_parts(cs, x - y, L)
    return x - sd


# --- powers of two and shifts -------------------------------------------------------

@gadget("pow2")
def pow2(cs: ConstraintSystem, d: LC, k_max: int | None = None) -> LC:
    """2^d via a T_Pow2 lookup; d outside [0, K_max] fails at finalize."""
    table = cs.pow2_table()
    r, = cs.hint("pow2", [d], 1, k_max=table.k_max)
    cs.lookup(table, [d, r])
    return r


@gadget("shl")
def shl(cs: ConstraintSystem, v: LC, d: LC, L: int, K: int) -> LC:
    if (1 << (L + K)) >= P:
        raise ValueError("2^(L+K) must stay below p")
    return cs.mul(v, pow2(cs, d, K))


@gadget("shr")
def shr(cs: ConstraintSystem, v: LC, d: LC, L: int, K: int) -> LC:
    """floor(v / 2^d) for v < 2^L, d in [0, K]."""
    q, _ = shr_rem(cs, v, d, L, K)
    return q


def shr_rem(cs: ConstraintSystem, v: LC, d: LC, L: int, K: int) -> tuple[LC, LC]:
    """(q, r) with v * 2^(K-d) = q * 2^K + r."""
    if (1 << (L + K)) >= P:
        raise ValueError("2^(L+K) must stay below p")
    vs = cs.mul(v, pow2(cs, cs.const(K) - d, K))
    q, r = cs.hint("div", [vs, cs.const(1 << K)], 2)
    range_check(cs, q, L)
    range_check(cs, r, K)
    cs.assert_equal(vs, q * (1 << K) + r)
    return q, r


# --- zero tests and logic -------------------------------------------------------------

@gadget("is_zero")
def is_zero(cs: ConstraintSystem, x: LC) -> LC:
    """1 iff x = 0: b = 1 - x*inv, x*b = 0, inv*b = 0 (inv is unique)."""
    if x.is_constant():
        return cs.const(1 if x.constant_value() == 0 else 0)
    inv, = cs.hint("inv", [x], 1)
    b = cs.const(1) - cs.mul(x, inv)
    cs.assert_r1cs(x, b, cs.const(0))
    cs.assert_r1cs(inv, b, cs.const(0))
    return cs.mark_boolean(b)


def is_eq(cs: ConstraintSystem, x: LC, y) -> LC:
    return is_zero(cs, x - y)


@gadget("select")
def select(cs: ConstraintSystem, cond: LC, t, f) -> LC:
    """cond ? t : f for boolean cond."""
    t = t if isinstance(t, LC) else cs.const(t)
    f = f if isinstance(f, LC) else cs.const(f)
    diff = t - f
    if not diff.terms:
        return f
    out = f + cs.mul(cond, diff)
    if cs.is_boolean(t) and cs.is_boolean(f):
        cs.mark_boolean(out)
    return out


def and_(cs: ConstraintSystem, a: LC, b: LC) -> LC:
    return cs.mark_boolean(cs.mul(a, b))


def or_(cs: ConstraintSystem, a: LC, b: LC) -> LC:
    return cs.mark_boolean(a + b - cs.mul(a, b))


def xor(cs: ConstraintSystem, a: LC, b: LC) -> LC:
    return cs.mark_boolean(a + b - cs.mul(a, b) * 2)


def not_(cs: ConstraintSystem, a: LC) -> LC:
    out = cs.const(1) - a
    if cs.is_boolean(a):
        cs.mark_boolean(out)
    return out


def bool_input(cs: ConstraintSystem, x: LC) -> LC:
    return cs.assert_bool(x)
