"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import numpy as np

from zklp import float_gadgets as fg
from zklp import int_gadgets as ig
from zklp.field_cs import P, ConstraintSystem
from zklp.ieee import FloatParams
from zklp.vectors import special_values

INT_GADGETS = ["range_check", "range_check_bits", "abs_sign", "max", "min", "pow2", "shl", "shr", "is_zero",
               "is_ge_zero"]

FLOAT_OPS = {
    "add": fg.add, "sub": fg.sub, "mul": fg.mul, "div": fg.div,
    "sqrt": fg.sqrt, "less": fg.less_than,
}


def probe_operands(fp: FloatParams, n: int, seed: int = 0) -> tuple[list[int], list[int]]:
    """Random bit patterns with every special value mixed in."""
    rng = random.Random(seed)
    sp = special_values(fp)
    a = [rng.getrandbits(fp.width) for _ in range(n)]
    b = [rng.getrandbits(fp.width) for _ in range(n)]
    for q, v in enumerate(sp):
        a[q] = v
        b[q + len(sp)] = v
    # same-exponent pairs hit the cancellation and tie paths
    for q in range(2 * len(sp), min(n, 2 * len(sp) + n // 4)):
        b[q] = a[q] ^ rng.getrandbits(fp.M // 2)
    return a, b


def float_builder(op: str, fp: FloatParams, a: list[int], b: list[int]):
    def build(cs: ConstraintSystem) -> None:
        x = fg.float_input(cs, a, fp)
        if op == "sqrt":
            FLOAT_OPS[op](cs, x)
        else:
            FLOAT_OPS[op](cs, x, fg.float_input(cs, b, fp))
    return build


def hint_sites(build, batch: int, **cs_kw) -> list[tuple[int, str, int]]:
    """(ordinal, hint name, output count) for every hint call of an honest build."""
    cs = ConstraintSystem(batch=batch, **cs_kw)
    build(cs)
    rep = cs.finalize()
    assert rep.satisfied, "honest witness must satisfy the system"
    return [(o, name, len(outs)) for o, (name, outs) in enumerate(cs.hint_calls)]


def probe_site(build, site: tuple[int, str, int], batch: int, seed: int, **cs_kw) -> np.ndarray:
    """Each instance perturbs one randomly chosen output of the hint call by
    +1 or -1; returns the per-instance satisfaction flags."""
    o, _name, n_out = site
    rng = np.random.default_rng(seed)
    which = rng.integers(0, n_out, batch)
    sign = rng.choice([-1, 1], batch)
    tamper = {}
    for k in range(n_out):
        delta = np.where(which == k, sign, 0).astype(object)
        if delta.any():
            tamper[(o, k)] = delta
    cs = ConstraintSystem(batch=batch, tamper=tamper, **cs_kw)
    build(cs)
    return cs.finalize().satisfied_each


def probe_gadget(make_build, batch: int, seed: int = 0, **cs_kw) -> dict[tuple[int, str], int]:
    """Probe every hint call site with `batch` fresh random cases.

    make_build(seed) returns a builder over fresh random inputs; the
    result maps (ordinal, hint name) to the number of perturbed instances
    that still satisfied the system (all zeros means every probe failed).
    """
    sites = hint_sites(make_build(seed), batch, **cs_kw)
    out = {}
    for site in sites:
        case_seed = seed * 7919 + site[0] + 1
        sat = probe_site(make_build(case_seed), site, batch, case_seed, **cs_kw)
        out[(site[0], site[1])] = int(np.count_nonzero(sat))
    return out


def helper_builder(kind: str, fp: FloatParams, n: int, seed: int = 0):
    """Builders for the non-arithmetic float gadgets on honest random inputs."""
    rng = random.Random(seed)
    dt = fp.dtype
    if kind == "floor":
        # inputs in [0, 2^(Q+1)) so every path (tiny, fractional, integral) shows up
        Q = min(fp.M, 30)
        xs = [dt(rng.uniform(0, 2.0 ** rng.randrange(-30, Q + 1))) for _ in range(n)]
        xs[:3] = [dt(0.0), dt(0.5), dt(2.0 ** Q)]
        bits = np.array(xs, dtype=dt).view(fp.udtype).tolist()

        def build(cs: ConstraintSystem) -> None:
            fg.floor_frac(cs, fg.float_input(cs, bits, fp), Q)
        return build
    if kind == "assert_eq":
        tau = 2.0 ** -10
        xs = [dt(rng.uniform(-4, 4)) for _ in range(n)]
        ys = [dt(x + rng.uniform(-tau / 2, tau / 2)) for x in xs]
        xb = np.array(xs, dtype=dt).view(fp.udtype).tolist()
        yb = np.array(ys, dtype=dt).view(fp.udtype).tolist()

        def build(cs: ConstraintSystem) -> None:
            fg.assert_eq_fuzzy(cs, fg.float_input(cs, xb, fp), fg.float_input(cs, yb, fp),
                               fg.float_const(cs, tau, fp))
        return build
    raise ValueError(kind)


def int_builder(gadget: str):
    """make(seed) -> builder running one integer gadget on 1000 random inputs."""

    def make(seed):
        rng = random.Random(seed)
        n = 1000
        v = [rng.getrandbits(rng.randrange(1, 25)) for _ in range(n)]
        sv = [(x if rng.random() < 0.5 else -x) % P for x in v]
        d = [rng.randrange(25) for _ in range(n)]
        v[:3] = [0, 0, (1 << 24) - 1]
        sv[:3] = [0, P - 1, 1]

        def build(cs):
            if gadget == "range_check":
                ig.range_check(cs, cs.private(v), 24)
            elif gadget == "range_check_bits":
                ig.range_check(cs, cs.private(v), 24, "bits")
            elif gadget == "abs_sign":
                ig.abs_sign(cs, cs.private(sv), 24)
            elif gadget == "max":
                ig.max_(cs, cs.private(sv), cs.private(v), 26)
            elif gadget == "min":
                ig.min_(cs, cs.private(v), cs.private(sv), 26)
            elif gadget == "pow2":
                ig.pow2(cs, cs.private(d))
            elif gadget == "shl":
                ig.shl(cs, cs.private(v), cs.private(d), 24, 24)
            elif gadget == "shr":
                ig.shr(cs, cs.private(v), cs.private(d), 24, 24)
            elif gadget == "is_ge_zero":
                ig.is_ge_zero(cs, cs.private(sv), 25)
            elif gadget == "is_zero":
                ig.is_zero(cs, cs.private([x if k % 3 else 0 for k, x in enumerate(v)]))
        return build
    return make


ACCEPTANCE: list[str] = []


def record_acceptance(n: int, ok: bool, detail: str, known_gap: bool = False) -> None:
    """Log one criterion line; conftest prints them all in the terminal summary."""
    tag = "PASS" if ok else ("FAIL (known gap, xfail)" if known_gap else "FAIL")
    line = f"criterion {n}: {tag} - {detail}"
    ACCEPTANCE.append(line)
    print(line)
