import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zklp import int_gadgets as ig
from zklp.field_cs import (
    COUNT, P, WITNESS, BuildError, ConstraintSystem, FieldElement, LookupTable, WitnessError,
    inv_or_zero, register_hint,
)

felts = st.integers(min_value=0, max_value=P - 1)


def test_modulus_is_bn254_scalar_field():
    # r = 36u^4 + 36u^3 + 18u^2 + 6u + 1 with the BN254 parameter u
    u = 4965661367192848881
    assert P == 36 * u**4 + 36 * u**3 + 18 * u**2 + 6 * u + 1
    assert P.bit_length() == 254
    assert pow(3, P - 1, P) == 1


@given(felts, felts, felts)
def test_field_laws(a, b, c):
    x, y, z = FieldElement(a), FieldElement(b), FieldElement(c)
    assert (x + y) * z == x * z + y * z
    assert x - y + y == x
    assert int(x * y) == a * b % P
    assert 0 <= int(x + y) < P


@given(st.integers(min_value=1, max_value=P - 1))
def test_inverse(a):
    assert FieldElement(a) * FieldElement(a).inverse() == FieldElement(1)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        FieldElement(0).inverse()


@given(st.lists(st.integers(min_value=0, max_value=P - 1), min_size=1, max_size=40))
def test_inv_or_zero(vals):
    out = inv_or_zero(np.array(vals, dtype=object))
    for v, w in zip(vals, out):
        assert w == (pow(v, -1, P) if v else 0)


def test_new_system_shapes():
    cs = ConstraintSystem(COUNT)
    rep = cs.finalize()
    assert rep.native_constraints == 0 and cs.num_variables == 1
    cs = ConstraintSystem(WITNESS)
    x = cs.public(5)
    assert x.single_var() == 1 and cs.witness[1][0] == 5
    assert cs.kinds[0] == "one"


def test_r1cs_examples():
    cs = ConstraintSystem()
    x, y = cs.private(3), cs.private(4)
    cs.assert_r1cs(x, cs.one(), x)
    cs.assert_r1cs(x, y, cs.const(12))
    assert cs.finalize().satisfied

    cs = ConstraintSystem()
    x, y = cs.private(3), cs.private(4)
    cs.assert_r1cs(x, cs.one(), x)
    cs.assert_r1cs(x, y, cs.const(13))
    rep = cs.finalize()
    assert not rep.satisfied and rep.first_failing() == 1


def test_unallocated_variable_is_a_build_error():
    cs = ConstraintSystem()
    other = ConstraintSystem()
    other.private(1)
    other.private(2)
    with pytest.raises(BuildError):
        cs.assert_r1cs(other.private(3), cs.one(), cs.one())


def test_missing_and_failing_hints():
    cs = ConstraintSystem()
    with pytest.raises(BuildError):
        cs.hint("no-such-hint", [cs.one()], 1)

    @register_hint("test_boom")
    def _boom(x):
        raise RuntimeError("boom")

    with pytest.raises(WitnessError):
        cs.hint("test_boom", [cs.private(1)], 1)


def test_dec_and_div_hints():
    cs = ConstraintSystem()
    bits = cs.hint("bits", [cs.private(5)], 3, L=3)
    assert [int(cs.values(b)[0]) for b in bits] == [1, 0, 1]
    q, r = cs.hint("div", [cs.private(13), cs.private(4)], 2)
    assert (int(cs.values(q)[0]), int(cs.values(r)[0])) == (3, 1)


def _div_check(q_delta, r_delta):
    cs = ConstraintSystem(tamper={(0, 0): q_delta, (0, 1): r_delta})
    a, b = cs.private(13), cs.private(4)
    q, r = cs.hint("div", [a, b], 2)
    cs.assert_equal(a, cs.mul(q, b) + r)
    ig.range_check(cs, r, 2)
    return cs.finalize()


def test_tampered_division_hint():
    assert _div_check(0, 0).satisfied
    # (q, r) = (2, 5) satisfies the identity but not r < 4
    assert not _div_check(-1, 4).satisfied


def test_unconstrained_hint_outputs_are_reported():
    cs = ConstraintSystem()
    bits = cs.hint("bits", [cs.private(6)], 3, L=3)
    cs.assert_bool(bits[0])
    rep = cs.finalize()
    assert sorted(k for _, _, k in rep.unconstrained) == [1, 2]


def _pow2_query(d, r):
    cs = ConstraintSystem(k_max=8)
    cs.lookup(cs.pow2_table(), [cs.private(d), cs.private(r)])
    return cs.finalize()


def test_lookup_examples():
    assert _pow2_query(3, 8).satisfied
    assert not _pow2_query(3, 9).satisfied
    cs = ConstraintSystem()
    cs.range_table()
    rep = cs.finalize()
    assert rep.satisfied and rep.lookup_constraints == 256 + 1


def test_lookup_width_mismatch():
    cs = ConstraintSystem()
    with pytest.raises(BuildError):
        cs.lookup(cs.pow2_table(), [cs.private(1)])


def test_lookup_soundness_randomized():
    """1000 instances, each querying one tuple outside a random table."""
    rng = random.Random(7)
    entries = [(rng.randrange(P), rng.randrange(P)) for _ in range(64)]
    present = set(entries)
    B = 1000
    absent = []
    while len(absent) < B:
        t = rng.choice(entries)
        cand = (t[0], (t[1] + rng.randrange(1, 1 << 20)) % P) if rng.random() < 0.5 else (rng.randrange(P), t[1])
        if cand not in present:
            absent.append(cand)
    cs = ConstraintSystem(batch=B)
    table = cs.add_table(LookupTable("random", 2, entries))
    for _ in range(3):
        picks = [rng.choice(entries) for _ in range(B)]
        cs.lookup(table, [cs.private([p[0] for p in picks]), cs.private([p[1] for p in picks])])
    cs.lookup(table, [cs.private([a[0] for a in absent]), cs.private([a[1] for a in absent])])
    rep = cs.finalize()
    assert not rep.satisfied_each.any()


def test_lookup_completeness_randomized():
    rng = random.Random(8)
    entries = [(rng.randrange(P),) for _ in range(50)]
    B = 200
    cs = ConstraintSystem(batch=B)
    table = cs.add_table(LookupTable("t1", 1, entries))
    for _ in range(20):
        cs.lookup(table, [cs.private([rng.choice(entries)[0] for _ in range(B)])])
    assert cs.finalize().satisfied


def test_logup_identity_holds_in_witness():
    cs = ConstraintSystem(batch=4, k_max=8)
    t = cs.pow2_table()
    for d in range(5):
        cs.lookup(t, [cs.const(d), cs.const(1 << d)])
    cs.lookup(t, [cs.private([1, 2, 3, 4]), cs.private([2, 4, 8, 16])])
    rep = cs.finalize()
    assert rep.satisfied
    assert rep.lookup_queries == {t.name: 6}


def _range_queries(k, T=8, mode=COUNT, keep=False):
    cs = ConstraintSystem(mode, chunk_bits=T, keep=keep)
    for _ in range(k):
        ig.range_check(cs, cs.private(None if mode == COUNT else 0), T)
    return cs.finalize()


def test_range_table_lookup_cost_is_affine():
    counts = {k: _range_queries(k).lookup_constraints for k in (2, 32, 1024, 32768)}
    A = (counts[32] - counts[2]) // 30
    B = counts[2] - 2 * A
    assert A == 1 and B == 256 + 1
    assert all(counts[k] == A * k + B for k in counts)


def test_count_and_witness_modes_agree():
    def build(cs, vals):
        x = cs.private(vals)
        ig.range_check(cs, x, 20)
        ig.shr(cs, x, cs.const(3), 20, 8)
        ig.is_zero(cs, x)

    w = ConstraintSystem(WITNESS, batch=3)
    build(w, [1, 2, 3])
    c = ConstraintSystem(COUNT)
    build(c, None)
    rw, rc = w.finalize(), c.finalize()
    assert (rw.native_constraints, rw.lookup_constraints) == (rc.native_constraints, rc.lookup_constraints)
    assert w.constraints == c.constraints


def test_keep_false_requires_count_mode():
    with pytest.raises(BuildError):
        ConstraintSystem(WITNESS, keep=False)


@pytest.mark.parametrize("flip", [False, True])
def test_flipped_witness_bit_is_caught(flip):
    cs = ConstraintSystem()
    x = cs.private(1234)
    ig.range_check(cs, x, 16)
    y = ig.shl(cs, x, cs.const(2), 16, 4)
    cs.assert_equal(y, 1234 * 4)
    if flip:
        cs.witness[y.single_var()][0] ^= 1
    assert cs.finalize().satisfied is not flip


def test_stats_and_witness_dump_formats():
    cs = ConstraintSystem()
    ig.range_check(cs, cs.private(300), 12)
    rec = cs.stats_record("rc12")
    assert rec.splitlines()[0] == "# zklp-stats v1"
    assert "circuit_name: rc12" in rec and "queries[T_RC[8]]: 3" in rec
    dump = cs.witness_dump()
    lines = dump.splitlines()
    assert lines[0] == "# zklp-witness v1" and lines[1] == "0 1" and lines[2] == "1 300"


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=(1 << 24) - 1), min_size=1, max_size=8))
def test_builds_are_deterministic(vals):
    def build():
        cs = ConstraintSystem(batch=len(vals))
        x = cs.private(vals)
        ig.range_check(cs, x, 24)
        ig.max_(cs, x, cs.const(1 << 20), 25)
        cs.finalize()
        return cs

    a, b = build(), build()
    assert a.constraints == b.constraints
    assert a.finalize().satisfied
