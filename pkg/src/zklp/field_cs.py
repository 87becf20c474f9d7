"""Prime-field arithmetic, an R1CS builder with eager witness generation,
nondeterministic hints, and LogUp lookup tables checked in-circuit.

Witness values are batched: every variable holds a numpy object array of
Python ints, one entry per independent instance of the same circuit. A
single instance is simply a batch of one. In count-only mode no values are
kept at all, only structure.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

# BN254 scalar field
P = 21888242871839275222246405745257275088548364400416034343698204186575808495617
HALF = (P - 1) // 2
INV2 = (P + 1) // 2

WITNESS = "witness-gen"
COUNT = "count-only"


def canon(x: int) -> int:
    return x % P


def signed(x: int) -> int:
    """Representative of x in (-(p-1)/2, (p-1)/2]."""
    x %= P
    return x - P if x > HALF else x


class FieldElement:
    """Element of F_p held in canonical form."""

    __slots__ = ("value",)

    def __init__(self, value: int | "FieldElement"):
        self.value = int(value) % P

    def _v(self, other) -> int:
        return other.value if isinstance(other, FieldElement) else int(other) % P

    def __add__(self, other):
        return FieldElement(self.value + self._v(other))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._v(other))

    def __rsub__(self, other):
        return FieldElement(self._v(other) - self.value)

    def __mul__(self, other):
        return FieldElement(self.value * self._v(other))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FieldElement(pow(self.value, -1, P))

    def __truediv__(self, other):
        return self * FieldElement(self._v(other)).inverse()

    def __pow__(self, k: int):
        return FieldElement(pow(self.value, k, P))

    def __eq__(self, other) -> bool:
        if isinstance(other, (FieldElement, int)):
            return self.value == self._v(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.value})"


class BuildError(Exception):
    pass


class WitnessError(Exception):
    pass


# --- batched value helpers -----------------------------------------------

def obj_array(values, batch: int) -> np.ndarray:
    if isinstance(values, np.ndarray) and values.dtype == object and values.shape == (batch,):
        return values
    if isinstance(values, (int, np.integer, FieldElement)):
        out = np.empty(batch, dtype=object)
        out[:] = int(values) % P
        return out
    arr = np.empty(batch, dtype=object)
    vals = list(values)
    if len(vals) != batch:
        raise WitnessError(f"expected {batch} values, got {len(vals)}")
    arr[:] = [int(v) % P for v in vals]
    return arr


def as_int_array(cond: np.ndarray) -> np.ndarray:
    """Boolean mask -> object array of Python 0/1."""
    return np.where(cond, 1, 0).astype(object)


def inv_or_zero(x: np.ndarray) -> np.ndarray:
    """Element-wise inverse (0 for 0) with one modular exponentiation."""
    vals = [int(v) % P for v in np.atleast_1d(x)]
    prefix = []
    acc = 1
    for v in vals:
        if v:
            acc = acc * v % P
        prefix.append(acc)
    inv = pow(acc, -1, P)
    out = [0] * len(vals)
    for k in range(len(vals) - 1, -1, -1):
        v = vals[k]
        if v:
            out[k] = inv * (prefix[k - 1] if k else 1) % P
            inv = inv * v % P
    arr = np.empty(len(vals), dtype=object)
    arr[:] = out
    return arr


# --- linear combinations ------------------------------------------------------

def _norm_coeff(c: int) -> int:
    c %= P
    return c - P if c > HALF else c


class LC:
    """Linear combination over witness variables (index 0 is the one-wire).

    `value` tracks the honest witness value eagerly; it is congruent to the
    field value but not necessarily reduced.
    """

    __slots__ = ("cs", "terms", "value")

    def __init__(self, cs: "ConstraintSystem", terms: dict[int, int], value):
        self.cs = cs
        self.terms = terms
        self.value = value

    def is_constant(self) -> bool:
        return all(i == 0 for i in self.terms)

    def constant_value(self) -> int:
        return self.terms.get(0, 0) % P

    def single_var(self) -> int | None:
        if len(self.terms) == 1:
            (i, c), = self.terms.items()
            if c == 1 and i != 0:
                return i
        return None

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def _lift(self, other) -> "LC":
        if isinstance(other, LC):
            return other
        return self.cs.const(int(other))

    def __add__(self, other) -> "LC":
        if not isinstance(other, LC):
            k = _norm_coeff(int(other))
            if k == 0:
                return self
            t = dict(self.terms)
            v = t.get(0, 0) + k
            if v % P:
                t[0] = _norm_coeff(v)
            else:
                t.pop(0, None)
            return LC(self.cs, t, None if self.value is None else self.value + k)
        t = dict(self.terms)
        for i, c in other.terms.items():
            v = t.get(i, 0) + c
            if v % P:
                t[i] = _norm_coeff(v) if not (-HALF < v <= HALF) else v
            else:
                t.pop(i, None)
        val = None if self.value is None or other.value is None else self.value + other.value
        return LC(self.cs, t, val)

    __radd__ = __add__

    def __neg__(self) -> "LC":
        return self * -1

    def __sub__(self, other) -> "LC":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LC":
        return self._lift(other) + (-self)

    def __mul__(self, k) -> "LC":
        if isinstance(k, LC):
            raise TypeError("use cs.mul for products of linear combinations")
        k = _norm_coeff(int(k))
        if k == 0:
            return self.cs.const(0)
        if k == 1:
            return self
        t = {i: _norm_coeff(c * k) for i, c in self.terms.items()}
        return LC(self.cs, t, None if self.value is None else self.value * k)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"LC({self.terms})"


# --- hint registry ---------------------------------------------------------------

@dataclass(frozen=True)
class HintSpec:
    name: str
    fn: Callable[..., list]
    doc: str = ""


HINTS: dict[str, HintSpec] = {}


def register_hint(name: str):
    """Register a batched hint. The function receives canonical object
    arrays plus keyword build-time parameters and returns a list of arrays;
    the number of outputs must not depend on values."""

    def deco(fn):
        HINTS[name] = HintSpec(name, fn, (fn.__doc__ or "").strip())
        return fn

    return deco


# --- lookup tables ---------------------------------------------------------------

class LookupTable:
    """A fixed table of w-column entries with a vectorized membership index."""

    def __init__(self, name: str, width: int, entries: Sequence[tuple[int, ...]]):
        self.name = name
        self.width = width
        self.entries = [tuple(int(x) % P for x in e) for e in entries]
        if any(len(e) != width for e in self.entries):
            raise BuildError(f"table {name}: entry width mismatch")
        self._index = {e: j for j, e in enumerate(self.entries)}

    def __len__(self) -> int:
        return len(self.entries)

    def index_of(self, cols: list[np.ndarray]) -> np.ndarray:
        """Entry index for each batch element, or -1 when absent."""
        keys = zip(*cols)
        return np.fromiter((self._index.get(k, -1) for k in keys), dtype=np.int64, count=len(cols[0]))

    def digest(self) -> bytes:
        h = hashlib.sha256(f"table:{self.name}:{self.width}:{len(self)}".encode())
        for e in self.entries:
            for x in e:
                h.update(x.to_bytes(32, "little"))
        return h.digest()


class RangeTable(LookupTable):
    """T_RC = {0, ..., 2^T - 1}."""

    def __init__(self, chunk_bits: int):
        self.T = chunk_bits
        super().__init__(f"T_RC[{chunk_bits}]", 1, [(i,) for i in range(1 << chunk_bits)])

    def index_of(self, cols):
        c = cols[0]
        ok = c < (1 << self.T)
        return np.where(ok, np.where(ok, c, 0).astype(np.int64), -1)


class Pow2Table(LookupTable):
    """T_Pow2 = {(i, 2^i) : 0 <= i <= K_max}."""

    def __init__(self, k_max: int):
        self.k_max = k_max
        super().__init__(f"T_Pow2[{k_max}]", 2, [(i, 1 << i) for i in range(k_max + 1)])

    def index_of(self, cols):
        d, r = cols
        ok = d <= self.k_max
        d_safe = np.where(ok, d, 0).astype(np.int64)
        expect = np.left_shift(np.ones(len(d), dtype=object), d_safe.astype(object))
        ok &= (r == expect)
        return np.where(ok, d_safe, -1)


# --- constraint system ---------------------------------------------------------

@dataclass
class SatisfactionReport:
    satisfied: bool
    satisfied_each: np.ndarray
    first_failure: np.ndarray
    native_constraints: int
    lookup_constraints: int
    num_variables: int
    lookup_queries: dict[str, int]
    table_sizes: dict[str, int]
    unconstrained: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def total_constraints(self) -> int:
        return self.native_constraints + self.lookup_constraints

    def first_failing(self, idx: int = 0) -> int | None:
        f = int(self.first_failure[idx]) if len(self.first_failure) else -1
        return None if f < 0 else f


class ConstraintSystem:
    """Growable R1CS with witness generation, hints and LogUp lookups.

    mode: WITNESS or COUNT. batch: number of independent instances.
    keep: store constraint structure (False gives a pure counter, useful
    for large count-only benchmarks). tamper: {(hint ordinal, output
    index): delta} added to hint outputs, for soundness probes.
    """

    def __init__(self, mode: str = WITNESS, batch: int = 1, chunk_bits: int = 8,
                 k_max: int = 64, keep: bool = True,
                 tamper: dict[tuple[int, int], object] | None = None):
        if mode not in (WITNESS, COUNT):
            raise BuildError(f"unknown mode {mode!r}")
        if mode == WITNESS and not keep:
            raise BuildError("witness generation needs the constraint structure (keep=True)")
        self.mode = mode
        self.batch = batch if mode == WITNESS else 0
        self.chunk_bits = chunk_bits
        self.k_max = k_max
        self.keep = keep
        self.tamper = tamper or {}
        self.witness: list[np.ndarray | None] = [obj_array(1, self.batch) if mode == WITNESS else None]
        self.kinds: list[str] = ["one"]
        self.constraints: list[tuple[dict, dict, dict]] = []
        self.n_native = 0
        self.n_lookup = 0
        self.tables: dict[str, LookupTable] = {}
        self.queries: dict[str, list[list[LC]]] = {}
        self.query_counts: Counter = Counter()
        self.hint_calls: list[tuple[str, list[int]]] = []
        self.gadgets: Counter = Counter()
        self.booleans: set[tuple] = set()
        self.finalized: SatisfactionReport | None = None
        self._rc_table = RangeTable(chunk_bits)
        self._pow2_table = Pow2Table(k_max)

    # -- allocation --------------------------------------------------------
    @property
    def witness_mode(self) -> bool:
        return self.mode == WITNESS

    @property
    def num_variables(self) -> int:
        return len(self.kinds)

    def const(self, k: int) -> LC:
        k = _norm_coeff(int(k))
        return LC(self, {0: k} if k else {}, k if self.witness_mode else None)

    def one(self) -> LC:
        return self.const(1)

    def _alloc(self, kind: str, value) -> LC:
        idx = len(self.kinds)
        self.kinds.append(kind)
        if self.witness_mode:
            arr = obj_array(value, self.batch) if not isinstance(value, np.ndarray) else value % P
            self.witness.append(arr)
            return LC(self, {idx: 1}, arr)
        self.witness.append(None)
        return LC(self, {idx: 1}, None)

    def public(self, value=0) -> LC:
        return self._alloc("public", value)

    def private(self, value=0) -> LC:
        return self._alloc("private", value)

    def values(self, lc: LC) -> np.ndarray | None:
        """Canonical batched value of an LC (None in count mode)."""
        if not self.witness_mode:
            return None
        return obj_array(lc.value % P if isinstance(lc.value, np.ndarray) else lc.value, self.batch)

    # -- constraints -----------------------------------------------------
    def _check_alloc(self, *lcs: LC) -> None:
        n = len(self.kinds)
        for lc in lcs:
            if lc.cs is not self:
                raise BuildError("linear combination belongs to another system")
            for i in lc.terms:
                if i >= n or i < 0:
                    raise BuildError(f"unallocated variable {i}")

    def assert_r1cs(self, a: LC, b: LC, c: LC, _lookup: bool = False) -> None:
        a, b, c = (x if isinstance(x, LC) else self.const(x) for x in (a, b, c))
        self._check_alloc(a, b, c)
        if self.keep:
            self.constraints.append((a.terms, b.terms, c.terms))
        if _lookup:
            self.n_lookup += 1
        else:
            self.n_native += 1

    def assert_equal(self, a: LC, b) -> None:
        self.assert_r1cs(a - b, self.one(), self.const(0))

    def mul(self, a: LC, b: LC) -> LC:
        a = a if isinstance(a, LC) else self.const(a)
        b = b if isinstance(b, LC) else self.const(b)
        if a.is_constant():
            return b * a.constant_value()
        if b.is_constant():
            return a * b.constant_value()
        val = (a.value * b.value) % P if self.witness_mode else None
        z = self._alloc("private", val)
        self.assert_r1cs(a, b, z)
        return z

    def mark_boolean(self, x: LC) -> LC:
        self.booleans.add(x.key())
        return x

    def is_boolean(self, x: LC) -> bool:
        if x.is_constant():
            return x.constant_value() in (0, 1)
        return x.key() in self.booleans

    def assert_bool(self, x: LC) -> LC:
        if not self.is_boolean(x):
            self.assert_r1cs(x, x, x)
            self.mark_boolean(x)
        return x

    # -- hints -----------------------------------------------------------
    def hint(self, name: str, inputs: Sequence[LC], n_out: int, **params) -> list[LC]:
        if name not in HINTS:
            raise BuildError(f"hint {name!r} is not registered")
        ordinal = len(self.hint_calls)
        if self.witness_mode:
            args = [self.values(x) for x in inputs]
            try:
                outs = HINTS[name].fn(*args, **params)
            except Exception as exc:
                raise WitnessError(f"hint {name} failed: {exc}") from exc
            if len(outs) != n_out:
                raise BuildError(f"hint {name} returned {len(outs)} outputs, expected {n_out}")
            outs = [obj_array(o, self.batch) for o in outs]
            for k in range(n_out):
                delta = self.tamper.get((ordinal, k))
                if delta is not None:
                    outs[k] = (outs[k] + delta) % P
        else:
            outs = [None] * n_out
        lcs = [self._alloc("private", o) for o in outs]
        self.hint_calls.append((name, [lc.single_var() for lc in lcs]))
        return lcs

    # -- lookups -----------------------------------------------------------
    def range_table(self) -> RangeTable:
        return self._register(self._rc_table)

    def pow2_table(self) -> Pow2Table:
        return self._register(self._pow2_table)

    def _register(self, table: LookupTable) -> LookupTable:
        if table.name not in self.tables:
            self.tables[table.name] = table
            self.queries[table.name] = []
        return table

    def add_table(self, table: LookupTable) -> LookupTable:
        if table.name in self.tables:
            raise BuildError(f"table {table.name} already registered")
        return self._register(table)

    def lookup(self, table: LookupTable | str, cols: Sequence[LC]) -> None:
        name = table if isinstance(table, str) else table.name
        if name not in self.tables:
            raise BuildError(f"table {name} not registered")
        if len(cols) != self.tables[name].width:
            raise BuildError(f"table {name}: width {self.tables[name].width}, query has {len(cols)}")
        cols = [c if isinstance(c, LC) else self.const(c) for c in cols]
        self._check_alloc(*cols)
        self.query_counts[name] += 1
        if self.keep:
            self.queries[name].append(cols)

    # -- evaluation ------------------------------------------------------------
    def _eval(self, terms: dict[int, int]):
        W = self.witness
        acc = 0
        for i, c in terms.items():
            acc = acc + (W[i] if c == 1 else W[i] * c)
        return acc

    # -- finalize ---------------------------------------------------------------
    def finalize(self) -> SatisfactionReport:
        if self.finalized is not None:
            return self.finalized
        for name in list(self.tables):
            self._emit_logup(name)
        if self.witness_mode and self.keep:
            first = np.full(self.batch, -1, dtype=np.int64)
            for idx, (a, b, c) in enumerate(self.constraints):
                r = (self._eval(a) * self._eval(b) - self._eval(c)) % P
                if isinstance(r, np.ndarray):
                    bad = r != 0
                else:
                    bad = np.full(self.batch, r != 0)
                if bad.any():
                    first = np.where((first < 0) & bad, idx, first)
            ok = first < 0
        else:
            first = np.full(max(self.batch, 1), -1, dtype=np.int64)
            ok = np.ones(max(self.batch, 1), dtype=bool)
        self.finalized = SatisfactionReport(
            satisfied=bool(ok.all()),
            satisfied_each=ok,
            first_failure=first,
            native_constraints=self.n_native,
            lookup_constraints=self.n_lookup,
            num_variables=self.num_variables,
            lookup_queries=dict(self.query_counts),
            table_sizes={n: len(t) for n, t in self.tables.items()},
            unconstrained=self._unconstrained() if self.keep else [],
        )
        return self.finalized

    def _unconstrained(self) -> list[tuple[str, int, int]]:
        used: set[int] = set()
        for a, b, c in self.constraints:
            used.update(a)
            used.update(b)
            used.update(c)
        out = []
        for ordinal, (name, idxs) in enumerate(self.hint_calls):
            for k, i in enumerate(idxs):
                if i not in used:
                    out.append((name, ordinal, k))
        return out

    def _challenges(self, table: LookupTable, cols: list[list[np.ndarray]],
                    counts: np.ndarray, attempt: np.ndarray) -> tuple[list[int], list[int]]:
        """Per-instance (c, rho) from a SHA-256 transcript over the table,
        the multiplicities and every query value."""
        B = self.batch
        prefix = table.digest()
        flat = [col for q in cols for col in q]
        if flat:
            mat = np.array(flat, dtype=object).reshape(len(flat), B)
            if (mat < (1 << 64)).all():
                rows = mat.astype(np.uint64).T.copy()
                per = [rows[b].tobytes() for b in range(B)]
            else:
                per = [b"".join(int(v).to_bytes(32, "little") for v in mat[:, b]) for b in range(B)]
        else:
            per = [b""] * B
        cs, rhos = [], []
        for b in range(B):
            h = hashlib.sha256()
            h.update(prefix)
            h.update(int(attempt[b]).to_bytes(4, "little"))
            h.update(len(flat).to_bytes(8, "little"))
            h.update(per[b])
            h.update(counts[b].tobytes())
            seed = h.digest()
            cs.append(int.from_bytes(hashlib.sha256(b"c" + seed).digest(), "little") % P)
            rhos.append(int.from_bytes(hashlib.sha256(b"rho" + seed).digest(), "little") % P)
        return cs, rhos

    def _emit_logup(self, name: str) -> None:
        table = self.tables[name]
        n_q = self.query_counts[name]
        w = table.width
        n_t = len(table)
        if not self.keep:
            # structure only: per query 1 (+1 compression), per entry 1, plus equality
            extra = n_q * (2 if w > 1 else 1) + n_t + 1
            self.n_lookup += extra
            self.hint_calls.append(("logup_inv", []))
            self.hint_calls.append(("logup_mult", []))
            return
        queries = self.queries[name]
        B = self.batch
        wm = self.witness_mode
        entries = table.entries

        if wm:
            cols = [[self._eval(c.terms) % P for c in q] for q in queries]
            cols = [[obj_array(v, B) if not isinstance(v, np.ndarray) else v for v in q] for q in cols]
            counts = np.zeros((B, n_t), dtype=np.int64)
            idxs = []
            for q in cols:
                idx = table.index_of(q)
                ok = idx >= 0
                np.add.at(counts, (np.nonzero(ok)[0], idx[ok]), 1)
                idxs.append(idx)
            attempt = np.zeros(B, dtype=np.int64)
            while True:
                c_vals, rho_vals = self._challenges(table, cols, counts, attempt)
                c_arr = obj_array(c_vals, B)
                rho_arr = obj_array(rho_vals, B)
                comp_t = [self._compress([obj_array(x, B) for x in e], rho_arr) for e in entries]
                den_t = [(c_arr - t) % P for t in comp_t]
                zero = np.zeros(B, dtype=bool)
                for d in den_t:
                    zero |= (d == 0)
                # queries that miss the table need their own denominators
                den_miss = {}
                for k, (q, idx) in enumerate(zip(cols, idxs)):
                    miss = idx < 0
                    if miss.any():
                        d = (c_arr - self._compress(q, rho_arr)) % P
                        zero |= miss & (d == 0)
                        den_miss[k] = (miss, d)
                if not zero.any():
                    break
                attempt = attempt + zero.astype(np.int64)
            # a valid query's inverse is the inverse of its table entry
            inv_tab = np.array(_batch_inverse(den_t, B), dtype=object).reshape(n_t, B)
            lanes = np.arange(B)
            inv_q = []
            for k, idx in enumerate(idxs):
                iq = inv_tab[np.maximum(idx, 0), lanes]
                if k in den_miss:
                    miss, d = den_miss[k]
                    iq = np.where(miss, inv_or_zero(d), iq)
                inv_q.append(iq)
            mult = [obj_array(counts[:, j].tolist(), B) for j in range(n_t)]
            inv_t = [(x * m) % P for x, m in zip(inv_tab, mult)]
        else:
            c_arr = rho_arr = None
            inv_q = [None] * n_q
            inv_t = [None] * n_t
            mult = [None] * n_t

        c = self._alloc("public", c_arr)
        rho = self._alloc("public", rho_arr) if w > 1 else None
        inv_q = self._logup_hint("logup_inv", inv_q)
        mult = self._logup_hint("logup_mult", mult)
        inv_t = self._logup_hint("logup_inv", inv_t)
        one = self.one()
        total = self.const(0)
        for q, iq in zip(queries, inv_q):
            f = q[0]
            if w > 1:
                # tuple compression: f = q0 + rho*q1 + rho^2*q2 ...
                pw = rho
                for k in range(1, w):
                    g = self._lookup_mul(pw, q[k])
                    f = f + g
                    if k + 1 < w:
                        pw = self._lookup_mul(pw, rho)
            self.assert_r1cs(iq, c - f, one, _lookup=True)
            total = total + iq
        for e, it, m in zip(entries, inv_t, mult):
            t = self.const(e[0])
            if w > 1:
                pw = rho
                for k in range(1, w):
                    t = t + pw * e[k]
                    if k + 1 < w:
                        pw = self._lookup_mul(pw, rho)
            self.assert_r1cs(it, c - t, m, _lookup=True)
            total = total - it
        self.assert_r1cs(total, one, self.const(0), _lookup=True)

    def _lookup_mul(self, a: LC, b: LC) -> LC:
        if a.is_constant() or b.is_constant():
            return self.mul(a, b)
        val = (a.value * b.value) % P if self.witness_mode else None
        z = self._alloc("private", val)
        self.assert_r1cs(a, b, z, _lookup=True)
        return z

    def _logup_hint(self, name: str, values: list) -> list[LC]:
        ordinal = len(self.hint_calls)
        out = []
        for k, v in enumerate(values):
            if v is not None:
                delta = self.tamper.get((ordinal, k))
                if delta is not None:
                    v = (v + delta) % P
            out.append(self._alloc("private", v))
        self.hint_calls.append((name, [lc.single_var() for lc in out]))
        return out

    @staticmethod
    def _compress(cols: list[np.ndarray], rho: np.ndarray) -> np.ndarray:
        acc = cols[-1]
        for col in reversed(cols[:-1]):
            acc = (acc * rho + col) % P
        return acc % P

    # -- export ---------------------------------------------------------------------
    def stats_record(self, circuit_name: str) -> str:
        rep = self.finalize()
        lines = [
            "# zklp-stats v1",
            f"circuit_name: {circuit_name}",
            f"native_constraints: {rep.native_constraints}",
            f"lookup_constraints: {rep.lookup_constraints}",
        ]
        for name, t in self.tables.items():
            per = 2 if t.width > 1 else 1
            lines.append(f"per_query_constraints[{name}]: {per}")
            lines.append(f"queries[{name}]: {self.query_counts[name]}")
            lines.append(f"table_size[{name}]: {len(t)}")
        return "\n".join(lines) + "\n"

    def witness_dump(self, instance: int = 0) -> str:
        if not self.witness_mode:
            raise BuildError("count-only systems have no witness")
        lines = ["# zklp-witness v1"]
        for i, arr in enumerate(self.witness):
            lines.append(f"{i} {int(arr[instance]) % P}")
        return "\n".join(lines) + "\n"


def _batch_inverse(dens: list[np.ndarray], batch: int) -> list[np.ndarray]:
    """Montgomery batch inversion along the list, vectorized over instances."""
    if not dens:
        return []
    prefix = [dens[0]]
    for d in dens[1:]:
        prefix.append((prefix[-1] * d) % P)
    acc = inv_or_zero(prefix[-1])
    out: list[np.ndarray] = [None] * len(dens)
    for i in range(len(dens) - 1, 0, -1):
        out[i] = (acc * prefix[i - 1]) % P
        acc = (acc * dens[i]) % P
    out[0] = acc
    return out


def batch_inputs(values: Iterable[int], batch: int) -> np.ndarray:
    return obj_array(list(values), batch)
