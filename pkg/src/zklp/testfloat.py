"""Run float test vectors through the gadget circuits in batches."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import float_gadgets as fg
from .field_cs import ConstraintSystem
from .ieee import FloatParams, same_result
from .vectors import UNARY_OPS

_BINARY = {"add": fg.add, "sub": fg.sub, "mul": fg.mul, "div": fg.div}


@dataclass
class ComplianceResult:
    op: str
    fp: str
    total: int = 0
    passed: int = 0
    unsatisfied: int = 0
    failures: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total


def run_batch(op: str, a: list[int], b: list[int] | None, fp: FloatParams) -> tuple[list[int], list[bool]]:
    """Circuit outputs and per-instance satisfaction for one batch."""
    cs = ConstraintSystem(batch=len(a), k_max=fp.k_max)
    x = fg.float_input(cs, a, fp)
    if op in UNARY_OPS:
        out = fg.sqrt(cs, x)
    else:
        y = fg.float_input(cs, b, fp)
        if op == "less":
            lt = fg.less_than(cs, x, y)
            rep = cs.finalize()
            return [int(v) for v in cs.values(lt)], list(rep.satisfied_each)
        out = _BINARY[op](cs, x, y)
    got = fg.output_bits(out)
    rep = cs.finalize()
    return got, list(rep.satisfied_each)


def run_vectors(vectors: list[tuple], fp: FloatParams, chunk: int = 4096,
                keep_failures: int = 20) -> dict[str, ComplianceResult]:
    by_op: dict[str, list[tuple]] = {}
    for v in vectors:
        by_op.setdefault(v[0], []).append(v)
    results = {}
    for op, vs in by_op.items():
        res = ComplianceResult(op, fp.name)
        for start in range(0, len(vs), chunk):
            part = vs[start:start + chunk]
            a = [v[1] for v in part]
            b = None if op in UNARY_OPS else [v[2] for v in part]
            got, sat = run_batch(op, a, b, fp)
            for v, g, s in zip(part, got, sat):
                want = v[-1]
                good = (g == want) if op == "less" else same_result(g, want, fp)
                res.total += 1
                if not s:
                    res.unsatisfied += 1
                if good and s:
                    res.passed += 1
                elif len(res.failures) < keep_failures:
                    res.failures.append((*v, g, bool(s)))
        results[op] = res
    return results
