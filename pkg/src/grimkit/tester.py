"""Randomized testing of database entries.

Each entry is instantiated with assignments drawn from a fixed pool of
closed values. Only assignments whose instantiated assumptions evaluate to
True are used. The instantiated formula is then classified as True, Unknown
or False; a single False is a counterexample and fails the entry.
"""

import hashlib
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .evaluate import DEFAULT_PRECISION, Truth, check_truth, derive_facts
from .expr import Call, Symbol, free_variables, head_name, serialize, substitute
from .parser import parse

__all__ = ["TestConfig", "EntryReport", "DatabaseReport", "DEFAULT_POOL",
           "generate_assignments", "test_entry", "test_database"]

# Leading values first; the order fixes the systematic sweep.
_POOL_TEXT = """
0, 1/2, Sqrt(2), Pi, 1, Neg(Div(1, 2)), -1, 2, -2, 3, 4, -Sqrt(2), -Pi, 2*Pi, ConstE,
ConstI, -ConstI, 1+ConstI, 1/2+ConstI, -1/2+ConstI*Sqrt(2),
5, 6, 7, 8, 9, 10,
1/4, 1/3, 3/2, -3/2, 5/2, -1/3, Sqrt(3), -Sqrt(3), Sqrt(5), Pi/2, -Pi/2, Pi/4,
Exp(-1), Log(2), -3, -4, -5, 2*ConstI, -2*ConstI, ConstI/2, 1-ConstI, -1+ConstI,
-1-ConstI, 2+ConstI, 1+2*ConstI, 2-3*ConstI, Sqrt(2)+ConstI, Pi*ConstI,
3/2-ConstI/2, ConstI*Sqrt(2), ConstE+ConstI, 1/2-ConstI, Pi/3, -1/4, 3+4*ConstI,
1/10, -7/3, Sqrt(2)/2, (1+Sqrt(5))/2, 7/2, 5/3, 7/4, Sqrt(6), 3*Sqrt(2),
1+Sqrt(2), Pi-1, ConstE/2, 3*ConstI, 2+2*ConstI, 1/3+ConstI/3, -2+ConstI/2,
-Pi*ConstI, 100, -10, 1/100,
11, 12, 13, 14, 15, 16, 20, 50, -6, -7, -8, -9,
Matrix2x2(1, 0, 0, 1), Matrix2x2(1, 1, 0, 1), Matrix2x2(0, -1, 1, 0),
Matrix2x2(2, 1, 1, 1), Matrix2x2(1, -1, 0, 1), Matrix2x2(1, 0, 1, 1)
"""


def _parse_pool(text):
    return tuple(parse(part) for part in _split_top(text))


def _split_top(text):
    depth, cur, out = 0, [], []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur).strip())
    return [p for p in out if p]


DEFAULT_POOL = _parse_pool(_POOL_TEXT)

PASSED, FAILED, UNTESTABLE = "Passed", "Failed", "Untestable"


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # not a pytest class

    max_instances: int = 100
    seed: int = 0
    precision: int = DEFAULT_PRECISION
    pool: tuple = DEFAULT_POOL
    max_candidates: int = 3000
    stop_at_first_failure: bool = False
    workers: int = 1

    def __post_init__(self):
        if not self.pool:
            raise ValueError("candidate pool is empty")
        for v in self.pool:
            if free_variables(v):
                raise ValueError(f"pool value {serialize(v)} is not closed")


@dataclass
class EntryReport:
    id: str
    attempted: int = 0
    true: int = 0
    unknown: int = 0
    false: int = 0
    counterexamples: list = field(default_factory=list)
    instances: list = field(default_factory=list)  # (assignment, Truth)

    @property
    def status(self):
        if self.false:
            return FAILED
        if not self.attempted:
            return UNTESTABLE
        return PASSED

    @property
    def warning(self):
        """Passed without a single proved instance."""
        return self.status == PASSED and self.true == 0

    def to_json(self):
        return {
            "id": self.id, "attempted": self.attempted, "true": self.true,
            "unknown": self.unknown, "false": self.false,
            "counterexamples": [format_assignment(a) for a in self.counterexamples],
            "status": self.status,
        }

    def summary_line(self):
        s = (f"{self.id}  {self.status} {self.attempted} instances "
             f"({self.true} True, {self.unknown} Unknown, {self.false} False)")
        if self.warning:
            s += "  [no instance proved]"
        return s


@dataclass
class DatabaseReport:
    reports: list

    @property
    def tested(self):
        return sum(1 for r in self.reports if r.status != UNTESTABLE)

    @property
    def passed(self):
        return sum(1 for r in self.reports if r.status == PASSED)

    @property
    def failed(self):
        return [r for r in self.reports if r.status == FAILED]

    @property
    def untestable(self):
        return sum(1 for r in self.reports if r.status == UNTESTABLE)

    @property
    def proved_fraction(self):
        """Fraction of entries with at least one instance evaluated to True."""
        if not self.reports:
            return 0.0
        return sum(1 for r in self.reports if r.true) / len(self.reports)

    def summary(self):
        return {
            "entries": len(self.reports), "tested": self.tested, "passed": self.passed,
            "failed": len(self.failed), "untestable": self.untestable,
            "with_warning": sum(1 for r in self.reports if r.warning),
            "proved_fraction": round(self.proved_fraction, 4),
        }

    def to_json(self):
        return {"entries": [r.to_json() for r in self.reports], "summary": self.summary()}


def format_assignment(a):
    return "{" + ", ".join(f"{k.name}: {serialize(v)}" for k, v in a.items()) + "}"


# -- assignment generation -----------------------------------------------------

def _conjuncts(e):
    if head_name(e) == "And":
        out = []
        for a in e.args:
            out.extend(_conjuncts(a))
        return out
    return [e]


def _unary_filters(variables, assumptions):
    """Per-variable conditions implied by the assumptions."""
    per = {v: [] for v in variables}
    for c in _conjuncts(assumptions):
        fv = free_variables(c)
        if len(fv) == 1:
            (v,) = fv
            if v in per:
                per[v].append(c)
        elif head_name(c) == "Element" and len(c.args) == 2 and c.args[1] == Symbol("SL2Z") \
                and head_name(c.args[0]) == "Matrix2x2":
            # entries of an SL2Z matrix are integers
            for x in c.args[0].args:
                if x in per:
                    per[x].append(Call(Symbol("Element"), (x, Symbol("ZZ"))))
    return per


def _index_tuples(sizes):
    """Index tuples in order of increasing index sum, then lexicographic."""
    k = len(sizes)
    if k == 0:
        yield ()
        return
    total_max = sum(s - 1 for s in sizes)
    for total in range(total_max + 1):
        yield from _with_sum(sizes, 0, total)


def _with_sum(sizes, i, total):
    if i == len(sizes) - 1:
        if total < sizes[i]:
            yield (total,)
        return
    rest_max = sum(s - 1 for s in sizes[i + 1:])
    for first in range(max(0, total - rest_max), min(sizes[i] - 1, total) + 1):
        for tail in _with_sum(sizes, i + 1, total - first):
            yield (first,) + tail


def _rng_for(seed, key):
    digest = hashlib.sha256(f"{seed}:{key}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def generate_assignments(variables, assumptions, cfg=None, key=""):
    """Assignments from the pool whose instantiated assumptions evaluate to True."""
    cfg = cfg or TestConfig()
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ValueError("variables must be distinct")
    ctx = derive_facts(Symbol("True_"), precision=cfg.precision)

    def holds(cond, mapping):
        return check_truth(substitute(cond, mapping), ctx) is Truth.TRUE

    filters = _unary_filters(variables, assumptions)
    lists = []
    for v in variables:
        conds = filters[v]
        lists.append([x for x in cfg.pool if all(holds(c, {v: x}) for c in conds)])
    if any(not lst for lst in lists):
        return
    produced = 0
    tried = 0
    seen = set()
    total = 1
    for lst in lists:
        total *= len(lst)

    def attempt(idx):
        mapping = dict(zip(variables, (lst[i] for lst, i in zip(lists, idx))))
        return mapping if holds(assumptions, mapping) else None

    systematic = _index_tuples([len(lst) for lst in lists])
    budget = cfg.max_candidates
    for idx in itertools.islice(systematic, budget // 2 if total > budget else budget):
        seen.add(idx)
        tried += 1
        m = attempt(idx)
        if m is not None:
            yield m
            produced += 1
            if produced >= cfg.max_instances:
                return
    rng = _rng_for(cfg.seed, key)
    while tried < budget and len(seen) < total:
        idx = tuple(rng.randrange(len(lst)) for lst in lists)
        if idx in seen:
            continue
        seen.add(idx)
        tried += 1
        m = attempt(idx)
        if m is not None:
            yield m
            produced += 1
            if produced >= cfg.max_instances:
                return


def test_entry(entry, cfg=None):
    cfg = cfg or TestConfig()
    report = EntryReport(entry.id)
    ctx = derive_facts(Symbol("True_"), precision=cfg.precision)
    for mapping in generate_assignments(entry.variables, entry.assumptions, cfg, entry.id):
        verdict = check_truth(substitute(entry.formula, mapping), ctx)
        report.attempted += 1
        report.instances.append((mapping, verdict))
        if verdict is Truth.TRUE:
            report.true += 1
        elif verdict is Truth.FALSE:
            report.false += 1
            report.counterexamples.append(mapping)
            if cfg.stop_at_first_failure:
                break
        else:
            report.unknown += 1
    return report


test_entry.__test__ = False


def _worker(args):
    entry, cfg = args
    return test_entry(entry, cfg)


def test_database(db, cfg=None):
    """Reports for every entry, in database order."""
    cfg = cfg or TestConfig()
    entries = list(db)
    if cfg.workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            reports = list(pool.map(_worker, [(e, cfg) for e in entries]))
    else:
        reports = [test_entry(e, cfg) for e in entries]
    return DatabaseReport(reports)


test_database.__test__ = False
