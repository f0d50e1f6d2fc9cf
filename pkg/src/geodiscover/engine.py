"""Discovery: enumerate candidate statements, filter numerically, prove, collect.

Phases run in a fixed order (identities, collinearities, concyclicities,
parallelisms, congruences).  Each proved fact is stored in a Pool, which
both shrinks later phases and groups the output into classes.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .construction import Construction, Foot, Intersect, IntersectLineCircle, Midpoint
from .numeric import NumericConfig, instances, passes
from .poly import Deadline
from .pool import ClassFinding, Findings, Pool
from .predicates import PHASES, Predicate
from .prover import HypothesisSystem, Verdict, VerdictKind, decide, translate


class AbortedUndecidableIdentity(RuntimeError):
    """An identity conjecture could not be decided in time."""

    def __init__(self, report: "DiscoveryReport"):
        super().__init__(report.abort_reason)
        self.report = report


@dataclass(frozen=True)
class Options:
    per_check_timeout_ms: float = 5000.0
    numeric: NumericConfig = NumericConfig()
    show_trivial: bool = False
    normalize: bool = False
    parallel_workers: int = 1

    def __post_init__(self):
        if not self.per_check_timeout_ms > 0:
            raise ValueError("per_check_timeout_ms must be positive")
        if self.parallel_workers < 1:
            raise ValueError("parallel_workers must be at least 1")

    @classmethod
    def from_construction(cls, c: Construction, **overrides) -> "Options":
        """Options declared in the program, then explicit overrides."""
        o = c.option_dict()
        num = {}
        if "seed" in o:
            num["seed"] = o["seed"]
        if "instances" in o:
            num["instance_count"] = o["instances"]
        if "epsilon" in o:
            num["epsilon_rel"] = o["epsilon"]
        kw = {"numeric": NumericConfig(**num)}
        if "timeout_ms" in o:
            kw["per_check_timeout_ms"] = float(o["timeout_ms"])
        if "show_trivial" in o:
            kw["show_trivial"] = o["show_trivial"]
        if "normalize" in o:
            kw["normalize"] = o["normalize"]
        if "workers" in o:
            kw["parallel_workers"] = o["workers"]
        base = cls(**kw)
        num_over = {k: overrides.pop(k) for k in ("seed", "instance_count", "epsilon_rel") if k in overrides}
        if num_over:
            overrides["numeric"] = replace(base.numeric, **num_over)
        return replace(base, **overrides)


@dataclass(frozen=True)
class CheckRecord:
    """One numerically positive candidate and what happened to it."""

    phase: str
    statement: Predicate
    outcome: str  # Theorem, Trivial, GenericallyFalse, Timeout, Skipped
    elapsed: float = 0.0
    stage: int = 0


@dataclass
class DiscoveryReport:
    target: str
    findings: Findings
    pool_summary: dict
    timings: dict  # phase -> seconds
    checks: list = field(default_factory=list)
    numeric_rejected: dict = field(default_factory=dict)
    aborted: bool = False
    abort_reason: str = ""
    normalized: bool = False

    @property
    def theorems(self) -> list:
        return [f for f in self.findings.all() if not f.trivial]

    @property
    def trivial(self) -> list:
        return [f for f in self.findings.all() if f.trivial]

    def max_check_seconds(self) -> float:
        return max((r.elapsed for r in self.checks), default=0.0)


# -- triviality ----------------------------------------------------------------


def _line_points(ref) -> tuple:
    return ref.through_points() if ref.kind == "line" else ()


def step_facts(c: Construction) -> list:
    """(kind, names) facts that a single step implies by its definition."""
    facts = []
    seen = {}
    for step in c.steps:
        d, x = step.definition, step.name
        if isinstance(d, Midpoint):
            facts.append(("collinear", (d.a, d.b, x)))
        elif isinstance(d, Foot):
            facts.append(("collinear", (d.a, d.b, x)))
        elif isinstance(d, Intersect):
            for ref in (d.first, d.second):
                if len(_line_points(ref)) == 2:
                    facts.append(("collinear", (*ref.points, x)))
            common = set(d.first.through_points()) & set(d.second.through_points())
            facts.extend(("identical", (p, x)) for p in sorted(common))
        elif isinstance(d, IntersectLineCircle):
            if len(_line_points(d.line)) == 2:
                facts.append(("collinear", (*d.line.points, x)))
        key = _definition_key(d)
        if key is not None:
            if key in seen:
                facts.append(("identical", (seen[key], x)))
            else:
                seen[key] = x
    return facts


def _definition_key(d):
    """Order-insensitive key of definitions that can be restated verbatim."""
    if isinstance(d, Midpoint):
        return ("midpoint", frozenset((d.a, d.b)))
    if isinstance(d, Foot):
        return ("foot", d.p, frozenset((d.a, d.b)))
    if isinstance(d, Intersect):
        return ("intersect", frozenset((d.first, d.second)))
    return None


def is_trivial(p: Predicate, c: Construction, pool: Pool | None = None) -> bool:
    """Whether one construction step implies the statement by definition.

    Points are compared by class when a pool is given, so a step about a
    point also covers every point already proved identical to it.
    """
    if p.kind not in ("identical", "collinear"):
        return False
    rep = pool.rep if pool is not None else (lambda n: n)
    want = frozenset(rep(n) for n in p.points)
    if len(want) != len(p.points):
        return False
    for kind, names in step_facts(c):
        if kind == p.kind and frozenset(rep(n) for n in names) == want:
            return True
    return False


# -- proving ------------------------------------------------------------------

_worker_system: HypothesisSystem | None = None


def _init_worker(sys):
    global _worker_system
    _worker_system = sys


def _decide_in_worker(p: Predicate, budget_ms: float) -> Verdict:
    return decide(p, _worker_system, Deadline(budget_ms))


class _Run:
    def __init__(self, c: Construction, target: str, opts: Options):
        self.c, self.target, self.opts = c, target, opts
        self.pool = Pool(c)
        self.insts = [i.coordinates for i in instances(c, opts.numeric)]
        self.sys = translate(c, normalize=opts.normalize)
        self.checks: list = []
        self.rejected: dict = {}
        self.timings: dict = {}
        self.abort_reason = ""
        self.executor = None

    def numeric_ok(self, p: Predicate) -> bool:
        eps = self.opts.numeric.epsilon_rel
        return all(passes(p, coords, eps) for coords in self.insts)

    def conjectures(self, phase):
        for p in self.pool.candidate_statements([phase]):
            if self.numeric_ok(p):
                yield p
            else:
                self.rejected[phase] = self.rejected.get(phase, 0) + 1

    def settle(self, phase: str, p: Predicate, verdict: Verdict | None) -> bool:
        """Record a verdict; returns False when discovery must abort."""
        if verdict is None:
            self.pool.apply(p, trivial=True)
            self.checks.append(CheckRecord(phase, p, "Trivial"))
            return True
        if verdict.is_true:
            self.pool.apply(p, trivial=False)
            outcome = "Theorem"
        else:
            outcome = verdict.kind.value
        self.checks.append(CheckRecord(phase, p, outcome, verdict.elapsed, verdict.stage))
        if phase == "identical" and verdict.kind is VerdictKind.TIMEOUT:
            a, b = p.points
            self.abort_reason = f"identity of {a} and {b} could not be decided within the time limit"
            return False
        return True

    def run_phase(self, phase: str) -> bool:
        if self.opts.parallel_workers == 1:
            for p in self.conjectures(phase):
                verdict = None
                if not is_trivial(p, self.c, self.pool):
                    verdict = decide(p, self.sys, Deadline(self.opts.per_check_timeout_ms))
                if not self.settle(phase, p, verdict):
                    return False
            return True
        return self.run_phase_parallel(phase)

    def run_phase_parallel(self, phase: str) -> bool:
        """Prove a batch of conjectures concurrently; apply results in candidate order."""
        batch_size = 4 * self.opts.parallel_workers
        stream = self.conjectures(phase)
        while True:
            batch = []
            for p in stream:
                batch.append(p)
                if len(batch) == batch_size:
                    break
            if not batch:
                return True
            futures = {}
            for p in batch:
                if not is_trivial(p, self.c, self.pool):
                    futures[p] = self.executor.submit(_decide_in_worker, p, self.opts.per_check_timeout_ms)
            for p in batch:
                if self.pool.entails(p):
                    if p in futures:
                        futures[p].cancel()
                    self.checks.append(CheckRecord(phase, p, "Skipped"))
                    continue
                verdict = None
                if p in futures:
                    verdict = futures[p].result()
                elif not is_trivial(p, self.c, self.pool):
                    verdict = decide(p, self.sys, Deadline(self.opts.per_check_timeout_ms))
                if not self.settle(phase, p, verdict):
                    for f in futures.values():
                        f.cancel()
                    return False

    def run(self) -> "DiscoveryReport":
        if self.opts.parallel_workers > 1:
            self.executor = ProcessPoolExecutor(
                self.opts.parallel_workers, initializer=_init_worker, initargs=(self.sys,)
            )
        try:
            for phase in PHASES:
                start = time.monotonic()
                ok = self.run_phase(phase)
                self.timings[phase] = time.monotonic() - start
                if not ok:
                    return self.report(aborted=True)
        finally:
            if self.executor is not None:
                self.executor.shutdown(cancel_futures=True)
        return self.report(aborted=False)

    def report(self, aborted: bool) -> "DiscoveryReport":
        findings = Findings([], [], [], [], []) if aborted else self.pool.findings_for(self.target)
        return DiscoveryReport(
            target=self.target,
            findings=findings,
            pool_summary=self.pool.summary(),
            timings=dict(self.timings),
            checks=self.checks,
            numeric_rejected=dict(self.rejected),
            aborted=aborted,
            abort_reason=self.abort_reason,
            normalized=self.opts.normalize,
        )


def discover(c: Construction, target: str, opts: Options = Options(), raise_on_abort: bool = False):
    """Run discovery on the whole construction and report the classes around ``target``.

    Raises DegenerateInstance when no usable numeric instance exists.  An
    identity that times out stops discovery: the report comes back with
    ``aborted`` set (or AbortedUndecidableIdentity is raised on request).
    """
    if target not in c.point_names():
        raise KeyError(f"unknown target {target}")
    report = _Run(c, target, opts).run()
    if report.aborted and raise_on_abort:
        raise AbortedUndecidableIdentity(report)
    return report


__all__ = [
    "AbortedUndecidableIdentity",
    "CheckRecord",
    "ClassFinding",
    "DiscoveryReport",
    "Options",
    "discover",
    "is_trivial",
    "step_facts",
]
