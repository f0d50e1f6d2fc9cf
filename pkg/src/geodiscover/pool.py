"""Equivalence classes of points, lines, circles, directions and lengths.

Every fact stored here has already been established (proved, or implied by
a single construction step).  Classes merge transitively:

* two points determine a line, so lines sharing two points coincide;
* three points determine a circle, so circles sharing three points coincide;
* parallelism and equal length are transitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .construction import Construction
from .predicates import Predicate


class DegenerateInput(ValueError):
    """Points passed to a pool operation are not pairwise distinct classes."""


class UnionFind:
    """Disjoint sets whose root is always the minimal element under ``rank``."""

    def __init__(self, rank=None):
        self.parent: dict = {}
        self.rank = rank if rank is not None else (lambda x: x)

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank(rb) < self.rank(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def groups(self, items=None) -> dict:
        out: dict = {}
        for x in (self.parent if items is None else items):
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class ClassFinding:
    """One reported class.

    ``members`` holds point names for identical/collinear/concyclic, lines
    (tuples of point names) for parallel, and segments (pairs) for congruent.
    """

    kind: str
    members: tuple
    trivial: bool = False


@dataclass
class Findings:
    identities: list
    collinear: list
    concyclic: list
    parallel: list
    congruent: list

    def all(self) -> list:
        return self.identities + self.collinear + self.concyclic + self.parallel + self.congruent

    def __len__(self):
        return len(self.all())


class Pool:
    def __init__(self, c: Construction):
        self.construction = c
        self.names = c.point_names()
        self.order = {n: i for i, n in enumerate(self.names)}
        self.points = UnionFind(rank=self.order.__getitem__)
        for n in self.names:
            self.points.add(n)
        self.point_theorem: set = set()  # reps of classes built by a non-trivial merge
        self.lines: dict = {}  # id -> set of reps
        self.line_theorem: dict = {}  # id -> bool
        self.circles: dict = {}
        self.circle_theorem: dict = {}
        self.directions = UnionFind()  # over line ids
        self.segments = UnionFind(rank=self._segment_key)  # over frozenset pairs of reps
        self._next_id = 0

    # -- helpers -------------------------------------------------------------

    def _segment_key(self, seg):
        return tuple(sorted(self.order[n] for n in seg))

    def _new_id(self) -> int:
        self._next_id += 1
        return self._next_id

    def rep(self, name: str) -> str:
        return self.points.find(name)

    def representatives(self) -> list:
        return [n for n in self.names if self.points.find(n) == n]

    def point_class(self, name: str) -> list:
        r = self.rep(name)
        return [n for n in self.names if self.points.find(n) == r]

    def classes(self) -> dict:
        """Point name -> members of its class."""
        groups = self.points.groups(self.names)
        return {n: groups[self.points.find(n)] for n in self.names}

    def sort_points(self, pts) -> tuple:
        return tuple(sorted(pts, key=self.order.__getitem__))

    def _distinct_reps(self, names, size):
        reps = [self.rep(n) for n in names]
        if len(set(reps)) != size:
            raise DegenerateInput(f"expected {size} distinct point classes, got {names}")
        return reps

    def segment(self, p: str, q: str) -> frozenset:
        a, b = self.rep(p), self.rep(q)
        if a == b:
            raise DegenerateInput(f"segment {p}{q} has coincident endpoints")
        return frozenset((a, b))

    # -- points --------------------------------------------------------------

    def merge_points(self, p: str, q: str, trivial: bool = False) -> None:
        a, b = self.rep(p), self.rep(q)
        if a == b:
            if not trivial:
                self.point_theorem.add(a)
            return
        root = self.points.union(a, b)
        if not trivial or a in self.point_theorem or b in self.point_theorem:
            self.point_theorem.add(root)
        self._renormalize()

    def _renormalize(self) -> None:
        """Re-point all classes to current representatives and cascade merges."""
        find = self.points.find
        for store, flags, threshold in (
            (self.lines, self.line_theorem, 2),
            (self.circles, self.circle_theorem, 3),
        ):
            for i in list(store):
                pts = {find(n) for n in store[i]}
                if len(pts) < threshold:
                    del store[i]
                    del flags[i]
                else:
                    store[i] = pts
        self._cascade(self.lines, self.line_theorem, 2, self.directions)
        self._cascade(self.circles, self.circle_theorem, 3, None)

        groups = self.segments.groups()
        self.segments = UnionFind(rank=self._segment_key)
        for members in groups.values():
            mapped = [frozenset(find(n) for n in s) for s in members]
            mapped = [s for s in mapped if len(s) == 2]
            for s in mapped:
                self.segments.add(s)
            for s in mapped[1:]:
                self.segments.union(mapped[0], s)

    @staticmethod
    def _cascade(store: dict, flags: dict, threshold: int, directions) -> None:
        changed = True
        while changed:
            changed = False
            for i, j in combinations(sorted(store), 2):
                if len(store[i] & store[j]) >= threshold:
                    store[i] |= store.pop(j)
                    flags[i] = flags[i] or flags.pop(j)
                    if directions is not None:
                        directions.union(i, j)
                    changed = True
                    break

    # -- lines -------------------------------------------------------------

    def line_of(self, pts) -> int | None:
        """Id of the line class containing all given points, if any."""
        reps = {self.rep(n) for n in pts}
        for i, members in self.lines.items():
            if reps <= members:
                return i
        return None

    def line_through(self, p: str, q: str) -> int:
        """The line class through two distinct points, created if absent."""
        a, b = self._distinct_reps((p, q), 2)
        i = self.line_of((a, b))
        if i is None:
            i = self._new_id()
            self.lines[i] = {a, b}
            self.line_theorem[i] = False
            self.directions.add(i)
        return i

    def add_collinear(self, p: str, q: str, r: str, trivial: bool = False) -> int:
        reps = set(self._distinct_reps((p, q, r), 3))
        hits = sorted(i for i, members in self.lines.items() if len(members & reps) >= 2)
        if hits:
            i = hits[0]
            self.lines[i] |= reps
        else:
            i = self._new_id()
            self.lines[i] = set(reps)
            self.line_theorem[i] = False
            self.directions.add(i)
        if not trivial:
            self.line_theorem[i] = True
        self._cascade(self.lines, self.line_theorem, 2, self.directions)
        return self.line_of(reps)

    # -- circles -----------------------------------------------------------

    def circle_of(self, pts) -> int | None:
        reps = {self.rep(n) for n in pts}
        for i, members in self.circles.items():
            if reps <= members:
                return i
        return None

    def add_concyclic(self, p: str, q: str, r: str, s: str, trivial: bool = False) -> int:
        reps = set(self._distinct_reps((p, q, r, s), 4))
        hits = sorted(i for i, members in self.circles.items() if len(members & reps) >= 3)
        if hits:
            i = hits[0]
            self.circles[i] |= reps
        else:
            i = self._new_id()
            self.circles[i] = set(reps)
            self.circle_theorem[i] = False
        if not trivial:
            self.circle_theorem[i] = True
        self._cascade(self.circles, self.circle_theorem, 3, None)
        return self.circle_of(reps)

    # -- directions and lengths ----------------------------------------------

    def add_parallel(self, l: int, m: int) -> None:
        if l not in self.lines or m not in self.lines:
            raise KeyError("unknown line class")
        self.directions.union(l, m)

    def co_directional(self, l: int, m: int) -> bool:
        return self.directions.find(l) == self.directions.find(m)

    def add_congruent(self, u: frozenset, v: frozenset) -> None:
        for s in (u, v):
            if len(s) != 2 or any(self.rep(n) != n for n in s):
                raise DegenerateInput(f"{set(s)} is not a segment of representatives")
        self.segments.add(u)
        self.segments.add(v)
        self.segments.union(u, v)

    def co_classed(self, u: frozenset, v: frozenset) -> bool:
        if u == v:
            return True
        if u not in self.segments.parent or v not in self.segments.parent:
            return False
        return self.segments.find(u) == self.segments.find(v)

    # -- fact application ----------------------------------------------------

    def apply(self, p: Predicate, trivial: bool = False) -> None:
        """Record an established predicate."""
        pts = p.points
        if p.kind == "identical":
            self.merge_points(*pts, trivial=trivial)
        elif p.kind == "collinear":
            self.add_collinear(*pts, trivial=trivial)
        elif p.kind == "concyclic":
            self.add_concyclic(*pts, trivial=trivial)
        elif p.kind == "parallel":
            self.add_parallel(self.line_through(*pts[:2]), self.line_through(*pts[2:]))
        else:
            self.add_congruent(self.segment(*pts[:2]), self.segment(*pts[2:]))

    def entails(self, p: Predicate) -> bool:
        """Whether the stored classes already imply the predicate."""
        reps = [self.rep(n) for n in p.points]
        if p.kind == "identical":
            return reps[0] == reps[1]
        if p.kind == "collinear":
            return len(set(reps)) < 3 or self.line_of(reps) is not None
        if p.kind == "concyclic":
            if len(set(reps)) < 4 or self.circle_of(reps) is not None:
                return True
            return any(self.line_of(t) is not None for t in combinations(reps, 3))
        a, b, c, d = reps
        if p.kind == "parallel":
            if a == b or c == d:
                return True
            l, m = self.line_of((a, b)), self.line_of((c, d))
            if l is None or m is None:
                return False
            return self.co_directional(l, m)
        if a == b and c == d:
            return True
        if a == b or c == d:
            return False
        return self.co_classed(frozenset((a, b)), frozenset((c, d)))

    # -- enumeration -------------------------------------------------------

    def all_lines(self) -> list:
        """Line classes plus implicit two-point lines, as (id or None, sorted points)."""
        reps = self.representatives()
        out = [(i, self.sort_points(m)) for i, m in self.lines.items()]
        for a, b in combinations(reps, 2):
            if self.line_of((a, b)) is None:
                out.append((None, (a, b)))
        out.sort(key=lambda item: [self.order[n] for n in item[1]])
        return out

    def candidate_statements(self, phases=None):
        """Candidate statements, phase by phase, skipping anything already entailed.

        The stream is lazy: facts added while iterating prune later candidates.
        """
        from .predicates import PHASES

        for phase in phases or PHASES:
            yield from getattr(self, f"_candidates_{phase}")()

    def _candidates_identical(self):
        for a, b in combinations(self.names, 2):
            if self.rep(a) == a and self.rep(b) == b and a != b:
                yield Predicate("identical", (a, b))

    def _candidates_collinear(self):
        for t in combinations(self.representatives(), 3):
            if self.line_of(t) is None:
                yield Predicate("collinear", t)

    def _candidates_concyclic(self):
        for q in combinations(self.representatives(), 4):
            if any(self.line_of(t) is not None for t in combinations(q, 3)):
                continue
            if self.circle_of(q) is None:
                yield Predicate("concyclic", q)

    def _candidates_parallel(self):
        lines = [pts for _, pts in self.all_lines()]
        for l, m in combinations(lines, 2):
            if set(l) & set(m):
                continue
            li, mi = self.line_of(l[:2]), self.line_of(m[:2])
            if li is not None and mi is not None and self.co_directional(li, mi):
                continue
            yield Predicate("parallel", l[:2] + m[:2])

    def _candidates_congruent(self):
        segs = list(combinations(self.representatives(), 2))
        for u, v in combinations(segs, 2):
            if not self.co_classed(frozenset(u), frozenset(v)):
                yield Predicate("congruent", u + v)

    # -- reporting -----------------------------------------------------------

    def direction_classes(self) -> list:
        """Live line ids grouped by direction."""
        groups = self.directions.groups([i for i in self.lines])
        return [sorted(g) for g in groups.values()]

    def segment_classes(self) -> list:
        return list(self.segments.groups().values())

    def _line_label(self, i) -> tuple:
        return self.sort_points(self.lines[i])

    def _seg_label(self, s) -> tuple:
        return self.sort_points(s)

    def findings_for(self, target: str) -> Findings:
        """Non-degenerate classes involving the target's point class."""
        t = self.rep(target)
        out = Findings([], [], [], [], [])
        members = self.point_class(t)
        if len(members) >= 2:
            out.identities.append(ClassFinding("identical", tuple(members), t not in self.point_theorem))
        for i in sorted(self.lines, key=lambda i: self._line_label(i)):
            if t in self.lines[i] and len(self.lines[i]) >= 3:
                out.collinear.append(ClassFinding("collinear", self._line_label(i), not self.line_theorem[i]))
        for i in sorted(self.circles, key=lambda i: self.sort_points(self.circles[i])):
            if t in self.circles[i] and len(self.circles[i]) >= 4:
                pts = self.sort_points(self.circles[i])
                out.concyclic.append(ClassFinding("concyclic", pts, not self.circle_theorem[i]))
        dirs = []
        for ids in self.direction_classes():
            if len(ids) < 2 or not any(t in self.lines[i] for i in ids):
                continue
            labels = [self._line_label(i) for i in ids]
            labels.sort(key=lambda pts: (t not in pts, [self.order[n] for n in pts]))
            dirs.append(ClassFinding("parallel", tuple(labels)))
        out.parallel = sorted(dirs, key=lambda f: [self.order[n] for n in f.members[0]])
        segs = []
        for group in self.segment_classes():
            if len(group) < 2 or not any(t in s for s in group):
                continue
            labels = [self._seg_label(s) for s in group]
            labels.sort(key=lambda pts: (t not in pts, [self.order[n] for n in pts]))
            segs.append(ClassFinding("congruent", tuple(labels)))
        out.congruent = sorted(segs, key=lambda f: [self.order[n] for n in f.members[0]])
        return out

    def summary(self) -> dict:
        """Every stored class, as listed in an object-pool view."""
        return {
            "points": [list(g) for g in self.points.groups(self.names).values()],
            "lines": sorted((list(self._line_label(i)) for i in self.lines), key=self._order_key),
            "circles": sorted((list(self.sort_points(m)) for m in self.circles.values()), key=self._order_key),
            "directions": sorted(
                ([list(self._line_label(i)) for i in sorted(ids, key=self._line_label)]
                 for ids in self.direction_classes()),
                key=lambda d: self._order_key(d[0]),
            ),
            "segments": sorted(
                (sorted((list(self._seg_label(s)) for s in g), key=self._order_key)
                 for g in self.segment_classes()),
                key=lambda g: self._order_key(g[0]),
            ),
        }

    def _order_key(self, pts):
        return [self.order[n] for n in pts]

    def canonical(self) -> tuple:
        """Order-independent description of the stored classes."""
        cls = self.classes()
        pc = lambda n: frozenset(cls[n])  # noqa: E731
        lines = {i: frozenset(pc(n) for n in m) for i, m in self.lines.items()}
        return (
            frozenset(pc(n) for n in self.names),
            frozenset(lines[i] for i in self.lines if len(lines[i]) >= 3),
            frozenset(frozenset(pc(n) for n in m) for m in self.circles.values()),
            frozenset(frozenset(lines[i] for i in ids) for ids in self.direction_classes() if len(ids) >= 2),
            frozenset(
                frozenset(frozenset(pc(n) for n in s) for s in g) for g in self.segment_classes() if len(g) >= 2
            ),
        )

    def check_invariants(self) -> list:
        """Violated pool invariants (empty when consistent)."""
        problems = []
        seen = [n for g in self.points.groups(self.names).values() for n in g]
        if sorted(seen) != sorted(self.names):
            problems.append("point classes do not partition the points")
        reps = set(self.representatives())
        for i, m in self.lines.items():
            if len(m) < 2 or not m <= reps:
                problems.append(f"line {i} malformed: {m}")
        for i, j in combinations(self.lines, 2):
            if len(self.lines[i] & self.lines[j]) >= 2:
                problems.append(f"lines {i} and {j} share two points")
        for i, m in self.circles.items():
            if len(m) < 3 or not m <= reps:
                problems.append(f"circle {i} malformed: {m}")
        for i, j in combinations(self.circles, 2):
            if len(self.circles[i] & self.circles[j]) >= 3:
                problems.append(f"circles {i} and {j} share three points")
        covered = [i for ids in self.direction_classes() for i in ids]
        if sorted(covered) != sorted(self.lines):
            problems.append("directions do not partition the lines")
        segs = [s for g in self.segment_classes() for s in g]
        if len(segs) != len(set(segs)):
            problems.append("segment classes overlap")
        for s in segs:
            if len(s) != 2 or not s <= reps:
                problems.append(f"segment {set(s)} malformed")
        return problems
