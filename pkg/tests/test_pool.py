import itertools
import random
from fractions import Fraction
from math import comb

import pytest

from conftest import load
from geodiscover.construction import Free, build, point
from geodiscover.pool import DegenerateInput, Pool
from geodiscover.predicates import Predicate, collinear, concyclic, congruent, identical, parallel


def free_points(names, coords=None):
    coords = coords or {n: (i, i * i) for i, n in enumerate(names)}
    return build([point(n, Free(Fraction(coords[n][0]), Fraction(coords[n][1]))) for n in names])


def pool_of(names):
    return Pool(free_points(list(names)))


# -- worked examples -----------------------------------------------------------


def test_parallelogram_identity():
    pool = Pool(load("parallelogram"))
    pool.merge_points("P5", "P6")
    assert pool.point_class("P6") == ["P5", "P6"]
    before = pool.canonical()
    pool.merge_points("P5", "P6")
    assert pool.canonical() == before


def test_chained_identities():
    pool = pool_of("ABCGHI")
    pool.merge_points("G", "H")
    pool.merge_points("H", "I")
    assert pool.point_class("I") == ["G", "H", "I"]
    assert pool.rep("I") == "G"


def test_collinear_triple_creates_line():
    pool = pool_of("CFGX")
    pool.add_collinear("C", "F", "G")
    assert [sorted(m) for m in pool.lines.values()] == [["C", "F", "G"]]


def test_collinear_extends_two_point_line():
    pool = pool_of("ABXY")
    line = pool.line_through("A", "B")
    pool.add_parallel(line, pool.line_through("X", "Y"))
    pool.add_collinear("A", "B", "X")
    # {A,B,X} absorbs AB and keeps its direction; XY shares only X with it
    assert sorted(sorted(m) for m in pool.lines.values()) == [["A", "B", "X"], ["X", "Y"]]
    assert pool.co_directional(*pool.lines)
    assert pool.check_invariants() == []


def test_disjoint_triples_give_two_lines():
    pool = pool_of("ABCDEF")
    pool.add_collinear("A", "B", "C")
    pool.add_collinear("D", "E", "F")
    assert len(pool.lines) == 2


def test_collinear_rejects_repeated_classes():
    pool = pool_of("ABC")
    pool.merge_points("A", "B")
    with pytest.raises(DegenerateInput):
        pool.add_collinear("A", "B", "C")
    with pytest.raises(DegenerateInput):
        pool.add_concyclic("A", "B", "C", "C")


def test_two_lines_merge_through_a_bridging_triple():
    pool = pool_of("ABCDE")
    pool.add_collinear("A", "B", "C")
    pool.add_collinear("C", "D", "E")
    pool.add_collinear("A", "B", "D")
    assert [sorted(m) for m in pool.lines.values()] == [list("ABCDE")]


def test_nine_point_circle_collapses():
    names = list("DEFGHIJKL")
    pool = pool_of(names)
    for q in [("D", "E", "F", n) for n in names[3:]]:
        pool.add_concyclic(*q)
    assert [sorted(m) for m in pool.circles.values()] == [names]


def test_quad_over_existing_circle_is_absorbed():
    pool = pool_of("ABCDE")
    pool.add_concyclic("A", "B", "C", "D")
    pool.add_concyclic("B", "C", "D", "E")
    assert [sorted(m) for m in pool.circles.values()] == [list("ABCDE")]


def test_quads_sharing_two_points_stay_apart():
    pool = pool_of("ABCDEF")
    pool.add_concyclic("A", "B", "C", "D")
    pool.add_concyclic("A", "B", "E", "F")
    assert len(pool.circles) == 2


def test_midline_direction_and_congruence():
    c = load("midline")
    pool = Pool(c)
    pool.add_collinear("B", "C", "D", trivial=True)
    pool.add_parallel(pool.line_through("D", "E"), pool.line_through("A", "B"))
    pool.add_congruent(pool.segment("B", "D"), pool.segment("C", "D"))
    f = pool.findings_for("D")
    assert [m.members for m in f.parallel] == [(("D", "E"), ("A", "B"))]
    assert [m.members for m in f.congruent] == [(("B", "D"), ("C", "D"))]
    assert f.concyclic == [] and f.identities == []
    assert [(m.members, m.trivial) for m in f.collinear] == [(("B", "C", "D"), True)]


def test_parallel_with_itself_is_noop():
    pool = pool_of("AB")
    line = pool.line_through("A", "B")
    before = pool.canonical()
    pool.add_parallel(line, line)
    assert pool.canonical() == before


def test_congruence_chain():
    pool = pool_of("ABCDEF")
    u, v, w = pool.segment("A", "B"), pool.segment("C", "D"), pool.segment("E", "F")
    pool.add_congruent(u, v)
    pool.add_congruent(v, w)
    (group,) = [g for g in pool.segment_classes() if len(g) > 1]
    assert set(group) == {u, v, w}


def test_candidate_counts_three_points():
    pool = pool_of("ABC")
    kinds = [p.kind for p in pool.candidate_statements()]
    assert kinds.count("identical") == comb(3, 2)
    assert kinds.count("collinear") == comb(3, 3)
    assert kinds.count("concyclic") == 0
    assert kinds.count("parallel") == 0  # every pair of the three lines shares a point


def test_candidates_skip_stored_lines():
    pool = pool_of("ABXY")
    pool.add_collinear("A", "B", "X")
    triples = [p.points for p in pool.candidate_statements(["collinear"])]
    assert ("A", "B", "X") not in triples and len(triples) == 3


def test_merged_points_shrink_quadruple_enumeration():
    c = load("hexagon")
    pool = Pool(c)
    assert len(list(pool.candidate_statements(["concyclic"]))) == comb(9, 4)
    pool.merge_points("G", "H")
    pool.merge_points("G", "I")
    assert len(list(pool.candidate_statements(["concyclic"]))) == comb(7, 4)


def test_findings_for_isolated_point_are_empty():
    pool = pool_of("ABCDE")
    pool.add_collinear("A", "B", "C")
    assert len(pool.findings_for("E")) == 0


def test_trivial_status_propagates():
    pool = pool_of("ABCD")
    pool.add_collinear("A", "B", "C", trivial=True)
    assert pool.findings_for("A").collinear[0].trivial
    pool.add_collinear("A", "B", "D", trivial=False)
    assert not pool.findings_for("A").collinear[0].trivial


# -- random merge sequences ------------------------------------------------------


def _counts(pool):
    return (
        len(pool.representatives()),
        len(pool.lines),
        len(pool.circles),
        len(pool.direction_classes()),
        len(pool.segment_classes()),
    )


def _random_operation(pool, rng):
    reps = pool.representatives()
    kind = rng.choice(["merge", "col", "cyc", "par", "cong"])
    if kind == "merge" or len(reps) < 4:
        a, b = rng.sample(pool.names, 2)
        before = _counts(pool)
        pool.merge_points(a, b)
        after = _counts(pool)
        assert after[0] <= before[0] and after[1] <= before[1] and after[2] <= before[2]
        assert after[4] <= before[4]
    elif kind == "col":
        pool.add_collinear(*rng.sample(reps, 3))
    elif kind == "cyc":
        pool.add_concyclic(*rng.sample(reps, 4))
    elif kind == "par":
        a, b, c, d = rng.sample(reps, 4)
        pool.add_parallel(pool.line_through(a, b), pool.line_through(c, d))
    else:
        a, b, c, d = rng.sample(reps, 4)
        pool.add_congruent(pool.segment(a, b), pool.segment(c, d))


def test_invariants_after_random_merge_sequences():
    rng = random.Random(7)
    for _ in range(1000):
        names = [f"P{i}" for i in range(rng.randint(4, 9))]
        pool = pool_of(names)
        for _ in range(rng.randint(1, 25)):
            _random_operation(pool, rng)
            assert pool.check_invariants() == []
        seen = sorted(n for g in pool.summary()["points"] for n in g)
        assert seen == sorted(names)


# -- true facts of concrete integer configurations ---------------------------------


def _det(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _cyc(p, q, r, s):
    rows = []
    for x, y in (q, r, s):
        x, y = x - p[0], y - p[1]
        rows.append((x, y, x * x + y * y))
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _d2(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def true_facts(coords):
    """Every true statement over distinct positions (and every identity)."""
    names = sorted(coords)
    facts = []
    for a, b in itertools.combinations(names, 2):
        if coords[a] == coords[b]:
            facts.append(identical(a, b))
    distinct = lambda pts: len({coords[n] for n in pts}) == len(pts)  # noqa: E731
    for t in itertools.combinations(names, 3):
        if distinct(t) and _det(*(coords[n] for n in t)) == 0:
            facts.append(collinear(*t))
    for q in itertools.combinations(names, 4):
        if not distinct(q):
            continue
        P = [coords[n] for n in q]
        if any(_det(*s) == 0 for s in itertools.combinations(P, 3)):
            continue
        if _cyc(*P) == 0:
            facts.append(concyclic(*q))
    pairs = [s for s in itertools.combinations(names, 2) if coords[s[0]] != coords[s[1]]]
    for u, v in itertools.combinations(pairs, 2):
        pu, qu, pv, qv = (coords[n] for n in u + v)
        if (qu[0] - pu[0]) * (qv[1] - pv[1]) == (qu[1] - pu[1]) * (qv[0] - pv[0]):
            if not set(u) & set(v) and len({pu, qu, pv, qv}) == 4:
                facts.append(parallel(*u, *v))
        if _d2(pu, qu) == _d2(pv, qv):
            facts.append(congruent(*u, *v))
    return facts


def random_configuration(rng, n):
    grid = [(x, y) for x in range(-1, 2) for y in range(-1, 2)]
    return {f"Q{i}": rng.choice(grid) for i in range(n)}


def apply_all(coords, facts):
    pool = Pool(free_points(sorted(coords), coords))
    for p in facts:
        if not pool.entails(p):
            pool.apply(p)
    return pool


def test_order_independence():
    rng = random.Random(11)
    for _ in range(40):
        coords = random_configuration(rng, rng.randint(5, 7))
        facts = true_facts(coords)
        reference = apply_all(coords, sorted(facts, key=lambda p: ("identical", "collinear").index(p.kind)
                                              if p.kind in ("identical", "collinear") else 2))
        assert reference.check_invariants() == []
        for _ in range(5):
            shuffled = facts[:]
            rng.shuffle(shuffled)
            assert apply_all(coords, shuffled).canonical() == reference.canonical()


def test_closed_pool_matches_geometry():
    rng = random.Random(12)
    for _ in range(30):
        coords = random_configuration(rng, rng.randint(5, 7))
        pool = apply_all(coords, true_facts(coords))
        positions = {}
        for n, xy in coords.items():
            positions.setdefault(xy, set()).add(n)
        assert {frozenset(g) for g in pool.summary()["points"]} == {frozenset(g) for g in positions.values()}
        # maximal geometric lines through at least three positions
        pos = list(positions)
        expected_lines = set()
        for a, b in itertools.combinations(pos, 2):
            on = frozenset(p for p in pos if _det(a, b, p) == 0)
            if len(on) >= 3:
                expected_lines.add(on)
        got = {frozenset(coords[n] for n in m) for m in pool.lines.values() if len(m) >= 3}
        assert got == expected_lines
        # segment classes: all distinct-position pairs grouped by squared length
        by_len = {}
        for a, b in itertools.combinations(pos, 2):
            by_len.setdefault(_d2(a, b), set()).add(frozenset((a, b)))
        expected = {frozenset(g) for g in by_len.values() if len(g) >= 2}
        got = {frozenset(frozenset(coords[n] for n in s) for s in g) for g in pool.segment_classes() if len(g) >= 2}
        assert got == expected


# -- candidate statements against a brute-force entailment oracle ---------------


class Oracle:
    """Naive fixpoint closure of a fact list, independent of the pool's data structures."""

    def __init__(self, names, facts):
        self.rep = {n: n for n in names}
        changed = True
        while changed:
            changed = False
            for p in facts:
                if p.kind == "identical":
                    a, b = (self.rep[n] for n in p.points)
                    if a != b:
                        keep, drop = sorted((a, b), key=names.index)
                        for k, v in self.rep.items():
                            if v == drop:
                                self.rep[k] = keep
                        changed = True
        R = lambda pts: frozenset(self.rep[n] for n in pts)  # noqa: E731
        self.col = {R(p.points) for p in facts if p.kind == "collinear" and len(R(p.points)) == 3}
        self.col = self._grow(self.col, 2)
        self.cyc = {R(p.points) for p in facts if p.kind == "concyclic" and len(R(p.points)) == 4}
        self.cyc = self._grow(self.cyc, 3)
        reps = sorted(set(self.rep.values()), key=names.index)
        pairs = [frozenset(s) for s in itertools.combinations(reps, 2)]
        par_edges = [(R(p.points[:2]), R(p.points[2:])) for p in facts if p.kind == "parallel"]
        for u, v in itertools.combinations(pairs, 2):
            if self._same_line(u, v):
                par_edges.append((u, v))
        self.par = self._components(pairs, par_edges)
        cong_edges = [(R(p.points[:2]), R(p.points[2:])) for p in facts if p.kind == "congruent"]
        self.cong = self._components(pairs, cong_edges)
        self.R = R

    @staticmethod
    def _grow(sets, share):
        sets = set(sets)
        changed = True
        while changed:
            changed = False
            for s, t in itertools.combinations(list(sets), 2):
                if len(s & t) >= share:
                    size = len(s)
                    for sub in itertools.combinations(sorted(s | t), size):
                        if frozenset(sub) not in sets:
                            sets.add(frozenset(sub))
                            changed = True
        return sets

    def _same_line(self, u, v):
        pts = u | v
        if len(pts) == 2:
            return True
        return all(frozenset(t) in self.col for t in itertools.combinations(sorted(pts), 3))

    @staticmethod
    def _components(nodes, edges):
        comp = {n: {n} for n in nodes}
        for a, b in edges:
            if a in comp and b in comp and comp[a] is not comp[b]:
                merged = comp[a] | comp[b]
                for n in merged:
                    comp[n] = merged
        return comp

    def entailed(self, p):
        pts = self.R(p.points)
        if p.kind == "identical":
            return len(pts) < 2
        if p.kind == "collinear":
            return len(pts) < 3 or pts in self.col
        if p.kind == "concyclic":
            return len(pts) < 4 or pts in self.cyc
        u, v = self.R(p.points[:2]), self.R(p.points[2:])
        if len(u) < 2 or len(v) < 2:
            return True
        table = self.par if p.kind == "parallel" else self.cong
        return u == v or v in table[u]


def test_candidates_are_never_entailed():
    rng = random.Random(13)
    for _ in range(150):
        coords = random_configuration(rng, rng.randint(4, 6))
        names = sorted(coords)
        facts = true_facts(coords)
        subset = [p for p in facts if rng.random() < 0.5]
        pool = Pool(free_points(names, coords))
        applied = []
        for p in subset:
            if not pool.entails(p):
                pool.apply(p)
                applied.append(p)
        oracle = Oracle(names, applied)
        emitted = set()
        for cand in pool.candidate_statements():
            assert not oracle.entailed(cand), cand
            emitted.add((cand.kind, frozenset(cand.points)))
        # nothing that is still open is left out (parallel is checked per line, not per pair)
        reps = pool.representatives()
        for kind, k in (("identical", 2), ("collinear", 3), ("concyclic", 4)):
            for pts in itertools.combinations(reps, k):
                p = Predicate(kind, pts)
                skipped_by_rule = kind == "concyclic" and any(
                    frozenset(t) in oracle.col for t in itertools.combinations(pts, 3))
                if not oracle.entailed(p) and not skipped_by_rule:
                    assert (kind, frozenset(pts)) in emitted, p
