"""Rotation systems of complete graphs and exact combinatorial predicates on them.

Vertices are labelled 1..n.  Row ``v`` of a rotation system lists the other
vertices in counterclockwise order around ``v``; rows are stored rotated so
that they start with their smallest element.

All 4-element information (which pair of edges crosses, which side of a
triangle a fourth vertex lies in) is read off a lookup table that is
bootstrapped once from two straight-line drawings of K4 under all 24
labelings and their mirror images.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from typing import Iterable, NamedTuple, Sequence

from . import geometry

ORACLE_BOUND = 10


class NotDrawableError(ValueError):
    """Raised when a predicate needs a drawable (or Pi4-free) input and did not get one."""


class Edge(NamedTuple):
    u: int
    v: int


def edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError("an edge needs two distinct endpoints")
    return Edge(u, v) if u < v else Edge(v, u)


class SideRef(NamedTuple):
    """The side S_{a,b,c} of triangle abc from which a, b, c read counterclockwise.

    Stored rotated so that ``a`` is the smallest label; ``(a, c, b)`` is the
    other side of the same triangle.
    """

    a: int
    b: int
    c: int

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "SideRef":
        if len({a, b, c}) != 3:
            raise ValueError("a side needs three distinct vertices")
        m = min(a, b, c)
        while a != m:
            a, b, c = b, c, a
        return cls(a, b, c)

    @property
    def other(self) -> "SideRef":
        return SideRef(self.a, self.c, self.b)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self)


@dataclass(frozen=True)
class RotationSystem:
    """A pre-rotation system on 1..n with normalized rows.

    Use :func:`from_rows` to build one from arbitrary input; the constructor
    trusts its arguments.
    """

    n: int
    rows: tuple

    def row(self, v: int) -> tuple:
        return self.rows[v - 1]

    @cached_property
    def pos(self) -> list:
        """pos[a][b] = index of b in the row of a."""
        n = self.n
        table = [[-1] * (n + 1) for _ in range(n + 1)]
        for a, row in enumerate(self.rows, start=1):
            t = table[a]
            for i, b in enumerate(row):
                t[b] = i
        return table

    @cached_property
    def vector(self) -> tuple:
        return tuple(x for row in self.rows for x in row)

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    def __str__(self) -> str:
        return " ".join("".join(map(str, r)) if self.n <= 10 else ",".join(map(str, r))
                        for r in self.rows)


@dataclass(frozen=True)
class CrossingRelation:
    """Pairs of independent crossing edges; each pair stored once as (e, f) with e < f."""

    n: int
    pairs: frozenset

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        e, f = pair
        e, f = edge(*e), edge(*f)
        return (min(e, f), max(e, f)) in self.pairs

    def crossed_edges(self) -> set:
        return {e for pair in self.pairs for e in pair}

    def per_edge(self) -> dict:
        out = {edge(u, v): [] for u, v in combinations(range(1, self.n + 1), 2)}
        for e, f in sorted(self.pairs):
            out[e].append(f)
            out[f].append(e)
        return out


def _normalize(row: Sequence[int]) -> tuple:
    i = row.index(min(row))
    return tuple(row[i:]) + tuple(row[:i])


def from_rows(n: int, rows) -> RotationSystem:
    """Validate and normalize a pre-rotation system given as n rows."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rows = [list(r) for r in rows]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, got {len(rows)}")
    for v, row in enumerate(rows, start=1):
        if sorted(row) != [u for u in range(1, n + 1) if u != v]:
            raise ValueError(f"row {v} is not a permutation of the other vertices: {row}")
    return RotationSystem(n, tuple(_normalize(r) for r in rows))


def rotation_from_points(points) -> RotationSystem:
    """Rotation system of the straight-line drawing on integer points."""
    pts = [tuple(int(x) for x in p) for p in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    geometry.check_general_position(pts)
    rows = [[i + 1 for i in geometry.angular_order(pts, v)] for v in range(len(pts))]
    return RotationSystem(len(pts), tuple(_normalize(r) for r in rows))


def ccw(rs: RotationSystem, a: int, b: int, c: int, d: int) -> bool:
    """Whether b, c, d appear counterclockwise in the rotation of a."""
    if len({a, b, c, d}) != 4:
        raise ValueError("ccw needs four distinct vertices")
    p = rs.pos[a]
    i, j, k = p[b], p[c], p[d]
    return (i < j < k) or (k < i < j) or (j < k < i)


def _ccw(p, b, c, d) -> bool:
    i, j, k = p[b], p[c], p[d]
    return (i < j < k) or (k < i < j) or (j < k < i)


def quad_key(rs: RotationSystem, a: int, b: int, c: int, d: int) -> tuple:
    """The 4-bit pattern of the subsystem on (a, b, c, d) read in this role order."""
    pos = rs.pos
    return (_ccw(pos[a], b, c, d), _ccw(pos[b], a, c, d),
            _ccw(pos[c], a, b, d), _ccw(pos[d], a, b, c))


def induced(rs: RotationSystem, subset: Iterable[int]) -> RotationSystem:
    """Subconfiguration on subset, relabelled 1..k preserving label order."""
    verts = sorted(set(subset))
    if len(verts) < 3:
        raise ValueError("subset must have at least 3 vertices")
    rank = {v: i + 1 for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        rows.append(_normalize([rank[u] for u in rs.row(v) if u in rank]))
    return RotationSystem(len(verts), tuple(rows))


def reflect(rs: RotationSystem) -> RotationSystem:
    return RotationSystem(rs.n, tuple(_normalize(r[::-1]) for r in rs.rows))


def relabel(rs: RotationSystem, perm) -> RotationSystem:
    """Rename vertex v to perm[v]; perm is a mapping (or a 1-indexed sequence with perm[0] unused)."""
    n = rs.n
    if isinstance(perm, dict):
        mapping = perm
    else:
        perm = list(perm)
        if len(perm) == n:
            perm = [0] + perm
        mapping = {v: perm[v] for v in range(1, n + 1)}
    if sorted(mapping) != list(range(1, n + 1)) or sorted(mapping.values()) != list(range(1, n + 1)):
        raise ValueError("relabeling is not a bijection on 1..n")
    rows = [None] * n
    for v in range(1, n + 1):
        rows[mapping[v] - 1] = _normalize([mapping[u] for u in rs.row(v)])
    return RotationSystem(n, tuple(rows))


# ---------------------------------------------------------------------------
# canonical forms

def _natural_candidates(rs: RotationSystem):
    """Yield (rows, relabel map) for the 2n(n-1) natural relabelings of rs and its reflection."""
    n = rs.n
    for rows in (rs.rows, tuple(r[::-1] for r in rs.rows)):
        for a in range(1, n + 1):
            ra = rows[a - 1]
            for start in range(n - 1):
                sigma = [0] * (n + 1)
                sigma[a] = 1
                for k in range(n - 1):
                    sigma[ra[(start + k) % (n - 1)]] = k + 2
                yield rows, sigma


def _candidate_rows(rows, sigma, n):
    """Rows of the relabelled system in new label order (lazily)."""
    inv = [0] * (n + 1)
    for v in range(1, n + 1):
        inv[sigma[v]] = v
    for new in range(1, n + 1):
        row = [sigma[u] for u in rows[inv[new] - 1]]
        yield _normalize(row)


def canonical_form(rs: RotationSystem) -> RotationSystem:
    """Lexicographically smallest natural relabeling of rs or its reflection."""
    n = rs.n
    best = None
    for rows, sigma in _natural_candidates(rs):
        if best is None:
            best = list(_candidate_rows(rows, sigma, n))
            continue
        cand = []
        better = False
        for i, row in enumerate(_candidate_rows(rows, sigma, n)):
            if not better:
                if row > best[i]:
                    break
                if row < best[i]:
                    better = True
            cand.append(row)
        else:
            if better:
                best = cand
    return RotationSystem(n, tuple(best))


def is_canonical(rs: RotationSystem) -> bool:
    n = rs.n
    target = rs.rows
    if target[0] != tuple(range(2, n + 1)):
        return False
    for rows, sigma in _natural_candidates(rs):
        for i, row in enumerate(_candidate_rows(rows, sigma, n)):
            if row < target[i]:
                return False
            if row > target[i]:
                break
    return True


@lru_cache(maxsize=None)
def labeled_copies(obs: RotationSystem) -> frozenset:
    """All relabelings of obs and of its reflection, as row tuples."""
    k = obs.n
    out = set()
    for base in (obs, reflect(obs)):
        for p in permutations(range(1, k + 1)):
            out.add(relabel(base, (0,) + p).rows)
    return frozenset(out)


# ---------------------------------------------------------------------------
# 4-element lookup tables bootstrapped from straight-line drawings of K4

_K4_POINTS = {
    "crossing": [(0, 0), (4, 0), (4, 4), (0, 4)],
    "plane": [(0, 0), (4, 0), (2, 4), (2, 1)],
}

# crossing codes: which pair of the roles 1..4 cross
PAIRINGS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


class QuadInfo(NamedTuple):
    kind: str                 # "plane" or "crossing"
    crossing: int | None      # index into PAIRINGS
    directed: tuple | None    # (p, q, r, s): pq crosses rs with r left of p->q, p < q
    side: bool                # whether role 4 lies in S_{1,2,3}


def _bootstrap_quad_table() -> dict:
    table = {}
    for kind, pts in _K4_POINTS.items():
        for mirror in (False, True):
            base = [(-x, y) if mirror else (x, y) for x, y in pts]
            for perm in permutations(range(4)):
                # role r+1 sits at base[perm[r]]
                placed = [base[perm[r]] for r in range(4)]
                rs = rotation_from_points(placed)
                key = quad_key(rs, 1, 2, 3, 4)
                cross = None
                directed = None
                for idx, ((p, q), (r, s)) in enumerate(PAIRINGS):
                    P = [placed[x - 1] for x in (p, q, r, s)]
                    if geometry.segments_cross(*P):
                        cross = idx
                        if geometry.orient(P[0], P[1], P[2]) > 0:
                            directed = (p, q, r, s)
                        else:
                            directed = (p, q, s, r)
                a, b, c, d = placed
                o = geometry.orient(a, b, c)
                inside = geometry.in_triangle(a, b, c, d)
                side = inside if o > 0 else not inside
                info = QuadInfo(kind, cross, directed, side)
                if table.setdefault(key, info) != info:
                    raise AssertionError("inconsistent K4 lookup table")
    if len(table) != 8:
        raise AssertionError(f"expected 8 labeled drawable K4 systems, found {len(table)}")
    return table


QUAD_TABLE = _bootstrap_quad_table()


def is_pi4_key(key: tuple) -> bool:
    return key not in QUAD_TABLE


def _quad_info(rs, a, b, c, d) -> QuadInfo:
    key = quad_key(rs, a, b, c, d)
    info = QUAD_TABLE.get(key)
    if info is None:
        raise NotDrawableError(f"subsystem on {sorted((a, b, c, d))} is the Pi4 obstruction")
    return info


def crossing_of_quadruple(rs: RotationSystem, quad) -> tuple | None:
    """The crossing pair of the K4 on quad, or None if it is drawn plane."""
    a, b, c, d = sorted(quad)
    info = _quad_info(rs, a, b, c, d)
    if info.crossing is None:
        return None
    labels = (None, a, b, c, d)
    (p, q), (r, s) = PAIRINGS[info.crossing]
    return edge(labels[p], labels[q]), edge(labels[r], labels[s])


def crosses(rs: RotationSystem, e, f) -> bool:
    """Whether edges e and f cross; O(1).  Adjacent edges never cross."""
    (a, b), (c, d) = e, f
    if len({a, b, c, d}) < 4:
        return False
    info = _quad_info(rs, a, b, c, d)
    return info.crossing == 0


def crossing_relation(rs: RotationSystem) -> CrossingRelation:
    pairs = set()
    for quad in combinations(range(1, rs.n + 1), 4):
        cr = crossing_of_quadruple(rs, quad)
        if cr is not None:
            pairs.add(tuple(sorted(cr)))
    return CrossingRelation(rs.n, frozenset(pairs))


def contains_pi4(rs: RotationSystem) -> bool:
    for a, b, c, d in combinations(range(1, rs.n + 1), 4):
        if quad_key(rs, a, b, c, d) not in QUAD_TABLE:
            return True
    return False


def contains_subconfiguration(rs: RotationSystem, obs: RotationSystem) -> bool:
    k = obs.n
    if k > rs.n:
        return False
    copies = labeled_copies(obs)
    for subset in combinations(range(1, rs.n + 1), k):
        if induced(rs, subset).rows in copies:
            return True
    return False


def is_drawable(rs: RotationSystem) -> bool:
    """Obstruction test: no Pi4, Pi5A or Pi5B subconfiguration."""
    from .catalog import load_catalog

    if contains_pi4(rs):
        return False
    if rs.n < 5:
        return True
    cat = load_catalog()
    copies = labeled_copies(cat.pi5A) | labeled_copies(cat.pi5B)
    for subset in combinations(range(1, rs.n + 1), 5):
        if induced(rs, subset).rows in copies:
            return False
    return True


def _require_drawable(rs):
    if contains_pi4(rs):
        raise NotDrawableError("input contains the Pi4 obstruction")


# ---------------------------------------------------------------------------
# sides, convexity, empty triangles

def side_contains_vertex(rs: RotationSystem, side, d: int) -> bool:
    """Whether d lies in the open side S_{a,b,c}."""
    a, b, c = side
    if d in (a, b, c):
        raise ValueError("d must not be a triangle vertex")
    return _quad_info(rs, a, b, c, d).side


def side_members(rs: RotationSystem, side) -> list:
    a, b, c = side
    return [d for d in range(1, rs.n + 1)
            if d not in (a, b, c) and _quad_info(rs, a, b, c, d).side]


def side_is_convex(rs: RotationSystem, side, members=None) -> bool:
    """No edge with both ends in the closed side crosses the triangle boundary."""
    a, b, c = side
    if members is None:
        members = side_members(rs, side)
    closed = [a, b, c] + list(members)
    tri = ((a, b), (b, c), (a, c))
    for u, v in combinations(closed, 2):
        for t in tri:
            if crosses(rs, (u, v), t):
                return False
    return True


def triangle_sides(rs: RotationSystem, a, b, c):
    """Both sides of triangle abc with their vertex sets: [(side, members), (other, members)]."""
    s = SideRef.of(a, b, c)
    inside, outside = [], []
    for d in range(1, rs.n + 1):
        if d in (a, b, c):
            continue
        (inside if _quad_info(rs, s.a, s.b, s.c, d).side else outside).append(d)
    return [(s, inside), (s.other, outside)]


def convex_sides(rs: RotationSystem) -> dict:
    """Map each 3-set to the list of its convex sides (with members)."""
    out = {}
    for a, b, c in combinations(range(1, rs.n + 1), 3):
        out[(a, b, c)] = [(s, m) for s, m in triangle_sides(rs, a, b, c)
                          if side_is_convex(rs, s, m)]
    return out


def is_convex_definitional(rs: RotationSystem) -> bool:
    _require_drawable(rs)
    for a, b, c in combinations(range(1, rs.n + 1), 3):
        if not any(side_is_convex(rs, s, m) for s, m in triangle_sides(rs, a, b, c)):
            return False
    return True


def is_convex_obstruction(rs: RotationSystem) -> bool:
    from .catalog import load_catalog

    cat = load_catalog()
    return not (contains_subconfiguration(rs, cat.convex5_1)
                or contains_subconfiguration(rs, cat.convex5_2))


def is_convex(rs: RotationSystem) -> bool:
    """Every triangle has a convex side (checked by obstructions)."""
    if not is_drawable(rs):
        raise NotDrawableError("convexity is only defined for drawable systems")
    return is_convex_obstruction(rs)


def is_hconvex_definitional(rs: RotationSystem) -> bool:
    """Whether convex sides can be chosen consistently, one per triangle.

    The choice must be hereditary: if triangle T1 lies in the chosen side
    S2 of T2, the chosen side of T1 is the one inside S2.  T1 lies in a
    convex S2 iff its vertices are in the closed S2, and then its inner side
    is the one away from a vertex of T2 outside T1.  Choices are two-valued,
    so this is 2-SAT; we hand it to a SAT solver.
    """
    from pysat.solvers import Solver

    _require_drawable(rs)
    sides = convex_sides(rs)
    if any(not v for v in sides.values()):
        return False
    var = {}
    for t in sides:
        var[t] = len(var) + 1          # true: choose SideRef.of(*t)
    clauses = []

    def lit(side):
        t = tuple(sorted(side))
        return var[t] if side == SideRef.of(*t) else -var[t]

    for t2, lst in sides.items():
        allowed = {s for s, _ in lst}
        for s in (SideRef.of(*t2), SideRef.of(*t2).other):
            if s not in allowed:
                clauses.append([-lit(s)])
        for s2, members in lst:
            closed = set(t2) | set(members)
            for t1 in combinations(sorted(closed), 3):
                if set(t1) == set(t2):
                    continue
                x = next(v for v in t2 if v not in t1)
                s1 = SideRef.of(*t1)
                if side_contains_vertex(rs, s1, x):
                    s1 = s1.other
                clauses.append([-lit(s2), lit(s1)])
    with Solver(name="minisat22", bootstrap_with=clauses) as solver:
        return solver.solve()


def is_hconvex(rs: RotationSystem) -> bool:
    from .catalog import load_catalog

    if not is_convex(rs):
        return False
    return not contains_subconfiguration(rs, load_catalog().hconvex6)


def empty_triangles(rs: RotationSystem):
    """(count, list of 3-sets) of triangles with at least one vertex-free side."""
    _require_drawable(rs)
    out = []
    for a, b, c in combinations(range(1, rs.n + 1), 3):
        (_, m1), (_, m2) = triangle_sides(rs, a, b, c)
        if not m1 or not m2:
            out.append((a, b, c))
    return len(out), out


# ---------------------------------------------------------------------------
# plane substructures

def is_plane_subset(rs: RotationSystem, edges) -> bool:
    es = [edge(*e) for e in edges]
    for e, f in combinations(es, 2):
        if crosses(rs, e, f):
            return False
    return True


def has_uncrossed_edge(rs: RotationSystem) -> bool:
    crossed = crossing_relation(rs).crossed_edges()
    return len(crossed) < rs.n * (rs.n - 1) // 2


def brute_force_plane_hamiltonian(rs: RotationSystem, mode: str = "cycle",
                                  required_edge=None, bound: int = ORACLE_BOUND):
    """Exhaustive search for a plane Hamiltonian cycle or path.

    Returns the vertex sequence or None.
    """
    n = rs.n
    if n > bound:
        raise ValueError(f"n={n} exceeds the oracle bound {bound}")
    if mode not in ("cycle", "path"):
        raise ValueError("mode must be 'cycle' or 'path'")
    _require_drawable(rs)
    req = edge(*required_edge) if required_edge is not None else None
    cross = {}
    for e, f in crossing_relation(rs).pairs:
        cross.setdefault(e, set()).add(f)
        cross.setdefault(f, set()).add(e)

    def ok(path_edges, e):
        ce = cross.get(e)
        if not ce:
            return True
        return not any(f in ce for f in path_edges)

    def has_req(seq, closed):
        if req is None:
            return True
        es = {edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1)}
        if closed:
            es.add(edge(seq[-1], seq[0]))
        return req in es

    starts = [1] if mode == "cycle" else list(range(1, n + 1))
    for s in starts:
        seq = [s]
        used = [False] * (n + 1)
        used[s] = True
        pedges = []

        def dfs():
            if len(seq) == n:
                if mode == "cycle":
                    if n < 3:
                        return False
                    e = edge(seq[-1], seq[0])
                    if seq[1] > seq[-1]:
                        return False  # each cycle once per direction
                    if ok(pedges, e) and has_req(seq, True):
                        return True
                    return False
                return has_req(seq, False)
            last = seq[-1]
            for v in range(1, n + 1):
                if used[v]:
                    continue
                e = edge(last, v)
                if not ok(pedges, e):
                    continue
                used[v] = True
                seq.append(v)
                pedges.append(e)
                if dfs():
                    return True
                used[v] = False
                seq.pop()
                pedges.pop()
            return False

        if dfs():
            return list(seq)
    return None
