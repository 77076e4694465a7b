"""CNF encodings of (pre-)rotation systems and plane-substructure properties.

Variable families (keys in the registry):

- ``("X", a, i, b)``: the i-th entry (1-based) of the row of a is b.
- ``("Y", a, b, c, d)`` with b < c < d: b, c, d are counterclockwise around a.
  Other argument orders are signed literals of the same variable.
- ``("D", p, q, r, s)``: pq crosses rs and rs passes pq from left to right.
- ``("C", a, b, c, d)``: edge ab crosses edge cd, with (a, b) < (c, d).
- ``("Ed", a, b, c, d)``: vertex d is NOT in side S_{a,b,c}.
- ``("E", a, b, c)``: side S_{a,b,c} contains no vertex.
- ``("T", a, b, c)``: triangle abc is empty (one of its sides is).
- ``("aux", name, k)``: auxiliary variables of cardinality constraints etc.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, permutations
from math import comb

from pysat.card import CardEnc, EncType

from . import core
from .core import PAIRINGS, QUAD_TABLE, RotationSystem, edge

EXPLICIT_HC_BOUND = 10
EXPLICIT_2N3_BOUND = 8


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class EncodeOptions:
    """Property blocks of a rotation-system instance.

    ``forbid_pi5=False`` is the relaxation that only excludes Pi4 ("v5");
    ``forbid_pi4=False`` additionally drops Pi4 ("v4").
    """

    forbid_pi4: bool = True
    forbid_pi5: bool = True
    convex: bool = False
    hconvex: bool = False
    natural: bool = True
    crossings: bool = False

    def __post_init__(self):
        if self.hconvex and not self.convex:
            object.__setattr__(self, "convex", True)
        if self.convex and not (self.forbid_pi4 and self.forbid_pi5):
            raise EncodingError("convexity blocks need the drawability block")
        if self.forbid_pi5 and not self.forbid_pi4:
            raise EncodingError("forbidding Pi5A/Pi5B requires forbidding Pi4")
        if self.crossings and not self.forbid_pi4:
            raise EncodingError("crossing variables need a Pi4-free instance")

    @classmethod
    def relaxed(cls, level: str, **kw) -> "EncodeOptions":
        """level is 'v4' (no obstruction), 'v5' (Pi4 only) or 'full'."""
        if level == "v4":
            return cls(forbid_pi4=False, forbid_pi5=False, **kw)
        if level == "v5":
            return cls(forbid_pi5=False, **kw)
        return cls(**kw)


class CnfInstance:
    """Variable registry plus clause list.

    Variables are allocated densely in order of first use.  Exact duplicate
    clauses are dropped.
    """

    def __init__(self, n: int, opts: EncodeOptions | None = None):
        self.n = n
        self.opts = opts
        self.registry: dict = {}
        self.keys: list = [None]
        self.clauses: list = []
        self._seen: set = set()
        self.blocks: list = []
        self.meta: dict = {"n": n}
        self._false = None

    @property
    def nvars(self) -> int:
        return len(self.keys) - 1

    def var(self, *key) -> int:
        v = self.registry.get(key)
        if v is None:
            v = len(self.keys)
            self.registry[key] = v
            self.keys.append(key)
        return v

    def fresh(self, name: str) -> int:
        return self.var("aux", name, len(self.keys))

    def has(self, *key) -> bool:
        return key in self.registry

    def add(self, clause) -> None:
        clause = list(dict.fromkeys(clause))
        if not clause:
            # keep the instance free of empty clauses: use a constant-false literal
            clause = [self.false_lit()]
        elif any(-l in clause for l in clause):
            return
        k = tuple(sorted(clause))
        if k in self._seen:
            return
        self._seen.add(k)
        self.clauses.append(clause)

    def false_lit(self) -> int:
        if self._false is None:
            self._false = self.var("aux", "false", 0)
            self.add([-self._false])
        return self._false

    def define_and(self, out: int, lits) -> None:
        lits = list(lits)
        self.add([out] + [-l for l in lits])
        for l in lits:
            self.add([-out, l])

    def define_or(self, out: int, lits) -> None:
        lits = list(lits)
        self.add([-out] + lits)
        for l in lits:
            self.add([out, -l])

    # -- family helpers -------------------------------------------------

    def x(self, a: int, i: int, b: int) -> int:
        return self.var("X", a, i, b)

    def y(self, a: int, b: int, c: int, d: int) -> int:
        """Literal for 'b, c, d counterclockwise around a'."""
        t = (b, c, d)
        s = tuple(sorted(t))
        # even permutations of the sorted triple are the cyclic rotations
        even = t in (s, (s[1], s[2], s[0]), (s[2], s[0], s[1]))
        v = self.var("Y", a, *s)
        return v if even else -v

    def c(self, e, f) -> int:
        e, f = edge(*e), edge(*f)
        if e > f:
            e, f = f, e
        key = ("C", e[0], e[1], f[0], f[1])
        if key not in self.registry:
            raise EncodingError("crossing variables are not present; call add_crossing_vars")
        return self.registry[key]

    def summary(self) -> str:
        return f"n={self.n} vars={self.nvars} clauses={len(self.clauses)} blocks={','.join(self.blocks)}"


# ---------------------------------------------------------------------------
# base block

def _ccw_pos(pos, b, c, d):
    i, j, k = pos[b], pos[c], pos[d]
    return (i < j < k) or (k < i < j) or (j < k < i)


def forbid_pattern(inst: CnfInstance, obs: RotationSystem, name: str) -> None:
    """Forbid every labelled copy of obs (and of its reflection) on every k-subset."""
    k = obs.n
    copies = core.labeled_copies(obs)
    # per row, orientations of triples through the smallest other element fix the cyclic order
    templates = []
    for rows in sorted(copies):
        q = RotationSystem(k, rows)
        lits = []
        for v in range(1, k + 1):
            others = [u for u in range(1, k + 1) if u != v]
            x0 = others[0]
            for y, z in combinations(others[1:], 2):
                lits.append((v, x0, y, z, _ccw_pos(q.pos[v], x0, y, z)))
        templates.append(lits)
    for S in combinations(range(1, inst.n + 1), k):
        for lits in templates:
            clause = []
            for v, x0, y, z, val in lits:
                l = inst.y(S[v - 1], S[x0 - 1], S[y - 1], S[z - 1])
                clause.append(-l if val else l)
            inst.add(clause)
    inst.blocks.append(f"forbid:{name}")


def new_instance(n: int, opts: EncodeOptions | None = None, catalog=None) -> CnfInstance:
    """Instance whose models are the pre-rotation systems on 1..n with the chosen properties."""
    if n < 3:
        raise EncodingError("n must be at least 3")
    opts = opts or EncodeOptions()
    inst = CnfInstance(n, opts)
    inst.meta.update({k: v for k, v in opts.__dict__.items()})
    N = range(1, n + 1)
    P = range(1, n)

    # X block: allocate first so that X variables are 1..n(n-1)^2 ... in a fixed order
    for a in N:
        for i in P:
            for b in N:
                if b != a:
                    inst.x(a, i, b)
    for a in N:
        others = [b for b in N if b != a]
        for i in P:
            inst.add([inst.x(a, i, b) for b in others])
            for b1, b2 in combinations(others, 2):
                inst.add([-inst.x(a, i, b1), -inst.x(a, i, b2)])
        for b in others:
            inst.add([inst.x(a, i, b) for i in P])
            for i, j in combinations(P, 2):
                inst.add([-inst.x(a, i, b), -inst.x(a, j, b)])
    inst.add([inst.x(1, 1, 2)])
    for a in range(2, n + 1):
        inst.add([inst.x(a, 1, 1)])
    if opts.natural:
        for i in P:
            inst.add([inst.x(1, i, i + 1)])
    inst.blocks.append("rows")

    # Y block
    for a in N:
        others = [b for b in N if b != a]
        for b, c, d in combinations(others, 3):
            inst.y(a, b, c, d)
    for a in N:
        others = [b for b in N if b != a]
        for b, c, d in combinations(others, 3):
            y = inst.y(a, b, c, d)
            for i, j, k in permutations(P, 3):
                cyc = (i < j < k) or (k < i < j) or (j < k < i)
                inst.add([-inst.x(a, i, b), -inst.x(a, j, c), -inst.x(a, k, d), y if cyc else -y])
    inst.blocks.append("sync")

    if opts.forbid_pi4:
        _forbid_pi4(inst)
    if opts.forbid_pi5 or opts.convex:
        if catalog is None:
            from .catalog import load_catalog
            catalog = load_catalog()
    if opts.forbid_pi5 and n >= 5:
        forbid_pattern(inst, catalog.pi5A, "pi5A")
        forbid_pattern(inst, catalog.pi5B, "pi5B")
    if opts.convex and n >= 5:
        forbid_pattern(inst, catalog.convex5_1, "convex5_1")
        forbid_pattern(inst, catalog.convex5_2, "convex5_2")
    if opts.hconvex and n >= 6:
        forbid_pattern(inst, catalog.hconvex6, "hconvex6")
    if opts.crossings:
        add_crossing_vars(inst)
    return inst


def _forbid_pi4(inst: CnfInstance) -> None:
    # ordered 4-tuples: the sorted ones alone would miss 6 of the 8 labelings
    for a, b, c, d in permutations(range(1, inst.n + 1), 4):
        y = (inst.y(a, b, c, d), inst.y(b, a, c, d), inst.y(c, a, b, d), inst.y(d, a, c, b))
        inst.add([-l for l in y])
        inst.add(list(y))
    inst.blocks.append("forbid:pi4")


def _quad_lits(inst, a, b, c, d):
    """Literals of the 4-bit role pattern of (a, b, c, d), matching core.quad_key."""
    return (inst.y(a, b, c, d), inst.y(b, a, c, d), inst.y(c, a, b, d), inst.y(d, a, b, c))


def _pattern_clause_body(lits, key):
    """Negated conjunction 'pattern == key' as clause literals."""
    return [-l if bit else l for l, bit in zip(lits, key)]


def add_crossing_vars(inst: CnfInstance) -> None:
    """D and C variables determined by the 4-element lookup table."""
    if "crossings" in inst.blocks:
        return
    if inst.opts is not None and not inst.opts.forbid_pi4:
        raise EncodingError("crossing variables need a Pi4-free instance")
    n = inst.n
    for (a, b), (c, d) in _independent_pairs(n):
        inst.var("C", a, b, c, d)
    for quad in combinations(range(1, n + 1), 4):
        lits = _quad_lits(inst, *quad)
        labels = (None,) + quad
        ds = {0: [], 1: [], 2: []}
        for key, info in sorted(QUAD_TABLE.items()):
            if info.crossing is None:
                continue
            p, q, r, s = (labels[x] for x in info.directed)
            dv = inst.var("D", p, q, r, s)
            inst.define_and(dv, [l if bit else -l for l, bit in zip(lits, key)])
            ds[info.crossing].append(dv)
        for idx, ((p, q), (r, s)) in enumerate(PAIRINGS):
            cv = inst.c((labels[p], labels[q]), (labels[r], labels[s]))
            inst.define_or(cv, ds[idx])
    inst.blocks.append("crossings")


def _independent_pairs(n):
    edges = list(combinations(range(1, n + 1), 2))
    for e, f in combinations(edges, 2):
        if len(set(e) | set(f)) == 4:
            yield e, f


def _crossing_clause(inst, edges):
    """Literals 'some independent pair among edges crosses'."""
    edges = [edge(*e) for e in edges]
    out = []
    for e, f in combinations(edges, 2):
        if len(set(e) | set(f)) == 4:
            out.append(inst.c(e, f))
    return out


def _need_crossings(inst):
    if "crossings" not in inst.blocks:
        add_crossing_vars(inst)


def hamiltonian_cycles(n: int):
    """Each undirected Hamiltonian cycle of K_n once, as a vertex tuple starting at 1."""
    for rest in permutations(range(2, n + 1)):
        if rest[0] < rest[-1]:
            yield (1,) + rest


def cycle_edges(cyc):
    k = len(cyc)
    return [edge(cyc[i], cyc[(i + 1) % k]) for i in range(k)]


def forbid_plane_hamiltonian_cycle(inst: CnfInstance, bound: int = EXPLICIT_HC_BOUND) -> None:
    if inst.n > bound:
        raise EncodingError(f"explicit cycle enumeration is limited to n <= {bound}")
    _need_crossings(inst)
    for cyc in hamiltonian_cycles(inst.n):
        inst.add(_crossing_clause(inst, cycle_edges(cyc)))
    inst.blocks.append("forbid-hc")


def forbid_plane_hamiltonian_2n3(inst: CnfInstance, bound: int = EXPLICIT_2N3_BOUND) -> None:
    n = inst.n
    if n > bound:
        raise EncodingError(f"explicit 2n-3 enumeration is limited to n <= {bound}")
    _need_crossings(inst)
    all_edges = [edge(u, v) for u, v in combinations(range(1, n + 1), 2)]
    for cyc in hamiltonian_cycles(n):
        ce = cycle_edges(cyc)
        rest = [e for e in all_edges if e not in set(ce)]
        for extra in combinations(rest, n - 3):
            inst.add(_crossing_clause(inst, ce + list(extra)))
    inst.blocks.append("forbid-hc2n3")


def count_2n3_sets(n: int) -> int:
    """Number of (cycle, extension) edge sets before deduplication."""
    cycles = _fact(n - 1) // 2
    return cycles * comb(comb(n, 2) - n, n - 3)


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def assert_unextendable_fixed_hc(inst: CnfInstance) -> None:
    """The cycle 1,2,...,n is plane and cannot be extended to a plane subdrawing on 2n-3 edges."""
    if inst.opts is not None and inst.opts.natural:
        raise EncodingError("a fixed Hamiltonian cycle needs natural labeling switched off")
    _need_crossings(inst)
    n = inst.n
    ce = cycle_edges(tuple(range(1, n + 1)))
    for l in _crossing_clause(inst, ce):
        inst.add([-l])
    ces = set(ce)
    rest = [edge(u, v) for u, v in combinations(range(1, n + 1), 2) if edge(u, v) not in ces]
    for extra in combinations(rest, n - 3):
        lits = []
        for e, f in combinations(ce + list(extra), 2):
            if (e in ces and f in ces) or len(set(e) | set(f)) < 4:
                continue
            lits.append(inst.c(e, f))
        inst.add(lits)
    inst.blocks.append("unextendable-hc")


def assert_matching_unavoidable(inst: CnfInstance, k: int, bound: int = EXPLICIT_HC_BOUND) -> None:
    """The plane matching {1,2},...,{2k-1,2k} is crossed by (or crosses into) every Hamiltonian cycle.

    For every Hamiltonian cycle C the edge set C + M has a crossing.
    """
    n = inst.n
    if k < 0 or 2 * k > n:
        raise EncodingError("matching size out of range")
    if n > bound:
        raise EncodingError(f"explicit cycle enumeration is limited to n <= {bound}")
    if k >= 1 and inst.opts is not None and inst.opts.natural:
        raise EncodingError("the matching block needs natural labeling switched off")
    _need_crossings(inst)
    M = [edge(2 * j + 1, 2 * j + 2) for j in range(k)]
    for l in _crossing_clause(inst, M):
        inst.add([-l])
    Ms = set(M)
    for cyc in hamiltonian_cycles(n):
        es = list(dict.fromkeys(cycle_edges(cyc) + M))
        lits = []
        for e, f in combinations(es, 2):
            if (e in Ms and f in Ms) or len(set(e) | set(f)) < 4:
                continue
            lits.append(inst.c(e, f))
        inst.add(lits)
    if k >= 1:
        # relabelings preserving M let vertex 1 see 2 first, then the matching
        # edges in order of their smaller endpoint, then the unmatched vertices
        rest = M[1:]
        for u, v in rest:
            inst.add([inst.y(1, 2, u, v)])
        for (u, _), (u2, _) in combinations(rest, 2):
            inst.add([inst.y(1, 2, u, u2)])
        free = list(range(2 * k + 1, n + 1))
        for x, y in combinations(free, 2):
            inst.add([inst.y(1, 2, x, y)])
    inst.blocks.append(f"matching:{k}")


def assert_all_edges_crossed(inst: CnfInstance) -> None:
    _need_crossings(inst)
    n = inst.n
    for e in combinations(range(1, n + 1), 2):
        lits = [inst.c(e, f) for f in combinations(range(1, n + 1), 2) if not set(e) & set(f)]
        inst.add(lits)
    inst.blocks.append("all-edges-crossed")


def add_empty_triangle_vars(inst: CnfInstance) -> list:
    """Define E^d, E and T variables; returns the list of T variables."""
    _need_crossings(inst)
    n = inst.n
    ts = []
    for a, b, c in combinations(range(1, n + 1), 3):
        evars = []
        for side in (core.SideRef.of(a, b, c), core.SideRef.of(a, c, b)):
            eds = []
            for d in range(1, n + 1):
                if d in side:
                    continue
                ed = inst.var("Ed", *side, d)
                lits = _quad_lits(inst, side.a, side.b, side.c, d)
                for key, info in QUAD_TABLE.items():
                    body = _pattern_clause_body(lits, key)
                    inst.add(body + ([-ed] if info.side else [ed]))
                eds.append(ed)
            ev = inst.var("E", *side)
            inst.define_and(ev, eds)
            evars.append(ev)
        t = inst.var("T", a, b, c)
        inst.define_or(t, evars)
        ts.append(t)
    return ts


def assert_empty_triangles_atmost(inst: CnfInstance, k: int) -> None:
    if k < 0:
        raise EncodingError("k must be non-negative")
    ts = add_empty_triangle_vars(inst)
    cardinality_atmost(inst, ts, k)
    inst.blocks.append(f"empty-atmost:{k}")


def cardinality_atmost(inst: CnfInstance, literals, k: int) -> None:
    """At most k of the literals are true (sequential counter)."""
    literals = list(literals)
    if k < 0:
        raise EncodingError("k must be non-negative")
    if k >= len(literals):
        return
    if k == 0:
        for l in literals:
            inst.add([-l])
        return
    enc = CardEnc.atmost(lits=literals, bound=k, top_id=inst.nvars, encoding=EncType.seqcounter)
    # register the auxiliary variables in the order the encoder created them
    for v in range(inst.nvars + 1, enc.nv + 1):
        got = inst.var("aux", "card", v)
        assert got == v
    for cl in enc.clauses:
        inst.add(cl)


def fix_system(inst: CnfInstance, rs: RotationSystem) -> None:
    """Unit clauses fixing the X variables to rs."""
    for a in range(1, rs.n + 1):
        for i, b in enumerate(rs.row(a), start=1):
            inst.add([inst.x(a, i, b)])


def options_from_flags(v4=False, v5=False, convex=False, hconvex=False, natural=True,
                       crossings=False) -> EncodeOptions:
    if v4:
        return EncodeOptions(forbid_pi4=False, forbid_pi5=False, convex=convex, hconvex=hconvex,
                             natural=natural, crossings=crossings)
    if v5:
        return EncodeOptions(forbid_pi5=False, convex=convex, hconvex=hconvex, natural=natural,
                             crossings=crossings)
    return EncodeOptions(convex=convex, hconvex=hconvex, natural=natural, crossings=crossings)


def with_natural(opts: EncodeOptions, natural: bool) -> EncodeOptions:
    return replace(opts, natural=natural)
