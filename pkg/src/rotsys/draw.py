"""Drawability of pre-rotation systems via planarizations.

For a Pi4-free system the crossing pairs are determined, so a drawing is
pinned down by the order in which each edge meets its crossings.  We
search these orders together with a planarity certificate for the
resulting graph: three total orders on its vertices such that for every
edge pq and every other vertex w, some order puts both p and q below w.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from . import core
from .core import CrossingRelation, RotationSystem
from .encode import CnfInstance


@dataclass
class Planarization:
    n: int
    crossings: list              # crossing vertex n+1+i is crossings[i] = (e, f)
    sigma: dict                  # edge -> (u, x1, ..., xk, v) with crossing vertices as ints
    adjacency: frozenset         # frozensets {p, q}

    @property
    def num_vertices(self) -> int:
        return self.n + len(self.crossings)

    @property
    def num_edges(self) -> int:
        return len(self.adjacency)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.num_vertices + 1))
        g.add_edges_from(tuple(e) for e in self.adjacency)
        return g

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "original": list(range(1, self.n + 1)),
            "crossing": {str(self.n + 1 + i): [list(e), list(f)]
                         for i, (e, f) in enumerate(self.crossings)},
            "sigma": {f"{u}-{v}": list(seq) for (u, v), seq in sorted(self.sigma.items())},
            "adjacency": sorted(sorted(e) for e in self.adjacency),
        })


def crossing_segments(prs: RotationSystem) -> dict:
    """Per-edge crossing sets X_e; crossing i is numbered n+1+i."""
    rel: CrossingRelation = core.crossing_relation(prs)   # raises on Pi4
    pairs = sorted(rel.pairs)
    X = {core.edge(u, v): [] for u, v in combinations(range(1, prs.n + 1), 2)}
    for i, (e, f) in enumerate(pairs):
        X[e].append(prs.n + 1 + i)
        X[f].append(prs.n + 1 + i)
    return {"pairs": pairs, "X": X}


# ---------------------------------------------------------------------------
# encoding pieces

def _order_lit(inst, tag, a, b):
    """Literal 'a before b' in the order named tag, one variable per unordered pair."""
    if a < b:
        return inst.var("O", tag, a, b)
    return -inst.var("O", tag, b, a)


def _total_order(inst, tag, elems):
    for a, b, c in combinations(elems, 3):
        for p, q, r in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
            inst.add([-_order_lit(inst, tag, p, q), -_order_lit(inst, tag, q, r),
                      _order_lit(inst, tag, p, r)])


def schnyder_clauses(inst: CnfInstance, vertices, edges, top=None) -> None:
    """Three orders with the dimension-three condition.

    ``edges`` maps a pair (p, q) to a literal or to None for a fixed edge.
    ``top`` optionally names a vertex forced to be the maximum of the first
    order; this loses nothing, since a triangulation with ``top`` on the
    outer face has a realizer whose first order ends in ``top``.
    """
    vertices = sorted(vertices)
    for i in (1, 2, 3):
        for a, b in combinations(vertices, 2):
            _order_lit(inst, ("S", i), a, b)
        _total_order(inst, ("S", i), vertices)
    if top is not None:
        for w in vertices:
            if w != top:
                inst.add([_order_lit(inst, ("S", 1), w, top)])
    for (p, q), lit in edges.items():
        for w in vertices:
            if w == p or w == q:
                continue
            clause = [] if lit is None else [-lit]
            for i in (1, 2, 3):
                z = inst.var("Z", i, p, q, w)
                # z -> p <_i w and q <_i w
                inst.add([-z, _order_lit(inst, ("S", i), p, w)])
                inst.add([-z, _order_lit(inst, ("S", i), q, w)])
                clause.append(z)
            inst.add(clause)


def encode_drawability(prs: RotationSystem) -> CnfInstance:
    """SAT iff prs is drawable; prs must be Pi4-free."""
    seg = crossing_segments(prs)
    n = prs.n
    inst = CnfInstance(n)
    inst.meta.update({"kind": "drawability", "rows": prs.vector})
    X = seg["X"]
    edges = {}
    for e, xs in X.items():
        u, v = e
        if not xs:
            edges[(u, v)] = None
            continue
        for a, b in combinations(xs, 2):
            _order_lit(inst, e, a, b)
        _total_order(inst, e, xs)
        for x in xs:
            rest = [z for z in xs if z != x]
            # first on e: adjacent to u
            a_ux = inst.var("A", e, u, x)
            inst.define_and(a_ux, [_order_lit(inst, e, x, z) for z in rest])
            edges[(u, x)] = a_ux
            a_xv = inst.var("A", e, x, v)
            inst.define_and(a_xv, [_order_lit(inst, e, z, x) for z in rest])
            edges[(x, v)] = a_xv
        for x, y in combinations(xs, 2):
            between = []
            for z in xs:
                if z in (x, y):
                    continue
                bz = inst.var("B", e, x, y, z)
                p, q = _order_lit(inst, e, x, z), _order_lit(inst, e, z, y)
                # bz <-> (p <-> q), i.e. z lies between x and y
                inst.add([-bz, -p, q])
                inst.add([-bz, p, -q])
                inst.add([bz, p, q])
                inst.add([bz, -p, -q])
                between.append(-bz)
            a_xy = inst.var("A", e, x, y)
            inst.define_and(a_xy, between)
            edges[(x, y)] = a_xy
    vertices = range(1, n + len(seg["pairs"]) + 1)
    schnyder_clauses(inst, vertices, edges)
    inst.blocks.append("drawability")
    inst.meta["crossings"] = len(seg["pairs"])
    return inst


def is_drawable_sat(prs: RotationSystem, budget=None) -> bool:
    """Drawability decided by the planarization search (False if Pi4 is present)."""
    from .solve import solve
    if core.contains_pi4(prs):
        return False
    res = solve(encode_drawability(prs), budget=budget)
    if res.status == "unknown":
        raise TimeoutError("drawability check ran out of budget")
    return res.sat


def draw(prs: RotationSystem, budget=None) -> Planarization | None:
    from .solve import solve
    if core.contains_pi4(prs):
        return None
    inst = encode_drawability(prs)
    res = solve(inst, budget=budget)
    if not res.sat:
        return None
    return extract_planarization(prs, res.model, inst)


# ---------------------------------------------------------------------------
# extraction

class PlanarizationError(AssertionError):
    pass


def extract_planarization(prs: RotationSystem, model, inst: CnfInstance | None = None) -> Planarization:
    """Read Sigma_e off a model of encode_drawability and check the result."""
    if inst is None:
        inst = encode_drawability(prs)
    seg = crossing_segments(prs)
    true = set(l for l in model if l > 0)

    def before(e, a, b):
        lit = _order_lit(inst, e, a, b)
        return (lit in true) if lit > 0 else (-lit not in true)

    sigma = {}
    adj = set()
    for e, xs in seg["X"].items():
        rank = {x: sum(before(e, z, x) for z in xs if z != x) for x in xs}
        order = sorted(xs, key=rank.get)
        if sorted(rank.values()) != list(range(len(xs))):
            raise PlanarizationError(f"order on edge {e} is not total")
        seq = (e[0], *order, e[1])
        sigma[e] = seq
        for p, q in zip(seq, seq[1:]):
            fs = frozenset((p, q))
            if fs in adj:
                raise PlanarizationError("multi-edge in planarization")
            adj.add(fs)
    pl = Planarization(prs.n, seg["pairs"], sigma, frozenset(adj))
    check_planarization(prs, pl)
    return pl


def check_planarization(prs: RotationSystem, pl: Planarization) -> None:
    """Planar, proper crossings, and the rotation of the originals is prs or its reflection."""
    n = prs.n
    if pl.num_edges != n * (n - 1) // 2 + 2 * len(pl.crossings):
        raise PlanarizationError("edge count mismatch")
    ok, emb = nx.check_planarity(pl.graph())
    if not ok:
        raise PlanarizationError("planarization is not planar")
    # neighbours of each crossing vertex, by edge
    for i, (e, f) in enumerate(pl.crossings):
        x = n + 1 + i
        nb_e, nb_f = set(), set()
        for g, nb in ((e, nb_e), (f, nb_f)):
            seq = pl.sigma[g]
            k = seq.index(x)
            nb.update((seq[k - 1], seq[k + 1]))
        cw = list(emb.neighbors_cw_order(x))
        tags = ["e" if y in nb_e else "f" for y in cw]
        if tags not in (["e", "f", "e", "f"], ["f", "e", "f", "e"]):
            raise PlanarizationError(f"crossing {x} is a touching")
    rows = []
    for u in range(1, n + 1):
        first = {}
        for v in range(1, n + 1):
            if v == u:
                continue
            seq = pl.sigma[core.edge(u, v)]
            first[seq[1] if seq[0] == u else seq[-2]] = v
        rows.append([first[y] for y in emb.neighbors_cw_order(u)])
    got = core.from_rows(n, rows)
    if got != prs and got != core.reflect(prs):
        raise PlanarizationError("embedding realizes a different rotation system")


def planarity_fixed_graph(graph) -> bool:
    """Planarity of a simple graph through the three-order SAT encoding."""
    from .solve import solve
    g = graph if isinstance(graph, nx.Graph) else nx.Graph(list(graph))
    idx = {v: i for i, v in enumerate(sorted(g.nodes, key=repr), start=1)}
    inst = CnfInstance(len(idx))
    edges = {}
    for p, q in g.edges:
        a, b = sorted((idx[p], idx[q]))
        if a != b:
            edges[(a, b)] = None
    if len(idx) < 3:
        return True
    schnyder_clauses(inst, idx.values(), edges)
    return solve(inst).sat
