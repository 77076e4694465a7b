"""Plane Hamiltonian cycles avoiding a spanning star in convex drawings.

Vertices other than the star vertex are worked with in "rotation labels":
1..n-1 in counterclockwise order around the star vertex, which gets label
n.  An edge {v, v+1} (indices mod n-1) is bad if it crosses a star edge
{w, n}; such a w is a witness.  With at most one bad edge the rotation
order itself gives the cycle.  Otherwise the labels are shifted so that
all witnesses come before all bad edges and the cycle is built block by
block, weaving between the witness side L_i and the bad-edge side R_i.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations

from . import core
from .core import RotationSystem, edge

log = logging.getLogger(__name__)

NEG_INF = float("-inf")


class NotConvexError(ValueError):
    """The bad-edge structure contradicts convexity."""


class VerificationError(AssertionError):
    pass


@dataclass
class BadEdgeDecomposition:
    star: int
    order: tuple                 # order[j] = original vertex with rotation label j (order[0] unused)
    bad: list                    # [(v, wL, wR)], rotation labels, sorted by v
    witnesses: dict              # v -> sorted witnesses of {v, v+1}
    shift: int = 0
    L: list = field(default_factory=list)   # L[i] = (lo, hi) inclusive, i = 0..m-1
    R: list = field(default_factory=list)   # R[i] = (lo, hi) inclusive, i = 1..m-1 (R[0] unused)
    l: list = field(default_factory=list)   # l[i][r] for r in R[i] and the seed r = v_i

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def m(self) -> int:
        return len(self.bad)

    def original(self, x: int) -> int:
        return self.star if x == self.n else self.order[x]

    def bad_edges_original(self) -> list:
        k = self.n - 1
        return [edge(self.original(v), self.original(v % k + 1)) for v, _, _ in self.bad]


@dataclass
class HamCycleResult:
    sequence: list               # original labels
    closed: bool = True
    star: int | None = None
    edges: list = field(default_factory=list)
    plane: bool | None = None
    star_avoiding: bool | None = None
    rotation_order: bool | None = None

    def __post_init__(self):
        if not self.edges:
            seq = self.sequence
            es = [edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]
            if self.closed:
                es.append(edge(seq[-1], seq[0]))
            self.edges = es


# ---------------------------------------------------------------------------
# rotation labels

def _rotation_relabel(rs: RotationSystem, star: int, shift: int = 0):
    """(relabeled system, order): star -> n, its rotation -> 1..n-1 starting after shift."""
    n = rs.n
    row = rs.row(star)
    k = n - 1
    order = (0,) + tuple(row[(j + shift) % k] for j in range(k))
    perm = {order[j]: j for j in range(1, n)}
    perm[star] = n
    return core.relabel(rs, perm), order


def _witness_sets(rs: RotationSystem) -> dict:
    """Bad edges {v, v+1} (mod n-1) of rs in rotation labels with star n."""
    n = rs.n
    k = n - 1
    out = {}
    for v in range(1, n):
        u = v % k + 1
        ws = [w for w in range(1, n) if w != v and w != u and core.crosses(rs, (v, u), (w, n))]
        if ws:
            out[v] = ws
    return out


def find_bad_edges(rs: RotationSystem, star: int) -> BadEdgeDecomposition:
    """Bad edges around star, shifted for sidedness when there are two or more."""
    if not 1 <= star <= rs.n:
        raise ValueError("star vertex out of range")
    if rs.n < 3:
        raise ValueError("need n >= 3")
    rel, order = _rotation_relabel(rs, star)
    wit = _witness_sets(rel)
    if len(wit) <= 1:
        bad = [(v, ws[0], ws[-1]) for v, ws in sorted(wit.items())]
        return BadEdgeDecomposition(star, order, bad, wit)

    k = rs.n - 1
    mark = {}
    for v, ws in wit.items():
        for x in (v, v % k + 1):
            mark[x] = "B"
    for ws in wit.values():
        for w in ws:
            if mark.get(w) == "B":
                raise NotConvexError(f"vertex {order[w]} is both a witness and on a bad edge")
            mark[w] = "W"
    # the last bad-edge vertex before the witness block, going counterclockwise
    ends = []
    for x in range(1, k + 1):
        if mark.get(x) != "B":
            continue
        y = x % k + 1
        while y not in mark:
            y = y % k + 1
        if mark[y] == "W":
            ends.append(x)
    if len(ends) != 1:
        raise NotConvexError("bad edges and witnesses are not in two blocks")
    shift = ends[0] % k        # label ends[0] becomes n-1
    rel, order = _rotation_relabel(rs, star, shift)
    wit = _witness_sets(rel)
    bad = [(v, ws[0], ws[-1]) for v, ws in sorted(wit.items())]
    dec = BadEdgeDecomposition(star, order, bad, wit, shift)
    _check_structure(dec)
    _blocks(dec)
    dec.l = [None] + [_l_table(rel, dec, i) for i in range(1, dec.m)]
    for i in range(1, dec.m):
        vals = [dec.l[i][r] for r in range(dec.R[i][0], dec.R[i][1] + 1)]
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise NotConvexError("l-table is not monotone")
    for v, wl, wr in bad:
        for a, b in ((wl, v + 1), (wr, v)):
            if a != b and is_star_crossing(rel, a, b, rs.n):
                raise NotConvexError(f"edge {{{a},{b}}} is star-crossing")
    return dec


def is_star_crossing(rs: RotationSystem, a: int, b: int, star: int) -> bool:
    return any(core.crosses(rs, (a, b), (w, star)) for w in range(1, rs.n + 1)
               if w not in (a, b, star))


def _check_structure(dec: BadEdgeDecomposition) -> None:
    n = dec.n
    bad = dec.bad
    if bad[-1][0] != n - 2:
        raise NotConvexError("last bad edge is not {n-2, n-1} after the shift")
    for v, wl, wr in bad:
        if not wr < v:
            raise NotConvexError("sidedness fails")
    for (v, wl, wr), (v2, wl2, wr2) in zip(bad, bad[1:]):
        if not wr2 < wl:
            raise NotConvexError("nestedness fails")
    if not (1 < bad[0][0] and bad[-1][1] >= 1):
        raise NotConvexError("witness chain is broken")


def _blocks(dec: BadEdgeDecomposition) -> None:
    bad = dec.bad
    m = dec.m
    v1, _, w1R = bad[0]
    dec.L = [(w1R + 1, v1 - 1)]
    dec.R = [None]
    for i in range(1, m):
        vi, wiL, _ = bad[i - 1]
        vj, _, wjR = bad[i]
        dec.L.append((wjR + 1, wiL - 1))
        dec.R.append((vi + 1, vj))


def _has_cross_from_below(rel, lo, lp, r, limit) -> bool:
    """Does some l' in [lo, limit) have {l', r} crossing {lp, n}?"""
    n = rel.n
    for x in range(lo, limit):
        if core.crosses(rel, (x, r), (lp, n)):
            return True
    return False


def _l_table(rel: RotationSystem, dec: BadEdgeDecomposition, i: int) -> dict:
    """l(r) for r in R_i by the two-pointer scan over L_i, seeded with l(v_i) = w_i^L."""
    lo, hi = dec.L[i]
    rlo, rhi = dec.R[i]
    vi, wiL, _ = dec.bad[i - 1]
    table = {vi: wiL}
    prev = wiL
    cand = hi
    for r in range(rlo, rhi + 1):
        if prev == NEG_INF:
            table[r] = NEG_INF
            continue
        cand = min(cand, prev)
        found = NEG_INF
        while cand >= lo:
            if _has_cross_from_below(rel, lo, cand, r, min(cand, prev)):
                found = cand
                break
            cand -= 1
        table[r] = found
        prev = found
    return table


def l_table_naive(rs: RotationSystem, dec: BadEdgeDecomposition, i: int) -> dict:
    """Direct evaluation of the recursion; used to cross-check the scan."""
    rel, _ = _rotation_relabel(rs, dec.star, dec.shift)
    n = rel.n
    lo, hi = dec.L[i]
    rlo, rhi = dec.R[i]
    vi, wiL, _ = dec.bad[i - 1]
    table = {vi: wiL}
    prev = wiL
    for r in range(rlo, rhi + 1):
        best = NEG_INF
        for l in range(lo, hi + 1):
            if any(core.crosses(rel, (lp, r), (l, n)) for lp in range(lo, hi + 1)
                   if lp < l and lp < prev):
                best = max(best, l)
        table[r] = best
        prev = best
    return table


# ---------------------------------------------------------------------------
# the construction

def _cycle_in_rotation_labels(dec: BadEdgeDecomposition) -> list:
    n = dec.n
    star = n
    bad = dec.bad
    m = dec.m
    if m == 0:
        return [star] + list(range(1, n))
    if m == 1:
        v = bad[0][0]
        k = n - 1
        return [star] + [(v + j) % k + 1 for j in range(k)]

    seq = [star, bad[0][0]]
    u = [None] * (m + 1)
    u[1] = bad[0][0] - 1

    def descend(a, b):
        # a, a-1, ..., b
        seq.extend(range(a, b - 1, -1))

    for i in range(1, m):
        vi = bad[i - 1][0]
        vnext = bad[i][0]
        wnR = bad[i][2]
        l = dec.l[i]
        # edge {v_i, u_i}: the descent from u_i starts at the next step
        r = vi + 1
        ui = u[i]
        while r <= vnext:
            if l[r] == NEG_INF:
                descend(ui, wnR + 1)
                seq.extend(range(r, vnext + 1))
                u[i + 1] = wnR
                r = float("inf")
            else:
                descend(ui, l[r] + 1)
                rp = r
                while rp + 1 <= vnext and l[rp + 1] == l[r]:
                    rp += 1
                seq.extend(range(r, rp + 1))
                if rp < vnext:
                    # edge {r', l(r')}: the next descent starts at l(r')
                    ui = l[rp]
                else:
                    u[i + 1] = l[vnext]
                r = rp + 1
    descend(u[m], 1)
    seq.append(bad[-1][0] + 1)
    return seq


def plane_hc_convex(rs: RotationSystem, star: int, verify: bool = True) -> HamCycleResult:
    """Plane Hamiltonian cycle of a convex drawing that crosses no edge at star."""
    dec = find_bad_edges(rs, star)
    seq = _cycle_in_rotation_labels(dec)
    if sorted(seq) != list(range(1, rs.n + 1)):
        raise VerificationError(f"construction is not Hamiltonian: {seq}")
    res = HamCycleResult([dec.original(x) for x in seq], True, star)
    if verify:
        rep = verify_hc(rs, star, res)
        if not rep["ok"]:
            raise VerificationError(f"cycle fails verification: {rep}")
    return res


# ---------------------------------------------------------------------------
# independent checks

def _is_hamiltonian(n, seq) -> bool:
    return len(seq) == n and sorted(seq) == list(range(1, n + 1))


def _pairwise_plane(rs, edges) -> bool:
    for e, f in combinations(edges, 2):
        if len(set(e) | set(f)) == 4 and core.crosses(rs, e, f):
            return False
    return True


def follows_rotation(rs: RotationSystem, star: int, seq) -> bool:
    """Whether the cycle visits the neighbours of star in rotation order (either direction)."""
    k = rs.n - 1
    i = seq.index(star)
    path = seq[i + 1:] + seq[:i]
    row = list(rs.row(star))
    j = row.index(path[0])
    fwd = [row[(j + t) % k] for t in range(k)]
    bwd = [row[(j - t) % k] for t in range(k)]
    return path == fwd or path == bwd


def verify_hc(rs: RotationSystem, star: int, result: HamCycleResult, hconvex: bool | None = None) -> dict:
    """Check a claimed cycle using only the crossing predicate."""
    n = rs.n
    seq = list(result.sequence)
    rep = {"hamiltonian": _is_hamiltonian(n, seq)}
    if not rep["hamiltonian"]:
        rep["ok"] = False
        return rep
    cyc = [edge(seq[i], seq[(i + 1) % n]) for i in range(n)]
    stars = [edge(star, v) for v in range(1, n + 1) if v != star]
    rep["plane"] = _pairwise_plane(rs, cyc)
    rep["star_avoiding"] = not any(core.crosses(rs, e, s) for e in cyc for s in stars
                                   if len(set(e) | set(s)) == 4)
    union = set(cyc) | set(stars)
    rep["union_size"] = len(union)
    rep["union_plane"] = len(union) == 2 * n - 3 and _pairwise_plane(rs, sorted(union))
    rep["rotation_order"] = follows_rotation(rs, star, seq)
    ok = rep["plane"] and rep["star_avoiding"] and rep["union_plane"]
    if hconvex:
        ok = ok and rep["rotation_order"]
    rep["ok"] = ok
    result.plane = rep["plane"]
    result.star_avoiding = rep["star_avoiding"]
    result.rotation_order = rep["rotation_order"]
    return rep


def verify_path(rs: RotationSystem, seq, e) -> dict:
    n = rs.n
    rep = {"hamiltonian": _is_hamiltonian(n, seq)}
    es = [edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]
    rep["contains_edge"] = edge(*e) in es
    rep["plane"] = _pairwise_plane(rs, es)
    rep["ok"] = all(rep.values())
    return rep


def plane_hp_with_edge(rs: RotationSystem, e, verify: bool = True) -> HamCycleResult:
    """Plane Hamiltonian path through e = {u, v}, rerouted from the star-avoiding cycle at u."""
    u, v = e
    if u == v:
        raise ValueError("not an edge")
    cyc = plane_hc_convex(rs, u, verify=verify).sequence
    i0 = cyc.index(u)
    x = cyc[i0 + 1:] + cyc[:i0]          # u, x_1, ..., x_{n-1}
    i = x.index(v)
    if i == 0:
        path = [u] + x
    elif i == len(x) - 1:
        path = x + [u]
    else:
        path = x[i - 1::-1] + [u] + x[i:]
    res = HamCycleResult(path, closed=False, star=u)
    if verify:
        rep = verify_path(rs, path, e)
        if not rep["ok"]:
            raise VerificationError(f"path fails verification: {rep}")
        res.plane = True
    return res


# ---------------------------------------------------------------------------
# machine checks of the nesting lemma

def _cyclic_order(seq, k) -> bool:
    """Whether the distinct labels in seq appear in this cyclic order in 1..k."""
    if len(set(seq)) != len(seq):
        return False
    start = seq[0]
    pos = [(x - start) % k for x in seq]
    return pos == sorted(pos)


def check_nested_lemma(rs: RotationSystem, part) -> bool:
    """Part 1, or part (2, case) of the bad-edge nesting lemma, for every star vertex."""
    n = rs.n
    k = n - 1
    for star in range(1, n + 1):
        rel, _ = _rotation_relabel(rs, star)
        wit = _witness_sets(rel)
        for v, vp in combinations(sorted(wit), 2):
            for a, b in ((v, vp), (vp, v)):
                for w in wit[a]:
                    for wp in wit[b]:
                        fwd = _cyclic_order([wp, w, a, b], k)
                        if part == 1:
                            if w == wp:
                                return False
                            if not (fwd or _cyclic_order([b, a, w, wp], k)):
                                return False
                            continue
                        if not fwd:
                            continue
                        a1, b1 = a % k + 1, b % k + 1
                        case, which = part
                        if case in (1, 2) and a1 == b:
                            continue
                        if case == 3 and a1 != b:
                            continue
                        target = b if case == 1 else b1
                        if target in (a, a1, n):
                            return False
                        side = core.SideRef.of(a, a1, n)
                        if not core.side_contains_vertex(rel, side, w):
                            side = side.other
                        if core.side_contains_vertex(rel, side, target):
                            return False
    return True


def nested_lemma_part(spec: str):
    """'1', '2.1', '2.2' or '2.3' -> the part argument of check_nested_lemma."""
    if spec == "1":
        return 1
    major, case = spec.split(".")
    if major != "2" or case not in ("1", "2", "3"):
        raise ValueError(f"unknown lemma part {spec!r}")
    return (2, int(case))


# ---------------------------------------------------------------------------
# batch reports

def batch_report(systems, stars=None, hconvex_flags=None):
    """Yield one JSON-ready record per (system, star vertex)."""
    for idx, rs in enumerate(systems):
        hc = None if hconvex_flags is None else hconvex_flags[idx]
        for star in (stars or range(1, rs.n + 1)):
            rec = {"index": idx, "rows": [list(r) for r in rs.rows], "star": star}
            try:
                res = plane_hc_convex(rs, star, verify=False)
                rep = verify_hc(rs, star, res, hconvex=hc)
                rec.update(rep)
                rec["cycle"] = res.sequence
            except (NotConvexError, VerificationError) as exc:
                rec.update({"ok": False, "error": str(exc)})
            yield rec


def write_batch_report(records, fh) -> bool:
    ok = True
    for rec in records:
        ok = ok and rec["ok"]
        fh.write(json.dumps(rec) + "\n")
    return ok
