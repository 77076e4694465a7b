"""Reproduction battery: one check per acceptance criterion, plus extended runs.

Each check returns ``(ok, detail)``; :func:`run_suite` times them and
collects :class:`CheckResult` rows.  Corpora are cached per process.
"""

from __future__ import annotations

import logging
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import core, draw, geometry, hamconvex
from .catalog import canonical_classes, load_catalog
from .encode import (EncodeOptions, assert_all_edges_crossed, assert_empty_triangles_atmost,
                     forbid_plane_hamiltonian_2n3, forbid_plane_hamiltonian_cycle, new_instance)
from .solve import UNSAT, decode, enumerate_all, enumerate_by_extension, solve

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    number: int | str
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"[{tag}] {self.number:>2} {self.name:<22} {self.seconds:8.1f}s  {self.detail}"


CHECKS: dict = {}


def check(number, name):
    def deco(fn):
        CHECKS[number] = (name, fn)
        return fn
    return deco


# ---------------------------------------------------------------------------
# cached corpora

@lru_cache(maxsize=None)
def corpus(n: int, convex: bool = False, hconvex: bool = False) -> tuple:
    opts = EncodeOptions(convex=convex or hconvex, hconvex=hconvex)
    if n <= 6:
        return tuple(enumerate_all(new_instance(n, opts), canonical_only=True).systems)
    return tuple(enumerate_by_extension(n, opts, parents=corpus(n - 1, convex, hconvex)))


def _pool_map(fn, items, jobs):
    if jobs <= 1:
        return list(map(fn, items))
    with ProcessPoolExecutor(jobs) as ex:
        return list(ex.map(fn, items, chunksize=1))


def _status(inst):
    return solve(inst).status


# ---------------------------------------------------------------------------
# criteria

@check(1, "classification")
def classification(jobs=1):
    got = {
        "n4 v4": len(corpus_relaxed(4, "v4")),
        "n5 v5": len(corpus_relaxed(5, "v5")),
        "n5": len(corpus(5)),
        "n6": len(corpus(6)),
    }
    want = {"n4 v4": 3, "n5 v5": 7, "n5": 5, "n6": 102}
    return got == want, " ".join(f"{k}={v}" for k, v in got.items())


@lru_cache(maxsize=None)
def corpus_relaxed(n, level):
    return tuple(enumerate_all(new_instance(n, EncodeOptions.relaxed(level)),
                               canonical_only=True).systems)


def _agree(rs):
    return draw.is_drawable_sat(rs), core.is_drawable(rs)


@check(2, "drawability-agreement")
def drawability_agreement(jobs=1):
    five = corpus_relaxed(5, "v5")
    six = corpus(6)
    r5 = _pool_map(_agree, five, jobs)
    r6 = _pool_map(_agree, six, jobs)
    sat5 = sum(a for a, _ in r5)
    ok = all(a == b for a, b in r5 + r6) and sat5 == 5 and len(r5) == 7 \
        and len(r6) == 102 and all(a for a, _ in r6)
    return ok, f"n5 sat={sat5}/unsat={len(r5) - sat5} n6 sat={sum(a for a, _ in r6)}/{len(r6)}"


def _forbid_hc(n):
    inst = new_instance(n)
    forbid_plane_hamiltonian_cycle(inst)
    return n, solve(inst).status


@check(3, "rafla-small")
def rafla_small(jobs=1, ns=range(3, 9)):
    res = dict(_pool_map(_forbid_hc, list(ns), jobs))
    return all(s == UNSAT for s in res.values()), " ".join(f"n{n}={s}" for n, s in sorted(res.items()))


def _forbid_2n3(n):
    inst = new_instance(n)
    forbid_plane_hamiltonian_2n3(inst)
    return n, solve(inst).status


@check(4, "hc-2n-3")
def hc_2n3(jobs=1, ns=range(4, 8)):
    res = dict(_pool_map(_forbid_2n3, list(ns), jobs))
    return all(s == UNSAT for s in res.values()), " ".join(f"n{n}={s}" for n, s in sorted(res.items()))


def _aec(args):
    n, convex = args
    inst = new_instance(n, EncodeOptions(convex=convex))
    assert_all_edges_crossed(inst)
    r = solve(inst)
    witness_ok = None
    if r.sat:
        rs = decode(inst, r.model)
        witness_ok = core.is_drawable(rs) and not core.has_uncrossed_edge(rs)
    return (n, convex), r.status, witness_ok


@check(5, "uncrossed-edges")
def uncrossed_edges(jobs=1):
    tasks = [(n, False) for n in range(4, 9)] + [(8, True)]
    res = _pool_map(_aec, tasks, jobs)
    ok = True
    parts = []
    for (n, convex), status, wit in res:
        want = "sat" if (n == 8 and not convex) else UNSAT
        ok &= status == want
        if status == "sat":
            ok &= bool(wit)
        parts.append(f"{'c' if convex else ''}n{n}={status}")
    return ok, " ".join(parts)


def _etupp(args):
    n, k = args
    inst = new_instance(n)
    assert_empty_triangles_atmost(inst, k)
    r = solve(inst)
    recount = None
    if r.sat:
        recount = core.empty_triangles(decode(inst, r.model))[0]
    return (n, k), r.status, recount


@check(6, "empty-triangles")
def empty_triangles(jobs=1, ns=range(4, 8)):
    tasks = [(n, 2 * n - 5) for n in ns] + [(n, 2 * n - 4) for n in ns]
    ok = True
    parts = []
    for (n, k), status, recount in _pool_map(_etupp, tasks, jobs):
        if k == 2 * n - 5:
            ok &= status == UNSAT
            parts.append(f"n{n}<={k}:{status}")
        else:
            # the bound 2n-5 is infeasible, so a model at 2n-4 has exactly 2n-4
            ok &= status == "sat" and recount == k
            parts.append(f"n{n}<={k}:{status}/{recount}")
    return ok, " ".join(parts)


@check(7, "nested-lemma")
def nested_lemma(jobs=1):
    p1 = all(hamconvex.check_nested_lemma(rs, 1) for n in (5, 6, 7) for rs in corpus(n, convex=True))
    p21 = all(hamconvex.check_nested_lemma(rs, (2, 1)) for rs in corpus(7, convex=True))
    p22 = all(hamconvex.check_nested_lemma(rs, (2, 2)) for rs in corpus(7, convex=True))
    p23 = all(hamconvex.check_nested_lemma(rs, (2, 3)) for rs in corpus(6, convex=True))
    sizes = "/".join(str(len(corpus(n, convex=True))) for n in (5, 6, 7))
    return p1 and p21 and p22 and p23, f"part1={p1} 2.1={p21} 2.2={p22} 2.3={p23} corpora {sizes}"


def _verify_all_stars(rs, hconvex=False):
    for s in range(1, rs.n + 1):
        res = hamconvex.plane_hc_convex(rs, s, verify=False)
        if not hamconvex.verify_hc(rs, s, res, hconvex=hconvex)["ok"]:
            return False
    return True


def geometric_timing(sizes=(100, 200, 400), stars=5, seed=0, repeats=3):
    """Median time per construction for random point sets; returns (all_ok, {n: seconds})."""
    ok = True
    times = {}
    for n in sizes:
        rs = core.rotation_from_points(geometry.random_points(n, rng=seed + n))
        samples = []
        for s in random.Random(seed).sample(range(1, n + 1), stars):
            best = None
            for _ in range(repeats):
                t0 = time.perf_counter()
                res = hamconvex.plane_hc_convex(rs, s, verify=False)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            samples.append(best)
            ok &= hamconvex.verify_hc(rs, s, res)["ok"]
        times[n] = statistics.median(samples)
    return ok, times


@check(8, "algorithm1")
def algorithm1(jobs=1, max_n=8):
    counts = []
    ok = True
    for n in range(3, max_n + 1):
        sy = corpus(n, convex=True)
        ok &= all(_verify_all_stars(rs) for rs in sy)
        counts.append(f"n{n}:{len(sy)}")
    hc_ok = True
    for n in range(3, max_n + 1):
        hc_ok &= all(_verify_all_stars(rs, hconvex=True) for rs in corpus(n, hconvex=True))
    geo_ok, times = geometric_timing()
    ns = sorted(times)
    ratios = [times[b] / times[a] for a, b in zip(ns, ns[1:])]
    scale_ok = all(r <= 6 for r in ratios)
    detail = (f"convex {' '.join(counts)} hconvex-rotation={hc_ok} geometric={geo_ok} "
              f"ratios={'/'.join(f'{r:.2f}' for r in ratios)}")
    return ok and hc_ok and geo_ok and scale_ok, detail


@check(9, "hamiltonian-path")
def hamiltonian_path(jobs=1, max_n=7):
    total = 0
    for n in range(3, max_n + 1):
        for rs in corpus(n, convex=True):
            for u, v in combinations(range(1, n + 1), 2):
                for e in ((u, v), (v, u)):
                    hamconvex.plane_hp_with_edge(rs, e)
                    total += 1
    return True, f"{total} (system, oriented edge) pairs verified"


@check(10, "crossing-pairs")
def crossing_pairs(jobs=1):
    from .cli import check_crossing_pairs
    ok4 = check_crossing_pairs(4)
    ok5 = check_crossing_pairs(5)
    return ok4 and ok5, f"n4={ok4} n5={ok5}"


@check(11, "oracle-equivalence")
def oracle_equivalence(jobs=1):
    preds = {
        "drawable": (EncodeOptions(), core.is_drawable),
        "convex": (EncodeOptions(convex=True),
                   lambda r: core.is_drawable(r) and core.is_convex_definitional(r)),
        "hconvex": (EncodeOptions(hconvex=True),
                    lambda r: core.is_drawable(r) and core.is_hconvex_definitional(r)),
    }
    ok = True
    parts = []
    for n in (4, 5):
        brute_all = {}
        for name, (opts, pred) in preds.items():
            sat = set(enumerate_all(new_instance(n, opts), canonical_only=True).systems)
            brute = set(canonical_classes(n, pred))
            brute_all[name] = brute
            ok &= sat == brute
            parts.append(f"n{n} {name}={len(sat)}/{len(brute)}")
    return ok, " ".join(parts)


@check(12, "fixed-planarity")
def fixed_planarity(jobs=1):
    import networkx as nx
    got = {
        "K4": draw.planarity_fixed_graph(nx.complete_graph(4)),
        "K5": draw.planarity_fixed_graph(nx.complete_graph(5)),
        "K33": draw.planarity_fixed_graph(nx.complete_bipartite_graph(3, 3)),
    }
    return got == {"K4": True, "K5": False, "K33": False}, " ".join(f"{k}={v}" for k, v in got.items())


def good_consecutive_edges(rs, star):
    """Rotation-consecutive edges around star crossing no star edge, as rotation labels.

    The rotation is read starting right after the largest run of
    star-crossing edges, so a block of good edges comes out as {1,2},{2,3},...
    """
    k = rs.n - 1
    best = None
    for shift in range(k):
        rel, order = hamconvex._rotation_relabel(rs, star, shift)
        good = sorted(core.edge(v, v % k + 1) for v in range(1, rs.n)
                      if not hamconvex.is_star_crossing(rel, v, v % k + 1, rs.n))
        key = (max((max(e) for e in good), default=0), good)
        if best is None or key < best[0]:
            best = (key, good)
    return best[1]


def literal_uncrossed(rs, star):
    """All non-star edges crossing no star edge, in the given labels."""
    others = [v for v in range(1, rs.n + 1) if v != star]
    return [core.edge(a, b) for a, b in combinations(others, 2)
            if not hamconvex.is_star_crossing(rs, a, b, star)]


@check(13, "counterexamples")
def counterexamples(jobs=1):
    cat = load_catalog()
    c5 = core.brute_force_plane_hamiltonian(cat.convex_C5, "cycle", required_edge=(1, 3))
    t5 = core.brute_force_plane_hamiltonian(cat.twisted_T5, "path", required_edge=(1, 5))
    good = good_consecutive_edges(cat.twisted_T5, 5)
    ok = c5 is None and t5 is None and good == [(1, 2), (2, 3)]
    return ok, (f"C5 cycle through 13: {c5} | T5 path through 15: {t5} | "
                f"T5 star 5 good consecutive: {good} (all uncrossed: "
                f"{literal_uncrossed(cat.twisted_T5, 5)})")


# ---------------------------------------------------------------------------
# extended runs (hours to days)

def extended_rafla(jobs=1):
    return rafla_small(jobs, ns=(9, 10))


def extended_2n3(jobs=1):
    return hc_2n3(jobs, ns=(8,))


def extended_empty_triangles(jobs=1):
    return empty_triangles(jobs, ns=(8, 9))


def extended_drawability(jobs=1):
    """Obstruction verdict vs planarization search on every Pi4-free class with n <= 6."""
    systems = list(corpus_relaxed(5, "v5")) + list(corpus_relaxed(6, "v5"))
    res = _pool_map(_agree, systems, jobs)
    bad = sum(a != b for a, b in res)
    return bad == 0, f"{len(systems)} classes, {bad} disagreements"


EXTENDED = {
    "rafla-extended": extended_rafla,
    "hc2n3-extended": extended_2n3,
    "empty-triangles-extended": extended_empty_triangles,
    "drawability-full": extended_drawability,
}

SUITES = {
    "classification": [1],
    "drawability": [2],
    "rafla-small": [3],
    "hc2n3": [4],
    "uncrossed": [5],
    "empty-triangles": [6],
    "nested-lemma": [7],
    "algorithm1": [8],
    "hampath": [9],
    "crossing-pairs": [10],
    "oracle": [11],
    "planarity": [12],
    "counterexamples": [13],
    "all": list(range(1, 14)),
    "quick": [1, 7, 9, 10, 11, 12, 13],
}


def run_check(key, jobs=1) -> CheckResult:
    if key in CHECKS:
        name, fn = CHECKS[key]
    else:
        name, fn = key, EXTENDED[key]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(jobs=jobs)
    except Exception as exc:  # a crash is a failed check, not a dead battery
        log.exception("check %s crashed", key)
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(key, name, bool(ok), detail, time.perf_counter() - t0)


def run_suite(name: str, jobs: int = 1, echo=None) -> list:
    if name in EXTENDED:
        keys = [name]
    elif name in SUITES:
        keys = SUITES[name]
    else:
        raise KeyError(f"unknown suite {name!r}")
    out = []
    for key in keys:
        res = run_check(key, jobs)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
