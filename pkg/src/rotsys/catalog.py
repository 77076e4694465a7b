"""Forbidden subconfigurations and reference systems, derived from scratch.

Nothing here is typed in by hand: the obstructions are found by enumerating
small pre-rotation systems and testing them with the planarization search
and the definitional convexity tests.  The result is cached as JSON lines
in ``data/catalog.jsonl``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, fields
from functools import lru_cache
from itertools import combinations, permutations, product
from pathlib import Path

from . import core, geometry
from .core import RotationSystem

log = logging.getLogger(__name__)

DATA = Path(__file__).with_name("data") / "catalog.jsonl"


@dataclass(frozen=True)
class ObstructionCatalog:
    pi4_obstruction: RotationSystem
    pi5A: RotationSystem
    pi5B: RotationSystem
    convex5_1: RotationSystem
    convex5_2: RotationSystem
    hconvex6: RotationSystem
    plane_K4: RotationSystem
    crossing_K4: RotationSystem
    convex_C5: RotationSystem
    twisted_T5: RotationSystem

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def obstructions(self) -> dict:
        return {k: v for k, v in self.items()
                if k in ("pi4_obstruction", "pi5A", "pi5B", "convex5_1", "convex5_2", "hconvex6")}


# ---------------------------------------------------------------------------
# brute-force enumeration of small pre-rotation systems

def all_pre_rotation_systems(n: int):
    """Every labeled pre-rotation system on 1..n (normalized rows)."""
    choices = []
    for v in range(1, n + 1):
        others = [u for u in range(1, n + 1) if u != v]
        first, rest = others[0], others[1:]
        choices.append([(first,) + p for p in permutations(rest)])
    for rows in product(*choices):
        yield RotationSystem(n, rows)


def canonical_classes(n: int, pred=None) -> list:
    """Sorted canonical forms of all systems on n elements satisfying pred."""
    seen = set()
    for rs in all_pre_rotation_systems(n):
        if pred is not None and not pred(rs):
            continue
        seen.add(core.canonical_form(rs))
    return sorted(seen, key=lambda r: r.vector)


# ---------------------------------------------------------------------------
# bootstrap

class _Partial:
    """Attribute bag standing in for the catalog while it is being built."""

    def __init__(self, **kw):
        self.__dict__.update(kw)


def _t5_reference(t5: RotationSystem) -> RotationSystem:
    """Relabeling of T5 in which {1,5} lies on no plane Hamiltonian path.

    The drawing has exactly one such edge; we take the lexicographically
    smallest relabeling moving it to {1,5}.
    """
    bad = [e for e in combinations(range(1, 6), 2)
           if core.brute_force_plane_hamiltonian(t5, "path", required_edge=e) is None]
    if len(bad) != 1:
        raise AssertionError(f"expected one edge of T5 outside all plane paths, got {bad}")
    best = None
    for p in permutations(range(1, 6)):
        sigma = (0,) + p
        e = {sigma[bad[0][0]], sigma[bad[0][1]]}
        if e != {1, 5}:
            continue
        cand = core.relabel(t5, sigma)
        if best is None or cand.vector < best.vector:
            best = cand
    return best


def bootstrap_catalog(hconvex_n: int = 6) -> ObstructionCatalog:
    """Derive every catalog entry."""
    from . import draw
    from .encode import EncodeOptions, new_instance
    from .solve import enumerate_all

    fours = canonical_classes(4)
    pi4 = [rs for rs in fours if core.contains_pi4(rs)]
    if len(fours) != 3 or len(pi4) != 1:
        raise AssertionError("unexpected 4-element classes")

    fives = canonical_classes(5, lambda r: not core.contains_pi4(r))
    drawable = [rs for rs in fives if draw.is_drawable_sat(rs)]
    bad5 = [rs for rs in fives if rs not in drawable]
    log.info("n=5: %d Pi4-free classes, %d drawable", len(fives), len(drawable))
    if len(bad5) != 2:
        raise AssertionError(f"expected 2 non-drawable 5-systems, got {len(bad5)}")

    nonconvex = [rs for rs in drawable if not core.is_convex_definitional(rs)]
    if len(nonconvex) != 2:
        raise AssertionError(f"expected 2 non-convex 5-systems, got {len(nonconvex)}")
    # convex5_1 is the one with five crossings (the twisted drawing)
    nonconvex.sort(key=lambda r: (-len(core.crossing_relation(r)), r.vector))
    t5 = nonconvex[0]
    if len(core.crossing_relation(t5)) != 5 or len(core.crossing_relation(nonconvex[1])) == 5:
        raise AssertionError("could not single out T5")

    partial = _Partial(pi5A=bad5[0], pi5B=bad5[1], convex5_1=nonconvex[0], convex5_2=nonconvex[1])
    inst = new_instance(hconvex_n, EncodeOptions(convex=True), catalog=partial)
    rep = enumerate_all(inst, canonical_only=True)
    bad6 = [rs for rs in rep.systems if not core.is_hconvex_definitional(rs)]
    log.info("n=%d: %d convex classes, %d not h-convex", hconvex_n, rep.canonical, len(bad6))
    if len(bad6) != 1:
        raise AssertionError(f"expected one convex but not h-convex 6-system, got {len(bad6)}")

    return ObstructionCatalog(
        pi4_obstruction=pi4[0],
        pi5A=bad5[0],
        pi5B=bad5[1],
        convex5_1=nonconvex[0],
        convex5_2=nonconvex[1],
        hconvex6=bad6[0],
        plane_K4=core.canonical_form(core.rotation_from_points(core._K4_POINTS["plane"])),
        crossing_K4=core.canonical_form(core.rotation_from_points(core._K4_POINTS["crossing"])),
        convex_C5=core.rotation_from_points(geometry.convex_position(5)),
        twisted_T5=_t5_reference(t5),
    )


# ---------------------------------------------------------------------------
# persistence

def dump_catalog(cat: ObstructionCatalog, path=DATA) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        for name, rs in cat.items():
            rec = {"name": name, **rs.to_json()}
            fh.write(json.dumps(rec) + "\n")


def read_catalog(path=DATA) -> ObstructionCatalog:
    entries = {}
    with open(path, encoding="ascii") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                entries[rec["name"]] = core.from_rows(rec["n"], rec["rows"])
    return ObstructionCatalog(**entries)


@lru_cache(maxsize=None)
def load_catalog() -> ObstructionCatalog:
    """The persisted catalog, bootstrapping (and persisting) it if missing."""
    if DATA.exists():
        return read_catalog(DATA)
    cat = bootstrap_catalog()
    try:
        dump_catalog(cat, DATA)
    except OSError:
        log.warning("could not persist catalog to %s", DATA)
    return cat
