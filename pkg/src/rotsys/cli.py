"""Command line entry point: ``rotsys <subcommand> ...``.

Exit codes: 0 completed as expected, 1 property violated or unexpected
solver status, 2 configuration or tool error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from . import core

log = logging.getLogger("rotsys")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

TASK_FLAGS = ("enumerate", "forbid_hc", "forbid_hc2n3", "unextendable_hc", "matching",
              "all_edges_crossed", "empty_at_most", "check_crossing_pairs", "nested_lemma")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    convex: bool = False
    hconvex: bool = False
    natural: bool = True
    v4: bool = False
    v5: bool = False
    enumerate: bool = False
    canonical: bool = False
    forbid_hc: bool = False
    forbid_hc2n3: bool = False
    unextendable_hc: bool = False
    matching: int | None = None
    all_edges_crossed: bool = False
    empty_at_most: int | None = None
    check_crossing_pairs: bool = False
    nested_lemma: str | None = None
    expect: str | None = None
    instance_out: str | None = None
    varmap_out: str | None = None
    corpus_in: str | None = None
    corpus_out: str | None = None
    report: str | None = None
    cert_dir: str | None = None
    budget: float | None = None
    oracle_bound: int = 10
    solver: str = "cadical153"
    star: int | None = None
    all_stars: bool = False
    edge: tuple | None = None
    random_points: int | None = None
    seed: int = 0
    suite: str | None = None
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def tasks(self) -> list:
        out = []
        for name in TASK_FLAGS:
            val = getattr(self, name)
            if val not in (None, False):
                out.append(name)
        return out

    def validate(self) -> None:
        """Reject flag combinations the encoders would reject, before any work."""
        tasks = self.tasks()
        if self.subcommand in ("find", "certify"):
            if self.n is None or self.n < 3:
                raise ConfigError("n must be at least 3")
            if len(tasks) > 1:
                raise ConfigError(f"task flags are mutually exclusive: {', '.join(tasks)}")
            if self.v4 and self.v5:
                raise ConfigError("--v4 and --v5 are mutually exclusive")
            if (self.convex or self.hconvex) and (self.v4 or self.v5):
                raise ConfigError("convexity needs the full drawability block")
            fixed = self.unextendable_hc or (self.matching or 0) >= 1
            if fixed and self.natural:
                raise ConfigError("fixed-cycle tasks need --no-natural")
            if self.canonical and not self.natural:
                raise ConfigError("--canonical needs the natural labeling block")
            if self.canonical and not self.enumerate:
                raise ConfigError("--canonical only applies with --enumerate")
            if self.matching is not None and not 0 <= 2 * self.matching <= self.n:
                raise ConfigError("matching size out of range")
            if self.empty_at_most is not None and self.empty_at_most < 0:
                raise ConfigError("--empty-at-most needs k >= 0")
            if self.nested_lemma is not None:
                from .hamconvex import nested_lemma_part
                try:
                    nested_lemma_part(self.nested_lemma)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
            if self.subcommand == "certify" and self.enumerate:
                raise ConfigError("certify takes a single decision instance")
            if self.expect not in (None, "sat", "unsat"):
                raise ConfigError("--expect is sat or unsat")
        if self.subcommand in ("hamcycle", "hampath", "drawability"):
            if not self.corpus_in and not self.random_points:
                raise ConfigError("need --in CORPUS or --random-points N")
            if self.subcommand == "hamcycle" and self.star is not None and self.all_stars:
                raise ConfigError("--star and --all-stars are mutually exclusive")
        if self.jobs < 1:
            raise ConfigError("--jobs must be positive")


# ---------------------------------------------------------------------------
# crossing-pair uniqueness

def check_crossing_pairs(n: int = 5) -> bool:
    """Pi4-free systems on n labeled elements sharing a crossing relation are equal or mirror images."""
    from .catalog import all_pre_rotation_systems
    groups = defaultdict(list)
    for rs in all_pre_rotation_systems(n):
        if core.contains_pi4(rs):
            continue
        groups[core.crossing_relation(rs).pairs].append(rs)
    for members in groups.values():
        first = members[0]
        allowed = {first, core.reflect(first)}
        if any(rs not in allowed for rs in members):
            return False
    return True


# ---------------------------------------------------------------------------
# subcommands

def _options(cfg: RunConfig):
    from .encode import options_from_flags
    return options_from_flags(v4=cfg.v4, v5=cfg.v5, convex=cfg.convex, hconvex=cfg.hconvex,
                              natural=cfg.natural)


def build_instance(cfg: RunConfig):
    from . import encode
    inst = encode.new_instance(cfg.n, _options(cfg))
    if cfg.forbid_hc:
        encode.forbid_plane_hamiltonian_cycle(inst, bound=cfg.oracle_bound)
    elif cfg.forbid_hc2n3:
        encode.forbid_plane_hamiltonian_2n3(inst)
    elif cfg.unextendable_hc:
        encode.assert_unextendable_fixed_hc(inst)
    elif cfg.matching is not None:
        encode.assert_matching_unavoidable(inst, cfg.matching, bound=cfg.oracle_bound)
    elif cfg.all_edges_crossed:
        encode.assert_all_edges_crossed(inst)
    elif cfg.empty_at_most is not None:
        encode.assert_empty_triangles_atmost(inst, cfg.empty_at_most)
    return inst


def _emit(cfg, rec, out):
    line = json.dumps(rec, default=str)
    out.write(line + "\n")
    if cfg.report:
        with open(cfg.report, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def _load_systems(cfg: RunConfig) -> list:
    from .solve import read_corpus
    if cfg.corpus_in:
        return read_corpus(cfg.corpus_in)
    from . import geometry
    return [core.rotation_from_points(geometry.random_points(cfg.random_points, rng=cfg.seed))]


def cmd_find(cfg: RunConfig, out) -> int:
    from .solve import (UNKNOWN, decode, enumerate_all, solve, write_corpus, write_dimacs,
                        write_varmap)
    if cfg.check_crossing_pairs:
        ok = check_crossing_pairs(cfg.n)
        _emit(cfg, {"task": "check-crossing-pairs", "n": cfg.n, "ok": ok}, out)
        return EXIT_OK if ok else EXIT_FAIL
    if cfg.nested_lemma is not None:
        return _nested(cfg, out)
    inst = build_instance(cfg)
    if cfg.instance_out:
        write_dimacs(inst, cfg.instance_out)
    if cfg.varmap_out:
        write_varmap(inst, cfg.varmap_out)
    summary = inst.summary()
    if cfg.enumerate:
        rep = enumerate_all(inst, canonical_only=cfg.canonical, solver=cfg.solver)
        if cfg.corpus_out:
            write_corpus(rep.systems, cfg.corpus_out)
            rep.corpus = cfg.corpus_out
        _emit(cfg, {"task": "enumerate", "n": cfg.n, "total": rep.total,
                    "canonical": rep.canonical if cfg.canonical else None,
                    "corpus": rep.corpus, "seconds": round(rep.seconds, 3), "instance": summary}, out)
        return EXIT_OK
    res = solve(inst, budget=cfg.budget, solver=cfg.solver)
    rec = {"task": cfg.tasks() or ["drawable"], "n": cfg.n, "status": res.status,
           "seconds": round(res.stats.get("seconds", 0.0), 3), "instance": summary}
    if res.sat:
        rs = decode(inst, res.model)
        rec["system"] = rs.to_json()
        if cfg.corpus_out:
            write_corpus([rs], cfg.corpus_out)
    _emit(cfg, rec, out)
    if res.status == UNKNOWN:
        return EXIT_FAIL
    if cfg.expect is not None and res.status != cfg.expect:
        return EXIT_FAIL
    return EXIT_OK


def _nested(cfg, out) -> int:
    from .encode import EncodeOptions, new_instance
    from .hamconvex import check_nested_lemma, nested_lemma_part
    from .solve import enumerate_all, read_corpus
    part = nested_lemma_part(cfg.nested_lemma)
    if cfg.corpus_in:
        systems = read_corpus(cfg.corpus_in)
    else:
        systems = enumerate_all(new_instance(cfg.n, EncodeOptions(convex=True)),
                                canonical_only=True).systems
    bad = [rs for rs in systems if not check_nested_lemma(rs, part)]
    _emit(cfg, {"task": "nested-lemma", "part": cfg.nested_lemma, "n": cfg.n,
                "systems": len(systems), "violations": [str(r) for r in bad]}, out)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_certify(cfg: RunConfig, out) -> int:
    from .solve import SolverError, ToolError, unsat_certificate
    inst = build_instance(cfg)
    name = f"n{cfg.n}-" + ("-".join(cfg.tasks()) or "drawable")
    try:
        rep = unsat_certificate(inst, cfg.cert_dir or ".", name)
    except ToolError as exc:
        _emit(cfg, {"task": "certify", "error": str(exc)}, out)
        return EXIT_CONFIG
    except SolverError as exc:
        _emit(cfg, {"task": "certify", "verified": False, "error": str(exc)}, out)
        return EXIT_FAIL
    _emit(cfg, {"task": "certify", **rep}, out)
    return EXIT_OK


def cmd_hamcycle(cfg: RunConfig, out) -> int:
    from . import hamconvex
    systems = _load_systems(cfg)
    stars = [cfg.star] if cfg.star is not None else None
    if stars is None and not cfg.all_stars:
        stars = [1]
    ok = True
    for rec in hamconvex.batch_report(systems, stars=stars):
        ok = ok and rec["ok"]
        if cfg.random_points:
            rec.pop("rows", None)
        _emit(cfg, rec, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_hampath(cfg: RunConfig, out) -> int:
    from . import hamconvex
    ok = True
    for idx, rs in enumerate(_load_systems(cfg)):
        edges = [cfg.edge] if cfg.edge else list(combinations(range(1, rs.n + 1), 2))
        for e in edges:
            rec = {"index": idx, "edge": list(e)}
            try:
                res = hamconvex.plane_hp_with_edge(rs, e)
                rec.update(ok=True, path=res.sequence)
            except (hamconvex.NotConvexError, hamconvex.VerificationError, ValueError) as exc:
                rec.update(ok=False, error=str(exc))
            ok = ok and rec["ok"]
            _emit(cfg, rec, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_drawability(cfg: RunConfig, out) -> int:
    from . import draw
    ok = True
    for idx, rs in enumerate(_load_systems(cfg)):
        rec = {"index": idx, "system": str(rs), "pi4": core.contains_pi4(rs)}
        try:
            pl = draw.draw(rs, budget=cfg.budget)
        except draw.PlanarizationError as exc:
            rec.update(ok=False, error=str(exc))
            ok = False
            _emit(cfg, rec, out)
            continue
        rec["drawable"] = pl is not None
        rec["obstruction_verdict"] = core.is_drawable(rs)
        rec["ok"] = rec["drawable"] == rec["obstruction_verdict"]
        if pl is not None:
            rec["planarization"] = json.loads(pl.to_json())
        ok = ok and rec["ok"]
        _emit(cfg, rec, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reproduce(cfg: RunConfig, out) -> int:
    from . import suites
    if cfg.suite == "list":
        for name, keys in suites.SUITES.items():
            out.write(f"{name}: criteria {keys}\n")
        for name in suites.EXTENDED:
            out.write(f"{name}: extended\n")
        return EXIT_OK
    try:
        results = suites.run_suite(cfg.suite, jobs=cfg.jobs, echo=lambda s: (out.write(s + "\n"), out.flush()))
    except KeyError as exc:
        raise ConfigError(str(exc)) from None
    failed = [r for r in results if not r.ok]
    out.write(f"{len(results) - len(failed)}/{len(results)} passed\n")
    if cfg.report:
        with open(cfg.report, "w", encoding="utf-8") as fh:
            for r in sorted(results, key=lambda r: str(r.number)):
                fh.write(json.dumps(r.__dict__) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "find": cmd_find,
    "certify": cmd_certify,
    "hamcycle": cmd_hamcycle,
    "hampath": cmd_hampath,
    "drawability": cmd_drawability,
    "reproduce": cmd_reproduce,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg.validate()
        return COMMANDS[cfg.subcommand](cfg, out)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except Exception as exc:
        from .encode import EncodingError
        from .solve import ToolError
        if isinstance(exc, (EncodingError, ToolError, OSError)):
            log.error("%s", exc)
            return EXIT_CONFIG
        raise


# ---------------------------------------------------------------------------
# argument parsing

def _add_property_flags(p):
    g = p.add_argument_group("properties")
    g.add_argument("--convex", action="store_true", help="forbid the two convexity obstructions")
    g.add_argument("--hconvex", action="store_true", help="also forbid the h-convexity obstruction")
    g.add_argument("--no-natural", dest="natural", action="store_false",
                   help="drop the natural-labeling symmetry break")
    g.add_argument("--v4", action="store_true", help="pre-rotation systems, no obstruction forbidden")
    g.add_argument("--v5", action="store_true", help="forbid only Pi4")


def _add_task_flags(p, enumerate_ok=True):
    g = p.add_argument_group("tasks (at most one)")
    if enumerate_ok:
        g.add_argument("--enumerate", "-a", action="store_true", help="enumerate all solutions")
        g.add_argument("--canonical", action="store_true", help="keep canonical solutions only")
    g.add_argument("--forbid-hc", action="store_true", help="no plane Hamiltonian cycle")
    g.add_argument("--forbid-hc2n3", action="store_true",
                   help="no plane Hamiltonian subdrawing with 2n-3 edges")
    g.add_argument("--unextendable-hc", action="store_true",
                   help="cycle 1..n plane but not extendable to 2n-3 plane edges")
    g.add_argument("--matching", type=int, metavar="K",
                   help="plane matching of size K that every Hamiltonian cycle crosses")
    g.add_argument("--all-edges-crossed", action="store_true")
    g.add_argument("--empty-at-most", type=int, metavar="K", help="at most K empty triangles")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rotsys", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("find", help="build and solve an instance, or enumerate its solutions")
    p.add_argument("n", type=int)
    _add_property_flags(p)
    _add_task_flags(p)
    p.add_argument("--check-crossing-pairs", action="store_true",
                   help="crossing pairs determine the system up to reflection")
    p.add_argument("--nested-lemma", metavar="PART", help="1, 2.1, 2.2 or 2.3")
    p.add_argument("--expect", choices=("sat", "unsat"))
    p.add_argument("--instance-out", metavar="CNF")
    p.add_argument("--varmap-out", metavar="FILE")
    p.add_argument("--in", dest="corpus_in", metavar="CORPUS")
    p.add_argument("--corpus-out", metavar="JSONL")
    p.add_argument("--report", metavar="JSONL")
    p.add_argument("--budget", type=float, metavar="SECONDS")
    p.add_argument("--oracle-bound", type=int, default=10)
    p.add_argument("--solver", default="cadical153")

    p = sub.add_parser("certify", help="write CNF and DRAT proof for an UNSAT instance and check it")
    p.add_argument("n", type=int)
    _add_property_flags(p)
    _add_task_flags(p, enumerate_ok=False)
    p.add_argument("--dir", dest="cert_dir", default=".")
    p.add_argument("--report", metavar="JSONL")
    p.add_argument("--oracle-bound", type=int, default=10)

    for name, helptext in (("hamcycle", "plane Hamiltonian cycles avoiding a star"),
                           ("hampath", "plane Hamiltonian paths through a given edge"),
                           ("drawability", "decide drawability and export planarizations")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="corpus_in", metavar="CORPUS")
        p.add_argument("--random-points", type=int, metavar="N",
                       help="use a random point set in general position instead")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--report", metavar="JSONL")
        if name == "hamcycle":
            p.add_argument("--star", type=int)
            p.add_argument("--all-stars", action="store_true")
        if name == "hampath":
            p.add_argument("--edge", type=int, nargs=2, metavar=("U", "V"))
        if name == "drawability":
            p.add_argument("--budget", type=float, metavar="SECONDS")

    p = sub.add_parser("reproduce", help="run a named suite of checks ('list' to show them)")
    p.add_argument("suite")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", metavar="JSONL")
    return ap


def config_from_args(args) -> RunConfig:
    kw = {k: v for k, v in vars(args).items() if k != "verbose" and v is not None}
    if "edge" in kw:
        kw["edge"] = tuple(kw["edge"])
    return RunConfig(**kw)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
