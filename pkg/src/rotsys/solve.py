"""Solving, decoding, enumeration and UNSAT certification for CNF instances."""

from __future__ import annotations

import hashlib
import json
import logging
import multiprocessing as mp
import os
import shutil
import subprocess
import time
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from pysat.solvers import Solver

from . import core
from .core import RotationSystem
from .encode import CnfInstance

log = logging.getLogger(__name__)

DEFAULT_SOLVER = "cadical153"
ENUM_SOLVER = "cadical153"

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"

ENV_SOLVER = "ROTSYS_SOLVER"
ENV_CHECKER = "ROTSYS_CHECKER"


class SolverError(RuntimeError):
    pass


class ToolError(RuntimeError):
    """External tool missing or misconfigured."""


class DecodeError(ValueError):
    pass


@dataclass
class SolveResult:
    status: str
    model: list | None = None
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def value(self, var: int) -> bool:
        return self.model[var - 1] > 0


@dataclass
class EnumerationReport:
    total: int = 0
    canonical: int = 0
    systems: list = field(default_factory=list)
    corpus: str | None = None
    seconds: float = 0.0


# ---------------------------------------------------------------------------
# DIMACS

def dimacs_text(inst: CnfInstance) -> str:
    lines = [f"c {k}={v}" for k, v in inst.meta.items()]
    lines.append(f"c blocks={','.join(inst.blocks)}")
    lines.append(f"p cnf {inst.nvars} {len(inst.clauses)}")
    lines.extend(" ".join(map(str, cl)) + " 0" for cl in inst.clauses)
    return "\n".join(lines) + "\n"


def write_dimacs(inst: CnfInstance, path) -> None:
    Path(path).write_text(dimacs_text(inst), encoding="ascii")


def write_varmap(inst: CnfInstance, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for v in range(1, inst.nvars + 1):
            fh.write(f"{v} " + " ".join(map(str, inst.keys[v])) + "\n")


def read_dimacs(text: str) -> tuple[int, list]:
    nvars, clauses, cur = 0, [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            nvars = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    return nvars, clauses


def dimacs_hash(inst: CnfInstance) -> str:
    return hashlib.sha256(dimacs_text(inst).encode()).hexdigest()


def read_model(text: str) -> list:
    """Parse solver output 'v' lines into a list of signed literals."""
    lits = []
    for line in text.splitlines():
        if not line.startswith("v"):
            continue
        for tok in line[1:].split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"malformed model line: {line!r}") from None
            if lit != 0:
                lits.append(lit)
    return lits


# ---------------------------------------------------------------------------
# solving

def _run(clauses, nvars, solver, assumptions):
    t0 = time.perf_counter()
    with Solver(name=solver, bootstrap_with=clauses) as s:
        res = s.solve(assumptions=list(assumptions))
        stats = dict(s.accum_stats() or {})
        model = _full_model(s.get_model(), nvars) if res else None
    stats["seconds"] = time.perf_counter() - t0
    return (SAT if res else UNSAT), model, stats


def _child(conn, args):
    try:
        conn.send(_run(*args))
    finally:
        conn.close()


def solve(inst: CnfInstance, budget: float | None = None, solver: str = DEFAULT_SOLVER,
          assumptions=()) -> SolveResult:
    """Solve with an embedded solver; ``budget`` is a wall-clock limit in seconds.

    With a budget the solver runs in a forked process that is killed on
    timeout (the CaDiCaL binding cannot be interrupted).
    """
    args = (inst.clauses, inst.nvars, solver, tuple(assumptions))
    if budget is None:
        return SolveResult(*_run(*args))
    ctx = mp.get_context("fork")
    parent, child = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(child, args), daemon=True)
    t0 = time.perf_counter()
    proc.start()
    child.close()
    try:
        if parent.poll(budget):
            return SolveResult(*parent.recv())
        return SolveResult(UNKNOWN, None, {"seconds": time.perf_counter() - t0})
    finally:
        if proc.is_alive():
            proc.kill()
        proc.join()
        parent.close()


def _full_model(model, nvars):
    out = list(model[:nvars])
    for v in range(len(out) + 1, nvars + 1):
        out.append(-v)
    return out


def decode(inst: CnfInstance, model) -> RotationSystem:
    """Read the rotation system off the true X literals."""
    n = inst.n
    true = set(l for l in model if l > 0)
    rows = []
    for a in range(1, n + 1):
        row = []
        for i in range(1, n):
            hits = [b for b in range(1, n + 1) if b != a and inst.registry[("X", a, i, b)] in true]
            if len(hits) != 1:
                raise DecodeError(f"row {a} position {i} has {len(hits)} entries")
            row.append(hits[0])
        rows.append(row)
    try:
        return core.from_rows(n, rows)
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def x_literals(inst: CnfInstance, rs: RotationSystem) -> list:
    return [inst.registry[("X", a, i, b)]
            for a in range(1, rs.n + 1) for i, b in enumerate(rs.row(a), start=1)]


def enumerate_all(inst: CnfInstance, canonical_only: bool = False, callback=None,
                  limit: int | None = None, solver: str = ENUM_SOLVER, keep: bool = True,
                  assumptions=()) -> EnumerationReport:
    """All models, decoded; each found solution is blocked on its X variables."""
    if canonical_only and inst.opts is not None and not inst.opts.natural:
        raise SolverError("canonical filtering needs the natural-labeling block")
    rep = EnumerationReport()
    t0 = time.perf_counter()
    with Solver(name=solver, bootstrap_with=inst.clauses) as s:
        while s.solve(assumptions=list(assumptions)):
            model = s.get_model()
            rs = decode(inst, model)
            rep.total += 1
            s.add_clause([-l for l in x_literals(inst, rs)])
            if canonical_only and not core.is_canonical(rs):
                continue
            rep.canonical += 1
            if keep:
                rep.systems.append(rs)
            if callback is not None:
                callback(rs)
            if limit is not None and rep.canonical >= limit:
                break
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# UNSAT certificates

def _external(name):
    path = os.environ.get(name)
    if not path:
        return None
    exe = shutil.which(path) or (path if Path(path).exists() else None)
    if exe is None:
        raise ToolError(f"{name}={path!r} does not point to an executable")
    return exe


def produce_proof(inst: CnfInstance, cnf_path, proof_path) -> str:
    """Solve and write a DRAT proof; returns the status."""
    write_dimacs(inst, cnf_path)
    exe = _external(ENV_SOLVER)
    if exe is not None:
        proc = subprocess.run([exe, "-q", "--unsat", str(cnf_path), str(proof_path)],
                              capture_output=True, text=True)
        if proc.returncode == 20:
            return UNSAT
        if proc.returncode == 10:
            return SAT
        raise ToolError(f"external solver exited with {proc.returncode}: {proc.stderr.strip()}")
    with Solver(name=DEFAULT_SOLVER, bootstrap_with=inst.clauses, with_proof=True) as s:
        res = s.solve()
        if res:
            return SAT
        Path(proof_path).write_text("\n".join(s.get_proof()) + "\n", encoding="ascii")
    return UNSAT


def check_proof(cnf_path, proof_path) -> bool:
    exe = _external(ENV_CHECKER)
    if exe is not None:
        proc = subprocess.run([exe, str(cnf_path), str(proof_path), "-t", "999999"],
                              capture_output=True, text=True)
        return "s VERIFIED" in proc.stdout
    from .drat import check_drat
    _, clauses = read_dimacs(Path(cnf_path).read_text())
    return check_drat(clauses, Path(proof_path).read_text())


def unsat_certificate(inst: CnfInstance, directory, name: str = "instance") -> dict:
    """Write CNF and proof into directory, then check the proof.

    Raises SolverError if the instance is satisfiable or the proof is rejected.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cnf = directory / f"{name}.cnf"
    proof = directory / f"{name}.proof"
    t0 = time.perf_counter()
    status = produce_proof(inst, cnf, proof)
    if status != UNSAT:
        raise SolverError("not unsat: the instance is satisfiable")
    t1 = time.perf_counter()
    ok = check_proof(cnf, proof)
    t2 = time.perf_counter()
    if not ok:
        raise SolverError("proof rejected by the checker")
    return {"cnf": str(cnf), "proof": str(proof), "verified": True,
            "solve_seconds": t1 - t0, "check_seconds": t2 - t1}


# ---------------------------------------------------------------------------
# enumeration by vertex extension

def y_assumptions(inst: CnfInstance, rs: RotationSystem) -> list:
    """Y literals pinning the subsystem on 1..rs.n to rs."""
    lits = []
    for a in range(1, rs.n + 1):
        others = [b for b in range(1, rs.n + 1) if b != a]
        for b, c, d in combinations(others, 3):
            y = inst.y(a, b, c, d)
            lits.append(y if core.ccw(rs, a, b, c, d) else -y)
    return lits


def enumerate_by_extension(n: int, opts, parents=None, solver: str = ENUM_SOLVER,
                           catalog=None) -> list:
    """Canonical systems on n elements, grown from the canonical (n-1)-systems.

    Valid for hereditary properties (drawable, convex, h-convex): every
    system extends some canonical (n-1)-system sitting on 1..n-1.
    """
    from dataclasses import replace
    from .encode import new_instance

    if parents is None:
        if n <= 6:
            return enumerate_all(new_instance(n, opts, catalog=catalog), canonical_only=True).systems
        parents = enumerate_by_extension(n - 1, opts, solver=solver, catalog=catalog)
    inst = new_instance(n, replace(opts, natural=False), catalog=catalog)
    found = set()
    with Solver(name=solver, bootstrap_with=inst.clauses) as s:
        for p in parents:
            assume = y_assumptions(inst, p)
            while s.solve(assumptions=assume):
                rs = decode(inst, s.get_model())
                s.add_clause([-l for l in x_literals(inst, rs)])
                found.add(core.canonical_form(rs))
    return sorted(found, key=lambda r: r.vector)


# ---------------------------------------------------------------------------
# corpus files

def write_corpus(systems, path) -> int:
    """One {"n", "rows"} record per line, sorted by row vector; returns the count."""
    systems = sorted(set(systems), key=lambda r: (r.n, r.vector))
    with open(path, "w", encoding="ascii") as fh:
        for rs in systems:
            fh.write(json.dumps(rs.to_json()) + "\n")
    return len(systems)


def read_corpus(path) -> list:
    """Read a corpus file; rows may be unnormalized."""
    out = []
    with open(path, encoding="ascii") as fh:
        for k, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                out.append(core.from_rows(rec["n"], rec["rows"]))
            except (KeyError, ValueError, TypeError) as exc:
                raise DecodeError(f"{path}:{k}: bad record ({exc})") from None
    return out
