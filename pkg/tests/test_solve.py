import json
import time

import pytest

from rotsys import core
from rotsys.encode import (CnfInstance, EncodeOptions, assert_all_edges_crossed,
                           assert_empty_triangles_atmost, fix_system,
                           forbid_plane_hamiltonian_cycle, new_instance)
from rotsys.solve import (DecodeError, SolverError, ToolError, decode, dimacs_hash, dimacs_text,
                          enumerate_all, enumerate_by_extension, read_corpus, read_dimacs,
                          read_model, solve, unsat_certificate, write_corpus, write_dimacs,
                          x_literals)


def test_dimacs_roundtrip(tmp_path):
    inst = new_instance(4)
    path = tmp_path / "n4.cnf"
    write_dimacs(inst, path)
    nvars, clauses = read_dimacs(path.read_text())
    assert nvars == inst.nvars == len(inst.registry)
    assert sorted(map(sorted, clauses)) == sorted(map(sorted, inst.clauses))


def test_dimacs_is_stable():
    assert dimacs_hash(new_instance(5)) == dimacs_hash(new_instance(5))
    assert dimacs_text(new_instance(5)) != dimacs_text(new_instance(5, EncodeOptions(convex=True)))


def test_read_model():
    assert read_model("s SATISFIABLE\nv 1 -2 3\nv -4 0\n") == [1, -2, 3, -4]
    with pytest.raises(ValueError):
        read_model("v 1 x 0\n")


def test_trivial_unsat():
    inst = CnfInstance(0)
    x = inst.var("x")
    inst.add([x])
    inst.add([-x])
    assert solve(inst).status == "unsat"


def test_model_is_total():
    inst = new_instance(5, EncodeOptions(crossings=True))
    res = solve(inst)
    assert res.sat and len(res.model) == inst.nvars
    assert [abs(l) for l in res.model] == list(range(1, inst.nvars + 1))


def test_budget_reports_unknown():
    inst = new_instance(8)
    forbid_plane_hamiltonian_cycle(inst)
    t0 = time.perf_counter()
    res = solve(inst, budget=0.5)
    assert res.status == "unknown"
    assert time.perf_counter() - t0 < 10


def test_budget_finishes_small():
    res = solve(new_instance(5), budget=30)
    assert res.sat


@pytest.mark.parametrize("n,opts,want", [
    (4, EncodeOptions.relaxed("v4"), 3),
    (5, EncodeOptions.relaxed("v5"), 7),
    (5, EncodeOptions(), 5),
    (6, EncodeOptions(), 102),
    (6, EncodeOptions(convex=True), 16),
    (6, EncodeOptions(hconvex=True), 15),
])
def test_enumeration_counts(n, opts, want):
    rep = enumerate_all(new_instance(n, opts), canonical_only=True)
    assert rep.canonical == want == len(set(rep.systems))
    assert all(core.is_canonical(rs) for rs in rep.systems)


def test_decoded_systems_are_drawable():
    rep = enumerate_all(new_instance(6), canonical_only=True)
    assert all(core.is_drawable(rs) for rs in rep.systems)


def test_decode_encode_fixpoint(cat):
    inst = new_instance(6, EncodeOptions(natural=False))
    fix_system(inst, cat.hconvex6)
    res = solve(inst)
    rs = decode(inst, res.model)
    assert rs == cat.hconvex6
    assert all(res.value(v) for v in x_literals(inst, rs))


def test_decode_rejects_bad_model():
    inst = new_instance(4)
    with pytest.raises(DecodeError):
        decode(inst, [-v for v in range(1, inst.nvars + 1)])


def test_canonical_filter_needs_natural():
    with pytest.raises(SolverError):
        enumerate_all(new_instance(4, EncodeOptions(natural=False)), canonical_only=True)


def test_enumeration_limit_and_callback():
    seen = []
    rep = enumerate_all(new_instance(6), canonical_only=True, limit=10, callback=seen.append)
    assert rep.canonical == 10 == len(seen)


def test_extension_matches_direct():
    direct = set(enumerate_all(new_instance(6, EncodeOptions(convex=True)), canonical_only=True).systems)
    parents = enumerate_all(new_instance(5, EncodeOptions(convex=True)), canonical_only=True).systems
    ext = set(enumerate_by_extension(6, EncodeOptions(convex=True), parents=parents))
    assert ext == direct


def test_sat_results_pass_core(cat):
    inst = new_instance(8)
    assert_all_edges_crossed(inst)
    res = solve(inst)
    assert res.sat
    rs = decode(inst, res.model)
    assert core.is_drawable(rs) and not core.has_uncrossed_edge(rs)


def test_corpus_roundtrip(tmp_path, cat):
    systems = [rs for _, rs in cat.items()]
    path = tmp_path / "c.jsonl"
    assert write_corpus(systems + systems[:2], path) == len(set(systems))
    assert set(read_corpus(path)) == set(systems)
    # unnormalized rows are accepted
    path.write_text(json.dumps({"n": 4, "rows": [[3, 4, 2], [3, 4, 1], [4, 1, 2], [2, 3, 1]]}) + "\n")
    assert read_corpus(path)[0].rows[0] == (2, 3, 4)
    path.write_text('{"n": 4, "rows": [[2, 3]]}\n')
    with pytest.raises(DecodeError):
        read_corpus(path)


def test_unsat_certificate(tmp_path):
    inst = new_instance(5)
    forbid_plane_hamiltonian_cycle(inst)
    rep = unsat_certificate(inst, tmp_path, "rafla5")
    assert rep["verified"]
    assert (tmp_path / "rafla5.cnf").exists() and (tmp_path / "rafla5.proof").exists()


@pytest.mark.slow
def test_unsat_certificate_empty_triangles(tmp_path):
    inst = new_instance(6)
    assert_empty_triangles_atmost(inst, 7)
    assert unsat_certificate(inst, tmp_path, "etupp6")["verified"]


def test_certificate_of_sat_instance(tmp_path):
    with pytest.raises(SolverError, match="not unsat"):
        unsat_certificate(new_instance(5), tmp_path)


def test_missing_external_tool(tmp_path, monkeypatch):
    monkeypatch.setenv("ROTSYS_SOLVER", "/nonexistent/solver")
    with pytest.raises(ToolError):
        unsat_certificate(new_instance(4), tmp_path)
