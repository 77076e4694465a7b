from itertools import combinations
from math import factorial

import pytest

from rotsys import core
from rotsys.encode import (EncodeOptions, EncodingError, assert_all_edges_crossed,
                           assert_empty_triangles_atmost, assert_matching_unavoidable,
                           assert_unextendable_fixed_hc, cardinality_atmost, count_2n3_sets,
                           fix_system, forbid_plane_hamiltonian_cycle, hamiltonian_cycles,
                           new_instance, options_from_flags)
from rotsys.solve import decode, enumerate_all, solve


def test_option_validation():
    with pytest.raises(EncodingError):
        EncodeOptions(forbid_pi4=False)
    with pytest.raises(EncodingError):
        EncodeOptions.relaxed("v5", convex=True)
    assert EncodeOptions(hconvex=True).convex
    with pytest.raises(EncodingError):
        options_from_flags(v4=True, convex=True)
    with pytest.raises(EncodingError):
        new_instance(2)


def test_x_block_is_first_and_dense():
    inst = new_instance(5)
    n = 5
    nx_ = n * (n - 1) * (n - 1)
    assert all(inst.keys[v][0] == "X" for v in range(1, nx_ + 1))
    assert inst.keys[nx_ + 1][0] == "Y"


def test_y_literal_parity():
    inst = new_instance(4, EncodeOptions.relaxed("v4"))
    y = inst.y(1, 2, 3, 4)
    assert inst.y(1, 3, 4, 2) == y and inst.y(1, 4, 2, 3) == y
    assert inst.y(1, 3, 2, 4) == -y


def test_fix_system_roundtrip(cat, c5):
    for rs in (c5, cat.hconvex6, cat.twisted_T5):
        inst = new_instance(rs.n, EncodeOptions(natural=False, crossings=True))
        fix_system(inst, rs)
        res = solve(inst)
        assert res.sat and decode(inst, res.model) == rs
        # crossing variables agree with the core predicate
        for e, f in combinations(combinations(range(1, rs.n + 1), 2), 2):
            if set(e) & set(f):
                continue
            assert res.value(inst.c(e, f)) == core.crosses(rs, e, f)


def test_fixed_obstruction_is_unsat(cat):
    for name in ("pi5A", "pi5B"):
        inst = new_instance(5, EncodeOptions(natural=False))
        fix_system(inst, getattr(cat, name))
        assert not solve(inst).sat
    inst = new_instance(6, EncodeOptions(natural=False, hconvex=True))
    fix_system(inst, cat.hconvex6)
    assert not solve(inst).sat


def test_models_satisfy_enabled_blocks():
    for opts, pred in ((EncodeOptions(), core.is_drawable),
                       (EncodeOptions(convex=True), core.is_convex_definitional),
                       (EncodeOptions(hconvex=True), core.is_hconvex_definitional)):
        rep = enumerate_all(new_instance(6, opts), canonical_only=True)
        assert rep.canonical <= rep.total
        assert all(pred(rs) for rs in rep.systems)


def test_relaxations_count():
    assert enumerate_all(new_instance(4, EncodeOptions.relaxed("v4")), canonical_only=True).canonical == 3
    assert enumerate_all(new_instance(4, EncodeOptions()), canonical_only=True).canonical == 2
    assert enumerate_all(new_instance(5, EncodeOptions.relaxed("v5")), canonical_only=True).canonical == 7


def test_hamiltonian_cycle_listing():
    for n in range(3, 8):
        cycles = list(hamiltonian_cycles(n))
        assert len(cycles) == factorial(n - 1) // 2
        assert len({frozenset(map(frozenset, zip(c, c[1:] + c[:1]))) for c in cycles}) == len(cycles)


def test_rafla_small_unsat_and_bound():
    for n in (3, 4, 5, 6):
        inst = new_instance(n)
        forbid_plane_hamiltonian_cycle(inst)
        assert not solve(inst).sat
    with pytest.raises(EncodingError):
        forbid_plane_hamiltonian_cycle(new_instance(5), bound=4)


def test_count_2n3_sets():
    assert count_2n3_sets(4) == 3 * 2
    assert count_2n3_sets(5) == 12 * 10


def test_unextendable_requires_no_natural():
    with pytest.raises(EncodingError):
        assert_unextendable_fixed_hc(new_instance(5))
    inst = new_instance(6, EncodeOptions(natural=False))
    assert_unextendable_fixed_hc(inst)
    assert not solve(inst).sat


def test_matching_block():
    with pytest.raises(EncodingError):
        assert_matching_unavoidable(new_instance(6), 1)
    with pytest.raises(EncodingError):
        assert_matching_unavoidable(new_instance(6, EncodeOptions(natural=False)), 4)
    for k in range(4):
        inst = new_instance(6, EncodeOptions(natural=False, convex=True))
        assert_matching_unavoidable(inst, k)
        assert not solve(inst).sat
    # without convexity a single edge can already be unavoidable (the twisted 5-drawing)
    inst = new_instance(5, EncodeOptions(natural=False))
    assert_matching_unavoidable(inst, 1)
    res = solve(inst)
    assert res.sat
    rs = decode(inst, res.model)
    assert core.brute_force_plane_hamiltonian(rs, "cycle") is not None
    for cyc in hamiltonian_cycles(5):
        es = list(zip(cyc, cyc[1:] + cyc[:1])) + [(1, 2)]
        assert not core.is_plane_subset(rs, es)


def test_all_edges_crossed_small():
    for n in (4, 5, 6):
        inst = new_instance(n)
        assert_all_edges_crossed(inst)
        assert not solve(inst).sat


def test_empty_triangle_bound(cat, c5):
    inst = new_instance(6)
    assert_empty_triangles_atmost(inst, 8)
    res = solve(inst)
    assert res.sat
    rs = decode(inst, res.model)
    assert core.empty_triangles(rs)[0] == 8
    inst = new_instance(6)
    assert_empty_triangles_atmost(inst, 7)
    assert not solve(inst).sat
    with pytest.raises(EncodingError):
        assert_empty_triangles_atmost(new_instance(5), -1)


def test_empty_triangle_vars_match_core(c5, cat):
    for rs in (c5, cat.twisted_T5, cat.hconvex6):
        inst = new_instance(rs.n, EncodeOptions(natural=False))
        fix_system(inst, rs)
        assert_empty_triangles_atmost(inst, core.empty_triangles(rs)[0])
        assert solve(inst).sat
        inst = new_instance(rs.n, EncodeOptions(natural=False))
        fix_system(inst, rs)
        assert_empty_triangles_atmost(inst, core.empty_triangles(rs)[0] - 1)
        assert not solve(inst).sat


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_cardinality_atmost(k):
    from rotsys.encode import CnfInstance
    inst = CnfInstance(0)
    lits = [inst.var("v", i) for i in range(5)]
    cardinality_atmost(inst, lits, k)
    inst.add([lits[i] for i in range(5)])
    rep = 0
    from pysat.solvers import Solver
    with Solver(bootstrap_with=inst.clauses) as s:
        for m in range(1 << 5):
            assume = [l if m >> i & 1 else -l for i, l in enumerate(lits)]
            ok = s.solve(assumptions=assume)
            want = 1 <= bin(m).count("1") <= k
            assert ok == want
            rep += ok
    assert rep == sum(1 for m in range(1 << 5) if 1 <= bin(m).count("1") <= k)
