import io
import json
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rotsys import core, hamconvex as H
from rotsys.encode import EncodeOptions, hamiltonian_cycles, new_instance
from rotsys.solve import enumerate_all

from conftest import random_geometric


@pytest.fixture(scope="module")
def convex6():
    return enumerate_all(new_instance(6, EncodeOptions(convex=True)), canonical_only=True).systems


@pytest.fixture(scope="module")
def convex5():
    return enumerate_all(new_instance(5, EncodeOptions(convex=True)), canonical_only=True).systems


def test_c5_bad_edge_is_the_closing_pair(c5):
    # consecutive pairs are taken cyclically; at a hull vertex only the pair
    # joining its two hull neighbours is bad
    for s in range(1, 6):
        dec = H.find_bad_edges(c5, s)
        assert dec.bad_edges_original() == [core.edge((s - 2) % 5 + 1, s % 5 + 1)]
    res = H.plane_hc_convex(c5, 5)
    assert res.sequence == [5, 1, 2, 3, 4]


def test_hconvex6_star3(cat):
    dec = H.find_bad_edges(cat.hconvex6, 3)
    assert sorted(dec.bad_edges_original()) == [(2, 6), (4, 6)]
    res = H.plane_hc_convex(cat.hconvex6, 3)
    rep = H.verify_hc(cat.hconvex6, 3, res)
    assert rep["ok"] and rep["plane"] and rep["star_avoiding"] and rep["union_plane"]
    assert not rep["rotation_order"]
    # nothing plane and star-avoiding follows the rotation at 3
    for cyc in hamiltonian_cycles(6):
        r = H.verify_hc(cat.hconvex6, 3, H.HamCycleResult(list(cyc)))
        assert not (r["ok"] and r["rotation_order"])


def test_non_convex_rejected(cat):
    with pytest.raises(H.NotConvexError):
        H.plane_hc_convex(cat.twisted_T5, 5)


def test_verify_flags_crossing_cycle(cat):
    # on the square system 1,2,3,4 the two diagonals cross
    sq = cat.crossing_K4
    (e, f), = core.crossing_relation(sq).pairs
    seq = [e[0], e[1], f[0], f[1]]
    rep = H.verify_hc(sq, seq[0], H.HamCycleResult(seq))
    assert rep["hamiltonian"] and not rep["plane"]
    assert not H.verify_hc(sq, 1, H.HamCycleResult([1, 2, 3]))["ok"]


def test_union_size(c5):
    rep = H.verify_hc(c5, 5, H.plane_hc_convex(c5, 5))
    assert rep["union_size"] == 2 * 5 - 3


def test_all_convex_six_every_star(convex6):
    for rs in convex6:
        for s in range(1, 7):
            res = H.plane_hc_convex(rs, s)
            rep = H.verify_hc(rs, s, res, hconvex=core.is_hconvex(rs))
            assert rep["ok"]


def test_hconvex_has_at_most_one_bad_edge(convex6):
    for rs in convex6:
        if core.is_hconvex(rs):
            assert all(H.find_bad_edges(rs, s).m <= 1 for s in range(1, 7))


def test_l_table_matches_naive():
    from rotsys.suites import corpus
    checked = 0
    for rs in corpus(7, convex=True):
        for s in range(1, 8):
            dec = H.find_bad_edges(rs, s)
            for i in range(1, dec.m):
                assert dec.l[i] == H.l_table_naive(rs, dec, i)
                checked += 1
    assert checked > 0


def test_decomposition_invariants():
    from rotsys.suites import corpus
    for rs in corpus(7, convex=True):
        for s in range(1, 8):
            dec = H.find_bad_edges(rs, s)
            if dec.m < 2:
                continue
            n = rs.n
            vs = [v for v, _, _ in dec.bad]
            assert 1 < vs[0] and vs[-1] == n - 2 and vs == sorted(vs)
            for v, wl, wr in dec.bad:
                assert wl <= wr < v
            for (_, wl, _), (_, _, wr2) in zip(dec.bad, dec.bad[1:]):
                assert wr2 < wl


def test_hp_examples(c5):
    res = H.plane_hp_with_edge(c5, (1, 3))
    assert H.verify_path(c5, res.sequence, (1, 3))["ok"]
    # an edge of the constructed cycle: the path is the cycle minus one edge
    cyc = H.plane_hc_convex(c5, 1).sequence
    res = H.plane_hp_with_edge(c5, (cyc[0], cyc[1]))
    es = {core.edge(a, b) for a, b in zip(res.sequence, res.sequence[1:])}
    assert es <= {core.edge(cyc[i], cyc[(i + 1) % 5]) for i in range(5)}


def test_hp_exhaustive_small(convex5, convex6):
    for rs in list(convex5) + list(convex6):
        for e in combinations(range(1, rs.n + 1), 2):
            res = H.plane_hp_with_edge(rs, e)
            assert core.brute_force_plane_hamiltonian(rs, "path", required_edge=e) is not None
            assert H.verify_path(rs, res.sequence, e)["ok"]


def test_nested_lemma(convex5, convex6):
    for rs in list(convex5) + list(convex6):
        assert H.check_nested_lemma(rs, 1)
        assert H.check_nested_lemma(rs, (2, 3))
    assert H.nested_lemma_part("2.2") == (2, 2)
    with pytest.raises(ValueError):
        H.nested_lemma_part("3.1")


def test_nested_lemma_part1_fails_off_convex(cat):
    assert not H.check_nested_lemma(cat.twisted_T5, 1)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(5, 40), seed=st.integers(0, 10**6), data=st.data())
def test_geometric(n, seed, data):
    rs = random_geometric(n, seed)
    s = data.draw(st.integers(1, n))
    res = H.plane_hc_convex(rs, s)
    assert H.verify_hc(rs, s, res, hconvex=True)["ok"]


def test_batch_report(convex5):
    buf = io.StringIO()
    ok = H.write_batch_report(H.batch_report(convex5), buf)
    recs = [json.loads(l) for l in buf.getvalue().splitlines()]
    assert ok and len(recs) == 5 * len(convex5)
