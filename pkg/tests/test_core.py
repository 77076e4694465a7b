from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from rotsys import core, geometry
from rotsys.catalog import all_pre_rotation_systems, canonical_classes

from conftest import random_geometric


def test_from_rows_normalizes_and_validates():
    rs = core.from_rows(4, [[3, 4, 2], [1, 3, 4], [4, 1, 2], [2, 3, 1]])
    assert rs.rows[0] == (2, 3, 4)
    assert rs.rows[3] == (1, 2, 3)
    with pytest.raises(ValueError):
        core.from_rows(4, [[2, 3, 4], [1, 3, 4], [1, 2, 4]])
    with pytest.raises(ValueError):
        core.from_rows(4, [[2, 3, 3], [1, 3, 4], [1, 2, 4], [1, 2, 3]])
    with pytest.raises(ValueError):
        core.from_rows(2, [[2], [1]])


def test_quad_table_shape():
    assert len(core.QUAD_TABLE) == 8
    keys = {tuple(k) for k in core.QUAD_TABLE}
    pi4 = [k for k in ((a, b, c, d) for a in (0, 1) for b in (0, 1) for c in (0, 1) for d in (0, 1))
           if k not in keys]
    assert len(pi4) == 8 and all(core.is_pi4_key(k) for k in pi4)


def test_k4_types(cat):
    assert len(core.crossing_relation(cat.plane_K4)) == 0
    assert len(core.crossing_relation(cat.crossing_K4)) == 1
    assert core.contains_pi4(cat.pi4_obstruction)
    assert not core.is_drawable(cat.pi4_obstruction)


def test_convex_position_crossings():
    for n in range(4, 9):
        rs = core.rotation_from_points(geometry.convex_position(n))
        assert len(core.crossing_relation(rs)) == comb(n, 4)
        assert core.is_convex(rs) and core.is_hconvex(rs)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(4, 9), seed=st.integers(0, 10**6))
def test_crossings_match_geometry(n, seed):
    pts = geometry.random_points(n, rng=seed)
    rs = core.rotation_from_points(pts)
    got = {frozenset(p) for p in core.crossing_relation(rs).pairs}
    want = {frozenset((core.edge(*e), core.edge(*f))) for e, f in geometry.segment_crossings(pts)}
    assert got == want


@settings(max_examples=40, deadline=None)
@given(n=st.integers(4, 8), seed=st.integers(0, 10**6))
def test_geometric_systems_have_all_properties(n, seed):
    rs = random_geometric(n, seed)
    assert core.is_drawable(rs)
    assert core.is_convex(rs) and core.is_convex_definitional(rs)
    assert core.is_hconvex(rs) and core.is_hconvex_definitional(rs)
    count, _ = core.empty_triangles(rs)
    assert count >= 2 * n - 4


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), data=st.data())
def test_canonical_form_is_a_class_invariant(seed, data):
    n = data.draw(st.integers(4, 7))
    rs = random_geometric(n, seed)
    perm = data.draw(st.permutations(range(1, n + 1)))
    other = core.relabel(rs, [0] + list(perm))
    if data.draw(st.booleans()):
        other = core.reflect(other)
    assert core.canonical_form(other) == core.canonical_form(rs)
    assert core.is_canonical(core.canonical_form(rs))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), data=st.data())
def test_relabel_preserves_crossings(seed, data):
    n = data.draw(st.integers(4, 7))
    rs = random_geometric(n, seed)
    perm = [0] + list(data.draw(st.permutations(range(1, n + 1))))
    other = core.relabel(rs, perm)
    for e, f in core.crossing_relation(rs).pairs:
        assert core.crosses(other, (perm[e[0]], perm[e[1]]), (perm[f[0]], perm[f[1]]))
    assert len(core.crossing_relation(other)) == len(core.crossing_relation(rs))


def test_reflect_is_an_involution_with_same_crossings(cat):
    for _, rs in cat.items():
        assert core.reflect(core.reflect(rs)) == rs
        if not core.contains_pi4(rs):
            assert core.crossing_relation(core.reflect(rs)) == core.crossing_relation(rs)


def test_relabel_rejects_non_bijection(c5):
    with pytest.raises(ValueError):
        core.relabel(c5, {1: 1, 2: 1, 3: 3, 4: 4, 5: 5})


def test_brute_force_counts():
    assert sum(1 for _ in all_pre_rotation_systems(4)) == 16
    assert sum(1 for _ in all_pre_rotation_systems(5)) == 7776
    assert len(canonical_classes(4)) == 3


def test_obstructions_behave(cat):
    for name in ("pi5A", "pi5B"):
        rs = getattr(cat, name)
        assert not core.contains_pi4(rs) and not core.is_drawable(rs)
    for name in ("convex5_1", "convex5_2"):
        rs = getattr(cat, name)
        assert core.is_drawable(rs) and not core.is_convex(rs)
        assert not core.is_convex_definitional(rs)
    h6 = cat.hconvex6
    assert core.is_convex(h6) and not core.is_hconvex(h6) and not core.is_hconvex_definitional(h6)


def test_convex_obstruction_vs_definition_n6():
    from rotsys.encode import EncodeOptions, new_instance
    from rotsys.solve import enumerate_all
    for rs in enumerate_all(new_instance(6, EncodeOptions()), canonical_only=True).systems:
        assert core.is_convex_obstruction(rs) == core.is_convex_definitional(rs)


def test_contains_subconfiguration_finds_induced_copy(cat, c5):
    assert core.contains_subconfiguration(cat.hconvex6, cat.crossing_K4)
    assert not core.contains_subconfiguration(c5, cat.plane_K4)
    assert core.canonical_form(core.induced(c5, [1, 2, 4, 5])) == cat.crossing_K4


def test_sides_of_a_convex_position_triangle(c5):
    # the triangle 1,2,3 on the hull: one side holds 4 and 5
    (s1, m1), (s2, m2) = core.triangle_sides(c5, 1, 2, 3)
    assert sorted(map(sorted, (m1, m2))) == [[], [4, 5]]


def test_brute_force_hamiltonian(c5, cat):
    assert core.brute_force_plane_hamiltonian(c5, "cycle") is not None
    assert core.brute_force_plane_hamiltonian(c5, "cycle", required_edge=(1, 3)) is None
    assert core.brute_force_plane_hamiltonian(c5, "path", required_edge=(1, 3)) is not None
    assert core.brute_force_plane_hamiltonian(cat.twisted_T5, "path", required_edge=(1, 5)) is None
    with pytest.raises(ValueError):
        core.brute_force_plane_hamiltonian(c5, "tour")


def test_crossing_predicates_reject_pi4(cat):
    with pytest.raises(core.NotDrawableError):
        core.brute_force_plane_hamiltonian(cat.pi4_obstruction, "cycle")
    with pytest.raises(core.NotDrawableError):
        core.empty_triangles(cat.pi4_obstruction)


def test_uncrossed_edges(c5):
    assert core.has_uncrossed_edge(c5)
    assert core.is_plane_subset(c5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
    assert not core.is_plane_subset(c5, [(1, 3), (2, 4)])
