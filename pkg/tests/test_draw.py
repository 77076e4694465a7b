import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from rotsys import core, draw

from conftest import random_geometric


def test_fixed_graph_planarity():
    assert draw.planarity_fixed_graph(nx.complete_graph(4))
    assert not draw.planarity_fixed_graph(nx.complete_graph(5))
    assert not draw.planarity_fixed_graph(nx.complete_bipartite_graph(3, 3))
    assert not draw.planarity_fixed_graph(nx.petersen_graph())
    assert draw.planarity_fixed_graph(nx.icosahedral_graph())
    assert draw.planarity_fixed_graph([(1, 2), (2, 3)])


def test_square_system(cat):
    pl = draw.draw(cat.crossing_K4)
    assert pl.num_vertices == 5 and pl.num_edges == 8


def test_plane_k4(cat):
    pl = draw.draw(cat.plane_K4)
    assert pl.num_vertices == 4 and pl.num_edges == 6
    assert nx.is_isomorphic(pl.graph(), nx.complete_graph(4))


def test_twisted_five(cat):
    pl = draw.draw(cat.twisted_T5)
    assert pl.num_vertices == 10 and pl.num_edges == 20


def test_obstructions_not_drawable(cat):
    assert draw.draw(cat.pi4_obstruction) is None
    for name in ("pi5A", "pi5B"):
        assert not draw.is_drawable_sat(getattr(cat, name))


def test_export(cat):
    pl = draw.draw(cat.crossing_K4)
    data = json.loads(pl.to_json())
    assert data["original"] == [1, 2, 3, 4]
    assert list(data["crossing"]) == ["5"]
    assert len(data["adjacency"]) == 8


def test_crossing_vertices_match_relation(cat):
    for rs in (cat.twisted_T5, cat.hconvex6, cat.convex5_2):
        pl = draw.draw(rs)
        assert set(pl.crossings) == set(core.crossing_relation(rs).pairs)
        assert pl.num_edges == rs.n * (rs.n - 1) // 2 + 2 * len(pl.crossings)
        assert draw.planarity_fixed_graph(pl.graph())


@settings(max_examples=15, deadline=None)
@given(n=st.integers(4, 6), seed=st.integers(0, 10**6))
def test_geometric_systems_drawable(n, seed):
    rs = random_geometric(n, seed)
    pl = draw.draw(rs)
    assert pl is not None
    draw.check_planarization(rs, pl)


def test_check_planarization_catches_wrong_rotation(cat):
    pl = draw.draw(cat.crossing_K4)
    with pytest.raises(draw.PlanarizationError):
        draw.check_planarization(cat.plane_K4, pl)


def test_budget(cat):
    assert draw.is_drawable_sat(cat.hconvex6, budget=60)


def test_agreement_n5():
    from rotsys.encode import EncodeOptions, new_instance
    from rotsys.solve import enumerate_all
    five = enumerate_all(new_instance(5, EncodeOptions.relaxed("v5")), canonical_only=True).systems
    verdicts = [(draw.is_drawable_sat(rs), core.is_drawable(rs)) for rs in five]
    assert all(a == b for a, b in verdicts)
    assert sum(a for a, _ in verdicts) == 5


@pytest.mark.extended
def test_agreement_all_pi4_free_six():
    from rotsys.suites import extended_drawability
    ok, detail = extended_drawability(jobs=4)
    assert ok, detail
