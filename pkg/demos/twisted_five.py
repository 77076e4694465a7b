#!/usr/bin/env python3
"""The small counterexamples: convex C5 and the twisted drawing T5."""

from rotsys import core, draw
from rotsys.catalog import load_catalog
from rotsys.suites import good_consecutive_edges, literal_uncrossed

cat = load_catalog()
c5, t5 = cat.convex_C5, cat.twisted_T5
print("C5:", c5, " plane cycle through 13:",
      core.brute_force_plane_hamiltonian(c5, "cycle", required_edge=(1, 3)))
print("C5: plane path through 13:", core.brute_force_plane_hamiltonian(c5, "path", required_edge=(1, 3)))
print("T5:", t5, " crossings:", len(core.crossing_relation(t5)))
print("T5: plane path through 15:", core.brute_force_plane_hamiltonian(t5, "path", required_edge=(1, 5)))
print("T5 star 5: good consecutive edges (rotation labels):", good_consecutive_edges(t5, 5))
print("T5 star 5: all non-star edges crossing no star edge:", literal_uncrossed(t5, 5))
pl = draw.draw(t5)
print(f"T5 planarization: {pl.num_vertices} vertices, {pl.num_edges} edges")
