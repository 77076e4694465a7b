"""Rotation systems of simple drawings of complete graphs."""

from .core import (
    CrossingRelation,
    Edge,
    NotDrawableError,
    RotationSystem,
    SideRef,
    brute_force_plane_hamiltonian,
    canonical_form,
    ccw,
    contains_pi4,
    contains_subconfiguration,
    crosses,
    crossing_of_quadruple,
    crossing_relation,
    edge,
    empty_triangles,
    from_rows,
    has_uncrossed_edge,
    induced,
    is_canonical,
    is_convex,
    is_drawable,
    is_hconvex,
    is_plane_subset,
    reflect,
    relabel,
    rotation_from_points,
    side_contains_vertex,
    side_is_convex,
)

__version__ = "0.1.0"
