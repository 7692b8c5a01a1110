"""Facet-level profiles, the compressedness certificate, and the cube embedding.

A lattice polytope is compressed exactly when, for every facet, the lattice
points of the polytope sit on at most one hyperplane strictly beyond the
facet: the facet "levels".  Levels are reported in the normalization where
the facet normal is primitive on the polytope's lattice, so they are always
integers.  A second-level witness pair is the seed for the LP/IP gap
construction in the bounds module.

Certified-compressed polytopes embed into a unit cube: sending a point to its
vector of scaled facet slacks is an affine map under which the polytope
becomes a 0/1 polytope that is a full cube section.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import dot, rref
from .polytope import LatticePolytope
from .simplex import solve_box_program


@dataclass(frozen=True)
class FacetLevelProfile:
    """Positive lattice levels realized beyond one facet, with witnesses."""

    facet: object
    levels: tuple
    witnesses: tuple

    def __post_init__(self):
        assert list(self.levels) == sorted(set(self.levels))
        assert all(m > 0 for m in self.levels)


@dataclass(frozen=True)
class Violation:
    """Two distinct positive levels beyond one facet (high first)."""

    facet: object
    high_level: int
    low_level: int
    high_witness: tuple
    low_witness: tuple


@dataclass(frozen=True)
class CompressedCertificate:
    verdict: bool
    profiles: tuple
    violation: Violation | None


def _profile(polytope, facet):
    witnesses = {}
    pts = polytope.lattice_points()
    if facet.generator_slacks is not None and pts == polytope.generators:
        # every lattice point is a generator: reuse enumeration-time slacks
        for p, s in zip(pts, facet.generator_slacks):
            if s > 0 and s not in witnesses:
                witnesses[s] = p
    else:
        for p, z in zip(pts, polytope.lattice_point_hull_coords()):
            s = facet.lattice_slack(z)
            if s > 0 and s not in witnesses:
                witnesses[s] = p
    levels = tuple(sorted(witnesses))
    return FacetLevelProfile(
        facet=facet, levels=levels, witnesses=tuple(witnesses[m] for m in levels)
    )


def facet_levels(polytope, facet):
    """Profile of one facet: the distinct positive slack levels over the
    lattice points, measured with the lattice-primitive normal."""
    if facet not in polytope.facet_set():
        raise ValueError("facet does not belong to the polytope")
    return _profile(polytope, facet)


def is_compressed(polytope):
    """Certificate that every facet sees at most one positive lattice level.

    On failure the violation reports the lexicographically first offending
    facet with witnesses for its extreme levels.
    """
    profiles = []
    violation = None
    for facet in polytope.facets():
        profile = _profile(polytope, facet)
        profiles.append(profile)
        if violation is None and len(profile.levels) >= 2:
            violation = Violation(
                facet=facet,
                high_level=profile.levels[-1],
                low_level=profile.levels[0],
                high_witness=profile.witnesses[-1],
                low_witness=profile.witnesses[0],
            )
    return CompressedCertificate(
        verdict=violation is None, profiles=tuple(profiles), violation=violation
    )


@dataclass(frozen=True)
class CubeEmbedding:
    """The affine map x -> ((a_i . x - b_i) / m_i) over the facet list."""

    normals: tuple
    offsets: tuple
    levels: tuple

    def apply(self, point):
        values = []
        for a, b, m in zip(self.normals, self.offsets, self.levels):
            v = Fraction(dot(a, point) - b, m)
            values.append(int(v) if v.denominator == 1 else v)
        return tuple(values)


def cube_embedding(polytope):
    """Embed a compressed polytope as a 0/1 polytope via scaled facet slacks.

    Returns (map, image polytope).  The map is injective on lattice points
    and sends them onto the image's lattice points, which is what makes the
    image a faithful replacement for the original.
    """
    cert = is_compressed(polytope)
    if not cert.verdict:
        raise ValueError("cube embedding is only defined for compressed polytopes")
    normals = []
    offsets = []
    levels = []
    for profile in cert.profiles:
        facet = profile.facet
        ambient_level = max(facet.evaluate(p) for p in polytope.lattice_points())
        normals.append(facet.normal)
        offsets.append(facet.offset)
        levels.append(ambient_level)
    emb = CubeEmbedding(tuple(normals), tuple(offsets), tuple(levels))
    images = [emb.apply(p) for p in polytope.lattice_points()]
    if len(set(images)) != len(images):
        raise ValueError("embedding failed to separate lattice points")
    image = LatticePolytope(images)
    return emb, image


def zero_one_points_of_affine_hull(polytope):
    """All 0/1 vectors satisfying the polytope's affine-hull equations.

    Enumerates only the free coordinates of the reduced equation system, so
    the cost is 2^dim rather than 2^ambient.
    """
    n = polytope.ambient_dim
    eqs = polytope.hull_equations()
    rows = [[Fraction(x) for x in a] + [Fraction(b)] for a, b in eqs]
    reduced, pivots = rref(rows)
    if any(c == n for c in pivots):
        return []
    free = [j for j in range(n) if j not in pivots]
    out = []
    for mask in range(2 ** len(free)):
        point = [None] * n
        for k, j in enumerate(free):
            point[j] = mask >> k & 1
        ok = True
        for row, c in zip(reduced, pivots):
            v = row[-1] - sum(row[j] * point[j] for j in free)
            if v != 0 and v != 1:
                ok = False
                break
            point[c] = int(v)
        if ok:
            out.append(tuple(point))
    return sorted(out)


def verify_cube_section(polytope):
    """Whether the polytope equals (unit cube) ∩ (its own affine hull).

    Checks three exact conditions: all generators are 0/1; the 0/1 points of
    the affine hull are exactly the polytope's lattice points; and every
    facet inequality is valid on the whole cube section (an exact LP per
    facet), which rules out fractional vertices outside the polytope.
    """
    n = polytope.ambient_dim
    if any(x not in (0, 1) for p in polytope.generators for x in p):
        return False
    cube_pts = zero_one_points_of_affine_hull(polytope)
    if set(cube_pts) != set(polytope.lattice_points()):
        return False
    eqs = polytope.hull_equations()
    eq_rows = [a for a, _ in eqs]
    eq_rhs = [b for _, b in eqs]
    for facet in polytope.facets():
        res = solve_box_program(eq_rows, eq_rhs, facet.normal, n, maximize=False)
        if res.status != "optimal" or res.value < facet.offset:
            return False
    return True
