"""Canned complexes, covers and towers used by the CLI and the test suites."""

from __future__ import annotations

from itertools import combinations

from .complexes import ChainMap
from .proind import CochainSequence, SimplicialTower
from .simplicial import Carrier, SimplicialComplex, full_simplex


def disc(n: int) -> SimplicialComplex:
    return SimplicialComplex([list(range(n + 1))])


def sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex."""
    return SimplicialComplex(list(combinations(range(n + 2), n + 1)))


def circle(m: int = 3) -> SimplicialComplex:
    if m < 3:
        raise ValueError("a triangulated circle needs at least 3 vertices")
    return SimplicialComplex([[i, (i + 1) % m] for i in range(m)])


def torus() -> SimplicialComplex:
    """Seven-vertex triangulation: faces {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    faces = []
    for i in range(7):
        faces.append([i, (i + 1) % 7, (i + 3) % 7])
        faces.append([i, (i + 2) % 7, (i + 3) % 7])
    return SimplicialComplex(faces)


def klein_bottle(m: int = 4) -> SimplicialComplex:
    """Grid triangulation of the square with a flipped horizontal gluing."""
    if m < 3:
        raise ValueError("grid too small to stay simplicial after gluing")

    def vid(i: int, j: int) -> int:
        j = j % m
        if i % m == 0 and i != 0:
            # full horizontal wrap reverses the vertical direction
            wraps = i // m
            if wraps % 2:
                return vid(0, (m - j) % m)
            return vid(0, j)
        i = i % m
        return i * m + j

    faces = []
    for i in range(m):
        for j in range(m):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            faces.append([a, b, c])
            faces.append([b, d, c])
    return SimplicialComplex(faces)


def projective_plane() -> SimplicialComplex:
    """Six-vertex triangulation of the real projective plane."""
    return SimplicialComplex([
        [1, 2, 3], [1, 2, 4], [1, 3, 5], [1, 4, 6], [1, 5, 6],
        [2, 3, 6], [2, 4, 5], [2, 5, 6], [3, 4, 5], [3, 4, 6],
    ])


def wedge_of_circles(count: int) -> SimplicialComplex:
    """count triangles sharing the vertex 0."""
    if count == 0:
        return SimplicialComplex([[0]])
    faces = []
    for i in range(count):
        a, b = 2 * i + 1, 2 * i + 2
        faces.extend([[0, a], [a, b], [0, b]])
    return SimplicialComplex(faces)


def wedge_chain_cofiltration(depth: int) -> list[SimplicialComplex]:
    """Increasing chain of wedges: stage m has m+1 circles."""
    return [wedge_of_circles(m + 1) for m in range(depth + 1)]


def doubling_carrier(m: int = 6) -> Carrier:
    """Degree-2 self-carrier of the m-gon: the edge (k, k+1) is carried onto
    the two-edge path from 2k to 2k+2, whose middle vertex is a cone point."""
    k = circle(m)
    mapping = {}
    choice = {}
    for s in k.simplices:
        if len(s) == 1:
            (v,) = tuple(s)
            img = frozenset({(2 * v) % m})
            mapping[s] = full_simplex(img)
            choice[s] = (2 * v) % m
        else:
            a = min(s)
            b = max(s)
            if (a, b) == (0, m - 1):
                a = m - 1  # the wrap-around edge starts at m-1
            p0, p1, p2 = (2 * a) % m, (2 * a + 1) % m, (2 * a + 2) % m
            mapping[s] = SimplicialComplex([[p0, p1], [p1, p2]])
            choice[s] = p1
    return Carrier(k, k, mapping, choice=choice)


def solenoid_tower(p: int = 2, stages: int = 2) -> SimplicialTower:
    """Tower of circles with degree-p bondings.

    p == 2 ships as a stationary tower on the hexagon (the doubling carrier
    is a star carrier, so the tail certifies behaviour at infinity).  For
    p >= 3 no circle triangulation admits a degree-p star self-carrier
    (vertex stars contain at most two edges), so the tower uses growing
    stages and reports stay window-scoped.
    """
    if p == 2:
        c = doubling_carrier(6)
        ks = [circle(6)] * max(stages, 1)
        bonds = [c] * (len(ks) - 1)
        return SimplicialTower(ks, bonds, tail=c)
    if p < 2:
        raise ValueError("p must be >= 2")
    base = 3
    ks = [circle(base * p ** i) for i in range(max(stages, 2))]
    bonds = []
    for i in range(len(ks) - 1):
        m_small = base * p ** i
        f = {v: v % m_small for v in ks[i + 1].vertices}
        bonds.append(Carrier.from_vertex_map(ks[i + 1], ks[i], f))
    return SimplicialTower(ks, bonds, tail=None)


def constant_tower(k: SimplicialComplex, stages: int = 1) -> SimplicialTower:
    ident = Carrier.identity(k)
    ks = [k] * max(stages, 1)
    return SimplicialTower(ks, [ident] * (len(ks) - 1), tail=ident)


def delta_pair() -> tuple[SimplicialComplex, SimplicialComplex]:
    """(full triangle, its boundary)."""
    return disc(2), sphere(1)


def times_two_circle_sequence(stages: int = 3) -> CochainSequence:
    """Inductive sequence of circle cochain complexes with degree-2 maps."""
    from .complexes import integral_cochain
    from .simplicial import chain_map_with_support

    chain_map = chain_map_with_support(doubling_carrier(6))
    cx = integral_cochain(chain_map.source)
    co_blocks = {n: chain_map.block(n).transpose()
                 for n in chain_map.source.degrees()}
    eta = ChainMap(cx, cx, co_blocks)
    return CochainSequence([cx] * stages, [eta] * (stages - 1), tail_map=eta)
