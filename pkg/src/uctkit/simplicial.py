"""Finite abstract simplicial complexes, carriers, and supported chain maps.

Chains are oriented: the basis of degree n is the set of strictly increasing
vertex tuples of n-simplices, with the alternating-sign boundary.  The cone
operator kills tuples already containing the apex, which keeps the support
recursion from the acyclic-carrier construction valid verbatim while every
chain group stays finitely generated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .abgroups import FgAbGroup
from .complexes import (
    ChainHomotopy,
    ChainMap,
    FreeComplex,
    LocallySplitSes,
    ThreeCell,
    tensor_complex,
)
from .intlat import IntMatrix


class NotARefinement(ValueError):
    """The fine cover is not a refinement of the coarse one."""


Simplex = frozenset


class SimplicialComplex:
    """Downward-closed family of nonempty finite sets of integer vertices."""

    def __init__(self, facets: Iterable[Iterable[int]]):
        simplices: set[frozenset] = set()
        for f in facets:
            f = frozenset(int(v) for v in f)
            if not f:
                continue
            for r in range(1, len(f) + 1):
                for sub in combinations(sorted(f), r):
                    simplices.add(frozenset(sub))
        self.simplices = frozenset(simplices)
        self.vertices = frozenset(v for s in simplices for v in s)
        self._by_dim: dict[int, list[tuple[int, ...]]] = {}
        for s in simplices:
            self._by_dim.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
        for lst in self._by_dim.values():
            lst.sort()
        self._index = {d: {t: i for i, t in enumerate(lst)}
                       for d, lst in self._by_dim.items()}

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def basis(self, n: int) -> list[tuple[int, ...]]:
        return self._by_dim.get(n, [])

    def basis_index(self, n: int) -> dict[tuple[int, ...], int]:
        return self._index.get(n, {})

    def facets(self) -> list[tuple[int, ...]]:
        out = []
        for s in self.simplices:
            if not any(s < t for t in self.simplices):
                out.append(tuple(sorted(s)))
        return sorted(out, key=lambda t: (len(t), t))

    def contains_simplex(self, s: Iterable[int]) -> bool:
        return frozenset(s) in self.simplices

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.simplices <= other.simplices

    def star(self, v: int) -> "SimplicialComplex":
        """Closed star: simplices s with s + {v} still a simplex."""
        return SimplicialComplex(
            [sorted(s | {v}) for s in self.simplices if (s | {v}) in self.simplices])

    def is_empty(self) -> bool:
        return not self.simplices

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(lst) for d, lst in self._by_dim.items())

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"SimplicialComplex(facets={self.facets()})"


def full_simplex(vertices: Iterable[int]) -> SimplicialComplex:
    return SimplicialComplex([list(vertices)])


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

Chain = dict  # tuple -> int coefficient


def boundary_of_tuple(t: tuple[int, ...]) -> Chain:
    out: Chain = {}
    for i in range(len(t)):
        face = t[:i] + t[i + 1:]
        if face:
            out[face] = out.get(face, 0) + (-1) ** i
    return out


def chain_boundary(ch: Chain) -> Chain:
    out: Chain = {}
    for t, c in ch.items():
        if c == 0:
            continue
        for f, s in boundary_of_tuple(t).items():
            out[f] = out.get(f, 0) + c * s
    return {t: c for t, c in out.items() if c}


def cone(v: int, ch: Chain) -> Chain:
    """v ^ x: prepend the apex; tuples already containing v die."""
    out: Chain = {}
    for t, c in ch.items():
        if c == 0 or v in t:
            continue
        pos = sum(1 for x in t if x < v)
        nt = tuple(sorted(t + (v,)))
        out[nt] = out.get(nt, 0) + c * (-1) ** pos
    return {t: c for t, c in out.items() if c}


def augmentation(ch: Chain) -> int:
    """Sum of degree-0 coefficients."""
    return sum(c for t, c in ch.items() if len(t) == 1)


def oriented_chain_complex(k: SimplicialComplex) -> FreeComplex:
    """Free chain complex on the increasing-tuple bases with alternating boundary."""
    ranks = {n: len(k.basis(n)) for n in range(k.dim + 1)}
    diffs = {}
    for n in range(1, k.dim + 1):
        rows = len(k.basis(n - 1))
        cols = len(k.basis(n))
        idx = k.basis_index(n - 1)
        m = [[0] * cols for _ in range(rows)]
        for j, t in enumerate(k.basis(n)):
            for f, s in boundary_of_tuple(t).items():
                m[idx[f]][j] += s
        diffs[n] = IntMatrix(rows, cols, m)
    return FreeComplex("chain", ranks, diffs)


def augmentation_matrix(k: SimplicialComplex) -> IntMatrix:
    return IntMatrix(1, len(k.basis(0)), [[1] * len(k.basis(0))])


def chain_to_vector(k: SimplicialComplex, n: int, ch: Chain) -> tuple[int, ...]:
    idx = k.basis_index(n)
    vec = [0] * len(k.basis(n))
    for t, c in ch.items():
        if c == 0:
            continue
        if len(t) - 1 != n:
            raise ValueError("chain is not homogeneous of the right degree")
        vec[idx[t]] = c
    return tuple(vec)


def vector_to_chain(k: SimplicialComplex, n: int, vec: Sequence[int]) -> Chain:
    return {t: v for t, v in zip(k.basis(n), vec) if v}


# ---------------------------------------------------------------------------
# carriers
# ---------------------------------------------------------------------------

class Carrier:
    """Monotone assignment of subcomplexes of the target to simplices of the
    source.  Star carriers carry a choice function w with
    St_{carrier(s)}(w(s)) = carrier(s); simplicial carriers assign simplices
    and are automatically star (any vertex of the image simplex works)."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex,
                 mapping: Mapping[frozenset, SimplicialComplex],
                 choice: Mapping[frozenset, int] | None = None,
                 check: bool = True):
        self.source = source
        self.target = target
        self.mapping = {frozenset(s): sub for s, sub in mapping.items()}
        self.choice = {frozenset(s): v for s, v in choice.items()} if choice else None
        if check:
            self.verify()

    def __call__(self, s: Iterable[int]) -> SimplicialComplex:
        return self.mapping[frozenset(s)]

    def verify(self) -> None:
        for s in self.source.simplices:
            if s not in self.mapping:
                raise ValueError(f"carrier is missing the simplex {sorted(s)}")
            img = self.mapping[s]
            if img.is_empty():
                raise ValueError(f"carrier image of {sorted(s)} is empty")
            if not img.is_subcomplex_of(self.target):
                raise ValueError(f"carrier image of {sorted(s)} is not in the target")
        for s in self.source.simplices:
            for t in self.source.simplices:
                if s < t and not self.mapping[s].is_subcomplex_of(self.mapping[t]):
                    raise ValueError("carrier is not monotone")
        if self.choice is not None:
            for s in self.source.simplices:
                w = self.choice[s]
                img = self.mapping[s]
                if img.star(w) != img:
                    raise ValueError(f"choice vertex {w} is not a cone point of the "
                                     f"image of {sorted(s)}")

    def is_simplicial(self) -> bool:
        for s in self.source.simplices:
            img = self.mapping[s]
            if not img.contains_simplex(img.vertices):
                return False
        return True

    def star_choice(self) -> dict[frozenset, int]:
        """A choice function: the given one, or the least cone point."""
        if self.choice is not None:
            return dict(self.choice)
        out = {}
        for s in self.source.simplices:
            img = self.mapping[s]
            for v in sorted(img.vertices):
                if img.star(v) == img:
                    out[s] = v
                    break
            else:
                raise ValueError(f"carrier image of {sorted(s)} has no cone point")
        return out

    def compose(self, inner: "Carrier") -> "Carrier":
        """self o inner, evaluated simplexwise and unioned over images."""
        mapping = {}
        for s in inner.source.simplices:
            img = inner.mapping[s]
            facets: list[tuple[int, ...]] = []
            for t in img.simplices:
                facets.extend(self.mapping[t].facets())
            mapping[s] = SimplicialComplex(facets)
        return Carrier(inner.source, self.target, mapping, check=False)

    def leq(self, other: "Carrier") -> bool:
        return all(self.mapping[s].is_subcomplex_of(other.mapping[s])
                   for s in self.source.simplices)

    @classmethod
    def from_vertex_map(cls, source: SimplicialComplex, target: SimplicialComplex,
                        f: Mapping[int, int]) -> "Carrier":
        mapping = {}
        choice = {}
        for s in source.simplices:
            img = frozenset(f[v] for v in s)
            if img not in target.simplices:
                raise ValueError(f"vertex map is not simplicial on {sorted(s)}")
            mapping[s] = full_simplex(img)
            choice[s] = min(img)
        return cls(source, target, mapping, choice=choice)

    @classmethod
    def identity(cls, k: SimplicialComplex) -> "Carrier":
        return cls.from_vertex_map(k, k, {v: v for v in k.vertices})


# ---------------------------------------------------------------------------
# supported chain maps via the cone recursion
# ---------------------------------------------------------------------------

def _support_ok(ch: Chain, sub: SimplicialComplex) -> bool:
    return all(sub.contains_simplex(t) for t in ch)


def chain_map_with_support(carrier: Carrier,
                           choice: Mapping[frozenset, int] | None = None) -> ChainMap:
    """Augmentation-preserving chain map supported by a star carrier.

    f(v) = w({v}) in degree 0 and f(s) = w(s) ^ f(boundary s) above; the
    output is checked to be a chain map whose image chains stay inside the
    carrier of each simplex.
    """
    k, l = carrier.source, carrier.target
    w = dict(choice) if choice is not None else carrier.star_choice()
    values: dict[tuple[int, ...], Chain] = {}

    def f_of(t: tuple[int, ...]) -> Chain:
        got = values.get(t)
        if got is not None:
            return got
        s = frozenset(t)
        if len(t) == 1:
            out = {(w[s],): 1}
        else:
            acc: Chain = {}
            for face, sign in boundary_of_tuple(t).items():
                for u, c in f_of(face).items():
                    acc[u] = acc.get(u, 0) + sign * c
            out = cone(w[s], {u: c for u, c in acc.items() if c})
        values[t] = out
        if not _support_ok(out, carrier.mapping[s]):
            raise ValueError(f"support violated on {t}")
        return out

    src = oriented_chain_complex(k)
    tgt = oriented_chain_complex(l)
    blocks = {}
    for n in range(k.dim + 1):
        cols = []
        for t in k.basis(n):
            cols.append(chain_to_vector(l, n, f_of(t)))
        if cols:
            blocks[n] = IntMatrix.from_columns(cols, rows=len(l.basis(n)))
    f = ChainMap(src, tgt, blocks)
    if augmentation_matrix(l) @ f.block(0) != augmentation_matrix(k):
        raise AssertionError("constructed chain map does not preserve augmentation")
    return f


def homotopy_with_support(f: ChainMap, g: ChainMap, carrier: Carrier,
                          choice: Mapping[frozenset, int] | None = None) -> ChainHomotopy:
    """Chain homotopy f => g when both are supported by the star carrier."""
    k, l = carrier.source, carrier.target
    w = dict(choice) if choice is not None else carrier.star_choice()
    values: dict[tuple[int, ...], Chain] = {}

    def big_f(t: tuple[int, ...]) -> Chain:
        got = values.get(t)
        if got is not None:
            return got
        s = frozenset(t)
        n = len(t) - 1
        j = k.basis_index(n)[t]
        diff_vec = [g.block(n)[i, j] - f.block(n)[i, j] for i in range(len(l.basis(n)))]
        acc = dict(vector_to_chain(l, n, diff_vec))
        if n > 0:
            for face, sign in boundary_of_tuple(t).items():
                for u, c in big_f(face).items():
                    acc[u] = acc.get(u, 0) - sign * c
        out = cone(w[s], {u: c for u, c in acc.items() if c})
        values[t] = out
        if not _support_ok(out, carrier.mapping[s]):
            raise ValueError(f"support violated on {t}")
        return out

    blocks = {}
    for n in range(k.dim + 1):
        cols = [chain_to_vector(l, n + 1, big_f(t)) for t in k.basis(n)]
        if cols:
            blocks[n] = IntMatrix.from_columns(cols, rows=len(l.basis(n + 1)))
    return ChainHomotopy(f, g, blocks)


def three_cell_with_support(F: ChainHomotopy, F2: ChainHomotopy, carrier: Carrier,
                            choice: Mapping[frozenset, int] | None = None) -> ThreeCell:
    """3-cell F => F2 for homotopies with the same endpoints and support."""
    k, l = carrier.source, carrier.target
    w = dict(choice) if choice is not None else carrier.star_choice()
    values: dict[tuple[int, ...], Chain] = {}

    def e_of(t: tuple[int, ...]) -> Chain:
        got = values.get(t)
        if got is not None:
            return got
        s = frozenset(t)
        n = len(t) - 1
        j = k.basis_index(n)[t]
        diff_vec = [F2.block(n)[i, j] - F.block(n)[i, j]
                    for i in range(len(l.basis(n + 1)))]
        acc = dict(vector_to_chain(l, n + 1, diff_vec))
        if n > 0:
            for face, sign in boundary_of_tuple(t).items():
                for u, c in e_of(face).items():
                    acc[u] = acc.get(u, 0) + sign * c
        out = cone(w[s], {u: c for u, c in acc.items() if c})
        values[t] = out
        if not _support_ok(out, carrier.mapping[s]):
            raise ValueError(f"support violated on {t}")
        return out

    blocks = {}
    for n in range(k.dim + 1):
        cols = [chain_to_vector(l, n + 2, e_of(t)) for t in k.basis(n)]
        if cols:
            blocks[n] = IntMatrix.from_columns(cols, rows=len(l.basis(n + 2)))
    return ThreeCell(F, F2, blocks)


# ---------------------------------------------------------------------------
# barycentric subdivision
# ---------------------------------------------------------------------------

@dataclass
class Subdivision:
    complex: SimplicialComplex
    vertex_of: dict[frozenset, int]          # simplex of K -> vertex of Sd(K)
    simplex_of: dict[int, frozenset]
    collapse: Carrier                        # Sd(K) -> K, chain -> its top simplex
    refine: Carrier                          # K -> Sd(K), simplex -> its subdivision


def barycentric_subdivision(k: SimplicialComplex) -> Subdivision:
    simplices = sorted(k.simplices, key=lambda s: (len(s), tuple(sorted(s))))
    vertex_of = {s: i for i, s in enumerate(simplices)}
    simplex_of = {i: s for s, i in vertex_of.items()}

    chains: list[tuple[frozenset, ...]] = []

    def extend(chain):
        chains.append(tuple(chain))
        top = chain[-1]
        for s in simplices:
            if top < s:
                extend(chain + [s])

    for s in simplices:
        extend([s])
    sd = SimplicialComplex([[vertex_of[x] for x in ch] for ch in chains])

    collapse_map = {}
    collapse_choice = {}
    for ch in sd.simplices:
        top = max((simplex_of[v] for v in ch), key=len)
        collapse_map[ch] = full_simplex(top)
        collapse_choice[ch] = min(top)
    collapse = Carrier(sd, k, collapse_map, choice=collapse_choice)

    refine_map = {}
    refine_choice = {}
    for s in k.simplices:
        faces = [f for f in k.simplices if f <= s]
        sub_chains = []
        for ch in chains:
            if all(x <= s for x in ch):
                sub_chains.append([vertex_of[x] for x in ch])
        refine_map[s] = SimplicialComplex(sub_chains)
        refine_choice[s] = vertex_of[s]
    refine = Carrier(k, sd, refine_map, choice=refine_choice)
    return Subdivision(complex=sd, vertex_of=vertex_of, simplex_of=simplex_of,
                       collapse=collapse, refine=refine)


# ---------------------------------------------------------------------------
# covers and nerves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverSystem:
    """Combinatorial cover: sample points 0..ground-1 and subsets indexed 0..len-1."""

    ground: int
    sets: tuple[frozenset, ...]

    @classmethod
    def build(cls, ground: int, sets: Iterable[Iterable[int]]) -> "CoverSystem":
        ss = tuple(frozenset(int(p) for p in s) for s in sets)
        union = frozenset().union(*ss) if ss else frozenset()
        if union != frozenset(range(ground)):
            raise ValueError("cover does not exhaust the ground set")
        return cls(ground, ss)


def nerve(cover: CoverSystem) -> SimplicialComplex:
    """Simplices = index sets with nonempty common intersection."""
    facets = []
    for p in range(cover.ground):
        sigma = [i for i, s in enumerate(cover.sets) if p in s]
        if sigma:
            facets.append(sigma)
    return SimplicialComplex(facets)


def refinement_carrier(fine: CoverSystem, coarse: CoverSystem) -> Carrier:
    """sigma -> { j : intersection of the fine sets over sigma lies in V_j }."""
    for i, u in enumerate(fine.sets):
        if u and not any(u <= v for v in coarse.sets):
            raise NotARefinement(f"fine set {i} is contained in no coarse set")
    src = nerve(fine)
    tgt = nerve(coarse)
    mapping = {}
    choice = {}
    for s in src.simplices:
        inter = frozenset(range(fine.ground))
        for i in s:
            inter &= fine.sets[i]
        img = frozenset(j for j, v in enumerate(coarse.sets) if inter <= v)
        if img not in tgt.simplices:
            raise NotARefinement(f"image of {sorted(s)} is not a coarse simplex")
        mapping[s] = full_simplex(img)
        choice[s] = min(img)
    return Carrier(src, tgt, mapping, choice=choice)


# ---------------------------------------------------------------------------
# pairs
# ---------------------------------------------------------------------------

def relative_pair(k: SimplicialComplex, sub: SimplicialComplex,
                  coeff: FgAbGroup | None = None) -> LocallySplitSes:
    """0 -> C(sub) -> C(K) -> C(K, sub) -> 0, split in every degree by the
    basis alignment (relative basis = simplices of K not in sub)."""
    if not sub.is_subcomplex_of(k):
        raise ValueError("not a subcomplex")
    ck = oriented_chain_complex(k)
    csub = oriented_chain_complex(sub)
    rel_basis = {n: [t for t in k.basis(n) if frozenset(t) not in sub.simplices]
                 for n in range(k.dim + 1)}

    inc_blocks = {}
    proj_blocks = {}
    sec_blocks = {}
    ret_blocks = {}
    for n in range(k.dim + 1):
        kb = k.basis(n)
        kidx = k.basis_index(n)
        sb = sub.basis(n)
        rb = rel_basis[n]
        ridx = {t: i for i, t in enumerate(rb)}
        inc = [[0] * len(sb) for _ in range(len(kb))]
        for j, t in enumerate(sb):
            inc[kidx[t]][j] = 1
        proj = [[0] * len(kb) for _ in range(len(rb))]
        for i, t in enumerate(rb):
            proj[i][kidx[t]] = 1
        inc_blocks[n] = IntMatrix.from_rows(inc, cols=len(sb))
        proj_blocks[n] = IntMatrix.from_rows(proj, cols=len(kb))
        sec_blocks[n] = proj_blocks[n].transpose()
        ret_blocks[n] = inc_blocks[n].transpose()

    rel_ranks = {n: len(rel_basis[n]) for n in range(k.dim + 1)}
    rel_diffs = {}
    for n in range(1, k.dim + 1):
        rel_diffs[n] = proj_blocks[n - 1] @ ck.diff(n) @ sec_blocks[n]
    crel = FreeComplex("chain", rel_ranks, rel_diffs)

    if coeff is not None:
        csub = tensor_complex(csub, coeff)
        ck_c = tensor_complex(ck, coeff)
        crel = tensor_complex(crel, coeff)
        include = ChainMap(csub, ck_c, inc_blocks)
        project = ChainMap(ck_c, crel, proj_blocks)
    else:
        include = ChainMap(csub, ck, inc_blocks)
        project = ChainMap(ck, crel, proj_blocks)
    return LocallySplitSes(include, project, sec_blocks, ret_blocks)
