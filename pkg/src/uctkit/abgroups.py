"""Finitely generated abelian groups and the Hom/Ext/tensor/Tor functors.

Groups come in two flavors:

* ``FgAbGroup`` -- the canonical value (free rank + invariant factors);
  equality of canonical forms is the isomorphism test everywhere.
* ``PresentedGroup`` -- a group with a fixed diagonal presentation
  (one generator per listed order, 0 meaning an infinite-order generator).
  Homology groups, Hom/Ext groups and all induced maps are computed on
  presentations and only collapsed to canonical form for display.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Literal, Sequence

from .intlat import IntMatrix, LinearSolver, kernel_basis, smith_normal_form


def invariant_factors(cyclic_orders: Sequence[int]) -> tuple[int, ...]:
    """Merge a multiset of cyclic orders (each >= 2) into a divisibility chain."""
    primes: dict[int, list[int]] = {}
    for q in cyclic_orders:
        if q < 2:
            raise ValueError(f"cyclic order must be >= 2, got {q}")
        n, p = q, 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                primes.setdefault(p, []).append(e)
            p += 1
        if n > 1:
            primes.setdefault(n, []).append(1)
    depth = max((len(v) for v in primes.values()), default=0)
    factors = []
    for k in range(depth):
        f = 1
        for p, exps in primes.items():
            exps_sorted = sorted(exps, reverse=True)
            if k < len(exps_sorted):
                f *= p ** exps_sorted[k]
        factors.append(f)
    factors.reverse()  # ascending divisibility chain q1 | q2 | ...
    return tuple(factors)


@dataclass(frozen=True)
class FgAbGroup:
    """Canonical form: free rank plus invariant factors q1 | q2 | ... (each >= 2)."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    presentation_witness: IntMatrix | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(q < 2 for q in self.torsion):
            raise ValueError("invariant factors must be >= 2")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if not self.is_finite():
            raise ValueError("group is infinite")
        n = 1
        for q in self.torsion:
            n *= q
        return n

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(self.free_rank + other.free_rank,
                         invariant_factors(self.torsion + other.torsion))

    def __str__(self) -> str:
        return format_group(self)


ZERO_GROUP = FgAbGroup(0, ())
Z = FgAbGroup(1, ())


def cyclic(q: int) -> FgAbGroup:
    """Z for q == 0, Z/q for q >= 2."""
    if q == 0:
        return Z
    return FgAbGroup(0, (q,))


def format_group(g: FgAbGroup) -> str:
    parts = []
    if g.free_rank == 1:
        parts.append("Z")
    elif g.free_rank > 1:
        parts.append(f"Z^{g.free_rank}")
    parts.extend(f"Z/{q}" for q in g.torsion)
    return " + ".join(parts) if parts else "0"


_TERM = re.compile(r"^(?:(Z)(?:\^(\d+))?|Z/(\d+)|0)$")


def parse_group(text: str) -> FgAbGroup:
    """Parse the coefficient grammar: "Z", "Z/4", "Z^2+Z/2+Z/9", "0".

    The result is canonicalized, so "Z/2+Z/4" and "Z/4+Z/2" parse equal.
    """
    rank = 0
    orders: list[int] = []
    for raw in text.split("+"):
        term = raw.strip()
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse group term {term!r}")
        if m.group(1):
            rank += int(m.group(2)) if m.group(2) else 1
        elif m.group(3):
            q = int(m.group(3))
            if q < 1:
                raise ValueError(f"bad cyclic order {q}")
            if q > 1:
                orders.append(q)
        # "0" contributes nothing
    return FgAbGroup(rank, invariant_factors(orders))


def group_from_presentation(R: IntMatrix) -> FgAbGroup:
    """Cokernel of R: generators = rows, relations = columns."""
    diag = smith_normal_form(R).diagonal()
    rank = R.rows - sum(1 for d in diag if d != 0)
    torsion = invariant_factors([d for d in diag if d >= 2])
    return FgAbGroup(rank, torsion, presentation_witness=R)


def _pairwise_sum(A: FgAbGroup, G: FgAbGroup, piece) -> FgAbGroup:
    """Direct sum of piece(o, c) over cyclic summands; 0 encodes a Z summand."""
    a_orders = [0] * A.free_rank + list(A.torsion)
    g_orders = [0] * G.free_rank + list(G.torsion)
    out = ZERO_GROUP
    for o in a_orders:
        for c in g_orders:
            out = out.direct_sum(piece(o, c))
    return out


def hom_group(A: FgAbGroup, G: FgAbGroup) -> FgAbGroup:
    """Hom(A, G): Hom(Z,G)=G, Hom(Z/m,G)=G[m]; biadditive."""
    def piece(o, c):
        if o == 0:
            return cyclic(c)
        if c == 0:
            return ZERO_GROUP
        return cyclic(gcd(o, c)) if gcd(o, c) > 1 else ZERO_GROUP
    return _pairwise_sum(A, G, piece)


def ext_group(A: FgAbGroup, G: FgAbGroup) -> FgAbGroup:
    """Ext(A, G): Ext(Z,G)=0, Ext(Z/m,G)=G/mG; biadditive."""
    def piece(o, c):
        if o == 0:
            return ZERO_GROUP
        if c == 0:
            return cyclic(o)
        return cyclic(gcd(o, c)) if gcd(o, c) > 1 else ZERO_GROUP
    return _pairwise_sum(A, G, piece)


def tensor_group(A: FgAbGroup, G: FgAbGroup) -> FgAbGroup:
    """A (x) G with the classical bilinear rules; on free A this agrees with
    the dual-of-dual coefficient complex convention used by g_dual."""
    def piece(o, c):
        if o == 0:
            return cyclic(c)
        if c == 0:
            return cyclic(o)
        return cyclic(gcd(o, c)) if gcd(o, c) > 1 else ZERO_GROUP
    return _pairwise_sum(A, G, piece)


def tor_group(A: FgAbGroup, G: FgAbGroup) -> FgAbGroup:
    """Tor(A, G): vanishes when either argument is free; Tor(Z/m,Z/n)=Z/gcd."""
    def piece(o, c):
        if o == 0 or c == 0:
            return ZERO_GROUP
        return cyclic(gcd(o, c)) if gcd(o, c) > 1 else ZERO_GROUP
    return _pairwise_sum(A, G, piece)


# ---------------------------------------------------------------------------
# presented groups, subgroups, morphisms
# ---------------------------------------------------------------------------

class PresentedGroup:
    """Direct sum of cyclic groups with a fixed generator list.

    ``orders[i]`` is 0 for an infinite-order generator and q >= 2 for Z/q.
    Elements are integer coordinate vectors taken modulo the orders.
    """

    __slots__ = ("orders",)

    def __init__(self, orders: Sequence[int]):
        if any(o == 1 or o < 0 for o in orders):
            raise ValueError("orders must be 0 or >= 2")
        self.orders = tuple(int(o) for o in orders)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def fg(self) -> FgAbGroup:
        return FgAbGroup(sum(1 for o in self.orders if o == 0),
                         invariant_factors([o for o in self.orders if o >= 2]))

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(a % o if o else a for a, o in zip(v, self.orders))

    def is_zero_element(self, v: Sequence[int]) -> bool:
        return all((a % o if o else a) == 0 for a, o in zip(v, self.orders))

    def relation_columns(self) -> list[tuple[int, ...]]:
        cols = []
        for i, o in enumerate(self.orders):
            if o:
                cols.append(tuple(o if k == i else 0 for k in range(self.ngens)))
        return cols

    def __eq__(self, other):
        return isinstance(other, PresentedGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    def __repr__(self):
        return f"PresentedGroup(orders={self.orders})"


class Subgroup:
    """Subgroup of a PresentedGroup spanned by integer generator columns."""

    def __init__(self, ambient: PresentedGroup, generators: Sequence[Sequence[int]]):
        self.ambient = ambient
        self.generators = [tuple(g) for g in generators]
        for g in self.generators:
            if len(g) != ambient.ngens:
                raise ValueError("generator length mismatch")
        cols = self.generators + ambient.relation_columns()
        self._lattice = IntMatrix.from_columns(cols, rows=ambient.ngens)
        self._solver: LinearSolver | None = None

    def _get_solver(self) -> LinearSolver:
        if self._solver is None:
            self._solver = LinearSolver(self._lattice)
        return self._solver

    def contains(self, v: Sequence[int]) -> bool:
        return self._get_solver().solve(list(v)) is not None

    def leq(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "Subgroup") -> bool:
        return self.leq(other) and other.leq(self)

    def is_trivial(self) -> bool:
        return all(self.ambient.is_zero_element(g) for g in self.generators)

    def is_full(self) -> bool:
        n = self.ambient.ngens
        return all(self.contains(tuple(1 if k == i else 0 for k in range(n)))
                   for i in range(n))

    def group(self) -> FgAbGroup:
        """Abstract group structure of the subgroup itself."""
        basis = column_space_basis(self._lattice)
        if basis.cols == 0:
            return ZERO_GROUP
        solver = LinearSolver(basis)
        rel_cols = []
        for col in self.ambient.relation_columns():
            x = solver.solve(col)
            assert x is not None
            rel_cols.append(x)
        rel = IntMatrix.from_columns(rel_cols, rows=basis.cols)
        return group_from_presentation(rel)


def saturate(s: Subgroup) -> Subgroup:
    """{x : k x in S for some k >= 1}: the rational span of S's lattice
    intersected with the ambient, which in particular absorbs all torsion."""
    lat = s._lattice
    if lat.cols == 0:
        gens: list[tuple[int, ...]] = []
    else:
        perp = kernel_basis(lat.transpose())
        sat = kernel_basis(perp.transpose())
        gens = [sat.column(j) for j in range(sat.cols)]
    gens.extend(s.ambient.relation_columns())
    return Subgroup(s.ambient, gens)


def column_space_basis(M: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of M.

    From U M V = D: the image lattice is spanned by the columns U^{-1} (d_i e_i).
    """
    snf = smith_normal_form(M)
    from .intlat import unimodular_inverse
    uinv = unimodular_inverse(snf.U)
    cols = []
    for i, d in enumerate(snf.diagonal()):
        if d:
            cols.append(tuple(d * uinv[r, i] for r in range(M.rows)))
    return IntMatrix.from_columns(cols, rows=M.rows)


class GroupMorphism:
    """Homomorphism between presented groups, as an integer matrix on generators."""

    def __init__(self, source: PresentedGroup, target: PresentedGroup,
                 matrix: IntMatrix, check: bool = True):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not match "
                             f"({target.ngens}, {source.ngens})")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            self._check_well_defined()

    def _check_well_defined(self):
        # each source relation o_j * e_j must map to zero in the target
        for j, o in enumerate(self.source.orders):
            if o == 0:
                continue
            col = self.matrix.column(j)
            if not self.target.is_zero_element([o * a for a in col]):
                raise ValueError(f"matrix does not respect source relation of order {o}")

    @classmethod
    def zero(cls, source: PresentedGroup, target: PresentedGroup) -> "GroupMorphism":
        return cls(source, target, IntMatrix.zero(target.ngens, source.ngens), check=False)

    @classmethod
    def identity(cls, g: PresentedGroup) -> "GroupMorphism":
        return cls(g, g, IntMatrix.identity(g.ngens), check=False)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(v))

    def compose(self, other: "GroupMorphism") -> "GroupMorphism":
        """self o other."""
        if other.target.orders != self.source.orders:
            raise ValueError("composition mismatch")
        return GroupMorphism(other.source, self.target, self.matrix @ other.matrix,
                             check=False)

    def __add__(self, other: "GroupMorphism") -> "GroupMorphism":
        return GroupMorphism(self.source, self.target, self.matrix + other.matrix,
                             check=False)

    def __sub__(self, other: "GroupMorphism") -> "GroupMorphism":
        return GroupMorphism(self.source, self.target, self.matrix - other.matrix,
                             check=False)

    def equals(self, other: "GroupMorphism") -> bool:
        if self.source.orders != other.source.orders or self.target.orders != other.target.orders:
            return False
        diff = self.matrix - other.matrix
        return all(self.target.is_zero_element(diff.column(j))
                   for j in range(diff.cols))

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(self.matrix.column(j))
                   for j in range(self.matrix.cols))

    def image(self) -> Subgroup:
        return Subgroup(self.target, self.matrix.columns())

    def kernel(self) -> Subgroup:
        """Generators of {v : f(v) = 0 in target} as a subgroup of the source."""
        rel = self.target.relation_columns()
        sys = self.matrix
        if rel:
            sys = sys.hstack(IntMatrix.from_columns(rel, rows=self.target.ngens))
        ker = kernel_basis(sys)
        gens = [tuple(ker[i, j] for i in range(self.source.ngens))
                for j in range(ker.cols)]
        gens.extend(self.source.relation_columns())
        return Subgroup(self.source, gens)

    def is_isomorphism(self) -> bool:
        return (self.source.fg() == self.target.fg()
                and self.kernel().is_trivial() and self.image().is_full())

    def __repr__(self):
        return f"GroupMorphism({self.matrix.to_lists()})"


def exact_at(f: GroupMorphism, g: GroupMorphism) -> bool:
    """im(f) == ker(g) for composable f, g (g o f must make sense)."""
    if f.target.orders != g.source.orders:
        raise ValueError("maps are not composable")
    return f.image().equals(g.kernel())


# ---------------------------------------------------------------------------
# rank-one inductive groups (solenoid-type colimits of Z)
# ---------------------------------------------------------------------------

ExtClassTag = Literal["zero", "fg", "uncountable"]


@dataclass(frozen=True)
class RankOneIndGroup:
    """colim(Z -> Z -> ...) with the listed multipliers, then an optional
    stationary multiplier repeated forever.  Isomorphic to a subgroup of Q."""

    multipliers: tuple[int, ...] = ()
    stationary: int | None = None

    def __post_init__(self):
        if any(m <= 0 for m in self.multipliers):
            raise ValueError("multipliers must be positive")
        if self.stationary is not None and self.stationary <= 0:
            raise ValueError("stationary multiplier must be positive")

    def is_finitely_generated(self) -> bool:
        return self.stationary is None or self.stationary == 1


@dataclass(frozen=True)
class RankOneReport:
    hom: FgAbGroup
    ext_class: ExtClassTag
    ext_group: FgAbGroup | None = None


def rank_one_classify(A: RankOneIndGroup, G: FgAbGroup) -> RankOneReport:
    """Hom(colim, G) as the compatible-family group, plus an Ext classification.

    Hom is the inverse limit of (G <-p- G <-p- ...) along the stationary
    multiplier p; for f.g. A it is just G.  Ext(A, G) is zero for f.g. A,
    and otherwise sits in 0 -> lim^1 Hom -> Ext -> lim Ext(Z,G)=0 -> 0,
    so it is uncountable exactly when the Hom tower is not Mittag-Leffler,
    i.e. when G has a free summand.
    """
    if A.is_finitely_generated():
        return RankOneReport(hom=G, ext_class="zero", ext_group=ZERO_GROUP)
    p = A.stationary
    assert p is not None and p >= 2
    # free part dies: a compatible family needs g0 in the intersection of p^k G;
    # on a cyclic summand that strips every prime shared with p
    orders = []
    for q in G.torsion:
        reduced = q
        g = gcd(reduced, p)
        while g > 1:
            while reduced % g == 0:
                reduced //= g
            g = gcd(reduced, p)
        if reduced > 1:
            orders.append(reduced)
    hom = FgAbGroup(0, invariant_factors(orders))
    if G.free_rank >= 1:
        return RankOneReport(hom=hom, ext_class="uncountable", ext_group=None)
    return RankOneReport(hom=hom, ext_class="zero", ext_group=ZERO_GROUP)


# ---------------------------------------------------------------------------
# finite-group element bookkeeping (used by the cocycle machinery)
# ---------------------------------------------------------------------------

class FiniteGroupTable:
    """All elements of a finite FgAbGroup as coordinate tuples, with arithmetic."""

    def __init__(self, group: FgAbGroup):
        if not group.is_finite():
            raise ValueError("group must be finite")
        self.group = group
        self.orders = group.torsion
        self.elements: list[tuple[int, ...]] = [()]
        for q in self.orders:
            self.elements = [e + (a,) for e in self.elements for a in range(q)]
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.zero = tuple(0 for _ in self.orders)

    def add(self, x, y):
        return tuple((a + b) % q for a, b, q in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % q for a, q in zip(x, self.orders))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def smul(self, k, x):
        return tuple((k * a) % q for a, q in zip(x, self.orders))

    def __len__(self):
        return len(self.elements)

    def subgroups(self) -> list[list[tuple[int, ...]]]:
        """All subgroups, each as a sorted element list."""
        from itertools import combinations
        found = {}
        elems = self.elements
        # closure of every subset of a generating set of bounded size
        max_gens = len(self.orders) + 1
        for r in range(0, max_gens + 1):
            for gens in combinations(elems[1:], r):
                closure = {self.zero}
                frontier = [self.zero]
                while frontier:
                    x = frontier.pop()
                    for g in gens:
                        y = self.add(x, g)
                        if y not in closure:
                            closure.add(y)
                            frontier.append(y)
                key = tuple(sorted(closure))
                found[key] = list(key)
        return list(found.values())


def finite_structure_from_counts(annihilator_count, size: int) -> FgAbGroup:
    """Canonical form of a finite abelian group from its order statistics.

    ``annihilator_count(d)`` must return #{x : d*x = 0}; these counts
    determine the group up to isomorphism.
    """
    cyclic_parts: list[int] = []
    n = size
    p = 2
    while n > 1:
        while n % p:
            p += 1
        # a[k] = log_p #{x : p^k x = 0}; stabilizes at the total p-exponent
        a = [0]
        while True:
            c = annihilator_count(p ** len(a))
            e = 0
            while c % p == 0:
                c //= p
                e += 1
            a.append(e)
            if a[-1] == a[-2]:
                break
        m = [a[k] - a[k - 1] for k in range(1, len(a))]  # factors with exponent >= k
        for k in range(len(m)):
            exactly = m[k] - (m[k + 1] if k + 1 < len(m) else 0)
            cyclic_parts.extend([p ** (k + 1)] * exactly)
        while n % p == 0:
            n //= p
        p += 1
    return FgAbGroup(0, invariant_factors(cyclic_parts))
