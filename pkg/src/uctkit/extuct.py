"""Cocycles, extensions, and the universal-coefficient exact sequence.

The key objects:

* symmetric normalized 2-cocycle spaces on finite groups, with the
  extension <-> cocycle dictionary;
* the recursion that extends a cocycle on a free group to a branch
  function rho with rho(x+y) = c(x,y) + rho(x) + rho(y);
* Ext computed from a presentation F/R as Hom(R,G)/Hom(F|R,G);
* the index and co-index homomorphisms between the homology of a G-dual
  complex and Hom/Ext of the integral cohomology, with constructed
  splittings and verified exactness;
* naturality of the connecting homomorphisms with respect to both.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Mapping, Sequence

from .abgroups import (
    FgAbGroup,
    FiniteGroupTable,
    GroupMorphism,
    PresentedGroup,
    ZERO_GROUP,
    column_space_basis,
    ext_group,
    group_from_presentation,
    invariant_factors,
)
from .complexes import (
    FactorHomology,
    FreeComplex,
    GComplex,
    HomologyData,
    LocallySplitSes,
    connecting_homomorphism,
    dual_ses,
    g_dual,
    homology,
)
from .intlat import (
    DependentColumns,
    IntMatrix,
    LinearSolver,
    image_membership,
    kernel_basis,
    smith_normal_form,
    summand_retraction,
    unimodular_inverse,
)


# ---------------------------------------------------------------------------
# tabulated cocycles on finite groups
# ---------------------------------------------------------------------------

class Cocycle:
    """Symmetric normalized 2-cocycle on a finite group, tabulated.

    ``values[(x, y)]`` is a coordinate tuple in the finite coefficient group;
    keys run over pairs of element tuples of A.
    """

    def __init__(self, a_table: FiniteGroupTable, g_table: FiniteGroupTable,
                 values: Mapping[tuple, tuple], check: bool = True):
        self.A = a_table
        self.G = g_table
        self.values = {k: g_table.add(v, g_table.zero) for k, v in values.items()}
        if check:
            self.verify()

    def __call__(self, x, y):
        return self.values.get((x, y), self.G.zero)

    def verify(self) -> None:
        A, G = self.A, self.G
        for x in A.elements:
            if self(x, A.zero) != G.zero or self(A.zero, x) != G.zero:
                raise ValueError("cocycle is not normalized")
        for x in A.elements:
            for y in A.elements:
                if self(x, y) != self(y, x):
                    raise ValueError("cocycle is not symmetric")
        for x in A.elements:
            for y in A.elements:
                for z in A.elements:
                    lhs = G.add(self(x, y), self(A.add(x, y), z))
                    rhs = G.add(self(x, z), self(A.add(x, z), y))
                    if lhs != rhs:
                        raise ValueError("cocycle identity fails")

    def add(self, other: "Cocycle") -> "Cocycle":
        vals = {}
        for x in self.A.elements:
            for y in self.A.elements:
                vals[(x, y)] = self.G.add(self(x, y), other(x, y))
        return Cocycle(self.A, self.G, vals, check=False)

    def sub(self, other: "Cocycle") -> "Cocycle":
        vals = {}
        for x in self.A.elements:
            for y in self.A.elements:
                vals[(x, y)] = self.G.sub(self(x, y), other(x, y))
        return Cocycle(self.A, self.G, vals, check=False)


def coboundary_of(a_table: FiniteGroupTable, g_table: FiniteGroupTable,
                  h: Mapping[tuple, tuple]) -> Cocycle:
    """c_h(x, y) = h(x) + h(y) - h(x+y) for h with h(0) = 0."""
    def hv(x):
        return h.get(x, g_table.zero)
    vals = {}
    for x in a_table.elements:
        for y in a_table.elements:
            vals[(x, y)] = g_table.sub(g_table.add(hv(x), hv(y)), hv(a_table.add(x, y)))
    return Cocycle(a_table, g_table, vals, check=False)


class CocycleSpace:
    """Z(A,G), B(A,G) and their quotient for finite A and G.

    The cocycle axioms become an integer-linear system over the reduced
    unknowns c(x, y) with 0 < idx(x) <= idx(y); each cyclic summand Z/q of G
    contributes a solution lattice {v : S v == 0 mod q}, and coboundaries
    span the sublattice generated by the columns of the coboundary map.
    """

    def __init__(self, A: FgAbGroup, G: FgAbGroup, bound: int = 16):
        if not A.is_finite() or not G.is_finite():
            raise ValueError("cocycle tables need finite groups")
        if A.order() > bound:
            raise ValueError(f"|A| = {A.order()} exceeds the bound {bound}")
        self.A = FiniteGroupTable(A)
        self.G = FiniteGroupTable(G)
        a = self.A
        nonzero = a.elements[1:]
        self.pairs = []
        self.pair_index = {}
        for i, x in enumerate(nonzero):
            for y in nonzero[i:]:
                self.pair_index[(x, y)] = len(self.pairs)
                self.pairs.append((x, y))
        npairs = len(self.pairs)

        def unit_row(x, y, coeff, row):
            if x == a.zero or y == a.zero:
                return
            key = (x, y) if self.pair_index.get((x, y)) is not None else (y, x)
            row[self.pair_index[key]] += coeff

        rows = set()
        for x in a.elements:
            for y in a.elements:
                for z in a.elements:
                    row = [0] * npairs
                    unit_row(x, y, 1, row)
                    unit_row(a.add(x, y), z, 1, row)
                    unit_row(x, z, -1, row)
                    unit_row(a.add(x, z), y, -1, row)
                    if any(row):
                        # canonical sign so duplicates collapse
                        lead = next(v for v in row if v)
                        if lead < 0:
                            row = [-v for v in row]
                        rows.add(tuple(row))
        self.system = IntMatrix.from_rows(sorted(rows), cols=npairs)

        cob_cols = []
        for g in nonzero:
            col = [0] * npairs
            for x, y in self.pairs:
                v = 0
                if x == g:
                    v += 1
                if y == g:
                    v += 1
                if a.add(x, y) == g:
                    v -= 1
                col[self.pair_index[(x, y)]] = v
            cob_cols.append(tuple(col))
        self.cob_matrix = IntMatrix.from_columns(cob_cols, rows=npairs)

        self.factors = [FactorHomology(npairs, q, self.system, self.cob_matrix)
                        for q in self.G.orders]
        orders: list[int] = []
        self.gen_location: list[tuple[int, int]] = []
        for fi, f in enumerate(self.factors):
            for li in range(f.ngens):
                orders.append(f.orders[li])
                self.gen_location.append((fi, li))
        self.ext_presented = PresentedGroup(orders)
        self.ext = self.ext_presented.fg()
        self.z_group = self._lattice_group([f.cycle_basis for f in self.factors])
        self.b_group = self._coboundary_group()

    def _lattice_group(self, bases) -> FgAbGroup:
        out = ZERO_GROUP
        for basis, q in zip(bases, self.G.orders):
            solver = LinearSolver(basis)
            rel = []
            for i in range(basis.rows):
                e = [q if t == i else 0 for t in range(basis.rows)]
                x = solver.solve(e)
                assert x is not None
                rel.append(x)
            out = out.direct_sum(group_from_presentation(
                IntMatrix.from_columns(rel, rows=basis.cols)))
        return out

    def _coboundary_group(self) -> FgAbGroup:
        out = ZERO_GROUP
        npairs = len(self.pairs)
        for q in self.G.orders:
            cols = self.cob_matrix.columns() + [
                tuple(q if t == i else 0 for t in range(npairs)) for i in range(npairs)]
            basis = column_space_basis(IntMatrix.from_columns(cols, rows=npairs))
            solver = LinearSolver(basis)
            rel = []
            for i in range(npairs):
                e = [q if t == i else 0 for t in range(npairs)]
                x = solver.solve(e)
                assert x is not None
                rel.append(x)
            out = out.direct_sum(group_from_presentation(
                IntMatrix.from_columns(rel, rows=basis.cols)))
        return out

    def _vector_of(self, c: Cocycle, factor: int) -> list[int]:
        return [c(x, y)[factor] for (x, y) in self.pairs]

    def class_of(self, c: Cocycle) -> tuple[int, ...]:
        """Coordinates of [c] in the quotient presentation."""
        coords: list[int] = []
        for fi, f in enumerate(self.factors):
            coords.extend(f.project(self._vector_of(c, fi)))
        return tuple(coords)

    def representative(self, coords: Sequence[int]) -> Cocycle:
        """A cocycle representing the given quotient coordinates."""
        acc = {p: list(self.G.zero) for p in self.pairs}
        for i, lam in enumerate(coords):
            if lam == 0:
                continue
            fi, li = self.gen_location[i]
            vec = self.factors[fi].rep(li)
            for p, v in zip(self.pairs, vec):
                acc[p][fi] = (acc[p][fi] + lam * v) % self.G.orders[fi]
        vals = {}
        for (x, y), v in acc.items():
            vals[(x, y)] = tuple(v)
            vals[(y, x)] = tuple(v)
        return Cocycle(self.A, self.G, vals, check=False)

    def coboundary_witness(self, c: Cocycle) -> dict | None:
        """h with c = c_h, or None when c is not a coboundary."""
        nonzero = self.A.elements[1:]
        npairs = len(self.pairs)
        witness = {self.A.zero: list(self.G.zero)}
        for g in nonzero:
            witness[g] = list(self.G.zero)
        for fi, q in enumerate(self.G.orders):
            target = self._vector_of(c, fi)
            aug = self.cob_matrix.hstack(
                IntMatrix.diagonal(npairs, npairs, [q] * npairs))
            x = image_membership(aug, target)
            if x is None:
                return None
            for gi, g in enumerate(nonzero):
                witness[g][fi] = x[gi] % q
        return {k: tuple(v) for k, v in witness.items()}

    def is_coboundary(self, c: Cocycle) -> bool:
        return self.coboundary_witness(c) is not None

    def is_weak_coboundary(self, c: Cocycle) -> bool:
        """True when the restriction to every subgroup is a coboundary."""
        for sub in self.A.subgroups():
            if not _restriction_is_coboundary(self, c, sub):
                return False
        return True


def _restriction_is_coboundary(space: CocycleSpace, c: Cocycle, sub_elements) -> bool:
    sub = sorted(sub_elements)
    index = {e: i for i, e in enumerate(sub)}
    n = len(sub)
    if n == 1:
        return True
    # solve h(x) + h(y) - h(x+y) = c(x,y) on the subgroup, per factor
    rows = []
    rhs_rows = []
    for x in sub:
        for y in sub:
            if x == space.A.zero or y == space.A.zero:
                continue
            row = [0] * (n - 1)

            def bump(e, coeff, row=row):
                if e != space.A.zero:
                    row[index[e] - 1] += coeff
            bump(x, 1)
            bump(y, 1)
            bump(space.A.add(x, y), -1)
            rows.append(row)
            rhs_rows.append(c(x, y))
    m = IntMatrix.from_rows(rows, cols=n - 1)
    for fi, q in enumerate(space.G.orders):
        aug = m.hstack(IntMatrix.diagonal(m.rows, m.rows, [q] * m.rows))
        b = [v[fi] for v in rhs_rows]
        if image_membership(aug, b) is None:
            return False
    return True


def cocycle_space(A: FgAbGroup, G: FgAbGroup, bound: int = 16) -> CocycleSpace:
    return CocycleSpace(A, G, bound=bound)


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------

class ExtensionXc:
    """The group A x G with (x,y) + (x',y') = (x+x', c(x,x') + y + y')."""

    def __init__(self, c: Cocycle):
        self.c = c
        self.A = c.A
        self.G = c.G
        self.elements = [(a, g) for a in self.A.elements for g in self.G.elements]

    @property
    def zero(self):
        return (self.A.zero, self.G.zero)

    def add(self, p, q):
        (x, y), (x2, y2) = p, q
        return (self.A.add(x, x2), self.G.add(self.c(x, x2), self.G.add(y, y2)))

    def neg(self, p):
        x, y = p
        nx = self.A.neg(x)
        # (x,y) + (-x, y') = (0, c(x,-x) + y + y') = 0
        return (nx, self.G.neg(self.G.add(self.c(x, nx), y)))

    def smul(self, k, p):
        if k < 0:
            return self.smul(-k, self.neg(p))
        acc = self.zero
        for _ in range(k):
            acc = self.add(acc, p)
        return acc

    def order_of(self, p) -> int:
        acc = p
        k = 1
        while acc != self.zero:
            acc = self.add(acc, p)
            k += 1
        return k

    def group_structure(self) -> FgAbGroup:
        from .abgroups import finite_structure_from_counts
        def count(d):
            return sum(1 for p in self.elements if self.smul(d, p) == self.zero)
        return finite_structure_from_counts(count, len(self.elements))

    def verify_group_axioms(self) -> None:
        els = self.elements
        z = self.zero
        for p in els:
            assert self.add(p, z) == p
            assert self.add(p, self.neg(p)) == z
        for p in els:
            for q in els:
                assert self.add(p, q) == self.add(q, p)
        # associativity follows from the cocycle identity; spot-check fully
        for p in els:
            for q in els:
                for r in els:
                    if self.add(self.add(p, q), r) != self.add(p, self.add(q, r)):
                        raise AssertionError("extension is not associative")


def extension_from_cocycle(c: Cocycle) -> ExtensionXc:
    return ExtensionXc(c)


def cocycle_from_extension(x: ExtensionXc, transversal: Mapping[tuple, tuple] | None = None) -> Cocycle:
    """c(a, b) = i^{-1}(t(a) + t(b) - t(a+b)); the canonical t is a |-> (a, 0)."""
    A, G = x.A, x.G
    if transversal is None:
        t = {a: (a, G.zero) for a in A.elements}
    else:
        t = dict(transversal)
        if t.get(A.zero) != x.zero:
            raise ValueError("transversal must send 0 to 0")
        for a in A.elements:
            ta = t.get(a)
            if ta is None or ta[0] != a:
                raise ValueError("not a transversal")
    vals = {}
    for a in A.elements:
        for b in A.elements:
            s = x.add(t[a], t[b])
            diff = x.add(s, x.neg(t[A.add(a, b)]))
            if diff[0] != A.zero:
                raise ValueError("transversal arithmetic escaped the fiber")
            vals[(a, b)] = diff[1]
    return Cocycle(A, G, vals)


def equivalence_isomorphism(x1: ExtensionXc, x2: ExtensionXc) -> dict | None:
    """An isomorphism X_c -> X_c' commuting with the inclusions and projections,
    or None when the cocycles are not cohomologous.

    Any such map has the shape (a, g) |-> (a, g + h(a)); searching for it is
    the same as solving c' - c = c_h.
    """
    space = CocycleSpace(x1.A.group, x1.G.group, bound=max(16, len(x1.A.elements)))
    h = space.coboundary_witness(x2.c.sub(x1.c))
    if h is None:
        return None
    psi = {}
    for a, g in x1.elements:
        psi[(a, g)] = (a, x1.G.add(g, h[a]))
    # verify it is a homomorphism
    for p in x1.elements:
        for q in x1.elements:
            if psi[x1.add(p, q)] != x2.add(psi[p], psi[q]):
                raise AssertionError("constructed map is not a homomorphism")
    return psi


# ---------------------------------------------------------------------------
# the branch function rho on a free group
# ---------------------------------------------------------------------------

class RhoEvaluator:
    """From a cocycle c on Z^rank, the function rho with
    rho(x + y) = c(x, y) + rho(x) + rho(y) and rho(basis) = 0.

    The expansion of x into basis summands is read off deterministically:
    positive multiples in increasing basis order first, then negative ones.
    Values live in the coefficient group presented by ``g_orders``.
    """

    def __init__(self, rank: int, g_orders: Sequence[int],
                 cocycle: Callable[[tuple, tuple], tuple]):
        self.rank = rank
        self.g = PresentedGroup(g_orders)
        self.c = cocycle

    def _gadd(self, a, b):
        return self.g.reduce([x + y for x, y in zip(a, b)])

    def _gneg(self, a):
        return self.g.reduce([-x for x in a])

    def rho(self, x: Sequence[int]) -> tuple:
        x = tuple(x)
        if len(x) != self.rank:
            raise ValueError("element length mismatch")
        summands: list[tuple] = []
        tail_correction = self.g.reduce([0] * self.g.ngens)
        for i, k in enumerate(x):
            e = tuple(1 if t == i else 0 for t in range(self.rank))
            if k > 0:
                summands.extend([e] * k)
        for i, k in enumerate(x):
            if k < 0:
                e = tuple(1 if t == i else 0 for t in range(self.rank))
                ne = tuple(-v for v in e)
                summands.extend([ne] * (-k))
                corr = self.c(e, ne)
                for _ in range(-k):
                    tail_correction = self._gadd(tail_correction, corr)
        total = self.g.reduce([0] * self.g.ngens)
        if len(summands) >= 2:
            prefix = summands[0]
            for s in summands[1:]:
                total = self._gadd(total, self.c(prefix, s))
                prefix = tuple(a + b for a, b in zip(prefix, s))
        return self.g.reduce([a - b for a, b in zip(total, tail_correction)])

    def check_additivity(self, x, y) -> bool:
        lhs = self.rho(tuple(a + b for a, b in zip(x, y)))
        rhs = self._gadd(self.c(tuple(x), tuple(y)), self._gadd(self.rho(x), self.rho(y)))
        return lhs == rhs


def rho_evaluator(rank: int, g_orders: Sequence[int],
                  cocycle: Callable[[tuple, tuple], tuple]) -> RhoEvaluator:
    return RhoEvaluator(rank, g_orders, cocycle)


# ---------------------------------------------------------------------------
# Ext from a presentation F/R
# ---------------------------------------------------------------------------

@dataclass
class PresentationExtReport:
    quotient: FgAbGroup            # Hom(R,G)/Hom(F|R,G)
    ext: FgAbGroup                 # ext_group(F/R, G)
    group: FgAbGroup               # F/R itself
    matches: bool
    d: list[int]                   # aligned elementary divisors of R in F
    forward_ok: bool               # theta -> theta o zeta lands in the right class
    inverse_ok: bool               # sigma -> rho_sigma|_R returns the class


def _aligned_presentation(f_rank: int, R: IntMatrix):
    """SNF-aligned data for R inside F = Z^f_rank: returns (d, fprime, rbasis)."""
    if R.rows != f_rank:
        raise ValueError("relation matrix must have one row per generator of F")
    snf = smith_normal_form(R)
    d = [x for x in snf.diagonal() if x != 0]
    if len(d) < R.cols:
        raise DependentColumns("relation columns are not independent")
    uinv = unimodular_inverse(snf.U)
    fprime = [uinv.column(i) for i in range(f_rank)]
    rbasis = [tuple(d[i] * v for v in fprime[i]) for i in range(len(d))]
    return d, fprime, rbasis


def ext_via_presentation(f_rank: int, R: IntMatrix, G: FgAbGroup,
                         deep_check: bool | None = None) -> PresentationExtReport:
    """Hom(R,G)/Hom(F|R,G) computed in SNF-aligned coordinates, checked against
    ext_group(F/R, G); for finite F/R the dictionary through cocycles is
    exercised in both directions."""
    d, fprime, rbasis = _aligned_presentation(f_rank, R)
    quotient = ZERO_GROUP
    moduli = [0] * G.free_rank + list(G.torsion)
    rho_dim = len(d)
    for c in moduli:
        if rho_dim == 0:
            continue
        incoming = IntMatrix.diagonal(rho_dim, rho_dim, d)
        fac = FactorHomology(rho_dim, c, IntMatrix.zero(0, rho_dim), incoming)
        quotient = quotient.direct_sum(PresentedGroup(fac.orders).fg())
    fr = group_from_presentation(R)
    expected = ext_group(fr, G)
    matches = quotient == expected

    forward_ok = True
    inverse_ok = True
    do_deep = deep_check if deep_check is not None else (fr.is_finite() and G.is_finite()
                                                         and fr.order() <= 12 and (G.is_trivial() or G.order() <= 12))
    if do_deep and not fr.is_trivial() and not G.is_trivial():
        forward_ok, inverse_ok = _presentation_cocycle_round_trip(f_rank, d, fprime, rbasis, fr, G)
    return PresentationExtReport(quotient=quotient, ext=expected, group=fr,
                                 matches=matches, d=d,
                                 forward_ok=forward_ok, inverse_ok=inverse_ok)


def _presentation_cocycle_round_trip(f_rank, d, fprime, rbasis, fr: FgAbGroup, G: FgAbGroup):
    """Exercise theta -> theta o zeta and sigma -> rho_sigma|_R on generators."""
    space = CocycleSpace(fr, G)
    a_table = space.A
    g_table = space.G
    # F/R coordinates: x in F has class (sum over aligned basis), with the i-th
    # aligned coordinate taken mod d_i; free aligned coordinates must vanish on A
    uinvT_cols = fprime  # fprime[i] is the i-th aligned basis vector of F
    basis_matrix = IntMatrix.from_columns(uinvT_cols, rows=f_rank)
    solver = LinearSolver(basis_matrix)

    tor_idx = [i for i in range(len(d)) if d[i] >= 2]
    if tuple(fr.torsion) != tuple(invariant_factors([d[i] for i in tor_idx])):
        return False, False

    def lift(a):  # canonical transversal: minimal nonnegative aligned coordinates
        coords = [0] * f_rank
        for pos, i in enumerate(tor_idx):
            coords[i] = a[pos] % d[i]
        return basis_matrix.apply(coords)

    def project(xvec):  # F -> F/R on element tuples
        coords = solver.solve(list(xvec))
        assert coords is not None
        return tuple(coords[i] % d[i] for i in tor_idx)

    rbasis_matrix = IntMatrix.from_columns(rbasis, rows=f_rank)
    rsolver = LinearSolver(rbasis_matrix)

    forward_ok = True
    inverse_ok = True
    moduli = g_table.orders
    for i in range(len(d)):
        if d[i] < 2:
            continue
        for j, q in enumerate(moduli):
            # theta: R -> G sending rbasis[t] to delta_{t,i} * g_j
            def theta(rvec, i=i, j=j):
                coords = rsolver.solve(list(rvec))
                assert coords is not None
                out = [0] * len(moduli)
                out[j] = coords[i] % q
                return tuple(out)
            vals = {}
            for a in a_table.elements:
                for b in a_table.elements:
                    zeta = [ta + tb - tc for ta, tb, tc in
                            zip(lift(a), lift(b), lift(a_table.add(a, b)))]
                    vals[(a, b)] = theta(zeta)
            sigma = Cocycle(a_table, g_table, vals)
            coords = space.class_of(sigma)
            order_ij = gcd(d[i], q)
            if order_ij == 1:
                if not space.ext_presented.is_zero_element(coords):
                    forward_ok = False
            elif space.ext_presented.is_zero_element(coords):
                forward_ok = False
            # inverse: rho_sigma restricted to R should recover theta's class
            rho = RhoEvaluator(f_rank, list(moduli),
                               lambda x, y: sigma(project(x), project(y)))
            theta_back = [rho.rho(r) for r in rbasis]
            # compare classes: theta_back - theta extends to F iff their
            # difference is in the image of restriction
            diff_cols = []
            for t, r in enumerate(rbasis):
                diff_cols.append(tuple(tb - ta for tb, ta in zip(theta_back[t], theta(r))))
            if not _restriction_difference_trivial(diff_cols, d, moduli):
                inverse_ok = False
    return forward_ok, inverse_ok


def _restriction_difference_trivial(diff_cols, d, moduli) -> bool:
    """diff_cols[t][j]: does the difference lie in ⊕_t d_t G (the restrictions)?"""
    for t, col in enumerate(diff_cols):
        for j, q in enumerate(moduli):
            v = col[j] % q if q else col[j]
            g = d[t] if q == 0 else gcd(d[t], q)
            if v % g:
                return False
    return True


@dataclass
class HomFReport:
    quotient: FgAbGroup
    pext_zero: bool


def hom_f_subgroup(f_rank: int, R: IntMatrix, G: FgAbGroup) -> HomFReport:
    """Hom_f(F|R,G) / Hom(F|R,G), via the divisibility criterion.

    phi extends over every finite-index overgroup iff phi(m t) lies in mG
    whenever m t lands in R; for f.g. F this quotient vanishes, matching the
    vanishing of the pure part of Ext on finitely generated groups.
    """
    d, fprime, rbasis = _aligned_presentation(f_rank, R)
    rho_dim = len(d)
    moduli = [0] * G.free_rank + list(G.torsion)
    if rho_dim == 0:
        return HomFReport(ZERO_GROUP, True)
    raw_basis = IntMatrix.from_columns([R.column(j) for j in range(R.cols)], rows=f_rank)
    rsolver = LinearSolver(raw_basis)
    # W theta == 0 mod g_i encodes the divisibility criterion in raw coordinates
    w_rows = []
    for i in range(rho_dim):
        coords = rsolver.solve(list(rbasis[i]))
        assert coords is not None
        w_rows.append(list(coords))
    W = IntMatrix.from_rows(w_rows, cols=rho_dim)

    quotient = ZERO_GROUP
    pext_zero = True
    for c in moduli:
        g_i = [d[i] if c == 0 else gcd(d[i], c) for i in range(rho_dim)]
        aug = W.hstack(IntMatrix.diagonal(rho_dim, rho_dim, g_i))
        full = kernel_basis(aug)
        hom_f_gens = [tuple(full[t, j] for t in range(rho_dim)) for j in range(full.cols)]
        if c:
            hom_f_gens += [tuple(c if t == i else 0 for t in range(rho_dim))
                           for i in range(rho_dim)]
        # image of restriction: the coordinate map along generator s of F
        # restricts to the s-th row of R
        res_cols = []
        for s in range(f_rank):
            res_cols.append(tuple(R[s, j] for j in range(R.cols)))
        if c:
            res_cols += [tuple(c if t == i else 0 for t in range(R.cols))
                         for i in range(R.cols)]
        num_basis = column_space_basis(IntMatrix.from_columns(hom_f_gens, rows=rho_dim))
        nsolver = LinearSolver(num_basis)
        rel = []
        for colv in res_cols:
            x = nsolver.solve(list(colv))
            if x is None:
                raise AssertionError("restriction image escapes the divisibility lattice")
            rel.append(x)
        part = group_from_presentation(IntMatrix.from_columns(rel, rows=num_basis.cols))
        quotient = quotient.direct_sum(part)
        if not part.is_trivial():
            pext_zero = False
    return HomFReport(quotient, pext_zero)


def pext_fg(A: FgAbGroup, G: FgAbGroup) -> HomFReport:
    """Pure part of Ext(A, G) for f.g. A, through a canonical presentation."""
    n = A.free_rank + len(A.torsion)
    cols = []
    for i, q in enumerate(A.torsion):
        cols.append(tuple(q if t == A.free_rank + i else 0 for t in range(n)))
    R = IntMatrix.from_columns(cols, rows=n)
    return hom_f_subgroup(n, R, G)


# ---------------------------------------------------------------------------
# Hom(H, G) and Ext(H, G) with presentation-aligned generators
# ---------------------------------------------------------------------------

class HomPresentation:
    """Hom(H, G) with one generator per (generator of H, cyclic summand of G).

    The generator indexed by (i, j) sends the i-th generator of H to
    kappa_ij times the j-th summand generator of G, where kappa_ij is 1
    when the H-generator has infinite order and q/gcd(m, q) when it has
    order m and the summand is Z/q.  A concrete homomorphism is stored as
    the matrix of its values: values[i][j] in the j-th summand.
    """

    def __init__(self, h_orders: Sequence[int], g_moduli: Sequence[int]):
        self.h_orders = tuple(h_orders)
        self.g_moduli = tuple(g_moduli)
        self.gens: list[tuple[int, int, int, int]] = []  # (i, j, order, kappa)
        for i, o in enumerate(self.h_orders):
            for j, c in enumerate(self.g_moduli):
                if o == 0 and c == 0:
                    self.gens.append((i, j, 0, 1))
                elif o == 0:
                    self.gens.append((i, j, c, 1))
                elif c == 0:
                    continue  # Hom(Z/m, Z) = 0
                else:
                    h = gcd(o, c)
                    if h > 1:
                        self.gens.append((i, j, h, c // h))
        self.presented = PresentedGroup([g[2] for g in self.gens])

    def group(self) -> FgAbGroup:
        return self.presented.fg()

    def coords_of(self, values: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Coordinates of a concrete homomorphism given by its value matrix."""
        out = []
        seen = set()
        for (i, j, order, kappa) in self.gens:
            seen.add((i, j))
            c = self.g_moduli[j]
            w = values[i][j] % c if c else values[i][j]
            if w % kappa:
                raise ValueError("value matrix is not a well-defined homomorphism")
            lam = w // kappa
            out.append(lam % order if order else lam)
        # pieces with Hom = 0 must carry zero values
        for i, o in enumerate(self.h_orders):
            for j, c in enumerate(self.g_moduli):
                if (i, j) in seen:
                    continue
                w = values[i][j] % c if c else values[i][j]
                if o and c == 0 and w:
                    raise ValueError("nonzero value on a torsion generator mapping to Z")
                if o and c and (w * o) % c:
                    raise ValueError("value matrix is not a well-defined homomorphism")
        return tuple(out)

    def values_of(self, coords: Sequence[int]) -> list[list[int]]:
        vals = [[0] * len(self.g_moduli) for _ in self.h_orders]
        for lam, (i, j, order, kappa) in zip(coords, self.gens):
            c = self.g_moduli[j]
            v = vals[i][j] + lam * kappa
            vals[i][j] = v % c if c else v
        return vals


class ExtPresentation:
    """Ext(H, G) aligned with a chosen basis r_t = d_t f_t of the relation
    subgroup: the quotient Hom(R,G)/Hom(F|R,G) is the direct sum over t of
    G/(d_t G), so one generator per (torsion position t, summand j)."""

    def __init__(self, dvals: Sequence[int], g_moduli: Sequence[int],
                 h_gen_offset: int = 0):
        self.dvals = tuple(dvals)          # one entry per relation-basis vector
        self.g_moduli = tuple(g_moduli)
        self.gens: list[tuple[int, int, int]] = []   # (position t, j, order)
        self.h_gen_of: list[int] = []      # canonical H-generator index per gen
        torsion_counter = 0
        for t, d in enumerate(self.dvals):
            if d < 2:
                continue
            for j, c in enumerate(self.g_moduli):
                e = d if c == 0 else gcd(d, c)
                if e > 1:
                    self.gens.append((t, j, e))
                    self.h_gen_of.append(h_gen_offset + torsion_counter)
            torsion_counter += 1
        self.presented = PresentedGroup([g[2] for g in self.gens])

    def group(self) -> FgAbGroup:
        return self.presented.fg()

    def project_theta(self, j: int, theta: Sequence[int]) -> tuple[int, ...]:
        """Class of a homomorphism R -> (summand j of G) with values theta."""
        out = []
        for (t, j2, e) in self.gens:
            out.append(theta[t] % e if j2 == j else 0)
        return tuple(out)


def hom_functor_map(k: GroupMorphism, source: HomPresentation,
                    target: HomPresentation) -> GroupMorphism:
    """Hom(k, G): Hom(K2, G) -> Hom(K1, G) for k: K1 -> K2."""
    if tuple(k.target.orders) != source.h_orders or tuple(k.source.orders) != target.h_orders:
        raise ValueError("presentations do not match the morphism")
    cols = []
    for (i2, j, order, kappa) in source.gens:
        values = [[0] * len(target.g_moduli) for _ in target.h_orders]
        c = target.g_moduli[j]
        for t in range(len(target.h_orders)):
            v = kappa * k.matrix[i2, t]
            values[t][j] = v % c if c else v
        cols.append(target.coords_of(values))
    m = IntMatrix.from_columns(cols, rows=target.presented.ngens)
    return GroupMorphism(source.presented, target.presented, m)


def ext_functor_map(k: GroupMorphism, source: ExtPresentation,
                    target: ExtPresentation) -> GroupMorphism:
    """Ext(k, G): Ext(K2, G) -> Ext(K1, G) for k: K1 -> K2.

    Computed by lifting k to the diagonal presentations: the coefficient of
    the target generator (i1, j) on the source generator (t, j) is
    m_i1 * k[t, i1] / o_t, which is integral because k respects relations.
    """
    cols = [[0] * target.presented.ngens for _ in source.gens]
    for g_idx, (t, j, _e) in enumerate(source.gens):
        h2_row = source.h_gen_of[g_idx]
        o_t = source.dvals[t]
        for tg_idx, (t1, j1, _e1) in enumerate(target.gens):
            if j1 != j:
                continue
            m_i1 = target.dvals[t1]
            h1_col = target.h_gen_of[tg_idx]
            num = m_i1 * k.matrix[h2_row, h1_col]
            if num % o_t:
                raise ValueError("morphism does not respect torsion relations")
            cols[g_idx][tg_idx] = num // o_t
    m = IntMatrix.from_columns([tuple(c) for c in cols], rows=target.presented.ngens)
    return GroupMorphism(source.presented, target.presented, m)


# ---------------------------------------------------------------------------
# the UCT machinery for a free cochain complex
# ---------------------------------------------------------------------------

@dataclass
class UctVerdicts:
    exact_left: bool
    exact_middle: bool
    exact_right: bool
    split_ok: bool
    left_inverse_ok: bool
    decomposition_ok: bool

    def all_ok(self) -> bool:
        return (self.exact_left and self.exact_middle and self.exact_right
                and self.split_ok and self.left_inverse_ok and self.decomposition_ok)


@dataclass
class UctSequenceReport:
    degree: int
    coeff: FgAbGroup
    ext_part: FgAbGroup
    middle: FgAbGroup
    hom_part: FgAbGroup
    index_matrix: GroupMorphism
    coindex_matrix: GroupMorphism
    split_section: GroupMorphism
    coindex_left_inverse: GroupMorphism
    verdicts: UctVerdicts


class UctContext:
    """Everything needed to state the universal-coefficient sequence
    0 -> Ext(H^{n+1}(A), G) -> H_n(A*) -> Hom(H^n(A), G) -> 0 for a free
    cochain complex A, including the constructed splittings.

    ``drop_coindex_sign`` disables the (-1)^n factor in the co-index map
    only (keeping it in the left inverse); it exists for mutation tests.
    """

    def __init__(self, a: FreeComplex, coeff: FgAbGroup, n: int,
                 dual_cx: GComplex | None = None,
                 mid: HomologyData | None = None,
                 h_same: HomologyData | None = None,
                 h_up: HomologyData | None = None,
                 drop_coindex_sign: bool = False):
        if a.orientation != "cochain":
            raise ValueError("the universal-coefficient context expects a cochain complex")
        self.a = a
        self.coeff = coeff
        self.n = n
        self.g_moduli = [0] * coeff.free_rank + list(coeff.torsion)
        self.dual = dual_cx if dual_cx is not None else g_dual(a, coeff)
        self.mid = mid if mid is not None else homology(self.dual, n)
        self.h_same = h_same if h_same is not None else homology(a, n)
        self.h_up = h_up if h_up is not None else homology(a, n + 1)
        self.sign = 1 if (n % 2 == 0 or drop_coindex_sign) else -1
        self.left_sign = 1 if n % 2 == 0 else -1

        # --- Hom side -------------------------------------------------
        self.hom_pres = HomPresentation(self.h_same.presented.orders, self.g_moduli)
        fh_same = self.h_same.factors[0]
        k_n = a.rank(n)
        cocycle_reps = [fh_same.rep(i) for i in range(fh_same.ngens)]
        cols = []
        for t in range(self.mid.presented.ngens):
            j, v = self.mid.rep(t)
            c = self.g_moduli[j]
            values = [[0] * len(self.g_moduli) for _ in range(fh_same.ngens)]
            for i, rep in enumerate(cocycle_reps):
                w = sum(x * y for x, y in zip(v, rep))
                values[i][j] = w % c if c else w
            cols.append(self.hom_pres.coords_of(values))
        self.index = GroupMorphism(
            self.mid.presented, self.hom_pres.presented,
            IntMatrix.from_columns(cols, rows=self.hom_pres.presented.ngens))

        # section: phi -> [phi o p o i_dagger]
        bz = fh_same.cycle_basis
        retraction = summand_retraction(bz) if bz.cols else IntMatrix.zero(0, k_n)
        proj_rows = fh_same.U @ retraction            # z x k
        sec_cols = []
        for (i, j, order, kappa) in self.hom_pres.gens:
            row = fh_same.gen_index[i]
            vec = tuple(kappa * proj_rows[row, s] for s in range(k_n))
            sec_cols.append(self.mid.project(j, vec))
        self.section = GroupMorphism(
            self.hom_pres.presented, self.mid.presented,
            IntMatrix.from_columns(sec_cols, rows=self.mid.presented.ngens))

        # --- Ext side -------------------------------------------------
        fh_up = self.h_up.factors[0]
        dlist = fh_up.dlist
        r_positions = [i for i, dd in enumerate(dlist) if dd != 0]
        dvals = [dlist[i] for i in r_positions]
        free_count = sum(1 for o in fh_up.orders if o == 0)
        self.ext_pres = ExtPresentation(dvals, self.g_moduli, h_gen_offset=free_count)
        k_up = a.rank(n + 1)
        rb_cols = []
        for i in r_positions:
            coords = fh_up.Uinv.column(i)
            amb = fh_up.cycle_basis.apply(coords)
            rb_cols.append(tuple(dlist[i] * x for x in amb))
        rbasis = IntMatrix.from_columns(rb_cols, rows=k_up)
        delta_n = a.diff(n)
        if rbasis.cols:
            rsolver = LinearSolver(rbasis)
            gamma_cols = []
            for s in range(k_n):
                x = rsolver.solve(list(delta_n.column(s)))
                assert x is not None, "codifferential image escapes the coboundary basis"
                gamma_cols.append(x)
            gamma = IntMatrix.from_columns(gamma_cols, rows=rbasis.cols)
            dsolver = LinearSolver(delta_n)
            self._delta_sections = []
            for t in range(rbasis.cols):
                x = dsolver.solve(list(rbasis.column(t)))
                assert x is not None
                self._delta_sections.append(x)
        else:
            gamma = IntMatrix.zero(0, k_n)
            self._delta_sections = []
        self._gamma = gamma

        co_cols = []
        for (t, j, e) in self.ext_pres.gens:
            vec = tuple(self.sign * gamma[t, s] for s in range(k_n))
            co_cols.append(self.mid.project(j, vec))
        self.coindex = GroupMorphism(
            self.ext_pres.presented, self.mid.presented,
            IntMatrix.from_columns(co_cols, rows=self.mid.presented.ngens))

        left_cols = []
        for t in range(self.mid.presented.ngens):
            j, v = self.mid.rep(t)
            theta = [self.left_sign * sum(x * y for x, y in zip(xs, v))
                     for xs in self._delta_sections]
            left_cols.append(self.ext_pres.project_theta(j, theta))
        self.coindex_left = GroupMorphism(
            self.mid.presented, self.ext_pres.presented,
            IntMatrix.from_columns(left_cols, rows=self.ext_pres.presented.ngens))

    def verdicts(self) -> UctVerdicts:
        ident_hom = GroupMorphism.identity(self.hom_pres.presented)
        ident_ext = GroupMorphism.identity(self.ext_pres.presented)
        exact_left = self.coindex.kernel().is_trivial()
        exact_middle = self.coindex.image().equals(self.index.kernel())
        exact_right = self.index.image().is_full()
        split_ok = self.index.compose(self.section).equals(ident_hom)
        left_inverse_ok = self.coindex_left.compose(self.coindex).equals(ident_ext)
        decomposition_ok = (self.mid.group
                            == self.ext_pres.group().direct_sum(self.hom_pres.group()))
        return UctVerdicts(exact_left, exact_middle, exact_right,
                           split_ok, left_inverse_ok, decomposition_ok)

    def report(self) -> UctSequenceReport:
        return UctSequenceReport(
            degree=self.n, coeff=self.coeff,
            ext_part=self.ext_pres.group(), middle=self.mid.group,
            hom_part=self.hom_pres.group(),
            index_matrix=self.index, coindex_matrix=self.coindex,
            split_section=self.section, coindex_left_inverse=self.coindex_left,
            verdicts=self.verdicts())


def index_hom(a: FreeComplex, coeff: FgAbGroup, n: int) -> tuple[GroupMorphism, GroupMorphism]:
    """The pairing-evaluation map H_n(A*) -> Hom(H^n(A), G) and a section."""
    ctx = UctContext(a, coeff, n)
    return ctx.index, ctx.section


def coindex_hom(a: FreeComplex, coeff: FgAbGroup, n: int) -> tuple[GroupMorphism, GroupMorphism]:
    """Ext(H^{n+1}(A), G) -> H_n(A*) and its left inverse."""
    ctx = UctContext(a, coeff, n)
    return ctx.coindex, ctx.coindex_left


def uct_report(a: FreeComplex, coeff: FgAbGroup, n: int,
               drop_coindex_sign: bool = False) -> UctSequenceReport:
    return UctContext(a, coeff, n, drop_coindex_sign=drop_coindex_sign).report()


@dataclass
class NaturalityReport:
    degree: int
    right_square_ok: bool
    left_square_ok: bool

    def all_ok(self) -> bool:
        return self.right_square_ok and self.left_square_ok


def naturality_check(ses: LocallySplitSes, coeff: FgAbGroup, n: int) -> NaturalityReport:
    """Both squares relating the connecting homomorphisms of a locally split
    exact sequence of free cochain complexes and of its G-dual."""
    if ses.total.orientation != "cochain":
        raise ValueError("naturality_check expects a cochain sequence")
    dual = dual_ses(ses, coeff)
    ctx_a = UctContext(ses.sub, coeff, n, dual_cx=dual.quotient)
    ctx_c = UctContext(ses.quotient, coeff, n - 1, dual_cx=dual.sub)

    d_chain = connecting_homomorphism(dual, n, source_h=ctx_a.mid, target_h=ctx_c.mid)
    d_low = connecting_homomorphism(ses, n - 1, source_h=ctx_c.h_same, target_h=ctx_a.h_same)
    d_high = connecting_homomorphism(ses, n, source_h=ctx_c.h_up, target_h=ctx_a.h_up)

    rhs_right = hom_functor_map(d_low, ctx_a.hom_pres, ctx_c.hom_pres).compose(ctx_a.index)
    lhs_right = ctx_c.index.compose(d_chain)
    right_ok = lhs_right.equals(rhs_right)

    rhs_left = ctx_c.coindex.compose(ext_functor_map(d_high, ctx_a.ext_pres, ctx_c.ext_pres))
    lhs_left = d_chain.compose(ctx_a.coindex)
    left_ok = lhs_left.equals(rhs_left)
    return NaturalityReport(degree=n, right_square_ok=right_ok, left_square_ok=left_ok)
