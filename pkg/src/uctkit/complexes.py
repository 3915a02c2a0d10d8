"""Chain and cochain complexes of free finitely generated groups.

A ``FreeComplex`` stores integer differentials on a finite degree window;
everything outside the window is zero.  A ``GComplex`` is the same integer
data read with coefficients in a finitely generated group G: the matrices
act coordinate-wise on each cyclic summand of G, so homology splits as a
direct sum over summands and is computed exactly, one cyclic factor at a
time (integer kernels for Z factors, mod-q kernels lifted to integer
lattices for Z/q factors).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

from .abgroups import FgAbGroup, GroupMorphism, PresentedGroup, exact_at
from .intlat import (
    IntMatrix,
    LinearSolver,
    kernel_basis,
    smith_normal_form,
    unimodular_inverse,
)

Orientation = Literal["chain", "cochain"]


class FreeComplex:
    """Bounded complex of free f.g. groups with exact integer differentials.

    ``diffs[n]`` maps degree n to n-1 for chain orientation and n to n+1 for
    cochain orientation.  Construction verifies shapes and that consecutive
    differentials compose to zero.
    """

    def __init__(self, orientation: Orientation, ranks: Mapping[int, int],
                 diffs: Mapping[int, IntMatrix], check: bool = True):
        if orientation not in ("chain", "cochain"):
            raise ValueError(f"bad orientation {orientation!r}")
        self.orientation: Orientation = orientation
        self.ranks = {int(n): int(r) for n, r in ranks.items() if r}
        self.diffs = {}
        step = -1 if orientation == "chain" else 1
        for n, m in diffs.items():
            n = int(n)
            if m.is_zero():
                continue
            expected = (self.rank(n + step), self.rank(n))
            if m.shape != expected:
                raise ValueError(f"differential at degree {n} has shape {m.shape}, "
                                 f"expected {expected}")
            self.diffs[n] = m
        if check:
            for n in list(self.diffs):
                nxt = n + step
                if nxt in self.diffs or n in self.diffs:
                    comp = self.diff(nxt) @ self.diff(n)
                    if not comp.is_zero():
                        raise ValueError(f"differentials at {n} and {nxt} do not compose to zero")

    @property
    def step(self) -> int:
        return -1 if self.orientation == "chain" else 1

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def diff(self, n: int) -> IntMatrix:
        d = self.diffs.get(n)
        if d is None:
            return IntMatrix.zero(self.rank(n + self.step), self.rank(n))
        return d

    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def degree_range(self) -> tuple[int, int]:
        ds = self.degrees()
        return (ds[0], ds[-1]) if ds else (0, -1)

    def is_zero(self) -> bool:
        return not self.ranks

    def flip(self) -> "FreeComplex":
        """Reindex n -> -n, swapping chain and cochain orientation."""
        new_orientation = "cochain" if self.orientation == "chain" else "chain"
        return FreeComplex(new_orientation,
                           {-n: r for n, r in self.ranks.items()},
                           {-n: m for n, m in self.diffs.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, FreeComplex) and self.orientation == other.orientation
                and self.ranks == other.ranks and self.diffs == other.diffs)

    def __repr__(self):
        return f"FreeComplex({self.orientation}, ranks={self.ranks})"


ZERO_CHAIN = FreeComplex("chain", {}, {})


class GComplex:
    """A free complex read with coefficients in the f.g. group ``coeff``.

    Chain orientation: base (x) G.  The same integer matrices act on the
    G-coordinates; cyclic summands of G never interact.
    """

    def __init__(self, base: FreeComplex, coeff: FgAbGroup):
        self.base = base
        self.coeff = coeff

    @property
    def orientation(self) -> Orientation:
        return self.base.orientation

    @property
    def step(self) -> int:
        return self.base.step

    def rank(self, n: int) -> int:
        return self.base.rank(n)

    def diff(self, n: int) -> IntMatrix:
        return self.base.diff(n)

    def degrees(self) -> list[int]:
        return self.base.degrees()

    def factor_moduli(self) -> list[int]:
        return [0] * self.coeff.free_rank + list(self.coeff.torsion)

    def __repr__(self):
        return f"GComplex({self.base!r}, coeff={self.coeff})"


Complex = FreeComplex | GComplex


def factor_moduli(c: Complex) -> list[int]:
    if isinstance(c, GComplex):
        return c.factor_moduli()
    return [0]


def g_dual(a: FreeComplex, coeff: FgAbGroup) -> GComplex:
    """G-dual chain complex of a free cochain complex: degree-n matrix is the
    transpose of the codifferential entering degree n."""
    if a.orientation != "cochain":
        raise ValueError("g_dual expects a cochain complex")
    diffs = {}
    for n, m in a.diffs.items():
        diffs[n + 1] = m.transpose()
    return GComplex(FreeComplex("chain", dict(a.ranks), diffs, check=False), coeff)


def tensor_complex(c: FreeComplex, coeff: FgAbGroup) -> GComplex:
    """Coefficient complex of a free chain complex; same matrices on G-coordinates."""
    if c.orientation != "chain":
        raise ValueError("tensor_complex expects a chain complex")
    return GComplex(c, coeff)


def cochain_with_coefficients(c: FreeComplex, coeff: FgAbGroup) -> GComplex:
    """G-dual cochain complex of a free chain complex (transpose differentials)."""
    if c.orientation != "chain":
        raise ValueError("expected a chain complex")
    diffs = {}
    for n, m in c.diffs.items():
        diffs[n - 1] = m.transpose()
    return GComplex(FreeComplex("cochain", dict(c.ranks), diffs, check=False), coeff)


def integral_cochain(c: FreeComplex) -> FreeComplex:
    """Z-dual cochain complex of a free chain complex."""
    if c.orientation != "chain":
        raise ValueError("expected a chain complex")
    diffs = {n - 1: m.transpose() for n, m in c.diffs.items()}
    return FreeComplex("cochain", dict(c.ranks), diffs, check=False)


# ---------------------------------------------------------------------------
# homology with explicit witnesses
# ---------------------------------------------------------------------------

class FactorHomology:
    """Homology of one cyclic coefficient factor at one degree.

    For modulus c == 0 the cycle lattice is ker(outgoing) and the boundary
    lattice is spanned by the incoming columns.  For c == q the cycle lattice
    is {x : outgoing x == 0 mod q} (computed from the integer kernel of
    [outgoing | q I]) and the boundary lattice additionally contains q Z^k.
    """

    def __init__(self, k: int, modulus: int, outgoing: IntMatrix, incoming: IntMatrix):
        self.k = k
        self.modulus = modulus
        rows = outgoing.rows
        if rows == 0 or outgoing.is_zero():
            basis = IntMatrix.identity(k)
        elif modulus == 0:
            basis = kernel_basis(outgoing)
        else:
            aug = outgoing.hstack(IntMatrix.diagonal(rows, rows, [modulus] * rows))
            full = kernel_basis(aug)
            # the x-part determines the q-part, so the projection is a basis
            basis = IntMatrix(k, full.cols,
                              [[full[i, j] for j in range(full.cols)] for i in range(k)])
        self.cycle_basis = basis
        self._solver = LinearSolver(basis) if basis.cols else None

        rel_cols: list[tuple[int, ...]] = []
        for j in range(incoming.cols):
            col = incoming.column(j)
            x = self._coords(col)
            if x is None:
                raise ValueError("incoming column is not a cycle; differentials inconsistent")
            rel_cols.append(x)
        if modulus:
            for i in range(k):
                e = tuple(modulus if t == i else 0 for t in range(k))
                x = self._coords(e)
                assert x is not None
                rel_cols.append(x)
        z = basis.cols
        X = IntMatrix.from_columns(rel_cols, rows=z)
        snf = smith_normal_form(X)
        self.U = snf.U
        self.Uinv = unimodular_inverse(snf.U)
        diag = snf.diagonal()
        self.dlist = [diag[i] if i < len(diag) else 0 for i in range(z)]
        free_idx = [i for i, d in enumerate(self.dlist) if d == 0]
        torsion_idx = [i for i, d in enumerate(self.dlist) if d >= 2]
        self.gen_index = free_idx + torsion_idx          # SNF row per canonical generator
        self.orders = tuple([0] * len(free_idx) + [self.dlist[i] for i in torsion_idx])

    def _coords(self, vec: Sequence[int]):
        if self.cycle_basis.cols == 0:
            return () if all(v == 0 for v in vec) else None
        return self._solver.solve(vec)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def is_cycle(self, vec: Sequence[int]) -> bool:
        return self._coords(list(vec)) is not None

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of a cycle."""
        w = self._coords(list(vec))
        if w is None:
            raise ValueError("vector is not a cycle in this factor")
        y = self.U.apply(w)
        out = []
        for idx, o in zip(self.gen_index, self.orders):
            out.append(y[idx] % o if o else y[idx])
        return tuple(out)

    def rep(self, i: int) -> tuple[int, ...]:
        """Explicit cycle representing canonical generator i."""
        idx = self.gen_index[i]
        coords = self.Uinv.column(idx)
        return self.cycle_basis.apply(coords)


class HomologyData:
    """Homology of a complex at one degree, with representatives.

    The presented group concatenates the canonical generators of every
    coefficient factor (no cross-factor merging); ``group`` is the fully
    canonicalized value.
    """

    def __init__(self, cx: Complex, n: int):
        self.complex = cx
        self.degree = n
        k = cx.rank(n)
        if cx.orientation == "chain":
            outgoing, incoming = cx.diff(n), cx.diff(n + 1)
        else:
            outgoing, incoming = cx.diff(n), cx.diff(n - 1)
        self.factors = [FactorHomology(k, c, outgoing, incoming)
                        for c in factor_moduli(cx)]
        orders: list[int] = []
        self.gen_location: list[tuple[int, int]] = []
        for fi, f in enumerate(self.factors):
            for li in range(f.ngens):
                orders.append(f.orders[li])
                self.gen_location.append((fi, li))
        self.presented = PresentedGroup(orders)
        self.group = self.presented.fg()

    def rep(self, i: int) -> tuple[int, tuple[int, ...]]:
        fi, li = self.gen_location[i]
        return fi, self.factors[fi].rep(li)

    def project(self, factor_idx: int, vec: Sequence[int]) -> tuple[int, ...]:
        """Full canonical coordinates of a single-factor cycle."""
        local = self.factors[factor_idx].project(vec)
        out = []
        pos = 0
        for fi, f in enumerate(self.factors):
            if fi == factor_idx:
                out.extend(local)
            else:
                out.extend([0] * f.ngens)
            pos += f.ngens
        return tuple(out)

    def zero_coords(self) -> tuple[int, ...]:
        return tuple([0] * self.presented.ngens)


def homology(cx: Complex, n: int) -> HomologyData:
    """Cycles modulo boundaries at degree n, with witness data."""
    return HomologyData(cx, n)


# ---------------------------------------------------------------------------
# chain maps, homotopies, 3-cells
# ---------------------------------------------------------------------------

def _combined_degrees(*objs, pad: int = 1) -> list[int]:
    ds: set[int] = set()
    for o in objs:
        ds.update(o.degrees())
    if not ds:
        return []
    lo, hi = min(ds), max(ds)
    return list(range(lo - pad, hi + pad + 1))


class ChainMap:
    """Degree-0 map of complexes; commutes with the differentials."""

    def __init__(self, source: Complex, target: Complex,
                 blocks: Mapping[int, IntMatrix], check: bool = True):
        self.source = source
        self.target = target
        self.blocks = {}
        for n, m in blocks.items():
            n = int(n)
            expected = (target.rank(n), source.rank(n))
            if m.shape != expected:
                raise ValueError(f"block at degree {n}: shape {m.shape}, expected {expected}")
            if not m.is_zero():
                self.blocks[n] = m
        if source.orientation != target.orientation:
            raise ValueError("orientation mismatch")
        if check:
            self.verify()

    def block(self, n: int) -> IntMatrix:
        b = self.blocks.get(n)
        if b is None:
            return IntMatrix.zero(self.target.rank(n), self.source.rank(n))
        return b

    def verify(self) -> None:
        step = self.source.step
        for n in _combined_degrees(self.source, self.target):
            lhs = self.target.diff(n) @ self.block(n)
            rhs = self.block(n + step) @ self.source.diff(n)
            if lhs != rhs:
                raise ValueError(f"not a chain map at degree {n}")

    @classmethod
    def identity(cls, cx: Complex) -> "ChainMap":
        return cls(cx, cx, {n: IntMatrix.identity(cx.rank(n)) for n in cx.degrees()},
                   check=False)

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, {}, check=False)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        blocks = {}
        for n in _combined_degrees(other.source, self.target, pad=0):
            blocks[n] = self.block(n) @ other.block(n)
        return ChainMap(other.source, self.target, blocks, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        blocks = {}
        for n in set(self.blocks) | set(other.blocks):
            blocks[n] = self.block(n) + other.block(n)
        return ChainMap(self.source, self.target, blocks, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        blocks = {}
        for n in set(self.blocks) | set(other.blocks):
            blocks[n] = self.block(n) - other.block(n)
        return ChainMap(self.source, self.target, blocks, check=False)

    def induced(self, n: int, source_h: HomologyData | None = None,
                target_h: HomologyData | None = None) -> GroupMorphism:
        """Morphism on homology at degree n, on canonical presentations."""
        sh = source_h if source_h is not None else homology(self.source, n)
        th = target_h if target_h is not None else homology(self.target, n)
        cols = []
        for i in range(sh.presented.ngens):
            fi, vec = sh.rep(i)
            cols.append(th.project(fi, self.block(n).apply(vec)))
        m = IntMatrix.from_columns(cols, rows=th.presented.ngens)
        return GroupMorphism(sh.presented, th.presented, m)


def apply_on_homology(f: ChainMap, n: int) -> GroupMorphism:
    f.verify()
    return f.induced(n)


class ChainHomotopy:
    """Degree +1 (chain) or -1 (cochain) map L with dL + Ld = g - f."""

    def __init__(self, f: ChainMap, g: ChainMap, blocks: Mapping[int, IntMatrix],
                 check: bool = True):
        if f.source is not g.source and f.source.degrees() != g.source.degrees():
            raise ValueError("homotopy endpoints have different sources")
        self.f = f
        self.g = g
        self.source = f.source
        self.target = f.target
        self.blocks = {}
        shift = 1 if self.source.orientation == "chain" else -1
        self.shift = shift
        for n, m in blocks.items():
            n = int(n)
            expected = (self.target.rank(n + shift), self.source.rank(n))
            if m.shape != expected:
                raise ValueError(f"homotopy block at {n}: shape {m.shape}, expected {expected}")
            if not m.is_zero():
                self.blocks[n] = m
        if check:
            self.verify()

    def block(self, n: int) -> IntMatrix:
        b = self.blocks.get(n)
        if b is None:
            return IntMatrix.zero(self.target.rank(n + self.shift), self.source.rank(n))
        return b

    def verify(self) -> None:
        step = self.source.step
        for n in _combined_degrees(self.source, self.target):
            lhs = (self.target.diff(n + self.shift) @ self.block(n)
                   + self.block(n + step) @ self.source.diff(n))
            rhs = self.g.block(n) - self.f.block(n)
            if lhs != rhs:
                raise ValueError(f"homotopy identity fails at degree {n}")


class ThreeCell:
    """Degree +2 (chain) or -2 (cochain) map H with dH - Hd = L' - L."""

    def __init__(self, L: ChainHomotopy, Lp: ChainHomotopy,
                 blocks: Mapping[int, IntMatrix], check: bool = True):
        self.L = L
        self.Lp = Lp
        self.source = L.source
        self.target = L.target
        shift = 2 if self.source.orientation == "chain" else -2
        self.shift = shift
        self.blocks = {}
        for n, m in blocks.items():
            n = int(n)
            expected = (self.target.rank(n + shift), self.source.rank(n))
            if m.shape != expected:
                raise ValueError(f"3-cell block at {n}: shape {m.shape}, expected {expected}")
            if not m.is_zero():
                self.blocks[n] = m
        if check:
            self.verify()

    def block(self, n: int) -> IntMatrix:
        b = self.blocks.get(n)
        if b is None:
            return IntMatrix.zero(self.target.rank(n + self.shift), self.source.rank(n))
        return b

    def verify(self) -> None:
        step = self.source.step
        for n in _combined_degrees(self.source, self.target):
            lhs = (self.target.diff(n + self.shift) @ self.block(n)
                   - self.block(n + step) @ self.source.diff(n))
            rhs = self.Lp.block(n) - self.L.block(n)
            if lhs != rhs:
                raise ValueError(f"3-cell identity fails at degree {n}")


def homotopy_perturb(f: ChainMap, blocks: Mapping[int, IntMatrix]) -> tuple[ChainMap, ChainHomotopy]:
    """g := f + dL + Ld for the given degree-shift blocks; returns (g, L: f => g)."""
    step = f.source.step
    shift = 1 if f.source.orientation == "chain" else -1
    def block(n):
        m = blocks.get(n)
        if m is None:
            return IntMatrix.zero(f.target.rank(n + shift), f.source.rank(n))
        return m
    g_blocks = {}
    for n in _combined_degrees(f.source, f.target):
        g_blocks[n] = (f.block(n) + f.target.diff(n + shift) @ block(n)
                       + block(n + step) @ f.source.diff(n))
    g = ChainMap(f.source, f.target, g_blocks, check=False)
    L = ChainHomotopy(f, g, blocks, check=False)
    return g, L


# ---------------------------------------------------------------------------
# locally split exact sequences and the connecting homomorphism
# ---------------------------------------------------------------------------

class LocallySplitSes:
    """0 -> A -(i)-> B -(p)-> C -> 0, split exact in each degree.

    ``sections[n]`` is a right inverse of p_n and ``retractions[n]`` a left
    inverse of i_n with retraction o section = 0.
    """

    def __init__(self, include: ChainMap, project: ChainMap,
                 sections: Mapping[int, IntMatrix],
                 retractions: Mapping[int, IntMatrix], check: bool = True):
        self.include = include
        self.project = project
        self.sub = include.source
        self.total = include.target
        self.quotient = project.target
        if project.source is not include.target:
            raise ValueError("include and project do not share the middle complex")
        self.sections = {int(n): m for n, m in sections.items()}
        self.retractions = {int(n): m for n, m in retractions.items()}
        if check:
            self.verify()

    def section(self, n: int) -> IntMatrix:
        m = self.sections.get(n)
        if m is None:
            return IntMatrix.zero(self.total.rank(n), self.quotient.rank(n))
        return m

    def retraction(self, n: int) -> IntMatrix:
        m = self.retractions.get(n)
        if m is None:
            return IntMatrix.zero(self.sub.rank(n), self.total.rank(n))
        return m

    def degrees(self) -> list[int]:
        return _combined_degrees(self.sub, self.total, self.quotient)

    def verify(self) -> None:
        self.include.verify()
        self.project.verify()
        for n in self.degrees():
            i_n = self.include.block(n)
            p_n = self.project.block(n)
            s_n = self.section(n)
            r_n = self.retraction(n)
            if not (p_n @ i_n).is_zero():
                raise ValueError(f"p o i != 0 at degree {n}")
            if r_n @ i_n != IntMatrix.identity(self.sub.rank(n)):
                raise ValueError(f"retraction o i != id at degree {n}")
            if p_n @ s_n != IntMatrix.identity(self.quotient.rank(n)):
                raise ValueError(f"p o section != id at degree {n}")
            if not (r_n @ s_n).is_zero():
                raise ValueError(f"retraction o section != 0 at degree {n}")
            if i_n @ r_n + s_n @ p_n != IntMatrix.identity(self.total.rank(n)):
                raise ValueError(f"splitting does not decompose the middle at degree {n}")

    def connecting_matrix(self, n: int) -> IntMatrix:
        """The lift retraction o d o section at degree n (before passing to homology)."""
        step = self.total.step
        return self.retraction(n + step) @ self.total.diff(n) @ self.section(n)


def connecting_homomorphism(ses: LocallySplitSes, n: int,
                            source_h: HomologyData | None = None,
                            target_h: HomologyData | None = None) -> GroupMorphism:
    """Connecting homomorphism at degree n.

    Chain orientation: H_n(C) -> H_{n-1}(A); cochain: H^n(C) -> H^{n+1}(A).
    Independent of the chosen sections/retractions.
    """
    step = ses.total.step
    sh = source_h if source_h is not None else homology(ses.quotient, n)
    th = target_h if target_h is not None else homology(ses.sub, n + step)
    dhat = ses.connecting_matrix(n)
    cols = []
    for i in range(sh.presented.ngens):
        fi, vec = sh.rep(i)
        cols.append(th.project(fi, dhat.apply(vec)))
    m = IntMatrix.from_columns(cols, rows=th.presented.ngens)
    return GroupMorphism(sh.presented, th.presented, m)


@dataclass
class ExactnessVerdict:
    ok: bool
    failures: list[str]

    def __bool__(self):
        return self.ok


def long_exact_check(ses: LocallySplitSes) -> ExactnessVerdict:
    """Verify im == ker at every node of the induced long exact sequence."""
    step = ses.total.step
    degs = ses.degrees()
    h_sub = {n: homology(ses.sub, n) for n in degs}
    h_tot = {n: homology(ses.total, n) for n in degs}
    h_quo = {n: homology(ses.quotient, n) for n in degs}
    failures = []
    for n in degs:
        if n + step not in h_sub:
            continue
        i_star = ses.include.induced(n, h_sub[n], h_tot[n])
        p_star = ses.project.induced(n, h_tot[n], h_quo[n])
        d_n = connecting_homomorphism(ses, n, h_quo[n], h_sub[n + step])
        i_next = ses.include.induced(n + step, h_sub[n + step], h_tot[n + step])
        if not exact_at(i_star, p_star):
            failures.append(f"middle homology at degree {n}")
        if not exact_at(p_star, d_n):
            failures.append(f"quotient homology at degree {n}")
        if not exact_at(d_n, i_next):
            failures.append(f"sub homology at degree {n + step}")
    return ExactnessVerdict(not failures, failures)


# ---------------------------------------------------------------------------
# duality helpers
# ---------------------------------------------------------------------------

def dual_chain_map(f: ChainMap, coeff: FgAbGroup) -> ChainMap:
    """G-dual of a cochain map: transposed blocks, reversed direction."""
    src = f.target
    tgt = f.source
    if src.orientation != "cochain":
        raise ValueError("dual_chain_map expects cochain complexes")
    return ChainMap(g_dual(src, coeff), g_dual(tgt, coeff),
                    {n: f.block(n).transpose() for n in _combined_degrees(src, tgt)},
                    check=False)


def dual_ses(ses: LocallySplitSes, coeff: FgAbGroup) -> LocallySplitSes:
    """G-dual of a locally split SES of cochain complexes.

    0 -> A -> B -> C -> 0 dualizes to 0 -> C* -> B* -> A* -> 0; the dual
    sections are the transposed integral retractions and vice versa.
    """
    if ses.total.orientation != "cochain":
        raise ValueError("dual_ses expects cochain complexes")
    a_star = g_dual(ses.sub, coeff)
    b_star = g_dual(ses.total, coeff)
    c_star = g_dual(ses.quotient, coeff)
    degs = ses.degrees()
    include = ChainMap(c_star, b_star, {n: ses.project.block(n).transpose() for n in degs},
                       check=False)
    project = ChainMap(b_star, a_star, {n: ses.include.block(n).transpose() for n in degs},
                       check=False)
    sections = {n: ses.retraction(n).transpose() for n in degs}
    retractions = {n: ses.section(n).transpose() for n in degs}
    return LocallySplitSes(include, project, sections, retractions, check=False)

