"""Towers and inductive sequences of complexes, their homotopy (co)limits,
and limit diagnostics.

An infinite tower is a finite window of stages plus an optional stationary
tail (a fixed stage with a fixed self-bonding repeated forever).  Every
claim about behaviour at infinity is emitted only when the stationary tail
certifies it; otherwise reports carry window tags.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .abgroups import (
    FgAbGroup,
    GroupMorphism,
    PresentedGroup,
    Subgroup,
    ZERO_GROUP,
    hom_group,
    saturate,
)
from .complexes import (
    ChainMap,
    Complex,
    FreeComplex,
    GComplex,
    HomologyData,
    LocallySplitSes,
    connecting_homomorphism,
    factor_moduli,
    g_dual,
    homology,
    integral_cochain,
    tensor_complex,
)
from .extuct import (
    HomPresentation,
    UctContext,
    hom_functor_map,
    naturality_check,
)
from .intlat import IntMatrix, LinearSolver, image_membership, kernel_basis
from .simplicial import (
    Carrier,
    SimplicialComplex,
    chain_map_with_support,
    oriented_chain_complex,
    relative_pair,
)


# ---------------------------------------------------------------------------
# towers of chain complexes
# ---------------------------------------------------------------------------

class ChainTower:
    """Inverse sequence of complexes: maps[m] goes from stage m+1 to stage m.

    ``tail_map`` is a self-map of the last stage; when present the tower
    continues with copies of that stage forever.
    """

    def __init__(self, stages: Sequence[Complex], maps: Sequence[ChainMap],
                 tail_map: ChainMap | None = None, check: bool = True):
        if len(maps) != max(len(stages) - 1, 0):
            raise ValueError("need exactly one bonding map between consecutive stages")
        self.stages = list(stages)
        self.maps = list(maps)
        self.tail_map = tail_map
        if check:
            for m, f in enumerate(self.maps):
                if f.source is not self.stages[m + 1] or f.target is not self.stages[m]:
                    if f.source.degrees() != self.stages[m + 1].degrees() or \
                       f.target.degrees() != self.stages[m].degrees():
                        raise ValueError(f"bonding map {m} endpoints mismatch")
                f.verify()
            if tail_map is not None:
                tail_map.verify()

    def unroll(self, depth: int) -> "ChainTower":
        """Window of depth+1 stages with the tail expanded, no tail left."""
        stages = list(self.stages)
        maps = list(self.maps)
        if len(stages) > depth + 1:
            stages = stages[:depth + 1]
            maps = maps[:depth]
        while len(stages) < depth + 1:
            if self.tail_map is None:
                break
            stages.append(stages[-1])
            maps.append(self.tail_map)
        return ChainTower(stages, maps, None, check=False)

    def composite(self, m0: int, m1: int) -> ChainMap:
        """p^{(m0, m1)}: stage m1 -> stage m0 for m0 <= m1."""
        f = ChainMap.identity(self.stages[m0])
        for m in range(m0, m1):
            f = f.compose(self.maps[m])
        return f

    def __len__(self):
        return len(self.stages)


class CochainSequence:
    """Direct sequence of cochain complexes: maps[l] goes from stage l to l+1."""

    def __init__(self, stages: Sequence[FreeComplex], maps: Sequence[ChainMap],
                 tail_map: ChainMap | None = None, check: bool = True):
        if len(maps) != max(len(stages) - 1, 0):
            raise ValueError("need exactly one bonding map between consecutive stages")
        self.stages = list(stages)
        self.maps = list(maps)
        self.tail_map = tail_map
        if check:
            for f in self.maps:
                f.verify()
            if tail_map is not None:
                tail_map.verify()

    def unroll(self, depth: int) -> "CochainSequence":
        stages = list(self.stages)
        maps = list(self.maps)
        if len(stages) > depth + 1:
            stages = stages[:depth + 1]
            maps = maps[:depth]
        while len(stages) < depth + 1:
            if self.tail_map is None:
                break
            stages.append(stages[-1])
            maps.append(self.tail_map)
        return CochainSequence(stages, maps, None, check=False)

    def composite(self, l1: int, l0: int) -> ChainMap:
        """eta_{(l1, l0)}: stage l0 -> stage l1 for l0 <= l1."""
        f = ChainMap.identity(self.stages[l0])
        for l in range(l0, l1):
            f = self.maps[l].compose(f)
        return f

    def dual_tower(self, coeff: FgAbGroup) -> ChainTower:
        duals = [g_dual(s, coeff) for s in self.stages]
        maps = []
        for m, f in enumerate(self.maps):
            blocks = {n: f.block(n).transpose() for n in set(f.source.degrees())
                      | set(f.target.degrees())}
            maps.append(ChainMap(duals[m + 1], duals[m], blocks, check=False))
        tail = None
        if self.tail_map is not None:
            f = self.tail_map
            blocks = {n: f.block(n).transpose() for n in f.source.degrees()}
            tail = ChainMap(duals[-1], duals[-1], blocks, check=False)
        return ChainTower(duals, maps, tail, check=False)

    def __len__(self):
        return len(self.stages)


@dataclass
class SimplicialTower:
    """Tower of finite simplicial complexes with carrier bondings."""

    stages: list[SimplicialComplex]
    bonding: list[Carrier]                 # bonding[m]: stage m+1 -> stage m
    tail: Carrier | None = None            # self-carrier of the last stage

    def chain_tower(self, coeff: FgAbGroup | None = None) -> ChainTower:
        complexes = [oriented_chain_complex(k) for k in self.stages]
        if coeff is not None:
            complexes = [tensor_complex(c, coeff) for c in complexes]
        maps = []
        for m, kappa in enumerate(self.bonding):
            f = chain_map_with_support(kappa)
            blocks = f.blocks
            maps.append(ChainMap(complexes[m + 1], complexes[m], blocks, check=False))
        tail = None
        if self.tail is not None:
            f = chain_map_with_support(self.tail)
            tail = ChainMap(complexes[-1], complexes[-1], f.blocks, check=False)
        return ChainTower(complexes, maps, tail, check=False)

    def unrolled_depth(self, depth: int) -> int:
        if self.tail is None:
            return min(depth, len(self.stages) - 1)
        return depth


# ---------------------------------------------------------------------------
# homotopy limit
# ---------------------------------------------------------------------------

@dataclass
class HolimLayout:
    """Basis bookkeeping: stage blocks first, then consecutive-pair blocks."""

    stage_offsets: dict[int, list[int]]    # degree -> offset of each stage block
    pair_offsets: dict[int, list[int]]     # degree -> offset of each pair block
    stage_ranks: dict[int, list[int]]
    pair_ranks: dict[int, list[int]]
    total: dict[int, int]

    def stage_slice(self, n: int, m: int) -> tuple[int, int]:
        return self.stage_offsets[n][m], self.stage_ranks[n][m]

    def pair_slice(self, n: int, m: int) -> tuple[int, int]:
        return self.pair_offsets[n][m], self.pair_ranks[n][m]


def _tower_degrees(stages: Sequence[Complex]) -> list[int]:
    degs: set[int] = set()
    for s in stages:
        degs.update(s.degrees())
    if not degs:
        return []
    return list(range(min(degs) - 1, max(degs) + 2))


def holim_layout(stages: Sequence[Complex]) -> HolimLayout:
    degs = _tower_degrees(stages)
    n_st = len(stages)
    stage_offsets, pair_offsets, stage_ranks, pair_ranks, total = {}, {}, {}, {}, {}
    for n in degs:
        so, po, sr, pr = [], [], [], []
        off = 0
        for m in range(n_st):
            so.append(off)
            r = stages[m].rank(n)
            sr.append(r)
            off += r
        for m in range(n_st - 1):
            po.append(off)
            r = stages[m].rank(n + 1)
            pr.append(r)
            off += r
        stage_offsets[n], pair_offsets[n] = so, po
        stage_ranks[n], pair_ranks[n] = sr, pr
        total[n] = off
    return HolimLayout(stage_offsets, pair_offsets, stage_ranks, pair_ranks, total)


def holim(tower: ChainTower, depth: int, include_telescope: bool = True) -> Complex:
    """Explicit homotopy-limit complex of the unrolled window.

    Degree n components: one copy of each stage's degree-n group plus one
    copy of each stage's degree-(n+1) group for every consecutive pair.
    ``include_telescope=False`` drops the comparison term of the
    differential; it exists only for mutation tests.
    """
    t = tower.unroll(depth)
    stages = t.stages
    if not stages:
        return FreeComplex("chain", {}, {})
    if any(s.orientation != "chain" for s in stages):
        raise ValueError("holim expects chain complexes")
    layout = holim_layout(stages)
    degs = _tower_degrees(stages)
    ranks = {n: layout.total[n] for n in degs if layout.total[n]}
    diffs: dict[int, IntMatrix] = {}
    for n in degs:
        rows = layout.total.get(n - 1, 0)
        cols = layout.total.get(n, 0)
        if rows == 0 or cols == 0:
            continue
        m_out = [[0] * cols for _ in range(rows)]

        def put(block: IntMatrix, r0: int, c0: int, sign: int = 1):
            for i in range(block.rows):
                row = m_out[r0 + i]
                for j in range(block.cols):
                    v = block[i, j]
                    if v:
                        row[c0 + j] += sign * v

        sgn = 1 if n % 2 == 0 else -1      # (-1)^n, n = source degree
        for m, s in enumerate(stages):
            put(s.diff(n), layout.stage_offsets[n - 1][m], layout.stage_offsets[n][m])
        for m in range(len(stages) - 1):
            put(stages[m].diff(n + 1), layout.pair_offsets[n - 1][m],
                layout.pair_offsets[n][m])
            if include_telescope:
                p = t.maps[m].block(n)
                put(p, layout.pair_offsets[n - 1][m], layout.stage_offsets[n][m + 1],
                    sign=sgn)
                r = stages[m].rank(n)
                put(IntMatrix.identity(r), layout.pair_offsets[n - 1][m],
                    layout.stage_offsets[n][m], sign=-sgn)
        diffs[n] = IntMatrix(rows, cols, m_out)
    base = FreeComplex("chain", ranks, diffs,
                       check=include_telescope)
    first = stages[0]
    if isinstance(first, GComplex):
        return GComplex(base, first.coeff)
    return base


# ---------------------------------------------------------------------------
# one-cells and two-cells between towers
# ---------------------------------------------------------------------------

@dataclass
class OneCell:
    """Coherent map of towers: reindexing, stage maps, coherence homotopies.

    maps[k] goes from source stage reindex[k] to target stage k, and
    homotopies[k] connects (target bonding) o maps[k+1] to
    maps[k] o (source bonding composite)."""

    source: ChainTower
    target: ChainTower
    reindex: list[int]
    maps: list[ChainMap]
    homotopies: list[dict[int, IntMatrix]]

    def homotopy_block(self, k: int, n: int) -> IntMatrix:
        shift = 1
        blocks = self.homotopies[k]
        b = blocks.get(n)
        if b is None:
            return IntMatrix.zero(self.target.stages[k].rank(n + shift),
                                  self.source.stages[self.reindex[k + 1]].rank(n))
        return b

    def derived_homotopy(self, k0: int, k1: int) -> dict[int, IntMatrix]:
        """The coherence homotopy across [k0, k1], summed per the recursion."""
        out: dict[int, IntMatrix] = {}
        degs = _tower_degrees(self.target.stages)
        for n in degs:
            total = None
            for k in range(k0, k1):
                p_left = self.target.composite(k0, k).block(n + 1)
                p_right = self.source.composite(self.reindex[k + 1],
                                                self.reindex[k1]).block(n)
                term = p_left @ self.homotopy_block(k, n) @ p_right
                total = term if total is None else total + term
            if total is not None and not total.is_zero():
                out[n] = total
        return out


def verify_one_cell(cell: OneCell) -> bool:
    if sorted(cell.reindex) != cell.reindex:
        return False
    n_stages = len(cell.target.stages)
    if len(cell.maps) != n_stages or len(cell.homotopies) != max(n_stages - 1, 0):
        return False
    try:
        for k, f in enumerate(cell.maps):
            f.verify()
    except ValueError:
        return False
    degs = _tower_degrees(cell.target.stages + cell.source.stages)
    for k in range(n_stages - 1):
        lhs_map = cell.target.maps[k].compose(cell.maps[k + 1])
        rhs_map = cell.maps[k].compose(
            cell.source.composite(cell.reindex[k], cell.reindex[k + 1]))
        src = cell.source.stages[cell.reindex[k + 1]]
        tgt = cell.target.stages[k]
        for n in degs:
            lhs = (tgt.diff(n + 1) @ cell.homotopy_block(k, n)
                   + cell.homotopy_block(k, n - 1) @ src.diff(n))
            rhs = rhs_map.block(n) - lhs_map.block(n)
            if lhs != rhs:
                return False
    return True


@dataclass
class TwoCell:
    """Coherence between two one-cells: homotopies at each stage plus
    3-cells tying them to the one-cells' own coherence data."""

    reindex: list[int]
    homotopies: list[dict[int, IntMatrix]]
    three_cells: list[dict[int, IntMatrix]]


def _get_block(blocks: dict[int, IntMatrix], n: int, rows: int, cols: int) -> IntMatrix:
    b = blocks.get(n)
    if b is None:
        return IntMatrix.zero(rows, cols)
    return b


def verify_two_cell(cell: TwoCell, f: OneCell, f2: OneCell) -> bool:
    if f.source is not f2.source and f.source.stages is not f2.source.stages:
        if [s.degrees() for s in f.source.stages] != [s.degrees() for s in f2.source.stages]:
            return False
    src_t = f.source
    tgt_t = f.target
    n_stages = len(tgt_t.stages)
    if any(cell.reindex[k] < max(f.reindex[k], f2.reindex[k]) for k in range(n_stages)):
        return False
    degs = _tower_degrees(tgt_t.stages + src_t.stages)
    for k in range(n_stages):
        fk = f.maps[k].compose(src_t.composite(f.reindex[k], cell.reindex[k]))
        f2k = f2.maps[k].compose(src_t.composite(f2.reindex[k], cell.reindex[k]))
        src = src_t.stages[cell.reindex[k]]
        tgt = tgt_t.stages[k]
        for n in degs:
            L_n = _get_block(cell.homotopies[k], n, tgt.rank(n + 1), src.rank(n))
            L_prev = _get_block(cell.homotopies[k], n - 1, tgt.rank(n), src.rank(n - 1))
            lhs = tgt.diff(n + 1) @ L_n + L_prev @ src.diff(n)
            if lhs != f2k.block(n) - fk.block(n):
                return False
    # 3-cell face: for each consecutive pair the two composite homotopies agree
    # up to the boundary of the given 3-cell
    for k in range(n_stages - 1):
        src = src_t.stages[cell.reindex[k + 1]]
        tgt = tgt_t.stages[k]
        p_t = tgt_t.maps[k]
        for n in degs:
            # side one: f2^{(k,k+1)} p + p L^{(k+1)}
            side1 = (f2.homotopy_block(k, n) if f2.reindex[k + 1] == cell.reindex[k + 1]
                     else f2.homotopy_block(k, n)
                     @ src_t.composite(f2.reindex[k + 1], cell.reindex[k + 1]).block(n))
            side1 = side1 + p_t.block(n + 1) @ _get_block(
                cell.homotopies[k + 1], n, tgt_t.stages[k + 1].rank(n + 1),
                src_t.stages[cell.reindex[k + 1]].rank(n))
            side2 = (_get_block(cell.homotopies[k], n, tgt.rank(n + 1),
                                src_t.stages[cell.reindex[k]].rank(n))
                     @ src_t.composite(cell.reindex[k], cell.reindex[k + 1]).block(n))
            side2 = side2 + (f.homotopy_block(k, n)
                             @ src_t.composite(f.reindex[k + 1],
                                               cell.reindex[k + 1]).block(n))
            H_n = _get_block(cell.three_cells[k], n, tgt.rank(n + 2), src.rank(n))
            H_prev = _get_block(cell.three_cells[k], n - 1, tgt.rank(n + 1), src.rank(n - 1))
            lhs = tgt.diff(n + 2) @ H_n - H_prev @ src.diff(n)
            if lhs != side2 - side1:
                return False
    return True


def identity_one_cell(tower: ChainTower) -> OneCell:
    n = len(tower.stages)
    return OneCell(source=tower, target=tower, reindex=list(range(n)),
                   maps=[ChainMap.identity(s) for s in tower.stages],
                   homotopies=[{} for _ in range(max(n - 1, 0))])


def compose_one_cells(g: OneCell, f: OneCell) -> OneCell:
    """g o f, with the composite coherence homotopies."""
    if g.source is not f.target and [s.degrees() for s in g.source.stages] != \
            [s.degrees() for s in f.target.stages]:
        raise ValueError("one-cells are not composable")
    n_stages = len(g.target.stages)
    reindex = [f.reindex[g.reindex[t]] for t in range(n_stages)]
    maps = [g.maps[t].compose(f.maps[g.reindex[t]]) for t in range(n_stages)]
    homotopies = []
    degs = _tower_degrees(g.target.stages + f.source.stages)
    for t in range(n_stages - 1):
        k_t, k_t1 = g.reindex[t], g.reindex[t + 1]
        inner = f.derived_homotopy(k_t, k_t1)
        blocks: dict[int, IntMatrix] = {}
        for n in degs:
            rows = g.target.stages[t].rank(n + 1)
            cols = f.source.stages[f.reindex[k_t1]].rank(n)
            term1 = g.maps[t].block(n + 1) @ _get_block(
                inner, n, f.target.stages[k_t].rank(n + 1), cols)
            term2 = g.homotopy_block(t, n) @ f.maps[k_t1].block(n)
            total = term1 + term2
            if not total.is_zero():
                blocks[n] = total
        homotopies.append(blocks)
    return OneCell(source=f.source, target=g.target, reindex=reindex,
                   maps=maps, homotopies=homotopies)


def holim_map(cell: OneCell, depth: int) -> ChainMap:
    """Induced map on the homotopy-limit complexes of the unrolled windows."""
    src_t = cell.source
    tgt_t = cell.target
    n_stages = min(len(tgt_t.stages), depth + 1)
    if cell.reindex[n_stages - 1] >= len(src_t.stages):
        raise ValueError("source window too shallow for the reindexing")
    hl_src = holim(src_t, len(src_t.stages) - 1)
    hl_tgt = holim(tgt_t, n_stages - 1)
    src_layout = holim_layout(src_t.stages)
    tgt_stages = tgt_t.stages[:n_stages]
    tgt_layout = holim_layout(tgt_stages)
    degs = _tower_degrees(tgt_stages)
    blocks = {}
    for n in degs:
        rows = tgt_layout.total.get(n, 0)
        cols = src_layout.total.get(n, 0)
        if rows == 0 or cols == 0:
            continue
        m_out = [[0] * cols for _ in range(rows)]

        def put(block: IntMatrix, r0: int, c0: int, sign: int = 1):
            for i in range(block.rows):
                row = m_out[r0 + i]
                for j in range(block.cols):
                    v = block[i, j]
                    if v:
                        row[c0 + j] += sign * v

        sgn = 1 if n % 2 == 0 else -1
        for k in range(n_stages):
            put(cell.maps[k].block(n), tgt_layout.stage_offsets[n][k],
                src_layout.stage_offsets[n][cell.reindex[k]])
        for k in range(n_stages - 1):
            m_k, m_k1 = cell.reindex[k], cell.reindex[k + 1]
            # image of the pair component: f^{(k)} applied to z_{m_k, m_k1}
            for m in range(m_k, m_k1):
                comp = cell.maps[k].block(n + 1) @ src_t.composite(m_k, m).block(n + 1)
                put(comp, tgt_layout.pair_offsets[n][k], src_layout.pair_offsets[n][m])
            put(cell.homotopy_block(k, n), tgt_layout.pair_offsets[n][k],
                src_layout.stage_offsets[n][m_k1], sign=sgn)
        blocks[n] = IntMatrix(rows, cols, m_out)
    return ChainMap(hl_src, hl_tgt, blocks)


# ---------------------------------------------------------------------------
# homotopy colimit
# ---------------------------------------------------------------------------

def hocolim(seq: CochainSequence, depth: int) -> FreeComplex:
    """Explicit homotopy-colimit cochain complex of the unrolled window.

    Degree n components: one copy of each stage's degree-n group (stage
    blocks first) plus one copy of each stage's degree-(n+1) group for every
    consecutive pair; the ordering mirrors the homotopy limit so the duality
    comparison is exact on matrices.
    """
    s = seq.unroll(depth)
    stages = s.stages
    if not stages:
        return FreeComplex("cochain", {}, {})
    layout = holim_layout(stages)
    degs = _tower_degrees(stages)
    ranks = {n: layout.total[n] for n in degs if layout.total[n]}
    diffs: dict[int, IntMatrix] = {}
    for n in degs:
        rows = layout.total.get(n + 1, 0)
        cols = layout.total.get(n, 0)
        if rows == 0 or cols == 0:
            continue
        m_out = [[0] * cols for _ in range(rows)]

        def put(block: IntMatrix, r0: int, c0: int, sign: int = 1):
            for i in range(block.rows):
                row = m_out[r0 + i]
                for j in range(block.cols):
                    v = block[i, j]
                    if v:
                        row[c0 + j] += sign * v

        sgn = 1 if n % 2 == 0 else -1
        for l, st in enumerate(stages):
            put(st.diff(n), layout.stage_offsets[n + 1][l], layout.stage_offsets[n][l])
        for l in range(len(stages) - 1):
            put(stages[l].diff(n + 1), layout.pair_offsets[n + 1][l],
                layout.pair_offsets[n][l])
            r = stages[l].rank(n + 1)
            put(IntMatrix.identity(r), layout.stage_offsets[n + 1][l],
                layout.pair_offsets[n][l], sign=sgn)
            put(s.maps[l].block(n + 1), layout.stage_offsets[n + 1][l + 1],
                layout.pair_offsets[n][l], sign=-sgn)
        diffs[n] = IntMatrix(rows, cols, m_out)
    return FreeComplex("cochain", ranks, diffs)


def hocolim_map(seq_src: CochainSequence, seq_tgt: CochainSequence,
                reindex: Sequence[int], cell_maps: Sequence[ChainMap],
                homotopies: Sequence[dict[int, IntMatrix]], depth: int) -> ChainMap:
    """Induced cochain map on homotopy colimits for a one-cell of sequences.

    ``cell_maps[l]`` goes from source stage l to target stage reindex[l]; the
    target window is unrolled up to the last reindex value.
    """
    src = seq_src.unroll(depth)
    tgt_depth = reindex[len(src.stages) - 1] if src.stages else depth
    tgt = seq_tgt.unroll(tgt_depth)
    hc_src = hocolim(seq_src, depth)
    hc_tgt = hocolim(seq_tgt, tgt_depth)
    src_layout = holim_layout(src.stages)
    tgt_layout = holim_layout(tgt.stages)
    degs = _tower_degrees(src.stages)
    blocks = {}
    for n in degs:
        rows = tgt_layout.total.get(n, 0)
        cols = src_layout.total.get(n, 0)
        if rows == 0 or cols == 0:
            continue
        m_out = [[0] * cols for _ in range(rows)]

        def put(block, r0, c0, sign=1):
            for i in range(block.rows):
                row = m_out[r0 + i]
                for j in range(block.cols):
                    v = block[i, j]
                    if v:
                        row[c0 + j] += sign * v

        sgn = 1 if n % 2 == 0 else -1
        for l in range(len(src.stages)):
            put(cell_maps[l].block(n), tgt_layout.stage_offsets[n][reindex[l]],
                src_layout.stage_offsets[n][l])
        for l in range(len(src.stages) - 1):
            t_l, t_l1 = reindex[l], reindex[l + 1]
            for t in range(t_l, t_l1):
                comp = seq_tgt.composite(t, t_l).compose(cell_maps[l])
                put(comp.block(n + 1), tgt_layout.pair_offsets[n][t],
                    src_layout.pair_offsets[n][l])
            hblock = homotopies[l].get(n + 1)
            if hblock is not None:
                put(hblock, tgt_layout.stage_offsets[n][t_l1],
                    src_layout.pair_offsets[n][l], sign=sgn)
        blocks[n] = IntMatrix(rows, cols, m_out)
    return ChainMap(hc_src, hc_tgt, blocks)


def duality_check(seq: CochainSequence, coeff: FgAbGroup, depth: int,
                  include_telescope: bool = True) -> bool:
    """The G-dual of the homotopy colimit equals the homotopy limit of the
    G-dual tower, matrix by matrix under the shared block ordering."""
    hc = hocolim(seq, depth)
    lhs = g_dual(hc, coeff)
    rhs = holim(seq.dual_tower(coeff), depth, include_telescope=include_telescope)
    degs = set(lhs.base.degrees()) | set(rhs.base.degrees()) | {0}
    lo, hi = min(degs) - 1, max(degs) + 1
    for n in range(lo, hi + 1):
        if lhs.base.rank(n) != rhs.base.rank(n):
            return False
        if lhs.base.diff(n) != rhs.base.diff(n):
            return False
    return True


# ---------------------------------------------------------------------------
# Mittag-Leffler analysis of group towers
# ---------------------------------------------------------------------------

MlStatus = Literal["ml_stabilized", "not_ml", "window_inconclusive"]
Lim1Status = Literal["zero", "uncountable", "window_inconclusive"]


@dataclass
class MlReport:
    stage_groups: list[FgAbGroup]
    image_chain: list[FgAbGroup]
    status: MlStatus
    stabilized_at: int | None
    lim: FgAbGroup | None
    lim_tag: Literal["exact", "window_limited"]
    lim1: Lim1Status
    image_subgroups: list[Subgroup] | None = None   # embeddings of the chain

    def lim_str(self) -> str:
        return str(self.lim) if self.lim is not None else "window_limited"


class GroupTower:
    """Inverse sequence of presented groups; maps[m]: stage m+1 -> stage m.
    ``tail`` is a self-endomorphism of the last stage repeated forever;
    without it the tower is taken as written (a finite diagram) unless the
    analysis is asked to treat the window as a truncation."""

    def __init__(self, stages: Sequence[PresentedGroup], maps: Sequence[GroupMorphism],
                 tail: GroupMorphism | None = None):
        if len(maps) != max(len(stages) - 1, 0):
            raise ValueError("need one morphism between consecutive stages")
        self.stages = list(stages)
        self.maps = list(maps)
        self.tail = tail


def _image_subgroup(g: GroupMorphism, s: Subgroup) -> Subgroup:
    gens = [g.apply(col) for col in s.generators]
    gens.extend(g.target.relation_columns())
    return Subgroup(g.target, gens)


def _injective_on(g: GroupMorphism, s: Subgroup) -> bool:
    cols = [list(c) for c in s.generators]
    if not cols:
        return True
    span = IntMatrix.from_columns([tuple(c) for c in cols], rows=g.source.ngens)
    sys = g.matrix @ span
    rel = g.target.relation_columns()
    if rel:
        sys = sys.hstack(IntMatrix.from_columns(rel, rows=g.target.ngens))
    ker = kernel_basis(sys)
    for j in range(ker.cols):
        lam = [ker[i, j] for i in range(span.cols)]
        elem = span.apply(lam)
        if not g.source.is_zero_element(elem):
            return False
    return True


def _tail_limit_analysis(group: PresentedGroup, endo: GroupMorphism,
                         max_iter: int = 64):
    """Exact limit/ML decision for the stationary part (A, g)."""
    full = Subgroup(group, [tuple(1 if i == j else 0 for i in range(group.ngens))
                            for j in range(group.ngens)])
    chain = [full]
    images: list[FgAbGroup] = [full.group()]
    for step in range(max_iter):
        nxt = _image_subgroup(endo, chain[-1])
        if nxt.equals(chain[-1]):
            lim = chain[-1].group()
            return ("ml_stabilized", step, chain, images, lim, "exact", "zero")
        chain.append(nxt)
        images.append(nxt.group())
        if _injective_on(endo, chain[-2]):
            # strict descent propagates: not Mittag-Leffler
            lim, tag = _not_ml_limit(group, endo, chain[-1])
            return ("not_ml", None, chain, images, lim, tag, "uncountable")
    return ("window_inconclusive", None, chain, images, None, "window_limited",
            "window_inconclusive")


def _not_ml_limit(group: PresentedGroup, endo: GroupMorphism, start: Subgroup):
    """In the injective strict-descent case the limit is the largest subgroup
    mapped onto itself.  Its torsion part is the (stable) torsion of the
    descending images; on the free quotient the invariant core spans the
    kernel of the unit part of the characteristic polynomial (the product of
    the irreducible factors with constant term +-1), where the restriction
    is an automorphism of the lattice.  The result is certified by checking
    surjectivity before it is reported."""
    from .abgroups import column_space_basis

    p = saturate(start)
    for _ in range(group.ngens + 2):
        nxt = saturate(_image_subgroup(endo, p))
        if nxt.equals(p):
            break
        p = nxt
    if _image_subgroup(endo, p).equals(p):
        return p.group(), "exact"

    free_idx = [i for i, o in enumerate(group.orders) if o == 0]
    torsion_gens = _torsion_generators(group, start, free_idx)
    basis = column_space_basis(p._lattice)
    proj_cols = [tuple(basis[i, j] for i in free_idx) for j in range(basis.cols)]
    lat = column_space_basis(IntMatrix.from_columns(proj_cols, rows=len(free_idx)))
    core_cols: list[tuple[int, ...]] = []
    if lat.cols:
        g_ff = IntMatrix(len(free_idx), len(free_idx),
                         [[endo.matrix[i, j] for j in free_idx] for i in free_idx])
        solver = LinearSolver(lat)
        h_cols = []
        for j in range(lat.cols):
            x = solver.solve(list(g_ff.apply(lat.column(j))))
            if x is None:
                return None, "window_limited"
            h_cols.append(x)
        h = IntMatrix.from_columns(h_cols, rows=lat.cols)
        core = _unit_polynomial_kernel(h)
        for j in range(core.cols):
            inner = lat.apply(core.column(j))
            full = [0] * group.ngens
            for pos, i in enumerate(free_idx):
                full[i] = inner[pos]
            core_cols.append(tuple(full))
    w = Subgroup(group, core_cols + torsion_gens + group.relation_columns())
    if _image_subgroup(endo, w).equals(w):
        return w.group(), "exact"
    return None, "window_limited"


def _torsion_generators(group: PresentedGroup, s: Subgroup,
                        free_idx: list[int]) -> list[tuple[int, ...]]:
    """Generators of the finite-order part of a subgroup: its lattice
    elements with vanishing free coordinates."""
    from .abgroups import column_space_basis

    basis = column_space_basis(s._lattice)
    if basis.cols == 0:
        return []
    if not free_idx:
        return [basis.column(j) for j in range(basis.cols)]
    free_rows = IntMatrix(len(free_idx), basis.cols,
                          [[basis[i, j] for j in range(basis.cols)]
                           for i in free_idx])
    lam = kernel_basis(free_rows)
    return [basis.apply(lam.column(j)) for j in range(lam.cols)]


def _unit_polynomial_kernel(h: IntMatrix) -> IntMatrix:
    """Kernel of d(h), d = product of the characteristic-polynomial factors
    with unit constant term; the restriction of h there is unimodular."""
    import sympy

    m = h.rows
    if m == 0:
        return IntMatrix.zero(0, 0)
    sym = sympy.Matrix(h.to_lists())
    lam = sympy.Symbol("lam")
    chi = sym.charpoly(lam)
    _, factors = sympy.factor_list(chi.as_expr())
    d = sympy.Integer(1)
    for base, mult in factors:
        poly = sympy.Poly(base, lam)
        const = poly.eval(0)
        if abs(const) == 1:
            d *= base ** mult
    coeffs = [int(c) for c in sympy.Poly(d, lam).all_coeffs()]
    acc = IntMatrix.zero(m, m)
    for c in coeffs:
        acc = acc @ h
        if c:
            acc = acc + IntMatrix.identity(m).scale(c)
    return kernel_basis(acc)


def ml_analyze(tower: GroupTower, window: int | None = None,
               window_only: bool = False) -> MlReport:
    """Image-chain analysis of a tower of f.g. groups.

    Stationary tails are decided exactly: either the iterated images of the
    tail endomorphism stabilize (Mittag-Leffler; the limit group is the
    stable image) or strict descent with injectivity certifies the failure
    (the first derived limit of countable groups is then uncountable).
    Without a tail the tower is a finite diagram (limit = last stage) unless
    ``window_only`` marks it as a truncation, in which case claims about
    infinity are reported as inconclusive.
    """
    stages = tower.stages
    stage_groups = [s.fg() for s in stages]
    if tower.tail is not None:
        status, at, chain, images, lim, lim_tag, lim1 = _tail_limit_analysis(
            stages[-1], tower.tail)
        return MlReport(stage_groups, images, status, at, lim, lim_tag, lim1,
                        image_subgroups=chain)
    if window_only:
        return MlReport(stage_groups, [], "window_inconclusive", None, None,
                        "window_limited", "window_inconclusive")
    lim = stage_groups[-1] if stage_groups else ZERO_GROUP
    return MlReport(stage_groups, [], "ml_stabilized", 0, lim, "exact", "zero")


# ---------------------------------------------------------------------------
# the Local comparison map and asymptotic witnesses
# ---------------------------------------------------------------------------

@dataclass
class LocalAnalysis:
    holim_homology: HomologyData
    stage_homologies: list[HomologyData]
    stage_maps: list[GroupMorphism]
    compatible: bool      # bonding o loc_{m+1} == loc_m on homology
    kernel_generators: list[tuple[int, ...]]


def _stage_projection_blocks(stages, layout, m) -> dict[int, IntMatrix]:
    blocks = {}
    for n, total in layout.total.items():
        r = layout.stage_ranks[n][m]
        if r == 0 or total == 0:
            continue
        off = layout.stage_offsets[n][m]
        rows = [[1 if j == off + i else 0 for j in range(total)] for i in range(r)]
        blocks[n] = IntMatrix.from_rows(rows, cols=total)
    return blocks


def local_map(tower: ChainTower, depth: int, n: int) -> LocalAnalysis:
    """H_n(holim) -> product of stage homologies, with kernel generators."""
    t = tower.unroll(depth)
    hl = holim(t, len(t.stages) - 1)
    layout = holim_layout(t.stages)
    h_top = homology(hl, n)
    stage_h = [homology(s, n) for s in t.stages]
    maps = []
    for m, s in enumerate(t.stages):
        blocks = _stage_projection_blocks(t.stages, layout, m)
        proj = ChainMap(hl, s, blocks, check=False)
        maps.append(proj.induced(n, h_top, stage_h[m]))
    compatible = True
    for m in range(len(t.stages) - 1):
        bonded = t.maps[m].induced(n, stage_h[m + 1], stage_h[m])
        if not bonded.compose(maps[m + 1]).equals(maps[m]):
            compatible = False
    # kernel of the combined stage map
    stacked_rows: list[list[int]] = []
    for m in maps:
        for i in range(m.matrix.rows):
            stacked_rows.append(list(m.matrix.row(i)))
    stacked_targets: list[int] = []
    for sh in stage_h:
        stacked_targets.extend(sh.presented.orders)
    combined_target = PresentedGroup(stacked_targets)
    combined = GroupMorphism(h_top.presented, combined_target,
                             IntMatrix.from_rows(stacked_rows,
                                                 cols=h_top.presented.ngens),
                             check=False)
    kernel = combined.kernel()
    kergens = [g for g in kernel.generators if not h_top.presented.is_zero_element(g)]
    return LocalAnalysis(h_top, stage_h, maps, compatible, kergens)


class StageClassNonzero(ValueError):
    """The requested witness cannot exist: a stage class does not vanish."""


def asymptotic_witness(tower: ChainTower, depth: int, n: int,
                       z_factor: int, z_vec: Sequence[int], m0: int):
    """Reconstruct w with (dw)_m = z_m for m <= m0 and (dw)_{k,k+1} = z_{k,k+1}.

    z is a degree-n cycle of the homotopy limit given by its coordinate
    vector in the chosen coefficient factor; the recursion is
    w_k = (-1)^n z_{k,k+1} + p(w_{k+1}), seeded by any stage-m0 bounding
    chain, exactly as in the constructive vanishing argument.
    """
    t = tower.unroll(depth)
    stages = t.stages
    layout = holim_layout(stages)
    hl = holim(t, len(stages) - 1)
    moduli = factor_moduli(hl)
    q = moduli[z_factor]
    if len(z_vec) != layout.total.get(n, 0):
        raise ValueError("cycle vector length mismatch")
    dz = hl.diff(n).apply(z_vec)
    if any((x % q if q else x) != 0 for x in dz):
        raise ValueError("input is not a cycle")

    def stage_part(vec, m, deg):
        off, r = layout.stage_slice(deg, m)
        return list(vec[off: off + r])

    def pair_part(vec, m, deg):
        off, r = layout.pair_slice(deg, m)
        return list(vec[off: off + r])

    # bounding chain at stage m0
    s_m0 = stages[m0]
    d_in = s_m0.diff(n + 1)
    zm0 = stage_part(z_vec, m0, n)
    if q:
        aug = d_in.hstack(IntMatrix.diagonal(d_in.rows, d_in.rows, [q] * d_in.rows))
        x = image_membership(aug, zm0)
        w_m0 = list(x[:d_in.cols]) if x is not None else None
    else:
        w_m0 = image_membership(d_in, zm0)
        w_m0 = list(w_m0) if w_m0 is not None else None
    if w_m0 is None:
        raise StageClassNonzero(f"stage {m0} class does not vanish")

    sgn = 1 if n % 2 == 0 else -1
    w_stage: dict[int, list[int]] = {m0: w_m0}
    for m in range(len(stages)):
        if m > m0:
            w_stage[m] = [0] * stages[m].rank(n + 1)
    for k in range(m0 - 1, -1, -1):
        zpair = pair_part(z_vec, k, n)
        p_block = t.maps[k].block(n + 1)
        pushed = p_block.apply(w_stage[k + 1])
        w_stage[k] = [sgn * a + b for a, b in zip(zpair, pushed)]

    total = layout.total.get(n + 1, 0)
    w = [0] * total
    for m in range(len(stages)):
        off, r = layout.stage_slice(n + 1, m)
        for i in range(r):
            w[off + i] = w_stage[m][i]
    dw = hl.diff(n + 1).apply(w)

    def same(a, b):
        return (a - b) % q == 0 if q else a == b

    for m in range(m0 + 1):
        got = stage_part(dw, m, n)
        want = stage_part(z_vec, m, n)
        assert all(same(a, b) for a, b in zip(got, want)), "witness fails on a stage"
    for k in range(m0):
        got = pair_part(dw, k, n)
        want = pair_part(z_vec, k, n)
        assert all(same(a, b) for a, b in zip(got, want)), "witness fails on a pair"
    return tuple(w)


# ---------------------------------------------------------------------------
# end-to-end reports for towers of spaces
# ---------------------------------------------------------------------------

@dataclass
class StageCohomology:
    h_same: FgAbGroup      # integral cohomology in the report degree
    h_up: FgAbGroup        # integral cohomology one degree up


@dataclass
class SpaceUctReport:
    degree: int
    coeff: FgAbGroup
    stage_data: list[StageCohomology]
    hom_part: MlReport                    # lim Hom(H^n(stage), G)
    ext_lim: MlReport                     # lim Ext(H^{n+1}(stage), G)
    ext_lim1_hom: Lim1Status              # lim^1 Hom(H^{n+1}(stage), G) status
    weak_part: MlReport                   # lim H_n(stage; G)
    asymptotic_flag: Literal["nontrivial", "trivial", "window_inconclusive"]
    stage_uct_ok: list[bool]
    certified: bool                       # stationary tail present

    def all_stage_uct_ok(self) -> bool:
        return all(self.stage_uct_ok)


def _cochain_transitions(chain_tower: ChainTower):
    """Integral cochain stages with the dualized (direction-reversed) maps."""
    cochains = [integral_cochain(s if isinstance(s, FreeComplex) else s.base)
                for s in chain_tower.stages]
    etas = []
    for m, f in enumerate(chain_tower.maps):
        blocks = {n: f.block(n).transpose()
                  for n in set(f.source.degrees()) | set(f.target.degrees())}
        etas.append(ChainMap(cochains[m], cochains[m + 1], blocks, check=False))
    tail_eta = None
    if chain_tower.tail_map is not None:
        f = chain_tower.tail_map
        blocks = {n: f.block(n).transpose()
                  for n in set(f.source.degrees()) | set(f.target.degrees())}
        tail_eta = ChainMap(cochains[-1], cochains[-1], blocks, check=False)
    return cochains, etas, tail_eta


def space_uct_report(tower: SimplicialTower, coeff: FgAbGroup, degree: int,
                     depth: int) -> SpaceUctReport:
    """Universal-coefficient data for the inverse limit of a tower of finite
    complexes: stagewise groups, the Hom/Ext limit towers, the weak part,
    and the asymptotic flag, each decided by the stationary tail when there
    is one and reported as window-scoped otherwise."""
    n = degree
    certified = tower.tail is not None
    window_only = not certified
    g_tower = tower.chain_tower(coeff)           # chain complexes with G
    z_tower = tower.chain_tower(None)            # integral chain complexes
    eff = tower.unrolled_depth(depth)
    gt = g_tower.unroll(eff)
    zt = z_tower.unroll(eff)
    cochains, etas, tail_eta = _cochain_transitions(
        ChainTower(zt.stages, zt.maps,
                   z_tower.tail_map if certified else None, check=False))

    # one UCT context per distinct stage object
    ctx_cache: dict[int, UctContext] = {}

    def ctx_of(m: int) -> UctContext:
        key = id(cochains[m])
        if key not in ctx_cache:
            ctx_cache[key] = UctContext(cochains[m], coeff, n)
        return ctx_cache[key]

    n_stages = len(zt.stages)
    stage_data = [StageCohomology(ctx_of(m).h_same.group, ctx_of(m).h_up.group)
                  for m in range(n_stages)]
    stage_uct_ok = [ctx_of(m).verdicts().all_ok() for m in range(n_stages)]

    def cohomology_transition(m: int, data: str) -> GroupMorphism:
        src_h = getattr(ctx_of(m), data)
        tgt_h = getattr(ctx_of(m + 1), data) if m + 1 < n_stages else getattr(ctx_of(m), data)
        deg = n if data == "h_same" else n + 1
        return etas[m].induced(deg, src_h, tgt_h)

    def tail_transition(data: str, deg: int) -> GroupMorphism | None:
        if tail_eta is None:
            return None
        h = getattr(ctx_of(n_stages - 1), data)
        return tail_eta.induced(deg, h, h)

    # Hom(H^n(stage), G) tower
    hom_stages = [ctx_of(m).hom_pres for m in range(n_stages)]
    hom_maps = [hom_functor_map(cohomology_transition(m, "h_same"),
                                hom_stages[m + 1], hom_stages[m])
                for m in range(n_stages - 1)]
    tt = tail_transition("h_same", n)
    hom_tail = (hom_functor_map(tt, hom_stages[-1], hom_stages[-1])
                if tt is not None else None)
    hom_part = ml_analyze(GroupTower([h.presented for h in hom_stages],
                                     hom_maps, hom_tail), window_only=window_only)

    # Ext(H^{n+1}(stage), G) tower
    from .extuct import ext_functor_map
    ext_stages = [ctx_of(m).ext_pres for m in range(n_stages)]
    ext_maps = [ext_functor_map(cohomology_transition(m, "h_up"),
                                ext_stages[m + 1], ext_stages[m])
                for m in range(n_stages - 1)]
    tt_up = tail_transition("h_up", n + 1)
    ext_tail = (ext_functor_map(tt_up, ext_stages[-1], ext_stages[-1])
                if tt_up is not None else None)
    ext_lim = ml_analyze(GroupTower([e.presented for e in ext_stages],
                                    ext_maps, ext_tail), window_only=window_only)

    # lim^1 Hom(H^{n+1}(stage), G) status
    up_moduli = [0] * coeff.free_rank + list(coeff.torsion)
    hom_up_stages = [HomPresentation(ctx_of(m).h_up.presented.orders, up_moduli)
                     for m in range(n_stages)]
    hom_up_maps = [hom_functor_map(cohomology_transition(m, "h_up"),
                                   hom_up_stages[m + 1], hom_up_stages[m])
                   for m in range(n_stages - 1)]
    hom_up_tail = (hom_functor_map(tt_up, hom_up_stages[-1], hom_up_stages[-1])
                   if tt_up is not None else None)
    ext_lim1_hom = ml_analyze(GroupTower([h.presented for h in hom_up_stages],
                                         hom_up_maps, hom_up_tail),
                              window_only=window_only).lim1

    # weak part: lim H_n(stage; G)
    weak_h = [homology(s, n) for s in gt.stages]
    weak_maps = [gt.maps[m].induced(n, weak_h[m + 1], weak_h[m])
                 for m in range(n_stages - 1)]
    weak_tail = (g_tower.tail_map.induced(n, weak_h[-1], weak_h[-1])
                 if certified and g_tower.tail_map is not None else None)
    weak_part = ml_analyze(GroupTower([h.presented for h in weak_h],
                                      weak_maps, weak_tail), window_only=window_only)

    # asymptotic flag from the H_{n+1}(stage; G) tower
    up_h = [homology(s, n + 1) for s in gt.stages]
    up_maps = [gt.maps[m].induced(n + 1, up_h[m + 1], up_h[m])
               for m in range(n_stages - 1)]
    up_tail = (g_tower.tail_map.induced(n + 1, up_h[-1], up_h[-1])
               if certified and g_tower.tail_map is not None else None)
    up_ml = ml_analyze(GroupTower([h.presented for h in up_h], up_maps, up_tail),
                       window_only=window_only)
    flag = {"zero": "trivial", "uncountable": "nontrivial",
            "window_inconclusive": "window_inconclusive"}[up_ml.lim1]

    return SpaceUctReport(degree=n, coeff=coeff, stage_data=stage_data,
                          hom_part=hom_part, ext_lim=ext_lim,
                          ext_lim1_hom=ext_lim1_hom, weak_part=weak_part,
                          asymptotic_flag=flag, stage_uct_ok=stage_uct_ok,
                          certified=certified)


# ---------------------------------------------------------------------------
# pairs of towers
# ---------------------------------------------------------------------------

@dataclass
class PairTower:
    """Tower of simplicial pairs: carriers must map sub into sub."""

    stages: list[tuple[SimplicialComplex, SimplicialComplex]]
    bonding: list[Carrier]
    tail: Carrier | None = None


def _pair_check(pair: tuple[SimplicialComplex, SimplicialComplex]) -> None:
    k, sub = pair
    if not sub.is_subcomplex_of(k):
        raise ValueError("not a subcomplex")


def integral_cochain_pair_ses(k: SimplicialComplex,
                              sub: SimplicialComplex) -> LocallySplitSes:
    """0 -> C*(K, K') -> C*(K) -> C*(K') -> 0 with the transposed splittings."""
    chain_ses = relative_pair(k, sub)
    a = integral_cochain(chain_ses.quotient)   # relative cochains
    b = integral_cochain(chain_ses.total)
    c = integral_cochain(chain_ses.sub)
    degs = chain_ses.degrees()
    include = ChainMap(a, b, {n: chain_ses.project.block(n).transpose() for n in degs},
                       check=False)
    project = ChainMap(b, c, {n: chain_ses.include.block(n).transpose() for n in degs},
                       check=False)
    sections = {n: chain_ses.retraction(n).transpose() for n in degs}
    retractions = {n: chain_ses.section(n).transpose() for n in degs}
    return LocallySplitSes(include, project, sections, retractions)


@dataclass
class PairStageReport:
    connecting: GroupMorphism            # H_n(K, K'; G) -> H_{n-1}(K'; G)
    connecting_source: FgAbGroup
    connecting_target: FgAbGroup
    naturality_ok: bool
    uct_pair_ok: bool
    uct_sub_ok: bool


@dataclass
class PairSpaceUctReport:
    degree: int
    coeff: FgAbGroup
    stage_reports: list[PairStageReport]
    relative_weak: MlReport              # lim H_n(K_m, K'_m; G)
    long_exact_ok: list[bool]
    certified: bool

    def all_ok(self) -> bool:
        return (all(r.naturality_ok and r.uct_pair_ok and r.uct_sub_ok
                    for r in self.stage_reports) and all(self.long_exact_ok))


def pair_space_uct_report(tower: PairTower, coeff: FgAbGroup, degree: int,
                          depth: int) -> PairSpaceUctReport:
    """Stagewise relative UCT data with connecting homomorphisms and the
    naturality verdicts, plus the limit analysis of the relative tower."""
    n = degree
    for pair in tower.stages:
        _pair_check(pair)
    certified = tower.tail is not None
    stages = list(tower.stages)
    bonds = list(tower.bonding)
    if certified:
        while len(stages) < depth + 1:
            stages.append(stages[-1])
            bonds.append(tower.tail)
    else:
        stages = stages[:depth + 1]
        bonds = bonds[:max(len(stages) - 1, 0)]

    from .complexes import long_exact_check

    stage_reports = []
    rel_h = []
    ses_cache: dict[tuple[int, int], tuple] = {}
    long_exact_ok = []
    for m, (k, sub) in enumerate(stages):
        key = (id(k), id(sub))
        if key not in ses_cache:
            g_ses = relative_pair(k, sub, coeff)
            co_ses = integral_cochain_pair_ses(k, sub)
            d = connecting_homomorphism(g_ses, n)
            uct_rel = UctContext(co_ses.sub, coeff, n).verdicts().all_ok()
            uct_sub = UctContext(co_ses.quotient, coeff, n).verdicts().all_ok()
            nat_ok = all(naturality_check(co_ses, coeff, m2).all_ok()
                         for m2 in range(0, k.dim + 2))
            ses_cache[key] = (g_ses, PairStageReport(
                connecting=d, connecting_source=d.source.fg(),
                connecting_target=d.target.fg(), naturality_ok=nat_ok,
                uct_pair_ok=uct_rel, uct_sub_ok=uct_sub),
                long_exact_check(g_ses).ok)
        g_ses, rep, lec = ses_cache[key]
        stage_reports.append(rep)
        rel_h.append(homology(g_ses.quotient, n))
        if m == 0 or key != (id(stages[m - 1][0]), id(stages[m - 1][1])):
            long_exact_ok.append(lec)

    rel_morphisms = []
    for m in range(len(stages) - 1):
        k1, sub1 = stages[m + 1]
        k0, sub0 = stages[m]
        f = chain_map_with_support(bonds[m])
        ses1 = ses_cache[(id(k1), id(sub1))][0]
        ses0 = ses_cache[(id(k0), id(sub0))][0]
        rel_block = {}
        for deg in range(max(k1.dim, k0.dim) + 1):
            rel_block[deg] = (ses0.project.block(deg) @ f.block(deg)
                              @ ses1.section(deg))
        rel_map = ChainMap(ses1.quotient, ses0.quotient, rel_block, check=False)
        rel_morphisms.append(rel_map.induced(n, rel_h[m + 1], rel_h[m]))
    rel_tail = None
    if certified:
        k, sub = stages[-1]
        f = chain_map_with_support(tower.tail)
        ses = ses_cache[(id(k), id(sub))][0]
        blocks = {deg: ses.project.block(deg) @ f.block(deg) @ ses.section(deg)
                  for deg in range(k.dim + 1)}
        rel_self = ChainMap(ses.quotient, ses.quotient, blocks, check=False)
        rel_tail = rel_self.induced(n, rel_h[-1], rel_h[-1])
    relative_weak = ml_analyze(
        GroupTower([h.presented for h in rel_h], rel_morphisms, rel_tail),
        window_only=not certified)
    return PairSpaceUctReport(degree=n, coeff=coeff, stage_reports=stage_reports,
                              relative_weak=relative_weak,
                              long_exact_ok=long_exact_ok, certified=certified)


# ---------------------------------------------------------------------------
# polyhedral cofiltrations (cohomology flavor)
# ---------------------------------------------------------------------------

@dataclass
class PolyhedronUctReport:
    degree: int
    coeff: FgAbGroup
    stage_homology: list[FgAbGroup]        # H_n(K_m)
    colim_homology: FgAbGroup              # window value H_n(K_last)
    colim_status: Literal["exact", "window"]
    hom_part: FgAbGroup                    # Hom(colim H_n, G)
    ext_lim: MlReport                      # lim Ext(H_{n-1}(stage), G)
    ext_lim1_hom: Lim1Status               # lim^1 Hom(H_{n-1}(stage), G)
    milnor_lim: MlReport                   # lim H^n(K_m; G)
    stage_uct_ok: list[bool]
    certified: bool

    def all_stage_uct_ok(self) -> bool:
        return all(self.stage_uct_ok)


def _inclusion_chain_maps(stages: list[SimplicialComplex]):
    complexes = [oriented_chain_complex(k) for k in stages]
    incs = []
    for m in range(len(stages) - 1):
        small, big = stages[m], stages[m + 1]
        blocks = {}
        for deg in range(small.dim + 1):
            bidx = big.basis_index(deg)
            rows = [[0] * len(small.basis(deg)) for _ in range(len(big.basis(deg)))]
            for j, t in enumerate(small.basis(deg)):
                rows[bidx[t]][j] = 1
            blocks[deg] = IntMatrix.from_rows(rows, cols=len(small.basis(deg)))
        incs.append(ChainMap(complexes[m], complexes[m + 1], blocks))
    return complexes, incs


def polyhedron_uct_report(cofiltration: Sequence[SimplicialComplex],
                          coeff: FgAbGroup, degree: int, depth: int,
                          constant_tail: bool = False) -> PolyhedronUctReport:
    """Cohomology-flavor universal-coefficient report for an increasing
    sequence of finite subcomplexes.  The homology colimit is the window
    value; it is exact when the cofiltration is declared constant beyond
    the window, and window-scoped otherwise."""
    n = degree
    stages = list(cofiltration)[:depth + 1]
    for small, big in zip(stages, stages[1:]):
        if not small.is_subcomplex_of(big):
            raise ValueError("stages must increase: each one a subcomplex of the next")
    complexes, incs = _inclusion_chain_maps(stages)
    n_stages = len(stages)

    # split monomorphic: per-degree retraction exists because the inclusion is
    # basis-aligned; the colimit over the window is the last stage
    h_n = [homology(c, n) for c in complexes]
    h_low = [homology(c, n - 1) for c in complexes]
    stage_groups = [h.group for h in h_n]
    colim = stage_groups[-1] if stage_groups else ZERO_GROUP
    colim_status = "exact" if constant_tail else "window"
    hom_part = hom_group(colim, coeff)

    moduli = [0] * coeff.free_rank + list(coeff.torsion)

    # flipped stages drive the per-stage UCT (cohomology flavor)
    flipped = [c.flip() for c in complexes]
    ctxs = [UctContext(f, coeff, -n) for f in flipped]
    stage_uct_ok = [c.verdicts().all_ok() for c in ctxs]

    # Ext(H_{n-1}(stage), G) tower, maps induced contravariantly by inclusions
    low_trans = [incs[m].induced(n - 1, h_low[m], h_low[m + 1])
                 for m in range(n_stages - 1)]
    ctx_low = [UctContext(f, coeff, -(n - 1)) for f in flipped]
    ext_stages = [c.ext_pres for c in ctx_low]
    from .extuct import ext_functor_map
    ext_maps = [ext_functor_map(low_trans[m], ext_stages[m + 1], ext_stages[m])
                for m in range(n_stages - 1)]
    ext_tail = GroupMorphism.identity(ext_stages[-1].presented) if constant_tail else None
    ext_lim = ml_analyze(GroupTower([e.presented for e in ext_stages],
                                    ext_maps, ext_tail),
                         window_only=not constant_tail)

    hom_low_stages = [HomPresentation(h.presented.orders, moduli) for h in h_low]
    hom_low_maps = [hom_functor_map(low_trans[m], hom_low_stages[m + 1],
                                    hom_low_stages[m])
                    for m in range(n_stages - 1)]
    hom_low_tail = (GroupMorphism.identity(hom_low_stages[-1].presented)
                    if constant_tail else None)
    ext_lim1_hom = ml_analyze(GroupTower([h.presented for h in hom_low_stages],
                                         hom_low_maps, hom_low_tail),
                              window_only=not constant_tail).lim1

    # lim H^n(K_m; G): the dual tower of the inclusion sequence
    from .complexes import cochain_with_coefficients
    co_h = [homology(cochain_with_coefficients(c, coeff), n) for c in complexes]
    co_maps = []
    for m in range(n_stages - 1):
        blocks = {deg: incs[m].block(deg).transpose()
                  for deg in set(complexes[m].degrees()) | set(complexes[m + 1].degrees())}
        dmap = ChainMap(cochain_with_coefficients(complexes[m + 1], coeff),
                        cochain_with_coefficients(complexes[m], coeff),
                        blocks, check=False)
        co_maps.append(dmap.induced(n, co_h[m + 1], co_h[m]))
    co_tail = GroupMorphism.identity(co_h[-1].presented) if constant_tail else None
    milnor_lim = ml_analyze(GroupTower([h.presented for h in co_h], co_maps, co_tail),
                            window_only=not constant_tail)

    return PolyhedronUctReport(degree=n, coeff=coeff, stage_homology=stage_groups,
                               colim_homology=colim, colim_status=colim_status,
                               hom_part=hom_part, ext_lim=ext_lim,
                               ext_lim1_hom=ext_lim1_hom, milnor_lim=milnor_lim,
                               stage_uct_ok=stage_uct_ok, certified=constant_tail)


@dataclass
class PairPolyhedronUctReport:
    degree: int
    coeff: FgAbGroup
    stage_connecting: list[GroupMorphism]  # H^n(K'; G) -> H^{n+1}(K, K'; G)
    naturality_ok: list[bool]
    relative_report: PolyhedronUctReport

    def all_ok(self) -> bool:
        return all(self.naturality_ok) and self.relative_report.all_stage_uct_ok()


def pair_polyhedron_uct_report(pairs: Sequence[tuple[SimplicialComplex, SimplicialComplex]],
                               coeff: FgAbGroup, degree: int, depth: int,
                               constant_tail: bool = False) -> PairPolyhedronUctReport:
    n = degree
    stages = list(pairs)[:depth + 1]
    for pair in stages:
        _pair_check(pair)
    for (k0, s0), (k1, s1) in zip(stages, stages[1:]):
        if not (k0.is_subcomplex_of(k1) and s0.is_subcomplex_of(s1)):
            raise ValueError("pairs must increase componentwise")
    connectings = []
    naturality = []
    rel_stages = []
    for k, sub in stages:
        chain_ses = relative_pair(k, sub)
        flipped = _flip_ses(chain_ses)
        dual = None
        from .complexes import dual_ses as g_dual_ses
        dses = g_dual_ses(flipped, coeff)
        d = connecting_homomorphism(dses, -n)
        connectings.append(d)
        nat = all(naturality_check(flipped, coeff, m).all_ok()
                  for m in range(-(k.dim + 1), 1))
        naturality.append(nat)
        rel_stages.append(chain_ses.quotient)
    rel_report = _relative_polyhedron_report(stages, rel_stages, coeff, n, depth,
                                             constant_tail)
    return PairPolyhedronUctReport(degree=n, coeff=coeff,
                                   stage_connecting=connectings,
                                   naturality_ok=naturality,
                                   relative_report=rel_report)


def _flip_ses(ses: LocallySplitSes) -> LocallySplitSes:
    """Reindex a chain SES as a cochain SES (n -> -n)."""
    a = ses.sub.flip()
    b = ses.total.flip()
    c = ses.quotient.flip()
    degs = ses.degrees()
    include = ChainMap(a, b, {-n: ses.include.block(n) for n in degs}, check=False)
    project = ChainMap(b, c, {-n: ses.project.block(n) for n in degs}, check=False)
    sections = {-n: ses.section(n) for n in degs}
    retractions = {-n: ses.retraction(n) for n in degs}
    return LocallySplitSes(include, project, sections, retractions, check=False)


def _relative_polyhedron_report(pairs, rel_complexes, coeff, n, depth, constant_tail):
    """Window report for the relative complexes of an increasing pair chain.

    The transition C(K_m, K'_m) -> C(K_{m+1}, K'_{m+1}) sends a relative
    basis simplex to itself when it stays outside the bigger subcomplex and
    to zero when the subcomplex has swallowed it.
    """
    from .complexes import cochain_with_coefficients

    h_n = [homology(c, n) for c in rel_complexes]
    h_low = [homology(c, n - 1) for c in rel_complexes]
    stage_groups = [h.group for h in h_n]
    colim = stage_groups[-1] if stage_groups else ZERO_GROUP
    flipped = [c.flip() for c in rel_complexes]
    ctxs = [UctContext(f, coeff, -n) for f in flipped]
    ctx_low = [UctContext(f, coeff, -(n - 1)) for f in flipped]
    moduli = [0] * coeff.free_rank + list(coeff.torsion)

    def rel_basis(m, deg):
        k, sub = pairs[m]
        return [t for t in k.basis(deg) if not sub.contains_simplex(t)]

    transitions = []
    for m in range(len(pairs) - 1):
        blocks = {}
        for deg in set(rel_complexes[m].degrees()) | set(rel_complexes[m + 1].degrees()):
            small = rel_basis(m, deg)
            big = rel_basis(m + 1, deg)
            bidx = {t: i for i, t in enumerate(big)}
            rows = [[0] * len(small) for _ in range(len(big))]
            for j, t in enumerate(small):
                if t in bidx:
                    rows[bidx[t]][j] = 1
            blocks[deg] = IntMatrix.from_rows(rows, cols=len(small))
        transitions.append(ChainMap(rel_complexes[m], rel_complexes[m + 1], blocks))

    low_trans = [transitions[m].induced(n - 1, h_low[m], h_low[m + 1])
                 for m in range(len(pairs) - 1)]
    from .extuct import ext_functor_map
    ext_stages = [c.ext_pres for c in ctx_low]
    ext_maps = [ext_functor_map(low_trans[m], ext_stages[m + 1], ext_stages[m])
                for m in range(len(pairs) - 1)]
    ext_tail = (GroupMorphism.identity(ext_stages[-1].presented)
                if constant_tail else None)

    hom_low_stages = [HomPresentation(h.presented.orders, moduli) for h in h_low]
    hom_low_maps = [hom_functor_map(low_trans[m], hom_low_stages[m + 1],
                                    hom_low_stages[m])
                    for m in range(len(pairs) - 1)]
    hom_low_tail = (GroupMorphism.identity(hom_low_stages[-1].presented)
                    if constant_tail else None)

    co_h = [homology(cochain_with_coefficients(c, coeff), n) for c in rel_complexes]
    co_maps = []
    for m in range(len(pairs) - 1):
        blocks = {deg: transitions[m].block(deg).transpose()
                  for deg in set(rel_complexes[m].degrees())
                  | set(rel_complexes[m + 1].degrees())}
        dmap = ChainMap(cochain_with_coefficients(rel_complexes[m + 1], coeff),
                        cochain_with_coefficients(rel_complexes[m], coeff),
                        blocks, check=False)
        co_maps.append(dmap.induced(n, co_h[m + 1], co_h[m]))
    co_tail = GroupMorphism.identity(co_h[-1].presented) if constant_tail else None

    return PolyhedronUctReport(
        degree=n, coeff=coeff, stage_homology=stage_groups,
        colim_homology=colim,
        colim_status="exact" if constant_tail else "window",
        hom_part=hom_group(colim, coeff),
        ext_lim=ml_analyze(GroupTower([e.presented for e in ext_stages],
                                      ext_maps, ext_tail),
                           window_only=not constant_tail),
        ext_lim1_hom=ml_analyze(GroupTower([h.presented for h in hom_low_stages],
                                           hom_low_maps, hom_low_tail),
                                window_only=not constant_tail).lim1,
        milnor_lim=ml_analyze(GroupTower([h.presented for h in co_h], co_maps,
                                         co_tail),
                              window_only=not constant_tail),
        stage_uct_ok=[c.verdicts().all_ok() for c in ctxs],
        certified=constant_tail)
