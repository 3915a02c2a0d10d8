"""Seeded random instances: complexes, twisted exact sequences, towers.

All randomness flows through an explicit ``random.Random`` so every suite
is reproducible from its seed.
"""

from __future__ import annotations

import random
from typing import Mapping

from .complexes import ChainMap, FreeComplex, LocallySplitSes
from .intlat import IntMatrix, kernel_basis


def random_free_cochain_complex(rng: random.Random, max_degrees: int = 4,
                                max_rank: int = 4, entry_bound: int = 3) -> FreeComplex:
    """Random bounded cochain complex of free groups with d o d = 0.

    The top differential is sampled uniformly with entries in
    [-entry_bound, entry_bound]; lower ones are small integer combinations
    of the kernel of the one above, which keeps composites exactly zero.
    """
    ndeg = rng.randint(1, max_degrees)
    lo = rng.randint(-1, 1)
    ranks = {}
    for i in range(ndeg):
        r = rng.randint(0, max_rank)
        if r:
            ranks[lo + i] = r
    if not ranks:
        ranks[lo] = 1
    degs = sorted(ranks)
    diffs: dict[int, IntMatrix] = {}
    prev_kernel: IntMatrix | None = None
    for n in reversed(degs):
        target = ranks.get(n + 1, 0)
        src = ranks[n]
        if target == 0:
            prev_kernel = IntMatrix.identity(src)
            continue
        if prev_kernel is None or n + 1 not in ranks:
            m = IntMatrix.from_rows(
                [[rng.randint(-entry_bound, entry_bound) for _ in range(src)]
                 for _ in range(target)], cols=src)
        else:
            k = prev_kernel
            if k.cols == 0:
                m = IntMatrix.zero(target, src)
            else:
                lam = IntMatrix.from_rows(
                    [[rng.randint(-2, 2) for _ in range(src)] for _ in range(k.cols)],
                    cols=src)
                m = k @ lam
        diffs[n] = m
        prev_kernel = kernel_basis(m)
    return FreeComplex("cochain", ranks, diffs)


def random_free_chain_complex(rng: random.Random, max_degrees: int = 4,
                              max_rank: int = 4, entry_bound: int = 3) -> FreeComplex:
    return random_free_cochain_complex(rng, max_degrees, max_rank, entry_bound).flip()


def direct_sum_ses(a: FreeComplex, c: FreeComplex,
                   twist: Mapping[int, IntMatrix] | None = None) -> LocallySplitSes:
    """0 -> A -> B -> C -> 0 with B = A + C and an optional twist block.

    The twist tau_n: C(n) -> A(n + step) must satisfy d_A tau + tau d_C = 0;
    the sequence is split in every degree by the block inclusions either way.
    """
    degs = sorted(set(a.degrees()) | set(c.degrees()))
    step = a.step
    ranks = {n: a.rank(n) + c.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        ra, rc = a.rank(n), c.rank(n)
        ra2, rc2 = a.rank(n + step), c.rank(n + step)
        if ra2 + rc2 == 0 or ra + rc == 0:
            continue
        da, dc = a.diff(n), c.diff(n)
        t = twist.get(n) if twist else None
        rows = []
        for i in range(ra2):
            row = list(da.row(i)) if ra else []
            row += list(t.row(i)) if t is not None else [0] * rc
            rows.append(row)
        for i in range(rc2):
            rows.append([0] * ra + list(dc.row(i)))
        diffs[n] = IntMatrix(ra2 + rc2, ra + rc, rows)
    b = FreeComplex(a.orientation, ranks, diffs)

    def inc_block(n):
        ra, rc = a.rank(n), c.rank(n)
        return IntMatrix.from_rows(
            [[1 if i == j else 0 for j in range(ra)] for i in range(ra)]
            + [[0] * ra for _ in range(rc)], cols=ra)

    def proj_block(n):
        ra, rc = a.rank(n), c.rank(n)
        return IntMatrix.from_rows(
            [[0] * ra + [1 if i == j else 0 for j in range(rc)] for i in range(rc)],
            cols=ra + rc)

    include = ChainMap(a, b, {n: inc_block(n) for n in degs})
    project = ChainMap(b, c, {n: proj_block(n) for n in degs})
    sections = {n: proj_block(n).transpose() for n in degs}
    retractions = {n: inc_block(n).transpose() for n in degs}
    return LocallySplitSes(include, project, sections, retractions)


def random_locally_split_ses(rng: random.Random, max_degrees: int = 3,
                             max_rank: int = 3, entry_bound: int = 2) -> LocallySplitSes:
    """Random locally split SES of cochain complexes with a genuine twist.

    The twist is sampled from the integer solution lattice of
    d_A tau + tau d_C = 0, so connecting homomorphisms are usually nonzero.
    """
    a = random_free_cochain_complex(rng, max_degrees, max_rank, entry_bound)
    c = random_free_cochain_complex(rng, max_degrees, max_rank, entry_bound)
    degs = sorted(set(a.degrees()) | set(c.degrees()))
    step = a.step
    # flatten unknown tau_n entries: tau_n has shape (a.rank(n+step), c.rank(n))
    slots = []
    for n in degs:
        rt, rs = a.rank(n + step), c.rank(n)
        slots.append((n, rt, rs))
    offsets = {}
    total = 0
    for n, rt, rs in slots:
        offsets[n] = total
        total += rt * rs
    if total == 0:
        return direct_sum_ses(a, c)

    rows = []
    for n, _, _ in slots:
        out_rows = a.rank(n + 2 * step)
        out_cols = c.rank(n)
        if out_rows == 0 or out_cols == 0:
            continue
        da = a.diff(n + step)
        dc = c.diff(n)
        for i in range(out_rows):
            for j in range(out_cols):
                row = [0] * total
                # (d_A tau_n)[i, j] = sum_k da[i, k] tau_n[k, j]
                rt = a.rank(n + step)
                for k in range(rt):
                    if da[i, k]:
                        row[offsets[n] + k * out_cols + j] += da[i, k]
                # (tau_{n+step} d_C)[i, j] = sum_k tau_{n+step}[i, k] dc[k, j]
                if n + step in offsets:
                    rs2 = c.rank(n + step)
                    for k in range(rs2):
                        if dc[k, j]:
                            row[offsets[n + step] + i * rs2 + k] += dc[k, j]
                if any(row):
                    rows.append(row)
    twist_vec = [0] * total
    if rows:
        system = IntMatrix.from_rows(rows, cols=total)
        basis = kernel_basis(system)
        for jcol in range(basis.cols):
            coeff = rng.randint(-1, 1)
            if coeff:
                for i in range(total):
                    twist_vec[i] += coeff * basis[i, jcol]
    else:
        twist_vec = [rng.randint(-entry_bound, entry_bound) for _ in range(total)]

    twist = {}
    for n, rt, rs in slots:
        if rt == 0 or rs == 0:
            continue
        base = offsets[n]
        block = [[twist_vec[base + i * rs + j] for j in range(rs)] for i in range(rt)]
        m = IntMatrix.from_rows(block, cols=rs)
        if not m.is_zero():
            twist[n] = m
    return direct_sum_ses(a, c, twist)


def random_chain_self_map(rng: random.Random, cx: FreeComplex,
                          scale_bound: int = 2) -> ChainMap:
    """c * id + (d h + h d) for random h; always a chain map."""
    from .complexes import homotopy_perturb
    c = rng.randint(-scale_bound, scale_bound)
    base = ChainMap(cx, cx, {n: IntMatrix.identity(cx.rank(n)).scale(c)
                             for n in cx.degrees()}, check=False)
    shift = 1 if cx.orientation == "chain" else -1
    blocks = {}
    for n in cx.degrees():
        rt = cx.rank(n + shift)
        rs = cx.rank(n)
        if rt and rs:
            blocks[n] = IntMatrix.from_rows(
                [[rng.randint(-1, 1) for _ in range(rs)] for _ in range(rt)], cols=rs)
    g, _ = homotopy_perturb(base, blocks)
    return g
