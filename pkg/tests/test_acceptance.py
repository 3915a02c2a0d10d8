"""Acceptance criteria, one test per criterion.

Every check is exact (integer/canonical-form equality); the time budgets
are asserted, and each criterion prints a single pass/fail line.
"""

import time

import pytest

from uctkit.verify import run_suite


def _criterion(name, result, budget=None):
    status = "pass" if result.ok else "FAIL"
    line = f"[{status}] {name}: {result.passed}/{result.total}"
    if budget is not None:
        line += f" in {result.elapsed:.1f}s (budget {budget}s)"
    print(line)
    assert result.ok, f"{name}: failures {result.failures[:10]}"
    if budget is not None:
        assert result.elapsed < budget, f"{name}: exceeded {budget}s"


def test_criterion_1_algebraic_uct_suite():
    # >= 200 seeded random free cochain complexes x {Z, Z/2, Z/4, Z/6, Z^2+Z/2}:
    # exactness at all three nodes, the split identities, image = kernel, and
    # middle = ext + hom in canonical form; exact, under 60 s
    result = run_suite("uct-random", seed=17, count=200)
    _criterion("algebraic UCT suite (200 complexes x 5 coefficient groups)",
               result, budget=60)


def test_criterion_2_cross_theory_oracle():
    # >= 100 seeded random simplicial complexes (<= 8 vertices, dim <= 3):
    # direct homology with coefficients == Ext/Hom route == Tor-formula
    # oracle, exact equality of invariant factors, under 120 s
    result = run_suite("simplicial-uct", seed=23, count=100)
    _criterion("cross-theory oracle (100 random simplicial complexes)",
               result, budget=120)


def test_criterion_3_named_spaces():
    result = run_suite("named-spaces", seed=0)
    _criterion("named spaces (sphere, torus, Klein bottle, projective plane)",
               result)


def test_criterion_4_solenoid_report():
    # p = 2, window 6: degree 0 hom part Z, not-ML certified lim1, weak part Z;
    # degree 1 all zero; exact tags, under 10 s
    result = run_suite("solenoid", seed=0)
    _criterion("solenoid report (p=2, window 6)", result, budget=10)


def test_criterion_5_cocycle_ext_equivalence():
    # exhaustive over |A|, |G| in {2,3,4} plus A = Z/2 x Z/2: cocycle-space
    # quotient matches Ext, and the extension dictionary round-trips classes;
    # exact, under 60 s
    result = run_suite("cocycle-ext", seed=0)
    _criterion("cocycle/Ext equivalence (exhaustive small groups)", result,
               budget=60)


def test_criterion_6_connecting_and_naturality():
    # (D2, boundary) connecting iso; section independence over 20 random
    # section choices; both naturality squares on 50 random locally split
    # exact sequences; exact
    result = run_suite("connecting-naturality", seed=29, count=50)
    _criterion("connecting homomorphism and naturality", result)


def test_criterion_7_holim_hocolim_structure():
    # d o d = 0 and the exact duality matrix equality on 50 random towers /
    # sequences (window <= 4, G = Z/4); witness reconstruction on constructed
    # kernel elements; exact
    result = run_suite("holim-duality", seed=41, count=50)
    _criterion("homotopy limit/colimit structure and duality", result)


def test_criterion_8_mutation_controls():
    # dropping the alternating co-index sign or the telescope term must make
    # at least one suite-1/suite-7 style instance fail
    result = run_suite("mutation-controls", seed=53, count=40)
    _criterion("mutation controls (sign and telescope)", result)
