"""Named verification suites behind ``uct verify`` and the acceptance tests.

Every suite is deterministic given its seed and returns a SuiteResult with
one entry per checked instance.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .abgroups import (
    FgAbGroup,
    Z,
    ZERO_GROUP,
    cyclic,
    ext_group,
    hom_group,
    parse_group,
    tensor_group,
    tor_group,
)
from .complexes import (
    ChainMap,
    FreeComplex,
    LocallySplitSes,
    connecting_homomorphism,
    homology,
    integral_cochain,
    long_exact_check,
    tensor_complex,
)
from .extuct import cocycle_space, extension_from_cocycle, \
    cocycle_from_extension, naturality_check, uct_report
from .generators import (
    delta_pair,
    klein_bottle,
    projective_plane,
    solenoid_tower,
    sphere,
    torus,
)
from .intlat import IntMatrix
from .proind import CochainSequence, ChainTower, asymptotic_witness, duality_check, \
    holim, space_uct_report
from .randgen import (
    random_chain_self_map,
    random_free_cochain_complex,
    random_locally_split_ses,
)
from .simplicial import SimplicialComplex, oriented_chain_complex, relative_pair


STANDARD_COEFFS = ("Z", "Z/2", "Z/4", "Z/6", "Z^2+Z/2")


@dataclass
class SuiteResult:
    suite: str
    seed: int
    total: int
    passed: int
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.total and self.total > 0

    def summary(self) -> str:
        return f"{self.suite}: {self.passed}/{self.total} pass ({self.elapsed:.1f}s, seed {self.seed})"


def _run(suite_name, seed, items):
    """items: iterable of (label, bool)."""
    t0 = time.time()
    failures = []
    total = 0
    for label, ok in items:
        total += 1
        if not ok:
            failures.append(label)
    return SuiteResult(suite=suite_name, seed=seed, total=total,
                       passed=total - len(failures), failures=failures,
                       elapsed=time.time() - t0)


# --- suite 1: algebraic UCT on random cochain complexes ---------------------

def suite_uct_random(seed: int = 17, count: int = 200) -> SuiteResult:
    rng = random.Random(seed)
    coeffs = [parse_group(g) for g in STANDARD_COEFFS]

    def items():
        for i in range(count):
            a = random_free_cochain_complex(rng)
            lo, hi = a.degree_range()
            degrees = list(range(lo - 1, hi + 1))
            ok = True
            for g in coeffs:
                for n in degrees:
                    rep = uct_report(a, g, n)
                    if not rep.verdicts.all_ok():
                        ok = False
                    if rep.middle != rep.ext_part.direct_sum(rep.hom_part):
                        ok = False
            yield (f"instance {i}", ok)

    return _run("uct-random", seed, items())


# --- suite 2: simplicial cross-theory oracle --------------------------------

def random_simplicial(rng: random.Random, max_vertices: int = 8,
                      max_dim: int = 3) -> SimplicialComplex:
    nverts = rng.randint(1, max_vertices)
    facets = [[v] for v in range(nverts)]
    n_facets = rng.randint(1, 2 * nverts)
    for _ in range(n_facets):
        size = rng.randint(1, min(max_dim + 1, nverts))
        facets.append(rng.sample(range(nverts), size))
    return SimplicialComplex(facets)


def suite_simplicial_uct(seed: int = 23, count: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    coeffs = [parse_group(g) for g in STANDARD_COEFFS]

    def items():
        for i in range(count):
            k = random_simplicial(rng)
            chain = oriented_chain_complex(k)
            cochain = integral_cochain(chain)
            degrees = list(range(0, k.dim + 2))
            h_int = {n: homology(chain, n).group for n in degrees + [-1]}
            h_coh = {n: homology(cochain, n).group for n in degrees}
            h_coh[k.dim + 2] = ZERO_GROUP
            ok = True
            for g in coeffs:
                with_g = tensor_complex(chain, g)
                for n in degrees:
                    direct = homology(with_g, n).group
                    via_cohomology = ext_group(h_coh[n + 1], g).direct_sum(
                        hom_group(h_coh[n], g))
                    via_tor = tensor_group(h_int[n], g).direct_sum(
                        tor_group(h_int[n - 1], g))
                    if direct != via_cohomology or direct != via_tor:
                        ok = False
            yield (f"complex {i}", ok)

    return _run("simplicial-uct", seed, items())


# --- suite 3: named spaces ---------------------------------------------------

def suite_named_spaces(seed: int = 0, count: int = 0) -> SuiteResult:
    z2 = cyclic(2)

    def check(name, cond):
        return (name, cond)

    def items():
        s2 = oriented_chain_complex(sphere(2))
        yield check("sphere-2 H2=Z", homology(s2, 2).group == Z)
        yield check("sphere-2 H1=0", homology(s2, 1).group == ZERO_GROUP)

        t = oriented_chain_complex(torus())
        yield check("torus H1=Z^2", homology(t, 1).group == FgAbGroup(2))
        t2 = tensor_complex(oriented_chain_complex(torus()), z2)
        yield check("torus H1(Z/2)=(Z/2)^2",
                    homology(t2, 1).group == FgAbGroup(0, (2, 2)))

        kb = klein_bottle()
        kcochain = integral_cochain(oriented_chain_complex(kb))
        h1 = homology(kcochain, 1).group
        h2 = homology(kcochain, 2).group
        yield check("klein H^1=Z", h1 == Z)
        yield check("klein H^2=Z/2", h2 == cyclic(2))
        via_ext = ext_group(h2, z2).direct_sum(hom_group(h1, z2))
        direct = homology(tensor_complex(oriented_chain_complex(kb), z2), 1).group
        yield check("klein H1(Z/2) via ext route",
                    via_ext == FgAbGroup(0, (2, 2)) and direct == via_ext)

        rp = oriented_chain_complex(projective_plane())
        yield check("rp2 H1=Z/2", homology(rp, 1).group == cyclic(2))

    return _run("named-spaces", seed, items())


# --- suite 4: solenoid report -------------------------------------------------

def suite_solenoid(seed: int = 0, count: int = 0) -> SuiteResult:
    def items():
        tower = solenoid_tower(2)
        r0 = space_uct_report(tower, Z, 0, 6)
        yield ("deg0 hom part = Z", r0.hom_part.lim == Z
               and r0.hom_part.status == "ml_stabilized")
        yield ("deg0 lim1-hom uncountable (not-ML certified)",
               r0.ext_lim1_hom == "uncountable")
        yield ("deg0 weak part = Z", r0.weak_part.lim == Z)
        yield ("deg0 asymptotic flag nontrivial", r0.asymptotic_flag == "nontrivial")
        yield ("deg0 stage UCT verdicts", r0.all_stage_uct_ok())
        r1 = space_uct_report(tower, Z, 1, 6)
        yield ("deg1 hom part = 0", r1.hom_part.lim == ZERO_GROUP)
        yield ("deg1 ext part = (0, zero)",
               r1.ext_lim.lim == ZERO_GROUP and r1.ext_lim1_hom == "zero")
        yield ("deg1 weak lim = 0",
               r1.weak_part.lim == ZERO_GROUP and r1.weak_part.lim_tag == "exact")

    return _run("solenoid", seed, items())


# --- suite 5: cocycles vs Ext --------------------------------------------------

def suite_cocycle_ext(seed: int = 0, count: int = 0) -> SuiteResult:
    groups = [cyclic(2), cyclic(3), cyclic(4), FgAbGroup(0, (2, 2))]

    def items():
        for a in groups:
            for g in groups:
                space = cocycle_space(a, g)
                expected = ext_group(a, g)
                yield (f"ext({a},{g})", space.ext == expected)
                # round trip through the extension dictionary on every generator
                ok = True
                ngens = space.ext_presented.ngens
                for i in range(ngens):
                    coords = tuple(1 if j == i else 0 for j in range(ngens))
                    c = space.representative(coords)
                    x = extension_from_cocycle(c)
                    back = cocycle_from_extension(x)
                    got = space.ext_presented.reduce(space.class_of(back))
                    if got != coords:
                        ok = False
                yield (f"round-trip({a},{g})", ok)

    return _run("cocycle-ext", seed, items())


# --- suite 6: connecting homomorphism and naturality ---------------------------

def _randomized_sections(rng: random.Random, ses: LocallySplitSes) -> LocallySplitSes:
    """Shear the sections: s' = s + i lambda, r' = r - lambda p stays valid."""
    sections = {}
    retractions = {}
    for n in ses.degrees():
        ra = ses.sub.rank(n)
        rc = ses.quotient.rank(n)
        lam = IntMatrix.from_rows([[rng.randint(-2, 2) for _ in range(rc)]
                                   for _ in range(ra)], cols=rc)
        sections[n] = ses.section(n) + ses.include.block(n) @ lam
        retractions[n] = ses.retraction(n) - lam @ ses.project.block(n)
    return LocallySplitSes(ses.include, ses.project, sections, retractions)


def suite_connecting_naturality(seed: int = 29, count: int = 50) -> SuiteResult:
    rng = random.Random(seed)

    def items():
        k, sub = delta_pair()
        ses = relative_pair(k, sub)
        d = connecting_homomorphism(ses, 2)
        yield ("delta-pair d2 iso Z -> Z",
               d.source.fg() == Z and d.target.fg() == Z and d.is_isomorphism())
        yield ("delta-pair long exact", long_exact_check(ses).ok)

        h_quo = homology(ses.quotient, 2)
        h_sub = homology(ses.sub, 1)
        base = connecting_homomorphism(ses, 2, h_quo, h_sub)
        ok = True
        for _ in range(20):
            sheared = _randomized_sections(rng, ses)
            if not connecting_homomorphism(sheared, 2, h_quo, h_sub).equals(base):
                ok = False
        yield ("section independence x20", ok)

        for i in range(count):
            ses_i = random_locally_split_ses(rng)
            lo, hi = ses_i.total.degree_range()
            good = all(naturality_check(ses_i, cyclic(6), n).all_ok()
                       for n in range(lo, hi + 1))
            yield (f"naturality {i}", good)

    return _run("connecting-naturality", seed, items())


# --- suite 7: holim / hocolim structure ----------------------------------------

def suite_holim_duality(seed: int = 41, count: int = 50) -> SuiteResult:
    rng = random.Random(seed)
    z4 = cyclic(4)

    def items():
        for i in range(count):
            window = rng.randint(1, 4)
            base = random_free_cochain_complex(rng, max_degrees=3, max_rank=3)
            smap = random_chain_self_map(rng, base)
            seq = CochainSequence([base] * (window + 1), [smap] * window)
            yield (f"duality {i}", duality_check(seq, z4, window))

            chain_base = base.flip()
            cmap = ChainMap(chain_base, chain_base,
                            {-n: smap.block(n) for n in base.degrees()}, check=False)
            tower = ChainTower([chain_base] * (window + 1), [cmap] * window)
            hl = holim(tower, window)   # validates d o d = 0 on construction
            ok = True
            degs = sorted(hl.degrees()) if hl.degrees() else []
            for n in degs:
                if hl.rank(n + 1) == 0 or hl.rank(n) == 0:
                    continue
                w = [rng.randint(-2, 2) for _ in range(hl.rank(n + 1))]
                z = list(hl.diff(n + 1).apply(w))
                try:
                    asymptotic_witness(tower, window, n, 0, z, m0=window)
                except Exception:
                    ok = False
                break
            yield (f"witness {i}", ok)

    return _run("holim-duality", seed, items())


# --- suite 8: mutation controls -------------------------------------------------

def suite_mutation_controls(seed: int = 53, count: int = 40) -> SuiteResult:
    rng = random.Random(seed)

    def items():
        # dropping the alternating sign in the co-index map must break something
        broke_sign = False
        probe = FreeComplex("cochain", {1: 1, 2: 1}, {1: IntMatrix.from_rows([[3]])})
        if not uct_report(probe, Z, 1, drop_coindex_sign=True).verdicts.all_ok():
            broke_sign = True
        for _ in range(count):
            a = random_free_cochain_complex(rng)
            lo, hi = a.degree_range()
            for n in range(lo - 1, hi + 1):
                for g in (Z, cyclic(6)):
                    if not uct_report(a, g, n, drop_coindex_sign=True).verdicts.all_ok():
                        broke_sign = True
        yield ("sign mutation detected", broke_sign)
        yield ("unmutated probe still passes",
               uct_report(probe, Z, 1).verdicts.all_ok())

        # dropping the telescoping term must break the duality comparison
        broke_tel = False
        for _ in range(count):
            base = random_free_cochain_complex(rng, max_degrees=3, max_rank=3)
            smap = random_chain_self_map(rng, base)
            seq = CochainSequence([base] * 3, [smap] * 2)
            if duality_check(seq, cyclic(4), 2) and \
                    not duality_check(seq, cyclic(4), 2, include_telescope=False):
                broke_tel = True
        yield ("telescope mutation detected", broke_tel)

    return _run("mutation-controls", seed, items())


SUITES = {
    "uct-random": suite_uct_random,
    "simplicial-uct": suite_simplicial_uct,
    "named-spaces": suite_named_spaces,
    "solenoid": suite_solenoid,
    "cocycle-ext": suite_cocycle_ext,
    "connecting-naturality": suite_connecting_naturality,
    "holim-duality": suite_holim_duality,
    "mutation-controls": suite_mutation_controls,
}

DEFAULT_COUNTS = {
    "uct-random": 200,
    "simplicial-uct": 100,
    "connecting-naturality": 50,
    "holim-duality": 50,
    "mutation-controls": 40,
}


def run_suite(name: str, seed: int = 17, count: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; pick one of {sorted(SUITES)}")
    if count is None:
        count = DEFAULT_COUNTS.get(name, 0)
    return SUITES[name](seed=seed, count=count)


def run_all(seed: int = 17, count_scale: float = 1.0) -> list[SuiteResult]:
    out = []
    for name in SUITES:
        count = DEFAULT_COUNTS.get(name, 0)
        out.append(run_suite(name, seed=seed,
                             count=max(1, int(count * count_scale)) if count else 0))
    return out


def run_aggregate(seed: int = 17, count: int | None = None) -> SuiteResult:
    """Every suite in sequence, aggregated into one result; failure labels
    carry their suite name.  ``count`` scales only the randomized suites."""
    t0 = time.time()
    total = passed = 0
    failures: list[str] = []
    for name in SUITES:
        sub_count = count if count is not None and name in DEFAULT_COUNTS else None
        r = run_suite(name, seed=seed, count=sub_count)
        total += r.total
        passed += r.passed
        failures.extend(f"{name}: {f}" for f in r.failures)
    return SuiteResult(suite="all", seed=seed, total=total, passed=passed,
                       failures=failures, elapsed=time.time() - t0)
