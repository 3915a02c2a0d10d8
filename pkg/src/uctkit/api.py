"""Request handlers shared by the HTTP service and the CLI."""

from __future__ import annotations

import os

from . import generators, schemas, verify
from .abgroups import ext_group, hom_group, tensor_group, tor_group
from .complexes import (
    cochain_with_coefficients,
    homology,
    integral_cochain,
    tensor_complex,
)
from .extuct import UctContext, cocycle_space, pext_fg
from .proind import (
    pair_polyhedron_uct_report,
    pair_space_uct_report,
    polyhedron_uct_report,
    space_uct_report,
)
from .schemas import (
    CarrierDoc,
    CofiltrationDoc,
    ExamplesResponse,
    ExtRequest,
    ExtResponse,
    HomologyRequest,
    HomologyResponse,
    InputError,
    MlReportDoc,
    PairDoc,
    PairPolyhedronReportResponse,
    PairSpaceReportResponse,
    PairStageDoc,
    PolyhedronReportRequest,
    PolyhedronReportResponse,
    SimplicialDoc,
    SpaceReportRequest,
    SpaceReportResponse,
    StageCohomologyDoc,
    TailDoc,
    TowerDoc,
    UctRequest,
    UctResponse,
    VerifyRequest,
    VerifyResponse,
    parse_coeff,
)
from .simplicial import oriented_chain_complex

DEFAULT_DEPTH_LIMIT = 16


def depth_limit() -> int:
    raw = os.environ.get("UCTKIT_DEPTH_LIMIT")
    if raw is None:
        return DEFAULT_DEPTH_LIMIT
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError("UCTKIT_DEPTH_LIMIT: not an integer")


def _clamp_depth(depth: int) -> int:
    if depth < 1:
        raise InputError("depth: must be >= 1")
    return min(depth, depth_limit())


def handle_homology(req: HomologyRequest) -> HomologyResponse:
    req.validate_one_input()
    coeff = parse_coeff(req.coeff)
    if req.simplicial is not None:
        chain = oriented_chain_complex(req.simplicial.to_complex())
        cx = tensor_complex(chain, coeff)
    else:
        cx = req.complex.to_complex()
        if cx.orientation != "chain":
            raise InputError("complex: homology expects a chain complex")
        cx = tensor_complex(cx, coeff)
    group = homology(cx, req.degree).group
    return HomologyResponse(kind="homology", degree=req.degree, coeff=req.coeff,
                            group=str(group))


def handle_cohomology(req: HomologyRequest) -> HomologyResponse:
    req.validate_one_input()
    coeff = parse_coeff(req.coeff)
    if req.simplicial is not None:
        chain = oriented_chain_complex(req.simplicial.to_complex())
        cx = cochain_with_coefficients(chain, coeff)
    else:
        base = req.complex.to_complex()
        if base.orientation == "chain":
            cx = cochain_with_coefficients(base, coeff)
        else:
            from .complexes import GComplex
            cx = GComplex(base, coeff)
    group = homology(cx, req.degree).group
    return HomologyResponse(kind="cohomology", degree=req.degree, coeff=req.coeff,
                            group=str(group))


def handle_uct(req: UctRequest) -> UctResponse:
    req.validate_one_input()
    coeff = parse_coeff(req.coeff)
    if req.simplicial is not None:
        a = integral_cochain(oriented_chain_complex(req.simplicial.to_complex()))
    else:
        a = req.complex.to_complex()
        if a.orientation != "cochain":
            raise InputError("complex: the sequence report expects a cochain complex")
    rep = UctContext(a, coeff, req.degree).report()
    v = rep.verdicts
    return UctResponse(
        degree=req.degree, coeff=req.coeff,
        ext_part=str(rep.ext_part), middle=str(rep.middle), hom_part=str(rep.hom_part),
        verdicts={
            "exact_left": v.exact_left, "exact_middle": v.exact_middle,
            "exact_right": v.exact_right, "split_ok": v.split_ok,
            "left_inverse_ok": v.left_inverse_ok,
            "decomposition_ok": v.decomposition_ok,
        },
        all_ok=v.all_ok())


def handle_ext(req: ExtRequest) -> ExtResponse:
    a = parse_coeff(req.group)
    g = parse_coeff(req.coeff)
    pext = pext_fg(a, g).pext_zero if not a.is_trivial() else True
    cocycle_ext = None
    matches = None
    if req.cocycle_check:
        if not (a.is_finite() and g.is_finite()):
            raise InputError("cocycle_check: both groups must be finite")
        space = cocycle_space(a, g)
        cocycle_ext = str(space.ext)
        matches = space.ext == ext_group(a, g)
    return ExtResponse(
        group=req.group, coeff=req.coeff,
        hom=str(hom_group(a, g)), ext=str(ext_group(a, g)),
        tensor=str(tensor_group(a, g)), tor=str(tor_group(a, g)),
        pext_zero=pext, cocycle_ext=cocycle_ext, cocycle_matches=matches,
        all_ok=pext and (matches is not False))


def handle_space_report(req: SpaceReportRequest):
    coeff = parse_coeff(req.coeff)
    depth = _clamp_depth(req.depth)
    if req.tower.is_pair_tower():
        tower = req.tower.to_pair_tower()
        rep = pair_space_uct_report(tower, coeff, req.degree, depth)
        stages = [PairStageDoc(
            connecting_source=str(s.connecting_source),
            connecting_target=str(s.connecting_target),
            connecting_matrix=s.connecting.matrix.to_json(),
            naturality_ok=s.naturality_ok,
            uct_pair_ok=s.uct_pair_ok, uct_sub_ok=s.uct_sub_ok)
            for s in rep.stage_reports]
        return PairSpaceReportResponse(
            degree=rep.degree, coeff=req.coeff, certified=rep.certified,
            stages=stages,
            relative_weak=MlReportDoc.from_report(rep.relative_weak),
            long_exact_ok=rep.long_exact_ok, all_ok=rep.all_ok())
    tower = req.tower.to_simplicial_tower()
    rep = space_uct_report(tower, coeff, req.degree, depth)
    return SpaceReportResponse(
        degree=rep.degree, coeff=req.coeff, certified=rep.certified,
        stage_cohomology=[StageCohomologyDoc(h_same=str(s.h_same), h_up=str(s.h_up))
                          for s in rep.stage_data],
        hom_part=MlReportDoc.from_report(rep.hom_part),
        ext_lim=MlReportDoc.from_report(rep.ext_lim),
        ext_lim1_hom=rep.ext_lim1_hom,
        weak_part=MlReportDoc.from_report(rep.weak_part),
        asymptotic_flag=rep.asymptotic_flag,
        stage_uct_ok=rep.stage_uct_ok,
        all_ok=rep.all_stage_uct_ok())


def handle_polyhedron_report(req: PolyhedronReportRequest):
    coeff = parse_coeff(req.coeff)
    depth = _clamp_depth(req.depth)
    constant = req.cofiltration.tail is not None
    if req.cofiltration.is_pairs():
        pairs = req.cofiltration.to_pair_list()
        try:
            rep = pair_polyhedron_uct_report(pairs, coeff, req.degree, depth,
                                             constant_tail=constant)
        except ValueError as e:
            raise InputError(f"cofiltration: {e}")
        rel = rep.relative_report
        return PairPolyhedronReportResponse(
            degree=rep.degree, coeff=req.coeff,
            stage_connecting=[d.matrix.to_json() for d in rep.stage_connecting],
            connecting_groups=[(str(d.source.fg()), str(d.target.fg()))
                               for d in rep.stage_connecting],
            naturality_ok=rep.naturality_ok,
            relative=_polyhedron_response(rel, req.coeff),
            all_ok=rep.all_ok())
    stages = req.cofiltration.to_complex_list()
    try:
        rep = polyhedron_uct_report(stages, coeff, req.degree, depth,
                                    constant_tail=constant)
    except ValueError as e:
        raise InputError(f"cofiltration: {e}")
    return _polyhedron_response(rep, req.coeff)


def _polyhedron_response(rep, coeff_str: str) -> PolyhedronReportResponse:
    return PolyhedronReportResponse(
        degree=rep.degree, coeff=coeff_str, certified=rep.certified,
        stage_homology=[str(g) for g in rep.stage_homology],
        colim_homology=str(rep.colim_homology), colim_status=rep.colim_status,
        hom_part=str(rep.hom_part),
        ext_lim=MlReportDoc.from_report(rep.ext_lim),
        ext_lim1_hom=rep.ext_lim1_hom,
        milnor_lim=MlReportDoc.from_report(rep.milnor_lim),
        stage_uct_ok=rep.stage_uct_ok,
        all_ok=rep.all_stage_uct_ok())


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    try:
        if req.suite == "all":
            result = verify.run_aggregate(seed=req.seed, count=req.count)
        else:
            result = verify.run_suite(req.suite, seed=req.seed, count=req.count)
    except KeyError as e:
        raise InputError(str(e.args[0]))
    return VerifyResponse(suite=result.suite, seed=result.seed, total=result.total,
                          passed=result.passed, failures=result.failures,
                          all_ok=result.ok)


# ---------------------------------------------------------------------------
# example documents
# ---------------------------------------------------------------------------

def _carrier_chain_doc(tower) -> TowerDoc:
    stage_docs = [SimplicialDoc.from_complex(k) for k in tower.stages]
    bond_docs = [CarrierDoc.from_carrier(c) for c in tower.bonding]
    tail = None
    if tower.tail is not None:
        bond_docs.append(CarrierDoc.from_carrier(tower.tail))
        tail = TailDoc(kind="stationary")
    return TowerDoc(stages=stage_docs, bonding=bond_docs, tail=tail)


def handle_examples(name: str) -> ExamplesResponse:
    files: dict[str, dict] = {}
    if name.startswith("solenoid-"):
        try:
            p = int(name.split("-", 1)[1])
        except ValueError:
            raise InputError(f"name: bad solenoid parameter in {name!r}")
        tower = generators.solenoid_tower(p, stages=2 if p == 2 else 3)
        files[f"{name}.json"] = _carrier_chain_doc(tower).model_dump(exclude_none=True)
    elif name.startswith("sphere-"):
        try:
            n = int(name.split("-", 1)[1])
        except ValueError:
            raise InputError(f"name: bad sphere dimension in {name!r}")
        if n < 0 or n > 4:
            raise InputError("name: sphere dimension must be between 0 and 4")
        files[f"{name}.json"] = SimplicialDoc.from_complex(
            generators.sphere(n)).model_dump()
    elif name == "torus":
        files["torus.json"] = SimplicialDoc.from_complex(
            generators.torus()).model_dump()
    elif name == "klein":
        files["klein.json"] = SimplicialDoc.from_complex(
            generators.klein_bottle()).model_dump()
    elif name == "rp2":
        files["rp2.json"] = SimplicialDoc.from_complex(
            generators.projective_plane()).model_dump()
    elif name == "delta-pair":
        k, sub = generators.delta_pair()
        pair = PairDoc(facets=[list(f) for f in k.facets()],
                       sub_facets=[list(f) for f in sub.facets()])
        files["delta-pair.json"] = pair.model_dump()
        from .simplicial import Carrier
        ident = CarrierDoc.from_carrier(Carrier.identity(k))
        files["delta-pair-tower.json"] = TowerDoc(
            stages=[pair], bonding=[ident],
            tail=TailDoc(kind="stationary")).model_dump(exclude_none=True)
    elif name == "wedge-chain":
        stages = generators.wedge_chain_cofiltration(5)
        files["wedge-chain.json"] = CofiltrationDoc(
            stages=[SimplicialDoc.from_complex(k) for k in stages]).model_dump(
            exclude_none=True)
    else:
        raise InputError(f"name: unknown example {name!r}")
    return ExamplesResponse(name=name, files=files)


EXAMPLE_NAMES = ("solenoid-2", "sphere-1", "sphere-2", "sphere-3", "torus",
                 "klein", "rp2", "delta-pair", "wedge-chain")
