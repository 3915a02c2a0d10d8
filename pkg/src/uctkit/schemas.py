"""Wire formats: JSON document models and request/response schemas.

Matrices travel as arrays of arrays of decimal strings so arbitrary
precision survives serialization.  The same models back the HTTP service
and the CLI, whose JSON output is the service response rendered with
sorted keys.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from .abgroups import FgAbGroup, parse_group
from .complexes import ChainMap, FreeComplex
from .intlat import IntMatrix
from .proind import PairTower, SimplicialTower
from .simplicial import Carrier, SimplicialComplex

MatrixDoc = list[list[str]]


class InputError(ValueError):
    """Malformed input document; the offending key is named in the message."""


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

class ComplexDoc(BaseModel):
    orientation: Literal["chain", "cochain"]
    degrees: dict[str, int] = Field(default_factory=dict)
    differentials: dict[str, MatrixDoc] = Field(default_factory=dict)

    def to_complex(self) -> FreeComplex:
        try:
            ranks = {int(k): v for k, v in self.degrees.items()}
        except ValueError as e:
            raise InputError(f"degrees: keys must be integers ({e})")
        diffs = {}
        for k, m in self.differentials.items():
            try:
                n = int(k)
            except ValueError:
                raise InputError(f"differentials: key {k!r} is not an integer")
            step = -1 if self.orientation == "chain" else 1
            rows = ranks.get(n + step, 0)
            cols = ranks.get(n, 0)
            try:
                diffs[n] = IntMatrix.from_json(m, rows=rows, cols=cols)
            except Exception as e:
                raise InputError(f"differentials.{k}: {e}")
        try:
            return FreeComplex(self.orientation, ranks, diffs)
        except ValueError as e:
            raise InputError(f"complex: {e}")

    @classmethod
    def from_complex(cls, c: FreeComplex) -> "ComplexDoc":
        return cls(orientation=c.orientation,
                   degrees={str(n): r for n, r in c.ranks.items()},
                   differentials={str(n): m.to_json() for n, m in c.diffs.items()})


class SimplicialDoc(BaseModel):
    facets: list[list[int]]

    def to_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.facets)

    @classmethod
    def from_complex(cls, k: SimplicialComplex) -> "SimplicialDoc":
        return cls(facets=[list(f) for f in k.facets()])


class PairDoc(BaseModel):
    facets: list[list[int]]
    sub_facets: list[list[int]]

    def to_pair(self) -> tuple[SimplicialComplex, SimplicialComplex]:
        k = SimplicialComplex(self.facets)
        sub = SimplicialComplex(self.sub_facets)
        if not sub.is_subcomplex_of(k):
            raise InputError("sub_facets: not a subcomplex of facets")
        return k, sub


class CoverDoc(BaseModel):
    ground: int
    sets: list[list[int]]

    def to_cover(self):
        from .simplicial import CoverSystem
        try:
            return CoverSystem.build(self.ground, self.sets)
        except ValueError as e:
            raise InputError(f"sets: {e}")


class CarrierEntry(BaseModel):
    simplex: list[int]
    image_facets: list[list[int]]
    w: Optional[int] = None


class CarrierDoc(BaseModel):
    kind: Literal["carrier"] = "carrier"
    entries: list[CarrierEntry]

    def to_carrier(self, source: SimplicialComplex,
                   target: SimplicialComplex) -> Carrier:
        mapping = {}
        choice = {}
        for e in self.entries:
            key = frozenset(e.simplex)
            mapping[key] = SimplicialComplex(e.image_facets)
            if e.w is not None:
                choice[key] = e.w
        try:
            return Carrier(source, target, mapping, choice=choice or None)
        except ValueError as err:
            raise InputError(f"bonding: {err}")

    @classmethod
    def from_carrier(cls, c: Carrier) -> "CarrierDoc":
        entries = []
        choice = c.choice or {}
        for s in sorted(c.source.simplices, key=lambda x: (len(x), tuple(sorted(x)))):
            entries.append(CarrierEntry(
                simplex=sorted(s),
                image_facets=[list(f) for f in c.mapping[s].facets()],
                w=choice.get(s)))
        return cls(entries=entries)


class ChainMapDoc(BaseModel):
    kind: Literal["chain_map"] = "chain_map"
    blocks: dict[str, MatrixDoc]

    def to_chain_map(self, source: FreeComplex, target: FreeComplex) -> ChainMap:
        blocks = {}
        for k, m in self.blocks.items():
            try:
                n = int(k)
            except ValueError:
                raise InputError(f"blocks: key {k!r} is not an integer")
            blocks[n] = IntMatrix.from_json(m, rows=target.rank(n), cols=source.rank(n))
        try:
            return ChainMap(source, target, blocks)
        except ValueError as e:
            raise InputError(f"bonding: {e}")


class TailDoc(BaseModel):
    kind: Literal["stationary"]


StageDoc = Union[SimplicialDoc, PairDoc, ComplexDoc]
BondingDoc = Union[CarrierDoc, ChainMapDoc]


class TowerDoc(BaseModel):
    """Stages plus bonding maps (stage m+1 -> m).

    With a stationary tail the final bonding entry is the self-map of the
    last stage, so ``len(bonding) == len(stages)``; otherwise it is
    ``len(stages) - 1``.
    """

    stages: list[StageDoc]
    bonding: list[BondingDoc] = Field(default_factory=list)
    tail: Optional[TailDoc] = None

    def expected_bonding(self) -> int:
        return len(self.stages) if self.tail else max(len(self.stages) - 1, 0)

    def _check_lengths(self):
        if not self.stages:
            raise InputError("stages: tower needs at least one stage")
        if len(self.bonding) != self.expected_bonding():
            raise InputError(
                f"bonding: expected {self.expected_bonding()} maps, got {len(self.bonding)}")

    def to_simplicial_tower(self) -> SimplicialTower:
        self._check_lengths()
        if not all(isinstance(s, SimplicialDoc) for s in self.stages):
            raise InputError("stages: expected simplicial stage documents")
        ks = [s.to_complex() for s in self.stages]
        bonds = []
        for m in range(len(ks) - 1):
            doc = self.bonding[m]
            if not isinstance(doc, CarrierDoc):
                raise InputError(f"bonding[{m}]: expected a carrier document")
            bonds.append(doc.to_carrier(ks[m + 1], ks[m]))
        tail = None
        if self.tail:
            doc = self.bonding[-1]
            if not isinstance(doc, CarrierDoc):
                raise InputError("bonding[-1]: expected a carrier document")
            tail = doc.to_carrier(ks[-1], ks[-1])
        return SimplicialTower(ks, bonds, tail=tail)

    def to_pair_tower(self) -> PairTower:
        self._check_lengths()
        if not all(isinstance(s, PairDoc) for s in self.stages):
            raise InputError("stages: expected pair stage documents")
        pairs = [s.to_pair() for s in self.stages]
        bonds = []
        for m in range(len(pairs) - 1):
            doc = self.bonding[m]
            if not isinstance(doc, CarrierDoc):
                raise InputError(f"bonding[{m}]: expected a carrier document")
            bonds.append(doc.to_carrier(pairs[m + 1][0], pairs[m][0]))
        tail = None
        if self.tail:
            doc = self.bonding[-1]
            tail = doc.to_carrier(pairs[-1][0], pairs[-1][0])
        return PairTower(pairs, bonds, tail=tail)

    def is_pair_tower(self) -> bool:
        return bool(self.stages) and isinstance(self.stages[0], PairDoc)


class CofiltrationDoc(BaseModel):
    """Increasing finite subcomplexes; a stationary tail freezes the last stage."""

    stages: list[StageDoc]
    tail: Optional[TailDoc] = None

    def is_pairs(self) -> bool:
        return bool(self.stages) and isinstance(self.stages[0], PairDoc)

    def to_complex_list(self) -> list[SimplicialComplex]:
        if not all(isinstance(s, SimplicialDoc) for s in self.stages):
            raise InputError("stages: expected simplicial stage documents")
        return [s.to_complex() for s in self.stages]

    def to_pair_list(self):
        if not all(isinstance(s, PairDoc) for s in self.stages):
            raise InputError("stages: expected pair stage documents")
        return [s.to_pair() for s in self.stages]


# ---------------------------------------------------------------------------
# requests
# ---------------------------------------------------------------------------

def parse_coeff(text: str) -> FgAbGroup:
    try:
        return parse_group(text)
    except ValueError as e:
        raise InputError(f"coeff: {e}")


class HomologyRequest(BaseModel):
    complex: Optional[ComplexDoc] = None
    simplicial: Optional[SimplicialDoc] = None
    coeff: str = "Z"
    degree: int = 0

    def validate_one_input(self):
        if (self.complex is None) == (self.simplicial is None):
            raise InputError("input: exactly one of 'complex' or 'simplicial' is required")


class UctRequest(BaseModel):
    complex: Optional[ComplexDoc] = None
    simplicial: Optional[SimplicialDoc] = None
    coeff: str = "Z"
    degree: int = 0

    def validate_one_input(self):
        if (self.complex is None) == (self.simplicial is None):
            raise InputError("input: exactly one of 'complex' or 'simplicial' is required")


class ExtRequest(BaseModel):
    group: str
    coeff: str = "Z"
    cocycle_check: bool = False


class SpaceReportRequest(BaseModel):
    tower: TowerDoc
    coeff: str = "Z"
    degree: int = 0
    depth: int = 6


class PolyhedronReportRequest(BaseModel):
    cofiltration: CofiltrationDoc
    coeff: str = "Z"
    degree: int = 0
    depth: int = 6


class VerifyRequest(BaseModel):
    suite: str = "uct-random"
    seed: int = 17
    count: Optional[int] = None


# ---------------------------------------------------------------------------
# responses
# ---------------------------------------------------------------------------

class HomologyResponse(BaseModel):
    kind: Literal["homology", "cohomology"]
    degree: int
    coeff: str
    group: str
    ok: bool = True


class UctResponse(BaseModel):
    degree: int
    coeff: str
    ext_part: str
    middle: str
    hom_part: str
    verdicts: dict[str, bool]
    all_ok: bool


class ExtResponse(BaseModel):
    group: str
    coeff: str
    hom: str
    ext: str
    tensor: str
    tor: str
    pext_zero: bool
    cocycle_ext: Optional[str] = None
    cocycle_matches: Optional[bool] = None
    all_ok: bool = True


class MlReportDoc(BaseModel):
    stages: list[str]
    image_chain: list[str]
    status: str
    stabilized_at: Optional[int]
    lim: str
    lim1: str

    @classmethod
    def from_report(cls, r) -> "MlReportDoc":
        return cls(stages=[str(g) for g in r.stage_groups],
                   image_chain=[str(g) for g in r.image_chain],
                   status=r.status, stabilized_at=r.stabilized_at,
                   lim=r.lim_str(), lim1=r.lim1)


class StageCohomologyDoc(BaseModel):
    h_same: str
    h_up: str


class SpaceReportResponse(BaseModel):
    degree: int
    coeff: str
    certified: bool
    stage_cohomology: list[StageCohomologyDoc]
    hom_part: MlReportDoc
    ext_lim: MlReportDoc
    ext_lim1_hom: str
    weak_part: MlReportDoc
    asymptotic_flag: str
    stage_uct_ok: list[bool]
    all_ok: bool


class PairStageDoc(BaseModel):
    connecting_source: str
    connecting_target: str
    connecting_matrix: MatrixDoc
    naturality_ok: bool
    uct_pair_ok: bool
    uct_sub_ok: bool


class PairSpaceReportResponse(BaseModel):
    degree: int
    coeff: str
    certified: bool
    stages: list[PairStageDoc]
    relative_weak: MlReportDoc
    long_exact_ok: list[bool]
    all_ok: bool


class PolyhedronReportResponse(BaseModel):
    degree: int
    coeff: str
    certified: bool
    stage_homology: list[str]
    colim_homology: str
    colim_status: str
    hom_part: str
    ext_lim: MlReportDoc
    ext_lim1_hom: str
    milnor_lim: MlReportDoc
    stage_uct_ok: list[bool]
    all_ok: bool


class PairPolyhedronReportResponse(BaseModel):
    degree: int
    coeff: str
    stage_connecting: list[MatrixDoc]
    connecting_groups: list[tuple[str, str]]
    naturality_ok: list[bool]
    relative: PolyhedronReportResponse
    all_ok: bool


class VerifyResponse(BaseModel):
    suite: str
    seed: int
    total: int
    passed: int
    failures: list[str]
    all_ok: bool


class ExamplesResponse(BaseModel):
    name: str
    files: dict[str, dict]
