"""Pydantic models for every JSON artifact the toolkit prints.

Payloads are produced by the domain objects' to_dict() methods with camelCase
keys, validated here, and dumped back through the same aliases.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel


class Report(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True, extra="forbid")

    def dump(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)


class SequentModel(Report):
    ant: List[str]
    suc: List[str]


class TruthTableRow(Report):
    v: Dict[str, str]
    value: str


class TruthTableReport(Report):
    formula: str
    scheme: str
    atoms: List[str]
    rows: List[TruthTableRow]


class ValuationWitness(Report):
    """Result of an internal consequence check; witness is the refuting valuation"""
    scheme: str
    gamma: List[str]
    delta: List[str]
    verdict: str
    checked: int
    witness: Optional[Dict[str, str]] = None


class CountermodelReport(Report):
    w: Dict[str, int]
    z: Dict[str, str]
    valuation_class: str = Field(alias="class")
    faithful: bool
    scheme: Optional[str] = None
    fails_at: Optional[str] = None


class DecisionReport(Report):
    logic: str
    formula: str
    verdict: str
    models_checked: int
    countermodel: Optional[CountermodelReport] = None


class ConsequenceReport(Report):
    logic: str
    gamma: List[str]
    formula: str
    verdict: str
    countermodel: Optional[CountermodelReport] = None


class DerivationNode(Report):
    sequent: SequentModel
    rule: str
    principal: List[str] = []
    side: Dict[str, List[str]] = {}
    children: List["DerivationNode"] = []


class CheckReport(Report):
    calculus: str
    valid: bool
    root: SequentModel
    reason: Optional[str] = None
    node: Optional[SequentModel] = None
    path: Optional[List[int]] = None


class ProofReport(Report):
    calculus: str
    sequent: SequentModel
    status: str
    nodes: int
    derivation: Optional[DerivationNode] = None
    length: Optional[int] = None
    refutation: Optional["RefutationReport"] = None


class CrosscheckReport(Report):
    calculus: str
    passed: bool
    both_yes: int
    both_no: int
    search_incomplete: List[SequentModel]
    soundness_violations: List[SequentModel]
    invalid_derivations: List[SequentModel]


class TreeModel(Report):
    root: str
    worlds: Dict[str, Dict[str, str]]
    relation: List[List[str]]


class RefutationReport(Report):
    calculus: str
    sequent: SequentModel
    frame_bound: int
    found: bool
    types_explored: int
    countermodel: Optional[TreeModel] = None


class SentenceEntry(Report):
    id: int
    form: str
    label: str


class FixedPointDump(Report):
    sentences: List[SentenceEntry]
    members: List[int] = Field(alias="S")
    seed: List[int]
    jump: str
    consistent: bool
    complete_over_u: bool
    iterations: int


class FixedPointList(Report):
    jump: str
    count: int
    fixed_points: List[FixedPointDump]


class TranslationReport(Report):
    formula: str
    realization: Dict[str, str]
    sentence_id: int
    translation: str
    sentences: List[SentenceEntry]


class BridgeEntry(Report):
    formula: str
    translation: str
    z_designated: bool
    in_fixed_point: bool
    w_true: bool
    classically_true: bool
    passed: bool


class BridgeReport(Report):
    mode: str
    scheme: str
    formula: str
    passed: bool
    realization: Dict[str, str]
    jump: str
    consistent: bool
    entries: List[BridgeEntry]


class AxiomEntry(Report):
    axiom: str
    instances: int
    failures: List[str]


class AuditReport(Report):
    logic: str
    bound: int
    passed: bool
    axioms: List[AxiomEntry]


class SuiteReport(Report):
    name: str
    passed: bool
    checked: int
    bound: int
    seed: int
    failures: List[str]
    details: Dict[str, Any] = {}


DerivationNode.model_rebuild()
ProofReport.model_rebuild()

SCHEMAS = {
    model.__name__: model
    for model in (
        TruthTableReport, ValuationWitness, CountermodelReport, DecisionReport, ConsequenceReport,
        DerivationNode, CheckReport, ProofReport, CrosscheckReport, RefutationReport,
        SentenceEntry, FixedPointDump, FixedPointList, TranslationReport, BridgeReport,
        AuditReport, SuiteReport,
    )
}


def json_schemas() -> Dict[str, Any]:
    return {name: model.model_json_schema(by_alias=True) for name, model in sorted(SCHEMAS.items())}
