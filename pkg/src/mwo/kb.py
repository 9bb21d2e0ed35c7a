"""The seed middleware knowledge base.

The seed is assembled from three transcribed sources: the classification
skeleton (five dimensions under ``Middleware``), one characteristic table per
middleware type, and the boolean comparison matrix over seven well-known
technologies. Every transcribed cell is kept as a :class:`Cell` so the
provenance file can be regenerated from code.

Profiles and matrix rows live inside the ontology itself (profile individuals
of class ``Type_Profile`` plus datatype assertions), so a serialized KB is a
complete, reloadable description.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, NamedTuple

from . import vocabulary
from .ontology import Literal, Ontology, OntologyError, PropertyKind
from .parser import parse_ontology, serialize
from .vocabulary import FeatureValue

ROOT = "Middleware"
TYPE_ROOT = "Middleware_Type"
DIMENSIONS = (TYPE_ROOT, "Functions", "Protocols", "Call_Type", "Communication_Mode")
TYPE_CLASSES = ("OOM", "RPC", "MOM", "TPM", "DBM", "ABM", "WBM")
FEATURE_VALUE_ROOT = "Feature_Value"
CONNECTION_MODE_CLASS = "Connection_Mode_Value"
CONNECTION_MODES = {"synchronous": "Synchronous", "asynchronous": "Asynchronous", "negotiation": "Negotiation"}
PROFILE_CLASS = "Type_Profile"
PROFILE_OF = "profile_of"

# comparison-matrix columns, in source order, and the class each technology belongs to
TECHNOLOGIES = {
    "CORBA": "OOM",
    "DCOM": "OOM",
    "RMI": "OOM",
    "EJB": "OOM",
    "RPC": "RPC",
    "MOM": "MOM",
    "WS": "WBM",
}

DESCRIPTIONS = {
    "OOM": "Middleware that lets clients invoke methods on objects living in remote systems.",
    "RPC": "Middleware that lets a client program call procedures of a remote server program.",
    "MOM": "Middleware that connects applications by exchanging messages, queued or published.",
    "TPM": "Middleware that coordinates distributed transactions spanning several hosts.",
    "DBM": "Middleware that connects applications with local or remote databases.",
    "ABM": "Middleware that hosts cooperating software agents in dynamic environments.",
    "WBM": "Middleware built on web services and service-oriented architecture.",
}

NOTES = {
    "OOM": "Message / Transaction: Supported",
    "WBM": "No characteristic table exists for this type; its profile is the WS column of the technology comparison matrix.",
}


class KBError(ValueError):
    """An ontology cannot be read as a middleware knowledge base."""


class Cell(NamedTuple):
    """One transcribed table cell and the feature value it yields."""

    entity: str
    table: int
    row: str
    text: str
    feature: str
    value: str  # textual feature value, see vocabulary.parse_value
    target: str = "profile"  # profile | matrix | annotation


def _profile(type_class, table, rows):
    return [Cell(type_class, table, row, text, feature, value) for row, text, feature, value in rows]


PROFILE_CELLS: tuple[Cell, ...] = tuple(
    _profile("OOM", 2, [
        ("Request Reference", "Distributed Object", "request_reference", "distributed_object"),
        ("Connection Point", "Client/Server Stubs", "connection_point", "client_server_stub"),
        ("Connection Mode", "Synchronous (mainly) Asynchronous (limited)", "connection_mode", "synchronous|asynchronous"),
        ("Scalability", "Limited", "scalability", "limited"),
        ("Heterogeneity", "Language – Independent *", "heterogeneity", "language_independent"),
    ])
    + _profile("RPC", 3, [
        ("Request Reference", "Remote Procedure", "request_reference", "remote_procedure"),
        ("Connection Point", "Client/Server Stubs", "connection_point", "client_server_stub"),
        ("Connection Mode", "Synchronous", "connection_mode", "synchronous"),
        ("Scalability", "Limited", "scalability", "limited"),
        ("Client state", "Blocked (Mainly)", "client_state", "blocked"),
        ("Heterogeneity", "Language – Independent", "heterogeneity", "language_independent"),
    ])
    + _profile("MOM", 4, [
        ("Network communication", "Messages", "request_reference", "message"),
        ("Connection Point", "Client/Server", "connection_point", "client_server"),
        ("Connection Mode", "Synchronous Asynchronous", "connection_mode", "synchronous|asynchronous"),
        ("Scalability", "Limited", "scalability", "limited"),
        ("Heterogeneity", "Limited *", "heterogeneity", "limited"),
    ])
    + _profile("TPM", 5, [
        ("Request Reference", "Distributed transactions", "request_reference", "distributed_transaction"),
        ("Connection Point", "Client/Server Component", "connection_point", "client_server_component"),
        ("Connection Mode", "Synchronous / Asynch.", "connection_mode", "synchronous|asynchronous"),
        ("Scalability", "High", "scalability", "high"),
        ("Client state", "Blocked (Mainly)", "client_state", "blocked"),
        ("Heterogeneity", "Medium *", "heterogeneity", "medium"),
    ])
    + _profile("DBM", 6, [
        ("Request Reference", "SQL Query", "request_reference", "sql_query"),
        ("Connection Point", "Client/Server", "connection_point", "client_server"),
        ("Connection Mode", "Synchronous", "connection_mode", "synchronous"),
        ("Scalability", "High", "scalability", "high"),
        ("Client state", "Blocked (Mainly)", "client_state", "blocked"),
        ("Heterogeneity", "High", "heterogeneity", "high"),
    ])
    + _profile("ABM", 7, [
        ("Request Reference", "Messages", "request_reference", "message"),
        ("Connection Point", "Client/Server Cooperative Agent", "connection_point", "cooperative_agent"),
        ("Connection Mode", "Negotiation / Synchronous", "connection_mode", "negotiation|synchronous"),
        ("Scalability", "High", "scalability", "high"),
        ("Client state", "Unblocked", "client_state", "unblocked"),
        ("Heterogeneity", "High", "heterogeneity", "high"),
    ])
)

# comparison-matrix rows: label, feature, checked columns
MATRIX_ROWS = (
    ("OS independent", "os_independent", {"CORBA", "RMI", "EJB", "RPC", "MOM", "WS"}),
    ("Languages independent", "language_independent", {"CORBA", "DCOM", "RPC", "MOM", "WS"}),
    ("Data Marshaling", "data_marshaling", {"CORBA", "DCOM", "RMI", "EJB", "RPC", "WS"}),
    ("Synchronous Connection", "synchronous_connection", set(TECHNOLOGIES)),
    ("Asynchronous Connection", "asynchronous_connection", {"CORBA", "MOM", "WS"}),
    ("Perform Processing", "perform_processing", {"CORBA", "DCOM", "RMI", "EJB", "RPC", "WS"}),
    ("Make Storage", "make_storage", {"MOM"}),
    ("Programmable (Explicit Specs.)", "programmable", {"CORBA", "DCOM", "RMI", "EJB", "RPC", "WS"}),
)

CHECK = "√"


def matrix_cells() -> list[Cell]:
    cells = []
    for tech in TECHNOLOGIES:
        for label, feat, checked in MATRIX_ROWS:
            on = tech in checked
            cells.append(Cell(tech, 8, label, CHECK if on else "", feat, "true" if on else "false", "matrix"))
    return cells


def wbm_profile_cells() -> list[Cell]:
    return [c._replace(entity="WBM", target="profile") for c in matrix_cells() if c.entity == "WS"]


@dataclass(frozen=True)
class TypeProfile:
    type_class: str
    features: Mapping[str, FeatureValue] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "features", vocabulary.check_features(dict(self.features)))


@dataclass(frozen=True)
class KnowledgeBase:
    ontology: Ontology
    profiles: Mapping[str, TypeProfile]
    matrix: Mapping[str, Mapping[str, bool]]

    @classmethod
    def from_ontology(cls, ont: Ontology) -> "KnowledgeBase":
        return KnowledgeBase(ont, _read_profiles(ont), _read_matrix(ont))


def _profile_individual(type_class: str) -> str:
    return f"{type_class}_Profile"


def build_seed_kb() -> KnowledgeBase:
    ont = Ontology().add_class(ROOT)
    for dim in DIMENSIONS:
        ont = ont.add_class(dim, {ROOT})
    for t in TYPE_CLASSES:
        ont = ont.add_class(t, {TYPE_ROOT})
    ont = ont.add_class(FEATURE_VALUE_ROOT).add_class(CONNECTION_MODE_CLASS, {FEATURE_VALUE_ROOT})
    ont = ont.add_class(PROFILE_CLASS)

    ont = ont.add_property("HasComponent", PropertyKind.OBJECT, domain=ROOT)
    ont = ont.add_property("HasConnection", PropertyKind.OBJECT, domain=ROOT, range=CONNECTION_MODE_CLASS)
    ont = ont.add_property("HasCall", PropertyKind.OBJECT, domain=ROOT, range="Call_Type")
    ont = ont.add_property(PROFILE_OF, PropertyKind.DATATYPE, domain=PROFILE_CLASS, range="string")
    for feat in vocabulary.FEATURES:
        if feat.kind is vocabulary.BOOLEAN:
            ont = ont.add_property(feat.key, PropertyKind.DATATYPE, range="boolean")
        else:
            ont = ont.add_property(feat.key, PropertyKind.DATATYPE, domain=PROFILE_CLASS, range="string")
    ont = ont.add_property("description", PropertyKind.ANNOTATION)
    ont = ont.add_property("note", PropertyKind.ANNOTATION)

    for mode in CONNECTION_MODES.values():
        ont = ont.add_individual(mode, {CONNECTION_MODE_CLASS})
    for tech, type_class in TECHNOLOGIES.items():
        ont = ont.add_individual(tech, {type_class})

    for cell in matrix_cells():
        ont = ont.add_assertion(cell.entity, cell.feature, Literal(cell.value == "true"))
        if cell.value == "true" and cell.feature == "synchronous_connection":
            ont = ont.add_assertion(cell.entity, "HasConnection", CONNECTION_MODES["synchronous"])
        if cell.value == "true" and cell.feature == "asynchronous_connection":
            ont = ont.add_assertion(cell.entity, "HasConnection", CONNECTION_MODES["asynchronous"])

    for t in TYPE_CLASSES:
        ont = ont.add_individual(_profile_individual(t), {PROFILE_CLASS})
        ont = ont.add_assertion(_profile_individual(t), PROFILE_OF, Literal(t))
    for cell in PROFILE_CELLS + tuple(wbm_profile_cells()):
        subject = _profile_individual(cell.entity)
        value = vocabulary.parse_value(cell.feature, cell.value)
        if isinstance(value, frozenset):
            for member in sorted(value):
                ont = ont.add_assertion(subject, cell.feature, Literal(member))
        else:
            ont = ont.add_assertion(subject, cell.feature, Literal(value))

    for t in TYPE_CLASSES:
        ont = ont.add_annotation(t, "description", DESCRIPTIONS[t])
    for t, text in NOTES.items():
        ont = ont.add_annotation(t, "note", text)

    violations = ont.validate()
    if violations:
        raise AssertionError(f"seed ontology is inconsistent: {violations}")
    return KnowledgeBase.from_ontology(ont)


def _read_profiles(ont: Ontology) -> dict[str, TypeProfile]:
    if PROFILE_CLASS not in ont.classes:
        return {}
    profiles: dict[str, TypeProfile] = {}
    for ind in ont.instances_of(PROFILE_CLASS):
        owners = [a.object for a in ont.assertions_about(ind) if a.property == PROFILE_OF]
        if len(owners) != 1 or not isinstance(owners[0], Literal) or owners[0].kind != "string":
            raise KBError(f"profile {ind} needs exactly one string {PROFILE_OF} assertion")
        type_class = owners[0].value
        if type_class not in ont.classes or not ont.is_subclass_of(type_class, ROOT):
            raise KBError(f"profile {ind} describes {type_class}, which is not a {ROOT} class")
        if type_class in profiles:
            raise KBError(f"{type_class} has more than one profile")
        profiles[type_class] = TypeProfile(type_class, _read_features(ont, ind))
    return dict(sorted(profiles.items()))


def _read_features(ont: Ontology, ind: str) -> dict[str, FeatureValue]:
    raw: dict[str, list] = {}
    for a in ont.assertions_about(ind):
        if a.property in vocabulary.VOCABULARY:
            if not isinstance(a.object, Literal):
                raise KBError(f"{ind} {a.property}: expected a literal value")
            raw.setdefault(a.property, []).append(a.object.value)
    features: dict[str, FeatureValue] = {}
    for key, values in raw.items():
        feat = vocabulary.VOCABULARY[key]
        try:
            if feat.kind is vocabulary.SET:
                features[key] = vocabulary.check_value(key, values)
            elif len(values) != 1:
                raise KBError(f"{ind} asserts {key} {len(values)} times")
            else:
                features[key] = vocabulary.check_value(key, values[0])
        except vocabulary.VocabularyError as exc:
            raise KBError(f"{ind}: {exc}") from None
    return features


def _read_matrix(ont: Ontology) -> dict[str, dict[str, bool]]:
    if ROOT not in ont.classes:
        return {}
    matrix = {}
    for ind in ont.instances_of(ROOT):
        row = _read_features(ont, ind)
        bad = sorted(k for k in row if vocabulary.VOCABULARY[k].kind is not vocabulary.BOOLEAN)
        if bad:
            raise KBError(f"{ind}: only boolean features may describe a technology ({', '.join(bad)})")
        matrix[ind] = row
    return matrix


def kb_to_document(kb: KnowledgeBase) -> str:
    return serialize(kb.ontology)


def kb_from_document(text: str) -> KnowledgeBase:
    try:
        return KnowledgeBase.from_ontology(parse_ontology(text))
    except OntologyError as exc:
        raise KBError(str(exc)) from None


# -- shipped data files -----------------------------------------------------

PROVENANCE_HEADER = ("target", "entity", "feature", "value", "table", "row", "cell")


def provenance_records() -> list[Cell]:
    """Every transcribed cell, profile cells first, then matrix cells."""
    note = Cell("OOM", 2, "Message / Transaction", "Supported", "note", NOTES["OOM"], "annotation")
    return list(PROFILE_CELLS) + [note] + matrix_cells() + wbm_profile_cells()


def provenance_tsv() -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(PROVENANCE_HEADER)
    for c in provenance_records():
        writer.writerow((c.target, c.entity, c.feature, c.value, c.table, c.row, c.text))
    return buf.getvalue()


def read_provenance(text: str) -> list[Cell]:
    rows = list(csv.reader(io.StringIO(text), delimiter="\t"))
    if not rows or tuple(rows[0]) != PROVENANCE_HEADER:
        raise KBError("provenance file has an unexpected header")
    return [
        Cell(entity, int(table), row, cell, feature, value, target)
        for target, entity, feature, value, table, row, cell in rows[1:]
    ]


def data_file(name: str) -> str:
    return resources.files("mwo").joinpath("data", name).read_text(encoding="utf-8")


def write_data_files(directory: Path) -> None:
    directory = Path(directory)
    (directory / "seed.mwo").write_text(kb_to_document(build_seed_kb()), encoding="utf-8", newline="\n")
    (directory / "provenance.tsv").write_text(provenance_tsv(), encoding="utf-8", newline="\n")


if __name__ == "__main__":
    write_data_files(Path(__file__).parent / "data")
