"""Parser and canonical serializer for MWO ontology and service documents.

Ontology documents are sequences of ``;``-terminated statements::

    class MOM subclassOf Middleware ;
    individual CORBA typeOf OOM ;
    assert CORBA os_independent true ;

Service documents hold exactly one ``service Name { key = value ; ... }``
block whose keys and values come from :mod:`mwo.vocabulary`.

Parsing stops at the first error. Forward references are allowed; semantic
consistency is checked after the whole document has been read.
"""

from __future__ import annotations

from typing import Union

from . import vocabulary
from .classifier import ServiceDescription
from .lexer import EOF, IDENT, INT, PUNCT, STRING, ParseError, SourcePosition, Token, quote, tokenize
from .ontology import (
    DATATYPE_KINDS,
    RESERVED_NAMES,
    Assertion,
    Annotation,
    Literal,
    Ontology,
    PropertyDecl,
    PropertyKind,
    Violation,
)

Document = Union[Ontology, ServiceDescription]

__all__ = [
    "Document",
    "DuplicateFeature",
    "InvalidFeatureValue",
    "ParseError",
    "SourcePosition",
    "UnknownFeature",
    "ValidationFailed",
    "parse_document",
    "parse_ontology",
    "parse_service",
    "serialize",
]


class UnknownFeature(ParseError):
    pass


class InvalidFeatureValue(ParseError):
    pass


class DuplicateFeature(ParseError):
    pass


class ValidationFailed(Exception):
    """The document is well-formed but semantically inconsistent."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class _Cursor:
    def __init__(self, text: str):
        self._tokens = tokenize(text)
        self.current: Token = next(self._tokens)

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != EOF:
            self.current = next(self._tokens)
        return tok

    def error(self, expected: str) -> ParseError:
        return ParseError(self.current.position, expected, self.current.describe())

    def at_word(self, word: str) -> bool:
        return self.current.kind == IDENT and self.current.text == word

    def at_punct(self, p: str) -> bool:
        return self.current.kind == PUNCT and self.current.text == p

    def word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.error(repr(word))
        return self.advance()

    def punct(self, p: str) -> Token:
        if not self.at_punct(p):
            raise self.error(repr(p))
        return self.advance()

    def ident(self) -> Token:
        tok = self.current
        if tok.kind != IDENT or tok.text in RESERVED_NAMES:
            raise self.error(IDENT)
        return self.advance()

    def ident_list(self) -> list[str]:
        names = [self.ident().text]
        while self.at_punct(","):
            self.advance()
            names.append(self.ident().text)
        return names


_STATEMENTS = (
    "class",
    "objectProperty",
    "datatypeProperty",
    "annotationProperty",
    "individual",
    "assert",
    "annotate",
)


def parse_ontology(text: str, check: bool = True) -> Ontology:
    """Parse an ontology document.

    With ``check`` (the default) the result is validated and
    ValidationFailed is raised when any invariant is broken.
    """
    cur = _Cursor(text)
    classes: dict[str, set[str]] = {}
    individuals: dict[str, set[str]] = {}
    properties: dict[str, PropertyDecl] = {}
    assertions: list[Assertion] = []
    annotations: list[Annotation] = []
    duplicates: list[Violation] = []

    def declare(table, name, value, kind):
        if name in table:
            duplicates.append(Violation("DuplicateName", name, f"{kind} {name} declared twice"))
        else:
            table[name] = value

    while cur.current.kind != EOF:
        tok = cur.current
        if tok.kind != IDENT or tok.text not in _STATEMENTS:
            raise cur.error("a statement keyword")
        keyword = cur.advance().text

        if keyword == "class":
            name = cur.ident().text
            supers: list[str] = []
            if cur.at_word("subclassOf"):
                cur.advance()
                supers = cur.ident_list()
            declare(classes, name, set(supers), "class")
        elif keyword in ("objectProperty", "datatypeProperty"):
            name = cur.ident().text
            domain = rng = None
            if cur.at_word("domain"):
                cur.advance()
                domain = cur.ident().text
            if cur.at_word("range"):
                cur.advance()
                if keyword == "objectProperty":
                    rng = cur.ident().text
                else:
                    if cur.current.kind != IDENT or cur.current.text not in DATATYPE_KINDS:
                        raise cur.error("'string', 'integer' or 'boolean'")
                    rng = cur.advance().text
            kind = PropertyKind.OBJECT if keyword == "objectProperty" else PropertyKind.DATATYPE
            declare(properties, name, PropertyDecl(name, kind, domain, rng), "property")
        elif keyword == "annotationProperty":
            name = cur.ident().text
            declare(properties, name, PropertyDecl(name, PropertyKind.ANNOTATION), "property")
        elif keyword == "individual":
            name = cur.ident().text
            cur.word("typeOf")
            declare(individuals, name, set(cur.ident_list()), "individual")
        elif keyword == "assert":
            subject = cur.ident().text
            prop = cur.ident().text
            assertions.append(Assertion(subject, prop, _object(cur)))
        else:  # annotate
            entity = cur.ident().text
            prop = cur.ident().text
            if cur.current.kind != STRING:
                raise cur.error(STRING)
            annotations.append(Annotation(entity, prop, cur.advance().value))
        cur.punct(";")

    ont = Ontology(classes, individuals, properties, assertions, annotations)
    if check:
        violations = duplicates + ont.validate()
        if violations:
            raise ValidationFailed(violations)
    return ont


def _object(cur: _Cursor):
    tok = cur.current
    if tok.kind == STRING:
        return Literal(cur.advance().value)
    if tok.kind == INT:
        return Literal(cur.advance().value)
    if tok.kind == IDENT and tok.text in ("true", "false"):
        return Literal(cur.advance().text == "true")
    if tok.kind == IDENT:
        return cur.advance().text
    raise cur.error("an individual or literal")


def parse_service(text: str) -> ServiceDescription:
    cur = _Cursor(text)
    cur.word("service")
    name = cur.ident().text
    cur.punct("{")
    features: dict[str, object] = {}
    while not cur.at_punct("}"):
        key_tok = cur.current
        if key_tok.kind != IDENT:
            raise cur.error("a feature name or '}'")
        key = key_tok.text
        if key not in vocabulary.VOCABULARY:
            raise UnknownFeature(key_tok.position, "a known feature", repr(key))
        if key in features:
            raise DuplicateFeature(key_tok.position, "a feature not given before", repr(key))
        cur.advance()
        cur.punct("=")
        features[key] = _feature_value(cur, key)
        cur.punct(";")
    cur.advance()
    if cur.current.kind != EOF:
        raise cur.error(EOF)
    return ServiceDescription(name, features)


def _feature_value(cur: _Cursor, key: str):
    feat = vocabulary.VOCABULARY[key]
    first = cur.current
    if first.kind != IDENT:
        raise cur.error(f"a value for {key}")
    if feat.kind is vocabulary.SET:
        parts = [cur.advance()]
        while cur.at_punct("|"):
            cur.advance()
            if cur.current.kind != IDENT:
                raise cur.error(f"a value for {key}")
            parts.append(cur.advance())
        seen = set()
        for tok in parts:
            if tok.text not in feat.values:
                raise InvalidFeatureValue(tok.position, f"a value for {key}", repr(tok.text))
            if tok.text in seen:
                raise InvalidFeatureValue(tok.position, "no repeated values", repr(tok.text))
            seen.add(tok.text)
        return frozenset(seen)
    cur.advance()
    try:
        return vocabulary.parse_value(key, first.text)
    except vocabulary.VocabularyError:
        raise InvalidFeatureValue(first.position, f"a value for {key}", repr(first.text)) from None


def detect_kind(text: str) -> str:
    """``"service"`` or ``"ontology"``, judged by the leading keyword."""
    try:
        first = next(tokenize(text))
    except ParseError:
        return "ontology"
    return "service" if first.kind == IDENT and first.text == "service" else "ontology"


def parse_document(text: str) -> Document:
    if detect_kind(text) == "service":
        return parse_service(text)
    return parse_ontology(text)


# -- serialization ----------------------------------------------------------


def serialize(doc: Document) -> str:
    """Canonical text: sorted statements, single spaces, LF endings."""
    if isinstance(doc, ServiceDescription):
        return _serialize_service(doc)
    return _serialize_ontology(doc)


def _serialize_ontology(ont: Ontology) -> str:
    lines = []
    for name in sorted(ont.classes):
        supers = sorted(ont.classes[name])
        tail = f" subclassOf {', '.join(supers)}" if supers else ""
        lines.append(f"class {name}{tail} ;")
    for name in sorted(ont.properties):
        decl = ont.properties[name]
        if decl.kind is PropertyKind.ANNOTATION:
            lines.append(f"annotationProperty {name} ;")
            continue
        keyword = "objectProperty" if decl.kind is PropertyKind.OBJECT else "datatypeProperty"
        parts = [keyword, name]
        if decl.domain is not None:
            parts += ["domain", decl.domain]
        if decl.range is not None:
            parts += ["range", decl.range]
        lines.append(" ".join(parts) + " ;")
    for name in sorted(ont.individuals):
        lines.append(f"individual {name} typeOf {', '.join(sorted(ont.individuals[name]))} ;")
    for a in sorted(ont.assertions, key=Assertion.sort_key):
        lines.append(f"assert {a.subject} {a.property} {_format_object(a.object)} ;")
    for a in sorted(ont.annotations, key=Annotation.sort_key):
        lines.append(f"annotate {a.entity} {a.property} {quote(a.text)} ;")
    return "".join(line + "\n" for line in lines)


def _format_object(obj) -> str:
    if not isinstance(obj, Literal):
        return obj
    if obj.kind == "string":
        return quote(obj.value)
    if obj.kind == "boolean":
        return "true" if obj.value else "false"
    return str(obj.value)


def _serialize_service(svc: ServiceDescription) -> str:
    lines = [f"service {svc.name} {{"]
    for key in sorted(svc.features):
        lines.append(f"  {key} = {vocabulary.format_value(svc.features[key])} ;")
    lines.append("}")
    return "\n".join(lines) + "\n"
