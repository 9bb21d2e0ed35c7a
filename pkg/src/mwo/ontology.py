"""In-memory ontology: class taxonomy, individuals, properties and assertions.

An :class:`Ontology` is an immutable value. The ``add_*`` methods
return a new ontology and leave the receiver untouched, so a built ontology can
be shared freely between threads.

Subsumption is reflexive and transitive over the stored direct-superclass
edges; the reflexive pairs are never stored.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Union

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")

# Grammar keywords and boolean literals cannot name entities; keeping them out
# lets the parser report a corrupted statement at the offending token.
RESERVED_NAMES = frozenset({
    "class", "subclassOf", "objectProperty", "datatypeProperty", "annotationProperty",
    "individual", "typeOf", "assert", "annotate", "domain", "range", "service",
    "true", "false",
})

DATATYPE_KINDS = ("string", "integer", "boolean")


class PropertyKind(str, enum.Enum):
    OBJECT = "object"
    DATATYPE = "datatype"
    ANNOTATION = "annotation"


class OntologyError(Exception):
    """Base class for errors raised while building or querying an ontology."""


class DuplicateName(OntologyError):
    pass


class UnknownSuperclass(OntologyError):
    pass


class UnknownClass(OntologyError):
    pass


class UnknownEntity(OntologyError):
    pass


class CycleDetected(OntologyError):
    def __init__(self, path: list[str]):
        self.path = path
        super().__init__("subclass cycle: " + " -> ".join(path))


def is_valid_name(name: str) -> bool:
    return bool(NAME_RE.match(name)) and name not in RESERVED_NAMES


@dataclass(frozen=True)
class Literal:
    """A typed literal value. ``kind`` is derived from the Python type."""

    value: Union[str, int, bool]

    def __post_init__(self):
        if not isinstance(self.value, (str, int)):
            raise TypeError(f"unsupported literal type: {type(self.value).__name__}")

    @property
    def kind(self) -> str:
        if isinstance(self.value, bool):
            return "boolean"
        if isinstance(self.value, int):
            return "integer"
        return "string"

    def sort_key(self) -> tuple:
        return (DATATYPE_KINDS.index(self.kind), self.value)

    def __eq__(self, other):
        # True == 1 in Python; literals of different kinds must differ.
        if not isinstance(other, Literal):
            return NotImplemented
        return self.kind == other.kind and self.value == other.value

    def __hash__(self):
        return hash((self.kind, self.value))


ObjectValue = Union[str, Literal]


@dataclass(frozen=True)
class PropertyDecl:
    name: str
    kind: PropertyKind
    domain: str | None = None
    range: str | None = None


@dataclass(frozen=True)
class Assertion:
    subject: str
    property: str
    object: ObjectValue

    def sort_key(self) -> tuple:
        if isinstance(self.object, Literal):
            obj = (1,) + self.object.sort_key()
        else:
            obj = (0, 0, self.object)
        return (self.subject, self.property, obj)


@dataclass(frozen=True)
class Annotation:
    entity: str
    property: str
    text: str

    def sort_key(self) -> tuple:
        return (self.entity, self.property, self.text)


@dataclass(frozen=True)
class Violation:
    """One broken invariant. ``code`` is stable and machine-readable."""

    code: str
    entity: str
    message: str

    def __str__(self):
        return f"{self.code} [{self.entity}]: {self.message}"


@dataclass(frozen=True, eq=False)
class Ontology:
    classes: Mapping[str, frozenset[str]] = field(default_factory=dict)
    individuals: Mapping[str, frozenset[str]] = field(default_factory=dict)
    properties: Mapping[str, PropertyDecl] = field(default_factory=dict)
    assertions: tuple[Assertion, ...] = ()
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self):
        # normalize containers so callers may pass lists/sets
        object.__setattr__(
            self, "classes", {c: frozenset(s) for c, s in self.classes.items()}
        )
        object.__setattr__(
            self, "individuals", {i: frozenset(t) for i, t in self.individuals.items()}
        )
        object.__setattr__(self, "properties", dict(self.properties))
        object.__setattr__(self, "assertions", tuple(self.assertions))
        object.__setattr__(self, "annotations", tuple(self.annotations))
        object.__setattr__(self, "_ancestor_cache", {})

    # -- structural equality ---------------------------------------------

    def canonical(self) -> tuple:
        """Order-independent structural key; two ontologies are equal iff keys match."""
        return (
            tuple(sorted((c, tuple(sorted(s))) for c, s in self.classes.items())),
            tuple(sorted((i, tuple(sorted(t))) for i, t in self.individuals.items())),
            tuple(
                sorted(
                    (p.name, p.kind.value, p.domain or "", p.range or "")
                    for p in self.properties.values()
                )
            ),
            tuple(sorted(a.sort_key() for a in self.assertions)),
            tuple(sorted(a.sort_key() for a in self.annotations)),
        )

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return (
            f"Ontology({len(self.classes)} classes, {len(self.individuals)} individuals, "
            f"{len(self.properties)} properties, {len(self.assertions)} assertions)"
        )

    # -- construction ------------------------------------------------------

    def add_class(self, name: str, supers: Iterable[str] = ()) -> "Ontology":
        """Return a new ontology with ``name`` declared under ``supers``.

        Raises UnknownSuperclass, CycleDetected (when ``name`` already exists
        and one of ``supers`` lies below it) or DuplicateName.
        """
        supers = frozenset(supers)
        missing = sorted(s for s in supers if s not in self.classes)
        if missing:
            raise UnknownSuperclass(f"unknown superclass(es) of {name}: {', '.join(missing)}")
        for sup in sorted(supers):
            if sup == name:
                raise CycleDetected([name, name])
            if name in self.classes:
                path = self._path_up(sup, name)
                if path is not None:
                    raise CycleDetected([name] + path)
        if name in self.classes or name in self.properties:
            raise DuplicateName(f"{name} is already declared")
        _check_name(name)
        classes = dict(self.classes)
        classes[name] = supers
        return replace(self, classes=classes)

    def add_individual(self, name: str, types: Iterable[str]) -> "Ontology":
        types = frozenset(types)
        if name in self.individuals or name in self.properties:
            raise DuplicateName(f"{name} is already declared")
        _check_name(name)
        for t in sorted(types):
            self._require_class(t)
        individuals = dict(self.individuals)
        individuals[name] = types
        return replace(self, individuals=individuals)

    def add_property(
        self,
        name: str,
        kind: PropertyKind | str,
        domain: str | None = None,
        range: str | None = None,
    ) -> "Ontology":
        if name in self.properties or name in self.classes or name in self.individuals:
            raise DuplicateName(f"{name} is already declared")
        _check_name(name)
        properties = dict(self.properties)
        properties[name] = PropertyDecl(name, PropertyKind(kind), domain, range)
        return replace(self, properties=properties)

    def add_assertion(self, subject: str, prop: str, obj: ObjectValue) -> "Ontology":
        if subject not in self.individuals:
            raise UnknownEntity(f"unknown individual {subject}")
        if prop not in self.properties:
            raise UnknownEntity(f"unknown property {prop}")
        if not isinstance(obj, Literal) and obj not in self.individuals:
            raise UnknownEntity(f"unknown individual {obj}")
        return replace(self, assertions=self.assertions + (Assertion(subject, prop, obj),))

    def add_annotation(self, entity: str, prop: str, text: str) -> "Ontology":
        if not self.is_entity(entity):
            raise UnknownEntity(f"unknown entity {entity}")
        if prop not in self.properties:
            raise UnknownEntity(f"unknown property {prop}")
        return replace(self, annotations=self.annotations + (Annotation(entity, prop, text),))

    # -- queries -----------------------------------------------------------

    def is_entity(self, name: str) -> bool:
        return name in self.classes or name in self.individuals or name in self.properties

    def ancestors(self, cls: str) -> frozenset[str]:
        """All classes subsuming ``cls``, including ``cls`` itself."""
        self._require_class(cls)
        return self._ancestors(cls)

    def _ancestors(self, cls: str) -> frozenset[str]:
        cache = self._ancestor_cache
        if cls in cache:
            return cache[cls]
        seen = {cls}
        stack = [cls]
        while stack:
            for sup in self.classes.get(stack.pop(), ()):
                if sup not in seen:
                    seen.add(sup)
                    stack.append(sup)
        result = frozenset(seen)
        cache[cls] = result
        return result

    def is_subclass_of(self, sub: str, sup: str) -> bool:
        self._require_class(sub)
        self._require_class(sup)
        return sup in self._ancestors(sub)

    def subclasses(self, cls: str) -> list[str]:
        """Direct subclasses of ``cls``, sorted by name."""
        self._require_class(cls)
        return sorted(c for c, sups in self.classes.items() if cls in sups)

    def types_of(self, individual: str) -> frozenset[str]:
        """Asserted plus inherited types of an individual."""
        out: set[str] = set()
        for t in self.individuals[individual]:
            if t in self.classes:
                out |= self._ancestors(t)
            else:
                out.add(t)
        return frozenset(out)

    def is_instance_of(self, individual: str, cls: str) -> bool:
        return cls in self.types_of(individual)

    def instances_of(self, cls: str) -> list[str]:
        """Individuals typed ``cls`` or any subclass of it, sorted by name."""
        self._require_class(cls)
        return sorted(i for i in self.individuals if self.is_instance_of(i, cls))

    def assertions_about(self, subject: str) -> list[Assertion]:
        return [a for a in self.assertions if a.subject == subject]

    def annotations_of(self, entity: str, prop: str | None = None) -> list[str]:
        return [
            a.text
            for a in self.annotations
            if a.entity == entity and (prop is None or a.property == prop)
        ]

    def _require_class(self, cls: str) -> None:
        if cls not in self.classes:
            raise UnknownClass(f"unknown class {cls}")

    def _path_up(self, start: str, target: str) -> list[str] | None:
        """A superclass path from ``start`` to ``target``, or None."""
        parents: dict[str, str | None] = {start: None}
        stack = [start]
        while stack:
            node = stack.pop()
            if node == target:
                path = [node]
                while parents[path[-1]] is not None:
                    path.append(parents[path[-1]])
                return path[::-1]
            for sup in sorted(self.classes.get(node, ())):
                if sup not in parents:
                    parents[sup] = node
                    stack.append(sup)
        return None

    # -- validation --------------------------------------------------------

    def validate(self) -> list[Violation]:
        return validate(self)


def _check_name(name: str) -> None:
    if not is_valid_name(name):
        raise OntologyError(f"invalid identifier {name!r}")


def find_cycles(classes: Mapping[str, Iterable[str]]) -> list[list[str]]:
    """One representative path per strongly connected cycle, deterministic."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {c: WHITE for c in classes}
    cycles: list[list[str]] = []

    for root in sorted(classes):
        if color[root] != WHITE:
            continue
        color[root] = GREY
        path = [root]
        iters = [iter(sorted(classes[root]))]
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                iters.pop()
                continue
            if nxt not in color:
                continue
            if color[nxt] == GREY:
                cycles.append(path[path.index(nxt):] + [nxt])
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                iters.append(iter(sorted(classes[nxt])))
    return cycles


def validate(ont: Ontology) -> list[Violation]:
    """Check every structural invariant; an empty list means the ontology is sound."""
    out: list[Violation] = []

    def report(code, entity, message):
        out.append(Violation(code, entity, message))

    for kind, names in (
        ("class", ont.classes),
        ("individual", ont.individuals),
        ("property", ont.properties),
    ):
        for name in sorted(names):
            if not is_valid_name(name):
                report("InvalidName", name, f"{name!r} is not a valid {kind} name")

    for name in sorted(ont.properties):
        if name in ont.classes or name in ont.individuals:
            report("NameClash", name, f"property {name} reuses a class or individual name")

    for cls in sorted(ont.classes):
        for sup in sorted(ont.classes[cls]):
            if sup not in ont.classes:
                report("UnknownSuperclass", cls, f"superclass {sup} of {cls} is not declared")
    for cycle in find_cycles(ont.classes):
        report("CycleDetected", cycle[0], "subclass cycle: " + " -> ".join(cycle))

    for ind in sorted(ont.individuals):
        types = ont.individuals[ind]
        if not types:
            report("UntypedIndividual", ind, f"individual {ind} has no asserted type")
        for t in sorted(types):
            if t not in ont.classes:
                report("UnknownType", ind, f"type {t} of {ind} is not a declared class")

    for name in sorted(ont.properties):
        decl = ont.properties[name]
        if decl.kind is PropertyKind.ANNOTATION:
            if decl.domain is not None or decl.range is not None:
                report("InvalidPropertyDecl", name, "annotation properties take no domain or range")
            continue
        if decl.domain is not None and decl.domain not in ont.classes:
            report("UnknownClass", name, f"domain {decl.domain} of {name} is not declared")
        if decl.range is None:
            continue
        if decl.kind is PropertyKind.OBJECT:
            if decl.range not in ont.classes:
                report("UnknownClass", name, f"range {decl.range} of {name} is not declared")
        elif decl.range not in DATATYPE_KINDS:
            report("InvalidPropertyDecl", name, f"datatype range must be one of {', '.join(DATATYPE_KINDS)}")

    sound_types = {
        i: t for i, t in ont.individuals.items() if all(c in ont.classes for c in t)
    }
    for a in sorted(ont.assertions, key=Assertion.sort_key):
        _check_assertion(ont, a, sound_types, report)

    for a in sorted(ont.annotations, key=Annotation.sort_key):
        if not ont.is_entity(a.entity):
            report("UnknownEntity", a.entity, f"annotation target {a.entity} is not declared")
        decl = ont.properties.get(a.property)
        if decl is None:
            report("UnknownProperty", a.entity, f"annotation property {a.property} is not declared")
        elif decl.kind is not PropertyKind.ANNOTATION:
            report("KindMismatch", a.entity, f"{a.property} is not an annotation property")
    return out


def _check_assertion(ont, a, sound_types, report):
    label = f"{a.subject} {a.property}"
    if a.subject not in ont.individuals:
        report("UnknownIndividual", a.subject, f"assertion subject {a.subject} is not declared")
    decl = ont.properties.get(a.property)
    if decl is None:
        report("UnknownProperty", a.subject, f"property {a.property} is not declared")
        return
    if decl.kind is PropertyKind.ANNOTATION:
        report("KindMismatch", a.subject, f"annotation property {a.property} used in an assertion")
        return

    if decl.domain is not None and a.subject in sound_types and decl.domain in ont.classes:
        if not ont.is_instance_of(a.subject, decl.domain):
            report("DomainMismatch", a.subject, f"{a.subject} is not an instance of {decl.domain} ({label})")

    if decl.kind is PropertyKind.OBJECT:
        if isinstance(a.object, Literal):
            report("KindMismatch", a.subject, f"object property {a.property} given a literal")
            return
        if a.object not in ont.individuals:
            report("UnknownIndividual", a.object, f"assertion object {a.object} is not declared")
            return
        if decl.range is not None and a.object in sound_types and decl.range in ont.classes:
            if not ont.is_instance_of(a.object, decl.range):
                report("RangeMismatch", a.subject, f"{a.object} is not an instance of {decl.range} ({label})")
    else:
        if not isinstance(a.object, Literal):
            report("KindMismatch", a.subject, f"datatype property {a.property} given individual {a.object}")
            return
        if decl.range in DATATYPE_KINDS and a.object.kind != decl.range:
            report("RangeMismatch", a.subject, f"{a.object.kind} literal where {decl.range} expected ({label})")
