"""Preference-based discovery over middleware types or known technologies."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import vocabulary
from .classifier import feature_match
from .kb import TYPE_ROOT, KnowledgeBase
from .ontology import UnknownClass

TYPES = "types"
INDIVIDUALS = "individuals"


class QueryError(ValueError):
    pass


class UnsatisfiableRequired(QueryError):
    def __init__(self, keys: list[str], target: str):
        self.keys = keys
        super().__init__(
            f"no {target} candidate describes required feature(s): {', '.join(keys)}"
        )


@dataclass(frozen=True)
class PreferenceQuery:
    required: Mapping[str, vocabulary.FeatureValue] = field(default_factory=dict)
    # key -> (value, weight)
    preferred: Mapping[str, tuple[vocabulary.FeatureValue, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        required = vocabulary.check_features(dict(self.required))
        preferred = {}
        for key, item in self.preferred.items():
            if isinstance(item, tuple):
                value, weight = item
            else:
                value, weight = item, Fraction(1)
            weight = Fraction(weight)
            if weight <= 0:
                raise QueryError(f"weight for {key} must be positive")
            preferred[key] = (vocabulary.check_value(key, value), weight)
        for key in required.keys() & preferred.keys():
            if required[key] != preferred[key][0]:
                raise QueryError(f"{key} is both required and preferred with different values")
        object.__setattr__(self, "required", required)
        object.__setattr__(self, "preferred", preferred)


@dataclass(frozen=True)
class Discovered:
    entity: str
    score: Fraction


@dataclass(frozen=True)
class DiscoveryResult:
    target: str
    matches: tuple[Discovered, ...]

    @property
    def names(self) -> list[str]:
        return [m.entity for m in self.matches]


def candidates(kb: KnowledgeBase, target: str) -> dict[str, Mapping]:
    if target == TYPES:
        return {name: p.features for name, p in kb.profiles.items()}
    if target == INDIVIDUALS:
        return dict(kb.matrix)
    raise QueryError(f"unknown target {target!r}; use {TYPES} or {INDIVIDUALS}")


def discover(kb: KnowledgeBase, query: PreferenceQuery, target: str = TYPES) -> DiscoveryResult:
    pool = candidates(kb, target)
    if target == INDIVIDUALS:
        keys = set(query.required) | set(query.preferred)
        non_bool = sorted(k for k in keys if vocabulary.VOCABULARY[k].kind is not vocabulary.BOOLEAN)
        if non_bool:
            raise QueryError(
                f"technologies are described by boolean features only; got {', '.join(non_bool)}"
            )

    unknown = sorted(k for k in query.required if not any(k in f for f in pool.values()))
    if unknown:
        raise UnsatisfiableRequired(unknown, target)

    matches = []
    for name, features in pool.items():
        if all(
            key in features and feature_match(key, value, features[key]) == 1
            for key, value in query.required.items()
        ):
            matches.append(Discovered(name, preference_score(query, features)))
    matches.sort(key=lambda m: (-m.score, m.entity))
    return DiscoveryResult(target, tuple(matches))


def preference_score(query: PreferenceQuery, features: Mapping) -> Fraction:
    """Weighted mean match over the preferred keys the candidate describes."""
    total = weight_sum = Fraction(0)
    for key, (value, weight) in query.preferred.items():
        if key in features:
            total += weight * feature_match(key, value, features[key])
            weight_sum += weight
    return total / weight_sum if weight_sum else Fraction(1)


def known_technologies(kb: KnowledgeBase, type_class: str) -> list[str]:
    ont = kb.ontology
    if type_class not in ont.classes or not ont.is_subclass_of(type_class, TYPE_ROOT):
        raise UnknownClass(f"{type_class} is not a middleware type class")
    return [i for i in ont.instances_of(type_class) if i in kb.matrix]
