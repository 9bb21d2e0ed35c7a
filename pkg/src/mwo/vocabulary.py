"""The closed feature vocabulary shared by service files, profiles and queries.

Three value kinds exist:

* categorical -- one symbol out of a fixed set, stored as ``str``
* set         -- a non-empty subset of a fixed set, stored as ``frozenset``
* boolean     -- stored as ``bool``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

FeatureValue = Union[str, frozenset, bool]


class FeatureKind(str, enum.Enum):
    CATEGORICAL = "categorical"
    SET = "set"
    BOOLEAN = "boolean"


class VocabularyError(ValueError):
    pass


class UnknownFeatureKey(VocabularyError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"unknown feature '{key}'")


class UnknownFeatureValue(VocabularyError):
    def __init__(self, key: str, value: str):
        self.key = key
        self.value = value
        super().__init__(f"unknown value '{value}' for {key}")


@dataclass(frozen=True)
class Feature:
    key: str
    kind: FeatureKind
    values: tuple[str, ...] = ()


CATEGORICAL = FeatureKind.CATEGORICAL
SET = FeatureKind.SET
BOOLEAN = FeatureKind.BOOLEAN

FEATURES: tuple[Feature, ...] = (
    Feature(
        "request_reference",
        CATEGORICAL,
        ("distributed_object", "remote_procedure", "message", "distributed_transaction", "sql_query"),
    ),
    Feature(
        "connection_point",
        CATEGORICAL,
        ("client_server_stub", "client_server", "client_server_component", "cooperative_agent"),
    ),
    # "medium" is never used by the seed profiles; kept for user-authored ones
    Feature("scalability", CATEGORICAL, ("limited", "medium", "high")),
    Feature("client_state", CATEGORICAL, ("blocked", "unblocked")),
    Feature("heterogeneity", CATEGORICAL, ("language_independent", "limited", "medium", "high")),
    Feature("connection_mode", SET, ("synchronous", "asynchronous", "negotiation")),
    Feature("os_independent", BOOLEAN),
    Feature("language_independent", BOOLEAN),
    Feature("data_marshaling", BOOLEAN),
    Feature("synchronous_connection", BOOLEAN),
    Feature("asynchronous_connection", BOOLEAN),
    Feature("perform_processing", BOOLEAN),
    Feature("make_storage", BOOLEAN),
    Feature("programmable", BOOLEAN),
)

VOCABULARY: dict[str, Feature] = {f.key: f for f in FEATURES}

BOOLEAN_KEYS = tuple(f.key for f in FEATURES if f.kind is BOOLEAN)


def feature(key: str) -> Feature:
    try:
        return VOCABULARY[key]
    except KeyError:
        raise UnknownFeatureKey(key) from None


def check_value(key: str, value: FeatureValue) -> FeatureValue:
    """Return ``value`` normalized for ``key`` or raise a VocabularyError."""
    feat = feature(key)
    if feat.kind is BOOLEAN:
        if not isinstance(value, bool):
            raise UnknownFeatureValue(key, format_raw(value))
        return value
    if feat.kind is CATEGORICAL:
        if not isinstance(value, str) or value not in feat.values:
            raise UnknownFeatureValue(key, format_raw(value))
        return value
    if isinstance(value, str) or not isinstance(value, (set, frozenset, list, tuple)):
        raise UnknownFeatureValue(key, format_raw(value))
    members = frozenset(value)
    if not members:
        raise VocabularyError(f"empty value set for {key}")
    for m in sorted(members, key=str):
        if m not in feat.values:
            raise UnknownFeatureValue(key, str(m))
    return members


def parse_value(key: str, text: str) -> FeatureValue:
    """Parse the textual form used in service files and on the command line."""
    feat = feature(key)
    if feat.kind is BOOLEAN:
        if text == "true":
            return True
        if text == "false":
            return False
        raise UnknownFeatureValue(key, text)
    if feat.kind is CATEGORICAL:
        return check_value(key, text)
    parts = text.split("|")
    if len(parts) != len(set(parts)):
        raise VocabularyError(f"repeated value in '{text}' for {key}")
    return check_value(key, parts)


def format_value(value: FeatureValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, frozenset):
        return "|".join(sorted(value))
    return value


def format_raw(value) -> str:
    if isinstance(value, (bool, frozenset, str)):
        return format_value(value)
    return repr(value)


def check_features(features: dict) -> dict:
    """Validate a whole feature map, returning a normalized copy."""
    return {key: check_value(key, value) for key, value in features.items()}
