"""Score service descriptions against middleware type profiles.

Every profile is compared only on the features both sides assert. Per-feature
matches are exact (categorical, boolean) or Jaccard overlap (connection
modes), averaged with equal weights. All arithmetic is done with
:class:`fractions.Fraction`, so scores and ties are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping

from . import vocabulary
from .vocabulary import FeatureValue

if TYPE_CHECKING:
    from .kb import KnowledgeBase, TypeProfile

# below this top score a service is left unclassified
UNCLASSIFIED_BELOW = Fraction(1, 2)


class KindMismatch(ValueError):
    pass


class EmptyService(ValueError):
    pass


@dataclass(frozen=True)
class ServiceDescription:
    name: str
    features: Mapping[str, FeatureValue] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "features", vocabulary.check_features(dict(self.features)))


@dataclass(frozen=True)
class Match:
    type_class: str
    score: Fraction
    comparable: int
    detail: tuple[tuple[str, Fraction], ...] = ()

    def sort_key(self):
        return (-self.score, -self.comparable, self.type_class)


@dataclass(frozen=True)
class Verdict:
    status: str  # "Classified" | "Ambiguous" | "Unclassified"
    types: tuple[str, ...] = ()

    def __str__(self):
        if self.status == "Unclassified":
            return self.status
        return f"{self.status}: {', '.join(self.types)}"


@dataclass(frozen=True)
class ClassificationResult:
    service: str
    ranking: tuple[Match, ...]
    verdict: Verdict

    @property
    def top(self) -> Match | None:
        return self.ranking[0] if self.ranking else None


def feature_match(key: str, service_value: FeatureValue, profile_value: FeatureValue) -> Fraction:
    feat = vocabulary.feature(key)
    if feat.kind is vocabulary.SET:
        if not isinstance(service_value, frozenset) or not isinstance(profile_value, frozenset):
            raise KindMismatch(f"{key}: expected value sets")
        return Fraction(len(service_value & profile_value), len(service_value | profile_value))
    expected = bool if feat.kind is vocabulary.BOOLEAN else str
    if not isinstance(service_value, expected) or not isinstance(profile_value, expected):
        raise KindMismatch(f"{key}: expected {feat.kind.value} values")
    return Fraction(int(service_value == profile_value))


def score_detail(service: ServiceDescription, profile: "TypeProfile") -> Match:
    keys = sorted(service.features.keys() & profile.features.keys())
    detail = tuple(
        (k, feature_match(k, service.features[k], profile.features[k])) for k in keys
    )
    total = sum((m for _, m in detail), Fraction(0))
    score = total / len(detail) if detail else Fraction(0)
    return Match(profile.type_class, score, len(detail), detail)


def score(service: ServiceDescription, profile: "TypeProfile") -> tuple[Fraction, int]:
    m = score_detail(service, profile)
    return m.score, m.comparable


def classify(
    kb: "KnowledgeBase",
    service: ServiceDescription,
    threshold: Fraction = UNCLASSIFIED_BELOW,
) -> ClassificationResult:
    if not service.features:
        raise EmptyService(f"service {service.name} asserts no features")
    ranking = tuple(
        sorted((score_detail(service, p) for p in kb.profiles.values()), key=Match.sort_key)
    )
    return ClassificationResult(service.name, ranking, _verdict(ranking, threshold))


def _verdict(ranking, threshold) -> Verdict:
    if not ranking:
        return Verdict("Unclassified")
    top = ranking[0]
    if top.comparable == 0 or top.score < threshold:
        return Verdict("Unclassified")
    tied = [m.type_class for m in ranking if (m.score, m.comparable) == (top.score, top.comparable)]
    if len(tied) > 1:
        return Verdict("Ambiguous", tuple(tied))
    return Verdict("Classified", (top.type_class,))


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, places: int = 2) -> str:
    """Round half up to ``places`` decimals without going through floats."""
    scale = 10**places
    units = (x * scale * 2 + 1) // 2
    whole, frac = divmod(units, scale)
    return f"{whole}.{frac:0{places}d}" if places else str(whole)


def explain(result: ClassificationResult) -> str:
    """Per-type, per-feature contribution table."""
    lines = [f"service {result.service}: {result.verdict}"]
    for m in result.ranking:
        lines.append(
            f"{m.type_class}: score {format_fraction(m.score)} ({format_decimal(m.score)}), "
            f"{m.comparable} comparable"
        )
        width = max((len(k) for k, _ in m.detail), default=0)
        for key, contribution in m.detail:
            lines.append(f"  {key.ljust(width)}  {format_fraction(contribution)}")
    return "\n".join(lines) + "\n"
