import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mwo import vocabulary
from mwo.classifier import feature_match
from mwo.discovery import (
    INDIVIDUALS,
    TYPES,
    PreferenceQuery,
    QueryError,
    UnsatisfiableRequired,
    discover,
    known_technologies,
)
from mwo.ontology import UnknownClass

from generators import random_features
from oracles import ORACLE_CHECKS


def names(result):
    return [m.entity for m in result.matches]


class TestDiscover:
    def test_make_storage(self, kb):
        q = PreferenceQuery({"asynchronous_connection": True, "make_storage": True})
        assert names(discover(kb, q, INDIVIDUALS)) == ["MOM"]

    def test_os_independent_async(self, kb):
        q = PreferenceQuery({"os_independent": True, "asynchronous_connection": True})
        result = discover(kb, q, INDIVIDUALS)
        assert names(result) == ["CORBA", "MOM", "WS"]
        assert all(m.score == 1 for m in result.matches)

    def test_vacuous(self, kb):
        for target, pool in ((TYPES, kb.profiles), (INDIVIDUALS, kb.matrix)):
            result = discover(kb, PreferenceQuery(), target)
            assert names(result) == sorted(pool)
            assert all(m.score == 1 for m in result.matches)

    def test_high_scalability_types(self, kb):
        assert names(discover(kb, PreferenceQuery({"scalability": "high"}))) == ["ABM", "DBM", "TPM"]

    def test_empty_result_is_not_an_error(self, kb):
        q = PreferenceQuery({"make_storage": True, "programmable": True})
        assert names(discover(kb, q, INDIVIDUALS)) == []

    def test_individuals_need_boolean_keys(self, kb):
        with pytest.raises(QueryError):
            discover(kb, PreferenceQuery({"scalability": "high"}), INDIVIDUALS)

    def test_preferences_rank(self, kb):
        q = PreferenceQuery(
            {"synchronous_connection": True},
            {"asynchronous_connection": (True, Fraction(2)), "data_marshaling": (True, Fraction(1))},
        )
        result = discover(kb, q, INDIVIDUALS)
        scores = {m.entity: m.score for m in result.matches}
        assert scores["CORBA"] == 1
        assert scores["MOM"] == Fraction(2, 3)
        assert scores["DCOM"] == Fraction(1, 3)
        assert names(result)[:2] == ["CORBA", "WS"]

    def test_absent_preferred_key_is_neutral(self, kb):
        q = PreferenceQuery({}, {"client_state": ("blocked", 1)})
        scores = {m.entity: m.score for m in discover(kb, q).matches}
        # OOM and MOM do not describe client state
        assert scores["OOM"] == scores["MOM"] == 1
        assert scores["ABM"] == 0

    def test_conflicting_required_and_preferred(self):
        with pytest.raises(QueryError):
            PreferenceQuery({"scalability": "high"}, {"scalability": ("limited", 1)})

    def test_non_positive_weight(self):
        with pytest.raises(QueryError):
            PreferenceQuery({}, {"scalability": ("high", 0)})

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_hard_constraint_soundness(self, kb, seed):
        rng = random.Random(seed)
        required = random_features(rng, keys=vocabulary.BOOLEAN_KEYS)
        result = discover(kb, PreferenceQuery(required), INDIVIDUALS)
        expected = sorted(
            t for t, checked in ORACLE_CHECKS.items()
            if all((k in checked) == v for k, v in required.items())
        )
        assert names(result) == expected
        for m in result.matches:
            for k, v in required.items():
                assert feature_match(k, v, kb.matrix[m.entity][k]) == 1

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 50))
    def test_weight_scaling(self, kb, seed, factor):
        rng = random.Random(seed)
        prefs = {k: (v, Fraction(rng.randint(1, 5))) for k, v in random_features(rng).items()}
        scaled = {k: (v, w * factor) for k, (v, w) in prefs.items()}
        a = discover(kb, PreferenceQuery({}, prefs))
        b = discover(kb, PreferenceQuery({}, scaled))
        assert names(a) == names(b)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_agrees_with_classifier_scoring(self, kb, seed):
        from mwo.classifier import ServiceDescription, score

        rng = random.Random(seed)
        required = random_features(rng, keys=[f.key for f in vocabulary.FEATURES if f.kind is not vocabulary.BOOLEAN])
        try:
            result = discover(kb, PreferenceQuery(required))
        except UnsatisfiableRequired:
            return
        service = ServiceDescription("q", required)
        perfect = sorted(
            t for t, p in kb.profiles.items()
            if score(service, p) == (1, len(required))
        )
        assert names(result) == perfect


class TestUnsatisfiable:
    def test_key_absent_from_every_candidate(self, kb):
        # only WBM describes the boolean keys among the type profiles
        reduced = dataclasses.replace(kb, profiles={t: p for t, p in kb.profiles.items() if t != "WBM"})
        with pytest.raises(UnsatisfiableRequired) as err:
            discover(reduced, PreferenceQuery({"client_state": "blocked", "make_storage": True}), TYPES)
        assert err.value.keys == ["make_storage"]

    def test_seed_covers_every_key(self, kb):
        for f in vocabulary.FEATURES:
            value = f.values[0] if f.values else True
            if f.kind is vocabulary.SET:
                value = frozenset({value})
            discover(kb, PreferenceQuery({f.key: value}), TYPES)


class TestKnownTechnologies:
    def test_oom(self, kb):
        assert known_technologies(kb, "OOM") == ["CORBA", "DCOM", "EJB", "RMI"]

    def test_tpm(self, kb):
        assert known_technologies(kb, "TPM") == []

    def test_mom(self, kb):
        assert known_technologies(kb, "MOM") == ["MOM"]

    def test_unknown(self, kb):
        with pytest.raises(UnknownClass):
            known_technologies(kb, "Nope")
        with pytest.raises(UnknownClass):
            known_technologies(kb, "Functions")
