import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from mwo.ontology import (
    CycleDetected,
    DuplicateName,
    Literal,
    Ontology,
    PropertyDecl,
    PropertyKind,
    UnknownClass,
    UnknownSuperclass,
    find_cycles,
)

from generators import random_dag, random_ontology
from oracles import closure


def codes(ont):
    return [v.code for v in ont.validate()]


def dag_ontology(n, edges):
    supers = {f"C{i}": set() for i in range(n)}
    for sub, sup in edges:
        supers[f"C{sub}"].add(f"C{sup}")
    return Ontology(classes=supers)


class TestAddClass:
    def test_root_class(self):
        ont = Ontology().add_class("Middleware")
        assert ont.classes == {"Middleware": frozenset()}

    def test_subclass(self):
        ont = Ontology().add_class("Middleware").add_class("MOM", {"Middleware"})
        assert ont.classes["MOM"] == {"Middleware"}
        assert ont.is_subclass_of("MOM", "Middleware")

    def test_two_cycle_rejected(self):
        ont = Ontology().add_class("Middleware").add_class("MOM", {"Middleware"})
        with pytest.raises(CycleDetected) as err:
            ont.add_class("Middleware", {"MOM"})
        assert err.value.path == ["Middleware", "MOM", "Middleware"]

    def test_self_loop_rejected(self):
        ont = Ontology().add_class("A")
        with pytest.raises(CycleDetected):
            ont.add_class("A", {"A"})

    def test_unknown_superclass(self):
        with pytest.raises(UnknownSuperclass):
            Ontology().add_class("MOM", {"Middleware"})

    def test_duplicate(self):
        ont = Ontology().add_class("A").add_class("B")
        with pytest.raises(DuplicateName):
            ont.add_class("A", {"B"})

    def test_original_is_untouched(self):
        base = Ontology().add_class("A")
        base.add_class("B", {"A"})
        assert set(base.classes) == {"A"}

    def test_multiple_inheritance(self):
        ont = Ontology().add_class("A").add_class("B").add_class("C", {"A", "B"})
        assert ont.is_subclass_of("C", "A") and ont.is_subclass_of("C", "B")

    def test_class_and_individual_may_share_a_name(self):
        ont = Ontology().add_class("MOM").add_individual("MOM", {"MOM"})
        assert ont.instances_of("MOM") == ["MOM"]
        assert ont.validate() == []


class TestSubsumption:
    def test_seed_examples(self, kb):
        ont = kb.ontology
        assert ont.is_subclass_of("MOM", "Middleware")
        assert ont.is_subclass_of("MOM", "MOM")

    def test_seed_matches_reachability_oracle(self, kb):
        ont = kb.ontology
        names = sorted(ont.classes)
        index = {c: i for i, c in enumerate(names)}
        edges = [(index[c], index[s]) for c in names for s in ont.classes[c]]
        reach = closure(len(names), edges)
        assert reach[index["Middleware"]][index["MOM"]] is False
        assert not ont.is_subclass_of("Middleware", "MOM")
        for a in names:
            for b in names:
                assert ont.is_subclass_of(a, b) == reach[index[a]][index[b]], (a, b)

    def test_unknown_class(self, kb):
        with pytest.raises(UnknownClass):
            kb.ontology.is_subclass_of("Nope", "Middleware")

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 25), st.integers(0, 2**32 - 1))
    def test_partial_order(self, n, seed):
        rng = random.Random(seed)
        ont = dag_ontology(n, random_dag(rng, n, density=0.2))
        names = sorted(ont.classes)
        sub = {(a, b): ont.is_subclass_of(a, b) for a in names for b in names}
        for a in names:
            assert sub[a, a]
            for b in names:
                if a != b and sub[a, b]:
                    assert not sub[b, a]
                for c in names:
                    if sub[a, b] and sub[b, c]:
                        assert sub[a, c]


class TestInstances:
    def test_connection_modes(self, kb):
        assert kb.ontology.instances_of("Connection_Mode_Value") == [
            "Asynchronous", "Negotiation", "Synchronous"
        ]

    def test_middleware_instances_are_the_technologies(self, kb):
        assert kb.ontology.instances_of("Middleware") == sorted(
            ["CORBA", "DCOM", "RMI", "EJB", "RPC", "MOM", "WS"]
        )

    def test_empty_class(self, kb):
        assert kb.ontology.instances_of("Functions") == []
        assert Ontology().add_class("X").instances_of("X") == []

    def test_unknown(self, kb):
        with pytest.raises(UnknownClass):
            kb.ontology.instances_of("Nope")

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_monotone_in_subsumption(self, seed):
        ont = random_ontology(random.Random(seed))
        for c in ont.classes:
            inst = set(ont.instances_of(c))
            for d in ont.classes:
                if ont.is_subclass_of(d, c):
                    assert set(ont.instances_of(d)) <= inst


class TestValidate:
    def test_seed_is_valid(self, kb):
        assert kb.ontology.validate() == []

    def test_range_mismatch(self):
        ont = Ontology(
            classes={"A": set()},
            individuals={"a": {"A"}},
            properties={"label": PropertyDecl("label", PropertyKind.DATATYPE, None, "string")},
        ).add_assertion("a", "label", Literal(3))
        assert codes(ont) == ["RangeMismatch"]

    def test_untyped_individual(self):
        ont = Ontology(individuals={"a": set()})
        assert codes(ont) == ["UntypedIndividual"]

    def test_unknown_superclass(self):
        assert codes(Ontology(classes={"A": {"B"}})) == ["UnknownSuperclass"]

    def test_cycle(self):
        ont = Ontology(classes={"A": {"B"}, "B": {"C"}, "C": {"A"}})
        violations = ont.validate()
        assert [v.code for v in violations] == ["CycleDetected"]
        assert "A -> B -> C -> A" in violations[0].message

    def test_domain_and_object_range(self):
        ont = Ontology(
            classes={"A": set(), "B": set()},
            individuals={"a": {"A"}, "b": {"B"}},
            properties={"p": PropertyDecl("p", PropertyKind.OBJECT, "B", "A")},
        ).add_assertion("a", "p", "b")
        assert codes(ont) == ["DomainMismatch", "RangeMismatch"]

    def test_inherited_domain_is_accepted(self):
        ont = Ontology(
            classes={"A": set(), "B": {"A"}},
            individuals={"b": {"B"}},
            properties={"p": PropertyDecl("p", PropertyKind.DATATYPE, "A", "integer")},
        ).add_assertion("b", "p", Literal(1))
        assert ont.validate() == []

    def test_kind_mismatches(self):
        ont = Ontology(
            classes={"A": set()},
            individuals={"a": {"A"}},
            properties={
                "o": PropertyDecl("o", PropertyKind.OBJECT),
                "d": PropertyDecl("d", PropertyKind.DATATYPE),
                "n": PropertyDecl("n", PropertyKind.ANNOTATION),
            },
        )
        ont = ont.add_assertion("a", "o", Literal("x")).add_assertion("a", "d", "a")
        ont = ont.add_annotation("A", "d", "text")
        assert codes(ont) == ["KindMismatch", "KindMismatch", "KindMismatch"]

    def test_bad_property_declarations(self):
        ont = Ontology(properties={
            "o": PropertyDecl("o", PropertyKind.OBJECT, None, "string"),
            "d": PropertyDecl("d", PropertyKind.DATATYPE, None, "Thing"),
            "n": PropertyDecl("n", PropertyKind.ANNOTATION, "Thing", None),
        })
        assert sorted(codes(ont)) == ["InvalidPropertyDecl", "InvalidPropertyDecl", "UnknownClass"]

    def test_invalid_name_and_clash(self):
        ont = Ontology(
            classes={"9bad": set(), "P": set()},
            properties={"P": PropertyDecl("P", PropertyKind.ANNOTATION)},
        )
        assert codes(ont) == ["InvalidName", "NameClash"]

    def test_unknown_type(self):
        assert codes(Ontology(individuals={"a": {"Ghost"}})) == ["UnknownType"]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_pure(self, seed):
        ont = random_ontology(random.Random(seed))
        # sprinkle a violation in half the cases
        if seed % 2:
            ont = Ontology(classes={**ont.classes, "Z": {"missing"}}, individuals=ont.individuals)
        assert ont.validate() == ont.validate()

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=30))
    def test_add_class_never_builds_a_cycle(self, steps):
        ont = Ontology()
        for a, b in steps:
            name, sup = f"K{a}", f"K{b}"
            for c in (name, sup):
                if c not in ont.classes:
                    ont = ont.add_class(c)
            try:
                ont = ont.add_class(name, {sup})
            except (CycleDetected, DuplicateName):
                pass
            assert "CycleDetected" not in codes(ont)


def test_find_cycles_on_dags_is_empty():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 20)
        ont = dag_ontology(n, random_dag(rng, n))
        assert find_cycles(ont.classes) == []


def test_concurrent_reads(kb):
    ont = kb.ontology
    expected = {c: ont.instances_of(c) for c in ont.classes}
    errors = []

    def worker():
        for c in sorted(ont.classes):
            if ont.instances_of(c) != expected[c]:
                errors.append(c)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
