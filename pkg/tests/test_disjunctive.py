import pytest
from hypothesis import assume, given, settings

from src.repairforge.core.model import Fact
from src.repairforge.disjunctive.database import (
    Disjunction,
    DisjunctiveDatabase,
    is_model,
    minimal_models,
    naive_minimal_models,
    parse_disjunctive,
    reduction,
    render_disjunctive,
    size,
    subsumes,
)
from src.repairforge.disjunctive.transversals import (
    minimal_transversals,
    minimum_transversal_size,
)
from src.repairforge.errors import EmptyEdgeError, FactsSyntaxError, LimitExceededError
from src.repairforge.families.generators import closed_form_dn
from src.repairforge.repairs.enumeration import RepairKind
from tests.conftest import employee
from tests.strategies import antichains, fact_set_families

A, B, C = (Fact("e", (i,)) for i in range(3))


def d(*facts: Fact) -> Disjunction:
    return Disjunction(frozenset(facts))


def brute_transversals(family: list[frozenset]) -> set[frozenset]:
    universe = sorted(set().union(*family)) if family else []
    hitting = []
    for mask in range(1 << len(universe)):
        chosen = frozenset(x for i, x in enumerate(universe) if mask >> i & 1)
        if all(chosen & s for s in family):
            hitting.append(chosen)
    return {h for h in hitting if not any(o < h for o in hitting)}


EXAMPLE_DD = DisjunctiveDatabase.of([{employee(50), employee(100)}])


class TestSubsumption:
    def test_proper_subset_subsumes(self):
        assert subsumes(d(A), d(A, B))

    def test_equal_sets_do_not_subsume(self):
        assert not subsumes(d(A, B), d(A, B))

    def test_incomparable_sets(self):
        assert not subsumes(d(A, C), d(A, B))

    def test_disjunction_needs_a_fact(self):
        with pytest.raises(ValueError):
            Disjunction(frozenset())

    def test_equal_fact_sets_are_one_disjunction(self):
        dd = DisjunctiveDatabase.of([[A, B], [B, A]])
        assert len(dd) == 1


class TestReduction:
    def test_drops_subsumed(self):
        dd = DisjunctiveDatabase.of([{A}, {A, B}])
        assert reduction(dd) == DisjunctiveDatabase.of([{A}])

    def test_antichain_is_a_fixpoint(self):
        dd = DisjunctiveDatabase.of([{A, B}, {B, C}])
        assert reduction(dd) == dd

    @given(fact_set_families())
    @settings(max_examples=150, deadline=None)
    def test_preserves_minimal_models(self, family):
        dd = DisjunctiveDatabase.of(family)
        reduced = reduction(dd)
        sets = reduced.fact_sets()
        assert all(not any(o < s for o in sets) for s in sets)
        assert naive_minimal_models(reduced) == naive_minimal_models(dd)
        assert size(reduced) <= size(dd)


class TestModels:
    def test_union_of_all_facts_is_a_model(self):
        dd = DisjunctiveDatabase.of([{A, B}, {C}])
        assert is_model(dd.facts(), dd)

    def test_empty_set_is_not_a_model(self):
        assert not is_model(set(), DisjunctiveDatabase.of([{A}]))

    def test_one_employee_satisfies_the_example(self):
        assert is_model({employee(50)}, EXAMPLE_DD)

    def test_minimal_models_of_one_disjunction(self):
        assert minimal_models(DisjunctiveDatabase.of([{A, B}])) == [
            frozenset({A}),
            frozenset({B}),
        ]

    def test_empty_database_has_the_empty_model(self):
        assert minimal_models(DisjunctiveDatabase()) == [frozenset()]

    def test_example_models_are_the_two_repairs(self):
        assert set(minimal_models(EXAMPLE_DD)) == {
            frozenset({employee(50)}),
            frozenset({employee(100)}),
        }

    def test_fact_limit(self):
        dd = DisjunctiveDatabase.of([{Fact("e", (i,))} for i in range(5)])
        with pytest.raises(LimitExceededError) as info:
            minimal_models(dd, max_facts=4)
        assert info.value.limit_name == "max_facts"
        assert info.value.reached == 5

    def test_model_limit(self):
        dd = DisjunctiveDatabase.of([{A, B}, {C, Fact("e", (3,))}])
        with pytest.raises(LimitExceededError) as info:
            minimal_models(dd, max_models=3)
        assert info.value.limit_name == "max_worlds"

    @given(fact_set_families())
    @settings(max_examples=150, deadline=None)
    def test_models_are_minimal_and_match_the_naive_sweep(self, family):
        dd = DisjunctiveDatabase.of(family)
        models = minimal_models(dd)
        assert models == naive_minimal_models(dd)
        assert minimal_models(dd, naive=True) == models
        for m in models:
            assert is_model(m, dd)
            assert all(not is_model(m - {t}, dd) for t in m)


class TestTransversals:
    def test_two_singletons(self):
        assert minimal_transversals([{A}, {B}]) == [frozenset({A, B})]

    def test_one_pair(self):
        assert minimal_transversals([{A, B}]) == [frozenset({A}), frozenset({B})]

    def test_empty_family(self):
        assert minimal_transversals([]) == [frozenset()]

    def test_empty_member_is_rejected(self):
        with pytest.raises(EmptyEdgeError):
            minimal_transversals([frozenset()])
        with pytest.raises(EmptyEdgeError):
            minimal_transversals([{A}, frozenset()])

    @given(fact_set_families())
    @settings(max_examples=200, deadline=None)
    def test_matches_subset_enumeration(self, family):
        assert set(minimal_transversals(family)) == brute_transversals(family)

    @given(antichains())
    @settings(max_examples=150, deadline=None)
    def test_duality_on_antichains(self, family):
        assume(family)
        assert set(minimal_transversals(minimal_transversals(family))) == set(family)

    @given(fact_set_families())
    @settings(max_examples=150, deadline=None)
    def test_minimum_size(self, family):
        expected = min((len(t) for t in brute_transversals(family)), default=0)
        assert minimum_transversal_size(family) == expected


class TestSize:
    def test_empty(self):
        assert size(DisjunctiveDatabase()) == 0

    def test_example(self):
        assert size(EXAMPLE_DD) == 2

    def test_two_keys_at_three(self):
        assert size(closed_form_dn(3, RepairKind.S_REPAIR)) == 54


class TestTextFormat:
    def test_rendering(self):
        assert render_disjunctive(EXAMPLE_DD) == (
            "employee(john,50,cs) v employee(john,100,cs).\n"
        )

    def test_parse_reads_rendering(self):
        dd = closed_form_dn(2, RepairKind.S_REPAIR)
        assert parse_disjunctive(render_disjunctive(dd)) == dd

    def test_relation_named_v(self):
        dd = parse_disjunctive("v(1) v v(2).\nw(3).")
        expected = [{Fact("v", (1,)), Fact("v", (2,))}, {Fact("w", (3,))}]
        assert dd == DisjunctiveDatabase.of(expected)

    def test_syntax_error(self):
        with pytest.raises(FactsSyntaxError):
            parse_disjunctive("p(1) v .")
