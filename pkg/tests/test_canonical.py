import pytest
from hypothesis import given, settings

from src.repairforge.canonical.algorithm import (
    BuildMode,
    BuildOptions,
    CanonicalBuilder,
    algorithm1,
)
from src.repairforge.canonical.fast_paths import (
    canonical_one_fd,
    canonical_one_key,
    cliques,
    clusters,
)
from src.repairforge.canonical.worlds import canonical_from_worlds
from src.repairforge.constraints.dsl import dependency_denial, parse_constraints
from src.repairforge.constraints.model import ConstraintClass, ConstraintKind
from src.repairforge.core.facts_parser import parse_facts
from src.repairforge.core.model import Database, Fact
from src.repairforge.disjunctive.database import (
    DisjunctiveDatabase,
    minimal_models,
    size,
)
from src.repairforge.errors import (
    ClassificationError,
    LimitExceededError,
    NotAntichainError,
    PreconditionError,
)
from src.repairforge.families.generators import (
    FamilyKind,
    FamilySpec,
    generate,
    onefd_fact,
)
from src.repairforge.repairs.enumeration import (
    RepairKind,
    brute_force_repairs,
    s_repairs,
)
from tests.conftest import employee
from tests.strategies import fd_instances, instances, key_instances

KEY_R1 = ConstraintClass(ConstraintKind.KEY, "r", frozenset({1}), frozenset({2}))
FD_R12 = ConstraintClass(
    ConstraintKind.FUNCTIONAL_DEPENDENCY, "r", frozenset({1}), frozenset({2})
)


def fact_sets(dd: DisjunctiveDatabase) -> set[frozenset]:
    return set(dd.fact_sets())


class TestAlgorithm1:
    def test_employee_example(self, example_db, example_constraints):
        dd = algorithm1(example_db, example_constraints)
        assert fact_sets(dd) == {frozenset({employee(50), employee(100)})}

    def test_consistent_database_gives_singletons(self):
        db = parse_facts("p(1).\np(2).\np(3).")
        dd = algorithm1(db, parse_constraints(":- p(X), X > 5."))
        assert fact_sets(dd) == {frozenset({f}) for f in db.facts}

    def test_self_conflicting_fact_is_removed(self):
        db = parse_facts("p(a,a).")
        builder = CanonicalBuilder(db, parse_constraints(":- p(X,X)."))
        dd = builder.build()
        assert len(dd) == 0
        assert builder.stats.removed_self_conflicting == 1
        assert minimal_models(dd) == [frozenset()]

    def test_removed_facts_never_reappear(self):
        db = parse_facts("p(a,a).\np(a,b).\np(b,b).")
        dd = algorithm1(db, parse_constraints(":- p(X,X).\n:- p(X,Y), p(Y,Z), X != Z."))
        assert all(f.args[0] != f.args[1] for f in dd.facts())

    def test_three_fact_edge(self):
        db = parse_facts("p(1).\np(2).\np(3).")
        constraints = parse_constraints(":- p(X), p(Y), p(Z), X < Y, Y < Z.")
        a, b, c = sorted(db.facts)
        dd = algorithm1(db, constraints)
        pairs = {frozenset({a, b}), frozenset({a, c}), frozenset({b, c})}
        assert fact_sets(dd) == pairs

    @given(instances(max_facts=12))
    @settings(max_examples=200, deadline=None)
    def test_matches_the_repair_oracle(self, instance):
        """Minimal models are the repairs; the result is their transversal family."""
        db, constraints = instance
        dd = algorithm1(db, constraints)
        repairs = brute_force_repairs(db, constraints, RepairKind.S_REPAIR)
        assert set(minimal_models(dd)) == repairs.world_set()
        assert dd == canonical_from_worlds(repairs.worlds)
        sets = dd.fact_sets()
        assert all(not any(o < s for o in sets) for s in sets)

    @given(instances(max_facts=12))
    @settings(max_examples=200, deadline=None)
    def test_faithful_and_eager_agree(self, instance):
        db, constraints = instance
        faithful = CanonicalBuilder(
            db, constraints, BuildOptions(mode=BuildMode.FAITHFUL)
        )
        eager = CanonicalBuilder(
            db, constraints, BuildOptions(mode=BuildMode.EAGER_SUBSUMPTION)
        )
        assert faithful.build() == eager.build()
        assert faithful.stats.subsumed == 0
        assert faithful.stats.peak_size >= faithful.stats.final_disjunctions

    def test_stats_are_filled(self):
        db, constraints = generate(FamilySpec(family=FamilyKind.DN_TWO_KEYS, n=3))
        builder = CanonicalBuilder(db, constraints)
        dd = builder.build()
        stats = builder.stats
        assert stats.mode == "eager"
        assert stats.iterations >= 1
        assert stats.seeded > 0
        assert stats.generated > 0
        assert stats.final_disjunctions == len(dd)
        assert stats.final_size == size(dd) == 54

    def test_disjunction_limit(self):
        db, constraints = generate(FamilySpec(family=FamilyKind.DN_TWO_KEYS, n=4))
        with pytest.raises(LimitExceededError) as info:
            algorithm1(db, constraints, BuildOptions(max_disjunctions=10))
        assert info.value.limit_name == "max_disjunctions"
        assert info.value.reached > 10

    def test_width_limit(self):
        db, constraints = generate(FamilySpec(family=FamilyKind.DN_TWO_KEYS, n=3))
        with pytest.raises(LimitExceededError) as info:
            algorithm1(db, constraints, BuildOptions(max_disjunction_width=2))
        assert info.value.limit_name == "max_disjunction_width"

    def test_options_reject_non_positive_limits(self):
        with pytest.raises(ValueError):
            BuildOptions(max_disjunctions=0)


class TestOneKey:
    def test_distinct_keys_give_singletons(self):
        db = parse_facts("r(1,a).\nr(2,a).\nr(3,b).")
        singletons = {frozenset({f}) for f in db.facts}
        assert fact_sets(canonical_one_key(db, KEY_R1)) == singletons

    def test_two_cliques(self):
        db = parse_facts("r(1,a).\nr(1,b).\nr(2,c).")
        dd = canonical_one_key(db, KEY_R1)
        (a, b), (c,) = cliques(db, KEY_R1)
        assert fact_sets(dd) == {frozenset({a, b}), frozenset({c})}

    def test_other_relations_become_singletons(self):
        db = parse_facts("r(1,a).\nr(1,b).\nq(7).")
        dd = canonical_one_key(db, KEY_R1)
        assert frozenset({Fact("q", (7,))}) in fact_sets(dd)

    def test_rejects_an_fd(self):
        with pytest.raises(ClassificationError):
            canonical_one_key(parse_facts("r(1,2,3)."), FD_R12)
        with pytest.raises(ClassificationError):
            canonical_one_key(Database(), ConstraintClass.general())

    @given(key_instances())
    @settings(max_examples=60, deadline=None)
    def test_matches_algorithm1_and_size_law(self, db):
        constraints = [dependency_denial("dc1", "r", 2, {1}, 2)]
        fast = canonical_one_key(db, KEY_R1)
        assert fast == algorithm1(db, constraints)
        assert size(fast) == len(db)

    @given(key_instances())
    @settings(max_examples=100, deadline=None)
    def test_seeding_already_yields_the_result(self, db):
        """Under one key the edge rule never produces a union."""
        builder = CanonicalBuilder(db, [dependency_denial("dc1", "r", 2, {1}, 2)])
        assert builder.build() == canonical_one_key(db, KEY_R1)
        assert builder.stats.generated == 0
        assert builder.stats.iterations <= 1

    @given(key_instances())
    @settings(max_examples=60, deadline=None)
    def test_repairs_pick_one_fact_per_clique(self, db):
        constraints = [dependency_denial("dc1", "r", 2, {1}, 2)]
        groups = cliques(db, KEY_R1)
        for world in s_repairs(db, constraints):
            assert all(len(world & set(group)) == 1 for group in groups)


class TestOneFd:
    def test_onefd_family_at_two(self):
        db, _ = generate(FamilySpec(family=FamilyKind.ONE_FD_EXPONENTIAL, n=2))
        dd = canonical_one_fd(db, FD_R12)
        t1 = (onefd_fact(1, 1), onefd_fact(1, 2))
        t2 = (onefd_fact(2, 1), onefd_fact(2, 2))
        assert fact_sets(dd) == {frozenset({x, y}) for x in t1 for y in t2}
        assert size(dd) == 8

    def test_single_cluster_gives_singletons(self):
        db = parse_facts("r(1,1,1).\nr(1,1,2).\nr(1,1,3).")
        singletons = {frozenset({f}) for f in db.facts}
        assert fact_sets(canonical_one_fd(db, FD_R12)) == singletons

    def test_singleton_clusters_match_one_key(self):
        db = parse_facts("r(1,a).\nr(1,b).\nr(2,c).")
        assert canonical_one_fd(db, KEY_R1) == canonical_one_key(db, KEY_R1)

    def test_clusters_split_a_clique(self):
        db = parse_facts("r(1,1,1).\nr(1,1,2).\nr(1,2,1).")
        (clique,) = cliques(db, FD_R12)
        assert [len(g) for g in clusters(clique, FD_R12)] == [2, 1]

    def test_rejects_general_denials(self):
        with pytest.raises(ClassificationError):
            canonical_one_fd(Database(), ConstraintClass.general())

    def test_rejects_positions_outside_the_relation(self):
        fd = ConstraintClass(
            ConstraintKind.FUNCTIONAL_DEPENDENCY, "r", frozenset({1}), frozenset({4})
        )
        with pytest.raises(ClassificationError):
            canonical_one_fd(parse_facts("r(1,2,3)."), fd)

    def test_limit(self):
        db, _ = generate(FamilySpec(family=FamilyKind.ONE_FD_EXPONENTIAL, n=4))
        with pytest.raises(LimitExceededError):
            canonical_one_fd(db, FD_R12, max_disjunctions=15)

    @given(fd_instances())
    @settings(max_examples=60, deadline=None)
    def test_matches_algorithm1(self, db):
        constraints = [dependency_denial("dc1", "r", 3, {1}, 2)]
        assert canonical_one_fd(db, FD_R12) == algorithm1(db, constraints)

    @given(fd_instances())
    @settings(max_examples=60, deadline=None)
    def test_repairs_keep_one_cluster_per_clique(self, db):
        constraints = [dependency_denial("dc1", "r", 3, {1}, 2)]
        for world in s_repairs(db, constraints):
            for clique in cliques(db, FD_R12):
                whole = [set(g) for g in clusters(clique, FD_R12) if set(g) <= world]
                assert len(whole) == 1
                assert world & set(clique) == whole[0]


class TestCanonicalFromWorlds:
    def test_employee_repairs(self):
        worlds = [{employee(50)}, {employee(100)}]
        assert fact_sets(canonical_from_worlds(worlds)) == {
            frozenset({employee(50), employee(100)})
        }

    def test_empty_world(self):
        assert canonical_from_worlds([set()]) == DisjunctiveDatabase()

    def test_rejects_nested_worlds(self):
        a, b = Fact("p", (1,)), Fact("p", (2,))
        with pytest.raises(NotAntichainError):
            canonical_from_worlds([{a}, {a, b}])
        with pytest.raises(NotAntichainError):
            canonical_from_worlds([set(), {a}])

    def test_rejects_no_worlds(self):
        with pytest.raises(PreconditionError):
            canonical_from_worlds([])

    @given(instances(max_facts=10))
    @settings(max_examples=100, deadline=None)
    def test_minimal_models_round_trip(self, instance):
        db, constraints = instance
        worlds = brute_force_repairs(db, constraints, RepairKind.C_REPAIR)
        dd = canonical_from_worlds(worlds)
        assert set(minimal_models(dd)) == worlds.world_set()
