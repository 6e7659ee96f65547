import io
from fractions import Fraction

import pytest
from hypothesis import given, settings

from src.repairforge.core.facts_parser import parse_facts, serialize_facts
from src.repairforge.core.model import Database, Fact, sort_fact_sets
from src.repairforge.core.values import (
    ComparisonOp,
    Symbol,
    compare_values,
    make_rational,
    render_value,
)
from src.repairforge.errors import (
    ArityMismatchError,
    ComparisonTypeError,
    FactsSyntaxError,
)
from tests.conftest import employee
from tests.strategies import databases, facts


class TestValues:
    def test_inequality_of_salaries(self):
        assert compare_values(50, 100, ComparisonOp.NE)

    @pytest.mark.parametrize("value", [0, -7, Fraction(3, 4), Symbol("x")])
    def test_equality_is_reflexive(self, value):
        assert compare_values(value, value, "=")

    def test_rational_order(self):
        assert compare_values(Fraction(1, 2), 1, ComparisonOp.LT)
        assert compare_values(2, Fraction(3, 2), ComparisonOp.GE)

    def test_cross_kind_equality(self):
        """A symbol never equals a number, and is always different from one."""
        assert not compare_values(Symbol("a"), 1, ComparisonOp.EQ)
        assert compare_values(Symbol("a"), 1, ComparisonOp.NE)

    def test_ordering_a_symbol_raises(self):
        with pytest.raises(ComparisonTypeError):
            compare_values(Symbol("a"), 1, ComparisonOp.LT)
        with pytest.raises(ComparisonTypeError):
            compare_values(Symbol("a"), Symbol("b"), ComparisonOp.GE)

    def test_rationals_are_normalized(self):
        assert make_rational(2, 4) == Fraction(1, 2)
        assert make_rational(4, 2) == 2
        assert isinstance(make_rational(4, 2), int)
        assert render_value(make_rational(-6, 4)) == "-3/2"
        with pytest.raises(ValueError):
            make_rational(1, 0)

    def test_symbol_rendering(self):
        assert str(Symbol("john")) == "john"
        assert str(Symbol("John Smith")) == "'John Smith'"
        assert str(Symbol("it's")) == "'it\\'s'"


class TestFactOrder:
    def test_symbols_sort_before_numbers(self):
        assert Fact("p", (Symbol("z"),)) < Fact("p", (0,))
        assert Fact("p", (Fraction(1, 2),)) < Fact("p", (1,))
        assert Fact("a", (5,)) < Fact("b", (0,))

    @given(facts(), facts(), facts())
    @settings(max_examples=200, deadline=None)
    def test_strict_total_order(self, a, b, c):
        """The fact order is total, antisymmetric and transitive."""
        assert (a < b) + (b < a) + (a == b) == 1
        if a < b and b < c:
            assert a < c

    def test_fact_sets_sort_by_size_then_facts(self):
        a, b, c = (Fact("p", (i,)) for i in range(3))
        ordered = sort_fact_sets([frozenset({b, c}), frozenset({c}), frozenset({a, c})])
        assert ordered == [frozenset({c}), frozenset({a, c}), frozenset({b, c})]


class TestParseFacts:
    def test_employee_relation(self):
        db = parse_facts("employee(john,50,cs).\nemployee(john,100,cs).")
        assert db.facts == {employee(50), employee(100)}
        assert dict(db.schema) == {"employee": 3}

    def test_empty_stream(self):
        db = parse_facts(io.StringIO(""))
        assert len(db) == 0
        assert dict(db.schema) == {}

    def test_duplicates_collapse(self):
        assert len(parse_facts("p(1,2).\np(1,2).")) == 1

    def test_values_of_every_kind(self):
        db = parse_facts("% comment\np(-3, 1/2, 'Big Co', x_1). % trailing\n")
        (fact,) = db.facts
        assert fact.args == (-3, Fraction(1, 2), Symbol("Big Co"), Symbol("x_1"))

    def test_syntax_error_has_position(self):
        with pytest.raises(FactsSyntaxError) as info:
            parse_facts("p(1,2).\np(1,,2).")
        assert info.value.line == 2
        assert info.value.column is not None

    def test_arity_mismatch_reports_first_arity(self):
        with pytest.raises(ArityMismatchError) as info:
            parse_facts("p(1,2).\np(1).")
        assert info.value.expected == 2
        assert info.value.found == 1
        assert info.value.line == 2

    def test_header_declares_arity(self):
        with pytest.raises(ArityMismatchError):
            parse_facts("#relation p/3.\np(1,2).")
        db = parse_facts("#relation q/1.\n")
        assert dict(db.schema) == {"q": 1}
        assert len(db) == 0

    def test_zero_denominator_is_a_syntax_error(self):
        with pytest.raises(FactsSyntaxError):
            parse_facts("p(1/0).")

    @given(databases())
    @settings(max_examples=100, deadline=None)
    def test_serialization_reparses_to_equal_database(self, db):
        reparsed = parse_facts(serialize_facts(db))
        assert reparsed.facts == db.facts
        assert dict(reparsed.schema) == dict(db.schema)


class TestDatabase:
    def test_of_checks_arity(self):
        with pytest.raises(ArityMismatchError):
            Database.of([Fact("p", (1,)), Fact("p", (1, 2))])

    def test_iteration_is_sorted(self):
        db = Database.of([Fact("p", (2,)), Fact("p", (1,))])
        assert list(db) == [Fact("p", (1,)), Fact("p", (2,))]
