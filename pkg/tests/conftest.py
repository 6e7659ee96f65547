import pytest

from src.repairforge.constraints.dsl import parse_constraints
from src.repairforge.core.facts_parser import parse_facts
from src.repairforge.core.model import Fact
from src.repairforge.core.values import Symbol

EXAMPLE_FACTS = """\
employee(john,50,cs).
employee(john,100,cs).
"""

EXAMPLE_CONSTRAINTS = """\
:- employee(N,S1,D1), employee(N,S2,D2), S1 != S2.
:- employee(N,S1,D1), employee(N,S2,D2), D1 != D2.
"""


def employee(salary: int) -> Fact:
    return Fact("employee", (Symbol("john"), salary, Symbol("cs")))


@pytest.fixture
def example_db():
    """The two-employee database with conflicting salaries."""
    return parse_facts(EXAMPLE_FACTS)


@pytest.fixture
def example_constraints(example_db):
    return parse_constraints(EXAMPLE_CONSTRAINTS, example_db.schema)


@pytest.fixture
def example_files(tmp_path):
    """Writes the two-employee instance to disk; returns (facts, constraints)."""
    facts_path = tmp_path / "ex1.facts"
    constraints_path = tmp_path / "ex1.dc"
    facts_path.write_text(EXAMPLE_FACTS, encoding="utf-8")
    constraints_path.write_text(EXAMPLE_CONSTRAINTS, encoding="utf-8")
    return facts_path, constraints_path
