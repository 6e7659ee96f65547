"""Attribute values: integers, rationals and uninterpreted symbols."""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from src.repairforge.errors import ComparisonTypeError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_BARE_SYMBOL = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class Symbol:
    """An uninterpreted constant. Compares only for (in)equality."""
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("Symbol name must be non-empty")

    def __str__(self) -> str:
        if _BARE_SYMBOL.match(self.name):
            return self.name
        escaped = self.name.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"


Value = Union[int, Fraction, Symbol]


class ComparisonOp(str, Enum):
    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def is_order(self) -> bool:
        return self not in (ComparisonOp.EQ, ComparisonOp.NE)


def make_rational(numerator: int, denominator: int) -> Value:
    """Builds a normalized rational; whole numbers come back as plain ints."""
    if denominator <= 0:
        raise ValueError(f"Rational denominator must be positive: {denominator}")
    value = Fraction(numerator, denominator)
    return check_integer(value.numerator) if value.denominator == 1 else value


def check_integer(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise ValueError(f"Integer out of 64-bit range: {value}")
    return value


def is_numeric(value: Value) -> bool:
    return isinstance(value, (int, Fraction))


def compare_values(a: Value, b: Value, op: ComparisonOp | str) -> bool:
    """Evaluates `a op b`.

    Equality across kinds is false and inequality across kinds is true; order
    comparisons are only defined between numbers.
    """
    op = ComparisonOp(op)
    if op.is_order:
        if not (is_numeric(a) and is_numeric(b)):
            raise ComparisonTypeError(
                f"cannot order {a} {op.value} {b}: symbols are unordered"
            )
        if op is ComparisonOp.LT:
            return a < b  # type: ignore[operator]
        if op is ComparisonOp.LE:
            return a <= b  # type: ignore[operator]
        if op is ComparisonOp.GT:
            return a > b  # type: ignore[operator]
        return a >= b  # type: ignore[operator]

    # Symbol.__eq__ never matches a number, so this is kind-aware.
    same = a == b
    return same if op is ComparisonOp.EQ else not same


def value_sort_key(value: Value) -> tuple:
    """Symbols first (by name), then numbers by numeric value."""
    if isinstance(value, Symbol):
        return (0, value.name)
    return (1, value)


def render_value(value: Value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)
