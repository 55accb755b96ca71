"""Interest alignment between the contract's roles.

All arithmetic is on ``fractions.Fraction``; no comparison here uses a
tolerance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Optional, Union

from .roles import Role

RationalLike = Union[int, Fraction, str]

_RATIONAL_TEXT = re.compile(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*\Z")

# Documented, not computed: the behavioural premises the report relies on.
ASSUMPTIONS = (
    "each party enters only if its expected benefits exceed its expected costs",
    "each party acts to maximise the value it actually receives",
    "actual value stays close to expected value",
    "maximising expected value is taken as maximising future actual value",
)


class AlignmentError(ValueError):
    pass


def to_rational(x: RationalLike) -> Fraction:
    """Exact rational from an int, a Fraction, or an ``"n/d"``/``"n"``
    string.  Floats are refused."""
    if isinstance(x, bool):
        raise AlignmentError(f"not a rational: {x!r}")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL_TEXT.match(x):
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise AlignmentError(f"zero denominator in {x!r}") from None
    raise AlignmentError(f"not an exact rational: {x!r} (use an integer or an 'n/d' string)")


@dataclass(frozen=True)
class Expectation:
    """Expected benefit and expected cost of one role."""

    eb: Fraction
    ec: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "eb", to_rational(self.eb))
        object.__setattr__(self, "ec", to_rational(self.ec))
        if self.ec < 0:
            raise AlignmentError("expected cost must be nonnegative")


@dataclass(frozen=True)
class EconProfile:
    roles: Mapping[Role, Expectation]

    def __post_init__(self) -> None:
        roles = {Role(k): v for k, v in self.roles.items()}
        missing = [r.value for r in Role if r not in roles]
        if missing:
            raise AlignmentError("economic profile lacks " + ", ".join(missing))
        object.__setattr__(self, "roles", roles)

    def __getitem__(self, role: Role) -> Expectation:
        return self.roles[Role(role)]


def expected_value(p: EconProfile, role: Role) -> Fraction:
    x = p[role]
    return x.eb - x.ec


@dataclass(frozen=True)
class Viability:
    per_role: Mapping[Role, bool]

    @property
    def feasible(self) -> bool:
        """Contract entry is feasible only if every role is viable."""
        return all(self.per_role.values())


def viability(p: EconProfile) -> Viability:
    # strict: break-even gives no reason to enter
    return Viability({r: p[r].eb > p[r].ec for r in Role})


@dataclass(frozen=True)
class BudgetVerdict:
    passed: bool
    slack: Fraction


def budget_check(p: EconProfile) -> BudgetVerdict:
    """Maker and Evaluator benefits are paid out of the Requester's cost:
    ``EB(maker) + EB(evaluator) <= EC(requester)``."""
    slack = p[Role.REQUESTER].ec - p[Role.MAKER].eb - p[Role.EVALUATOR].eb
    return BudgetVerdict(slack >= 0, slack)


@dataclass(frozen=True)
class Delta:
    db: Fraction
    dc: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "db", to_rational(self.db))
        object.__setattr__(self, "dc", to_rational(self.dc))

    @property
    def dv(self) -> Fraction:
        return self.db - self.dc


class Situation(str, Enum):
    GAIN_DOMINANT = "GainDominant"  # ratio > 1
    COST_DOMINANT = "CostDominant"  # 0 <= ratio < 1
    BALANCED = "Balanced"  # ratio == 1
    NEGATIVE_RATIO = "NegativeRatio"  # ratio < 0


@dataclass(frozen=True)
class Marginal:
    situation: Situation
    ratio: Fraction
    note: str = ""


def marginal_situation(d: Delta) -> Marginal:
    """Classify the marginal benefit-to-cost ratio ``db/dc``."""
    if d.dc == 0:
        raise AlignmentError("marginal ratio undefined: change in expected cost is zero")
    ratio = d.db / d.dc
    if ratio > 1:
        return Marginal(Situation.GAIN_DOMINANT, ratio)
    if ratio == 1:
        return Marginal(Situation.BALANCED, ratio)
    if ratio < 0:
        cause = "benefit falls as cost rises" if d.db < 0 else "benefit rises as cost falls"
        return Marginal(Situation.NEGATIVE_RATIO, ratio, cause)
    if ratio == 0:
        return Marginal(Situation.COST_DOMINANT, ratio, "zero change in expected benefit")
    return Marginal(Situation.COST_DOMINANT, ratio)


class InterestLabel(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"
    STATIONARY = "Stationary"
    ON_AXIS_OR_DIAGONAL = "OnAxisOrDiagonal"


VALUE_INCREASING = frozenset({InterestLabel.A, InterestLabel.F, InterestLabel.G, InterestLabel.H})


@dataclass(frozen=True)
class InterestCase:
    label: InterestLabel
    dv: Fraction

    @property
    def value_increasing(self) -> bool:
        return self.dv > 0


def interest_case(d: Delta) -> InterestCase:
    """Place ``(dc, db)`` in one of the eight octants A..H.

    Octants go clockwise starting from A (cost and benefit both up, benefit
    more).  Points on an axis or on either diagonal ``|db| == |dc|`` get a
    boundary label instead of a case.
    """
    db, dc = d.db, d.dc
    if db == 0 and dc == 0:
        return InterestCase(InterestLabel.STATIONARY, d.dv)
    if db == 0 or dc == 0 or abs(db) == abs(dc):
        return InterestCase(InterestLabel.ON_AXIS_OR_DIAGONAL, d.dv)
    steep = abs(db) > abs(dc)
    if dc > 0 and db > 0:
        label = "A" if steep else "B"
    elif dc > 0:
        label = "D" if steep else "C"
    elif db < 0:
        label = "E" if steep else "F"
    else:
        label = "H" if steep else "G"
    return InterestCase(InterestLabel(label), d.dv)


@dataclass(frozen=True)
class ConflictReport:
    ratios: Mapping[Role, Fraction]
    coupled_requester_ratio: Optional[Fraction]
    conflict: bool
    explanation: str


def conflict_scan(deltas: Mapping[Role, Delta], coupled: bool = False) -> ConflictReport:
    """Flag the pattern where the Requester's marginal ratio is below one
    while Maker and Evaluator both gain from taking on more cost.

    With ``coupled`` the Requester's cost change is replaced by the change in
    Maker plus Evaluator benefit, since those benefits are what the
    Requester pays for.
    """
    deltas = {Role(k): v for k, v in deltas.items()}
    missing = [r.value for r in Role if r not in deltas]
    if missing:
        raise AlignmentError("conflict scan needs deltas for " + ", ".join(missing))
    for role, d in deltas.items():
        if d.dc == 0:
            raise AlignmentError(f"zero change in expected cost for {role.value}")
    ratios = {r: deltas[r].db / deltas[r].dc for r in Role}

    coupled_ratio = None
    requester_ratio = ratios[Role.REQUESTER]
    if coupled:
        paid = deltas[Role.MAKER].db + deltas[Role.EVALUATOR].db
        if paid == 0:
            raise AlignmentError("coupled ratio undefined: Maker and Evaluator benefit changes cancel")
        coupled_ratio = deltas[Role.REQUESTER].db / paid
        requester_ratio = coupled_ratio

    conflict = requester_ratio < 1 and ratios[Role.MAKER] > 1 and ratios[Role.EVALUATOR] > 1
    if conflict:
        why = (
            f"requester ratio {requester_ratio} < 1 while maker ({ratios[Role.MAKER]}) "
            f"and evaluator ({ratios[Role.EVALUATOR]}) ratios exceed 1: they gain from "
            "raising costs that the requester does not want to bear"
        )
    else:
        why = "no requester-versus-maker-and-evaluator conflict"
    return ConflictReport(ratios, coupled_ratio, conflict, why)
