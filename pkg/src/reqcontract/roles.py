"""Roles and contract clause kinds shared across modules."""

from enum import Enum


class Role(str, Enum):
    REQUESTER = "requester"
    MAKER = "maker"
    EVALUATOR = "evaluator"


class Right(str, Enum):
    RtR = "RtR"  # right to request (give propositions the role of requirement)
    RtRS = "RtRS"  # right to request remuneration for satisfying requirements
    RtRV = "RtRV"  # right to request remuneration for validating


class Obligation(str, Enum):
    OtR = "OtR"  # satisfy requirements
    OtV = "OtV"  # validate whether the product satisfies requirements
    OtRS = "OtRS"  # remunerate satisfaction
    OtRV = "OtRV"  # remunerate validation


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


ALL_RIGHTS = frozenset(Right)
ALL_OBLIGATIONS = frozenset(Obligation)
