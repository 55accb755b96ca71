"""Whether a proposition currently holds the role of requirement.

A proposition ``p`` is a requirement exactly when the contract declares all
seven clauses, every role is bound to a party, the right to request has been
fully exercised in the enactment, ``p`` was requested, and the contract is
still applicable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Mapping, Optional, Union

from .formula import Atom, Formula, atoms_of, dedupe
from .network import EXERCISE_RTR_FULL, EnactmentState
from .roles import Obligation, Right, Role


class ContractError(ValueError):
    pass


class Applicability(str, Enum):
    APPLICABLE = "applicable"
    TERMINATED = "terminated"


class Condition(str, Enum):
    C1_DEFINES = "C1_defines"
    C2_ENACTED = "C2_enacted"
    C3_EXERCISED = "C3_exercised"
    APPLICABILITY = "Applicability"


@dataclass(frozen=True)
class Party:
    id: str
    name: str = ""

    @property
    def display_name(self) -> str:
        return self.name or self.id


# (proposition name, contract) -> may this proposition be requested?
AcceptabilityPolicy = Callable[[str, "ContractDoc"], bool]


@dataclass(frozen=True)
class ContractDoc:
    rights: frozenset[Right] = frozenset()
    obligations: frozenset[Obligation] = frozenset()
    bindings: Mapping[Role, Party] = field(default_factory=dict)
    applicability: Applicability = Applicability.APPLICABLE
    requested: frozenset[str] = frozenset()
    k: tuple[Formula, ...] = ()
    r: tuple[Formula, ...] = ()
    # accepted and carried, never enforced
    request_deadlines: Mapping[str, str] = field(default_factory=dict)
    acceptability: Optional[AcceptabilityPolicy] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rights", frozenset(Right(x) for x in self.rights))
        object.__setattr__(self, "obligations", frozenset(Obligation(x) for x in self.obligations))
        object.__setattr__(self, "bindings", {Role(k): v for k, v in self.bindings.items()})
        object.__setattr__(self, "applicability", Applicability(self.applicability))
        object.__setattr__(self, "requested", frozenset(_name(p) for p in self.requested))
        object.__setattr__(self, "k", dedupe(self.k))
        object.__setattr__(self, "r", dedupe(self.r))

        stray = self.requested - atoms_of(self.r)
        if stray:
            raise ContractError(
                "requested propositions not mentioned in the requirement set: "
                + ", ".join(sorted(stray))
            )
        names: dict[str, str] = {}
        for party in self.bindings.values():
            if names.setdefault(party.id, party.name) != party.name:
                raise ContractError(f"party id {party.id!r} bound with different names")


def _name(p: Union[str, Atom]) -> str:
    return p.name if isinstance(p, Atom) else Atom(p).name


@dataclass(frozen=True)
class ConditionReport:
    passed: bool
    missing: tuple[str, ...] = ()
    detail: str = ""


def check_defines(c: ContractDoc) -> ConditionReport:
    missing = [r.value for r in Right if r not in c.rights]
    missing += [o.value for o in Obligation if o not in c.obligations]
    if missing:
        return ConditionReport(False, tuple(missing), "contract does not define " + ", ".join(missing))
    return ConditionReport(True, (), "all seven clauses defined")


def check_enacted(c: ContractDoc) -> ConditionReport:
    """Every role has a party; one party may fill several roles."""
    missing = tuple(r.value for r in Role if r not in c.bindings)
    if missing:
        return ConditionReport(False, missing, "no party bound to " + ", ".join(missing))
    return ConditionReport(True, (), "every role has a party")


@dataclass(frozen=True)
class RoleStatus:
    proposition: str
    granted: bool
    failed: tuple[Condition, ...]
    explanation: Mapping[Condition, str]


def requirement_status(p: Union[str, Atom], c: ContractDoc, st: EnactmentState) -> RoleStatus:
    name = _name(p)
    failed: list[Condition] = []
    why: dict[Condition, str] = {}

    defines = check_defines(c)
    why[Condition.C1_DEFINES] = defines.detail
    if not defines.passed:
        failed.append(Condition.C1_DEFINES)

    enacted = check_enacted(c)
    why[Condition.C2_ENACTED] = enacted.detail
    if not enacted.passed:
        failed.append(Condition.C2_ENACTED)

    exercised = EXERCISE_RTR_FULL in st.fired
    registered = name in c.requested
    problems = []
    if not exercised:
        problems.append("right to request not (fully) exercised")
    if not registered:
        problems.append(f"{name} was not requested")
    why[Condition.C3_EXERCISED] = "; ".join(problems) or f"{name} requested under an exercised right"
    if problems:
        failed.append(Condition.C3_EXERCISED)

    if c.applicability is Applicability.APPLICABLE:
        why[Condition.APPLICABILITY] = "contract applicable"
    else:
        why[Condition.APPLICABILITY] = "contract terminated"
        failed.append(Condition.APPLICABILITY)

    return RoleStatus(name, not failed, tuple(failed), why)


@dataclass(frozen=True)
class Terminate:
    pass


@dataclass(frozen=True)
class Request:
    proposition: str
    until: Optional[str] = None


@dataclass(frozen=True)
class Reinstate:
    pass


LifecycleEvent = Union[Terminate, Request, Reinstate]


def apply_event(c: ContractDoc, event: LifecycleEvent) -> ContractDoc:
    if isinstance(event, Reinstate):
        raise ContractError("termination is final; contracts cannot be reinstated")
    if isinstance(event, Terminate):
        return replace(c, applicability=Applicability.TERMINATED)
    if isinstance(event, Request):
        name = _name(event.proposition)
        if c.applicability is not Applicability.APPLICABLE:
            raise ContractError(f"cannot request {name}: contract is terminated")
        if name not in atoms_of(c.r):
            raise ContractError(f"cannot request {name}: not mentioned in the requirement set")
        if c.acceptability is not None and not c.acceptability(name, c):
            raise ContractError(f"{name} rejected by the contract's acceptability policy")
        deadlines = dict(c.request_deadlines)
        if event.until is not None:
            deadlines[name] = event.until
        return replace(c, requested=c.requested | {name}, request_deadlines=deadlines)
    raise TypeError(f"unknown lifecycle event {event!r}")
