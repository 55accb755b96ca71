"""The Requirements Contract Network and its enactment simulator.

Events are linked by "is necessary for": an event may fire only once every
event linking into it has fired.  Links marked ``on_pass`` additionally need
the validation verdict to be ``pass``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cache
from typing import Iterable, Optional, Sequence

from .roles import Obligation, Right, Role, Verdict

KINDS = ("expectation", "accept", "exercise", "discharge", "produce", "outcome")

E_R, E_P, E_V = "E_R", "E_P", "E_V"
ACCEPT_RTR = "Accept_RtR"
ACCEPT_RTRS = "Accept_RtRS"
ACCEPT_RTRV = "Accept_RtRV"
ACCEPT_OTR = "Accept_OtR"
ACCEPT_OTV = "Accept_OtV"
ACCEPT_OTRS = "Accept_OtRS"
ACCEPT_OTRV = "Accept_OtRV"
EXERCISE_RTR_INITIAL = "Exercise_RtR_initial"
EXERCISE_RTR_FULL = "Exercise_RtR_full"
EXERCISE_RTRS = "Exercise_RtRS"
EXERCISE_RTRV = "Exercise_RtRV"
PRODUCE_REQUESTER_SETS = "Produce_KR_RR"
PRODUCE_MAKER_OUTPUTS = "Produce_KP_RP_SP_PP"
DISCHARGE_OTR = "Discharge_OtR"
DISCHARGE_OTV = "Discharge_OtV"
V_PR = "V_PR"  # Requester experiences value from the product
V_A_OTR = "V_A_OtR"  # Maker's value for having satisfied requirements
V_A_OTV = "V_A_OtV"  # Evaluator's value for having validated

OUTCOMES = (V_PR, V_A_OTR, V_A_OTV)


class EnactmentError(ValueError):
    pass


@dataclass(frozen=True)
class EventNode:
    id: str
    kind: str
    subject: str
    role: Role
    phase: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == "expectation":
            return f"Expectation({self.role.value})"
        inner = self.subject if self.phase is None else f"{self.subject}, {self.phase}"
        return f"{self.kind.capitalize()}({inner})"


@dataclass(frozen=True)
class Link:
    source: str
    target: str
    on_pass: bool = False


@dataclass(frozen=True)
class Network:
    events: tuple[EventNode, ...]
    links: tuple[Link, ...]
    # event whose firing carries the pass/fail verdict, and the retry target
    validation_event: str = DISCHARGE_OTV
    retry_event: str = EXERCISE_RTR_FULL
    _incoming: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        incoming: dict[str, list[Link]] = {e.id: [] for e in self.events}
        for link in self.links:
            incoming.setdefault(link.target, []).append(link)
        object.__setattr__(self, "_incoming", incoming)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.events)

    def event(self, event_id: str) -> EventNode:
        for e in self.events:
            if e.id == event_id:
                return e
        raise KeyError(event_id)

    def incoming(self, event_id: str) -> list[Link]:
        return self._incoming.get(event_id, [])

    def sources(self) -> frozenset[str]:
        return frozenset(i for i in self.ids if not self.incoming(i))

    def descendants(self, event_id: str) -> frozenset[str]:
        """``event_id`` together with everything reachable from it."""
        succ: dict[str, list[str]] = {}
        for link in self.links:
            succ.setdefault(link.source, []).append(link.target)
        seen = {event_id}
        stack = [event_id]
        while stack:
            for t in succ.get(stack.pop(), ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


def _ev(id, kind, subject, role, phase=None):
    return EventNode(id, kind, subject, role, phase)


@cache
def canonical_network() -> Network:
    """The fixed three-role network: expectations, acceptances of the seven
    contract clauses, the two-phase exercise of the right to request,
    discharges, artifact productions and the three value outcomes."""
    Q, M, V = Role.REQUESTER, Role.MAKER, Role.EVALUATOR
    events = (
        _ev(E_R, "expectation", "E^R", Q),
        _ev(E_P, "expectation", "E^P", M),
        _ev(E_V, "expectation", "E^V", V),
        _ev(ACCEPT_OTRS, "accept", Obligation.OtRS.value, Q),
        _ev(ACCEPT_OTRV, "accept", Obligation.OtRV.value, Q),
        _ev(ACCEPT_RTRS, "accept", Right.RtRS.value, M),
        _ev(ACCEPT_RTRV, "accept", Right.RtRV.value, V),
        _ev(EXERCISE_RTR_INITIAL, "exercise", Right.RtR.value, Q, "initial"),
        _ev(ACCEPT_OTR, "accept", Obligation.OtR.value, M),
        _ev(ACCEPT_OTV, "accept", Obligation.OtV.value, V),
        _ev(ACCEPT_RTR, "accept", Right.RtR.value, Q),
        _ev(EXERCISE_RTR_FULL, "exercise", Right.RtR.value, Q, "full"),
        _ev(PRODUCE_REQUESTER_SETS, "produce", "K^R,R^R", Q),
        _ev(DISCHARGE_OTR, "discharge", Obligation.OtR.value, M),
        _ev(PRODUCE_MAKER_OUTPUTS, "produce", "K^P,R^P,S^P,P^P", M),
        _ev(DISCHARGE_OTV, "discharge", Obligation.OtV.value, V),
        _ev(EXERCISE_RTRV, "exercise", Right.RtRV.value, V),
        _ev(EXERCISE_RTRS, "exercise", Right.RtRS.value, M),
        _ev(V_PR, "outcome", "V(P^R)", Q),
        _ev(V_A_OTR, "outcome", "V(A(OtR))", M),
        _ev(V_A_OTV, "outcome", "V(A(OtV))", V),
    )
    edges = [
        (E_R, EXERCISE_RTR_INITIAL),
        (EXERCISE_RTR_INITIAL, ACCEPT_OTR),
        (EXERCISE_RTR_INITIAL, ACCEPT_OTV),
        (E_P, ACCEPT_OTR),
        (E_V, ACCEPT_OTV),
        (ACCEPT_OTRS, ACCEPT_RTRS),
        (ACCEPT_RTRS, ACCEPT_OTR),
        (ACCEPT_OTRV, ACCEPT_RTRV),
        (ACCEPT_RTRV, ACCEPT_OTV),
        # accepting the right to request needs E^R and both obligations taken
        (E_R, ACCEPT_RTR),
        (ACCEPT_OTR, ACCEPT_RTR),
        (ACCEPT_OTV, ACCEPT_RTR),
        (ACCEPT_RTR, EXERCISE_RTR_FULL),
        (ACCEPT_OTR, EXERCISE_RTR_FULL),
        (ACCEPT_OTV, EXERCISE_RTR_FULL),
        (EXERCISE_RTR_FULL, PRODUCE_REQUESTER_SETS),
        (PRODUCE_REQUESTER_SETS, DISCHARGE_OTR),
        (DISCHARGE_OTR, PRODUCE_MAKER_OUTPUTS),
        (PRODUCE_MAKER_OUTPUTS, DISCHARGE_OTV),
        (DISCHARGE_OTV, EXERCISE_RTRV),
        (EXERCISE_RTRV, V_A_OTV),
    ]
    links = [Link(s, t) for s, t in edges]
    links += [
        Link(DISCHARGE_OTV, V_PR, on_pass=True),
        Link(DISCHARGE_OTV, EXERCISE_RTRS, on_pass=True),
        Link(EXERCISE_RTRS, V_A_OTR),
    ]
    return Network(events, tuple(links))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    events: tuple[str, ...] = ()


def _strongly_connected(nodes: Sequence[str], links: Iterable[Link]) -> list[list[str]]:
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    pred: dict[str, list[str]] = {n: [] for n in nodes}
    for link in links:
        succ[link.source].append(link.target)
        pred[link.target].append(link.source)

    order: list[str] = []
    seen: set[str] = set()
    for root in nodes:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(succ[root]))]
        while stack:
            node, it = stack[-1]
            nxt = next((t for t in it if t not in seen), None)
            if nxt is None:
                stack.pop()
                order.append(node)
            else:
                seen.add(nxt)
                stack.append((nxt, iter(succ[nxt])))

    comps: list[list[str]] = []
    assigned: set[str] = set()
    for root in reversed(order):
        if root in assigned:
            continue
        comp, stack = [], [root]
        assigned.add(root)
        while stack:
            n = stack.pop()
            comp.append(n)
            for p in pred[n]:
                if p not in assigned:
                    assigned.add(p)
                    stack.append(p)
        comps.append(comp)
    return comps


def validate_network(n: Network) -> list[Diagnostic]:
    """Structural problems with ``n``; an empty list means the network is
    well formed (unique ids, no dangling or self links, acyclic, every event
    reachable from a source-less event)."""
    out: list[Diagnostic] = []
    counts: dict[str, int] = {}
    for e in n.events:
        counts[e.id] = counts.get(e.id, 0) + 1
    for eid, k in counts.items():
        if k > 1:
            out.append(Diagnostic("duplicate-id", f"event id {eid!r} used {k} times", (eid,)))

    known = set(counts)
    good_links = []
    for link in n.links:
        missing = [x for x in (link.source, link.target) if x not in known]
        if missing:
            out.append(
                Diagnostic(
                    "dangling-link",
                    f"link {link.source} -> {link.target} refers to unknown event(s) "
                    + ", ".join(missing),
                    tuple(missing),
                )
            )
        elif link.source == link.target:
            out.append(Diagnostic("self-loop", f"event {link.source!r} links to itself", (link.source,)))
        else:
            good_links.append(link)

    nodes = list(counts)
    for comp in _strongly_connected(nodes, good_links):
        if len(comp) > 1:
            members = tuple(sorted(comp))
            out.append(Diagnostic("cycle", "cycle among " + ", ".join(members), members))

    has_pred = {link.target for link in good_links}
    reach = {x for x in nodes if x not in has_pred}
    stack = list(reach)
    succ: dict[str, list[str]] = {}
    for link in good_links:
        succ.setdefault(link.source, []).append(link.target)
    while stack:
        for t in succ.get(stack.pop(), ()):
            if t not in reach:
                reach.add(t)
                stack.append(t)
    unreachable = tuple(x for x in nodes if x not in reach)
    if unreachable:
        out.append(
            Diagnostic(
                "unreachable",
                "not reachable from any source-less event: " + ", ".join(unreachable),
                unreachable,
            )
        )

    if n.validation_event not in known:
        out.append(Diagnostic("no-validation-event", f"validation event {n.validation_event!r} missing"))
    if n.retry_event not in known:
        out.append(Diagnostic("no-retry-event", f"retry event {n.retry_event!r} missing"))
    for link in good_links:
        if link.on_pass and link.source != n.validation_event:
            out.append(
                Diagnostic(
                    "misplaced-verdict-link",
                    f"pass-gated link {link.source} -> {link.target} does not start at the validation event",
                    (link.source,),
                )
            )
    return out


@dataclass(frozen=True)
class EnactmentState:
    fired: frozenset[str] = frozenset()
    verdict: Optional[Verdict] = None
    retry_count: int = 0


@dataclass(frozen=True)
class RetryPolicy:
    enabled: bool = True
    max_retries: int = 3

    @classmethod
    def from_cap(cls, cap: int) -> "RetryPolicy":
        """``cap`` retries allowed; 0 switches retry off."""
        if cap < 0:
            raise ValueError("retry cap must be nonnegative")
        return cls(enabled=cap > 0, max_retries=cap)


DEFAULT_RETRY = RetryPolicy()


def _link_satisfied(link: Link, st: EnactmentState) -> bool:
    if link.source not in st.fired:
        return False
    return not link.on_pass or st.verdict is Verdict.PASS


def enabled_events(n: Network, st: EnactmentState) -> frozenset[str]:
    return frozenset(
        e
        for e in n.ids
        if e not in st.fired and all(_link_satisfied(l, st) for l in n.incoming(e))
    )


def fire(
    n: Network,
    st: EnactmentState,
    event: str,
    verdict: Optional[Verdict | str] = None,
    retry: RetryPolicy = DEFAULT_RETRY,
) -> EnactmentState:
    """Fire one enabled event and return the successor state.

    A verdict must accompany the validation event and nothing else.  A
    ``fail`` verdict with retries left rolls the enactment back to just
    before the full exercise of the right to request: that event and
    everything downstream of it are unfired, the verdict is cleared and the
    retry counter goes up.
    """
    if verdict is not None:
        verdict = Verdict(verdict)
    if event not in n.ids:
        raise EnactmentError(f"unknown event {event!r}")
    if event not in enabled_events(n, st):
        if event in st.fired:
            raise EnactmentError(f"event {event!r} has already fired")
        missing = sorted(l.source for l in n.incoming(event) if not _link_satisfied(l, st))
        raise EnactmentError(f"event {event!r} is not enabled; waiting on {', '.join(missing)}")
    if event == n.validation_event and verdict is None:
        raise EnactmentError(f"event {event!r} needs a pass/fail verdict")
    if event != n.validation_event and verdict is not None:
        raise EnactmentError(f"event {event!r} takes no verdict")

    fired = st.fired | {event}
    if verdict is Verdict.FAIL and retry.enabled and st.retry_count < retry.max_retries:
        rolled_back = fired - n.descendants(n.retry_event)
        return EnactmentState(rolled_back, None, st.retry_count + 1)
    return replace(st, fired=fired, verdict=verdict if verdict is not None else st.verdict)


@dataclass(frozen=True)
class Step:
    index: int
    event: str
    verdict: Optional[Verdict]
    state: EnactmentState


@dataclass(frozen=True)
class Violation:
    index: int
    event: str
    reason: str


@dataclass(frozen=True)
class Trace:
    steps: tuple[Step, ...]
    violation: Optional[Violation] = None

    @property
    def final_state(self) -> EnactmentState:
        return self.steps[-1].state if self.steps else EnactmentState()

    @property
    def ok(self) -> bool:
        return self.violation is None


def simulate(
    n: Network,
    schedule: Iterable[tuple[str, Optional[Verdict | str]]],
    retry: RetryPolicy = DEFAULT_RETRY,
    start: EnactmentState = EnactmentState(),
) -> Trace:
    """Fold ``fire`` over ``schedule``; stops at the first violation."""
    st = start
    steps: list[Step] = []
    for i, (event, verdict) in enumerate(schedule):
        try:
            st = fire(n, st, event, verdict, retry)
        except (EnactmentError, ValueError) as exc:
            return Trace(tuple(steps), Violation(i, event, str(exc)))
        steps.append(Step(i, event, Verdict(verdict) if verdict is not None else None, st))
    return Trace(tuple(steps))
