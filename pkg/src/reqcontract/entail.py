"""Entailment by refutation and the Default Requirements Problem check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formula import Formula, Not, atoms_of, dedupe
from .sat import is_satisfiable

# Entailment only sees the formalised relationships between propositions.
CONTENT_CAVEAT = (
    "entailment checks only the stated logical relationships; it says nothing "
    "about what the propositions are about"
)


def _first_failure(premises, conclusions):
    premises, conclusions = dedupe(premises), dedupe(conclusions)
    for c in conclusions:
        sat, model = is_satisfiable(premises + (Not(c),))
        if sat:
            # cover every atom in play; extra atoms are unconstrained
            for name in sorted(atoms_of(conclusions) - model.keys()):
                model[name] = False
            return c, dict(sorted(model.items()))
    return None, None


def entails(
    premises: Iterable[Formula], conclusions: Iterable[Formula]
) -> tuple[bool, Optional[dict[str, bool]]]:
    """True iff every conclusion follows from the premises.

    On failure the countermodel assigns every atom of the premises and
    conclusions, satisfies all premises, and falsifies the first conclusion
    (in iteration order) that does not follow.
    """
    failed, model = _first_failure(premises, conclusions)
    return failed is None, model


@dataclass(frozen=True)
class RpInstance:
    """Domain knowledge ``k``, specification ``s``, requirements ``r``."""

    k: tuple[Formula, ...] = ()
    s: tuple[Formula, ...] = ()
    r: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        for name in ("k", "s", "r"):
            object.__setattr__(self, name, dedupe(getattr(self, name)))


@dataclass(frozen=True)
class RpVerdict:
    entails: bool
    consistent: bool
    # countermodel when entails is False, else a model of K and S when consistent
    witness: Optional[dict[str, bool]] = None
    failed_requirement: Optional[Formula] = None
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.entails and self.consistent


def check_default_rp(inst: RpInstance) -> RpVerdict:
    premises = dedupe(inst.k + inst.s)
    failed, counter = _first_failure(premises, inst.r)
    entailed = failed is None
    consistent, model = is_satisfiable(premises)

    notes = []
    if not inst.r:
        notes.append("requirement set is empty: entailment holds trivially")
    if not consistent:
        notes.append(
            "K and S are inconsistent: they entail every requirement vacuously"
        )
    witness = model if entailed else counter
    notes.append(CONTENT_CAVEAT)
    return RpVerdict(entailed, consistent, witness, failed, tuple(notes))
