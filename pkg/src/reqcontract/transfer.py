"""Imperfect transfer of assumption/requirement sets between roles."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from .entail import RpInstance, RpVerdict, check_default_rp
from .formula import Formula, to_text
from .roles import Role


class TransferError(ValueError):
    pass


def _fset(xs: Optional[Iterable[Formula]]) -> Optional[frozenset[Formula]]:
    return None if xs is None else frozenset(xs)


@dataclass(frozen=True)
class ArtifactSets:
    """One role's view: assumptions ``k``, requirements ``r`` and, for the
    Maker and Evaluator, a specification ``s`` and an opaque product id."""

    owner: Role
    k: frozenset[Formula] = frozenset()
    r: frozenset[Formula] = frozenset()
    s: Optional[frozenset[Formula]] = None
    product: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "owner", Role(self.owner))
        object.__setattr__(self, "k", frozenset(self.k))
        object.__setattr__(self, "r", frozenset(self.r))
        object.__setattr__(self, "s", _fset(self.s))
        if self.owner is Role.REQUESTER and (self.s is not None or self.product is not None):
            raise TransferError("the Requester's sets carry no specification or product")


@dataclass(frozen=True)
class TransferMap:
    drops: frozenset[Formula] = frozenset()
    substitutions: Mapping[Formula, Formula] = field(default_factory=dict)
    additions: frozenset[Formula] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "drops", frozenset(self.drops))
        object.__setattr__(self, "additions", frozenset(self.additions))
        object.__setattr__(self, "substitutions", dict(self.substitutions))
        if self.drops & self.additions:
            raise TransferError("a formula cannot be both dropped and added")
        if self.drops & self.substitutions.keys():
            raise TransferError("a dropped formula cannot also be substituted")

    def _map(self, xs: frozenset[Formula]) -> frozenset[Formula]:
        return frozenset(self.substitutions.get(x, x) for x in xs if x not in self.drops)


IDENTITY = TransferMap()


def apply_transfer(src: ArtifactSets, t: TransferMap, new_owner: Role) -> ArtifactSets:
    """The receiving role's interpretation of ``src``: drops removed,
    substitutions rewritten elementwise, additions filled into ``k``."""
    new_owner = Role(new_owner)
    s = None if src.s is None else t._map(src.s)
    product = src.product
    if new_owner is Role.REQUESTER:
        s, product = None, None
    return ArtifactSets(new_owner, t._map(src.k) | t.additions, t._map(src.r), s, product)


def divergence(a: ArtifactSets, b: ArtifactSets) -> int:
    """Size of the symmetric differences of ``k`` and ``r`` (and ``s`` when
    both sides have one)."""
    d = len(a.k ^ b.k) + len(a.r ^ b.r)
    if a.s is not None and b.s is not None:
        d += len(a.s ^ b.s)
    return d


def validate_as_evaluator(ev: ArtifactSets) -> RpVerdict:
    if ev.owner is not Role.EVALUATOR:
        raise TransferError(f"validation runs on the Evaluator's sets, not the {ev.owner.value}'s")
    if ev.s is None:
        raise TransferError("the Evaluator's sets have no specification to validate")
    return check_default_rp(RpInstance(_ordered(ev.k), _ordered(ev.s), _ordered(ev.r)))


def _ordered(xs: frozenset[Formula]) -> tuple[Formula, ...]:
    # deterministic order so witnesses do not depend on set hashing
    return tuple(sorted(xs, key=to_text))


def with_specification(a: ArtifactSets, s: Iterable[Formula], product: Optional[str] = None) -> ArtifactSets:
    return replace(a, s=frozenset(s), product=product if product is not None else a.product)
