"""Propositional formulas: immutable AST nodes, printing and evaluation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

ATOM_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"not", "true", "false"})


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not ATOM_PATTERN.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name: {self.name!r}")


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]

    def __init__(self, *args: "Formula") -> None:
        if len(args) < 2:
            raise ValueError("And needs at least two operands")
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]

    def __init__(self, *args: "Formula") -> None:
        if len(args) < 2:
            raise ValueError("Or needs at least two operands")
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Const, Not, And, Or, Implies, Iff]
Assignment = Mapping[str, bool]


class UnassignedAtomError(KeyError):
    pass


# binding strength, higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Const: 6}
_SYMBOL = {And: " & ", Or: " | ", Implies: " -> ", Iff: " <-> "}


def atoms(f: Formula) -> frozenset[str]:
    """Names of all atoms occurring in ``f``."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.extend((g.left, g.right))
    return frozenset(out)


def atoms_of(fs: Iterable[Formula]) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for f in fs:
        out |= atoms(f)
    return out


def _wrap(child: Formula, parent_prec: int, allow_equal: bool) -> str:
    text = to_text(child)
    p = _PREC[type(child)]
    if p < parent_prec or (p == parent_prec and not allow_equal):
        return f"({text})"
    return text


def to_text(f: Formula) -> str:
    """Render ``f`` in the formula grammar, with the fewest parentheses that
    still parse back to the same tree."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, _PREC[Not], allow_equal=True)
    prec = _PREC[type(f)]
    if isinstance(f, (And, Or)):
        return _SYMBOL[type(f)].join(_wrap(a, prec, allow_equal=False) for a in f.args)
    if isinstance(f, Implies):
        # right-associative: only the right operand may be a bare implication
        return (
            _wrap(f.left, prec, allow_equal=False)
            + " -> "
            + _wrap(f.right, prec, allow_equal=True)
        )
    if isinstance(f, Iff):
        return _wrap(f.left, prec, False) + " <-> " + _wrap(f.right, prec, False)
    raise TypeError(f"not a formula: {f!r}")


def evaluate(f: Formula, v: Assignment) -> bool:
    """Truth-functional value of ``f`` under ``v`` (atom name -> bool).

    Raises UnassignedAtomError if an atom of ``f`` is missing from ``v``.
    """
    if isinstance(f, Atom):
        try:
            return bool(v[f.name])
        except KeyError:
            raise UnassignedAtomError(f.name) from None
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, v)
    if isinstance(f, And):
        return all(evaluate(a, v) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, v) for a in f.args)
    if isinstance(f, Implies):
        return (not evaluate(f.left, v)) or evaluate(f.right, v)
    if isinstance(f, Iff):
        return evaluate(f.left, v) == evaluate(f.right, v)
    raise TypeError(f"not a formula: {f!r}")


def dedupe(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    """Drop structural duplicates, keeping first-occurrence order."""
    return tuple(dict.fromkeys(fs))
