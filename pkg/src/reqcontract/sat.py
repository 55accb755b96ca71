"""Satisfiability by Tseitin clausification and DPLL with unit propagation.

Literals are nonzero ints (DIMACS style).  Auxiliary variables introduced
by clausification never appear in returned models.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .formula import And, Atom, Const, Formula, Iff, Implies, Not, Or, atoms_of

Clause = tuple[int, ...]


class _Encoder:
    def __init__(self) -> None:
        self.var_of: dict[str, int] = {}
        self.n = 0
        self.clauses: list[Clause] = []
        self._memo: dict[Formula, int] = {}

    def fresh(self) -> int:
        self.n += 1
        return self.n

    def atom(self, name: str) -> int:
        if name not in self.var_of:
            self.var_of[name] = self.fresh()
        return self.var_of[name]

    def lit(self, f: Formula) -> int:
        """Literal equivalent to ``f`` under the emitted definitions."""
        if isinstance(f, Atom):
            return self.atom(f.name)
        if isinstance(f, Not):
            return -self.lit(f.arg)
        if f in self._memo:
            return self._memo[f]
        if isinstance(f, Const):
            x = self.fresh()
            self.clauses.append((x,) if f.value else (-x,))
        elif isinstance(f, And):
            kids = [self.lit(a) for a in f.args]
            x = self.fresh()
            for k in kids:
                self.clauses.append((-x, k))
            self.clauses.append((x, *(-k for k in kids)))
        elif isinstance(f, Or):
            kids = [self.lit(a) for a in f.args]
            x = self.fresh()
            for k in kids:
                self.clauses.append((x, -k))
            self.clauses.append((-x, *kids))
        elif isinstance(f, Implies):
            a, b = self.lit(f.left), self.lit(f.right)
            x = self.fresh()
            self.clauses += [(-x, -a, b), (x, a), (x, -b)]
        elif isinstance(f, Iff):
            a, b = self.lit(f.left), self.lit(f.right)
            x = self.fresh()
            self.clauses += [(-x, -a, b), (-x, a, -b), (x, a, b), (x, -a, -b)]
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[f] = x
        return x

    def assert_formula(self, f: Formula) -> None:
        # top-level conjunctions split into separate roots; saves aux vars
        if isinstance(f, And):
            for a in f.args:
                self.assert_formula(a)
        else:
            self.clauses.append((self.lit(f),))


def clausify(fs: Iterable[Formula]) -> tuple[list[Clause], dict[str, int], int]:
    """Equisatisfiable CNF for the conjunction of ``fs``.

    Returns (clauses, atom-name -> variable, number of variables).
    """
    enc = _Encoder()
    for f in fs:
        enc.assert_formula(f)
    return enc.clauses, enc.var_of, enc.n


def dpll(clauses: list[Clause], n_vars: int) -> Optional[dict[int, bool]]:
    """Complete DPLL search.  Returns a (possibly partial) satisfying
    assignment, or None when the clause set is unsatisfiable."""
    assign: dict[int, bool] = {}
    trail: list[int] = []
    watch: dict[int, list[Clause]] = {}
    for c in clauses:
        if not c:
            return None
        for lit in c:
            watch.setdefault(lit, []).append(c)

    def value(lit: int) -> Optional[bool]:
        v = assign.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def set_lit(lit: int) -> None:
        assign[abs(lit)] = lit > 0
        trail.append(abs(lit))

    def propagate(pending: list[int]) -> bool:
        # pending: literals just made true; inspect clauses containing their negation
        while pending:
            lit = pending.pop()
            for c in watch.get(-lit, ()):
                unassigned = None
                n_unassigned = 0
                sat = False
                for l in c:
                    val = value(l)
                    if val is True:
                        sat = True
                        break
                    if val is None:
                        n_unassigned += 1
                        unassigned = l
                if sat:
                    continue
                if n_unassigned == 0:
                    return False
                if n_unassigned == 1:
                    set_lit(unassigned)
                    pending.append(unassigned)
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            del assign[trail.pop()]

    units = []
    for c in clauses:
        if len(c) == 1:
            lit = c[0]
            val = value(lit)
            if val is False:
                return None
            if val is None:
                set_lit(lit)
                units.append(lit)
    if not propagate(units):
        return None

    def pick() -> Optional[int]:
        # first literal of the first clause not yet satisfied
        for c in clauses:
            if any(value(l) is True for l in c):
                continue
            for l in c:
                if value(l) is None:
                    return l
        return None

    def search() -> bool:
        lit = pick()
        if lit is None:
            return True
        for choice in (lit, -lit):
            mark = len(trail)
            set_lit(choice)
            if propagate([choice]) and search():
                return True
            undo(mark)
        return False

    return dict(assign) if search() else None


def is_satisfiable(fs: Iterable[Formula]) -> tuple[bool, Optional[dict[str, bool]]]:
    """Decide whether some assignment satisfies every formula in ``fs``.

    The model, when there is one, assigns every atom occurring in ``fs``
    (atoms the search left free are reported False).
    """
    fs = list(fs)
    clauses, var_of, n = clausify(fs)
    result = dpll(clauses, n)
    if result is None:
        return False, None
    names = sorted(atoms_of(fs))
    return True, {a: result.get(var_of[a], False) for a in names}
