"""Abstract syntax of function-free normal programs and basic satisfaction.

Ground terms are plain Python values: ``str`` for symbolic constants and
``int`` for integers.  Only variables get a dedicated class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Iterator, Union

from .errors import PapError


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[str, int, Var]


def is_ground_term(t: Term) -> bool:
    return not isinstance(t, Var)


def term_str(t: Term) -> str:
    return str(t)


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def variables(self) -> set[str]:
        return {a.name for a in self.args if isinstance(a, Var)}

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    positive: bool = True

    def is_ground(self) -> bool:
        return self.atom.is_ground()

    def variables(self) -> set[str]:
        return self.atom.variables()

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not {self.atom}"


@dataclass(frozen=True, slots=True)
class Sum:
    """Arithmetic expression ``left + right`` usable inside built-ins."""

    left: Term
    right: Term

    def variables(self) -> set[str]:
        return {t.name for t in (self.left, self.right) if isinstance(t, Var)}

    def __str__(self) -> str:
        return f"{self.left}+{self.right}"


Expr = Union[str, int, Var, Sum]

BUILTIN_OPS = ("=", "!=", "<", ">")


def expr_variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Sum):
        return e.variables()
    return set()


@dataclass(frozen=True, slots=True)
class Builtin:
    """Comparison ``left op right`` evaluated natively by the grounder."""

    op: str
    left: Expr
    right: Expr

    def variables(self) -> set[str]:
        return expr_variables(self.left) | expr_variables(self.right)

    def is_ground(self) -> bool:
        return not self.variables()

    def __str__(self) -> str:
        return f"{self.left}{self.op}{self.right}"


BodyElement = Union[Literal, Builtin]


def _body_str(body: Iterable[BodyElement]) -> str:
    return ", ".join(map(str, body))


@dataclass(frozen=True, slots=True)
class Rule:
    """A normal rule; ``head is None`` makes it a strong constraint."""

    head: Atom | None
    body: tuple = ()

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def literals(self) -> tuple[Literal, ...]:
        return tuple(b for b in self.body if isinstance(b, Literal))

    @property
    def positive_body(self) -> tuple[Atom, ...]:
        return tuple(b.atom for b in self.body if isinstance(b, Literal) and b.positive)

    @property
    def negative_body(self) -> tuple[Atom, ...]:
        return tuple(b.atom for b in self.body if isinstance(b, Literal) and not b.positive)

    @property
    def builtins(self) -> tuple[Builtin, ...]:
        return tuple(b for b in self.body if isinstance(b, Builtin))

    def atoms(self) -> Iterator[Atom]:
        if self.head is not None:
            yield self.head
        for lit in self.literals:
            yield lit.atom

    def variables(self) -> set[str]:
        out: set[str] = set()
        if self.head is not None:
            out |= self.head.variables()
        for b in self.body:
            out |= b.variables()
        return out

    def is_ground(self) -> bool:
        return not self.variables()

    def __str__(self) -> str:
        if self.head is None:
            return f":- {_body_str(self.body)}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {_body_str(self.body)}."


@dataclass(frozen=True, slots=True)
class WeakConstraint:
    body: tuple
    weight: int = 1

    def __post_init__(self):
        if self.weight < 0:
            raise PapError("NEGATIVE_WEIGHT", f"weight {self.weight} of weak constraint")

    @property
    def literals(self) -> tuple[Literal, ...]:
        return tuple(b for b in self.body if isinstance(b, Literal))

    def atoms(self) -> Iterator[Atom]:
        for lit in self.literals:
            yield lit.atom

    def variables(self) -> set[str]:
        out: set[str] = set()
        for b in self.body:
            out |= b.variables()
        return out

    def is_ground(self) -> bool:
        return not self.variables()

    def __str__(self) -> str:
        return f":~ {_body_str(self.body)}. [{self.weight}:]"


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    weak_constraints: tuple[WeakConstraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "weak_constraints", tuple(self.weak_constraints))

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, self.weak_constraints + other.weak_constraints)

    def atoms(self) -> Iterator[Atom]:
        for r in self.rules:
            yield from r.atoms()
        for w in self.weak_constraints:
            yield from w.atoms()

    def predicates(self) -> set[tuple[str, int]]:
        return {a.signature for a in self.atoms()}

    def head_predicates(self) -> set[tuple[str, int]]:
        return {r.head.signature for r in self.rules if r.head is not None}

    def constants(self) -> set[str | int]:
        out: set = set()
        for r in self.rules:
            for a in r.atoms():
                out.update(t for t in a.args if not isinstance(t, Var))
            for b in r.builtins:
                out.update(_expr_constants(b.left) | _expr_constants(b.right))
        for w in self.weak_constraints:
            for a in w.atoms():
                out.update(t for t in a.args if not isinstance(t, Var))
        return out

    def is_ground(self) -> bool:
        return all(r.is_ground() for r in self.rules) and all(
            w.is_ground() for w in self.weak_constraints
        )

    def __str__(self) -> str:
        lines = [str(r) for r in self.rules] + [str(w) for w in self.weak_constraints]
        return "\n".join(lines) + ("\n" if lines else "")


def _expr_constants(e: Expr) -> set:
    if isinstance(e, Sum):
        return _expr_constants(e.left) | _expr_constants(e.right)
    if isinstance(e, Var):
        return set()
    return {e}


def check_arities(atoms: Iterable[Atom], known: dict[str, int] | None = None) -> dict[str, int]:
    """Raise ARITY_CLASH if a predicate is used with two different arities."""
    table = {} if known is None else known
    for a in atoms:
        seen = table.setdefault(a.predicate, a.arity)
        if seen != a.arity:
            raise PapError(
                "ARITY_CLASH",
                f"predicate '{a.predicate}' used with arity {seen} and {a.arity}",
            )
    return table


# -- satisfaction ---------------------------------------------------------

Interpretation = AbstractSet[Atom]


def _require_ground(obj) -> None:
    if not obj.is_ground():
        raise PapError("NONGROUND", f"'{obj}' is not ground")


def literal_true(lit: Literal, interpretation: Interpretation) -> bool:
    _require_ground(lit)
    return (lit.atom in interpretation) == lit.positive


def body_true(body: Iterable[BodyElement], interpretation: Interpretation) -> bool:
    for b in body:
        if isinstance(b, Builtin):
            raise PapError("NONGROUND", f"built-in '{b}' must be evaluated by the grounder")
        if not literal_true(b, interpretation):
            return False
    return True


def rule_satisfied(rule: Rule, interpretation: Interpretation) -> bool:
    _require_ground(rule)
    if rule.head is not None and rule.head in interpretation:
        return True
    return not body_true(rule.body, interpretation)


def is_model(program: Program, interpretation: Interpretation) -> bool:
    """Weak constraints play no role here."""
    return all(rule_satisfied(r, interpretation) for r in program.rules)


def facts(atoms: Iterable[Atom]) -> Program:
    return Program(tuple(Rule(a) for a in atoms))
