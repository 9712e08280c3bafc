"""Instantiation of safe non-ground programs.

Only instances whose positive body atoms can possibly be derived are
produced (bottom-up, semi-naive over a predicate index); the omitted
instances of ground(P) have a body atom that is false in every model, so
the stable models are unchanged.  Built-ins are evaluated here and never
reach the solver.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import PapError
from .syntax import (
    Atom,
    Builtin,
    Literal,
    Program,
    Rule,
    Sum,
    Var,
    WeakConstraint,
    _expr_constants,
)


@dataclass(frozen=True)
class HerbrandUniverse:
    constants: frozenset
    integer_bound: int


@dataclass(frozen=True, slots=True)
class GroundRule:
    """Rule over interned atom ids; ``head is None`` marks a constraint."""

    head: int | None
    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()


@dataclass(frozen=True, slots=True)
class GroundWeak:
    pos: tuple[int, ...]
    neg: tuple[int, ...]
    weight: int


@dataclass(frozen=True)
class GroundProgram:
    atoms: tuple[Atom, ...]
    rules: tuple[GroundRule, ...]
    weak: tuple[GroundWeak, ...] = ()
    universe: HerbrandUniverse | None = None
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {a: i for i, a in enumerate(self.atoms)})

    @property
    def base(self) -> frozenset[Atom]:
        return frozenset(self.atoms)

    def ids(self, atoms: Iterable[Atom]) -> set[int]:
        """Ids of the given atoms; atoms outside the base are ignored."""
        return {self.index[a] for a in atoms if a in self.index}

    def atoms_of(self, ids: Iterable[int]) -> frozenset[Atom]:
        return frozenset(self.atoms[i] for i in ids)

    def to_rule(self, r: GroundRule) -> Rule:
        body = tuple(Literal(self.atoms[i]) for i in r.pos) + tuple(
            Literal(self.atoms[i], False) for i in r.neg
        )
        return Rule(None if r.head is None else self.atoms[r.head], body)

    def to_weak(self, w: GroundWeak) -> WeakConstraint:
        body = tuple(Literal(self.atoms[i]) for i in w.pos) + tuple(
            Literal(self.atoms[i], False) for i in w.neg
        )
        return WeakConstraint(body, w.weight)

    def to_program(self) -> Program:
        return Program(
            tuple(self.to_rule(r) for r in self.rules),
            tuple(self.to_weak(w) for w in self.weak),
        )

    def with_facts(self, atoms: Iterable[Atom]) -> "GroundProgram":
        """Add facts; atoms new to the base are appended."""
        table = list(self.atoms)
        index = dict(self.index)
        extra = []
        for a in atoms:
            if a not in index:
                index[a] = len(table)
                table.append(a)
            extra.append(GroundRule(index[a]))
        return GroundProgram(tuple(table), self.rules + tuple(extra), self.weak, self.universe)

    def __str__(self) -> str:
        return str(self.to_program())


# -- safety ---------------------------------------------------------------


def _assignment_target(b: Builtin, bound: set[str]) -> str | None:
    """Variable that ``b`` can bind once everything else is bound."""
    if b.op != "=":
        return None
    for side, other in ((b.left, b.right), (b.right, b.left)):
        if isinstance(side, Var) and side.name not in bound:
            rest = b.variables() - {side.name}
            if rest <= bound:
                return side.name
    return None


def _bound_variables(body: Sequence) -> set[str]:
    bound: set[str] = set()
    for b in body:
        if isinstance(b, Literal) and b.positive:
            bound |= b.variables()
    changed = True
    while changed:
        changed = False
        for b in body:
            if isinstance(b, Builtin):
                v = _assignment_target(b, bound)
                if v is not None:
                    bound.add(v)
                    changed = True
    return bound


@dataclass(frozen=True)
class SafetyViolation:
    rule: Rule | WeakConstraint
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return f"unsafe variable(s) {', '.join(self.variables)} in '{self.rule}'"


def check_safety(program: Program) -> list[SafetyViolation]:
    """Every variable must occur in a positive ordinary body literal, or be
    the target of an ``=`` built-in whose other side is already bound."""
    out = []
    for r in list(program.rules) + list(program.weak_constraints):
        unsafe = r.variables() - _bound_variables(r.body)
        if unsafe:
            out.append(SafetyViolation(r, tuple(sorted(unsafe))))
    return out


# -- built-in evaluation --------------------------------------------------


def _value(t, binding: dict):
    return binding[t.name] if isinstance(t, Var) else t


def _eval_expr(e, binding: dict):
    if isinstance(e, Sum):
        a, b = _value(e.left, binding), _value(e.right, binding)
        if not (isinstance(a, int) and isinstance(b, int)):
            return None
        return a + b
    return _value(e, binding)


def _order_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, v)


def _compare(op: str, a, b) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    ka, kb = _order_key(a), _order_key(b)
    return ka < kb if op == "<" else ka > kb


# -- instantiation --------------------------------------------------------


class _Index:
    """Possibly-true atoms, indexed by predicate and by (argument, value)."""

    def __init__(self):
        self.members: set[Atom] = set()
        self.by_sig: dict[tuple, list[tuple]] = defaultdict(list)
        self.by_arg: dict[tuple, list[tuple]] = defaultdict(list)

    def add(self, atom: Atom) -> bool:
        if atom in self.members:
            return False
        self.members.add(atom)
        sig = atom.signature
        self.by_sig[sig].append(atom.args)
        for i, v in enumerate(atom.args):
            self.by_arg[(sig, i, v)].append(atom.args)
        return True

    def candidates(self, atom: Atom, binding: dict) -> list[tuple]:
        sig = atom.signature
        best = None
        for i, t in enumerate(atom.args):
            if isinstance(t, Var):
                if t.name not in binding:
                    continue
                t = binding[t.name]
            lst = self.by_arg.get((sig, i, t), ())
            if best is None or len(lst) < len(best):
                best = lst
                if not best:
                    break
        if best is None:
            return self.by_sig.get(sig, ())
        return best


def _match(atom: Atom, args: tuple, binding: dict) -> dict | None:
    new = None
    for t, v in zip(atom.args, args):
        if isinstance(t, Var):
            cur = binding.get(t.name) if new is None else new.get(t.name)
            if cur is None:
                if new is None:
                    new = dict(binding)
                new[t.name] = v
            elif cur != v:
                return None
        elif t != v:
            return None
    return binding if new is None else new


class _Grounder:
    def __init__(self, integer_bound: int):
        self.bound = integer_bound
        self.db = _Index()

    def _builtins(self, pending: list[Builtin], binding: dict):
        """Evaluate what can be evaluated; returns (binding, rest) or None."""
        rest = list(pending)
        progress = True
        while progress and rest:
            progress = False
            for b in list(rest):
                names = b.variables()
                missing = [v for v in names if v not in binding]
                if not missing:
                    left, right = _eval_expr(b.left, binding), _eval_expr(b.right, binding)
                    if left is None or right is None or not _compare(b.op, left, right):
                        return None
                    rest.remove(b)
                    progress = True
                    continue
                target = _assignment_target(b, set(binding))
                if target is not None:
                    expr = b.right if isinstance(b.left, Var) and b.left.name == target else b.left
                    val = _eval_expr(expr, binding)
                    if val is None:
                        return None
                    if isinstance(val, int) and val > self.bound:
                        # outside the bounded integer universe
                        return None
                    binding = dict(binding)
                    binding[target] = val
                    rest.remove(b)
                    progress = True
        return binding, rest

    def _join(self, lits: list[Atom], pending: list[Builtin], binding: dict) -> Iterator[dict]:
        res = self._builtins(pending, binding)
        if res is None:
            return
        binding, pending = res
        if not lits:
            if not pending:
                yield binding
            return
        best_i, best = 0, None
        for i, a in enumerate(lits):
            c = self.db.candidates(a, binding)
            if best is None or len(c) < len(best):
                best_i, best = i, c
                if not c:
                    return
        atom = lits[best_i]
        rest = lits[:best_i] + lits[best_i + 1 :]
        for args in list(best):
            b2 = _match(atom, args, binding)
            if b2 is not None:
                yield from self._join(rest, pending, b2)

    def instances(self, body: Sequence, delta: dict | None) -> Iterator[dict]:
        pos = [b.atom for b in body if isinstance(b, Literal) and b.positive]
        bis = [b for b in body if isinstance(b, Builtin)]
        if delta is None:
            yield from self._join(pos, bis, {})
            return
        for i, a in enumerate(pos):
            new_args = delta.get(a.signature)
            if not new_args:
                continue
            rest = pos[:i] + pos[i + 1 :]
            for args in new_args:
                b = _match(a, args, {})
                if b is not None:
                    yield from self._join(rest, bis, b)


def _subst(atom: Atom, binding: dict) -> Atom:
    if not atom.args:
        return atom
    return Atom(atom.predicate, tuple(binding[t.name] if isinstance(t, Var) else t for t in atom.args))


def default_integer_bound(program: Program, extra_constants: Iterable = ()) -> int:
    """Largest integer constant; arguments of reserved ``_``-prefixed
    atoms are indices, not data, and are ignored."""
    ints = [c for c in extra_constants if isinstance(c, int)]
    for a in program.atoms():
        if not a.predicate.startswith("_"):
            ints += [t for t in a.args if isinstance(t, int)]
    for r in program.rules:
        for b in r.builtins:
            ints += [c for c in _expr_constants(b.left) | _expr_constants(b.right) if isinstance(c, int)]
    return max(ints, default=0)


def ground(
    program: Program,
    extra_constants: Iterable = (),
    integer_bound: int | None = None,
    assumable: Iterable[Atom] = (),
) -> GroundProgram:
    """Instantiate ``program``.

    ``assumable`` atoms are treated as possibly true without being facts,
    which keeps rules that depend on externally supplied atoms.
    """
    violations = check_safety(program)
    if violations:
        raise PapError("UNSAFE_PROGRAM", "; ".join(map(str, violations)))
    extra_constants = tuple(extra_constants)
    max_int = default_integer_bound(program, extra_constants)
    if integer_bound is None:
        integer_bound = max_int
    elif max_int > integer_bound:
        raise PapError(
            "INTEGER_OVERFLOW", f"integer {max_int} exceeds the integer bound {integer_bound}"
        )
    universe = HerbrandUniverse(
        frozenset(program.constants()) | frozenset(extra_constants), integer_bound
    )

    g = _Grounder(integer_bound)
    rules = [r for r in program.rules if r.head is not None]
    instances: dict[tuple, None] = {}

    def emit(rule: Rule, binding: dict, delta_out: dict):
        head = _subst(rule.head, binding)
        pos = tuple(_subst(b.atom, binding) for b in rule.body if isinstance(b, Literal) and b.positive)
        neg = tuple(_subst(b.atom, binding) for b in rule.body if isinstance(b, Literal) and not b.positive)
        key = (head, pos, neg)
        if key in instances:
            return
        instances[key] = None
        if g.db.add(head):
            delta_out.setdefault(head.signature, []).append(head.args)

    delta: dict = {}
    for a in assumable:
        if g.db.add(a):
            delta.setdefault(a.signature, []).append(a.args)
    for r in rules:
        if not r.positive_body:
            for b in g.instances(r.body, None):
                emit(r, b, delta)
    while delta:
        new_delta: dict = {}
        for r in rules:
            if not r.positive_body:
                continue
            if not any(a.signature in delta for a in r.positive_body):
                continue
            for b in list(g.instances(r.body, delta)):
                emit(r, b, new_delta)
        delta = new_delta

    def close(body) -> Iterator[tuple[tuple, tuple]]:
        for b in g.instances(body, None):
            pos = tuple(_subst(x.atom, b) for x in body if isinstance(x, Literal) and x.positive)
            neg = tuple(_subst(x.atom, b) for x in body if isinstance(x, Literal) and not x.positive)
            yield pos, neg

    constraints: dict[tuple, None] = {}
    for r in program.rules:
        if r.head is None:
            for pos, neg in close(r.body):
                constraints[(pos, neg)] = None
    weak: dict[tuple, None] = {}
    for w in program.weak_constraints:
        for pos, neg in close(w.body):
            weak[(pos, neg, w.weight)] = None

    table: list[Atom] = []
    ids: dict[Atom, int] = {}

    def intern(a: Atom) -> int:
        i = ids.get(a)
        if i is None:
            i = ids[a] = len(table)
            table.append(a)
        return i

    def dedup(atoms) -> tuple[int, ...]:
        return tuple(dict.fromkeys(intern(a) for a in atoms))

    def live_neg(neg) -> tuple[int, ...]:
        # an underivable atom makes "not a" trivially true
        return dedup(a for a in neg if a in g.db.members)

    out_rules = []
    for head, pos, neg in instances:
        out_rules.append(GroundRule(intern(head), dedup(pos), live_neg(neg)))
    for pos, neg in constraints:
        out_rules.append(GroundRule(None, dedup(pos), live_neg(neg)))
    out_weak = []
    seen_weak = set()
    for pos, neg, w in weak:
        # identity is decided before trivially true literals are dropped
        key = (frozenset(pos), frozenset(neg), w)
        if key not in seen_weak:
            seen_weak.add(key)
            out_weak.append(GroundWeak(dedup(pos), live_neg(neg), w))
    seen_rules = set()
    unique_rules = []
    for r in out_rules:
        key = (r.head, r.pos, r.neg)
        if key not in seen_rules:
            seen_rules.add(key)
            unique_rules.append(r)
    return GroundProgram(tuple(table), tuple(unique_rules), tuple(out_weak), universe)


def ground_rules(text_or_rules) -> GroundProgram:
    """Convenience: ground a program given as text or as a ``Program``."""
    from .parser import parse_program

    prog = parse_program(text_or_rules) if isinstance(text_or_rules, str) else text_or_rules
    return ground(prog)
