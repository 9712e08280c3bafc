"""Stable-model semantics for ground normal programs."""

from __future__ import annotations

from typing import Iterable, Iterator

from ._graph import sccs
from ._search import Solver
from .grounder import GroundProgram, ground
from .syntax import Atom, Interpretation, Literal, Program, Rule, is_model

ProgramLike = Program | GroundProgram


def as_ground(p: ProgramLike) -> GroundProgram:
    return p if isinstance(p, GroundProgram) else ground(p)


def _as_program(p: ProgramLike) -> Program:
    return p.to_program() if isinstance(p, GroundProgram) else p


def reduct(p: ProgramLike, interpretation: Interpretation) -> Program:
    """Positive program: rules whose negative body misses ``interpretation``,
    stripped of their negative literals.  Strong constraints are left out."""
    out = []
    for r in _as_program(p).rules:
        if r.head is None:
            continue
        if any(a in interpretation for a in r.negative_body):
            continue
        out.append(Rule(r.head, tuple(Literal(a) for a in r.positive_body)))
    return Program(tuple(out))


def least_model(p: Program) -> frozenset[Atom]:
    """Least model of a positive, constraint-free ground program."""
    watch: dict[Atom, list[int]] = {}
    missing = []
    heads = []
    model: set[Atom] = set()
    queue: list[Atom] = []
    for i, r in enumerate(p.rules):
        if r.head is None:
            continue
        if r.negative_body:
            raise ValueError(f"rule '{r}' is not positive")
        body = set(r.positive_body)
        heads.append(r.head)
        missing.append(len(body))
        for a in body:
            watch.setdefault(a, []).append(len(heads) - 1)
        if not body and r.head not in model:
            model.add(r.head)
            queue.append(r.head)
    while queue:
        a = queue.pop()
        for i in watch.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0 and heads[i] not in model:
                model.add(heads[i])
                queue.append(heads[i])
    return frozenset(model)


def is_stable(p: ProgramLike, interpretation: Interpretation) -> bool:
    prog = _as_program(p)
    interp = frozenset(interpretation)
    if least_model(reduct(prog, interp)) != interp:
        return False
    return is_model(Program(tuple(r for r in prog.rules if r.head is None)), interp)


# -- dependency analysis --------------------------------------------------


def dependency_graph(p: ProgramLike) -> dict:
    """Edges ``head -> (body node, positive?)``.

    Nodes are atoms for ground input and ``(predicate, arity)`` pairs for
    non-ground input."""
    edges: dict = {}
    if isinstance(p, GroundProgram):
        for r in p.rules:
            if r.head is None:
                continue
            out = edges.setdefault(p.atoms[r.head], set())
            out.update((p.atoms[a], True) for a in r.pos)
            out.update((p.atoms[a], False) for a in r.neg)
        return edges
    key = (lambda a: a) if p.is_ground() else (lambda a: a.signature)
    for r in p.rules:
        if r.head is None:
            continue
        out = edges.setdefault(key(r.head), set())
        out.update((key(a), True) for a in r.positive_body)
        out.update((key(a), False) for a in r.negative_body)
    return edges


def is_stratified(p: ProgramLike) -> bool:
    """No cycle of the dependency relation goes through a negative edge."""
    edges = dependency_graph(p)
    succ = {u: [v for v, _ in out] for u, out in edges.items()}
    nodes = set(succ) | {v for out in succ.values() for v in out}
    comp_of = {}
    for i, comp in enumerate(sccs(sorted(nodes, key=str), succ)):
        for v in comp:
            comp_of[v] = i
    for u, out in edges.items():
        for v, positive in out:
            if not positive and comp_of[u] == comp_of[v]:
                return False
    return True


def stratified_model(p: ProgramLike) -> frozenset[Atom] | None:
    """Unique stable model of a stratified program, or None when a strong
    constraint rejects it.  Evaluated stratum by stratum, no search."""
    gp = as_ground(p)
    n = len(gp.atoms)
    succ: dict[int, list[int]] = {}
    by_head: dict[int, list] = {}
    for r in gp.rules:
        if r.head is None:
            continue
        succ.setdefault(r.head, []).extend(r.pos + r.neg)
        by_head.setdefault(r.head, []).append(r)
    true = [False] * n
    for comp in sccs(range(n), succ):
        members = set(comp)
        rules = [r for h in comp for r in by_head.get(h, ())]
        if any(x in members for r in rules for x in r.neg):
            raise ValueError("program is not stratified")
        # inside a component only positive dependencies remain
        live = [r for r in rules if not any(true[x] for x in r.neg)]
        changed = True
        while changed:
            changed = False
            for r in live:
                if not true[r.head] and all(true[x] for x in r.pos):
                    true[r.head] = True
                    changed = True
    for r in gp.rules:
        if r.head is None and all(true[x] for x in r.pos) and not any(true[x] for x in r.neg):
            return None
    return frozenset(gp.atoms[i] for i in range(n) if true[i])


# -- enumeration ----------------------------------------------------------


def enumerate_stable_models(
    p: ProgramLike, limit: int | None = None, project: Iterable[Atom] | None = None
) -> Iterator[frozenset[Atom]]:
    """Stable models satisfying every strong constraint, without duplicates.

    With ``project``, models are distinct on the projected atoms only and
    one representative per projection is produced."""
    gp = as_ground(p)
    solver = Solver(gp)
    if project is None:
        ids = list(range(len(gp.atoms)))
    else:
        ids = sorted(gp.ids(project))
    count = 0
    while limit is None or count < limit:
        if not solver.solve():
            return
        model = set(solver.model)
        yield gp.atoms_of(model)
        count += 1
        if not ids:
            return
        solver.add_clause([-(i + 1) if i in model else i + 1 for i in ids])
