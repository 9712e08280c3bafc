"""Weak constraints: objective values, candidate models and best models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from ._search import Solver
from .errors import PapError
from .grounder import GroundProgram
from .stable import ProgramLike, as_ground
from .syntax import Atom, Interpretation, Program, body_true


@dataclass(frozen=True)
class CandidateModel:
    interpretation: frozenset[Atom]
    cost: int

    def sorted_atoms(self) -> list[str]:
        return sorted(map(str, self.interpretation))


def objective(p: ProgramLike, m: Interpretation) -> int:
    """Sum of the weights of the weak constraints whose body is true in ``m``.

    Identical ground weak constraints count once."""
    if isinstance(p, Program) and p.is_ground():
        seen = set()
        total = 0
        for w in p.weak_constraints:
            key = (frozenset(w.body), w.weight)
            if key not in seen:
                seen.add(key)
                if body_true(w.body, m):
                    total += w.weight
        return total
    gp = as_ground(p)
    true = gp.ids(m)
    total = 0
    for w in gp.weak:
        if all(x in true for x in w.pos) and not any(x in true for x in w.neg):
            total += w.weight
    return total


def _lower_bound(solver: Solver, assumptions: Sequence[int]) -> int | None:
    """Disjoint-core lower bound on the optimum (None: no model at all).

    Every cost literal is assumed false; each unsatisfiable core of those
    assumptions forces at least its lightest literal, after which the core
    is set aside.  On exit the solver holds a model."""
    weight = {lit: w for lit, w in solver.cost_lits}
    active = [-lit for lit, _ in solver.cost_lits]
    lb = solver.cost_offset
    while True:
        if solver.solve(list(assumptions) + active):
            return lb
        core = {-x for x in solver.core if -x in weight}
        if not core:
            return None
        lb += min(weight[lit] for lit in core)
        active = [a for a in active if -a not in core]


def minimize(
    solver: Solver,
    assumptions: Sequence[int] = (),
    on_improve: Callable[[list[int], int], None] | None = None,
) -> tuple[list[int], int] | None:
    """Optimal model of ``solver`` under ``assumptions`` as (atom ids, cost).

    The solver's bound is tightened as better models are found, so the
    solver cannot be reused for weaker bounds afterwards."""
    lb = _lower_bound(solver, assumptions)
    if lb is None:
        return None
    best, cost = solver.model, solver.model_cost_value
    if on_improve:
        on_improve(best, cost)
    while cost > lb:
        solver.set_bound(cost - 1)
        if not solver.solve(assumptions):
            break
        best, cost = solver.model, solver.model_cost_value
        if on_improve:
            on_improve(best, cost)
    return best, cost


def best_models(
    p: ProgramLike,
    trace: Callable[[CandidateModel], None] | None = None,
    upper_bound: int | None = None,
    limit: int | None = None,
    project: Iterable[Atom] | None = None,
) -> list[CandidateModel]:
    """All candidate models of minimum objective (up to ``limit``).

    ``trace`` receives each strictly improving candidate as it is found.
    With ``project``, best models that agree on the projected atoms are
    reported once."""
    gp = as_ground(p)
    solver = Solver(gp)
    if upper_bound is not None:
        solver.set_bound(upper_bound)

    def report(ids, cost):
        if trace:
            trace(CandidateModel(gp.atoms_of(ids), cost))

    found = minimize(solver, on_improve=report)
    if found is None:
        raise PapError(
            "NO_CANDIDATE_MODEL",
            "no stable model satisfies the strong constraints"
            + ("" if upper_bound is None else f" within cost {upper_bound}"),
        )
    _, opt = found
    return enumerate_at_cost(gp, opt, limit, project)


def enumerate_at_cost(
    gp: GroundProgram,
    cost: int,
    limit: int | None = None,
    project: Iterable[Atom] | None = None,
    assumptions: Sequence[int] = (),
) -> list[CandidateModel]:
    solver = Solver(gp)
    solver.set_bound(cost)
    ids = list(range(len(gp.atoms))) if project is None else sorted(gp.ids(project))
    out = []
    while limit is None or len(out) < limit:
        if not solver.solve(assumptions):
            break
        model = set(solver.model)
        out.append(CandidateModel(gp.atoms_of(model), solver.model_cost_value))
        if not ids:
            break
        solver.add_clause([-(i + 1) if i in model else i + 1 for i in ids])
    out.sort(key=CandidateModel.sorted_atoms)
    return out
