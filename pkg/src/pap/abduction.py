"""Abduction with penalization: problems, translation and reasoning tasks.

A problem ``PAP(H, P, O, gamma)`` asks for sets ``S`` of hypotheses such
that some stable model of ``P`` plus the facts ``S`` makes every
observation true, preferring sets of minimum total penalty.

All tasks run on one translated program in which every hypothesis is
guessed by a pair of mutually exclusive fresh atoms and charged through a
weak constraint.  Forcing a hypothesis in or out is done with solver
assumptions, and cost thresholds with the solver's native bound, so the
translation is grounded only once per problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from ._search import Solver
from .errors import InconsistentError, PapError
from .grounder import GroundProgram, default_integer_bound, ground
from .parser import HypothesisDecl, ObservationDecl
from .stable import is_stratified, least_model, reduct, stratified_model
from .syntax import (
    Atom,
    Literal,
    Program,
    Rule,
    Var,
    WeakConstraint,
    check_arities,
    facts,
)
from .weak import minimize, objective

SOL = "_sol"
NSOL = "_nsol"


@dataclass(frozen=True)
class PAP:
    hypotheses: tuple[Atom, ...]
    program: Program
    observations: tuple[Literal, ...]
    penalty: Mapping[Atom, int]
    integer_bound: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        object.__setattr__(self, "observations", tuple(dict.fromkeys(self.observations)))
        object.__setattr__(self, "penalty", dict(self.penalty))
        _check(self)

    def cost(self, s: Iterable[Atom]) -> int:
        return sum(self.penalty[h] for h in set(s))

    def scaled(self, k: int) -> "PAP":
        return PAP(
            self.hypotheses,
            self.program,
            self.observations,
            {h: k * w for h, w in self.penalty.items()},
            self.integer_bound,
        )

    def effective_integer_bound(self) -> int:
        if self.integer_bound is not None:
            return self.integer_bound
        extra = [t for h in self.hypotheses for t in h.args]
        extra += [t for o in self.observations for t in o.atom.args]
        return default_integer_bound(self.program, extra) + len(self.hypotheses)


def _unifies(head: Atom, ground_atom: Atom) -> bool:
    if head.signature != ground_atom.signature:
        return False
    binding: dict[str, object] = {}
    for t, v in zip(head.args, ground_atom.args):
        if isinstance(t, Var):
            if binding.setdefault(t.name, v) != v:
                return False
        elif t != v:
            return False
    return True


def _check(pap: PAP) -> None:
    seen = set()
    for h in pap.hypotheses:
        if not h.is_ground():
            raise PapError("NONGROUND_HYPOTHESIS", str(h))
        if h in seen:
            raise PapError("DUPLICATE_HYPOTHESIS", str(h))
        seen.add(h)
        if h not in pap.penalty:
            raise PapError("MISSING_PENALTY", str(h))
        w = pap.penalty[h]
        if not isinstance(w, int) or isinstance(w, bool):
            raise PapError("NONINTEGER_PENALTY", f"{h}: {w!r}")
        if w < 0:
            raise PapError("NEGATIVE_WEIGHT", f"{h}: {w}")
    for o in pap.observations:
        if not o.is_ground():
            raise PapError("NONGROUND_OBSERVATION", str(o))
    if pap.program.weak_constraints:
        raise PapError("WEAK_CONSTRAINT_IN_PAP", "penalties come from the hypotheses only")
    table = check_arities(pap.program.atoms())
    check_arities(pap.hypotheses, table)
    check_arities((o.atom for o in pap.observations), table)
    by_sig: dict = {}
    for h in pap.hypotheses:
        by_sig.setdefault(h.signature, []).append(h)
    for r in pap.program.rules:
        if r.head is None:
            continue
        for h in by_sig.get(r.head.signature, ()):
            if _unifies(r.head, h):
                raise PapError("HYPOTHESIS_IN_HEAD", f"hypothesis {h} is a head instance of '{r}'")


def validate_pap(
    hypotheses: Sequence[Atom | HypothesisDecl],
    program: Program,
    observations: Sequence[Literal | ObservationDecl] = (),
    penalty: Mapping[Atom, int] | None = None,
    integer_bound: int | None = None,
) -> PAP:
    """Build a checked PAP.  Declarations carry their own penalties; plain
    atoms take theirs from ``penalty``."""
    hyps: list[Atom] = []
    gamma = dict(penalty or {})
    for h in hypotheses:
        if isinstance(h, HypothesisDecl):
            gamma.setdefault(h.atom, h.penalty)
            hyps.append(h.atom)
        else:
            hyps.append(h)
    obs = [o.literal if isinstance(o, ObservationDecl) else o for o in observations]
    return PAP(tuple(hyps), program, tuple(obs), gamma, integer_bound)


# -- solutions ------------------------------------------------------------


@dataclass(frozen=True)
class Solution:
    hypotheses: frozenset[Atom]
    cost: int
    witness: frozenset[Atom] = field(compare=False, default=frozenset())

    def sorted_atoms(self) -> list[str]:
        return sorted(map(str, self.hypotheses))

    def __str__(self) -> str:
        return "{" + ", ".join(self.sorted_atoms()) + f"}} cost {self.cost}"


def _solution_key(s: Solution):
    return (s.cost, s.sorted_atoms())


# -- translation ----------------------------------------------------------


@dataclass(frozen=True)
class TranslatedProgram:
    program: Program
    hypothesis_index: dict[int, Atom]


def _reserved(pred: str) -> bool:
    return pred in (SOL, NSOL)


def translate_pap(pap: PAP) -> TranslatedProgram:
    """Guess each hypothesis, charge it with a weak constraint and turn the
    observations into strong constraints."""
    used = {p for p, _ in pap.program.predicates()}
    used |= {h.predicate for h in pap.hypotheses}
    used |= {o.atom.predicate for o in pap.observations}
    clash = sorted(p for p in used if _reserved(p))
    if clash:
        raise PapError("FRESH_PREDICATE_COLLISION", ", ".join(clash))
    rules = list(pap.program.rules)
    weak = list(pap.program.weak_constraints)
    index = {}
    for i, h in enumerate(pap.hypotheses, start=1):
        index[i] = h
        sol, nsol = Atom(SOL, (i,)), Atom(NSOL, (i,))
        rules.append(Rule(h, (Literal(sol),)))
        rules.append(Rule(sol, (Literal(nsol, False),)))
        rules.append(Rule(nsol, (Literal(sol, False),)))
        weak.append(WeakConstraint((Literal(h),), pap.penalty[h]))
    for o in pap.observations:
        rules.append(Rule(None, (Literal(o.atom, not o.positive),)))
    return TranslatedProgram(Program(tuple(rules), tuple(weak)), index)


def _strip(atoms: Iterable[Atom]) -> frozenset[Atom]:
    return frozenset(a for a in atoms if not _reserved(a.predicate))


def extract_solution(pap: PAP, m: Iterable[Atom]) -> Solution:
    m = frozenset(m)
    s = frozenset(h for h in pap.hypotheses if h in m)
    return Solution(s, pap.cost(s), _strip(m))


# -- the engine -----------------------------------------------------------


class Abducer:
    """Reasoning tasks over one PAP, sharing a single grounding."""

    def __init__(self, pap: PAP):
        self.pap = pap
        self.translated = translate_pap(pap)
        self.ground: GroundProgram = ground(
            self.translated.program, integer_bound=pap.effective_integer_bound()
        )
        self.var = {h: self.ground.index[h] + 1 for h in pap.hypotheses}
        self._solvers: dict[int | None, Solver] = {}
        self._opt: int | None = None
        self._consistent: bool | None = None

    # solvers are cached per cost bound; queries differ only in assumptions
    def _solver(self, bound: int | None) -> Solver:
        s = self._solvers.get(bound)
        if s is None:
            s = Solver(self.ground)
            if bound is not None:
                s.set_bound(bound)
            self._solvers[bound] = s
        return s

    def _query(self, bound: int | None, inside=(), outside=()) -> frozenset[Atom] | None:
        lits = [self.var[h] for h in inside] + [-self.var[h] for h in outside]
        s = self._solver(bound)
        if not s.solve(lits):
            return None
        return self.ground.atoms_of(s.model)

    def _solution(self, model: Iterable[Atom]) -> Solution:
        sol = extract_solution(self.pap, model)
        # a best model's objective is exactly the penalty of its hypotheses
        assert objective(self.ground, model) == sol.cost, "objective/penalty mismatch"
        return sol

    def _member(self, h: Atom) -> None:
        if h not in self.var:
            raise PapError("H_MEMBERSHIP", f"{h} is not a hypothesis")

    def _subset(self, s: Iterable[Atom]) -> frozenset[Atom]:
        s = frozenset(s)
        for h in s:
            self._member(h)
        return s

    def is_consistent(self) -> bool:
        if self._consistent is None:
            self._consistent = self._query(None) is not None
        return self._consistent

    def is_admissible(self, s: Iterable[Atom], fast: bool = True) -> frozenset[Atom] | None:
        """Witness model of P plus facts(s) satisfying O, or None."""
        s = self._subset(s)
        if fast and is_stratified(self.pap.program):
            return admissible_stratified(self.pap, s)
        model = self._query(None, s, [h for h in self.pap.hypotheses if h not in s])
        return None if model is None else _strip(model)

    def enumerate_admissible(self, limit: int | None = None) -> Iterator[Solution]:
        solver = Solver(self.ground)
        hv = [self.var[h] for h in self.pap.hypotheses]
        count = 0
        while limit is None or count < limit:
            if not solver.solve():
                return
            model = self.ground.atoms_of(solver.model)
            yield extract_solution(self.pap, model)
            count += 1
            if not hv:
                return
            true = set(solver.model)
            solver.add_clause([-v if v - 1 in true else v for v in hv])

    def solve_optimal(
        self, all: bool = False, trace: Callable[[Solution], None] | None = None
    ) -> list[Solution]:
        solver = Solver(self.ground)

        def report(ids, cost):
            if trace:
                trace(self._solution(self.ground.atoms_of(ids)))

        found = minimize(solver, on_improve=report)
        if found is None:
            self._consistent = False
            raise InconsistentError()
        ids, cost = found
        self._consistent = True
        self._opt = cost
        if not all:
            return [self._solution(self.ground.atoms_of(ids))]
        out = []
        enum = Solver(self.ground)
        enum.set_bound(cost)
        hv = [self.var[h] for h in self.pap.hypotheses]
        while enum.solve():
            out.append(self._solution(self.ground.atoms_of(enum.model)))
            if not hv:
                break
            true = set(enum.model)
            enum.add_clause([-v if v - 1 in true else v for v in hv])
        return sorted(out, key=_solution_key)

    def optimal_cost(self) -> int:
        """Binary search for the least threshold admitting a solution."""
        if self._opt is not None:
            return self._opt
        if not self.is_consistent():
            raise InconsistentError()
        lo, hi = 0, sum(self.pap.penalty[h] for h in self.pap.hypotheses)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._query(mid) is not None:
                hi = mid
            else:
                lo = mid + 1
        self._opt = lo
        return lo

    def is_relevant(self, h: Atom) -> bool:
        self._member(h)
        return self._query(self.optimal_cost(), inside=[h]) is not None

    def is_necessary(self, h: Atom) -> bool:
        self._member(h)
        return self._query(self.optimal_cost(), outside=[h]) is None

    def is_optimal(self, s: Iterable[Atom]) -> bool:
        s = self._subset(s)
        if self.is_admissible(s) is None:
            return False
        cost = self.pap.cost(s)
        return cost == 0 or self._query(cost - 1) is None

    def solve_optimal_greedy(self) -> Solution:
        """Decide the hypotheses one at a time in declaration order, keeping
        each one exactly when an optimal solution with it still exists."""
        c = self.optimal_cost()
        accepted: list[Atom] = []
        rejected: list[Atom] = []
        model = None
        for h in self.pap.hypotheses:
            m = self._query(c, accepted + [h], rejected)
            if m is not None:
                accepted.append(h)
                model = m
            else:
                rejected.append(h)
        if model is None:
            model = self._query(c, accepted, rejected)
        return self._solution(model)


# -- direct evaluation ----------------------------------------------------


def observations_hold(pap: PAP, model: frozenset[Atom]) -> bool:
    return all((o.atom in model) == o.positive for o in pap.observations)


def admissible_stratified(pap: PAP, s: Iterable[Atom]) -> frozenset[Atom] | None:
    """Admissibility for stratified programs: the single stable model of
    P plus facts(s) is computed stratum by stratum."""
    prog = pap.program + facts(sorted(s, key=str))
    gp = ground(prog, integer_bound=pap.effective_integer_bound())
    model = stratified_model(gp)
    if model is None or not observations_hold(pap, model):
        return None
    return model


# -- module-level task functions -------------------------------------------


def is_consistent(pap: PAP) -> bool:
    return Abducer(pap).is_consistent()


def is_admissible(pap: PAP, s: Iterable[Atom]) -> frozenset[Atom] | None:
    return Abducer(pap).is_admissible(s)


def enumerate_admissible(pap: PAP, limit: int | None = None) -> Iterator[Solution]:
    return Abducer(pap).enumerate_admissible(limit)


def solve_optimal(pap: PAP, all: bool = False, trace=None) -> list[Solution]:
    return Abducer(pap).solve_optimal(all=all, trace=trace)


def optimal_cost(pap: PAP) -> int:
    return Abducer(pap).optimal_cost()


def is_relevant(pap: PAP, h: Atom) -> bool:
    return Abducer(pap).is_relevant(h)


def is_necessary(pap: PAP, h: Atom) -> bool:
    return Abducer(pap).is_necessary(h)


def is_optimal(pap: PAP, s: Iterable[Atom]) -> bool:
    return Abducer(pap).is_optimal(s)


def solve_optimal_greedy(pap: PAP) -> Solution:
    return Abducer(pap).solve_optimal_greedy()


# -- brute-force oracle ---------------------------------------------------

MAX_ORACLE_HYPOTHESES = 16
MAX_ORACLE_ATOMS = 20


def brute_force_admissible(pap: PAP) -> list[Solution]:
    """Every admissible solution, by exhaustive enumeration.

    For each hypothesis set S and each guess J of the atoms that occur
    under negation, M = lm(reduct(P + facts(S), J)) is stable exactly when
    M agrees with J on those atoms.  Shares only the grounder with the
    solver."""
    if len(pap.hypotheses) > MAX_ORACLE_HYPOTHESES:
        raise PapError("TOO_LARGE", f"{len(pap.hypotheses)} hypotheses")
    bound = pap.effective_integer_bound()
    gp = ground(pap.program, integer_bound=bound, assumable=pap.hypotheses)
    base_prog = gp.to_program()
    negated = sorted({a for r in base_prog.rules for a in r.negative_body}, key=str)
    if len(negated) > MAX_ORACLE_ATOMS:
        raise PapError("TOO_LARGE", f"{len(negated)} atoms under negation")
    constraints = [r for r in base_prog.rules if r.head is None]
    out = []
    for k in range(len(pap.hypotheses) + 1):
        for s in itertools.combinations(pap.hypotheses, k):
            prog = base_prog + facts(s)
            for bits in itertools.product((False, True), repeat=len(negated)):
                guess = frozenset(a for a, b in zip(negated, bits) if b)
                model = least_model(reduct(prog, guess))
                if any((a in model) != (a in guess) for a in negated):
                    continue
                if any(
                    all(a in model for a in r.positive_body)
                    and not any(a in model for a in r.negative_body)
                    for r in constraints
                ):
                    continue
                if observations_hold(pap, model):
                    out.append(Solution(frozenset(s), pap.cost(s), model))
                    break
    return sorted(out, key=_solution_key)


def brute_force_opt(pap: PAP) -> list[Solution]:
    adm = brute_force_admissible(pap)
    if not adm:
        return []
    best = min(s.cost for s in adm)
    return [s for s in adm if s.cost == best]
