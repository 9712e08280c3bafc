import pytest
from hypothesis import given, settings, strategies as st

from pap.errors import PapError
from pap.parser import parse_program
from pap.syntax import Atom, Program
from pap.weak import best_models, objective

from strategies import brute_cost, brute_stable_models, ground_programs

a, b, c = Atom("a"), Atom("b"), Atom("c")
PS = parse_program(
    """
    a :- c, not b.   :~ a, c. [1:]
    c.               :~ b. [2:]
    b :- c, not a.   :~ a. [1:]
                     :~ b, c. [1:]
    """
)


def test_objective():
    assert objective(PS, {a, c}) == 2
    assert objective(PS, {b, c}) == 3
    assert objective(parse_program("a."), {a}) == 0


def test_best_model():
    (m,) = best_models(PS)
    assert (m.interpretation, m.cost) == ({a, c}, 2)


def test_no_weak_constraints_gives_every_model():
    ms = best_models(parse_program("a :- not b. b :- not a."))
    assert {m.interpretation for m in ms} == {frozenset({a}), frozenset({b})}
    assert all(m.cost == 0 for m in ms)


def test_weights_decide():
    (m,) = best_models(parse_program("a :- not b. b :- not a. :~ a. [3:] :~ b. [1:]"))
    assert (m.interpretation, m.cost) == ({b}, 1)


def test_no_candidate_model():
    with pytest.raises(PapError) as e:
        best_models(parse_program("a. :- a."))
    assert e.value.code == "NO_CANDIDATE_MODEL"


def test_duplicate_ground_weak_constraints_count_once():
    p = parse_program("q(1). q(2). a. :~ a. [2:] :~ q(X), a. [1:] :~ a. [2:]")
    assert objective(p, {a, Atom("q", (1,)), Atom("q", (2,))}) == 4


@settings(max_examples=300)
@given(ground_programs(max_atoms=7, max_rules=10, weak=True))
def test_best_models_match_brute_force(program):
    candidates = brute_stable_models(program)
    if not candidates:
        with pytest.raises(PapError):
            best_models(program)
        return
    best = min(brute_cost(program, m) for m in candidates)
    got = best_models(program)
    assert {m.interpretation for m in got} == {m for m in candidates if brute_cost(program, m) == best}
    assert all(m.cost == best == objective(program, m.interpretation) for m in got)


@given(ground_programs(max_atoms=7, max_rules=10, weak=True), st.integers(0, 6))
def test_upper_bound(program, bound):
    candidates = [m for m in brute_stable_models(program) if brute_cost(program, m) <= bound]
    if not candidates:
        with pytest.raises(PapError):
            best_models(program, upper_bound=bound)
        return
    assert all(m.cost <= bound for m in best_models(program, upper_bound=bound))


@given(ground_programs(max_atoms=7, max_rules=10, weak=True))
def test_trace_strictly_improves(program):
    seen = []
    try:
        final = best_models(program, trace=lambda m: seen.append(m.cost))
    except PapError:
        return
    assert all(x > y for x, y in zip(seen, seen[1:]))
    assert seen[-1] == final[0].cost


@given(ground_programs(weak=True), st.randoms(use_true_random=False))
def test_objective_ignores_order_and_adds_up(program, rnd):
    base = sorted(set(program.atoms()), key=str)
    m = {x for x in base if rnd.random() < 0.5}
    weak = list(program.weak_constraints)
    rnd.shuffle(weak)
    assert objective(Program(program.rules, tuple(weak)), m) == objective(program, m)
    half = len(weak) // 2
    left, right = Program(program.rules, tuple(weak[:half])), Program(program.rules, tuple(weak[half:]))
    shared = {(frozenset(w.body), w.weight) for w in weak[:half]} & {
        (frozenset(w.body), w.weight) for w in weak[half:]
    }
    if not shared:
        assert objective(left, m) + objective(right, m) == objective(program, m)


def test_objective_on_arbitrary_interpretations():
    p = parse_program("a :- not b. :~ b. [5:] :~ a, not c. [1:]")
    assert objective(p, {b}) == 5
    assert objective(p, {a, c}) == 0
