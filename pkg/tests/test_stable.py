import time

from hypothesis import given, settings, strategies as st

from pap.grounder import ground
from pap.parser import parse_program
from pap.stable import (
    enumerate_stable_models,
    is_stable,
    is_stratified,
    least_model,
    reduct,
    stratified_model,
)
from pap.syntax import Atom, Program

from strategies import brute_stable_models, ground_programs

a, b, c = Atom("a"), Atom("b"), Atom("c")
CHOICE = parse_program("a :- not b. b :- not a. c :- a. c :- b.")


def rule_strings(p):
    return sorted(str(r) for r in p.rules)


def test_reduct():
    assert rule_strings(reduct(CHOICE, {a, c})) == ["a.", "c :- a.", "c :- b."]
    assert rule_strings(reduct(CHOICE, {a, b})) == ["c :- a.", "c :- b."]
    positive = parse_program("a. b :- a.")
    assert reduct(positive, {c}) == positive


def test_least_model():
    assert least_model(parse_program("a. c :- a. c :- b.")) == {a, c}
    assert least_model(Program()) == frozenset()
    assert least_model(parse_program("a. b :- a. c :- b.")) == {a, b, c}


def test_is_stable():
    assert is_stable(CHOICE, {a, c})
    assert not is_stable(CHOICE, {a, b, c})
    assert not is_stable(parse_program("a. :- a."), {a})


def test_stratification():
    assert not is_stratified(CHOICE)
    tsp = parse_program(
        "visited(I) :- visited(J), c(J,I). visited(1) :- c(J,1). "
        "missedCity :- city(I), not visited(I)."
    )
    assert is_stratified(tsp)
    assert is_stratified(parse_program("a. b :- a."))
    assert is_stratified(ground(CHOICE)) is False


def test_enumeration():
    assert set(enumerate_stable_models(CHOICE)) == {frozenset({a, c}), frozenset({b, c})}
    assert list(enumerate_stable_models(parse_program("a. b :- not c."))) == [frozenset({a, b})]
    assert list(enumerate_stable_models(parse_program("a. :- a."))) == []
    assert len(list(enumerate_stable_models(CHOICE, limit=1))) == 1


def test_positive_loop_is_unfounded():
    prog = parse_program("a :- b. b :- a. c :- not a.")
    assert list(enumerate_stable_models(prog)) == [frozenset({c})]


@settings(max_examples=300)
@given(ground_programs(max_atoms=7, max_rules=12))
def test_enumeration_matches_brute_force(program):
    got = list(enumerate_stable_models(program))
    assert len(got) == len(set(got))
    assert set(got) == set(brute_stable_models(program))


@settings(max_examples=100)
@given(ground_programs(max_atoms=5, max_rules=8))
def test_is_stable_matches_brute_force(program):
    import itertools

    base = sorted(set(program.atoms()), key=str)
    models = set(brute_stable_models(program))
    for bits in itertools.product((0, 1), repeat=len(base)):
        i = frozenset(x for x, bit in zip(base, bits) if bit)
        assert is_stable(program, i) == (i in models)


@given(ground_programs(max_atoms=7, max_rules=12))
def test_minimality(program):
    models = list(enumerate_stable_models(program))
    for m in models:
        assert not any(m < other for other in models)


@given(ground_programs(negation=False, constraints=False))
def test_positive_programs_have_their_least_model(program):
    assert list(enumerate_stable_models(program)) == [least_model(program)]


@given(ground_programs(constraints=False))
def test_stratified_programs_have_one_model(program):
    if is_stratified(program):
        models = list(enumerate_stable_models(program))
        assert models == [stratified_model(program)]


@given(ground_programs(max_atoms=7, max_rules=12), st.randoms(use_true_random=False))
def test_modularity(program, rnd):
    # P1 = rules defining a set of atoms closed under dependencies; P2 may use P1
    rules = list(program.rules)
    heads = {r.head for r in rules if r.head is not None}
    closed = set()
    seed = rnd.sample(sorted(heads, key=str), k=len(heads) // 2) if heads else []
    todo = list(seed)
    while todo:
        x = todo.pop()
        if x in closed:
            continue
        closed.add(x)
        for r in rules:
            if r.head == x:
                todo.extend(l.atom for l in r.literals)
    p1 = Program(tuple(r for r in rules if r.head is not None and r.head in closed))
    p1_atoms = closed | set(p1.atoms())
    lower = set(enumerate_stable_models(p1))
    for m in enumerate_stable_models(program):
        assert frozenset(x for x in m if x in p1_atoms) in lower


def test_stratified_chain_is_fast():
    n = 400
    text = "p0.\n" + "".join(f"p{i} :- p{i - 1}, not q{i}.\nq{i} :- r{i}.\n" for i in range(1, n))
    start = time.perf_counter()
    (m,) = enumerate_stable_models(parse_program(text))
    assert len(m) == n
    assert time.perf_counter() - start < 5
