import itertools

import pytest

from pap.errors import PapError
from pap.parser import parse_program, parse_rule
from pap.syntax import Atom, Literal, Program, Var, facts, is_model, literal_true, rule_satisfied

a, b, c = Atom("a"), Atom("b"), Atom("c")
CHOICE = parse_program("a :- not b. b :- not a. c :- a. c :- b.")


def test_literal_truth():
    assert literal_true(Literal(a), {a, c})
    assert literal_true(Literal(b, False), {a, c})
    assert literal_true(Literal(a, False), set())
    assert not literal_true(Literal(a), set())


def test_nonground_literal_rejected():
    with pytest.raises(PapError) as e:
        literal_true(Literal(Atom("p", (Var("X"),))), set())
    assert e.value.code == "NONGROUND"


def test_rule_satisfaction():
    assert rule_satisfied(parse_rule("c :- a."), {a, c})
    assert not rule_satisfied(parse_rule(":- a."), {a})
    assert rule_satisfied(parse_rule("a :- b."), set())


def test_is_model():
    assert is_model(CHOICE, {a, c})
    assert not is_model(CHOICE, set())
    assert is_model(Program(), set())


@pytest.mark.parametrize("rule", ["a :- b, not c.", ":- a, not b.", "a.", "c :- a, b, not d."])
def test_rule_satisfaction_exhaustive(rule):
    r = parse_rule(rule)
    base = sorted(set(r.atoms()), key=str)
    for bits in itertools.product((0, 1), repeat=len(base)):
        i = {x for x, bit in zip(base, bits) if bit}
        body_false = any((l.atom in i) != l.positive for l in r.literals)
        expected = (r.head is not None and r.head in i) or body_false
        assert rule_satisfied(r, i) == expected


def test_removing_rules_keeps_models():
    for k in range(len(CHOICE.rules)):
        smaller = Program(CHOICE.rules[:k] + CHOICE.rules[k + 1 :])
        assert is_model(smaller, {a, c})


def test_printing():
    assert str(Atom("p", ("a", 1))) == "p(a,1)"
    assert str(Literal(a, False)) == "not a"
    assert str(facts([a, b])) == "a.\nb.\n"
