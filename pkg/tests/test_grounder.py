import pytest
from hypothesis import given

from pap.errors import PapError
from pap.grounder import check_safety, ground
from pap.parser import parse_program
from pap.stable import enumerate_stable_models
from pap.syntax import Atom

from strategies import ground_programs


def rules_of(gp):
    return sorted(str(gp.to_rule(r)) for r in gp.rules)


def test_simple_instantiation():
    gp = ground(parse_program("q(1). q(2). p(X) :- q(X)."))
    assert rules_of(gp) == ["p(1) :- q(1).", "p(2) :- q(2).", "q(1).", "q(2)."]


def test_safety():
    assert check_safety(parse_program("p(X) :- q(X).")) == []
    (v,) = check_safety(parse_program("p(X) :- not q(X)."))
    assert v.variables == ("X",)
    assert check_safety(parse_program("badTour :- c(I,J), c(I,K), J != K.")) == []
    assert check_safety(parse_program("t(Y) :- t(X), Y = X + 1."))  == []
    assert check_safety(parse_program("p(X) :- X = 1."))  == []
    assert check_safety(parse_program("p(X) :- q(Y), X < Y."))


def test_unsafe_program_rejected():
    with pytest.raises(PapError) as e:
        ground(parse_program("p(X) :- not q(X)."))
    assert e.value.code == "UNSAFE_PROGRAM"


def test_inequality_instances():
    cs = [Atom("c", (i, j)) for i in (1, 2) for j in (1, 2)]
    gp = ground(parse_program("badTour :- c(I,J), c(I,K), J != K."), assumable=cs)
    assert len(gp.rules) == 4
    assert all(len(r.pos) == 2 for r in gp.rules)


def test_successor_respects_integer_bound():
    gp = ground(parse_program("t(0). t(1). t(2). t(3). s(T1) :- t(T), T1 = T + 1."), integer_bound=3)
    heads = sorted(str(gp.atoms[r.head]) for r in gp.rules if gp.atoms[r.head].predicate == "s")
    assert heads == ["s(1)", "s(2)", "s(3)"]


def test_integer_constant_above_bound():
    with pytest.raises(PapError) as e:
        ground(parse_program("t(7)."), integer_bound=3)
    assert e.value.code == "INTEGER_OVERFLOW"


def test_sums_and_comparisons():
    prog = parse_program("v(30). v(25). w(a). big(X,Y) :- v(X), v(Y), X + Y > 50, X != Y. s :- w(X), X > 3.")
    gp = ground(prog)
    heads = {str(gp.atoms[r.head]) for r in gp.rules}
    assert {"big(30,25)", "big(25,30)"} <= heads
    # symbols sort after integers
    assert "s" in heads


def test_underivable_negation_is_dropped():
    gp = ground(parse_program("a :- not b."))
    (r,) = gp.rules
    assert r.neg == () and [str(a) for a in gp.atoms] == ["a"]


def test_unused_constants_do_not_matter():
    prog = parse_program("node(a). node(b). r(X) :- node(X), not s(X). s(X) :- node(X), not r(X).")
    models = set(enumerate_stable_models(ground(prog)))
    assert models == set(enumerate_stable_models(ground(prog, extra_constants={"zz", 9})))
    assert len(models) == 4


@given(ground_programs(weak=True))
def test_ground_is_idempotent(program):
    once = ground(program)
    twice = ground(once.to_program())
    assert rules_of(twice) == rules_of(once)


def test_size_guard():
    prog = parse_program("d(1). d(2). d(3). e(a). e(b). p(X,Y,Z) :- d(X), d(Y), e(Z), X != Y.")
    gp = ground(prog)
    universe = len(gp.universe.constants)
    max_vars = max(len(r.variables()) for r in prog.rules)
    assert len(gp.rules) <= len(prog.rules) * universe**max_vars
