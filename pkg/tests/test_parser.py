from hypothesis import given, settings, strategies as st
import pytest

from pap.errors import ParseError, PapError
from pap.parser import (
    parse_atom,
    parse_atom_set,
    parse_hypotheses,
    parse_observations,
    parse_program,
    tokenize,
)
from pap.syntax import Atom, Builtin, Literal, Sum, Var

from strategies import ground_programs


def test_choice_program_has_four_rules():
    p = parse_program("a :- not b. b :- not a. c :- a. c :- b.")
    assert len(p.rules) == 4
    assert p.rules[0].negative_body == (Atom("b"),)


def test_weak_constraint_weight():
    p = parse_program(":~ b. [2:]")
    (w,) = p.weak_constraints
    assert w.body == (Literal(Atom("b")),)
    assert w.weight == 2
    assert parse_program(":~ b.").weak_constraints[0].weight == 1


def test_empty_body_is_an_error():
    with pytest.raises(ParseError) as e:
        parse_program("a :- .")
    assert e.value.line == 1 and e.value.column == 6
    assert e.value.expected


def test_builtins():
    r = parse_program("on(B,L,T1) :- on(B,L,T), T1 = T + 1, not moved(B,T).").rules[0]
    assert r.builtins == (Builtin("=", Var("T1"), Sum(Var("T"), 1)),)
    r = parse_program("x :- c(I,J), c(I,K), J != K, J < 3, K > J.").rules[0]
    assert [b.op for b in r.builtins] == ["!=", "<", ">"]


def test_anonymous_variables_are_distinct():
    r = parse_program("moved(B,T) :- move(B,_,T), other(_).").rules[0]
    names = [t.name for l in r.literals for t in l.atom.args if isinstance(t, Var)]
    assert names.count("B") == 1
    assert len({n for n in names if n.startswith("_")}) == 2


def test_comments_and_positions():
    p = parse_program("% header\na. % trailing\nb :- a.\n")
    assert len(p.rules) == 2
    with pytest.raises(ParseError) as e:
        parse_program("a.\n  b :- c d.")
    assert (e.value.line, e.value.column) == (2, 10)


def test_not_needs_whitespace():
    with pytest.raises(ParseError):
        parse_program("a :- not(b).")
    # identifiers merely starting with "not" are fine
    assert parse_program("a :- notb.").rules[0].positive_body == (Atom("notb"),)


def test_arity_clash():
    with pytest.raises(PapError) as e:
        parse_program("p(a). q :- p(a,b).")
    assert e.value.code == "ARITY_CLASH"


def test_hypotheses():
    hs = parse_hypotheses("offline(a) [1]. offline(b) [1].")
    assert [(str(h.atom), h.penalty) for h in hs] == [("offline(a)", 1), ("offline(b)", 1)]
    assert parse_hypotheses("bought(barilla) [500].")[0].penalty == 500
    assert parse_hypotheses("h.")[0].penalty == 1


@pytest.mark.parametrize(
    "text,code",
    [("h. h.", "DUPLICATE_HYPOTHESIS"), ("h [-1].", "NEGATIVE_WEIGHT"), ("p(X).", "NONGROUND_HYPOTHESIS")],
)
def test_hypothesis_errors(text, code):
    with pytest.raises(PapError) as e:
        parse_hypotheses(text)
    assert e.value.code == code


def test_observations():
    obs = parse_observations("not offline(a). not offline(e). not reaches(a,e).")
    assert len(obs) == 3 and not any(o.literal.positive for o in obs)
    assert parse_observations("ok.")[0].literal == Literal(Atom("ok"))
    assert len(parse_observations("ok. ok.")) == 1
    with pytest.raises(PapError) as e:
        parse_observations("p(X).")
    assert e.value.code == "NONGROUND_OBSERVATION"


def test_atoms_and_atom_sets():
    assert parse_atom("move(a,table,0)") == Atom("move", ("a", "table", 0))
    assert parse_atom_set("a. b. a.") == [Atom("a"), Atom("b")]


def test_tokens_carry_columns():
    toks = list(tokenize("p(X) :- q."))
    assert [(t.kind, t.column) for t in toks][:3] == [("IDENT", 1), ("(", 2), ("VAR", 3)]


@given(ground_programs(weak=True))
def test_round_trip(program):
    again = parse_program(str(program))
    assert again == program


@settings(max_examples=300)
@given(st.text(alphabet="ab(X,1) :-~.%not[]\n:=!<>+_", max_size=40))
def test_garbage_never_crashes(text):
    try:
        parse_program(text)
    except PapError as e:
        if isinstance(e, ParseError):
            assert e.line >= 1 and e.column >= 1


@settings(max_examples=300)
@given(st.text(max_size=40))
def test_arbitrary_text_never_crashes(text):
    for parse in (parse_program, parse_hypotheses, parse_observations):
        try:
            parse(text)
        except PapError:
            pass
