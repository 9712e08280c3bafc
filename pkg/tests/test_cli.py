import io
from importlib import resources

import pytest

from pap.cli import main

DATA = resources.files("pap") / "data"


def run(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def files(stem):
    return [str(DATA / f"{stem}{ext}") for ext in (".dl", ".hyp", ".obs")]


def test_solve_network():
    code, out, _ = run("solve", *files("network"))
    assert code == 0
    assert out == "COST 2\nSOLUTION offline(b) offline(f)\n"


def test_trace_decreases_to_cost():
    code, out, _ = run("solve", "--trace", *files("network"))
    lines = out.splitlines()
    costs = [int(l.split()[1]) for l in lines if l.startswith("IMPROVED")]
    assert costs == sorted(set(costs), reverse=True)
    assert costs[-1] == 2 and "COST 2" in lines


def test_queries():
    assert run("relevant", "--atom", "offline(c)", *files("network"))[1] == "ANSWER no\n"
    assert run("necessary", "--atom", "offline(b)", *files("network"))[1] == "ANSWER yes\n"
    assert run("consistency", *files("network"))[1] == "ANSWER yes\n"
    s1 = str(DATA / "network_s1.set")
    assert run("optimal", "--set", s1, *files("network"))[1] == "ANSWER yes\n"
    assert run("admissible", "--set", s1, *files("network"))[1] == "ANSWER yes\n"


def test_blocks_world_plan(monkeypatch):
    plan = str(DATA / "blocks_plan7.set")
    monkeypatch.setenv("PAP_INT_BOUND", "6")
    assert run("admissible", "--set", plan, *files("blocks"))[1] == "ANSWER yes\n"
    assert run("optimal", "--set", plan, *files("blocks"))[1] == "ANSWER no\n"


def test_all_optimal_solutions():
    code, out, _ = run("solve", "--all", *files("tsp4"))
    lines = out.splitlines()
    assert lines[0] == "COST 5" and len(lines) == 3
    code, out, _ = run("solve", "--all", "--limit", "1", *files("tsp4"))
    assert len(out.splitlines()) == 2


def test_inconsistent_exit_code(tmp_path):
    prog = tmp_path / "p.dl"
    prog.write_text(":- not q.\n")
    (tmp_path / "h.hyp").write_text("")
    code, out, _ = run("solve", str(prog), str(tmp_path / "h.hyp"))
    assert code == 10 and out == "INCONSISTENT\n"


@pytest.mark.parametrize(
    "program,hyps",
    [("a :- .", "h."), ("p :- q.", "p."), ("p(X) :- not q(X).", "h."), ("a.", "h [-2].")],
)
def test_input_errors(tmp_path, program, hyps):
    (tmp_path / "p.dl").write_text(program)
    (tmp_path / "h.hyp").write_text(hyps)
    code, out, err = run("solve", str(tmp_path / "p.dl"), str(tmp_path / "h.hyp"))
    assert code == 2 and out == "" and err.startswith("error:")


def test_missing_file_and_bad_usage(tmp_path):
    assert run("solve", str(tmp_path / "nope.dl"))[0] == 2
    assert run("relevant", *files("network"))[0] == 2
    assert run("frobnicate", "x.dl")[0] == 2


def test_multiple_program_files_are_concatenated(tmp_path):
    (tmp_path / "a.dl").write_text("ok :- h.\n")
    (tmp_path / "b.dl").write_text("ok :- g.\n")
    (tmp_path / "x.hyp").write_text("h [2]. g [1].\n")
    (tmp_path / "x.obs").write_text("ok.\n")
    paths = [str(tmp_path / n) for n in ("a.dl", "b.dl", "x.hyp", "x.obs")]
    assert run("solve", *paths)[1] == "COST 1\nSOLUTION g\n"


def test_output_is_deterministic():
    assert run("solve", "--all", *files("tsp4")) == run("solve", "--all", *files("tsp4"))


def test_translate():
    code, out, _ = run("translate", *files("network"))
    assert code == 0 and "_sol(1) :- not _nsol(1)." in out and ":~ offline(f). [1:]" in out
