import io
import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyltype.checks import (
    context,
    random_element,
    random_extended,
    random_spec,
    random_vector,
)
from weyltype.classify import ActionTable, table_from_spec
from weyltype.cli import EvalError, ParseError, evaluate, main, parse, persist
from weyltype.repmod import ModuleSpec
from weyltype.weyl import AlgebraElement

seeds = st.integers(0, 10**6)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- expressions -----------------------------------------------------------------


def test_spec_examples(Z):
    assert str(evaluate("[D, t^(1)]", Z)) == "t^(1)"
    assert str(evaluate("t^(1)*D - D*t^(1)", Z)) == "-t^(1)"
    assert evaluate("t^(0)*D^0", Z) == AlgebraElement.one(Z)


def test_precedence(Z):
    t = AlgebraElement.t(Z, (1,))
    assert evaluate("2*t^(1)^2", Z) == (t * t).scale(2)
    assert evaluate("-t^(1)^2", Z) == -(t * t)
    assert evaluate("1 + 2*3", Z) == 7
    assert evaluate("(D + 1)^2", Z) == evaluate("D*D + 2*D + 1", Z)
    # noncommutative, left associative
    assert evaluate("D*t^(1)*t^(1)", Z) == (AlgebraElement.D(Z) * t) * t


def test_sigma_and_central(Z, Zr2):
    assert str(evaluate("sigma(t^(1)*D)", Z)) == "t^(1) + t^(1)*D"
    assert str(evaluate("[t^(1), t^(-1)] + C", Z, central=True)) == "2*C"
    # without the flag a bracket of two plain elements stays in W
    assert str(evaluate("[t^(1), t^(-1)] + C", Z)) == "C"
    assert str(evaluate("[t^(2)*D, t^(-2)*D]", Z, central=True)) == "-4*t^(0)*D - C"
    assert str(evaluate("[t^(sqrt(2)), t^(-sqrt(2))] ", Zr2, central=True)) == "sqrt(2)*C"


def test_parse_errors_report_position(Z):
    with pytest.raises(ParseError) as info:
        parse("t^(1) + * D")
    assert info.value.pos == 8
    with pytest.raises(ParseError):
        parse("[D, t^(1)")
    with pytest.raises(ParseError):
        parse("D^x")
    with pytest.raises(ParseError):
        parse("q + 1")


def test_eval_errors(Z, Z2):
    with pytest.raises(EvalError):
        evaluate("t^(1/2)", Z)
    with pytest.raises(EvalError):
        evaluate("C", Z2)
    with pytest.raises(EvalError):
        evaluate("D", Z2)
    with pytest.raises(EvalError):
        evaluate("D3", Z2)
    with pytest.raises(EvalError):
        evaluate("t^(1)/D", Z)
    with pytest.raises(EvalError):
        evaluate("C*t^(1)", Z)
    with pytest.raises(EvalError):
        evaluate("t^(sqrt(3))", context("Z+Zsqrt2"))


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(["Z", "Z2", "Z+Zsqrt2"]))
def test_parse_format_roundtrip(seed, name):
    ctx = context(name)
    rng = random.Random(seed)
    x = random_element(ctx, rng).scale(ctx.combine([rng.randint(-2, 2) for _ in ctx.generators])[0] + 3)
    assert evaluate(str(x), ctx) == x
    if ctx.n == 1:
        e = random_extended(ctx, rng)
        assert evaluate(str(e), ctx, central=True) == e


# -- JSON documents -------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(["Z", "Z2", "Z+Zsqrt2"]))
def test_json_roundtrips(seed, name):
    ctx = context(name)
    rng = random.Random(seed)
    x = random_element(ctx, rng)
    doc = json.loads(json.dumps(persist.element_to_json(x)))
    assert persist.element_from_json(doc, ctx) == x
    assert persist.element_to_json(persist.element_from_json(doc, ctx)) == doc
    spec = random_spec(ctx, rng, ("plain", "twisted", "trivial", "direct_sum"))
    sdoc = json.loads(json.dumps(persist.spec_to_json(spec)))
    assert persist.spec_from_json(sdoc, ctx) == spec
    v = random_vector(spec, rng)
    vdoc = json.loads(json.dumps(persist.vector_to_json(v, ctx)))
    assert persist.vector_from_json(vdoc, ctx) == v


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


# -- commands ----------------------------------------------------------------------


def test_eval_and_bracket_commands(capsys):
    assert run(capsys, "eval", "[D, t^(1)]")[:2] == (0, "t^(1)\n")
    code, out, _ = run(capsys, "bracket", "t^(1)*D", "t^(-1)*D", "--central")
    assert code == 0 and out == "-2*t^(0)*D\n"
    code, out, _ = run(capsys, "eval", "D", "--format", "json")
    assert json.loads(out)["terms"] == [{"alpha": ["0"], "mu": [1], "coeff": "1"}]


def test_usage_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "t^(1")
    assert code == 2 and "position" in err
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == 2
    assert run(capsys, "classify", "--table", str(tmp_path / "missing.json"))[0] == 2


def test_context_file_and_env(capsys, tmp_path, monkeypatch, Zr2):
    path = write(tmp_path, "ctx.json", Zr2.to_json())
    assert run(capsys, "eval", "[D, t^(sqrt(2))]", "--context", path)[1] == "sqrt(2)*t^(sqrt(2))\n"
    monkeypatch.setenv(persist.CONTEXT_ENV, path)
    assert run(capsys, "eval", "t^(1+sqrt(2))")[1] == "t^(1+sqrt(2))\n"


def test_act_command(capsys, tmp_path, Z):
    spec = write(tmp_path, "m.json", persist.spec_to_json(ModuleSpec.plain(Z, [[[3]]])))
    vec = write(tmp_path, "v.json", {"entries": [{"beta": ["2"], "index": 0, "coeff": "1"}]})
    code, out, _ = run(capsys, "act", "t^(1)*D^2", "--module", spec, "--vector", vec)
    assert code == 0 and out == "25*y_(3)[0]\n"


def test_table_and_classify_commands(capsys, tmp_path, Z):
    spec = write(tmp_path, "m.json", persist.spec_to_json(ModuleSpec.twisted(Z, [[[1, 1], [0, 1]]])))
    code, out, _ = run(capsys, "table", "--module", spec, "--window", "2", "--format", "json")
    assert code == 0
    table = ActionTable.from_json(json.loads(out), Z)
    path = write(tmp_path, "t.json", table.to_json())
    code, out, _ = run(capsys, "classify", "--table", path)
    assert code == 0 and out.splitlines()[0] == "twisted p=2"
    zero = write(tmp_path, "zero.json", table_from_spec(ModuleSpec.trivial(Z, 1), 2).to_json())
    assert run(capsys, "classify", "--table", zero)[1] == "trivial\n"


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "jacobi", "--trials", "40", "--seed", "7")
    assert code == 0 and out == "PASS 40/40\n"


def test_solve_command(capsys):
    code, out, _ = run(capsys, "solve-p1", "--range", "4")
    assert code == 0
    assert out.splitlines()[0] == "families: 2"
    assert "c = -1 (twisted)" in out and "c = 1 (plain)" in out
    code, out, _ = run(capsys, "solve-p1", "--range", "4", "--c", "2")
    assert out.splitlines()[0] == "families: 0"


def test_repl(capsys, Z, monkeypatch):
    from weyltype.cli.main import build_parser, cmd_repl

    args = build_parser().parse_args(["repl"])
    stdin = io.StringIO("[D, t^(2)]\n# comment\nt^(\n:q\nD\n")
    cmd_repl(args, Z, stdin=stdin)
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "2*t^(2)"
    assert out[1].startswith("error:")
    assert len(out) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weyltype", "eval", "sigma(D^2)"], capture_output=True, text=True, check=True
    )
    assert proc.stdout == "-t^(0)*D^2\n"
