import json
import subprocess
import sys

import pytest

from coxforge import coxconstruct as cc
from coxforge import serialize
from coxforge.cli import main
from coxforge.groebner import ideal_equal
from coxforge.presentations import theorem1_presentation, theorem2_presentation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_present_json(capsys):
    code, out, _ = run(capsys, "present", "--p1-power", "2", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == "coxforge/1"
    assert len(d["ring"]["variables"]) == 6
    assert d["grading_rank"] == 3
    assert len(d["generators"]) == 1


def test_present_text_listing(capsys):
    code, out, _ = run(capsys, "present", "--product-square", "1", "--format", "text")
    assert code == 0
    assert "deg(T_inf) = (0,0,1)" in out


def test_present_rejects_small_n(capsys):
    code, _, err = run(capsys, "present", "--p1-power", "1")
    assert code == 2
    assert "n must be ≥ 2" in err


@pytest.mark.parametrize("argv", [["present"], ["present", "--product-square", "1,x"],
                                  ["present", "--product-square", "0"],
                                  ["present", "--p1-power", "2", "--product-square", "1"],
                                  ["verify", "--p1-power", "2", "--step-budget", "0"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["present", "--p1-power", "2", "--format", "yaml"])
    assert exc.value.code == 2


def test_verify_power_p1_3(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "--p1-power", "3", "--output", str(out_file))
    assert code == 0
    d = json.loads(out_file.read_text())
    assert d["overall"] == "pass"
    assert sum(c["status"] == "pass" for c in d["checks"]) >= 6
    assert "[PASS]" in err


def test_verify_product_square_1_1(capsys):
    code, out, _ = run(capsys, "verify", "--product-square", "1,1")
    assert code == 0
    assert json.loads(out)["overall"] == "pass"


def test_verify_budget_exhaustion(capsys):
    code, out, err = run(capsys, "verify", "--p1-power", "4", "--step-budget", "10")
    assert code == 3
    assert "budget exceeded" in err
    d = json.loads(out)
    failing = {c["name"] for c in d["checks"] if c["status"] == "fail"}
    assert "ideal_equal" in failing


def test_verify_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("COXFORGE_STEP_BUDGET", "10")
    assert run(capsys, "verify", "--p1-power", "4")[0] == 3


def test_verify_negative_controls(capsys):
    code, out, _ = run(capsys, "verify", "--product-square", "1", "--negative-controls", "--no-timings")
    assert code == 0
    rows = json.loads(out)["negative_controls"]
    assert rows and all(r["detected"] for r in rows)


def test_pipeline_json(capsys):
    code, out, _ = run(capsys, "pipeline", "--p1-power", "2")
    assert code == 0
    d = json.loads(out)
    assert d["kind"] == "pipeline"
    P = serialize.load(out)
    assert ideal_equal(P.ideal, theorem2_presentation(2).ideal)


def test_pipeline_budget_exit(capsys):
    assert run(capsys, "pipeline", "--p1-power", "4", "--step-budget", "10")[0] == 3


def test_export_singular(capsys, tmp_path):
    path = tmp_path / "y2.sing"
    code, _, _ = run(capsys, "export", "--p1-power", "2", "--format", "singular", "--output", str(path))
    assert code == 0
    text = path.read_text()
    ring_at = text.index("ring R = 0, (")
    ideal_at = text.index("ideal I =")
    assert ring_at < ideal_at
    assert "), dp;" in text and text.rstrip().endswith(";")
    assert "S_1_2*S_3_4" in text or "S_1_4*S_2_3" in text


def test_export_macaulay2(capsys, tmp_path):
    path = tmp_path / "x.m2"
    assert run(capsys, "export", "--product-square", "1", "--format", "macaulay2", "-o", str(path))[0] == 0
    text = path.read_text()
    assert text.startswith("-- ")
    assert "R = QQ[" in text and "Degrees => {{0,0,1}," in text and "I = ideal(" in text


def test_export_requires_output(capsys):
    assert run(capsys, "export", "--p1-power", "2")[0] == 2


def test_export_unwritable_path(capsys, tmp_path):
    bad = tmp_path / "missing_dir" / "out.json"
    code, _, err = run(capsys, "export", "--p1-power", "2", "--output", str(bad))
    assert code == 2 and "cannot write" in err


def test_export_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "export", "--p1-power", "3", "--output", str(a))
    run(capsys, "export", "--p1-power", "3", "--output", str(b))
    assert a.read_bytes() == b.read_bytes()
    for fmt in ("singular", "macaulay2", "text"):
        run(capsys, "export", "--p1-power", "3", "--format", fmt, "--output", str(a))
        run(capsys, "export", "--p1-power", "3", "--format", fmt, "--output", str(b))
        assert a.read_bytes() == b.read_bytes()


def test_export_pipeline(capsys, tmp_path):
    path = tmp_path / "p.json"
    assert run(capsys, "export", "--product-square", "1", "--what", "pipeline", "-o", str(path))[0] == 0
    P = serialize.load(path.read_text())
    assert ideal_equal(P.ideal, theorem1_presentation((1,)).ideal)


@pytest.mark.parametrize("make", [lambda: theorem2_presentation(3), lambda: theorem1_presentation((2, 1))])
def test_presentation_round_trip(make):
    P = make()
    Q = serialize.load(serialize.to_json(serialize.presentation_to_dict(P)))
    assert Q.ring == P.ring
    assert ideal_equal(Q.ideal, P.ideal)
    assert Q.generators == P.generators
    assert Q.extra_var == P.extra_var


def test_load_rejects_foreign_documents():
    with pytest.raises(ValueError):
        serialize.load(json.dumps({"schema": "other/1", "kind": "presentation"}))


def test_spec_round_trip():
    from coxforge.verify import spec_to_dict
    for spec in (cc.PowerP1(3), cc.ProductSquare((2, 1))):
        assert serialize.spec_from_dict(spec_to_dict(spec)) == spec


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "coxforge", "present", "--p1-power", "2", "--format", "text"],
                         capture_output=True, text=True, check=True)
    assert "deg(S_3_4) = (0,0,1)" in out.stdout
