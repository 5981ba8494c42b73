import json

import pytest

from htriang.cli import bundled_examples, main, run


def test_bundled_examples():
    ex = {e.name: e for e in bundled_examples()}
    assert set(ex) == {"fig8", "s2xs1", "l31"}
    assert ex["l31"].tags == ("reconstructed",)
    assert not ex["fig8"].tags
    assert ex["fig8"].text.count("label ") == 32


def test_validate_and_homology(capsys):
    assert main(["validate", "fig8"]) == 0
    assert main(["homology", "s2xs1"]) == 0
    out = capsys.readouterr().out
    assert "H_1 = Z\n" in out


def test_map_verify(capsys):
    assert main(["map", "--verify", "fig8"]) == 0
    assert "status: proven-instance" in capsys.readouterr().out
    assert main(["map", "--verify", "s2xs1"]) == 1


def test_map_diagnose_json(capsys):
    assert main(["map", "--diagnose", "--format", "json", "s2xs1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == "htriang.map/1"
    assert payload["diagnostics"]["kernel"] == "Z"


@pytest.mark.parametrize("cmd", ["gluing", "collapse", "ring", "solve"])
def test_json_payloads_round_trip(cmd, capsys):
    assert main([cmd, "--format", "json", "l31"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == f"htriang.{cmd}/1" and payload["exit"] == 0
    assert json.loads(json.dumps(payload)) == payload


def test_ring_simplify(capsys):
    assert main(["ring", "--simplify", "s2xs1"]) == 0
    assert "unit skeleton: Z + Z + Z/6" in capsys.readouterr().out


def test_collapse_writes_file(tmp_path, capsys):
    out = tmp_path / "fig8.itri"
    assert main(["collapse", "fig8", "-o", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("tets 2") and "distinguished" not in text
    assert capsys.readouterr().out == ""


def test_diagnose(capsys):
    assert main(["diagnose", "fig8", "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert "transport residual" in out and "proven-instance" in out
    assert main(["diagnose", "s2xs1"]) == 0


def test_deterministic(capsys):
    main(["solve", "s2xs1", "--seed", "5", "--retries", "3"])
    a = capsys.readouterr().out
    main(["solve", "s2xs1", "--seed", "5", "--retries", "3"])
    assert capsys.readouterr().out == a


def test_input_errors(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing.htri")]) == 2
    bad = tmp_path / "bad.htri"
    bad.write_text("tets 1\nglue 0 0 0 1 1023\n")
    assert main(["homology", str(bad)]) == 2
    assert main(["frobnicate", "fig8"]) == 2
    capsys.readouterr()


def test_invalid_particular_is_a_check_failure(tmp_path, capsys):
    text = next(e.text for e in bundled_examples() if e.name == "fig8")
    bad = tmp_path / "moved.htri"
    bad.write_text(text.replace("distinguished 0 1 0 3", "distinguished 1 0 1 2"))
    assert main(["validate", str(bad)]) == 1
    assert main(["gluing", str(bad)]) == 2
    capsys.readouterr()


def test_run_returns_result(capsys):
    res = run(["homology", "l31", "--format", "json"])
    assert res.code == 0 and res.payload["H1"] == "Z/3"
    capsys.readouterr()
