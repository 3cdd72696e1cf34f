import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from frobenius_ml.cli import main
from frobenius_ml.runner import run_scenario
from frobenius_ml.scenario import (
    Rational,
    Scenario,
    ScenarioError,
    load_scenario,
    parse_scenario,
    serialize,
)

CORPUS = sorted((Path(__file__).resolve().parent.parent / "scenarios").glob("*.fml"))


def test_corpus_is_present():
    assert len(CORPUS) >= 10


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    sc = load_scenario(path)
    again = parse_scenario(serialize(sc))
    assert again == sc


def test_parse_values_and_comments():
    sc = parse_scenario(
        "# header comment\n"
        "[gm-intersect]\n"
        "torus.q = 2   # trailing\n"
        "torus.generators = [[[0, 1], [1]],\n"
        "                    [[1], [1] / [1, 1]]]\n"
        "relation.coeffs = [[1], [1]]\n"
        "relation.rhs = [1]\n"
        "solver.box = 4\n"
    )
    assert sc.kind == "gm-intersect"
    assert sc["torus.generators"][1][1] == Rational((1,), (1, 1))
    assert sc.echo()["torus.generators"][1][1] == {"num": [1], "den": [1, 1]}


def test_negative_coefficients():
    sc = parse_scenario("[recsolve]\nrecurrence.f = [-1,-1,1]\nrecurrence.k = 1\n")
    assert sc["recurrence.f"] == [-1, -1, 1]


def error_of(text):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    return info.value


def test_unknown_key_has_position():
    err = error_of("[drinfeld-sharp]\ndrinfeld.q = 3\n  drinfeld.bogus = 1\ndrinfeld.deg_bound = 4\n")
    assert (err.line, err.col) == (3, 3)
    assert "drinfeld.bogus" in str(err)


def test_missing_required_key():
    err = error_of("[drinfeld-sharp]\ndrinfeld.deg_bound = 4\n")
    assert "drinfeld.q" in str(err)


def test_duplicate_key():
    err = error_of("[drinfeld-sharp]\ndrinfeld.q = 3\ndrinfeld.q = 5\ndrinfeld.deg_bound = 4\n")
    assert "duplicate" in str(err) and err.line == 3


def test_bad_character_position():
    err = error_of("[recsolve]\nrecurrence.f = [1, 2; 3]\nrecurrence.k = 1\n")
    assert err.line == 2 and err.col == 21


def test_type_mismatch():
    err = error_of("[recsolve]\nrecurrence.f = 7\nrecurrence.k = 1\n")
    assert "list of integers" in str(err)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "recurrence.k = 1\n",
        "[nope]\n",
        "[recsolve]\n[recsolve]\n",
        "[recsolve]\nrecurrence.f [1]\n",
        "[gm-intersect]\ntorus.q = 2\ntorus.generators = [[[1] / [0]]]\nrelation.coeffs = [[1]]\nrelation.rhs = [1]\nsolver.box = 1\n",
        "[recsolve]\nrecurrence.f = [1, 1\nrecurrence.k = 1\n",
    ],
)
def test_malformed_inputs_raise(text):
    error_of(text)


ints = st.integers(-50, 50)


@given(
    st.lists(ints, min_size=1, max_size=4),
    st.integers(1, 3),
    st.lists(st.integers(1, 64), max_size=4),
)
def test_serialize_parse_round_trip(f, k, moduli):
    values = {"recurrence.f": f, "recurrence.k": k}
    if moduli:
        values["periods.moduli"] = moduli
    sc = Scenario("recsolve", values)
    assert parse_scenario(serialize(sc)) == sc


@pytest.mark.parametrize("path", [p for p in CORPUS if "refused" not in p.stem], ids=lambda p: p.stem)
def test_runs_are_deterministic(path):
    sc = load_scenario(path)
    a, _ = run_scenario(sc)
    b, _ = run_scenario(load_scenario(path))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


# command line --------------------------------------------------------------------------


def scenario(name):
    return str(next(p for p in CORPUS if p.stem == name))


def test_cli_run_success(capsys):
    assert main(["run", scenario("orbit_congruent_mod_3")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["report"]["status"]["tag"] == "complete"
    assert "seconds" in out["timing"]
    assert out["report"]["results"]["fsets_readable"] == ["(1, 0) + S((0, 1); 2)"]


def test_cli_refusal_exit_code(capsys):
    assert main(["run", scenario("orbit_refused_zero_frobenius")]) == 2
    out = json.loads(capsys.readouterr().out)
    assert "refusal" in out["report"]


def test_cli_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.fml"
    bad.write_text("[recsolve]\nrecurrence.f = [1,\n")
    assert main(["run", str(bad)]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.fml")]) == 1


def test_cli_out_file(tmp_path):
    target = tmp_path / "r.json"
    assert main(["gm", "intersect", scenario("gm_unit_equation"), "--box", "8", "--out", str(target)]) == 0
    rep = json.loads(target.read_text())["report"]
    assert rep["results"]["solutions"] == [[1, 1], [2, 2], [4, 4], [8, 8]]


def test_cli_gm_rejects_other_kind():
    assert main(["gm", "intersect", scenario("recsolve_power_equals_8")]) == 1


def test_cli_drinfeld(capsys):
    assert main(["drinfeld", "survey", "--q", "3", "--deg", "9"]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert [h["a_readable"] for h in rep["two_term"]] == ["t", "t^3", "t^9"]
    assert main(["drinfeld", "sharp", "--q", "3", "--deg", "6"]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert rep["property_1_on_X_equals_Fq_F2"]


def test_cli_validate_and_check(capsys):
    assert main(["validate", scenario("orbit_fibonacci_torsion")]) == 0
    capsys.readouterr()
    assert main(["check", "--seed", "1", "--quick"]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert all(s["failures"] == 0 for s in rep["suites"])


def test_cli_overrides(capsys):
    assert main(["run", scenario("recsolve_fibonacci_even"), "--nmax", "10", "--sieve", "2,3"]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert rep["overrides"]["nmax"] == 10
