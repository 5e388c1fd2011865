"""Dispatch-level tests for the command-line front end."""

import json

import pytest

from qkflag.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# -- the three documented invocations ---------------------------------------

def test_verify_incidence_example(capsys):
    code, doc, err = run_json(capsys, "verify", "incidence", "--n", "3",
                              "--qdeg", "2")
    assert code == 0
    assert doc["status"] == "PASS"
    assert doc["check"] == "incidence-whitney"
    assert doc["config"]["n"] == 3
    assert "PASS" in err


def test_verify_classical_example(capsys):
    code, doc, err = run_json(capsys, "verify", "classical", "--n", "3",
                              "--ranks", "1,2")
    assert code == 0
    assert doc["dimension"] == 6
    assert doc["status"] == "PASS"


def test_gw_2pt_example(capsys):
    code, doc, err = run_json(capsys, "gw", "--n", "3", "--ranks", "1,2",
                              "--type", "2pt", "--sigma", "detS2",
                              "--w", "123", "--d", "0,1")
    assert code == 0
    assert doc["value"] == "0"


# -- payload structure -------------------------------------------------------

def test_config_embedded_everywhere(capsys):
    code, doc, _ = run_json(capsys, "curve-nbhd", "--n", "4", "--ranks", "1,3",
                            "--w", "2134", "--d", "1,1")
    assert code == 0
    cfg = doc["config"]
    assert cfg == {
        "n": 4, "ranks": [1, 3], "qdeg": 2, "coeff_mode": "seed:0",
        "command": "curve-nbhd", "params": {"w": [2, 1, 3, 4], "d": [1, 1]},
    }
    assert doc["gamma"] == [4, 2, 3, 1]


def test_stdout_is_json_only(capsys):
    code, out, err = run(capsys, "schubert", "--n", "3", "--w", "213")
    assert code == 0
    json.loads(out)          # the whole stream must parse
    assert err.strip()       # the summary goes to stderr


def test_schubert_restrictions(capsys):
    code, doc, _ = run_json(capsys, "schubert", "--n", "3", "--ranks", "1,2",
                            "--w", "321", "--basis", "B")
    assert code == 0
    rows = doc["class"]["restrictions"]
    assert len(rows) == 6
    # the class attached to the longest element is the unit: all ones
    assert all(r["value"] == "1" for r in rows)


def test_schubert_opposite_basis(capsys):
    code, doc, _ = run_json(capsys, "schubert", "--n", "3", "--w", "321",
                            "--basis", "B-")
    assert code == 0
    assert doc["class"]["basis"] == "B-"


def test_gw_3pt_value(capsys):
    code, doc, _ = run_json(capsys, "gw", "--n", "3", "--ranks", "1,2",
                            "--type", "3pt", "--sigma", "O:231",
                            "--L", "detS2", "--w", "213", "--d", "1,0")
    assert code == 0
    assert doc["value"] == "T1*T2"
    assert "conditional" not in doc


def test_product_element_rows(capsys):
    code, doc, _ = run_json(capsys, "product", "--n", "3", "--L", "detS2",
                            "--sigma", "O:213")
    assert code == 0
    coords = doc["product"]["coords"]
    assert coords[0] == {"w": [2, 1, 3],
                         "series": [{"d": [0, 0], "coeff": "T1*T2"}]}
    assert all(row["series"] for row in coords)


def test_table_rows(capsys):
    code, doc, _ = run_json(capsys, "table", "--n", "3", "--ranks", "1,2",
                            "--qdeg", "1")
    assert code == 0
    assert len(doc["rows"]) == 6 * 4
    first = doc["rows"][0]
    assert set(first) == {"w", "d", "gamma"}


# -- verification family -----------------------------------------------------

def test_verify_coulomb(capsys):
    code, doc, _ = run_json(capsys, "verify", "coulomb", "--n", "3")
    assert code == 0
    assert doc["check"] == "coulomb-equivalence"
    assert doc["status"] == "PASS"


def test_verify_flag_reduction(capsys):
    code, doc, _ = run_json(capsys, "verify", "flag-reduction", "--n", "3")
    assert code == 0
    assert doc["status"] == "PASS"


def test_verify_presentation(capsys):
    code, doc, _ = run_json(capsys, "verify", "presentation", "--n", "3",
                            "--coeffs", "exact")
    assert code == 0
    assert doc["status"] == "PASS"
    assert doc["dimensions"] == {
        "classical": 6, "quantum-polynomial": 6,
        "quantum-power-series": 6, "expected": 6}
    assert doc["psi_generators_checked"] == 10
    assert doc["witnesses"] == []


def test_verify_classical_seeded(capsys):
    code, doc, _ = run_json(capsys, "verify", "classical", "--n", "4",
                            "--ranks", "1,3", "--coeffs", "seed:7")
    assert code == 0
    assert doc["dimension"] == 12
    assert doc["config"]["coeff_mode"] == "seed:7"


# -- conditional gating ------------------------------------------------------

def test_full_flag_product_needs_flag(capsys):
    code, out, err = run(capsys, "product", "--n", "4", "--L", "detS2",
                         "--sigma", "one")
    assert code == 2
    assert out == ""
    assert "--conditional" in err


def test_full_flag_product_tagged_conditional(capsys):
    code, doc, _ = run_json(capsys, "product", "--n", "4", "--L", "detS3",
                            "--sigma", "one", "--conditional", "--qdeg", "1")
    assert code == 0
    assert doc["conditional"] is True


def test_no_oracle_space_rejected(capsys):
    code, out, err = run(capsys, "product", "--n", "5", "--ranks", "1,3",
                         "--L", "detS1", "--sigma", "one", "--conditional")
    assert code == 2
    assert "oracle" in err


# -- usage errors ------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("verify", "classical", "--n", "2", "--ranks", "5"),
    ("schubert", "--n", "3", "--w", "212"),
    ("curve-nbhd", "--n", "3", "--w", "213", "--d", "1"),
    ("gw", "--n", "3", "--type", "3pt", "--sigma", "one", "--w", "123",
     "--d", "0,0"),                               # 3pt without --L
    ("gw", "--n", "3", "--type", "2pt", "--sigma", "mystery", "--w", "123",
     "--d", "0,0"),
    ("product", "--n", "3", "--L", "nope", "--sigma", "one"),
    ("verify", "classical", "--n", "3", "--coeffs", "sometimes"),
    ("verify", "incidence", "--n", "4", "--ranks", "1,2"),
    ("verify", "mystery", "--n", "3"),
    ("nosuch",),
    (),
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.strip()


def test_help_exits_zero(capsys):
    code, out, err = run(capsys, "--help")
    assert code == 0


def test_exact_mode_guard_is_reported(capsys):
    code, out, err = run(capsys, "verify", "classical", "--n", "4",
                         "--ranks", "1,3", "--coeffs", "exact")
    assert code == 2
    assert "n <= 3" in err


# -- determinism -------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("product", "--n", "3", "--L", "sub1", "--sigma", "wedge1Q2"),
    ("verify", "classical", "--n", "3", "--ranks", "1,2"),
    ("table", "--n", "3", "--qdeg", "1"),
])
def test_byte_identical_reruns(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
