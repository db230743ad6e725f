"""Command line driver: exit codes, output formats, determinism."""

import json

import pytest

from cob3 import algebra_to_json, hadamard_algebra
from cob3.cli import ALGBAD, DIFFER, OK, USAGE, main


@pytest.fixture()
def alg_file(tmp_path):
    path = tmp_path / "plane.json"
    path.write_text(algebra_to_json(hadamard_algebra()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_eq_equal(capsys):
    code, out, _ = run(capsys, "eq", "m . swap", "m")
    assert code == OK
    assert "EQUAL" in out and "NOT-EQUAL" not in out


def test_eq_not_equal_sets_exit_code(capsys):
    code, out, _ = run(capsys, "eq", "pe(P)", "pe(Q)")
    assert code == DIFFER
    assert "NOT-EQUAL" in out


def test_eq_json_format(capsys):
    code, out, _ = run(capsys, "--format", "json", "eq", "m . swap", "m")
    assert code == OK
    data = json.loads(out)
    assert data["equal"] is True
    assert data["left_signature"] == data["right_signature"]


def test_parse_error_is_usage(capsys):
    code, _, err = run(capsys, "eq", "m . (", "m")
    assert code == USAGE
    assert "error:" in err


def test_type_error_is_usage(capsys):
    code, _, err = run(capsys, "eq", "m . m", "m")
    assert code == USAGE


def test_normalize_both_presentations(capsys):
    code, out, _ = run(capsys, "normalize", "m . swap")
    assert code == OK
    code2, out2, _ = run(capsys, "normalize", "m")
    assert out == out2  # semantic normal forms of one bordism coincide
    code3, out3, _ = run(capsys, "normalize", "m . swap", "--presentation", "G2")
    assert code3 == OK and out3.strip()


def test_eval_prints_exact_entries(capsys, alg_file):
    code, out, _ = run(capsys, "eval", "tr . pe(P) . unit", "--algebra", alg_file)
    assert code == OK
    assert "5" in out
    code, out, _ = run(
        capsys, "--format", "json", "eval", "pe(P)", "--algebra", alg_file
    )
    data = json.loads(out)
    assert data["d"] == 2 and data["entries"]


def test_eval_missing_file_is_usage(capsys):
    code, _, err = run(capsys, "eval", "m", "--algebra", "/nonexistent.json")
    assert code == USAGE


def test_eval_malformed_json_is_usage(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "eval", "m", "--algebra", str(bad))
    assert code == USAGE
    assert "JSON" in err


def test_invariant_values(capsys, alg_file):
    code, out, _ = run(
        capsys, "invariant", "--algebra", alg_file, "--manifold", "P # P"
    )
    assert code == OK
    assert "13" in out


def test_invariant_idempotent_blocks(capsys, alg_file):
    code, out, _ = run(
        capsys,
        "--format",
        "json",
        "invariant",
        "--algebra",
        alg_file,
        "--manifold",
        "P",
        "--idempotents",
    )
    data = json.loads(out)
    assert data["value"] == 5
    assert len(data["blocks"]) == 2
    assert data["character_sum"] == 5
    assert {b["prime_characters"]["P"] for b in data["blocks"]} == {2, 3}


def test_invariant_bad_manifold_is_usage(capsys, alg_file):
    code, _, err = run(
        capsys, "invariant", "--algebra", alg_file, "--manifold", "P ##"
    )
    assert code == USAGE


def test_verify_algebra_good(capsys, alg_file):
    code, out, _ = run(capsys, "verify-algebra", alg_file)
    assert code == OK
    assert "all axioms hold" in out


def test_verify_algebra_bad_axioms(capsys, tmp_path):
    broken = {
        "dim": 2,
        "mul": [[[1, 0], [1, 0]], [[0, 1], [0, 1]]],
        "unit": [1, 1],
        "trace": [1, 1],
        "comul": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(broken))
    code, out, _ = run(capsys, "verify-algebra", str(path))
    assert code == ALGBAD
    assert "commutativity" in out


def test_rewrite_path_found(capsys):
    code, out, _ = run(
        capsys, "rewrite-path", "m . (unit * id)", "id", "--rules", "CF"
    )
    assert code == OK
    assert "unit_l" in out


def test_rewrite_path_not_found(capsys):
    code, out, _ = run(
        capsys,
        "rewrite-path",
        "pe(P)",
        "pe(Q)",
        "--rules",
        "CF",
        "--max-extra-layers",
        "0",
    )
    assert code == DIFFER
    assert "exhausted" in out


def test_rewrite_path_unknown_ruleset(capsys):
    code, _, err = run(capsys, "rewrite-path", "m", "m", "--rules", "XL")
    assert code == USAGE


def test_demo_counterexample(capsys):
    code, out, _ = run(capsys, "demo", "legs-counterexample")
    assert code == OK
    assert "-1" in out


def test_demo_soundness(capsys):
    code, out, _ = run(capsys, "--format", "json", "demo", "ruleset-soundness")
    assert code == OK
    data = json.loads(out)
    assert data["sound"] is True and len(data["checked"]) == 28


def test_output_is_byte_deterministic(capsys, alg_file):
    runs = []
    for _ in range(2):
        _, out, _ = run(
            capsys,
            "--format",
            "json",
            "invariant",
            "--algebra",
            alg_file,
            "--manifold",
            "P # (S2xS1)^1",
            "--idempotents",
        )
        runs.append(out)
    assert runs[0] == runs[1]
    _, o1, _ = run(capsys, "--format", "json", "eq", "pe(P) . unit", "pu(P)")
    _, o2, _ = run(capsys, "--format", "json", "eq", "pe(P) . unit", "pu(P)")
    assert o1 == o2
