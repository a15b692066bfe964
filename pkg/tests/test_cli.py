import json

import pytest

from sigmaconics.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line]


def test_classify_identity_pg2_4(capsys):
    code, recs = run_cli(["classify", "--p", "2", "--n", "2", "--m", "1",
                          "--matrix", "1", "0", "0", "0", "1", "0", "0", "0", "1"],
                         capsys)
    assert code == 0
    header, rec = recs
    assert header["record"] == "header" and header["modulus"] == [1, 1, 1]
    assert rec["kind"] == "kestenband_nondegenerate" and rec["absolute"] == 9


def test_classify_rank1(capsys):
    code, recs = run_cli(["classify", "--p", "2", "--n", "3", "--m", "1",
                          "--matrix", "0", "0", "1", "0", "0", "0", "0", "0", "0"],
                         capsys)
    assert code == 0
    assert recs[1]["kind"] == "union_two_lines"


def test_classify_line_form(capsys):
    code, recs = run_cli(["classify", "--p", "2", "--n", "3", "--m", "1",
                          "--matrix", "0", "1", "0", "0"], capsys)
    assert code == 0
    assert recs[1]["kind"] == "two_points"


def test_gcd_violation_exits_2(capsys):
    code = main(["classify", "--p", "2", "--n", "4", "--m", "2",
                 "--matrix", "1", "0", "0", "0", "1", "0", "0", "0", "1"])
    assert code == 2


def test_bad_matrix_length_exits_2(capsys):
    code = main(["classify", "--p", "2", "--n", "2", "--m", "1",
                 "--matrix", "1", "2", "3"])
    assert code == 2


def test_census_diagonal(capsys):
    code, recs = run_cli(["census", "--p", "2", "--n", "2", "--m", "1",
                          "--mode", "exhaustive", "--scope", "diagonal"], capsys)
    assert code == 0
    assert recs[-1]["histogram"] == {"3": 6, "9": 3}


def test_census_random_requires_seed(capsys):
    code = main(["census", "--p", "2", "--n", "2", "--m", "1",
                 "--mode", "random", "--count", "10"])
    assert code == 2


def test_census_random_bytes_deterministic(tmp_path):
    args = ["census", "--p", "3", "--n", "2", "--m", "1", "--mode", "random",
            "--count", "100", "--seed", "41", "--records", "5"]
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(args + ["--out", str(p1)]) == 0
    assert main(args + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_census_cap_exits_4(capsys):
    code = main(["census", "--p", "3", "--n", "3", "--m", "1",
                 "--mode", "exhaustive", "--scope", "gl"])
    assert code == 4


def test_census_csv_summary(tmp_path):
    out = tmp_path / "summary.csv"
    assert main(["census", "--p", "2", "--n", "2", "--m", "1", "--mode",
                 "exhaustive", "--scope", "diagonal", "--format", "csv",
                 "--out", str(out)]) == 0
    text = out.read_text()
    assert "histogram,3,6" in text and "histogram,9,3" in text


def test_mrd_pipeline(tmp_path, capsys):
    code_file = tmp_path / "code.jsonl"
    code, recs = run_cli(["mrd", "--p", "3", "--n", "3", "--m", "1",
                          "--T", "1", "--code-out", str(code_file)], capsys)
    assert code == 0
    summary = recs[-1]
    assert summary["code_size"] == 729
    assert summary["min_rank_distance"] == 2
    assert summary["meets_bound"] and not summary["linear"]
    lines = code_file.read_text().splitlines()
    assert len(lines) == 730                      # header + codewords
    first = json.loads(lines[1])
    assert first["entries"] == [0] * 9


def test_mrd_requires_one_in_t(capsys):
    assert main(["mrd", "--p", "3", "--n", "3", "--m", "1", "--T", "2"]) == 2


def test_mrd_hypotheses(capsys):
    assert main(["mrd", "--p", "2", "--n", "3", "--m", "1"]) == 2


def test_steiner_check_explicit(capsys):
    code, recs = run_cli(["steiner-check", "--p", "2", "--n", "3", "--m", "1",
                          "--matrix", "0", "0", "1", "0", "1", "0", "0", "0", "0"],
                         capsys)
    assert code == 0 and recs[1]["match"] is True


def test_steiner_check_random(capsys):
    code, recs = run_cli(["steiner-check", "--p", "3", "--n", "3", "--m", "1",
                          "--count", "60", "--seed", "2"], capsys)
    assert code == 0
    assert recs[-1]["kinds"]["steiner_checked"] == 60


def test_steiner_check_rejects_invertible(capsys):
    code = main(["steiner-check", "--p", "2", "--n", "3", "--m", "1",
                 "--matrix", "1", "0", "0", "0", "1", "0", "0", "0", "1"])
    assert code == 2


def test_classify_extension_tower(capsys):
    # F_16 over F_4 (e = 2)
    code, recs = run_cli(["classify", "--p", "2", "--e", "2", "--n", "2",
                          "--m", "1", "--matrix", "1", "0", "0", "0", "1",
                          "0", "0", "0", "1"], capsys)
    assert code == 0
    assert recs[0]["q"] == 4 and recs[0]["order"] == 16
    assert recs[1]["kind"] == "kestenband_nondegenerate"
    assert recs[1]["absolute"] == 65             # the Hermitian unital size
