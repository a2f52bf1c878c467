"""End-to-end tests for the command-line harness."""

from __future__ import annotations

import json

import pytest

from cyclosum import build_sun_matrix, cyc_context, identity_matrix, save_matrix
from cyclosum.cli import CampaignConfig, cmd_verify, main


def run_campaign(tmp_path, name, *argv):
    out = tmp_path / name
    code = main(["verify", "--output", str(out), *argv])
    records = [json.loads(line) for line in out.read_text().splitlines()]
    return code, records


# --- verify -----------------------------------------------------------------


def test_campaign_single_identity(tmp_path):
    code, records = run_campaign(
        tmp_path,
        "lemma.jsonl",
        "--identities", "lemma3_2",
        "--n", "3..7",
        "--trials", "5",
        "--seed", "42",
        "--jobs", "1",
    )
    assert code == 0
    assert len(records) == 25
    assert all(r["verdict"] == "pass" for r in records)
    assert {r["n"] for r in records} == {3, 4, 5, 6, 7}


def test_campaign_deterministic_identities(tmp_path):
    code, records = run_campaign(
        tmp_path,
        "det.jsonl",
        "--identities", "eq1_1,eq1_2,eq1_3",
        "--n", "2..10",
        "--jobs", "2",
    )
    assert code == 0
    by_id = {}
    for r in records:
        by_id.setdefault(r["identity_id"], []).append(r)
    assert [r["n"] for r in by_id["eq1_1"] if r["verdict"] == "pass"] == [2, 4, 6, 8, 10]
    assert [r["n"] for r in by_id["eq1_2"] if r["verdict"] == "pass"] == [3, 5, 7, 9]
    assert [r["n"] for r in by_id["eq1_3"] if r["verdict"] == "pass"] == [3, 5, 7, 9]
    assert all(r["verdict"] in ("pass", "skipped") for r in records)


def test_campaign_output_is_sorted_and_seeded(tmp_path):
    code, records = run_campaign(
        tmp_path,
        "sorted.jsonl",
        "--identities", "eq3_1,lemma3_2",
        "--n", "2..5",
        "--trials", "2",
        "--seed", "9",
        "--jobs", "1",
    )
    assert code == 0
    keys = [
        (r["identity_id"], r["n"], r["parameters"].get("trial", 0)) for r in records
    ]
    assert keys == sorted(keys)
    skips = [r for r in records if r["verdict"] == "skipped"]
    assert {(r["identity_id"], r["n"]) for r in skips} == {
        ("eq3_1", 2), ("eq3_1", 4), ("lemma3_2", 2)
    }
    assert all(r["notes"] for r in skips)


def test_campaign_byte_determinism(tmp_path):
    argv = [
        "--identities", "lemma3_2,eei",
        "--n", "3..5",
        "--trials", "3",
        "--seed", "123",
    ]
    main(["verify", "--output", str(tmp_path / "a.jsonl"), "--jobs", "1", *argv])
    main(["verify", "--output", str(tmp_path / "b.jsonl"), "--jobs", "1", *argv])
    main(["verify", "--output", str(tmp_path / "c.jsonl"), "--jobs", "3", *argv])
    a = (tmp_path / "a.jsonl").read_bytes()
    assert a == (tmp_path / "b.jsonl").read_bytes()
    assert a == (tmp_path / "c.jsonl").read_bytes()


def test_campaign_different_seeds_differ(tmp_path):
    _, first = run_campaign(
        tmp_path, "s1.jsonl",
        "--identities", "lemma3_2", "--n", "5", "--seed", "1", "--jobs", "1",
    )
    _, second = run_campaign(
        tmp_path, "s2.jsonl",
        "--identities", "lemma3_2", "--n", "5", "--seed", "2", "--jobs", "1",
    )
    assert first != second


def test_campaign_formats_agree(tmp_path, capsys):
    import csv as csv_module

    argv = ["--identities", "eq1_2", "--n", "3..6", "--seed", "0", "--jobs", "1"]
    code, records = run_campaign(tmp_path, "base.jsonl", *argv)
    assert code == 0

    assert main(["verify", "--format", "csv", *argv]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = list(csv_module.reader(lines))
    header, data = rows[0], rows[1:]
    assert header == ["identity_id", "n", "parameters", "lhs", "rhs", "verdict", "notes"]
    assert len(data) == len(records)
    for row, record in zip(data, records):
        assert row[0] == record["identity_id"]
        assert int(row[1]) == record["n"]
        assert json.loads(row[2]) == record["parameters"]
        assert row[3] == str(record["lhs"])
        assert row[5] == record["verdict"]

    assert main(["verify", "--format", "pretty", *argv]) == 0
    pretty = capsys.readouterr().out
    assert pretty.splitlines()[0].startswith("identity_id")


def test_campaign_timing_flag(tmp_path):
    code, records = run_campaign(
        tmp_path, "timed.jsonl",
        "--identities", "eq1_2", "--n", "3", "--timing", "--jobs", "1",
    )
    assert code == 0
    assert all("elapsed" in r for r in records)
    code, records = run_campaign(
        tmp_path, "untimed.jsonl",
        "--identities", "eq1_2", "--n", "3", "--jobs", "1",
    )
    assert all("elapsed" not in r for r in records)


def test_campaign_jobs_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CYCLOSUM_JOBS", "2")
    code, records = run_campaign(
        tmp_path, "env.jsonl", "--identities", "eq1_3", "--n", "3..5",
    )
    assert code == 0
    assert len(records) == 3


def test_campaign_usage_errors(capsys):
    assert main(["verify", "--n", "10..2"]) == 2
    assert main(["verify", "--identities", "bogus", "--n", "3"]) == 2
    assert main(["verify", "--identities", "eq1_1", "--n", "abc"]) == 2
    assert main(["verify", "--identities", "eq1_1", "--n", "4", "--trials", "0"]) == 2
    assert main(["verify", "--identities", "eq1_1", "--n", "4", "--tol", "-1"]) == 2
    capsys.readouterr()


def test_campaign_unwritable_output(tmp_path):
    code = main([
        "verify", "--identities", "eq1_2", "--n", "3",
        "--output", str(tmp_path / "missing" / "out.jsonl"), "--jobs", "1",
    ])
    assert code == 2


def test_campaign_cap_skips_large_orders(tmp_path):
    code, records = run_campaign(
        tmp_path, "capped.jsonl",
        "--identities", "eq1_1", "--n", "4..6", "--permanent-cap", "4", "--jobs", "1",
    )
    assert code == 0
    verdicts = {r["n"]: r["verdict"] for r in records}
    assert verdicts == {4: "pass", 5: "skipped", 6: "skipped"}


def test_config_validation_direct():
    with pytest.raises(ValueError):
        CampaignConfig(("eq1_1",), (3, 2)).validate()
    with pytest.raises(ValueError):
        CampaignConfig((), (2, 3)).validate()
    with pytest.raises(ValueError):
        CampaignConfig(("eq1_1",), (2, 3), format="yaml").validate()
    CampaignConfig(("eq1_1",), (2, 3)).validate()
    assert cmd_verify(CampaignConfig(("nope",), (2, 3))) == 2


# --- compute ------------------------------------------------------------------


def test_compute_determinant(tmp_path, capsys):
    path = tmp_path / "eye.json"
    save_matrix(identity_matrix(cyc_context(5), 3), path)
    assert main(["compute", "det", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_compute_permanent(tmp_path, capsys):
    path = tmp_path / "sun2.json"
    save_matrix(build_sun_matrix(cyc_context(2)), path)
    assert main(["compute", "per", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "1/4"


def test_compute_derangement_sums(tmp_path, capsys):
    from cyclosum import delete_rows_cols

    path = tmp_path / "sun3minor.json"
    save_matrix(delete_rows_cols(build_sun_matrix(cyc_context(3)), {3}), path)
    assert main(["compute", "derangement-sums", str(path)]) == 0
    out = dict(
        line.split("=", 1) for line in capsys.readouterr().out.strip().splitlines()
    )
    assert out["total"] == "1/3"
    assert out["even_class"] == "0"
    assert out["odd_class"] == "1/3"
    assert out["signed"] == "-1/3"


def test_compute_cap_exit(tmp_path, capsys):
    path = tmp_path / "big.json"
    save_matrix(identity_matrix(cyc_context(2), 17), path)
    assert main(["compute", "per", str(path)]) == 3
    assert main(["compute", "per", str(path), "--permanent-cap", "17"]) == 0
    capsys.readouterr()


def test_compute_bad_inputs(tmp_path, capsys):
    assert main(["compute", "det", str(tmp_path / "absent.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"n\": 3}")
    assert main(["compute", "det", str(bad)]) == 2
    capsys.readouterr()


# --- spectrum -----------------------------------------------------------------


def test_spectrum_full_matrix(capsys):
    assert main(["spectrum", "cp", "--n", "6"]) == 0
    out = capsys.readouterr().out
    assert "-5 -3 -1 1 3 5" in out
    assert "max deviation" in out


def test_spectrum_product_matrix(capsys):
    assert main(["spectrum", "liu", "--n", "7"]) == 0
    out = capsys.readouterr().out
    assert "-3 -2 -1 1 2 3" in out


def test_spectrum_minor(capsys):
    assert main(["spectrum", "minor", "--n", "9"]) == 0
    capsys.readouterr()


def test_spectrum_parity_violations(capsys):
    assert main(["spectrum", "liu", "--n", "6"]) == 2
    assert main(["spectrum", "minor", "--n", "8"]) == 2
    assert main(["spectrum", "cp", "--n", "1"]) == 2
    capsys.readouterr()


def test_spectrum_tolerance_failure(capsys):
    assert main(["spectrum", "cp", "--n", "5", "--tol", "1e-30"]) == 1
    capsys.readouterr()


# --- argument plumbing -----------------------------------------------------------


def test_unknown_subcommand_exits_with_usage(capsys):
    assert main(["frobnicate"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
