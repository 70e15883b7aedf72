from __future__ import annotations

import csv
import io
import json

import pytest

from bdlrpc import harness
from bdlrpc.cli import main


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table1_single_row(capsys):
    assert main(["table1", "--q", "2", "--r", "7", "--u", "2", "--d", "2", "--trials", "300", "--seed", "42"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert [r["sampler"] for r in rows] == list(harness.SAMPLERS)
    assert list(rows[0]) == harness.CSV_FIELDS


def test_table1_partial_tuple_is_usage_error(capsys):
    assert main(["table1", "--q", "2"]) == 2


def test_table1_check_flags_bad_rates(capsys):
    # t=1 cannot reach full rank for r=4, u=2, far below the prediction
    args = ["table1", "--q", "2", "--r", "4", "--u", "2", "--d", "2", "--t", "1", "--trials", "200", "--check"]
    assert main(args) == 1


def test_count_exit_codes(capsys):
    assert main(["count", "--q", "2", "--u", "2", "--r", "2"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert list(rows[0]) == harness.COUNT_FIELDS
    assert main(["count", "--q", "2", "--u", "1", "--r", "3", "--t", "1"]) == 1


def test_count_too_large_is_error(capsys):
    assert main(["count", "--q", "3", "--u", "3", "--r", "3"]) == 2
    assert "exceeds" in capsys.readouterr().err


def test_ferrers(capsys):
    assert main(["ferrers", "--n", "3", "--k", "3", "--q", "2"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert rows and all(r["match"] == "true" for r in rows)


def test_decode_out_and_json(tmp_path, capsys):
    out = tmp_path / "dec.json"
    args = ["decode", "--trials", "20", "--seed", "2", "--json", "--out", str(out), "--instrument", "--check"]
    assert main(args) == 0
    rows = json.loads(out.read_text())
    assert rows[-1]["sampler"] == "failure_total"
    assert "cross-check" in capsys.readouterr().err


def test_decode_invalid_params(capsys):
    assert main(["decode", "--n", "6", "--k", "4", "--trials", "5"]) == 2


def test_demo(capsys):
    assert main(["demo", "--seed", "7"]) == 0
    text = capsys.readouterr().out
    dims = [int(line.split("=")[2].split()[0]) for line in text.splitlines() if line.startswith("phase 1")]
    assert all(a < b for a, b in zip(dims, dims[1:]))
    assert "target 9" in text and text.strip().endswith("Success")


def test_demo_failure_exit(capsys):
    assert main(["demo", "--seed", "2"]) == 1
    assert "failed" in capsys.readouterr().out


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["table1", "--bogus"])
    assert exc.value.code == 2


def test_workers_env(monkeypatch, capsys):
    monkeypatch.setenv("BDLRPC_THREADS", "4")
    assert main(["table1", "--q", "2", "--r", "1", "--u", "2", "--d", "5", "--trials", "1500"]) == 0
    a = capsys.readouterr().out
    monkeypatch.setenv("BDLRPC_THREADS", "1")
    assert main(["table1", "--q", "2", "--r", "1", "--u", "2", "--d", "5", "--trials", "1500"]) == 0
    assert capsys.readouterr().out == a
