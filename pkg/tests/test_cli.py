import io
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from qss.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, cmd_verify_tables, main
from qss.core import TRANSFORM_TABLE, Op, Rotation
from qss.experiments import RunSpec, bytes_to_bits, hex_to_bits, trial_seed
from qss.protocol import ProtocolConfig
from qss.schema import ERROR_RATE, RECORD_SCHEMA


def read_records(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_verify_tables_passes(capsys):
    assert main(["verify-tables"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 40 and "FAIL" not in out
    assert "40/40 cells match" in out


def test_corrupted_table_fails_at_that_cell():
    bad = dict(TRANSFORM_TABLE)
    cell = (Op.U4, Rotation.XI)
    bad[cell] = -bad[cell]
    buf = io.StringIO()
    assert cmd_verify_tables(buf, table=bad) == EXIT_FAILURE
    failing = [line for line in buf.getvalue().splitlines() if line.endswith("FAIL")]
    assert len(failing) == 1
    assert failing[0].split()[:2] == ["U4", "xi"]
    assert "39/40" in buf.getvalue()


def test_hex_and_byte_parsing():
    np.testing.assert_array_equal(hex_to_bits("a5"), [1, 0, 1, 0, 0, 1, 0, 1])
    np.testing.assert_array_equal(hex_to_bits("0x3"), [0, 0, 1, 1])
    np.testing.assert_array_equal(bytes_to_bits(b"\x81"), [1, 0, 0, 0, 0, 0, 0, 1])


def test_trial_seeds_differ_and_repeat():
    seeds = [trial_seed(7, t) for t in range(50)]
    assert len(set(seeds)) == 50
    assert seeds == [trial_seed(7, t) for t in range(50)]


def test_run_spec_needs_one_message_source():
    with pytest.raises(Exception):
        RunSpec(ProtocolConfig())
    with pytest.raises(Exception):
        RunSpec(ProtocolConfig(), message_hex="ab", message_file="x")


def test_run_writes_schema_valid_records(tmp_path):
    out = tmp_path / "run.jsonl"
    code = main(["run", "--message-hex", "c0ffee", "--parties", "4", "--trials", "3",
                 "--check-k", "8", "--auth-j", "4", "--seed", "11", "--out", str(out)])
    assert code == EXIT_OK
    records = read_records(out)
    for rec in records:
        jsonschema.validate(rec, RECORD_SCHEMA)
    trials = [r for r in records if r["record"] == "trial"]
    assert len(trials) == 3 and all(r["message_recovered"] for r in trials)
    assert trials[0]["recovered_bits"] == "110000001111111111101110"
    agg = records[-1]
    assert agg["record"] == "aggregate" and agg["completed"] == 3 and agg["detection_rate"] == 0


@pytest.mark.parametrize("extra", [[], ["--variant"], ["--adversary", "intercept-resend"]])
def test_run_is_byte_identical_for_same_seed(tmp_path, extra):
    paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for p in paths:
        assert main(["run", "--message-hex", "1234", "--trials", "4", "--seed", "5",
                     "--check-k", "10", "--auth-j", "4", "--out", str(p), *extra]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_different_seed_changes_output(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["run", "--message-hex", "1234", "--seed", "1", "--out", str(a)])
    main(["run", "--message-hex", "1234", "--seed", "2", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_run_from_message_file(tmp_path):
    msg = tmp_path / "msg.bin"
    msg.write_bytes(b"hi")
    out = tmp_path / "out.jsonl"
    assert main(["run", "--message-file", str(msg), "--variant", "--out", str(out)]) == EXIT_OK
    trial = [r for r in read_records(out) if r["record"] == "trial"][0]
    assert trial["recovered_bits"] == "0110100001101001"


def test_run_to_stdout(capsys):
    assert main(["run", "--message-hex", "f", "--check-k", "4", "--auth-j", "0"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert json.loads(lines[-1])["record"] == "aggregate"


def test_intercept_resend_run_detects(tmp_path):
    out = tmp_path / "eve.jsonl"
    main(["run", "--message-hex", "abcd", "--adversary", "intercept-resend", "--trials", "20",
          "--check-k", "20", "--out", str(out)])
    agg = read_records(out)[-1]
    assert agg["detection_rate"] > 0.9
    assert agg["detection_ci"][0] <= agg["detection_rate"] <= agg["detection_ci"][1]


@pytest.mark.parametrize("argv", [
    ["run", "--message-hex", "12", "--parties", "2"],
    ["run", "--message-hex", "12", "--check-k", "0"],
    ["run", "--message-hex", "zz"],
    ["run", "--message-hex", "12", "--trials", "0"],
    ["run", "--message-hex", "12", "--threshold", "2"],
    ["run", "--message-hex", "12", "--adversary", "insider", "--parties", "4"],
    ["run", "--message-hex", "12", "--adversary", "insider", "--variant"],
    ["run", "--message-file", "/nonexistent/file.bin"],
    ["error-rate", "--pairs", "0"],
])
def test_bad_config_exits_2(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "qss: error:" in capsys.readouterr().err


def test_error_rate_output(capsys):
    assert main(["error-rate", "--pairs", "20000", "--seed", "3"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    jsonschema.validate(rec, ERROR_RATE)
    assert abs(rec["error_rate"] - 0.25) < 0.0125
    assert rec["pairs"] == 20000


@pytest.mark.parametrize("argv", [
    ["error-rate", "--adversary", "insider", "--four-op-set", "--pairs", "5000"],
    ["error-rate", "--single-basis", "--pairs", "5000"],
    ["error-rate", "--adversary", "none", "--pairs", "5000"],
])
def test_error_rate_negative_controls(argv, capsys):
    assert main(argv) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["errors"] == 0


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "qss.cli", "verify-tables"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "40/40" in res.stdout
