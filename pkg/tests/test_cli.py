import io
import re

import pytest

from voacalc import cli
from voacalc.reports import RunReport, Status, VerificationReport


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_delta_suite_exit_zero(capsys):
    code, out, _ = run_cli(["check", "delta", "--window", "4",
                            "--format", "structured"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 27
    for line in lines:
        fields = line.split(" ")
        assert len(fields) == 5
        assert fields[0] == "delta"
        assert fields[3] in ("pass", "fail", "skipped-budget")
        assert fields[4].isdigit()


def test_structured_records_are_sorted(capsys):
    code, out, _ = run_cli(["check", "delta", "--format", "structured"],
                           capsys)
    lines = out.strip().splitlines()
    keys = [tuple(l.split(" ")[:3]) for l in lines]
    assert keys == sorted(keys)


def test_text_format_summary(capsys):
    code, out, _ = run_cli(["check", "delta"], capsys)
    assert code == 0
    assert re.search(r"passed=\d+ failed=0 skipped=\d+", out)


def test_bad_config_exits_two(capsys):
    code, _, err = run_cli(["moduli", "nu", "x", "--cutoffs", "8,4"], capsys)
    assert code == 2
    assert "error" in err


def test_bad_fixture_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.fus"
    bad.write_text("labels: V\nV V 1\n")
    code, _, err = run_cli(["fusion", "verify", str(bad)], capsys)
    assert code == 2
    assert "bad.fus" in err


def test_failing_fixture_exits_one(tmp_path, capsys):
    from importlib import resources
    src = (resources.files("voacalc") / "fixtures" / "bad_symmetry.fus")
    code, out, _ = run_cli(["fusion", "verify", str(src),
                            "--format", "structured"], capsys)
    assert code == 1
    assert any(" fail " in line for line in out.splitlines())


def test_moduli_sew_roundtrip(tmp_path, capsys):
    from voacalc.moduli import (format_moduli_element, parse_moduli_element,
                                scaling_element, two_puncture_element)
    f1 = tmp_path / "p2.mod"
    f1.write_text(format_moduli_element(two_puncture_element(2, 8)))
    f2 = tmp_path / "p1.mod"
    f2.write_text(format_moduli_element(two_puncture_element(1, 8)))
    code, out, _ = run_cli(["moduli", "sew", str(f1), str(f2), "--at", "1"],
                           capsys)
    assert code == 0
    got = parse_moduli_element(out)
    assert got.arity == 3 and [str(z) for z in got.z] == ["3", "2"]


def test_moduli_nu_prints_schedule(tmp_path, capsys):
    from voacalc.moduli import format_moduli_element, two_puncture_element
    f1 = tmp_path / "p2.mod"
    f1.write_text(format_moduli_element(two_puncture_element(2, 8)))
    code, out, _ = run_cli(["moduli", "nu", str(f1), "--level", "4",
                            "--cutoffs", "2,4"], capsys)
    assert code == 0
    assert out.count("cutoff") == 2


def test_contragredient_build_prints_blocks(capsys):
    code, out, _ = run_cli(["contragredient", "build", "--level", "3"],
                           capsys)
    assert code == 0
    assert "weight 3" in out and "symmetric=True" in out


def test_exit_code_contract_on_failure():
    run = RunReport([VerificationReport("x", "p", Status.FAIL, [(1, 2, 3)])])
    assert run.exit_code == 1
    run = RunReport([VerificationReport("x", "p", Status.SKIPPED)])
    assert run.exit_code == 0


def test_jobs_do_not_change_structured_output(capsys):
    argv = ["check", "delta", "--format", "structured"]
    _, out1, _ = run_cli(argv + ["--jobs", "1"], capsys)
    _, out8, _ = run_cli(argv + ["--jobs", "8"], capsys)
    assert out1 == out8
