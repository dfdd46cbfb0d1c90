import json
import subprocess
import sys

import pytest

from permrat.cli import (EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, build_parser,
                         main, parse_q_list, parse_run_config)

SUBCOMMANDS = ["test-pr", "search", "verify-theorem", "verify-sufficiency", "tables",
               "identities", "audit-bound", "degq2-scan"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_test_pr(capsys):
    code, out, _ = run(capsys, "test-pr", "0,0,1,1,1@2")
    assert code == EXIT_OK and out == "PR: true\n"
    code, out, _ = run(capsys, "test-pr", "1,1,1,0,3@7", "--hermite")
    assert out == "PR: false\nHermite: false\n"
    code, out, _ = run(capsys, "test-pr", "1,0,0,2@3^2")
    assert out == "PR: true\n"


def test_test_pr_bad_tuple(capsys):
    code, _, err = run(capsys, "test-pr", "0,0,9,1,1@5")
    assert code == EXIT_USAGE
    assert err.startswith("error: ")
    code, _, err = run(capsys, "test-pr", "0,0,1,1,1@6")
    assert code == EXIT_USAGE


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["search", "--q", "5", "--bogus"])
    assert exc.value.code == EXIT_USAGE
    assert "error: usage:" in capsys.readouterr().err


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


def test_bad_q(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["search", "--q", "12"])
    assert exc.value.code == EXIT_USAGE


@pytest.mark.parametrize("name", SUBCOMMANDS)
def test_help_lists_flags(name):
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices[name]
    text = sub.format_help()
    for action in sub._actions:
        for opt in action.option_strings:
            assert opt in text


def test_search_flags_in_help():
    text = build_parser()._subparsers._group_actions[0].choices["search"].format_help()
    for flag in ("--q", "--family", "--normalize", "--no-prefilter", "--width", "--format",
                 "--out", "--config"):
        assert flag in text


def test_search_output(capsys):
    code, out, _ = run(capsys, "search", "--q", "13")
    assert code == EXIT_OK
    header, values = out.splitlines()[:2]
    row = dict(zip(header.split("\t"), values.split("\t")))
    assert row["verdict"] == "exact-match"
    code, out, _ = run(capsys, "search", "--q", "13", "--format", "jsonl")
    assert json.loads(out.splitlines()[0])["summary"]["verdict"] == "exact-match"


def test_search_verbose_after_subcommand(capsys):
    code, _, err = run(capsys, "search", "--q", "5", "-v")
    assert code == EXIT_OK
    assert "elapsed" in err


def test_search_out_is_width_independent(tmp_path, capsys):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert main(["search", "--q", "11", "--width", "1", "--out", str(a)]) == EXIT_OK
    assert main(["search", "--q", "11", "--width", "2", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_search_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "out.jsonl"
    cfg.write_text(f"# small run\nq = 7\nnormalize = false\nformat = jsonl\noutput = {out}\n")
    assert main(["search", "--config", str(cfg)]) == EXIT_OK
    summary = json.loads(out.read_text().splitlines()[0])["summary"]
    assert summary["q"] == 7 and summary["normalization"] == "none"


def test_parse_run_config():
    cfg = parse_run_config("q=9\nfamily=char3x2\nuse_prefilter=no\nparallel_width=4\n")
    assert cfg == RunConfig(q=9, family="char3x2", use_prefilter=False, parallel_width=4)
    for bad in ("q", "family=other", "format=csv", "width=2", "normalize=maybe"):
        with pytest.raises(UsageError):
            parse_run_config(bad)


def test_parse_q_list():
    assert parse_q_list("5") == [5]
    assert parse_q_list("3,9,27") == [3, 9, 27]
    assert parse_q_list("2-9") == [2, 3, 4, 5, 7, 8, 9]
    with pytest.raises(Exception):
        parse_q_list("6")


def test_verify_theorem_small(capsys):
    code, _, _ = run(capsys, "verify-theorem", "--q", "5,7,11")
    assert code == EXIT_OK
    code, _, err = run(capsys, "verify-theorem", "--q", "4")
    assert code == EXIT_MISMATCH
    assert err.startswith("error: mismatch:")
    code, _, _ = run(capsys, "verify-theorem", "--which", "T3.1", "--q", "3,9")
    assert code == EXIT_OK
    code, _, _ = run(capsys, "verify-theorem", "--which", "char3x2", "--q", "3")
    assert code == EXIT_OK


def test_verify_sufficiency_small(capsys):
    code, out, _ = run(capsys, "verify-sufficiency", "--q", "2-16")
    assert code == EXIT_OK
    code, _, _ = run(capsys, "verify-sufficiency", "--family", "char3x2", "--q", "3,9")
    assert code == EXIT_OK


def test_identities_small(capsys):
    code, out, _ = run(capsys, "identities", "--q", "4,5")
    assert code == EXIT_OK
    assert out.startswith("q\tcheck\tevaluated\tviolations\n")


def test_degq2_scan_cli(capsys):
    code, out, _ = run(capsys, "degq2-scan", "--q", "2,9")
    assert code == EXIT_OK
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert [(r[0], r[1]) for r in rows] == [("2", "6"), ("9", "0")]


def test_audit_bound_small(capsys):
    code, out, _ = run(capsys, "audit-bound", "--q", "49", "--samples", "5")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 7


def test_tables_reports_q4_diff(capsys):
    code, out, err = run(capsys, "tables")
    assert code == EXIT_MISMATCH
    assert "# total diff lines: 3" in out
    assert err.startswith("error: mismatch:")


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "permrat.cli", "test-pr", "0,0,1,1,1@2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "PR: true\n"
