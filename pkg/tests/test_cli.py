import os
import subprocess
import sys

import pytest

from cli_cases import FIXTURES, cases, golden_path, run_case

CASES = cases()


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_golden_and_deterministic(case):
    first, second = run_case(case), run_case(case)
    assert first.status == case.status, first.stderr
    assert first.golden_text() == second.golden_text()
    assert first.golden_text(case.exact_stderr) == golden_path(case).read_text(encoding="utf-8")
    if case.status == 2:
        assert first.stdout == ""
        assert first.stderr.count("\n") == 1 and first.stderr.startswith("afasem: ")


def test_every_subcommand_is_covered():
    covered = {c.argv[0] for c in CASES}
    assert covered >= {"encode", "verify", "apply", "recover", "synonyms", "westerstahl", "solve", "scopes", "dot"}


def test_console_entry_point(tmp_path):
    env = dict(os.environ, AFA_LOG="info")
    proc = subprocess.run(
        [sys.executable, "-m", "afasem.cli", "verify", str(FIXTURES / "e2.json")],
        capture_output=True,
        text=True,
        env=env,
        timeout=120,
    )
    assert proc.returncode == 0
    # logging goes to stderr only; stdout is exactly the report
    assert "afasem: INFO" in proc.stderr
    assert proc.stdout == golden_path(next(c for c in CASES if c.name == "e2-verify-spec")).read_text(
        encoding="utf-8"
    ).split("--- stdout\n")[1].split("--- stderr\n")[0]


def test_encode_writes_the_same_bundle_as_stdout(tmp_path):
    from afasem.cli import main

    out = tmp_path / "b.json"
    assert main(["encode", str(FIXTURES / "e1.json"), "-o", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == run_case(next(c for c in CASES if c.name == "e1-encode")).stdout
