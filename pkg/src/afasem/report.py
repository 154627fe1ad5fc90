"""Line-oriented check reports shared by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    code: str
    name: str
    passed: bool | None  # None marks an informational note
    checked: int = 0
    witness: str | None = None
    instances: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.passed is None:
            return "NOTE"
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        out = f"{self.code} {self.name} {self.status}"
        return f"{out}: {self.witness}" if self.witness else out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def __getitem__(self, code: str) -> Check:
        for c in self.checks:
            if c.code == code:
                return c
        raise KeyError(code)

    def __iter__(self):
        return iter(self.checks)

    def render(self) -> str:
        return "".join(c.line() + "\n" for c in self.checks)


def tally(code: str, name: str, failures: list[str], checked: int, instances: list | None = None) -> Check:
    if failures:
        witness = f"{len(failures)} of {checked} failed; first: {failures[0]}"
        return Check(code, name, False, checked, witness, instances or [])
    return Check(code, name, True, checked, f"{checked} checked", instances or [])
