"""Check results shared by the validators, suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    identity: str
    model: str
    witness: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        out = f"{self.status} {self.identity} {self.model}"
        return f"{out} [{self.witness}]" if self.witness else out

    def tsv(self) -> str:
        return "\t".join([self.status, self.identity, self.model, self.witness])


class Report(list):
    """A list of CheckResults with a few conveniences."""

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self)

    def failures(self) -> list[CheckResult]:
        return [r for r in self if not r.passed]

    def add(self, passed: bool, identity: str, model: str, witness: str = "") -> bool:
        self.append(CheckResult(bool(passed), identity, model, witness))
        return bool(passed)

    def render(self, fmt: str = "text") -> str:
        return "\n".join(r.tsv() if fmt == "tsv" else r.line() for r in self)
