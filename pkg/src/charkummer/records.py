"""Line-oriented assertion records shared by the pipelines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

PROVENANCES = ("PAPER", "DERIVED")


def _clean(value) -> str:
    # records are whitespace separated; keep every value a single token
    return str(value).replace(" ", "")


@dataclass(frozen=True)
class Assertion:
    id: str
    passed: bool
    expected: object
    got: object
    provenance: str = "DERIVED"
    detail: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def record(self) -> str:
        return (f"assert id={self.id} status={self.status} expected={_clean(self.expected)} "
                f"got={_clean(self.got)} provenance={self.provenance}")

    def human(self) -> str:
        line = f"[{self.status.upper()}] {self.id}: expected {self.expected}, got {self.got} ({self.provenance})"
        return line + (f"\n       {self.detail}" if self.detail else "")


def check(id: str, expected, got, provenance: str = "DERIVED", detail: str = "") -> Assertion:
    return Assertion(id, expected == got, expected, got, provenance, detail)


def sort_records(assertions) -> list[Assertion]:
    return sorted(assertions, key=lambda a: a.id)
