"""Validation reports: every checker returns one instead of failing fast."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Violation:
    kind: str
    witness: tuple
    detail: str = ""

    def as_dict(self):
        return {"kind": self.kind, "witness": list(self.witness), "detail": self.detail}


@dataclass
class ValidationReport:
    """Structural errors (malformed tables) are kept apart from axiom violations."""

    structural: list[Violation] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)
    checks_run: list[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.structural and not self.violations

    def add_structural(self, kind, witness, detail=""):
        self.structural.append(Violation(kind, tuple(witness), detail))

    def add(self, kind, witness, detail=""):
        self.violations.append(Violation(kind, tuple(witness), detail))

    def kinds(self):
        return [v.kind for v in self.structural] + [v.kind for v in self.violations]

    def by_kind(self, kind):
        return [v for v in self.violations if v.kind == kind]

    def as_dict(self):
        return {
            "ok": self.ok,
            "checks_run": list(self.checks_run),
            "structural": [v.as_dict() for v in self.structural],
            "violations": [v.as_dict() for v in self.violations],
        }
