"""Validation reports: a list of violated conditions, each with a witness."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: object
    detail: str = ""

    def __str__(self):
        text = f"{self.condition}: {self.witness}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    def add(self, condition, witness, detail=""):
        self.violations.append(Violation(condition, witness, detail))

    def extend(self, other):
        self.violations.extend(other.violations)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def __len__(self):
        return len(self.violations)

    def conditions(self):
        return {v.condition for v in self.violations}

    def text(self):
        if self.ok:
            return "valid"
        return "\n".join(f"violation {v}" for v in self.violations)

    def __str__(self):
        return self.text()
