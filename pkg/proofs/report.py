from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass(frozen=True)
class Violation:
    """One failed condition; location is a step index, a grid cell or a condition name"""
    location: Any
    reason: str

    def __str__(self) -> str:
        return f"{self.location}: {self.reason}"


@dataclass
class CheckReport:
    kind: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, location: Any, reason: str):
        self.violations.append(Violation(location, reason))

    def first(self):
        return self.violations[0] if self.violations else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'ok': self.ok,
            'violations': [str(v) for v in self.violations],
        }
