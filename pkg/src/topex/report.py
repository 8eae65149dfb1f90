"""Pass/fail reports produced by the axiom checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    passed: bool
    witness: object = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.axiom}"
        if self.detail:
            text += f": {self.detail}"
        if not self.passed and self.witness is not None:
            text += f" [witness: {self.witness}]"
        return text


@dataclass
class AxiomReport:
    title: str
    results: list[AxiomResult] = field(default_factory=list)

    def add(self, axiom, passed, witness=None, detail=""):
        self.results.append(AxiomResult(axiom, bool(passed), witness, detail))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __bool__(self):
        return self.passed

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom or r.axiom.split()[0] == axiom:
                return r
        raise KeyError(axiom)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "results": [
                {"axiom": r.axiom, "passed": r.passed, "witness": _jsonable(r.witness), "detail": r.detail}
                for r in self.results
            ],
        }

    def __str__(self):
        return "\n".join([self.title] + ["  " + r.line() for r in self.results])


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, (list, tuple)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_jsonable(o) for o in obj), key=repr)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return str(obj)
