"""Verification records and their JSON / markdown renderings."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

SUITE_VERSION = "1.0.0"

IDENTITY = "identity"  # pass iff residual <= tolerance
CONTROL = "control"  # deliberately broken input: pass iff residual > tolerance
INFO = "informational"  # recorded only; always passes


@dataclass
class Entry:
    check_name: str
    params: dict
    lambda_samples: list = field(default_factory=list)
    residual: float = 0.0
    tolerance: float = 1e-10
    passed: bool = True
    kind: str = IDENTITY
    message: str = ""

    @classmethod
    def judge(cls, check_name, params, residual, tolerance, lambdas=(), kind=IDENTITY, message=""):
        residual = float(residual)
        if kind == IDENTITY:
            ok = residual <= tolerance
        elif kind == CONTROL:
            ok = residual > tolerance
        else:
            ok = True
        return cls(check_name, dict(params), [complex(x) for x in lambdas], residual,
                   float(tolerance), bool(ok), kind, message)

    @classmethod
    def error(cls, check_name, params, exc: BaseException, tolerance: float):
        return cls(check_name, dict(params), [], float("nan"), float(tolerance), False, IDENTITY,
                   f"{type(exc).__name__}: {exc}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["lambda_samples"] = [[z.real, z.imag] for z in self.lambda_samples]
        if d["residual"] != d["residual"]:  # NaN is not valid JSON
            d["residual"] = None
        return d

    def sort_key(self):
        p = self.params
        return (self.check_name, p.get("N") or 0, p.get("mu") or 0.0, p.get("m") or 0.0,
                p.get("zeta") or 0.0, str(p.get("case")), str(p.get("gradation")), self.message)


@dataclass
class VerificationReport:
    entries: list[Entry] = field(default_factory=list)
    seed: int | None = None
    suite_version: str = SUITE_VERSION
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        vals = [e.residual for e in self.entries if e.kind == IDENTITY and e.residual == e.residual]
        return max(vals, default=0.0)

    def failures(self) -> list[Entry]:
        return [e for e in self.entries if not e.passed]

    def extend(self, entries) -> None:
        self.entries.extend(entries)

    def sort(self) -> None:
        self.entries.sort(key=Entry.sort_key)

    def to_dict(self) -> dict:
        return {
            "suite_version": self.suite_version,
            "seed": self.seed,
            "config": self.config,
            "pass": self.passed,
            "n_entries": len(self.entries),
            "n_failed": len(self.failures()),
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False)

    def to_markdown(self) -> str:
        lines = [
            f"# Verification report (suite {self.suite_version}, seed {self.seed})",
            "",
            f"overall: **{'PASS' if self.passed else 'FAIL'}** "
            f"({len(self.entries) - len(self.failures())}/{len(self.entries)} entries pass)",
            "",
            "| check | N | mu | m | zeta | case | gradation | kind | residual | tol | pass | note |",
            "|---|---|---|---|---|---|---|---|---|---|---|---|",
        ]
        for e in self.entries:
            p = e.params
            res = "nan" if e.residual != e.residual else f"{e.residual:.2e}"
            lines.append(
                f"| {e.check_name} | {p.get('N')} | {_num(p.get('mu'))} | {_num(p.get('m'))} | "
                f"{_num(p.get('zeta'))} | {p.get('case') or ''} | {p.get('gradation') or ''} | {e.kind} | "
                f"{res} | {e.tolerance:.0e} | {'yes' if e.passed else 'NO'} | {e.message} |"
            )
        return "\n".join(lines) + "\n"


def _num(x):
    return "" if x is None else f"{x:.6g}"
