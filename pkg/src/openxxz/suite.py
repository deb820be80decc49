"""Seeded driver over the check registry."""
from __future__ import annotations

import math
import zlib
from dataclasses import asdict, dataclass

import numpy as np

from .algebra import GRADATIONS, make_params
from .checks import CheckContext, select
from .errors import OpenXXZError
from .lattice import CASES
from .report import Entry, VerificationReport


@dataclass
class SuiteConfig:
    n_values: tuple = (1, 2, 3, 4)
    draws: int = 20
    tol: float = 1e-10
    seed: int = 0
    samples: int = 20
    checks: tuple = ()
    cases: tuple = CASES
    gradations: tuple = GRADATIONS
    # fixed (mu, m, zeta) points; replaces the random draws when non-empty
    points: tuple = ()

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if not self.n_values or min(self.n_values) < 1:
            raise ValueError("chain lengths must be >= 1")
        if self.draws < 0 or self.samples < 1:
            raise ValueError("draws must be >= 0 and samples >= 1")
        self.n_values = tuple(sorted(set(int(n) for n in self.n_values)))
        self.checks = tuple(self.checks)
        self.cases = tuple(self.cases)
        self.gradations = tuple(self.gradations)
        self.points = tuple(tuple(float(v) for v in pt) for pt in self.points)
        for c in self.cases:
            if c not in CASES:
                raise ValueError(f"unknown case {c!r}")
        for g in self.gradations:
            if g not in GRADATIONS:
                raise ValueError(f"unknown gradation {g!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_values"] = list(self.n_values)
        d["points"] = [list(p) for p in self.points]
        return d


def draw_parameters(rng: np.random.Generator) -> tuple[float, float, float]:
    """Random (mu, m, zeta) away from sin(mu)=0, cos(mu)=0 and x(0)=0."""
    while True:
        mu = rng.uniform(0.1, 1.4)
        m = rng.uniform(0.1, 1.5)
        zeta = rng.uniform(-0.4, 0.4)
        if abs(math.cos(mu)) > 0.05 and abs(math.sin(mu * (m / 2 + zeta))) > 0.05:
            return mu, m, zeta


def entry_rng(seed: int, name: str, draw: int, n: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode()), draw, n])


def parameter_points(config: SuiteConfig) -> list[tuple[float, float, float]]:
    if config.points:
        return list(config.points)
    rng = np.random.default_rng([config.seed, 0])
    return [draw_parameters(rng) for _ in range(config.draws)]


def run_suite(config: SuiteConfig | None = None) -> VerificationReport:
    """Run every selected check at every parameter point and chain length.

    Construction errors become failed entries; the report is sorted so that
    the same (seed, config) always yields the same document.
    """
    config = config or SuiteConfig()
    checks = select(config.checks)
    report = VerificationReport(seed=config.seed, config=config.to_dict())
    for draw, (mu, m, zeta) in enumerate(parameter_points(config)):
        for chk in checks:
            ns = config.n_values if chk.per_n else config.n_values[:1]
            for n in ns:
                if chk.max_n is not None and n > chk.max_n:
                    continue
                base = {"mu": mu, "m": m, "zeta": zeta, "N": n, "case": None, "gradation": None}
                try:
                    params = make_params(mu, m, zeta, n)
                    ctx = CheckContext(params, entry_rng(config.seed, chk.name, draw, n), config.tol,
                                       config.samples, config.cases, config.gradations)
                    chk.fn(ctx)
                    report.extend(ctx.entries)
                except (OpenXXZError, ValueError, np.linalg.LinAlgError) as exc:
                    report.extend([Entry.error(chk.name, base, exc, config.tol)])
    report.sort()
    return report


__all__ = ["SuiteConfig", "run_suite", "draw_parameters", "parameter_points", "entry_rng"]
