"""Experiment configuration, per-trial records and reports."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

CSV_COLUMNS = ("theorem", "n", "k", "d", "lambda", "trial", "lhs", "lhs_err",
               "rhs", "rhs_err", "margin", "verdict", "seed")
EXACT_TOL = 1e-9
SIGMAS = 3.0
MAX_DIM = 8


@dataclass(frozen=True)
class ExperimentConfig:
    """One checker run. ``n``/``k`` left as None sweep 2 <= n <= max_n, 1 <= k < n."""

    theorem: str
    n: int | None = None
    k: int | None = None
    body_class: str | None = None
    position: str | None = None
    trials: int = 10
    mc_samples: int = 100_000
    seed: int = 0
    d: float | None = None
    lambda_grid: tuple | None = None
    max_n: int = 6

    def __post_init__(self):
        if self.lambda_grid is not None:
            object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        self.validate()

    def validate(self) -> None:
        if (self.n is None) != (self.k is None):
            raise ValueError("give both n and k, or neither for a sweep")
        if self.n is not None and not 1 <= self.k <= self.n <= MAX_DIM:
            raise ValueError(f"need 1 <= k <= n <= {MAX_DIM}, got n={self.n}, k={self.k}")
        if not 2 <= self.max_n <= MAX_DIM:
            raise ValueError(f"max_n must lie in [2, {MAX_DIM}]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.mc_samples < 2:
            raise ValueError("mc_samples must be at least 2")
        if self.d is not None and self.d < 0:
            raise ValueError("d must be nonnegative")
        if self.lambda_grid is not None and any(x <= 0 for x in self.lambda_grid):
            raise ValueError("lambda grid values must be positive")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda_grid"] = None if self.lambda_grid is None else list(self.lambda_grid)
        return out

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def verdict_for(lhs: float, lhs_err: float, rhs: float, rhs_err: float) -> str:
    slack = SIGMAS * (lhs_err + rhs_err) + EXACT_TOL * max(1.0, abs(rhs))
    return "pass" if lhs <= rhs + slack else "fail"


@dataclass
class Record:
    """One inequality evaluation, oriented as lhs <= rhs."""

    theorem: str
    n: int
    k: int
    trial: int
    seed: int
    verdict: str
    lhs: float | None = None
    lhs_err: float = 0.0
    rhs: float | None = None
    rhs_err: float = 0.0
    d: float | None = None
    lam: float | None = None
    equality: bool = False
    note: str = ""

    @property
    def margin(self) -> float | None:
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem, "n": self.n, "k": self.k, "d": self.d,
            "lambda": self.lam, "trial": self.trial, "lhs": self.lhs,
            "lhs_err": self.lhs_err, "rhs": self.rhs, "rhs_err": self.rhs_err,
            "margin": self.margin, "verdict": self.verdict, "seed": self.seed,
            "equality": self.equality, "note": self.note,
        }

    def csv_row(self) -> list[str]:
        d = self.to_dict()
        return ["" if d[c] is None else _fmt(d[c]) for c in CSV_COLUMNS]


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def trial_verdict(records: list[Record]) -> str:
    verdicts = {r.verdict for r in records}
    if "fail" in verdicts:
        return "fail"
    if verdicts <= {"skipped"}:
        return "skipped"
    return "pass"


@dataclass
class CheckReport:
    theorem: str
    config: ExperimentConfig
    records: list = field(default_factory=list)

    def trial_verdicts(self) -> dict:
        by_trial: dict[int, list] = {}
        for r in self.records:
            by_trial.setdefault(r.trial, []).append(r)
        return {t: trial_verdict(rs) for t, rs in sorted(by_trial.items())}

    def counts(self) -> dict:
        v = list(self.trial_verdicts().values())
        return {
            "trials": len(v),
            "passed": v.count("pass"),
            "failed": v.count("fail"),
            "skipped": v.count("skipped"),
        }

    @property
    def pass_rate(self) -> float | None:
        c = self.counts()
        judged = c["passed"] + c["failed"]
        return None if judged == 0 else c["passed"] / judged

    @property
    def failed(self) -> bool:
        return self.counts()["failed"] > 0

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "config": self.config.to_dict(),
            "config_hash": self.config.digest(),
            "seed": self.config.seed,
            "counts": self.counts(),
            "pass_rate": self.pass_rate,
            "equality_count": sum(1 for r in self.records if r.equality),
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), indent=2, sort_keys=True) + "\n"


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj
