"""Scaling analysis: threshold crossings, power-law and exponential fits, AIC.

Training effort T is the first step at which held-out accuracy reaches the
threshold mu (or a cumulative token / FLOPs / wall-clock total up to that
step).  T as a function of depth D is fit two ways by ordinary least squares
in log space: ln T = ln a + gamma * ln D (power law) and ln T = ln a + b * D
(exponential).  Both models have two free parameters, so AIC comparison
reduces to the residual sums; positive delta-AIC favors the power law.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class NoCrossingError(ValueError):
    pass


class NonPositiveInputError(ValueError):
    pass


class MismatchedDataError(ValueError):
    pass


# Floor applied to the residual sum before the log, so exact fits yield a
# finite (and equal, per-model) AIC instead of -inf.
RSS_FLOOR = 1e-12

EFFORT_MEASURES = ("steps", "gen_tokens", "upd_tokens", "flops", "wall_seconds")


@dataclass(frozen=True)
class RunLog:
    label: str
    depth: int
    steps: tuple[int, ...]
    accuracies: tuple[float, ...]
    gen_tokens: tuple[int, ...] | None = None
    upd_tokens: tuple[int, ...] | None = None
    wall_seconds: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.steps) != len(self.accuracies):
            raise ValueError("steps and accuracies must align")
        if any(b <= a for a, b in zip(self.steps, self.steps[1:])):
            raise ValueError("steps must be strictly increasing")
        if any(not 0.0 <= a <= 1.0 for a in self.accuracies):
            raise ValueError("accuracies must be in [0, 1]")
        for name in ("gen_tokens", "upd_tokens", "wall_seconds"):
            series = getattr(self, name)
            if series is not None and len(series) != len(self.steps):
                raise ValueError(f"{name} must align with steps")


def threshold_step(log: RunLog, mu: float) -> int:
    """First step whose validation accuracy reaches mu; no smoothing."""
    if not 0.0 < mu <= 1.0:
        raise ValueError("mu must be in (0, 1]")
    for step, acc in zip(log.steps, log.accuracies):
        if acc >= mu:
            return step
    raise NoCrossingError(f"{log.label} D={log.depth} never reached {mu}")


def effort_at_threshold(
    log: RunLog, mu: float, measure: str = "steps", n_params: int | None = None
) -> float:
    """Training effort at the mu crossing under the chosen compute measure."""
    if measure not in EFFORT_MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    step = threshold_step(log, mu)
    if measure == "steps":
        return float(step)
    upto = log.steps.index(step) + 1
    if measure == "flops":
        if n_params is None:
            raise ValueError("flops measure needs n_params")
        if log.gen_tokens is None or log.upd_tokens is None:
            raise ValueError("flops measure needs gen_tokens and upd_tokens")
        return float(flops(n_params, sum(log.gen_tokens[:upto]), sum(log.upd_tokens[:upto])))
    series = getattr(log, measure)
    if series is None:
        raise ValueError(f"run log has no {measure} series")
    return float(sum(series[:upto]))


@dataclass(frozen=True)
class FitResult:
    model: str            # "power" | "exponential"
    intercept: float      # ln a
    slope: float          # gamma for power, b for exponential
    slope_se: float | None
    r_squared: float
    aic: float
    n: int
    data_digest: str

    @property
    def amplitude(self) -> float:
        return math.exp(self.intercept)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "ln_a": self.intercept,
            "a": self.amplitude,
            "slope": self.slope,
            "slope_se": self.slope_se,
            "r_squared": self.r_squared,
            "aic": self.aic,
            "n": self.n,
        }


def _digest(points: Sequence[tuple[float, float]]) -> str:
    payload = json.dumps(sorted((float(d), float(t)) for d, t in points))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _ols(xs: list[float], ys: list[float]) -> tuple[float, float, float, float | None, float]:
    """Least squares of y on x: (intercept, slope, rss, slope_se, r_squared)."""
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    sxx = sum((x - xbar) ** 2 for x in xs)
    if sxx == 0.0:
        raise NonPositiveInputError("all x values identical; slope undefined")
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    rss = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    tss = sum((y - ybar) ** 2 for y in ys)
    if tss > 0.0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss <= RSS_FLOOR else 0.0
    se = math.sqrt((rss / (n - 2)) / sxx) if n >= 3 else None
    return intercept, slope, rss, se, r2


def _fit(points: Sequence[tuple[float, float]], model: str) -> FitResult:
    if len(points) < 2:
        raise NonPositiveInputError("need at least two points")
    for d, t in points:
        if t <= 0 or (model == "power" and d <= 0):
            raise NonPositiveInputError(f"non-positive input point ({d}, {t})")
    xs = [math.log(d) if model == "power" else float(d) for d, _ in points]
    ys = [math.log(t) for _, t in points]
    intercept, slope, rss, se, r2 = _ols(xs, ys)
    n = len(points)
    aic = n * math.log(max(rss, RSS_FLOOR) / n) + 2 * 2
    return FitResult(model, intercept, slope, se, r2, aic, n, _digest(points))


def fit_power(points: Sequence[tuple[float, float]]) -> FitResult:
    """OLS of ln T on ln D; the slope is the scaling exponent gamma."""
    return _fit(points, "power")


def fit_exponential(points: Sequence[tuple[float, float]]) -> FitResult:
    """OLS of ln T on D; the slope is the exponential rate b."""
    return _fit(points, "exponential")


def compare_aic(power: FitResult, exponential: FitResult) -> float:
    """AIC_exp - AIC_pow over the same points; positive favors the power law."""
    if power.model != "power" or exponential.model != "exponential":
        raise MismatchedDataError("pass (power fit, exponential fit)")
    if power.n != exponential.n or power.data_digest != exponential.data_digest:
        raise MismatchedDataError("fits were computed on different point sets")
    return exponential.aic - power.aic


def flops(n_params: int, gen_tokens: int, upd_tokens: int) -> int:
    """Kaplan-rule training FLOPs: 2*N*gen_tokens + 6*N*upd_tokens, exact."""
    vals = []
    for v in (n_params, gen_tokens, upd_tokens):
        if isinstance(v, float):
            if not v.is_integer():
                raise ValueError("flops inputs must be integral")
            v = int(v)
        if v < 0:
            raise ValueError("flops inputs must be non-negative")
        vals.append(v)
    n, g, u = vals
    return 2 * n * g + 6 * n * u


def read_run_logs(path) -> list[RunLog]:
    """Load JSONL step records grouped by (setting label, depth)."""
    groups: dict[tuple[str, int], list[dict]] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            key = (str(rec.get("setting", rec.get("label", ""))), int(rec["depth"]))
            groups.setdefault(key, []).append(rec)
    logs = []
    for (label, depth), recs in sorted(groups.items()):
        recs.sort(key=lambda r: r["step"])
        kw = {}
        for name in ("gen_tokens", "upd_tokens", "wall_seconds"):
            if all(name in r for r in recs):
                kw[name] = tuple(r[name] for r in recs)
        logs.append(
            RunLog(
                label=label,
                depth=depth,
                steps=tuple(int(r["step"]) for r in recs),
                accuracies=tuple(float(r["accuracy"]) for r in recs),
                **kw,
            )
        )
    return logs


def fit_report(
    logs: Iterable[RunLog],
    mu: float,
    measure: str = "steps",
    n_params: int | None = None,
) -> dict:
    """Per-setting power/exponential fits over (depth, effort) crossings."""
    by_setting: dict[str, list[tuple[float, float]]] = {}
    missing: list[dict] = []
    for log in logs:
        try:
            effort = effort_at_threshold(log, mu, measure, n_params)
        except NoCrossingError:
            missing.append({"setting": log.label, "depth": log.depth})
            continue
        by_setting.setdefault(log.label, []).append((float(log.depth), effort))

    settings = []
    for label, points in sorted(by_setting.items()):
        points.sort()
        entry: dict = {"setting": label, "n": len(points), "points": points}
        if len(points) >= 2:
            pw = fit_power(points)
            ex = fit_exponential(points)
            entry["power"] = pw.to_dict()
            entry["exponential"] = ex.to_dict()
            entry["delta_aic"] = compare_aic(pw, ex)
        settings.append(entry)
    return {"mu": mu, "measure": measure, "settings": settings, "no_crossing": missing}


def fit_curve_csv(points: Sequence[tuple[float, float]], pw: FitResult, ex: FitResult) -> str:
    """Plot-ready CSV of observed and fitted efforts."""
    lines = ["D,T,power_fit,exponential_fit"]
    for d, t in points:
        fp = math.exp(pw.intercept) * d ** pw.slope
        fe = math.exp(ex.intercept) * math.exp(ex.slope * d)
        lines.append(f"{d:g},{t:g},{fp:.10g},{fe:.10g}")
    return "\n".join(lines) + "\n"
