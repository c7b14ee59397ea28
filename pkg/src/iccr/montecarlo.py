"""Seeded batch experiments: decodability statistics and SNR sweeps.

Trial ``i`` of a batch draws everything (channels, symbols, precoders, noise)
from a generator seeded with ``base_seed + i``, so a batch is reproducible
and trials can be evaluated in any order.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .channel import (
    NOISELESS,
    USERS,
    AntennaConfig,
    FeedbackMode,
    NoiseSpec,
    classify_condition,
    sample_channel,
)
from .decoder import achievable_rate, decode, eliminate_known_interference
from .numerics import CONDITION_LIMIT, complex_normal, seeded_rng
from .regions import region_for_mode
from .schemes import SchemePlan, Transcript, build_scheme, run_scheme

DEFAULT_SNR_GRID = (30.0, 40.0, 50.0, 60.0)
DEFAULT_SWEEP_TRIALS = 500


@dataclass(frozen=True)
class TrialBatchSpec:
    config: AntennaConfig
    mode: FeedbackMode
    trials: int
    base_seed: int = 0
    snr_db: tuple = ()

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))

    def seed(self, i: int) -> int:
        return self.base_seed + i


def run_trial(plan: SchemePlan, seed: int, noise: NoiseSpec = NOISELESS) -> Transcript:
    rng = seeded_rng(seed)
    channel = sample_channel(plan.config, plan.frame_length, rng)
    symbols = {u: complex_normal(rng, plan.symbols_per_user) for u in USERS}
    return run_scheme(plan, channel, symbols, rng, noise)


@dataclass(frozen=True)
class TrialOutcome:
    """Per-trial summary; ``status`` is one of decodable, filtered, degenerate."""

    status: str
    max_symbol_error: float
    condition_number: float
    cancellation_residual: float


def classify_trial(transcript: Transcript) -> TrialOutcome:
    """Decode at both receivers and sort the trial into one bucket.

    A trial is degenerate when a retransmission slot cannot be inverted,
    filtered when either decoding matrix has condition number above the
    limit, and decodable otherwise. The rank tolerance is tighter than the
    conditioning limit, so every trial that passes the filter has full rank.
    """
    reports = []
    for rx in USERS:
        system = eliminate_known_interference(transcript, rx)
        reports.append(decode(system, transcript.symbols[rx]))
    err = max(r.max_symbol_error for r in reports)
    cond = max(r.condition_number for r in reports)
    resid = max(r.cancellation_residual for r in reports)
    if any(r.degenerate for r in reports):
        status = "degenerate"
    elif cond > CONDITION_LIMIT or not all(r.decodable for r in reports):
        status = "filtered"
    else:
        status = "decodable"
    return TrialOutcome(status, err, cond, resid)


@dataclass
class BatchStats:
    config: AntennaConfig
    mode: FeedbackMode
    trials: int
    decodable_count: int
    filtered_count: int
    degenerate_count: int
    max_symbol_error_p99: float
    max_symbol_error_max: float
    median_condition_number: float
    max_cancellation_residual: float
    per_user_dof: Fraction
    scheme: str

    @property
    def decodable_fraction(self) -> float:
        """Share of decodable trials among those that passed the conditioning filter."""
        passed = self.trials - self.filtered_count - self.degenerate_count
        return self.decodable_count / passed if passed else 0.0

    @property
    def filtered_fraction(self) -> float:
        return self.filtered_count / self.trials

    @property
    def condition(self) -> str:
        return classify_condition(self.config).value

    def to_row(self) -> dict:
        return {
            "config": str(self.config),
            "mode": str(self.mode),
            "condition": self.condition,
            "trials": self.trials,
            "decodable_fraction": self.decodable_fraction,
            "filtered_fraction": self.filtered_fraction,
            "median_condition_number": self.median_condition_number,
            "max_symbol_error_p99": self.max_symbol_error_p99,
        }

    def to_dict(self) -> dict:
        out = self.to_row()
        out.update(
            scheme=self.scheme,
            decodable_count=self.decodable_count,
            filtered_count=self.filtered_count,
            degenerate_count=self.degenerate_count,
            max_symbol_error_max=self.max_symbol_error_max,
            max_cancellation_residual=self.max_cancellation_residual,
            per_user_dof=str(self.per_user_dof),
        )
        return out


BATCH_CSV_COLUMNS = (
    "config",
    "mode",
    "condition",
    "trials",
    "decodable_fraction",
    "filtered_fraction",
    "median_condition_number",
    "max_symbol_error_p99",
)


def run_batch(spec: TrialBatchSpec) -> BatchStats:
    """Noiseless decodability statistics over ``spec.trials`` seeded trials."""
    plan = build_scheme(spec.config, spec.mode)
    outcomes = [classify_trial(run_trial(plan, spec.seed(i))) for i in range(spec.trials)]
    ok = [o for o in outcomes if o.status == "decodable"]
    counts = {s: sum(o.status == s for o in outcomes) for s in ("decodable", "filtered", "degenerate")}
    errs = np.array([o.max_symbol_error for o in ok])
    conds = np.array([o.condition_number for o in ok])
    return BatchStats(
        config=spec.config,
        mode=spec.mode,
        trials=spec.trials,
        decodable_count=counts["decodable"],
        filtered_count=counts["filtered"],
        degenerate_count=counts["degenerate"],
        max_symbol_error_p99=float(np.percentile(errs, 99)) if ok else float("nan"),
        max_symbol_error_max=float(errs.max()) if ok else float("nan"),
        median_condition_number=float(np.median(conds)) if ok else float("nan"),
        max_cancellation_residual=max((o.cancellation_residual for o in ok), default=0.0),
        per_user_dof=plan.per_user_dof,
        scheme=plan.name,
    )


def batch_csv(stats: Sequence[BatchStats]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BATCH_CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for s in stats:
        w.writerow(s.to_row())
    return buf.getvalue()


@dataclass
class SweepPoint:
    snr_db: float
    mean_sum_rate: float
    ci_half_width: float
    trials_used: int


@dataclass
class SweepResult:
    """Mean sum rate (bits per slot) per SNR and the log-SNR slopes between neighbours."""

    config: AntennaConfig
    mode: FeedbackMode
    points: list
    slopes: list
    excluded: int
    exact_sum_dof: Fraction
    scheme_sum_dof: Fraction = field(default=Fraction(0))

    @property
    def sum_dof_estimate(self) -> Optional[float]:
        """Slope between the two highest SNR points, or None with fewer than two points."""
        return self.slopes[-1] if self.slopes else None

    @property
    def per_user_dof_estimate(self) -> Optional[float]:
        est = self.sum_dof_estimate
        return None if est is None else est / 2

    def relative_error(self) -> Optional[float]:
        est = self.sum_dof_estimate
        if est is None:
            return None
        return abs(est - float(self.exact_sum_dof)) / float(self.exact_sum_dof)

    def to_dict(self) -> dict:
        return {
            "config": str(self.config),
            "mode": str(self.mode),
            "points": [vars(p) for p in self.points],
            "slopes": self.slopes,
            "sum_dof_estimate": self.sum_dof_estimate,
            "per_user_dof_estimate": self.per_user_dof_estimate,
            "exact_sum_dof": str(self.exact_sum_dof),
            "exact_sum_dof_float": float(self.exact_sum_dof),
            "scheme_sum_dof": str(self.scheme_sum_dof),
            "relative_error": self.relative_error(),
            "excluded_trials": self.excluded,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["config", "mode", "snr_db", "mean_sum_rate", "ci_half_width", "trials"])
        for p in self.points:
            w.writerow([str(self.config), str(self.mode), p.snr_db, p.mean_sum_rate,
                        p.ci_half_width, p.trials_used])
        return buf.getvalue()


def trial_sum_rate(transcript: Transcript) -> float:
    """Sum of both receivers' rate proxies divided by the frame length."""
    total = sum(achievable_rate(eliminate_known_interference(transcript, rx)) for rx in USERS)
    return total / transcript.plan.frame_length


def estimate_dof_sweep(spec: TrialBatchSpec) -> SweepResult:
    """Finite-SNR sum rate of the scheme and its slope against ``log2 P``.

    Every SNR point reuses the same seeds, so channels and symbols are
    shared across the sweep and only the power changes. Trials whose
    noiseless decoding is filtered or degenerate are dropped from all points.
    """
    snrs = list(spec.snr_db)
    if not snrs:
        raise ValueError("sweep needs at least one SNR point")
    if any(b <= a for a, b in zip(snrs, snrs[1:])):
        raise ValueError("SNR points must be strictly ascending")
    plan = build_scheme(spec.config, spec.mode)
    keep = [
        i for i in range(spec.trials)
        if classify_trial(run_trial(plan, spec.seed(i))).status == "decodable"
    ]
    points = []
    for snr in snrs:
        noise = NoiseSpec(snr)
        rates = np.array([trial_sum_rate(run_trial(plan, spec.seed(i), noise)) for i in keep])
        half = 1.96 * rates.std(ddof=1) / np.sqrt(rates.size) if rates.size > 1 else float("nan")
        points.append(SweepPoint(snr, float(rates.mean()) if rates.size else float("nan"),
                                 float(half), int(rates.size)))
    slopes = [
        (q.mean_sum_rate - p.mean_sum_rate) / ((q.snr_db - p.snr_db) / 10 * np.log2(10))
        for p, q in zip(points, points[1:])
    ]
    exact = region_for_mode(spec.config, spec.mode).symmetric_point()[0] * 2
    return SweepResult(spec.config, spec.mode, points, [float(s) for s in slopes],
                       spec.trials - len(keep), exact, 2 * plan.per_user_dof)
