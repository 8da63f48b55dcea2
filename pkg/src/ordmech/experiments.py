"""Batch ratio experiments and truthfulness audits with reproducible seeding.

Every row derives its own seed from ``(master_seed, row_index)``, so rows can
run in any order (or in a process pool) and the sorted report is identical.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import generators, oracles
from .core import MetricInstance
from .mechanisms import Mechanism, exact_expectation, make_mechanism, monte_carlo
from .ordinal import induce_preferences
from .randomness import EnumerationLimitError, derive_seed
from .truthfulness import (DeviationReport, check_semi_obliviousness,
                           check_truthful_in_expectation, check_universal_truthfulness)

log = logging.getLogger(__name__)

CSV_COLUMNS = ["problem", "mechanism", "family", "n", "k", "beta", "seed", "mode", "samples",
               "value", "stderr", "opt", "ratio", "runtime_ms"]
FAMILIES = ("euclidean", "closure", "nonmetric", "regression")
RATIO_TOL = 1e-9


@dataclass(frozen=True)
class ExperimentConfig:
    mechanism: str
    sizes: tuple[int, ...]
    seeds: int = 10
    k: int | None = None
    beta: float | None = None
    family: str = "euclidean"
    mode: str = "exact"
    samples: int = 10_000
    bound: float | None = None
    master_seed: int = 0
    dim: int = 2
    density: float = 0.5
    timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.mode not in ("exact", "monte-carlo"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "sizes", tuple(self.sizes))

    @property
    def problem(self) -> str:
        return make_mechanism(self.mechanism, max(self.sizes), self.k).problem


@dataclass
class RatioReport:
    rows: list[dict]
    summary: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({c: _fmt(row.get(c)) for c in CSV_COLUMNS})
        return buf.getvalue()

    def write(self, path) -> None:
        from pathlib import Path

        path = Path(path)
        path.write_text(self.to_csv())
        path.with_suffix(".json").write_text(json.dumps(self.summary, indent=2, sort_keys=True) + "\n")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def make_instance(family: str, n: int, seed: int, dim: int = 2, density: float = 0.5) -> MetricInstance:
    if family == "euclidean":
        return generators.gen_euclidean(n, dim, seed)
    if family == "closure":
        return generators.gen_metric_closure(n, density, seed)
    if family == "nonmetric":
        return generators.gen_random_symmetric(n, seed)
    if family == "regression":
        return generators.gen_greedy_nontruthful_regression(seed, n=n)[0]
    raise ValueError(f"unknown family {family!r}")


def oracle_value(mech: Mechanism, inst: MetricInstance) -> float:
    if mech.problem == "matching":
        return oracles.opt_k_matching(inst, mech.k)[1]
    if mech.problem == "clustering":
        return oracles.opt_ksum_clustering(inst, mech.k)[1]
    if mech.problem == "dks":
        return oracles.opt_densest_k_subgraph(inst, mech.k)[1]
    return oracles.opt_max_tsp(inst)[1]


def default_k(mechanism: str, n: int, k: int | None) -> int | None:
    """Fill in k where the mechanism fixes it (perfect matching, tours)."""
    if mechanism == "mix":
        return n // 2
    if mechanism.startswith("tsp"):
        return None
    return k


def _row_jobs(config: ExperimentConfig):
    idx = 0
    for n in config.sizes:
        for s in range(config.seeds):
            yield idx, n, s
            idx += 1


def _run_row(config: ExperimentConfig, idx: int, n: int) -> dict:
    seed = derive_seed(config.master_seed, idx)
    k = default_k(config.mechanism, n, config.k)
    mech = make_mechanism(config.mechanism, n, k, config.beta)
    row = dict(problem=mech.problem, mechanism=config.mechanism, family=config.family, n=n, k=k,
               beta=config.beta, seed=seed, mode=config.mode,
               samples=config.samples if config.mode == "monte-carlo" else None)
    start = time.perf_counter()
    try:
        inst = make_instance(config.family, n, seed, config.dim, config.density)
        profile = induce_preferences(inst)
        if config.mode == "exact":
            value, se = exact_expectation(mech, inst, profile), 0.0
        else:
            value, se = monte_carlo(mech, inst, config.samples, derive_seed(seed, 1), profile)
        opt = oracle_value(mech, inst)
    except (oracles.OracleLimitError, EnumerationLimitError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(value=value, stderr=se if config.mode == "monte-carlo" else None, opt=opt,
               ratio=opt / value if value > 0 else math.inf,
               conservative_ratio=opt / (value + 3 * se) if value + 3 * se > 0 else math.inf)
    if config.timing:
        row["runtime_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return row


def run_ratio_experiment(config: ExperimentConfig) -> RatioReport:
    """Generate, evaluate, solve and compare every (size, seed) row."""
    jobs = list(_row_jobs(config))
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            rows = list(pool.map(_run_row, [config] * len(jobs), [j[0] for j in jobs],
                                 [j[1] for j in jobs]))
    else:
        rows = [_run_row(config, idx, n) for idx, n, _ in jobs]
    rows.sort(key=lambda r: (r["n"], r["seed"]))

    ok = [r for r in rows if "error" not in r]
    ratios = [r["ratio"] for r in ok]
    bound = config.bound
    violations = []
    if bound is not None:
        # Monte Carlo rows get mean + 3 SE of slack before counting as a violation
        violations = [r["seed"] for r in ok if r["conservative_ratio"] > bound + RATIO_TOL]
    below_one = [r["seed"] for r in ok if r["ratio"] < 1 - RATIO_TOL and r["mechanism"] != "dks-bicriteria"]
    summary = {
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(config).items()
                   if k not in ("timing", "workers")},
        "rows": len(rows),
        "errors": [{"seed": r["seed"], "n": r["n"], "error": r["error"]} for r in rows if "error" in r],
        "max_ratio": max(ratios) if ratios else None,
        "mean_ratio": math.fsum(ratios) / len(ratios) if ratios else None,
        "bound": bound,
        "violations": violations,
        "ratio_below_one": below_one,
    }
    if violations:
        log.warning("%d rows exceed bound %s", len(violations), bound)
    return RatioReport(rows, summary)


def run_audit(config: ExperimentConfig) -> list[DeviationReport]:
    """Exhaustive misreport audit over a seed batch; empty means no deviation found."""
    reports = []
    for idx, n, _ in _row_jobs(config):
        seed = derive_seed(config.master_seed, idx)
        k = default_k(config.mechanism, n, config.k)
        if config.family == "regression":
            inst = generators.gen_greedy_nontruthful_regression(seed, n=n, k=k if k and k < n // 2 else 1)[0]
        else:
            inst = make_instance(config.family, n, seed, config.dim, config.density)
        mech = make_mechanism(config.mechanism, n, k, config.beta)
        reports += check_truthful_in_expectation(mech, inst)
        if mech.family is not None:
            reports += check_universal_truthfulness(mech, inst)
        if mech.name == "dks-hybrid":
            reports += check_semi_obliviousness(mech, inst)
    return reports
