"""Command-line entry point: generate, solve, oracle, audit, ratio."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import oracles
from .core import instance_from_json, instance_to_json, social_welfare, solution_to_dict
from .experiments import FAMILIES, ExperimentConfig, run_audit, run_ratio_experiment
from .generators import gen_dks_lower_bound
from .mechanisms import PROBLEMS, exact_expectation, make_mechanism, monte_carlo
from .ordinal import induce_preferences
from .randomness import RandomSource


def _emit(ctx, text: str) -> None:
    out = ctx.obj["out"]
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


@click.group()
@click.option("--seed", default=0, show_default=True, help="Master seed.")
@click.option("--exact", is_flag=True, help="Exact branch enumeration instead of sampling.")
@click.option("--samples", default=1, show_default=True, help="Monte Carlo sample count.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file.")
@click.pass_context
def main(ctx, seed, exact, samples, out):
    """Ordinal mechanisms for metric matching, clustering, DkS and Max TSP."""
    ctx.obj = {"seed": seed, "exact": exact, "samples": samples, "out": out}


@main.command()
@click.option("--family", type=click.Choice(FAMILIES + ("lower-bound",)), default="euclidean")
@click.option("--n", "n", type=int, required=True, help="Agents (clusters for lower-bound).")
@click.option("--dim", default=2, show_default=True)
@click.option("--density", default=0.5, show_default=True)
@click.option("--k", type=int, default=2, help="Cluster size for lower-bound.")
@click.pass_context
def generate(ctx, family, n, dim, density, k):
    """Write an instance as JSON."""
    from .experiments import make_instance

    seed = ctx.obj["seed"]
    if family == "lower-bound":
        inst, hidden = gen_dks_lower_bound(n, k, seed)
        click.echo(f"hidden cluster: {hidden}", err=True)
    else:
        inst = make_instance(family, n, seed, dim, density)
    _emit(ctx, instance_to_json(inst))


@main.command()
@click.argument("instance", type=click.File())
@click.option("--mechanism", type=click.Choice(sorted(PROBLEMS)), required=True)
@click.option("--k", type=int, default=None)
@click.option("--beta", type=float, default=None)
@click.pass_context
def solve(ctx, instance, mechanism, k, beta):
    """Run a mechanism on an instance (truthful preferences)."""
    inst = instance_from_json(instance.read())
    mech = make_mechanism(mechanism, inst.n, k if k is not None else _implied_k(mechanism, inst.n), beta)
    profile = induce_preferences(inst)
    if ctx.obj["exact"]:
        result = {"mechanism": mechanism, "expected_welfare": exact_expectation(mech, inst, profile)}
    elif ctx.obj["samples"] > 1:
        mean, se = monte_carlo(mech, inst, ctx.obj["samples"], ctx.obj["seed"], profile)
        result = {"mechanism": mechanism, "mean_welfare": mean, "stderr": se,
                  "samples": ctx.obj["samples"]}
    else:
        sol = mech.run(profile, RandomSource(ctx.obj["seed"]))
        result = {"mechanism": mechanism, "welfare": social_welfare(sol, inst),
                  "solution": solution_to_dict(sol)}
    _emit(ctx, json.dumps(result))


def _implied_k(mechanism: str, n: int):
    if mechanism in ("mix",):
        return n // 2
    return None


@main.command()
@click.argument("instance", type=click.File())
@click.option("--problem", type=click.Choice(["matching", "dks", "ksum", "tsp"]), required=True)
@click.option("--k", type=int, default=None)
@click.pass_context
def oracle(ctx, instance, problem, k):
    """Exact optimum by enumeration / dynamic programming."""
    inst = instance_from_json(instance.read())
    if problem != "tsp" and k is None:
        raise click.UsageError(f"--k is required for {problem}")
    try:
        if problem == "matching":
            sol, val = oracles.opt_k_matching(inst, k)
        elif problem == "dks":
            sol, val = oracles.opt_densest_k_subgraph(inst, k)
        elif problem == "ksum":
            sol, val = oracles.opt_ksum_clustering(inst, k)
        else:
            sol, val = oracles.opt_max_tsp(inst)
    except oracles.OracleLimitError as exc:
        raise click.ClickException(str(exc))
    _emit(ctx, json.dumps({"problem": problem, "value": val, "solution": solution_to_dict(sol)}))


def _config(ctx, mechanism, n, k, beta, family, seeds, bound=None, dim=2, timing=False, workers=1):
    mode = "exact" if ctx.obj["exact"] or ctx.obj["samples"] <= 1 else "monte-carlo"
    return ExperimentConfig(mechanism=mechanism, sizes=tuple(n), seeds=seeds, k=k, beta=beta,
                            family=family, mode=mode, samples=ctx.obj["samples"], bound=bound,
                            master_seed=ctx.obj["seed"], dim=dim, timing=timing, workers=workers)


@main.command()
@click.option("--mechanism", type=click.Choice(sorted(PROBLEMS)), required=True)
@click.option("--n", "n", type=int, multiple=True, required=True)
@click.option("--k", type=int, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--family", type=click.Choice(FAMILIES), default="euclidean")
@click.option("--seeds", default=5, show_default=True)
@click.pass_context
def audit(ctx, mechanism, n, k, beta, family, seeds):
    """Exhaustive single-agent misreport audit; exit status 1 if any deviation."""
    reports = run_audit(_config(ctx, mechanism, n, k, beta, family, seeds))
    _emit(ctx, json.dumps([r.to_dict() for r in reports], indent=2))
    sys.exit(1 if reports else 0)


@main.command()
@click.option("--mechanism", type=click.Choice(sorted(PROBLEMS)), required=True)
@click.option("--n", "n", type=int, multiple=True, required=True)
@click.option("--k", type=int, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--family", type=click.Choice(FAMILIES), default="euclidean")
@click.option("--dim", default=2, show_default=True)
@click.option("--seeds", default=20, show_default=True)
@click.option("--bound", type=float, default=None, help="Ratio ceiling to flag.")
@click.option("--timing", is_flag=True, help="Fill the runtime_ms column (breaks byte-identity).")
@click.option("--workers", default=1, show_default=True)
@click.pass_context
def ratio(ctx, mechanism, n, k, beta, family, dim, seeds, bound, timing, workers):
    """Approximation-ratio batch: CSV rows to --out, JSON summary beside it."""
    report = run_ratio_experiment(_config(ctx, mechanism, n, k, beta, family, seeds, bound, dim,
                                          timing, workers))
    if ctx.obj["out"]:
        report.write(ctx.obj["out"])
    else:
        click.echo(report.to_csv(), nl=False)
    click.echo(json.dumps({k: report.summary[k] for k in ("rows", "max_ratio", "mean_ratio",
                                                          "violations")}), err=True)
    sys.exit(1 if report.summary["violations"] else 0)


if __name__ == "__main__":
    main()
