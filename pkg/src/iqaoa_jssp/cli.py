"""Command-line entry point: ``iqaoa-jssp <command> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import platform
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .circuit import MIXERS, MemoryBudgetError, dump_amplitudes, run_circuit
from .instance import DEFAULT_MIXER, FIXTURE_NAMES, InstanceError, resolve_instance, total_vector_count
from .optimizer import GaConfig, amplification, run_ga
from .oracle import DEFAULT_BUDGET, EnumerationBudgetError, MakespanDistribution, enumerate_distribution
from .rank import RankRangeError, qubit_count, rank_of, unrank
from .schedule import InvalidVectorError, decode

log = logging.getLogger("iqaoa_jssp")

EXIT_OK = 0
EXIT_VALIDATION = 3
EXIT_BUDGET = 4
EXIT_IO = 5

MANIFEST_SCHEMA = 1


def _parse_vector(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InvalidVectorError(f"malformed vector {text!r}; expected comma-separated job indices") from None


def _versions() -> dict:
    return {
        "iqaoa_jssp": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "backend": BACKEND,
    }


def _write_manifest(out: Path, command: str, argv: list[str], instance: str, config: dict, outputs: dict) -> Path:
    manifest = {
        "schema_version": MANIFEST_SCHEMA,
        "command": command,
        "argv": argv,
        "instance": instance,
        "config": config,
        "seed": config.get("seed"),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "versions": _versions(),
        "outputs": outputs,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def _write_svg(path: Path, series: dict[str, MakespanDistribution], title: str) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.warning("matplotlib not installed; skipping %s", path)
        return
    fig, ax = plt.subplots(figsize=(8, 4))
    spans = sorted(set().union(*(d.counts for d in series.values())))
    width = 0.8 / len(series)
    for i, (label, dist) in enumerate(series.items()):
        xs = np.arange(len(spans)) + i * width
        ax.bar(xs, [100 * dist.probability(t) for t in spans], width=width, label=label)
    ax.set_xticks(np.arange(len(spans)) + 0.4 - width / 2)
    ax.set_xticklabels(spans, rotation=90, fontsize=7)
    ax.set_xlabel("makespan")
    ax.set_ylabel("probability (%)")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_enumerate(args, argv) -> int:
    inst = resolve_instance(args.instance)
    dist = enumerate_distribution(inst, budget=args.budget, workers=args.workers)
    summary = dist.summary()
    print(json.dumps(summary, indent=2))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "distribution.csv").write_text(dist.to_csv(), encoding="utf-8")
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        outputs = {"distribution": "distribution.csv", "summary": "summary.json"}
        if args.svg:
            _write_svg(out / "distribution.svg", {"initial": dist}, inst.name)
            outputs["svg"] = "distribution.svg"
        _write_manifest(out, "enumerate", argv, args.instance,
                        {"budget": args.budget, "workers": args.workers}, outputs)
    return EXIT_OK


def cmd_rank(args, argv) -> int:
    inst = resolve_instance(args.instance)
    print(rank_of(inst, _parse_vector(args.vector)))
    return EXIT_OK


def cmd_unrank(args, argv) -> int:
    inst = resolve_instance(args.instance)
    try:
        r = int(args.rank)
    except ValueError:
        raise RankRangeError(f"rank must be an integer, got {args.rank!r}") from None
    print(",".join(map(str, unrank(inst, r))))
    return EXIT_OK


def cmd_decode(args, argv) -> int:
    inst = resolve_instance(args.instance)
    sched = decode(inst, _parse_vector(args.vector))
    if args.json:
        print(sched.to_json(inst))
    else:
        print(sched.makespan)
    return EXIT_OK


def cmd_info(args, argv) -> int:
    inst = resolve_instance(args.instance)
    total = total_vector_count(inst)
    print(json.dumps({
        "name": inst.name,
        "jobs": inst.n_jobs,
        "machines": inst.n_machines,
        "vectors": total,
        "qubits": qubit_count(inst),
        "lower_bound": inst.lower_bound(),
        "default_mixer": DEFAULT_MIXER.get(inst.name),
    }, indent=2))
    return EXIT_OK


def _histogram_rows(initial: MakespanDistribution | None, final: MakespanDistribution):
    spans = sorted(set(final.counts) | set(initial.counts if initial else ()))
    for t in spans:
        yield t, (initial.probability(t) if initial else ""), final.probability(t)


def cmd_solve(args, argv) -> int:
    inst = resolve_instance(args.instance)
    mixer = args.mixer or DEFAULT_MIXER.get(inst.name, 1)
    bound = {"pi": math.pi, "2pi": 2 * math.pi}[args.gene_bounds]
    cfg = GaConfig(
        generations=args.generations,
        population=args.population,
        tournament_size=args.tournament_size,
        mutation_probability=args.mutation_probability,
        mutation_gene_fraction=args.mutation_genes,
        gene_low=-bound,
        gene_high=bound,
        shots=args.shots,
        xi=args.xi,
        theta=args.theta,
        depth=args.depth,
        mixer=mixer,
        seed=args.seed,
    )
    q = qubit_count(inst)
    log.info("%s: %d vectors, %d qubits, mixer %d", inst.name, total_vector_count(inst), q, mixer)

    initial = None
    if args.emit_initial:
        initial = enumerate_distribution(inst, budget=args.budget)

    def progress(rec):
        if rec.generation % 10 == 0:
            log.info("generation %d: C=%.1f mean=%.3f", rec.generation, rec.objective.c, rec.objective.mean_makespan)

    result = run_ga(inst, cfg, progress=progress)
    final = result.final_distribution
    amp = amplification(initial, final) if initial is not None else None

    payload = {
        "instance": args.instance,
        "config": cfg.as_dict(),
        "seed": cfg.seed,
        "qubits": q,
        "mixer": mixer,
        "best_gammas": list(result.best_params.gammas),
        "best_betas": list(result.best_params.betas),
        "best_objective": result.best_objective.as_dict(),
        "evaluations": result.evaluations,
        "unique_evaluations": result.unique_evaluations,
        "history": [
            {"generation": r.generation, "genes": r.genes, **r.objective.as_dict()} for r in result.history
        ],
        "final_distribution": [
            {"makespan": t, "count": c, "probability": c / final.total} for t, c in final.counts.items()
        ],
        "initial_summary": initial.summary() if initial is not None else None,
        "amplification": amp,
    }
    summary = {
        "optimum": initial.minimum if initial else final.minimum,
        "final_min": final.minimum,
        "final_optimum_probability": final.probability(initial.minimum if initial else final.minimum),
        "amplification": amp,
        "best_gammas": payload["best_gammas"],
        "best_betas": payload["best_betas"],
    }
    print(json.dumps(summary, indent=2))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "result.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    with open(out / "convergence.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        d = cfg.depth
        w.writerow(["generation"] + [f"beta_{i + 1}" for i in range(d)] + [f"gamma_{i + 1}" for i in range(d)]
                   + ["objective", "mean_makespan", "min_makespan", "min_count", "m_term"])
        for r in result.history:
            o = r.objective
            w.writerow([r.generation] + r.genes[d:] + r.genes[:d]
                       + [o.c, o.mean_makespan, o.min_makespan, o.min_count, o.m_term])
    (out / "final_histogram.csv").write_text(final.to_csv(), encoding="utf-8")
    outputs = {"result": "result.json", "convergence": "convergence.csv", "final_histogram": "final_histogram.csv"}
    if initial is not None:
        (out / "initial_histogram.csv").write_text(initial.to_csv(), encoding="utf-8")
        outputs["initial_histogram"] = "initial_histogram.csv"
    with open(out / "histogram.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["makespan", "initial_probability", "final_probability"])
        w.writerows(_histogram_rows(initial, final))
    outputs["histogram"] = "histogram.csv"
    if args.dump_amplitudes:
        dump_amplitudes(run_circuit(q, result.best_params), out / "amplitudes.csv")
        outputs["amplitudes"] = "amplitudes.csv"
    if args.svg:
        series = {"final": final} if initial is None else {"initial": initial, "final": final}
        _write_svg(out / "histogram.svg", series, inst.name)
        outputs["svg"] = "histogram.svg"
    _write_manifest(out, "solve", argv, args.instance, cfg.as_dict(), outputs)
    return EXIT_OK


def cmd_replay(args, argv) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if manifest.get("schema_version") != MANIFEST_SCHEMA:
        raise ValueError(f"unsupported manifest schema {manifest.get('schema_version')!r}")
    old = list(manifest["argv"])
    if "--out" in old:
        i = old.index("--out")
        old[i + 1] = args.out
    else:
        old += ["--out", args.out]
    return main(old)


def cmd_fixtures(args, argv) -> int:
    for name in FIXTURE_NAMES:
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iqaoa-jssp", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def instance_arg(sp):
        sp.add_argument("instance", help="instance file or bundled fixture name")

    sp = sub.add_parser("enumerate", help="exact makespan distribution over all vectors")
    instance_arg(sp)
    sp.add_argument("--out", help="directory for distribution.csv, summary.json, manifest.json")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("rank", help="rank of a vector")
    instance_arg(sp)
    sp.add_argument("vector", help="comma-separated job indices")
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("unrank", help="vector of a rank")
    instance_arg(sp)
    sp.add_argument("rank")
    sp.set_defaults(func=cmd_unrank)

    sp = sub.add_parser("decode", help="semi-active schedule of a vector")
    instance_arg(sp)
    sp.add_argument("vector")
    sp.add_argument("--json", action="store_true", help="print the full schedule")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("info", help="instance size and register width")
    instance_arg(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("solve", help="optimise circuit angles with the genetic algorithm")
    instance_arg(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--mixer", type=int, choices=MIXERS, help="default depends on the fixture")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--shots", type=int, default=1000)
    sp.add_argument("--generations", type=int, default=200)
    sp.add_argument("--population", type=int, default=15)
    sp.add_argument("--tournament-size", type=int, default=3)
    sp.add_argument("--mutation-probability", type=float, default=0.70)
    sp.add_argument("--mutation-genes", type=float, default=0.25, help="fraction of genes mutated")
    sp.add_argument("--gene-bounds", choices=("pi", "2pi"), default="pi")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--xi", type=float, default=100000.0)
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget for --emit-initial")
    sp.add_argument("--emit-initial", action=argparse.BooleanOptionalAction, default=True,
                    help="enumerate the uniform distribution for comparison and amplification")
    sp.add_argument("--dump-amplitudes", action="store_true", help="write amplitudes.csv (<= 12 qubits)")
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    sp.add_argument("manifest")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("fixtures", help="list bundled instances")
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        return args.func(args, argv)
    except (EnumerationBudgetError, MemoryBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InstanceError, InvalidVectorError, RankRangeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
