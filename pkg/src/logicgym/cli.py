"""Operator command line: generate, audit, score, fit, crossings, curriculum-sim, serve.

Every subcommand emits a JSON report on stdout (or --out) so results are
machine-readable and reproducible from the echoed config and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .analyze import (
    NoCrossingError,
    fit_report,
    read_run_logs,
    threshold_step,
)
from .curriculum import (
    DEFAULT_CURRICULUM,
    CurriculumState,
    Strategy,
    report_accuracy,
    sample_depth,
)
from .core import Level
from .dataset import CorpusConfig, audit_corpus, write_corpus
from .reward import score

LEVELS = [l.value for l in Level]


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(message: str) -> int:
    sys.stderr.write(json.dumps({"error": message}) + "\n")
    return 2


def _cmd_gen(args) -> int:
    cfg = CorpusConfig(
        level=args.level,
        depth=args.depth,
        candidates=args.candidates,
        max_distractors=args.max_distractors,
        num_entities=args.entities,
        exact_depth=args.exact_depth,
    )
    out_dir = args.out or os.environ.get("LOGICGYM_OUT_DIR", ".")
    manifest = write_corpus(
        out_dir, cfg, args.count, args.seed,
        split=args.split, workers=args.workers, blind=args.blind,
    )
    _emit(json.loads(manifest.to_json()), None)
    return 0


def _cmd_audit(args) -> int:
    report = audit_corpus(
        args.corpus, sample=args.sample, seed=args.seed, workers=args.workers
    )
    _emit(report, args.out)
    return 0


def _cmd_score(args) -> int:
    if args.vectors:
        fh = open(args.vectors)
    else:
        fh = sys.stdin
    results = []
    total = 0
    correct = 0
    try:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            outcome = score(rec["completion"], rec["gold"], strict=args.strict)
            total += 1
            correct += outcome.reward
            results.append({**outcome.to_dict(), "id": rec.get("id")})
    finally:
        if fh is not sys.stdin:
            fh.close()
    _emit(
        {
            "count": total,
            "mean_reward": (correct / total) if total else None,
            "results": results,
        },
        args.out,
    )
    return 0


def _cmd_crossings(args) -> int:
    logs = read_run_logs(args.runs)
    crossings = []
    missing = 0
    for log in logs:
        entry = {"setting": log.label, "depth": log.depth}
        try:
            entry["step"] = threshold_step(log, args.mu)
        except NoCrossingError:
            entry["step"] = None
            missing += 1
        crossings.append(entry)
    _emit({"mu": args.mu, "crossings": crossings}, args.out)
    if missing:
        sys.stderr.write(json.dumps({"error": f"{missing} run(s) never crossed mu={args.mu}"}) + "\n")
        return 1
    return 0


def _cmd_fit(args) -> int:
    logs = read_run_logs(args.runs)
    report = fit_report(logs, args.mu, measure=args.measure, n_params=args.n_params)
    if args.csv:
        from .analyze import fit_curve_csv, fit_power, fit_exponential

        chunks = []
        for entry in report["settings"]:
            if "power" not in entry:
                continue
            points = entry["points"]
            chunks.append(f"# {entry['setting']}")
            chunks.append(fit_curve_csv(points, fit_power(points), fit_exponential(points)))
        with open(args.csv, "w") as fh:
            fh.write("\n".join(chunks))
    for entry in report["settings"]:
        entry.pop("points", None)
    _emit(report, args.out)
    return 0


def _cmd_curriculum_sim(args) -> int:
    if args.accuracies_file:
        with open(args.accuracies_file) as fh:
            accs = [float(x) for x in fh.read().replace(",", " ").split()]
    else:
        accs = [float(x) for x in args.accuracies.split(",")]
    if args.d_cur is not None and args.delta is not None:
        state = CurriculumState(
            d_cur=args.d_cur, delta=args.delta, d_max=args.d_max,
            threshold=args.threshold, window=args.window,
        )
    else:
        default = DEFAULT_CURRICULUM.get(Level(args.level)) if args.level else None
        if default is None:
            return _fail("pass --d-cur and --delta, or --level conjunction|quantification")
        state = CurriculumState(
            d_cur=min(default[0], args.d_max), delta=default[1], d_max=args.d_max,
            threshold=args.threshold, window=args.window,
        )
    trajectory = [state.d_cur]
    for acc in accs:
        report_accuracy(state, acc)
        trajectory.append(state.d_cur)
    report = {
        "strategy": args.strategy,
        "d_max": args.d_max,
        "threshold": state.threshold,
        "window": state.window,
        "trajectory": trajectory,
        "final_d_cur": state.d_cur,
    }
    if args.sample_depths:
        import random

        rng = random.Random(args.seed)
        strat = Strategy(args.strategy)
        report["sampled_depths"] = [
            sample_depth(strat, state, rng) for _ in range(args.sample_depths)
        ]
    _emit(report, args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        trusted=args.trusted,
        snapshot_path=args.snapshot_path,
        snapshot_interval=args.snapshot_interval,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logicgym", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a corpus with manifest")
    g.add_argument("--level", choices=LEVELS, required=True)
    g.add_argument("--depth", type=int, required=True, help="max depth D; instances sample 1..D")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--candidates", type=int, default=4)
    g.add_argument("--max-distractors", type=int, default=5)
    g.add_argument("--entities", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--split", default="train")
    g.add_argument("--out", default=None, help="output dir (default $LOGICGYM_OUT_DIR or .)")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--blind", action="store_true", help="omit gold answers")
    g.add_argument("--exact-depth", action="store_true", help="every instance at exactly D")
    g.set_defaults(func=_cmd_gen)

    a = sub.add_parser("audit", help="re-audit a corpus file with the entailment oracle")
    a.add_argument("corpus")
    a.add_argument("--sample", type=float, default=1.0)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--out", default=None)
    a.set_defaults(func=_cmd_audit)

    s = sub.add_parser("score", help="score completion/gold pairs (JSONL file or stdin)")
    s.add_argument("--vectors", default=None, help="JSONL with completion and gold fields")
    s.add_argument("--strict", action="store_true", help="byte-exact matching")
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_score)

    c = sub.add_parser("crossings", help="threshold crossings per run log")
    c.add_argument("runs")
    c.add_argument("--mu", type=float, default=0.9)
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_crossings)

    f = sub.add_parser("fit", help="power-law and exponential fits over crossings")
    f.add_argument("runs")
    f.add_argument("--mu", type=float, default=0.9)
    f.add_argument("--measure", default="steps",
                   choices=["steps", "gen_tokens", "upd_tokens", "flops", "wall_seconds"])
    f.add_argument("--n-params", type=int, default=None, help="model size for FLOPs measure")
    f.add_argument("--csv", default=None, help="write plot-ready CSV here")
    f.add_argument("--out", default=None)
    f.set_defaults(func=_cmd_fit)

    cs = sub.add_parser("curriculum-sim", help="replay a scripted accuracy sequence")
    cs.add_argument("--strategy", default="curriculum",
                    choices=[s.value for s in Strategy])
    cs.add_argument("--level", choices=LEVELS, default=None)
    cs.add_argument("--d-max", type=int, required=True)
    cs.add_argument("--d-cur", type=int, default=None)
    cs.add_argument("--delta", type=int, default=None)
    cs.add_argument("--threshold", type=float, default=0.70)
    cs.add_argument("--window", type=int, default=10)
    cs.add_argument("--accuracies", default="")
    cs.add_argument("--accuracies-file", default=None)
    cs.add_argument("--sample-depths", type=int, default=0)
    cs.add_argument("--seed", type=int, default=0)
    cs.add_argument("--out", default=None)
    cs.set_defaults(func=_cmd_curriculum_sim)

    sv = sub.add_parser("serve", help="run the HTTP environment service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8977)
    sv.add_argument("--trusted", action="store_true",
                    help="allow gold answers in generate responses")
    sv.add_argument("--snapshot-path", default=None)
    sv.add_argument("--snapshot-interval", type=float, default=30.0)
    sv.set_defaults(func=_cmd_serve)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
