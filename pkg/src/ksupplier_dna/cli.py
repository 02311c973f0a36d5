"""Command-line entry point: ``solve``, ``gen`` and ``campaign``.

Exit codes
    0   success (campaign: every instance passed)
    1   campaign finished with at least one FAIL
    2   bad command-line usage
    3   instance file missing or not parseable
    10-17  instance validation (NonIntegerWeight, Disconnected, OverlappingCF,
        BadK, DuplicateEdge, InvalidEdge, BadVertexSet, EdgeBound)
    20  StrandExplosion   21 NonTerminating   22 NoSolution
    23  MalformedStrand   24 SizeGuard        25 InsufficientData
    30-32  tube misuse (internal error)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import SimulationError
from .generate import campaign_instances, random_instance_dict
from .model import all_pairs_shortest_paths, load_instance
from .oracle import MAXMAX, MAXMIN, oracle_solve, verify_report
from .pipeline import EXTRACTIONS, PHASE2_MODES, PIPELINES, run_pipeline
from .tube import Lab, default_max_strands


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _density(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksupplier-dna",
                                     description="Test-tube simulation of a DNA algorithm for minimum k-supplier.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the tube pipeline on an instance file")
    solve.add_argument("--instance", required=True, help="instance JSON file")
    solve.add_argument("--pipeline", choices=PIPELINES, default="paper")
    solve.add_argument("--phase2-mode", choices=PHASE2_MODES, default="corrected")
    solve.add_argument("--extract", choices=EXTRACTIONS, default="selection")
    solve.add_argument("--trace", help="write one JSON line per bio-step to this file")
    solve.add_argument("--max-strands", type=_positive, default=None,
                       help="strand cap (default: $KSUPPLIER_DNA_MAX_STRANDS or 2000000)")

    gen = sub.add_parser("gen", help="write seeded random instances")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--density", type=_density, default=0.3)
    gen.add_argument("--max-weight", type=_positive, default=9)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=".", help="output directory")

    camp = sub.add_parser("campaign", help="generate, solve and verify against brute force")
    camp.add_argument("--count", type=int, default=100)
    camp.add_argument("--n-min", type=int, default=2)
    camp.add_argument("--n-max", type=int, default=8)
    camp.add_argument("--seed", type=int, default=0)
    camp.add_argument("--density", type=_density, default=0.3)
    camp.add_argument("--max-weight", type=_positive, default=9)
    camp.add_argument("--json", action="store_true", help="print the summary as JSON instead of a table")
    return parser


def solve_command(args) -> int:
    inst = load_instance(args.instance)
    cap = args.max_strands or default_max_strands()
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as sink:
            lab = Lab(sink=sink, keep_events=False, max_strands=cap)
            report = run_pipeline(inst, args.pipeline, args.phase2_mode, args.extract, lab=lab)
    else:
        report = run_pipeline(inst, args.pipeline, args.phase2_mode, args.extract,
                              lab=Lab(keep_events=False, max_strands=cap))
    print(report.to_json())
    return 0


def gen_command(args) -> int:
    import random

    if args.n < 2:
        raise SystemExit("gen: --n must be >= 2")
    if args.count < 0:
        raise SystemExit("gen: --count must be >= 0")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    master = random.Random(args.seed)
    for i in range(args.count):
        rng = random.Random(master.randrange(2**31))
        raw = random_instance_dict(args.n, rng, args.density, args.max_weight)
        path = out / f"instance_{i:04d}.json"
        path.write_text(json.dumps(raw, sort_keys=True) + "\n", encoding="utf-8")
        print(path)
    return 0


def campaign_row(index: int, seed: int, inst) -> dict:
    spm = all_pairs_shortest_paths(inst.graph)
    report = run_pipeline(inst, "both", "corrected", "both", lab=Lab(keep_events=False), spm=spm)
    paper, corrected = report.results["paper"], report.results["corrected"]
    v_paper = verify_report(paper["objective"], paper["subsets"], oracle_solve(inst, spm, MAXMAX))
    v_corr = verify_report(corrected["objective"], corrected["subsets"], oracle_solve(inst, spm, MAXMIN))
    agree = paper["extract_agree"]
    return {
        "index": index,
        "seed": seed,
        "n": inst.n,
        "clients": len(inst.clients),
        "facilities": len(inst.facilities),
        "k": inst.k,
        "paper": paper["objective"],
        "maxmax": v_paper.expected_value,
        "corrected": corrected["objective"],
        "maxmin": v_corr.expected_value,
        "extract_agree": agree,
        "verdict": "PASS" if v_paper.passed and v_corr.passed and agree else "FAIL",
    }


COLUMNS = ("index", "seed", "n", "clients", "facilities", "k", "paper", "maxmax", "corrected", "maxmin",
           "extract_agree", "verdict")


def format_table(rows) -> str:
    cells = [list(COLUMNS)] + [[str(r[c]) for c in COLUMNS] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(COLUMNS))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    passed = sum(r["verdict"] == "PASS" for r in rows)
    lines.append(f"{passed}/{len(rows)} PASS")
    return "\n".join(lines)


def campaign_command(args) -> int:
    if args.count < 0 or not 2 <= args.n_min <= args.n_max:
        raise SystemExit("campaign: need count >= 0 and 2 <= n-min <= n-max")
    instances = campaign_instances(args.count, (args.n_min, args.n_max), args.seed, args.density, args.max_weight)
    rows = [campaign_row(i, seed, inst) for i, (seed, inst) in enumerate(instances)]
    if args.json:
        print(json.dumps({"rows": rows, "passed": sum(r["verdict"] == "PASS" for r in rows),
                          "total": len(rows)}, sort_keys=True))
    else:
        print(format_table(rows))
    return 0 if all(r["verdict"] == "PASS" for r in rows) else 1


COMMANDS = {"solve": solve_command, "gen": gen_command, "campaign": campaign_command}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SimulationError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "issues": [i.to_dict() for i in getattr(exc, "issues", [])]}, sort_keys=True),
              file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
