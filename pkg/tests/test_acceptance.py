"""Acceptance gate: eight end-to-end criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import itertools
import json
import time

import pytest

from ksupplier_dna.cli import main
from ksupplier_dna.generate import campaign_instances
from ksupplier_dna.model import all_pairs_shortest_paths, build_library, descending_pairs
from ksupplier_dna.oracle import MAXMAX, MAXMIN, check_step_bounds, collect_step_traces, oracle_solve, verify_report
from ksupplier_dna.pipeline import (
    expected_phase_counts,
    phase1_generate,
    phase2_filter_valid,
    phase3_cardinality,
    phase4_tag_distance,
    run_pipeline,
    trailing_x,
)
from ksupplier_dna.tube import ANTISENSE, HASH, A, B, Lab, Strand, Tube, label, length_mers

from conftest import FIG1_LIKE

VERDICTS = []


def verdict(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    VERDICTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def small_batch():
    """20 random instances, 2 <= n <= 10, run through the "paper" pipeline with both extractions."""
    instances = [inst for _, inst in campaign_instances(20, (2, 10), seed=2024)]
    start = time.perf_counter()
    reports = [run_pipeline(inst, "paper", extract="both", lab=Lab(keep_events=False)) for inst in instances]
    return instances, reports, time.perf_counter() - start


@pytest.fixture(scope="module")
def campaign_batch():
    """100 seeded instances, n <= 8, both pipelines and both extractions."""
    instances = [inst for _, inst in campaign_instances(100, (2, 8), seed=1)]
    start = time.perf_counter()
    reports = [run_pipeline(inst, "both", extract="both", lab=Lab(keep_events=False)) for inst in instances]
    return instances, reports, time.perf_counter() - start


def test_criterion_1_phase_counts(small_batch):
    instances, reports, elapsed = small_batch
    bad = [i for i, (inst, rep) in enumerate(zip(instances, reports))
           if {p: rep.phase_counts[p] for p in ("p1", "p2", "p3")} != expected_phase_counts(inst)]
    ns = sorted({inst.n for inst in instances})
    verdict(1, not bad and elapsed < 30.0,
            f"{len(instances) - len(bad)}/{len(instances)} instances, n in {ns[0]}..{ns[-1]}, {elapsed:.1f}s < 30s")


def test_criterion_2_paper_matches_maxmax(campaign_batch):
    instances, reports, elapsed = campaign_batch
    ok = sum(
        verify_report(r.results["paper"]["objective"], r.results["paper"]["subsets"],
                      oracle_solve(inst, kind=MAXMAX)).passed
        for inst, r in zip(instances, reports)
    )
    verdict(2, ok == len(instances) and elapsed < 60.0, f"{ok}/{len(instances)} match, {elapsed:.1f}s < 60s")


def test_criterion_3_corrected_matches_maxmin(campaign_batch):
    instances, reports, elapsed = campaign_batch
    ok = sum(
        verify_report(r.results["corrected"]["objective"], r.results["corrected"]["subsets"],
                      oracle_solve(inst, kind=MAXMIN)).passed
        for inst, r in zip(instances, reports)
    )
    verdict(3, ok == len(instances) and elapsed < 60.0, f"{ok}/{len(instances)} match, {elapsed:.1f}s < 60s")


def test_criterion_4_extractions_agree(small_batch, campaign_batch):
    reports = small_batch[1] + campaign_batch[1]
    ok = sum(r.results["paper"]["extract_agree"] for r in reports)
    verdict(4, ok == len(reports), f"{ok}/{len(reports)} instances agree")


def test_criterion_5_annealing_enumerates_labels():
    failures = []
    for n in range(1, 7):
        frags = [(HASH, A(1))] + [(B(d), A(d + 1)) for d in range(1, n)] + [(B(n), HASH)]
        frags += [(label(x),) for x in range(3)]
        splints = [(A(d), label(x), B(d)) for d in range(1, n + 1) for x in range(3)] + [(HASH,)]
        tube = Tube([Strand(f) for f in frags] + [Strand(s, ANTISENSE) for s in splints])
        got = {d.product for d in Lab().annealing(tube).members()}
        want = {
            (HASH,) + tuple(s for i, x in enumerate(xs, 1) for s in (A(i), label(x), B(i))) + (HASH,)
            for xs in itertools.product(range(3), repeat=n)
        }
        if got != want:
            failures.append(n)
    verdict(5, not failures, "n = 1..6 equal to 3^n enumeration" if not failures else f"mismatch at n={failures}")


def test_criterion_6_step_bounds():
    traces = collect_step_traces()
    report = check_step_bounds(traces)
    quad = ", ".join(f"{k} {v:.3f}" for k, v in sorted(report.quadratic_residual.items()))
    verdict(6, report.passed,
            f"linear residual {report.linear_residual:.3f}, quadratic residual {quad}, "
            f"phase-1 steps {sorted(set(report.phase1_steps))}, tolerance 0.10")


def test_criterion_7_phase4_lengths(small_batch):
    instances = small_batch[0]
    checked = bad = 0
    for inst in instances:
        lab = Lab(keep_events=False)
        spm = all_pairs_shortest_paths(inst.graph)
        lib = build_library(inst, spm)
        p = phase3_cardinality(lab, phase2_filter_valid(lab, phase1_generate(lab, lib), inst), inst)
        p = phase4_tag_distance(lab, p, descending_pairs(spm, inst), lib)
        for strand in p.members():
            tag = trailing_x(strand) - inst.k
            checked += 1
            if length_mers(strand) != 10 * (3 * inst.n + 2) + 10 * inst.k + 10 * tag:
                bad += 1
    verdict(7, bad == 0 and checked > 0, f"{checked - bad}/{checked} phase-4 strands have the expected length")


def test_criterion_8_byte_identical_reruns(tmp_path, capsys):
    instance = tmp_path / "instance.json"
    instance.write_text(json.dumps(FIG1_LIKE))

    def solve(tag):
        trace = tmp_path / f"trace_{tag}.jsonl"
        code = main(["solve", "--instance", str(instance), "--pipeline", "both", "--extract", "both",
                     "--trace", str(trace)])
        return code, capsys.readouterr().out, trace.read_bytes()

    def campaign():
        code = main(["campaign", "--count", "20", "--seed", "11", "--json"])
        return code, capsys.readouterr().out

    first, second = solve("a"), solve("b")
    c1, c2 = campaign(), campaign()
    same = first == second and c1 == c2 and first[0] == 0 and c1[0] == 0
    verdict(8, same, "solve report + trace and campaign output byte-identical across reruns")
