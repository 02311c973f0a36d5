"""The five-phase tube algorithm for minimum k-supplier, plus a corrected variant.

Every phase is written purely in terms of :class:`~ksupplier_dna.tube.Lab`
operations so the bio-step count of each phase can be read off the lab.

Strand layout after phase 1::

    # A1 l1 B1 A2 l2 B2 ... An ln Bn #

where label ``0`` puts the vertex in the client set, ``1`` in the open set
``S`` and ``2`` in the rest ``R``.  Phase 3 appends one ``X`` per open
facility, phase 4 appends the distance tag, so a finished strand ends in
``k + tag`` copies of ``X``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from .errors import MalformedStrand, NoSolution, OperationError, StrandExplosion
from .model import (
    Instance,
    Library,
    ShortestPaths,
    all_pairs_shortest_paths,
    build_library,
    descending_pairs,
    vertex_pattern,
)
from .tube import HASH, SYMBOL_MERS, A, B, Lab, Strand, Tube, X, label

PHASE2_MODES = ("corrected", "paper_literal")
PIPELINES = ("paper", "corrected", "both")
EXTRACTIONS = ("selection", "xsearch", "both")


@dataclass(frozen=True)
class SolutionAssignment:
    client_set: frozenset[int]
    open_set: frozenset[int]
    rest_set: frozenset[int]
    tag_units: int


def encode_assignment(labels, tail: int = 0) -> Strand:
    """Build the strand for a label vector (``labels[i-1]`` is vertex ``i``'s label)."""
    symbols = [HASH]
    for i, value in enumerate(labels, start=1):
        symbols += [A(i), label(value), B(i)]
    symbols.append(HASH)
    symbols += [X] * tail
    return Strand(tuple(symbols))


def decode_strand(strand: Strand, n: int, k: int) -> SolutionAssignment:
    s = strand.symbols
    body = 3 * n + 2
    if len(s) < body or s[0] != HASH or s[body - 1] != HASH:
        raise MalformedStrand(f"not a {n}-vertex strand: {strand}")
    groups = ([], [], [])
    for i in range(1, n + 1):
        a, lab_, b = s[3 * i - 2: 3 * i + 1]
        if a != A(i) or b != B(i) or lab_.kind != "L":
            raise MalformedStrand(f"vertex block {i} is malformed in {strand}")
        groups[lab_.index].append(i)
    tail = s[body:]
    if any(sym != X for sym in tail):
        raise MalformedStrand(f"tail must be X symbols only: {strand}")
    return SolutionAssignment(frozenset(groups[0]), frozenset(groups[1]), frozenset(groups[2]), len(tail) - k)


def trailing_x(strand: Strand) -> int:
    count = 0
    for sym in reversed(strand.symbols):
        if sym != X:
            break
        count += 1
    return count


# -- phases -------------------------------------------------------------------

def phase1_generate(lab: Lab, lib: Library) -> Tube:
    """Assemble one strand per label assignment (3**n strands)."""
    if 3 ** lib.n > lab.max_strands:
        raise StrandExplosion(f"3**{lib.n} strands exceed the cap of {lab.max_strands}")
    p = lab.merge(lib.sense_tube("P"), lib.splint_tube("Q"))
    p = lab.annealing(p)
    p = lab.denaturation(p)
    tmp, rest = lab.separation(p, (HASH, A(1)), matched_name="Ttmp")
    lab.discard(rest)
    p, leftover = lab.separation(tmp, (B(lib.n), HASH), matched_name="P", residual_name="Ttmp")
    lab.discard(leftover)
    return p


def phase2_filter_valid(lab: Lab, p: Tube, inst: Instance, mode: str = "corrected") -> Tube:
    """Drop strands whose labels contradict the client/facility sets.

    ``corrected``: clients must be 0, facilities 1 or 2, everything else 2.
    ``paper_literal``: clients must be 0, facilities must be 1, others are
    left alone.
    """
    if mode not in PHASE2_MODES:
        raise OperationError(f"unknown phase-2 mode {mode!r}")
    for j in range(1, inst.n + 1):
        if j in inst.clients:
            banned = (1, 2)
        elif j in inst.facilities:
            banned = (0, 2) if mode == "paper_literal" else (0,)
        elif mode == "corrected":
            banned = (0, 1)
        else:
            continue
        dropped = []
        for value in banned:
            t, p = lab.separation(p, vertex_pattern(j, value), matched_name=f"T{len(dropped) + 1}", residual_name="P")
            dropped.append(t)
        for t in dropped:
            lab.discard(t)
    return p


def phase3_cardinality(lab: Lab, p: Tube, inst: Instance) -> Tube:
    """Count open facilities with trailing X's and keep exactly the k-subsets."""
    for j in sorted(inst.facilities):
        t1, p = lab.separation(p, vertex_pattern(j, 1), matched_name="T1", residual_name="P")
        t1 = lab.append(t1, (X,))
        p = lab.merge(p, t1)
    too_many, p = lab.separation(p, (X,) * (inst.k + 1), matched_name="T1", residual_name="P")
    lab.discard(too_many)
    p, too_few = lab.separation(p, (X,) * inst.k, matched_name="P", residual_name="T2")
    lab.discard(too_few)
    return p


def phase4_tag_distance(lab: Lab, p: Tube, pairs, lib: Library) -> Tube:
    """Tag every strand with its longest client-to-open-facility distance.

    Pairs are visited longest first, so the first pair that matches a strand
    is its maximum; the strand then leaves ``P`` and is never tagged again.
    """
    result = Tube(name="T5")
    for v, u, _ in pairs:
        t1, p = lab.separation(p, vertex_pattern(u, 1), matched_name="T1", residual_name="P")
        t2, t1 = lab.separation(t1, vertex_pattern(v, 0), matched_name="T2", residual_name="T1")
        p = lab.merge(p, t1)
        t2 = lab.append(t2, lib.tag_fragments[(v, u)])
        result = lab.merge(result, t2)
    lab.discard(p)
    result.name = "P"
    return result


def base_length(n: int, k: int) -> int:
    """Length in mers of a phase-3 strand: the vertex blocks, two hashes, k counting X's."""
    return SYMBOL_MERS * (3 * n + 2 + k)


def phase5_extract_selection(lab: Lab, p: Tube, n: int, k: int, bound: int) -> tuple[int, Tube]:
    """Scan length classes upward; the first non-empty one holds the optimum."""
    for i in range(1, bound + 1):
        t, p = lab.selection(p, base_length(n, k) + SYMBOL_MERS * i, matched_name="T", residual_name="P")
        if lab.detect(t):
            return i, t
    raise NoSolution(f"no strand found with tag length up to {bound}")


def phase5_extract_xsearch(lab: Lab, p: Tube, k: int, bound: int) -> tuple[int, Tube]:
    """Find the shortest X tail by probing for X runs of growing length."""
    for i in range(1, bound + 1):
        p, work = lab.amplify(p, copy_name="T")
        t1, rest = lab.separation(work, (X,) * (k + i), matched_name="T1", residual_name="T")
        lab.discard(rest)
        t2, t3 = lab.separation(t1, (X,) * (k + i + 1), matched_name="T2", residual_name="T3")
        lab.discard(t2)
        if lab.detect(t3):
            return i, t3
        lab.discard(t3)
    raise NoSolution(f"no strand found with tag length up to {bound}")


def corrected_threshold_pipeline(lab: Lab, p3: Tube, inst: Instance, spm: ShortestPaths):
    """Search radii in increasing order for the true k-supplier objective.

    For a radius r every client must see some open facility within r; the
    working tube keeps, client by client, only strands satisfying that.
    Returns ``(objective, solution_tube, p3)`` where ``p3`` is the untouched
    copy of the input.
    """
    radii = sorted({spm(v, u) for v in inst.clients for u in inst.facilities})
    for r in radii:
        p3, work = lab.amplify(p3, copy_name="W")
        for v in sorted(inst.clients):
            near = [u for u in sorted(inst.facilities) if spm(v, u) <= r]
            kept = Tube(name="S")
            for u in near:
                hit, work = lab.separation(work, vertex_pattern(u, 1), matched_name="T1", residual_name="W")
                kept = lab.merge(kept, hit)
            lab.discard(work)
            kept.name = "W"
            work = kept
        if lab.detect(work):
            return r, work, p3
        lab.discard(work)
    raise NoSolution("no radius covers every client")


# -- orchestration ------------------------------------------------------------

def _subsets(tube: Tube, inst: Instance) -> list[list[int]]:
    found = set()
    for strand in tube.members():
        found.add(tuple(sorted(decode_strand(strand, inst.n, inst.k).open_set & inst.facilities)))
    return [list(s) for s in sorted(found)]


@dataclass
class PipelineReport:
    objective: int
    subsets: list[list[int]]
    bio_steps: int
    phase_counts: dict
    phase_steps: dict
    mode: dict
    results: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "subsets": self.subsets,
            "bio_steps": self.bio_steps,
            "phase_counts": self.phase_counts,
            "phase_steps": self.phase_steps,
            "mode": self.mode,
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def run_pipeline(inst: Instance, pipeline: str = "paper", phase2_mode: str = "corrected",
                 extract: str = "selection", lab: Lab | None = None,
                 spm: ShortestPaths | None = None) -> PipelineReport:
    """Run phases 1-5 (and/or the corrected threshold search) on one instance."""
    if pipeline not in PIPELINES:
        raise OperationError(f"unknown pipeline {pipeline!r}")
    if extract not in EXTRACTIONS:
        raise OperationError(f"unknown extraction {extract!r}")
    if phase2_mode not in PHASE2_MODES:
        raise OperationError(f"unknown phase-2 mode {phase2_mode!r}")
    lab = lab if lab is not None else Lab()
    spm = spm if spm is not None else all_pairs_shortest_paths(inst.graph)
    lib = build_library(inst, spm)
    counts, steps = {}, {}
    mark = lab.steps

    def close(phase):
        nonlocal mark
        steps[phase] = lab.steps - mark
        mark = lab.steps

    p = phase1_generate(lab, lib)
    counts["p1"] = p.size
    close("p1")
    p = phase2_filter_valid(lab, p, inst, phase2_mode)
    counts["p2"] = p.size
    close("p2")
    p = phase3_cardinality(lab, p, inst)
    counts["p3"] = p.size
    close("p3")

    results = {}
    if pipeline in ("paper", "both"):
        if pipeline == "both":
            p, p_corr = lab.amplify(p, copy_name="P3")
            close("fork")
        else:
            p_corr = None
        p4 = phase4_tag_distance(lab, p, descending_pairs(spm, inst), lib)
        counts["p4"] = p4.size
        close("p4")
        bound = inst.graph.max_weight * inst.n ** 2
        paper = {}
        if extract == "both":
            p4, p4_copy = lab.amplify(p4, copy_name="P'")
            close("fork5")
        else:
            p4_copy = p4
        if extract in ("selection", "both"):
            value, sols = phase5_extract_selection(lab, p4, inst.n, inst.k, bound)
            paper["selection"] = {"objective": value, "subsets": _subsets(sols, inst)}
            close("p5_selection")
        if extract in ("xsearch", "both"):
            value, sols = phase5_extract_xsearch(lab, p4_copy, inst.k, bound)
            paper["xsearch"] = {"objective": value, "subsets": _subsets(sols, inst)}
            close("p5_xsearch")
        first = paper["selection" if "selection" in paper else "xsearch"]
        paper["objective"] = first["objective"]
        paper["subsets"] = first["subsets"]
        if extract == "both":
            paper["extract_agree"] = paper["selection"] == paper["xsearch"]
        results["paper"] = paper
        p = p_corr
    if pipeline in ("corrected", "both"):
        value, sols, _ = corrected_threshold_pipeline(lab, p, inst, spm)
        results["corrected"] = {"objective": value, "subsets": _subsets(sols, inst)}
        close("corrected")

    main = results["paper"] if "paper" in results else results["corrected"]
    return PipelineReport(
        objective=main["objective"],
        subsets=main["subsets"],
        bio_steps=lab.steps,
        phase_counts=counts,
        phase_steps=steps,
        mode={"pipeline": pipeline, "phase2": phase2_mode, "extract": extract},
        results=results,
    )


def expected_phase_counts(inst: Instance) -> dict:
    """Closed-form strand counts after phases 1-3 for corrected filtering."""
    return {"p1": 3 ** inst.n, "p2": 2 ** len(inst.facilities), "p3": comb(len(inst.facilities), inst.k)}
