"""Brute-force ground truth and checks on the simulator's step counts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .errors import InsufficientData, SizeGuard
from .generate import random_instance
from .model import Instance, ShortestPaths, all_pairs_shortest_paths
from .tube import Lab

MAXMAX = "paper_maxmax"
MAXMIN = "ksupplier_maxmin"
SUBSET_LIMIT = 10**7


@dataclass(frozen=True)
class OracleResult:
    objective_kind: str
    value: int
    optimal_subsets: tuple[tuple[int, ...], ...]


def subset_value(inst: Instance, spm: ShortestPaths, subset, kind: str) -> int:
    if kind == MAXMIN:
        return max(min(spm(v, u) for u in subset) for v in inst.clients)
    if kind == MAXMAX:
        return max(spm(v, u) for v in inst.clients for u in subset)
    raise ValueError(f"unknown objective kind {kind!r}")


def oracle_solve(inst: Instance, spm: ShortestPaths | None = None, kind: str = MAXMIN) -> OracleResult:
    """Enumerate every k-subset of facilities and keep all minimisers."""
    if comb(len(inst.facilities), inst.k) > SUBSET_LIMIT:
        raise SizeGuard(f"C({len(inst.facilities)}, {inst.k}) subsets is too many to enumerate")
    spm = spm if spm is not None else all_pairs_shortest_paths(inst.graph)
    best, argmin = None, []
    for subset in combinations(sorted(inst.facilities), inst.k):
        value = subset_value(inst, spm, subset, kind)
        if best is None or value < best:
            best, argmin = value, [subset]
        elif value == best:
            argmin.append(subset)
    return OracleResult(kind, best, tuple(argmin))


@dataclass
class Verdict:
    passed: bool
    expected_value: int
    reported_value: int
    missing: list = field(default_factory=list)
    unexpected: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": "PASS" if self.passed else "FAIL",
            "expected": self.expected_value,
            "reported": self.reported_value,
            "missing_subsets": self.missing,
            "unexpected_subsets": self.unexpected,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_report(objective: int, subsets, oracle: OracleResult) -> Verdict:
    """Compare a reported optimum (value and subset set) against the oracle."""
    got = {tuple(sorted(s)) for s in subsets}
    want = set(oracle.optimal_subsets)
    return Verdict(
        passed=objective == oracle.value and got == want,
        expected_value=oracle.value,
        reported_value=objective,
        missing=[list(s) for s in sorted(want - got)],
        unexpected=[list(s) for s in sorted(got - want)],
    )


# -- step accounting ------------------------------------------------------------

@dataclass
class FitReport:
    linear: tuple[float, float]  # a, b for phases 2+3 ~ a*n + b
    linear_residual: float
    quadratic: dict  # phase-5 variant -> (c, d) for phase 4 + that variant ~ c*n^2 + d
    quadratic_residual: dict
    phase1_steps: list[int]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "linear": list(self.linear),
            "linear_residual_ratio": self.linear_residual,
            "quadratic": {k: list(v) for k, v in self.quadratic.items()},
            "quadratic_residual_ratio": self.quadratic_residual,
            "phase1_steps": self.phase1_steps,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def _fit(x, y):
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return (float(coef[0]), float(coef[1])), float(np.linalg.norm(resid) / np.linalg.norm(y))


def check_step_bounds(traces, tolerance: float = 0.10) -> FitReport:
    """Fit phase 2+3 steps linearly in n and phase 4+5 steps quadratically.

    ``traces`` is a list of ``(n, steps)``; ``steps`` maps ``p1`` .. ``p4``
    to step counts plus one ``p5_<variant>`` entry per extraction variant.
    The residual ratio is ``|y - fit| / |y|`` over all points.
    """
    ns = sorted({n for n, _ in traces})
    if len(ns) < 3:
        raise InsufficientData("need traces for at least three distinct n")
    n_arr = np.array([n for n, _ in traces], dtype=float)
    lin = np.array([s["p2"] + s["p3"] for _, s in traces], dtype=float)
    (a, b), lin_res = _fit(n_arr, lin)
    variants = sorted({key for _, s in traces for key in s if key.startswith("p5")})
    if not variants:
        raise InsufficientData("traces carry no phase-5 step counts")
    quad, quad_res = {}, {}
    for key in variants:
        y = np.array([s["p4"] + s[key] for _, s in traces], dtype=float)
        quad[key], quad_res[key] = _fit(n_arr**2, y)
    passed = (a > 0 and lin_res < tolerance
              and all(c > 0 for c, _ in quad.values())
              and all(r < tolerance for r in quad_res.values()))
    return FitReport((a, b), lin_res, quad, quad_res, [s["p1"] for _, s in traces], passed)


def collect_step_traces(ns=range(4, 11), seed: int = 7, per_n: int = 3, density: float = 0.5,
                        max_weight: int = 3):
    """Per-phase step counts on fixed-proportion random instances.

    Half the vertices (rounded down) are clients, the rest facilities, and
    ``k`` is half the facilities, so client-facility pairs grow like n**2/4.
    Both extraction variants run on every instance.
    """
    from .pipeline import run_pipeline

    traces = []
    for n in ns:
        n_c = n // 2
        n_f = n - n_c
        for rep in range(per_n):
            inst = random_instance(n, seed * 1000 + n * 10 + rep, density=density, max_weight=max_weight,
                                   clients=n_c, facilities=n_f, k=max(1, n_f // 2))
            report = run_pipeline(inst, pipeline="paper", extract="both", lab=Lab(keep_events=False))
            steps = {k: v for k, v in report.phase_steps.items() if not k.startswith("fork")}
            traces.append((n, steps))
    return traces
