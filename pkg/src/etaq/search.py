"""Seeded annealing over orderings of a finite prefix of the odd-squarefree
set, minimizing a uniform-convergence defect of the C/S surfaces.

The objective measures how far the finite-n surface strays from the inner
limits A(h) across a window of n and all h up to h_max: the worse the
uniformity in h, the larger the defect.  A low objective is a diagnostic,
not a decision procedure for whether any ordering makes the two iterated
limits commute.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import series as se
from ._rng import ALGORITHM_ID, SplitMix64
from .qset import OddSquarefree, QOrdering, dividing_positions, is_gamma
from .series import StripPoint


@dataclass(frozen=True)
class ObjectiveSpec:
    points: tuple[StripPoint, ...]
    n_window: tuple[int, int]      # inclusive [n0, n1]
    h_max: int
    eta_tol: float = 1e-12

    def __post_init__(self):
        n0, n1 = self.n_window
        if not (1 <= n0 <= n1):
            raise ValueError("need 1 <= n0 <= n1")
        if self.h_max < 0:
            raise ValueError("hMax must be >= 0")


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    prefix_length: int
    iterations: int
    objective: ObjectiveSpec
    neighborhood: str = "random-swap"   # or "adjacent-swap"
    initial_temperature: float = 1.0
    decay: float = 0.95
    bound_hint: int = 10_000

    def __post_init__(self):
        if self.prefix_length < 2:
            raise ValueError("prefixLength must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must be in (0, 1)")
        if self.neighborhood not in ("adjacent-swap", "random-swap"):
            raise ValueError(f"unknown neighborhood {self.neighborhood!r}")


@dataclass(frozen=True)
class OrderingCandidate:
    elements: tuple[OddSquarefree, ...]
    objective: float


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    objective: float
    accepted: bool


def objective_gap(elements, spec: ObjectiveSpec) -> float:
    """Sum over spec points of max_h max_n (|C(n,h) - A_cos(h)| +
    |S(n,h) - A_sin(h)|) with n in the window and the candidate prefix as
    the ordering."""
    elements = tuple(elements)
    if spec.h_max > len(elements):
        raise ValueError(f"hMax {spec.h_max} exceeds prefix length {len(elements)}")
    if spec.h_max == 0:
        return 0.0
    ordering = QOrdering.from_explicit(elements)
    index = ordering.index_map(spec.h_max)
    n0, n1 = spec.n_window
    total = 0.0
    for p in spec.points:
        a_cos, a_sin = (np.asarray(v) for v in
                        _limit_a_arrays(p, elements[:spec.h_max], spec.eta_tol))
        c_row = np.zeros(spec.h_max)
        s_row = np.zeros(spec.h_max)
        max_dev = np.zeros(spec.h_max)
        for k in range(1, n1 + 1):
            if not is_gamma(k):
                hits = dividing_positions(k, index)
                if hits:
                    a_k, b_k = se.term_ab(k, p)
                    for pos, sign in hits:
                        c_row[pos - 1:] += sign * a_k
                        s_row[pos - 1:] += sign * b_k
            if k >= n0:
                dev = np.abs(c_row - a_cos) + np.abs(s_row - a_sin)
                np.maximum(max_dev, dev, out=max_dev)
        total += float(max_dev.max())
    return total


def _limit_a_arrays(p: StripPoint, prefix, tol: float):
    eta = se.eta_accel(p, tol).value
    vals = np.array([q.sign * np.exp(-p.s * math.log(q.value)) for q in prefix],
                    dtype=np.complex128)
    partial = np.cumsum(vals) * eta
    return partial.real, -partial.imag


@dataclass(frozen=True)
class SearchResult:
    best: OrderingCandidate
    trace: tuple[TraceEntry, ...]
    config: SearchConfig

    def trace_csv(self, fh) -> None:
        fh.write("iteration,objective,accepted\n")
        for e in self.trace:
            fh.write(f"{e.iteration},{e.objective:.17g},{int(e.accepted)}\n")

    def best_json(self) -> str:
        return json.dumps({
            "permutation": [q.value for q in self.best.elements],
            "objective": self.best.objective,
            "seed": self.config.seed,
            "prefixLength": self.config.prefix_length,
            "iterations": self.config.iterations,
            "neighborhood": self.config.neighborhood,
            "initialTemperature": self.config.initial_temperature,
            "decay": self.config.decay,
            "rng": ALGORITHM_ID,
            "objectiveSpec": {
                "points": [{"x": p.x, "y": p.y} for p in self.config.objective.points],
                "nWindow": list(self.config.objective.n_window),
                "hMax": self.config.objective.h_max,
                "etaTol": self.config.objective.eta_tol,
            },
        }, indent=2)


def anneal(config: SearchConfig) -> SearchResult:
    """Simulated annealing from the ascending-value permutation.

    Proposal: one swap per iteration (adjacent or random pair); acceptance by
    the standard exponential criterion.  Fully deterministic given the seed.
    """
    base = QOrdering.by_value(config.bound_hint).prefix(config.prefix_length)
    rng = SplitMix64(config.seed)
    current = list(base)
    current_obj = objective_gap(current, config.objective)
    best = OrderingCandidate(tuple(current), current_obj)
    temperature = config.initial_temperature
    trace = []
    for it in range(1, config.iterations + 1):
        if config.neighborhood == "adjacent-swap":
            i = rng.randrange(config.prefix_length - 1)
            j = i + 1
        else:
            i = rng.randrange(config.prefix_length)
            j = rng.randrange(config.prefix_length - 1)
            if j >= i:
                j += 1
        candidate = list(current)
        candidate[i], candidate[j] = candidate[j], candidate[i]
        cand_obj = objective_gap(candidate, config.objective)
        delta = cand_obj - current_obj
        accepted = delta <= 0.0 or (temperature > 0.0 and
                                    rng.uniform() < math.exp(-delta / temperature))
        if accepted:
            current, current_obj = candidate, cand_obj
            if cand_obj < best.objective:
                best = OrderingCandidate(tuple(candidate), cand_obj)
        trace.append(TraceEntry(iteration=it, objective=cand_obj, accepted=accepted))
        temperature *= config.decay
    return SearchResult(best=best, trace=tuple(trace), config=config)
