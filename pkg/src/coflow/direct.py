"""Direct-routing schedulers.

Three algorithms, all shipping every parcel straight from its origin to
its destination:

* greedy maximal fractional matching, driven by the residual demand matrix
  (the average-completion-time workhorse);
* integral makespan via bipartite multigraph edge coloring;
* fractional makespan by smearing the demand matrix uniformly over
  ``ceil(load_bound)`` steps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .coloring import color_bipartite_multigraph
from .errors import NegativeDemandError, SchedulingError
from .model import (
    FractionalMatching,
    Instance,
    IntegralMatching,
    Schedule,
    Transfer,
    matrix_col_sums,
    matrix_row_sums,
    schedule_from_steps,
)

ORDER_CHOICES = ("lex", "residual", "sums", "random")


@dataclass(frozen=True)
class GreedyTrace:
    """Everything the dual certificate needs from a greedy run.

    ``residuals[t]`` is the residual matrix before step ``t`` (so
    ``residuals[0]`` is the input and ``residuals[horizon]`` is all zero);
    ``sender_residual[t][i]`` / ``receiver_residual[t][j]`` are its row and
    column sums.
    """

    instance: Instance
    residuals: tuple
    sender_residual: tuple
    receiver_residual: tuple
    matchings: tuple[FractionalMatching, ...]

    @property
    def horizon(self) -> int:
        return len(self.matchings)

    @property
    def total_completion(self) -> Fraction:
        total = Fraction(0)
        for t, m in enumerate(self.matchings):
            total += (t + 1) * m.total_rate
        return total

    def to_json(self) -> dict:
        from .rational import render_rational

        return {
            "n": self.instance.n,
            "residuals": [
                [[render_rational(x) for x in row] for row in mat]
                for mat in self.residuals
            ],
            "matchings": [
                [[s, r, render_rational(p)] for s, r, p in m.triples]
                for m in self.matchings
            ],
        }

    @staticmethod
    def from_json(obj: dict, instance: Instance) -> "GreedyTrace":
        from .rational import parse_rational

        residuals = tuple(
            tuple(tuple(parse_rational(x) for x in row) for row in mat)
            for mat in obj["residuals"]
        )
        matchings = tuple(
            FractionalMatching(
                tuple((int(s), int(r), parse_rational(p)) for s, r, p in trip)
            )
            for trip in obj["matchings"]
        )
        return GreedyTrace(
            instance=instance,
            residuals=residuals,
            sender_residual=tuple(tuple(matrix_row_sums(m)) for m in residuals),
            receiver_residual=tuple(tuple(matrix_col_sums(m)) for m in residuals),
            matchings=matchings,
        )


def _pair_order(residual, order: str, rng) -> list[tuple[int, int]]:
    n = len(residual)
    pairs = [
        (i, j) for i in range(n) for j in range(n) if i != j and residual[i][j] > 0
    ]
    if order == "lex":
        return pairs
    if order == "residual":
        return sorted(pairs, key=lambda p: (-residual[p[0]][p[1]], p))
    if order == "sums":
        rows = matrix_row_sums(residual)
        cols = matrix_col_sums(residual)
        return sorted(pairs, key=lambda p: (-(rows[p[0]] + cols[p[1]]), p))
    if order == "random":
        rng.shuffle(pairs)
        return pairs
    raise ValueError(f"unknown pair order {order!r}")


def maximal_fractional_matching(
    residual, cap: Fraction = Fraction(1), order: str = "lex", rng=None
) -> FractionalMatching:
    """Greedy maximal fractional matching of a residual demand matrix.

    Pairs are visited in the configured order; each receives the largest
    rate its residual and the two endpoint caps allow. The result is
    maximal: any pair left short has a saturated sender or receiver.
    """
    cap = Fraction(cap)
    if cap <= 0:
        raise NegativeDemandError("matching cap must be positive")
    n = len(residual)
    sent = [Fraction(0)] * n
    received = [Fraction(0)] * n
    triples = []
    for i, j in _pair_order(residual, order, rng):
        rate = min(residual[i][j], cap - sent[i], cap - received[j])
        if rate > 0:
            triples.append((i, j, rate))
            sent[i] += rate
            received[j] += rate
    return FractionalMatching(tuple(triples), cap=cap)


def greedy_schedule(
    instance: Instance, order: str = "lex", seed: int | None = None
) -> tuple[Schedule, GreedyTrace]:
    """Repeat maximal fractional matchings on the residuals until empty."""
    rng = random.Random(seed) if order == "random" else None
    residual = [list(row) for row in instance.demands]
    residuals = [tuple(tuple(row) for row in residual)]
    matchings = []
    steps = []
    # Defensive bound; greedy provably finishes well before it.
    horizon_cap = ceil(instance.total_demand) + instance.n**2
    while any(x > 0 for row in residual for x in row):
        if len(matchings) >= horizon_cap:
            raise SchedulingError("greedy exceeded its defensive horizon")
        matching = maximal_fractional_matching(residual, order=order, rng=rng)
        for i, j, p in matching.triples:
            residual[i][j] -= p
        matchings.append(matching)
        residuals.append(tuple(tuple(row) for row in residual))
        steps.append([Transfer(i, j, i, j, p) for i, j, p in matching.triples])
    residual_mats = tuple(residuals)
    trace = GreedyTrace(
        instance=instance,
        residuals=residual_mats,
        sender_residual=tuple(tuple(matrix_row_sums(m)) for m in residual_mats),
        receiver_residual=tuple(tuple(matrix_col_sums(m)) for m in residual_mats),
        matchings=tuple(matchings),
    )
    return schedule_from_steps(instance.n, steps), trace


def edge_coloring_schedule(instance: Instance) -> Schedule:
    """Optimal direct integral makespan via bipartite edge coloring.

    Demands are rounded up to integers; the multigraph with multiplicity
    ``ceil(D_ij)`` is colored with exactly max-degree colors, and each
    color class becomes one step. Slots ship only the true demand, so
    every slot of pair (i, j) carries min(1, what remains).
    """
    n = instance.n
    edges = []
    for i, j, d in instance.commodities():
        edges.extend([(i, j)] * ceil(d))
    color_classes = color_bipartite_multigraph(n, edges)
    remaining = [list(row) for row in instance.demands]
    steps = []
    for cls in color_classes:
        IntegralMatching(tuple(cls))  # sanity: each class is a matching
        transfers = []
        for i, j in cls:
            amount = min(Fraction(1), remaining[i][j])
            if amount > 0:
                remaining[i][j] -= amount
                transfers.append(Transfer(i, j, i, j, amount))
        steps.append(transfers)
    return schedule_from_steps(n, steps)


def smeared_fractional_schedule(instance: Instance) -> Schedule:
    """Optimal fractional makespan: ship D / ceil(B) in each of ceil(B) steps."""
    horizon = ceil(instance.load_bound)
    if horizon == 0:
        return schedule_from_steps(instance.n, [])
    transfers = [
        Transfer(i, j, i, j, d / horizon) for i, j, d in instance.commodities()
    ]
    return schedule_from_steps(instance.n, [list(transfers) for _ in range(horizon)])
