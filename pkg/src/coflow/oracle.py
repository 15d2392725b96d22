"""Exact LP oracle for desk-scale instances.

Builds the direct fractional completion-time LP: variables x[i,j,t] for
each positive demand and each slot t = 1..T, demand rows sum_t x >= D_ij,
per-slot sender/receiver cap rows, objective sum t*x. The special cases
with a single 1/4 cap family are the sender- and receiver-bound
relaxations whose optima upper-bound the dual certificate objectives.

The oracle exists to verify other code, so it refuses large inputs and
re-checks every solution by substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .errors import SizeGuardError, StructuralError
from .model import Instance
from .rational import render_rational
from . import simplex

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
HORIZON_TOO_SHORT = "horizon-too-short"

DEFAULT_MAX_N = 6
DEFAULT_MAX_HORIZON = 24


@dataclass(frozen=True)
class LPSolution:
    status: str
    objective: Fraction | None
    x: dict  # (i, j, t) -> Fraction, slots t = 1..T

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "objective": None if self.objective is None else render_rational(self.objective),
            "x": [
                [i, j, t, render_rational(v)] for (i, j, t), v in sorted(self.x.items())
            ],
        }


def _solve_at_horizon(instance, sender_cap, receiver_cap, horizon):
    pairs = [(i, j) for i, j, _ in instance.commodities()]
    if not pairs:
        return simplex.SimplexResult(simplex.OPTIMAL, Fraction(0), ()), {}
    # variable layout: pair-major, slot-minor
    nvars = len(pairs) * horizon
    index = {}
    k = 0
    for i, j in pairs:
        for t in range(1, horizon + 1):
            index[(i, j, t)] = k
            k += 1
    c = [Fraction(0)] * nvars
    for (i, j, t), k in index.items():
        c[k] = Fraction(t)

    a_ge, b_ge = [], []
    for i, j in pairs:
        row = [Fraction(0)] * nvars
        for t in range(1, horizon + 1):
            row[index[(i, j, t)]] = Fraction(1)
        a_ge.append(row)
        b_ge.append(instance.demands[i][j])

    a_ub, b_ub = [], []
    senders = sorted({i for i, _ in pairs})
    receivers = sorted({j for _, j in pairs})
    if sender_cap is not None:
        for i in senders:
            for t in range(1, horizon + 1):
                row = [Fraction(0)] * nvars
                for _, j in [(p, q) for p, q in pairs if p == i]:
                    row[index[(i, j, t)]] = Fraction(1)
                a_ub.append(row)
                b_ub.append(Fraction(sender_cap))
    if receiver_cap is not None:
        for j in receivers:
            for t in range(1, horizon + 1):
                row = [Fraction(0)] * nvars
                for i, _ in [(p, q) for p, q in pairs if q == j]:
                    row[index[(i, j, t)]] = Fraction(1)
                a_ub.append(row)
                b_ub.append(Fraction(receiver_cap))

    result = simplex.solve_lp(c, a_ub, b_ub, a_ge, b_ge)
    if result.status != simplex.OPTIMAL:
        return result, None
    x = {
        key: result.x[k]
        for key, k in index.items()
        if result.x[k] != 0
    }
    _check_solution(instance, sender_cap, receiver_cap, horizon, x, result.objective)
    return simplex.SimplexResult(OPTIMAL, result.objective, None), x


def _check_solution(instance, sender_cap, receiver_cap, horizon, x, objective):
    """Plug the solution back into every constraint; exact, so no slop."""
    shipped: dict[tuple[int, int], Fraction] = {}
    per_sender: dict[tuple[int, int], Fraction] = {}
    per_receiver: dict[tuple[int, int], Fraction] = {}
    obj = Fraction(0)
    for (i, j, t), v in x.items():
        if v < 0:
            raise StructuralError("LP returned a negative amount")
        shipped[(i, j)] = shipped.get((i, j), Fraction(0)) + v
        per_sender[(i, t)] = per_sender.get((i, t), Fraction(0)) + v
        per_receiver[(j, t)] = per_receiver.get((j, t), Fraction(0)) + v
        obj += t * v
    for i, j, d in instance.commodities():
        if shipped.get((i, j), Fraction(0)) < d:
            raise StructuralError("LP solution violates demand satisfaction")
    if sender_cap is not None and any(v > sender_cap for v in per_sender.values()):
        raise StructuralError("LP solution violates a sender cap")
    if receiver_cap is not None and any(v > receiver_cap for v in per_receiver.values()):
        raise StructuralError("LP solution violates a receiver cap")
    if obj != objective:
        raise StructuralError("LP objective does not match its solution")


def solve_completion_lp(
    instance: Instance,
    sender_cap: Fraction | None,
    receiver_cap: Fraction | None,
    t_max: int,
    max_n: int = DEFAULT_MAX_N,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> LPSolution:
    """Exact optimum of the completion-time LP at horizon ``t_max``.

    Caps of None mean uncapped. Infeasibility at ``t_max`` is probed again
    at twice the horizon to distinguish a too-short horizon from a truly
    infeasible system.
    """
    if instance.n > max_n:
        raise SizeGuardError(
            f"oracle guard: n={instance.n} exceeds {max_n} (override max_n to force)"
        )
    if t_max > max_horizon:
        raise SizeGuardError(
            f"oracle guard: horizon {t_max} exceeds {max_horizon} "
            "(override max_horizon to force)"
        )
    result, x = _solve_at_horizon(instance, sender_cap, receiver_cap, t_max)
    if result.status == simplex.OPTIMAL:
        return LPSolution(OPTIMAL, result.objective, x if x else {})
    probe, _ = _solve_at_horizon(instance, sender_cap, receiver_cap, 2 * t_max)
    if probe.status == simplex.OPTIMAL:
        return LPSolution(HORIZON_TOO_SHORT, None, {})
    return LPSolution(INFEASIBLE, None, {})


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def opt_direct_fractional(instance: Instance, **guards) -> Fraction:
    """Optimal direct fractional total completion time (caps 1, 1)."""
    horizon = _ceil_frac(instance.total_demand) + instance.n
    sol = solve_completion_lp(instance, Fraction(1), Fraction(1), horizon, **guards)
    if sol.status != OPTIMAL:
        raise StructuralError(f"direct LP unexpectedly {sol.status}")
    return sol.objective


def _one_sided_horizon(sums) -> int:
    # A 1/4-capped side finishes by front-loading each node at full rate;
    # per-node decoupling makes this horizon provably sufficient.
    return max((_ceil_frac(4 * s) for s in sums), default=0)


def opt_sender_bound(instance: Instance, **guards) -> Fraction:
    """Optimum of the sender-bound relaxation (sender cap 1/4, no receiver cap)."""
    from .model import matrix_row_sums

    horizon = _one_sided_horizon(matrix_row_sums(instance.demands))
    if horizon == 0:
        return Fraction(0)
    sol = solve_completion_lp(instance, Fraction(1, 4), None, horizon, **guards)
    if sol.status != OPTIMAL:
        raise StructuralError(f"sender-bound LP unexpectedly {sol.status}")
    return sol.objective


def opt_receiver_bound(instance: Instance, **guards) -> Fraction:
    """Optimum of the receiver-bound relaxation (receiver cap 1/4)."""
    from .model import matrix_col_sums

    horizon = _one_sided_horizon(matrix_col_sums(instance.demands))
    if horizon == 0:
        return Fraction(0)
    sol = solve_completion_lp(instance, None, Fraction(1, 4), horizon, **guards)
    if sol.status != OPTIMAL:
        raise StructuralError(f"receiver-bound LP unexpectedly {sol.status}")
    return sol.objective
