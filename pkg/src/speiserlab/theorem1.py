"""End-to-end slow-growth construction experiment.

Builds the 3-regular octagon-faced base graph, stretches its cut edges by an
odd-length schedule, and collects desk-scale numerical evidence for the two
legs of the construction: the dual triangulation side should look
transient/hyperbolic, while the extended graph over the stretched base should
look recurrent, with the ball and sphere growth bounds checked from exact
counts.  All verdicts are trends over truncations, not proofs; the report
says so explicitly and is byte-deterministic for a fixed config.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .errors import ScheduleError
from .graph_core import RotationGraph, bfs_layers, classify
from .lattices import triangular_ball
from .speiser import (
    GrowthSchedule,
    extended_layer_counts,
    speiser_ball,
    tree_replace,
)
from .packing import ratio_trend
from .trend import first_converged_n
from .vel import vel_type_trend
from .walk import doyle_test, resistance_curve


def paper_schedule(n: int) -> int:
    """Smallest odd integer at least exp(3^(n+1)).

    Only n <= 2 is representable at desk scale (the next term has more than
    thirty decimal digits).
    """
    if n < 0:
        raise ScheduleError("n must be >= 0")
    if n >= 3:
        raise ScheduleError(
            f"l_{n} = exp(3^{n + 1}) is astronomically large; desk scale stops at n = 2"
        )
    x = math.exp(3.0 ** (n + 1))
    k = math.ceil(x)
    if k % 2 == 0:
        k += 1
    return k


def build_gamma(depth: int, schedule: GrowthSchedule) -> RotationGraph:
    """Octagon base ball B(depth) with every cut layer stretched by the schedule."""
    if depth > len(schedule):
        raise ScheduleError(
            f"depth {depth} exceeds schedule coverage {len(schedule)}"
        )
    ball, layers = speiser_ball(depth)
    gamma = tree_replace(ball, layers, schedule)
    cls = classify(gamma)
    if not cls.is_bipartite or cls.homogeneous_degree != 3:
        raise ScheduleError("stretched graph lost the Speiser property")
    return gamma


@dataclass
class GrowthCheck:
    k_min: int
    k_max: int
    ball_sizes: list[int]
    bound: list[float]
    holds_all: bool
    first_k_holding: int | None
    failing_k: list[int]

    def to_dict(self) -> dict:
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "holds_all": self.holds_all,
            "first_k_holding": self.first_k_holding,
            "n_failing": len(self.failing_k),
            "failing_k_head": self.failing_k[:10],
        }


def verify_growth(
    gamma: RotationGraph, k_min: int, k_max: int, layers=None
) -> GrowthCheck:
    """Exact |B(k)| against k * ln(k) over [k_min, k_max] (natural log)."""
    layers = layers or bfs_layers(gamma, 0)
    k_hi = min(k_max, layers.reliable_depth)
    balls = layers.ball_sizes()
    sizes = [balls[k] for k in range(k_min, k_hi + 1)]
    bound = [k * math.log(k) for k in range(k_min, k_hi + 1)]
    ok = [s <= b for s, b in zip(sizes, bound)]
    failing = [k_min + i for i, o in enumerate(ok) if not o]
    first_holding = None
    for i in range(len(ok)):
        if all(ok[i:]):
            first_holding = k_min + i
            break
    return GrowthCheck(
        k_min=k_min,
        k_max=k_hi,
        ball_sizes=sizes,
        bound=bound,
        holds_all=not failing,
        first_k_holding=first_holding,
        failing_k=failing,
    )


@dataclass
class UpsilonCheck:
    k_min: int
    k_max: int
    sphere_sizes: list[int]
    sphere_bound: list[float]
    sphere_holds_all: bool
    sphere_first_k_holding: int | None
    ball_constant: float  # fitted C in |B(k)| <= C k^2 ln k

    def to_dict(self) -> dict:
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "sphere_holds_all": self.sphere_holds_all,
            "sphere_first_k_holding": self.sphere_first_k_holding,
            "ball_constant": self.ball_constant,
        }


def verify_upsilon_bounds(
    gamma: RotationGraph,
    grid_depth: int | None,
    k_max: int,
    k_min: int = 2,
    layers=None,
) -> UpsilonCheck:
    """|S(k)| of the extension against 4 k ln k, plus the fitted square constant.

    ``grid_depth=None`` means unbounded grids (the true extended graph).
    """
    layers = layers or bfs_layers(gamma, 0)
    k_hi = min(k_max, layers.reliable_depth)
    counts = extended_layer_counts(gamma, layers, k_hi, grid_depth=grid_depth)
    sizes = counts.sphere_sizes[k_min : k_hi + 1]
    bound = [4 * k * math.log(k) for k in range(k_min, k_hi + 1)]
    ok = [s <= b for s, b in zip(sizes, bound)]
    first_holding = None
    for i in range(len(ok)):
        if all(ok[i:]):
            first_holding = k_min + i
            break
    c_fit = max(
        counts.ball_sizes[k] / (k * k * math.log(k))
        for k in range(2, k_hi + 1)
    )
    return UpsilonCheck(
        k_min=k_min,
        k_max=k_hi,
        sphere_sizes=sizes,
        sphere_bound=bound,
        sphere_holds_all=all(ok),
        sphere_first_k_holding=first_holding,
        ball_constant=c_fit,
    )


@dataclass
class Theorem1Config:
    schedule: tuple[int, ...] = (21, 8103)
    growth_k_min: int = 25
    growth_k_max: int = 8000
    upsilon_k_min: int = 25
    upsilon_k_max: int = 2000
    dual_depth: int = 7
    resistance_radii: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    vel_annuli: tuple[tuple[int, int], ...] = ((1, 2), (2, 4), (3, 6))
    ratio_ns: tuple[int, ...] = (2, 3, 4, 5, 6)
    doyle_n_max: int = 24
    doyle_grid_depth: int = 24
    seed: int = 20080

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schedule"] = list(self.schedule)
        d["resistance_radii"] = list(self.resistance_radii)
        d["vel_annuli"] = [list(a) for a in self.vel_annuli]
        d["ratio_ns"] = list(self.ratio_ns)
        return d


@dataclass
class Theorem1Report:
    config: Theorem1Config
    leg_a: dict
    leg_b: dict
    verdicts: dict
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "leg_a": self.leg_a,
            "leg_b": self.leg_b,
            "verdicts": self.verdicts,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def run_theorem1(config: Theorem1Config | None = None) -> Theorem1Report:
    """Run both evidence legs and assemble the deterministic report."""
    config = config or Theorem1Config()
    notes = [
        "verdicts are truncation trends, not proofs",
        "leg A runs on the degree-8 triangulation (the dual of the octagon "
        "base graph contains it); leg B runs on the stretched base and its "
        "grid extension",
    ]

    # leg A: the dual side should look transient / hyperbolic
    dual_tri = triangular_ball(8, config.dual_depth)
    dual_layers = bfs_layers(dual_tri, 0)
    curve = resistance_curve(
        dual_tri, 0, list(config.resistance_radii), layers=dual_layers
    )
    from .trend import classify_resistance_curve

    res_fit = classify_resistance_curve(curve.radii, curve.resistance)
    vel_report = vel_type_trend(
        dual_tri, 0, [tuple(a) for a in config.vel_annuli], layers=dual_layers
    )
    cp_report = ratio_trend(
        lambda n: triangular_ball(8, n), list(config.ratio_ns)
    )
    leg_a = {
        "resistance": curve.to_dict(),
        "resistance_fit": res_fit,
        "resistance_first_converged": first_converged_n(
            curve.radii, curve.resistance
        ),
        "vel_trend": vel_report.to_dict(),
        "ratio_trend": cp_report.to_dict(),
    }

    # leg B: growth bounds and recurrence evidence on the stretched base
    schedule = GrowthSchedule(tuple(config.schedule), origin="custom")
    gamma = build_gamma(len(schedule), schedule)
    gamma_layers = bfs_layers(gamma, 0)
    growth = verify_growth(
        gamma, config.growth_k_min, config.growth_k_max, layers=gamma_layers
    )
    upsilon = verify_upsilon_bounds(
        gamma,
        None,
        config.upsilon_k_max,
        k_min=config.upsilon_k_min,
        layers=gamma_layers,
    )
    counts = extended_layer_counts(
        gamma, gamma_layers, min(config.upsilon_k_max, gamma_layers.reliable_depth)
    )
    nw = []
    acc = 0.0
    for c in counts.cut_sizes:
        acc += 1.0 / c
        nw.append(acc)
    nw_strict = all(b > a for a, b in zip(nw, nw[1:]))
    half = len(nw) // 2
    nw_no_plateau = nw_strict and (nw[-1] - nw[half] > 1e-9)
    doyle = doyle_test(
        gamma,
        grid_depth=config.doyle_grid_depth,
        root=0,
        n_max=config.doyle_n_max,
    )
    max_deg = max(gamma.degree(v) for v in gamma.interior_vertices())
    leg_b = {
        "schedule": list(config.schedule),
        "gamma_vertices": gamma.n_vertices,
        "growth": growth.to_dict(),
        "upsilon": upsilon.to_dict(),
        "nash_williams_tail": nw[-5:],
        "nash_williams_strictly_increasing": nw_strict,
        "nash_williams_no_plateau": nw_no_plateau,
        "doyle": doyle.to_dict(),
        "gamma_interior_max_degree": max_deg,
    }

    verdicts = {
        "leg_a_resistance": res_fit.get("verdict", "inconclusive"),
        "leg_a_vel": vel_report.verdict,
        "leg_a_cp": cp_report.verdict,
        "leg_b_doyle": doyle.verdict,
        "leg_b_growth_bound": "holds" if growth.holds_all else (
            f"holds from k = {growth.first_k_holding}"
            if growth.first_k_holding
            else "fails"
        ),
        "leg_b_sphere_bound": "holds" if upsilon.sphere_holds_all else (
            f"holds from k = {upsilon.sphere_first_k_holding}"
            if upsilon.sphere_first_k_holding
            else "fails"
        ),
    }
    if any(v == "inconclusive" for v in verdicts.values()):
        notes.append("at least one leg is inconclusive")
    return Theorem1Report(
        config=config, leg_a=leg_a, leg_b=leg_b, verdicts=verdicts, notes=notes
    )
