"""Oracle-equivalence suites: every closed form against an independent route.

Each check returns a :class:`CheckResult` with the observed worst deviation
and its tolerance; the CLI ``verify`` mode prints them and the acceptance
tests assert them.  Random draws use a seeded generator so runs are
reproducible and outputs byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic, numeric
from .core import BALANCED_R, InterferometerParams, PortPair

__all__ = ["CheckResult", "HEADLINE_PARAMS", "run_all"]

#: Working point of the reference figures: balanced splitter, delta = 0.3 W,
#: phi = 3 pi / 4, alpha = 0.
HEADLINE_PARAMS = InterferometerParams(r=BALANCED_R, phi=0.75 * math.pi, alpha=0.0, delta=0.3, width=1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool
    detail: str = ""

    @staticmethod
    def from_deviation(name: str, deviation: float, tolerance: float, detail: str = "") -> "CheckResult":
        return CheckResult(name, float(deviation), float(tolerance), bool(deviation <= tolerance), detail)

    def describe(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        line = f"{verdict} {self.name}: max deviation {self.max_deviation:.3e} (tolerance {self.tolerance:.1e})"
        if self.detail:
            line += f" [{self.detail}]"
        return line


def _draw_params(rng: np.random.Generator, delta_max: float) -> InterferometerParams:
    return InterferometerParams(
        r=float(rng.uniform(0.0, 1.0)),
        phi=float(rng.uniform(0.0, 2.0 * math.pi)),
        alpha=float(rng.uniform(0.0, 2.0 * math.pi)),
        delta=float(rng.uniform(0.0, delta_max)),
        width=1.0,
    )


def check_marginal_oracle(
    draws: int = 100,
    seed: int = 12345,
    span: float = numeric.DEFAULT_SPAN,
    points: int = numeric.DEFAULT_JOINT_POINTS,
    tolerance: float = 1e-9,
) -> CheckResult:
    """Two-particle marginalisation vs the closed-form densities.

    Draws exclude dark and near-dark selections (norm < 1e-3), where the
    normalised comparison is ill-conditioned rather than wrong.
    """
    rng = np.random.default_rng(seed)
    grid = numeric.default_joint_grid(1.0, span, points)
    worst = 0.0
    for _ in range(draws):
        while True:
            params = _draw_params(rng, delta_max=3.0)
            if analytic.postselect_norm(params) >= 1e-3:
                break
        electron = 1 if rng.uniform() < 0.5 else 2
        oracle = numeric.joint_marginal_oracle(params, electron, grid)
        closed = analytic.marginal_density(params, electron, grid.points, normalized=True)
        worst = max(worst, float(np.max(np.abs(oracle.values - closed))))
    return CheckResult.from_deviation("marginal_oracle_vs_closed_form", worst, tolerance, f"{draws} draws")


def check_momentum_kick(n_points: int = numeric.DEFAULT_KICK_POINTS) -> list[CheckResult]:
    """DFT momentum-kick oracle against the rigid closed-form shift."""
    packet = HEADLINE_PARAMS.packet()
    kicked = numeric.momentum_kick_oracle(packet, 0.3, n_points)
    identity = numeric.momentum_kick_oracle(packet, 0.0, n_points)
    parseval = max(
        abs(kicked.momentum_norm - kicked.position_norm),
        abs(identity.momentum_norm - identity.position_norm),
    )
    return [
        CheckResult.from_deviation(
            "kick_oracle_density",
            max(kicked.max_density_deviation, abs(kicked.mean_shift + 0.3), abs(kicked.width_change)),
            1e-8,
            f"mean shift {kicked.mean_shift:+.10f} W",
        ),
        CheckResult.from_deviation(
            "kick_oracle_identity",
            max(identity.max_density_deviation, abs(identity.mean_shift), abs(identity.width_change)),
            1e-12,
        ),
        CheckResult.from_deviation("kick_oracle_parseval", parseval, 1e-12),
    ]


def check_port_sums(draws: int = 1000, seed: int = 12345) -> list[CheckResult]:
    """Unitarity, the unconditioned momentum balance, and portwise negation."""
    rng = np.random.default_rng(seed)
    worst_unitarity = 0.0
    worst_balance = 0.0
    worst_negation = 0.0
    worst_total = 0.0
    for _ in range(draws):
        params = _draw_params(rng, delta_max=4.0)
        probs = analytic.port_probabilities(params)
        worst_unitarity = max(worst_unitarity, abs(sum(probs.values()) - 1.0))
        balance = analytic.ehrenfest_check(params)
        worst_balance = max(worst_balance, abs(balance.weighted_sum - balance.closed_form))
        means1 = analytic.port_mean_momenta(params, 1)
        means2 = analytic.port_mean_momenta(params, 2)
        for port in PortPair:
            if means1[port] is not None and means2[port] is not None:
                worst_negation = max(worst_negation, abs(means1[port] + means2[port]))
        flux_total = sum(
            analytic._port_momentum_flux(params, amp, 1) + analytic._port_momentum_flux(params, amp, 2)
            for _, amp in analytic.port_amplitudes(params).items()
        )
        worst_total = max(worst_total, abs(flux_total))
    tag = f"{draws} draws"
    return [
        CheckResult.from_deviation("port_probability_sum", worst_unitarity, 1e-12, tag),
        CheckResult.from_deviation("momentum_balance_vs_closed_form", worst_balance, 1e-10, tag),
        CheckResult.from_deviation("electron2_negation", worst_negation, 1e-12, tag),
        CheckResult.from_deviation("two_electron_total_momentum", worst_total, 1e-12, tag),
    ]


def check_mean_conventions(
    span: float = numeric.DEFAULT_SPAN, points: int = numeric.DEFAULT_GRID_POINTS
) -> CheckResult:
    """Quadrature mean of the marginal vs the closed form, at the headline point.

    The detail line reports both overlap conventions and their difference;
    the quadrature tracks the squared-overlap (branch) form.
    """
    params = HEADLINE_PARAMS
    grid = numeric.default_grid(params.width, span, points)
    density = analytic.marginal_density(params, 1, grid.points, normalized=True)
    quad_mean = grid.density_mean(density)
    closed = analytic.mean_postselected(params, 1)
    single = analytic.mean_postselected_packet_overlap(params)
    detail = (
        f"branch-overlap {closed:+.6f} W, single-overlap {single:+.6f} W, "
        f"difference {single - closed:+.6f} W"
    )
    return CheckResult.from_deviation("postselected_mean_quadrature", abs(quad_mean - closed), 1e-9, detail)


def check_purity_routes(points: int = numeric.DEFAULT_JOINT_POINTS) -> CheckResult:
    """Gram-algebra purity vs the grid-kernel eigendecomposition."""
    state = analytic.reduced_state(HEADLINE_PARAMS, 1)
    gram_route = state.purity()
    grid = numeric.default_joint_grid(HEADLINE_PARAMS.width, numeric.DEFAULT_SPAN, points)
    kernel_route = numeric.kernel_purity(state.coeff, state.basis, grid)
    return CheckResult.from_deviation(
        "reduced_purity_two_routes",
        abs(gram_route - kernel_route),
        1e-6,
        f"gram {gram_route:.8f}, kernel {kernel_route:.8f}",
    )


def run_all(
    seed: int = 12345,
    draws_marginal: int = 100,
    draws_ports: int = 1000,
    span: float = numeric.DEFAULT_SPAN,
    grid_points: int = numeric.DEFAULT_GRID_POINTS,
    joint_points: int = numeric.DEFAULT_JOINT_POINTS,
    kick_points: int = numeric.DEFAULT_KICK_POINTS,
) -> list[CheckResult]:
    """The full verification battery, in a fixed order."""
    results = [check_marginal_oracle(draws_marginal, seed, span, joint_points)]
    results.extend(check_momentum_kick(kick_points))
    results.extend(check_port_sums(draws_ports, seed + 1))
    results.append(check_mean_conventions(span, grid_points))
    results.append(check_purity_routes(joint_points))
    return results
