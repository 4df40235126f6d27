"""Brute-force grid oracles that cross-check the closed forms.

Independent computation paths:

* composite Simpson quadrature on uniform momentum grids (norms, means,
  overlaps of sampled wavefunctions and densities);
* a two-particle product-grid construction of the post-selected joint state,
  squared and marginalised numerically - checks the closed-form densities;
* the impulsive momentum kick realised the long way round: position-space
  Gaussian, multiply by exp(-i delta x), discrete Fourier transform back -
  checks that a linear potential rigidly displaces the momentum density;
* a grid-kernel eigendecomposition of reduced states - checks the Gram
  algebra purity;
* free Gaussian spreading in SI units (the one SI-aware operation here).

Simpson on these analytic Gaussians converges far faster than its h^4 bound
because all derivatives vanish at the grid edges, which is what makes the
1e-10-ish tolerances cheap.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .core import (
    AliasingError,
    DARK_THRESHOLD,
    DarkPortError,
    GaussianPacket,
    GridError,
    GridSpanError,
    InterferometerParams,
)

__all__ = [
    "DEFAULT_SPAN",
    "DEFAULT_GRID_POINTS",
    "DEFAULT_JOINT_POINTS",
    "DEFAULT_KICK_POINTS",
    "TAIL_BUDGET",
    "MomentumGrid",
    "default_grid",
    "default_joint_grid",
    "SampledWavefunction",
    "sample_packet",
    "Distribution1D",
    "joint_marginal_oracle",
    "KickOracleResult",
    "momentum_kick_oracle",
    "kernel_purity",
    "free_spread_width",
]

DEFAULT_SPAN = 8.0          # half-width of default grids, in units of W
DEFAULT_GRID_POINTS = 2001  # 1D quadrature grid
DEFAULT_JOINT_POINTS = 513  # per axis of the two-particle product grid
DEFAULT_KICK_POINTS = 4096  # DFT size of the momentum-kick oracle
TAIL_BUDGET = 1e-10         # allowed analytic tail mass outside a grid


@lru_cache(maxsize=64)
def _linspace(p_min: float, p_max: float, n: int) -> np.ndarray:
    return np.linspace(p_min, p_max, n)


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform 1D momentum grid with an odd point count.

    Odd n enables composite Simpson weights; treat the ``points`` array as
    read-only (it is shared between equal grids).
    """

    p_min: float
    p_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.p_min) and np.isfinite(self.p_max) and self.p_min < self.p_max):
            raise GridError(f"grid bounds must be finite with p_min < p_max, got {self.p_min!r}, {self.p_max!r}")
        if self.n < 3 or self.n % 2 == 0:
            raise GridError(f"composite Simpson needs an odd point count >= 3, got {self.n!r}")

    @property
    def spacing(self) -> float:
        return (self.p_max - self.p_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return _linspace(self.p_min, self.p_max, self.n)

    def simpson_weights(self) -> np.ndarray:
        w = np.ones(self.n)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * (self.spacing / 3.0)

    def integrate(self, values) -> float:
        """Composite Simpson estimate of the integral of sampled values."""
        values = np.asarray(values)
        if values.shape != (self.n,):
            raise GridError(f"expected {self.n} samples, got shape {values.shape}")
        acc = self.simpson_weights() @ values
        return complex(acc) if np.iscomplexobj(values) else float(acc)

    def density_mean(self, density) -> float:
        """First moment of a sampled density, normalised by its own integral."""
        density = np.asarray(density, dtype=float)
        w = self.simpson_weights()
        total = w @ density
        if abs(total) <= DARK_THRESHOLD:
            raise DarkPortError("density integrates to ~0; mean undefined")
        return float((w @ (self.points * density)) / total)

    def tail_mass(self, packet: GaussianPacket) -> float:
        """Analytic probability mass of a packet's density outside the grid."""
        return 0.5 * (
            math.erfc((self.p_max - packet.center) / packet.width)
            + math.erfc((packet.center - self.p_min) / packet.width)
        )


def default_grid(width: float = 1.0, span: float = DEFAULT_SPAN, n: int = DEFAULT_GRID_POINTS) -> MomentumGrid:
    """Symmetric grid spanning +-span*width."""
    return MomentumGrid(-span * width, span * width, n)


def default_joint_grid(width: float = 1.0, span: float = DEFAULT_SPAN, n: int = DEFAULT_JOINT_POINTS) -> MomentumGrid:
    return MomentumGrid(-span * width, span * width, n)


@dataclass(frozen=True, eq=False)
class SampledWavefunction:
    """Wavefunction samples (real or complex) on a shared grid."""

    grid: MomentumGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.grid.n,):
            raise GridError(f"expected {self.grid.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values.real)) or not np.all(np.isfinite(values.imag)):
            raise ValueError("wavefunction samples must be finite")
        object.__setattr__(self, "values", values)

    def norm_squared(self) -> float:
        """Simpson estimate of the integral of |f|^2."""
        return float(self.grid.integrate(np.abs(self.values) ** 2).real)

    def mean_momentum(self) -> float:
        """Simpson estimate of the |f|^2-weighted mean momentum."""
        return self.grid.density_mean(np.abs(self.values) ** 2)

    def overlap(self, other: "SampledWavefunction"):
        """Simpson estimate of integral conj(f) g; both operands must share a grid."""
        if self.grid != other.grid:
            raise GridError("overlap operands sampled on different grids")
        acc = self.grid.integrate(np.conj(self.values) * other.values)
        return acc


def sample_packet(packet: GaussianPacket, grid: MomentumGrid) -> SampledWavefunction:
    return SampledWavefunction(grid, packet(grid.points))


@dataclass(frozen=True, eq=False)
class Distribution1D:
    """Sampled probability density on a momentum grid."""

    grid: MomentumGrid
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise GridError(f"expected {self.grid.n} samples, got shape {values.shape}")
        peak = float(values.max())
        if float(values.min()) < -1e-12 * max(peak, 1.0):
            raise ValueError("density samples must be non-negative")
        object.__setattr__(self, "values", np.maximum(values, 0.0))
        if self.normalized:
            total = self.grid.integrate(self.values)
            if abs(total - 1.0) > 1e-10:
                raise ValueError(f"density flagged normalised but integrates to {total!r}")

    def mean(self) -> float:
        return self.grid.density_mean(self.values)


def _require_coverage(grid: MomentumGrid, packets) -> None:
    for packet in packets:
        tail = grid.tail_mass(packet)
        if tail > TAIL_BUDGET:
            raise GridSpanError(
                f"grid [{grid.p_min:g}, {grid.p_max:g}] truncates a branch centred at "
                f"{packet.center:g} (tail mass {tail:.2e} > {TAIL_BUDGET:g})"
            )


def joint_marginal_oracle(
    params: InterferometerParams, electron: int, grid: MomentumGrid | None = None
) -> Distribution1D:
    """One-electron marginal obtained from the full two-particle state.

    Builds  Psi(p1, p2) = Phi(p1) Phi(p2) + e^{i alpha} cos(phi) Phi(p1 + d) Phi(p2 - d)
    on the product grid, squares it, and integrates out the other electron
    with Simpson weights.  Entirely independent of the closed-form marginal
    it is used to check.
    """
    if grid is None:
        grid = default_joint_grid(params.width)
    base = params.packet()
    kicked1 = params.kicked_packet(1)
    kicked2 = params.kicked_packet(2)
    # both axes carry a displaced branch, so all three centres must fit
    _require_coverage(grid, (base, kicked1, kicked2))

    p = grid.points
    b1_free = base(p)
    b2_free = base(p)
    b1_kick = kicked1(p)
    b2_kick = kicked2(p)
    coeff = cmath.exp(1j * params.alpha) * math.cos(params.phi)
    field = np.outer(b1_free, b2_free) + coeff * np.outer(b1_kick, b2_kick)
    density2d = field.real**2 + field.imag**2

    w = grid.simpson_weights()
    if electron == 1:
        marginal = density2d @ w
    elif electron == 2:
        marginal = w @ density2d
    else:
        raise ValueError(f"electron index must be 1 or 2, got {electron!r}")
    total = grid.integrate(marginal)
    if total <= DARK_THRESHOLD:
        raise DarkPortError("post-selected probability vanishes on the grid; marginal undefined")
    return Distribution1D(grid, marginal / total, normalized=True)


class KickOracleResult(NamedTuple):
    """Deviation metrics between the DFT-kicked density and the rigid shift."""

    max_density_deviation: float
    mean_shift: float        # numeric mean minus the original packet centre
    width_change: float      # numeric std minus the rigidly-shifted std, same rule
    position_norm: float     # Riemann integral of |psi|^2 dx
    momentum_norm: float     # Riemann integral of the transformed density dp


def momentum_kick_oracle(
    packet: GaussianPacket,
    delta: float,
    n_points: int = DEFAULT_KICK_POINTS,
    halfspan: float | None = None,
) -> KickOracleResult:
    """Apply the kick as a position-space phase and transform back numerically.

    The position wavefunction conjugate to the packet is multiplied by
    exp(-i delta x) (hbar = 1) and carried to momentum space by a DFT on the
    conjugate grid pair; the resulting density is compared against the
    analytically displaced packet ``packet.shifted(-delta)``.  Moment metrics
    use plain Riemann sums, which are spectrally accurate here because the
    densities vanish at the band edges.
    """
    if n_points < 16:
        raise GridError(f"kick oracle needs at least 16 points, got {n_points!r}")
    width, center = packet.width, packet.center
    if halfspan is None:
        halfspan = 8.0 * width + abs(delta)
    dp = 2.0 * halfspan / n_points
    p = (center - halfspan) + dp * np.arange(n_points)
    dx = 2.0 * math.pi / (n_points * dp)
    if abs(delta) * dx >= 0.5 * math.pi:
        raise AliasingError(
            f"phase advance per sample |delta|*dx = {abs(delta) * dx:.3f} rad; "
            "refine the grid (must stay well below pi)"
        )
    shifted = packet.shifted(-delta)
    lo, hi = p[0], p[0] + n_points * dp
    tail = 0.5 * (math.erfc((hi - shifted.center) / width) + math.erfc((shifted.center - lo) / width))
    if tail > TAIL_BUDGET:
        raise GridSpanError(
            f"kicked packet centred at {shifted.center:g} leaks {tail:.2e} past the band "
            f"[{lo:g}, {hi:g}]"
        )

    x = dx * (np.arange(n_points) - n_points // 2)
    psi = (math.pi ** -0.25) * math.sqrt(width) * np.exp(-0.5 * (width * x) ** 2)
    psi = psi * np.exp(1j * center * x)
    psi_kicked = psi * np.exp(-1j * delta * x)

    spectrum = np.fft.fft(psi_kicked * np.exp(-1j * lo * x))
    phases = np.exp(-1j * (p - lo) * x[0])
    transformed = (dx / math.sqrt(2.0 * math.pi)) * phases * spectrum
    dens = transformed.real**2 + transformed.imag**2
    dens_ref = shifted.density(p)

    def _mean_std(rho: np.ndarray) -> tuple[float, float]:
        total = rho.sum() * dp
        m1 = float((p * rho).sum() * dp / total)
        var = float((((p - m1) ** 2) * rho).sum() * dp / total)
        return m1, math.sqrt(var)

    mean_num, std_num = _mean_std(dens)
    _, std_ref = _mean_std(dens_ref)
    return KickOracleResult(
        max_density_deviation=float(np.max(np.abs(dens - dens_ref))),
        mean_shift=mean_num - center,
        width_change=std_num - std_ref,
        position_norm=float((np.abs(psi_kicked) ** 2).sum() * dx),
        momentum_norm=float(dens.sum() * dp),
    )


def kernel_purity(coeff: np.ndarray, basis, grid: MomentumGrid | None = None) -> float:
    """Purity of rho = sum_ij coeff_ij |b_i><b_j| from its grid-sampled kernel.

    Samples K(p, p') on the grid, symmetrises with sqrt-Simpson weights and
    eigendecomposes; purity = sum(lambda^2) / sum(lambda)^2.  Independent of
    the Gram-matrix route (no basis inner products are used).
    """
    if grid is None:
        widths = {b.width for b in basis}
        grid = default_joint_grid(max(widths))
    sampled = np.stack([b(grid.points) for b in basis])
    kernel = sampled.T @ (np.asarray(coeff) @ sampled)
    root_w = np.sqrt(grid.simpson_weights())
    sym = root_w[:, None] * kernel * root_w[None, :]
    sym = 0.5 * (sym + sym.conj().T)  # scrub round-off asymmetry before eigh
    lam = np.linalg.eigvalsh(sym)
    total = lam.sum()
    if total <= DARK_THRESHOLD:
        raise DarkPortError("kernel trace vanishes; purity undefined")
    return float((lam @ lam) / (total * total))


def free_spread_width(initial_width: float, t: float, mass: float) -> float:
    """Width of a freely spreading Gaussian beam after time ``t`` (SI units).

    initial_width * sqrt(1 + (hbar t / (2 m initial_width^2))^2); tends to
    hbar t / (2 m initial_width) for large t.
    """
    if not initial_width > 0.0:
        raise ValueError(f"initial width must be positive, got {initial_width!r}")
    if not mass > 0.0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t!r}")
    from .experiment import CODATA2018  # SI constants live with the experiment layer

    rate = CODATA2018.hbar * t / (2.0 * mass * initial_width * initial_width)
    return initial_width * math.sqrt(1.0 + rate * rate)
