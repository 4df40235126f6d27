"""Closed-form engine for the post-selected two-electron interferometer.

Post-selecting electron 1 at port D and electron 2 at port C leaves the
joint momentum state

    |Psi_ps>  propto  |Phi>|Phi>  +  e^{i alpha} cos(phi) |Phi^->|Phi^+> ,

where |Phi^-+> are the packets displaced by -+delta.  Everything in this
module is an exact function of (r, phi, alpha, delta, W): the one-electron
marginal densities and their direct/interference split, post-selected mean
momenta (in two overlap conventions), the branch amplitudes of all four
exit-port pairs, per-port probabilities and means, the unconditioned
momentum balance, and the reduced one-electron states expressed in the
non-orthogonal basis {unkicked, kicked}.

The single-packet overlap is I = exp(-delta^2 / 4 W^2); the two-electron
branch overlap is I^2.  The post-selected mean of electron 1,

    <p1> = -delta cos(phi) (cos(phi) + cos(alpha) I^2) / N ,
    N    = 1 + cos^2(phi) + 2 cos(phi) cos(alpha) I^2 ,

is positive (momentum toward the other electron, i.e. effective attraction)
exactly where cos(phi) < 0 and cos(alpha) I^2 > |cos(phi)|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    DARK_THRESHOLD,
    DarkPortError,
    GaussianPacket,
    InterferometerParams,
    PortPair,
    kick_sign,
)

__all__ = [
    "packet_overlap",
    "branch_overlap",
    "postselect_norm",
    "term_decomposition",
    "marginal_density",
    "mean_postselected",
    "mean_postselected_packet_overlap",
    "MeanSurface",
    "mean_surface",
    "BranchAmplitudes",
    "PortAmplitudes",
    "port_amplitudes",
    "port_probabilities",
    "port_mean_momenta",
    "port_marginal_density",
    "EhrenfestBalance",
    "ehrenfest_check",
    "ReducedState",
    "reduced_state",
]


def packet_overlap(delta: float, width: float) -> float:
    """Inner product of a packet with its copy displaced by ``delta``.

    Equals exp(-delta^2 / 4 width^2); in (0, 1], and 1 only for delta = 0.
    """
    if not width > 0.0:
        raise ValueError(f"width must be positive, got {width!r}")
    u = delta / width
    return math.exp(-0.25 * u * u)


def branch_overlap(params: InterferometerParams) -> float:
    """Two-electron overlap of the free and kicked branches: the packet overlap squared."""
    ov = packet_overlap(params.delta, params.width)
    return ov * ov


def postselect_norm(params: InterferometerParams) -> float:
    """Quadrature norm of the unnormalised post-selected marginal.

    N = 1 + cos^2(phi) + 2 cos(phi) cos(alpha) I^2.  Vanishes only for the
    dark combinations (delta = 0 with destructive phases).
    """
    c = math.cos(params.phi)
    return 1.0 + c * c + 2.0 * c * math.cos(params.alpha) * branch_overlap(params)


def _density_terms(params: InterferometerParams, electron: int, p):
    """Direct and interference contributions to the unnormalised marginal."""
    shift = -kick_sign(electron) * params.delta  # evaluate base at p + delta for e1, p - delta for e2
    base = params.packet()
    f0 = base(p)
    f1 = base(p + shift)
    c = math.cos(params.phi)
    direct = f0 * f0 + (c * c) * (f1 * f1)
    cross = 2.0 * packet_overlap(params.delta, params.width) * c * math.cos(params.alpha) * f0 * f1
    return direct, cross


def term_decomposition(params: InterferometerParams, p):
    """Split electron 1's unnormalised marginal into its direct and interference terms.

    Returns (T_a, T_b): T_a >= 0 collects the two branch densities, T_b is
    the cross term, negative wherever cos(phi) cos(alpha) < 0.  Their sum is
    bit-identical to ``marginal_density(params, 1, p, normalized=False)``.
    """
    return _density_terms(params, 1, p)


def marginal_density(params: InterferometerParams, electron: int, p, normalized: bool = False):
    """One-electron momentum density after post-selection (electron 1 at D, 2 at C).

    The electron-2 density is the mirror image of electron 1's.  With
    ``normalized`` the result integrates to one; a dark post-selection
    raises :class:`DarkPortError` instead of dividing by ~0.
    """
    direct, cross = _density_terms(params, electron, p)
    dens = direct + cross
    if normalized:
        norm = postselect_norm(params)
        if norm <= DARK_THRESHOLD:
            raise DarkPortError(
                f"post-selected probability vanishes (norm {norm:.3e}); density undefined"
            )
        dens = dens / norm
    return dens


def mean_postselected(params: InterferometerParams, electron: int = 1) -> float:
    """Post-selected mean momentum; positive for electron 1 signals effective attraction.

    Uses the branch overlap I^2, the form consistent with integrating the
    marginal density.  The electron-2 value is the exact negation.
    """
    norm = postselect_norm(params)
    if norm <= DARK_THRESHOLD:
        raise DarkPortError(f"post-selected probability vanishes (norm {norm:.3e}); mean undefined")
    c = math.cos(params.phi)
    return kick_sign(electron) * params.delta * c * (c + math.cos(params.alpha) * branch_overlap(params)) / norm


def mean_postselected_packet_overlap(params: InterferometerParams) -> float:
    """Electron-1 mean with the packet overlap I entering once instead of squared.

    Alternative convention for the same closed form, stated for e^{i alpha} = 1
    (alpha is ignored).  It shares the sign structure of
    :func:`mean_postselected` but disagrees quantitatively; the quadrature of
    the marginal density singles out the squared-overlap form, so both are
    exposed and reported side by side rather than silently reconciled.
    """
    c = math.cos(params.phi)
    i1 = packet_overlap(params.delta, params.width)
    norm = 1.0 + c * c + 2.0 * c * i1
    if norm <= DARK_THRESHOLD:
        raise DarkPortError(f"post-selected probability vanishes (norm {norm:.3e}); mean undefined")
    return -params.delta * c * (c + i1) / norm


class MeanSurface(NamedTuple):
    """Vectorised post-selected means over a parameter grid, in units of W."""

    mean: np.ndarray                 # branch-overlap (I^2) convention
    mean_single_overlap: np.ndarray  # packet-overlap (I) convention, alpha = 0 form
    norm: np.ndarray                 # post-selection norm N of the I^2 convention


def mean_surface(delta_over_width, phi, alpha: float = 0.0) -> MeanSurface:
    """Broadcast ``mean_postselected`` (both conventions) over parameter arrays.

    Grid points with a vanishing post-selection norm (the removable dark
    points, e.g. delta = 0 with phi = pi at alpha = 0, where the directional
    limit of the mean is 0) are emitted as exact zeros; they remain
    identifiable through the returned ``norm`` column.
    """
    d = np.asarray(delta_over_width, dtype=float)
    c = np.cos(np.asarray(phi, dtype=float))
    ca = math.cos(alpha)
    i1 = np.exp(-0.25 * d * d)
    i2 = i1 * i1

    norm = 1.0 + c * c + 2.0 * c * ca * i2
    lit = norm > DARK_THRESHOLD
    mean = np.where(lit, -d * c * (c + ca * i2) / np.where(lit, norm, 1.0), 0.0)

    norm_single = 1.0 + c * c + 2.0 * c * i1
    lit_single = norm_single > DARK_THRESHOLD
    mean_single = np.where(
        lit_single, -d * c * (c + i1) / np.where(lit_single, norm_single, 1.0), 0.0
    )
    return MeanSurface(mean, mean_single, norm)


# ---------------------------------------------------------------------------
# Exit-port algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchAmplitudes:
    """Coefficients of the two joint branches at one exit-port pair."""

    free: complex    # multiplies |Phi>|Phi>  (no interaction)
    kicked: complex  # multiplies |Phi^->|Phi^+>  (mutual kick applied)


@dataclass(frozen=True)
class PortAmplitudes:
    """Branch amplitudes for all four exit-port pairs."""

    cc: BranchAmplitudes
    cd: BranchAmplitudes
    dc: BranchAmplitudes
    dd: BranchAmplitudes

    def __getitem__(self, port: PortPair) -> BranchAmplitudes:
        return getattr(self, port.value)

    def items(self):
        for port in PortPair:
            yield port, self[port]


_PATH_EXITS = "CD"


def port_amplitudes(params: InterferometerParams) -> PortAmplitudes:
    """Free/kicked branch coefficients at every exit-port pair.

    Built by propagating the four path terms through the exit splitter
    (A -> t C + i r D,  B -> i r C + t D) and dividing out the path phase
    common to all ports, so the double-transmission amplitude comes out real.
    Electron 1 enters the side that transmits into path A; electron 2 the
    side that reflects into A.
    """
    r, t = params.r, params.t
    eiphi = cmath.exp(1j * params.phi)
    eialpha = cmath.exp(1j * params.alpha)
    # (path of e1, path of e2, coefficient, kicked branch?)
    terms = (
        ("A", "A", (1j * r * t) * eiphi * eiphi * eialpha, True),
        ("B", "B", (1j * r * t) * eialpha, True),
        ("A", "B", complex(t * t) * eiphi, False),
        ("B", "A", complex(-r * r) * eiphi, False),
    )
    bs = {
        ("A", "C"): complex(t),
        ("A", "D"): 1j * r,
        ("B", "C"): 1j * r,
        ("B", "D"): complex(t),
    }
    acc: dict[tuple[str, bool], complex] = {
        (e1 + e2, kicked): 0j for e1 in _PATH_EXITS for e2 in _PATH_EXITS for kicked in (False, True)
    }
    for path1, path2, coeff, kicked in terms:
        for e1 in _PATH_EXITS:
            for e2 in _PATH_EXITS:
                acc[e1 + e2, kicked] += coeff * bs[path1, e1] * bs[path2, e2]
    pairs = {
        port: BranchAmplitudes(free=acc[port.name, False] / eiphi, kicked=acc[port.name, True] / eiphi)
        for port in PortPair
    }
    return PortAmplitudes(pairs[PortPair.CC], pairs[PortPair.CD], pairs[PortPair.DC], pairs[PortPair.DD])


def _gram_norm(amp: BranchAmplitudes, i2: float) -> float:
    a, b = amp.free, amp.kicked
    return abs(a) ** 2 + abs(b) ** 2 + 2.0 * (a.conjugate() * b).real * i2


def port_probabilities(params: InterferometerParams) -> dict[PortPair, float]:
    """Detection probability of each exit-port pair; the four values sum to one.

    Each is the Gram norm |a|^2 + |b|^2 + 2 Re(a* b) I^2 of a two-branch
    state whose branches overlap by I per electron.
    """
    i2 = branch_overlap(params)
    return {port: _gram_norm(amp, i2) for port, amp in port_amplitudes(params).items()}


def _port_momentum_flux(params: InterferometerParams, amp: BranchAmplitudes, electron: int) -> float:
    # P_jk * <p>_jk for one port; finite even where P_jk -> 0.
    a, b = amp.free, amp.kicked
    i2 = branch_overlap(params)
    return kick_sign(electron) * params.delta * (abs(b) ** 2 + (a.conjugate() * b).real * i2)


def port_mean_momenta(params: InterferometerParams, electron: int) -> dict[PortPair, float | None]:
    """Conditional mean momentum at each exit-port pair; ``None`` marks dark ports.

    The DC entry reproduces :func:`mean_postselected`; the electron-2 map is
    the portwise negation of electron 1's.
    """
    kick_sign(electron)  # validate index
    i2 = branch_overlap(params)
    out: dict[PortPair, float | None] = {}
    for port, amp in port_amplitudes(params).items():
        prob = _gram_norm(amp, i2)
        if prob <= DARK_THRESHOLD:
            out[port] = None
        else:
            out[port] = _port_momentum_flux(params, amp, electron) / prob
    return out


def port_marginal_density(params: InterferometerParams, port: PortPair, electron: int, p, normalized: bool = True):
    """Momentum density of one electron conditioned on an arbitrary exit-port pair.

    Conditioning on DC reproduces :func:`marginal_density`; conditioning on
    CC at a balanced splitter isolates the purely kicked branch (the free
    amplitude vanishes there), giving the displaced packet density.
    """
    amp = port_amplitudes(params)[port]
    a, b = amp.free, amp.kicked
    base = params.packet()
    kicked = params.kicked_packet(electron)
    f0 = base(p)
    f1 = kicked(p)
    i1 = packet_overlap(params.delta, params.width)
    dens = (abs(a) ** 2) * f0 * f0 + (abs(b) ** 2) * f1 * f1 + 2.0 * (a.conjugate() * b).real * i1 * f0 * f1
    if normalized:
        prob = _gram_norm(amp, i1 * i1)
        if prob <= DARK_THRESHOLD:
            raise DarkPortError(f"port {port.name} has zero probability; conditional density undefined")
        dens = dens / prob
    return dens


class EhrenfestBalance(NamedTuple):
    """Unconditioned mean electron-1 momentum, closed form vs port-weighted sum."""

    closed_form: float
    weighted_sum: float


def ehrenfest_check(params: InterferometerParams) -> EhrenfestBalance:
    """Electron 1's mean momentum without post-selection, computed two ways.

    closed_form is -2 t^2 r^2 delta: the kick of the interacting branch times
    the co-propagation probability.  weighted_sum accumulates P_jk <p1>_jk as
    per-port fluxes, so dark ports contribute their (vanishing) flux rather
    than 0 * undefined.  Electron 2's balance is the exact negation.
    """
    rt = params.r * params.t
    closed = -2.0 * rt * rt * params.delta
    weighted = sum(_port_momentum_flux(params, amp, 1) for _, amp in port_amplitudes(params).items())
    return EhrenfestBalance(closed, weighted)


# ---------------------------------------------------------------------------
# Reduced one-electron states
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReducedState:
    """One-electron state in the non-orthogonal basis (unkicked, kicked).

    ``coeff`` is the Hermitian coefficient matrix M of
    rho = sum_ij M_ij |b_i><b_j| and ``gram`` the basis Gram matrix
    [[1, I], [I, 1]]; traces and purity follow from M G exactly, without any
    discretisation.
    """

    coeff: np.ndarray
    gram: np.ndarray
    electron: int
    basis: tuple[GaussianPacket, GaussianPacket]

    def trace(self) -> float:
        return float(np.trace(self.coeff @ self.gram).real)

    def purity(self) -> float:
        """tr(rho^2) / tr(rho)^2 = tr((M G)^2) / tr(M G)^2, in (0, 1]."""
        mg = self.coeff @ self.gram
        tr = np.trace(mg).real
        return float(np.trace(mg @ mg).real / (tr * tr))

    def density(self, p, normalized: bool = True):
        """Diagonal kernel rho(p, p); agrees pointwise with the marginal density."""
        b0 = self.basis[0](p)
        b1 = self.basis[1](p)
        m = self.coeff
        dens = m[0, 0].real * b0 * b0 + m[1, 1].real * b1 * b1 + 2.0 * m[0, 1].real * b0 * b1
        return dens / self.trace() if normalized else dens


def reduced_state(params: InterferometerParams, electron: int) -> ReducedState:
    """Partial trace of the post-selected joint state over the other electron."""
    c = math.cos(params.phi)
    i1 = packet_overlap(params.delta, params.width)
    off = i1 * c * cmath.exp(-1j * params.alpha)
    coeff = np.array([[1.0 + 0j, off], [off.conjugate(), c * c + 0j]])
    gram = np.array([[1.0, i1], [i1, 1.0]])
    state = ReducedState(coeff, gram, electron, (params.packet(), params.kicked_packet(electron)))
    if state.trace() <= DARK_THRESHOLD:
        raise DarkPortError("post-selected probability vanishes; reduced state undefined")
    return state
