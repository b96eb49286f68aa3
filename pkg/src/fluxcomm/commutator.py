"""Flux-commutator normalisations in superconductor and vacuum.

All commutators are reported as the real multiplier of ``i hbar c``.

* The delta-kernel integral over a spanning surface of ``C1`` and around ``C2``
  is the signed crossing count, giving ``[Phi_E, Phi_B] = 4 pi i hbar c`` per
  unit of linking.
* The transverse (vacuum) correction is the line integral of the gradient of the
  point-charge flux around ``C2``.  That gradient is singular where ``C2``
  crosses the surface, so small arclength intervals around each crossing are
  cut out; on every remaining arc the integral telescopes to
  ``Phi(end) - Phi(start)``.  The excision half-width is then sent to zero.
* Substituting ``Phi_E = 4 pi Q`` and swapping the operator order turns the
  superconductor result into ``[Phi, Q] = -i hbar c``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .crossings import Crossing, signed_crossings
from .errors import EpsTooLarge, NonpositiveInput
from .extrapolation import Extrapolation, observed_order, richardson
from .flux import point_flux
from .geom import OrientedLoop, TriSurface

FOUR_PI = 4.0 * math.pi


def delta_kernel_integral(surface: TriSurface, loop: OrientedLoop) -> int:
    """Signed number of times ``loop`` pierces ``surface``."""
    return signed_crossings(surface, loop)[1]


@dataclass(frozen=True)
class ArcContribution:
    """Telescoped flux-gradient integral over one excised arc, in units of ``4 pi``."""

    start: float
    end: float
    phi_start: float
    phi_end: float
    start_sign: int
    end_sign: int

    @property
    def value(self) -> float:
        return (self.phi_end - self.phi_start) / FOUR_PI

    @property
    def internal(self) -> bool:
        """Arc joining crossings of opposite sign."""
        return self.start_sign == -self.end_sign != 0


def _crossing_positions(loop: OrientedLoop, crossings: list[Crossing]) -> np.ndarray:
    return np.array([c.loop_arc_parameter for c in crossings]) * loop.length


def max_excision(loop: OrientedLoop, crossings: list[Crossing]) -> float:
    """Largest admissible excision half-width (exclusive bound)."""
    if not crossings:
        return math.inf
    if len(crossings) == 1:
        return loop.length / 4.0
    pos = _crossing_positions(loop, crossings)
    gaps = np.diff(np.append(pos, pos[0] + loop.length))
    return float(gaps.min() / 2.0)


def excised_arcs(surface: TriSurface, loop: OrientedLoop, eps: float,
                 crossings: list[Crossing] | None = None) -> list[ArcContribution]:
    """Arcs of ``loop`` left after removing ``(c - eps, c + eps)`` around each crossing.

    With no crossings the whole loop is a single arc whose ends coincide.
    """
    if crossings is None:
        crossings = signed_crossings(surface, loop)[0]
    if eps <= 0:
        raise EpsTooLarge("eps must be positive")
    if not crossings:
        phi = point_flux(surface, loop.vertices[0]).phi
        return [ArcContribution(0.0, loop.length, phi, phi, 0, 0)]
    bound = max_excision(loop, crossings)
    if eps >= bound:
        raise EpsTooLarge(f"eps={eps:.6g} must be below {bound:.6g}")
    pos = _crossing_positions(loop, crossings)
    arcs = []
    n = len(crossings)
    for k in range(n):
        start = pos[k] + eps
        end = pos[(k + 1) % n] - eps
        if k == n - 1:
            end += loop.length
        arcs.append(ArcContribution(
            start=float(start),
            end=float(end),
            phi_start=point_flux(surface, loop.point_at(start)).phi,
            phi_end=point_flux(surface, loop.point_at(end)).phi,
            start_sign=crossings[k].sign,
            end_sign=crossings[(k + 1) % n].sign,
        ))
    return arcs


@dataclass(frozen=True)
class TransverseAnalysis:
    crossings: list[Crossing]
    eps: tuple[float, ...]
    arcs: tuple[tuple[ArcContribution, ...], ...]
    extrapolation: Extrapolation

    @property
    def values(self) -> list[float]:
        return [sum(a.value for a in arcs) for arcs in self.arcs]

    @property
    def order(self) -> float:
        return observed_order(self.eps, self.values, self.extrapolation.value)


def transverse_analysis(surface: TriSurface, loop: OrientedLoop, eps_sequence) -> TransverseAnalysis:
    """Excised flux-gradient integral for every ``eps`` plus its extrapolation."""
    eps = tuple(float(e) for e in eps_sequence)
    if not eps:
        raise ValueError("eps_sequence is empty")
    crossings = signed_crossings(surface, loop)[0]
    arcs = tuple(tuple(excised_arcs(surface, loop, e, crossings)) for e in eps)
    values = [sum(a.value for a in row) for row in arcs]
    if len(eps) == 1:
        extrap = Extrapolation(values[0], math.inf, ((values[0],),))
    else:
        extrap = richardson(eps, values)
    return TransverseAnalysis(crossings, eps, arcs, extrap)


def transverse_integral(surface: TriSurface, loop: OrientedLoop, eps_sequence):
    """Returns ``(per_eps, extrapolated)`` with ``per_eps`` a list of ``(eps, value)``."""
    result = transverse_analysis(surface, loop, eps_sequence)
    return list(zip(result.eps, result.values)), result.extrapolation.value


DEFAULT_EPS = (0.2, 0.1, 0.05, 0.025)


def default_eps_sequence(loop: OrientedLoop, crossings: list[Crossing]) -> list[float]:
    """``DEFAULT_EPS`` (arclength units), scaled down if the crossings are closer together."""
    bound = max_excision(loop, crossings)
    scale = min(1.0, 0.8 * bound / DEFAULT_EPS[0])
    return [e * scale for e in DEFAULT_EPS]


@dataclass
class CommutatorReport:
    delta_kernel: int
    transverse: float
    transverse_extrapolation: list[tuple[float, float]]
    superconductor_units_ihc: float
    vacuum_units_ihc: float
    charge_flux_units_ihc: float
    extrapolation_error: float = 0.0
    convergence_order: float = float("nan")
    n_crossings: int = 0
    crossing_signs: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["transverse_extrapolation"] = [list(row) for row in self.transverse_extrapolation]
        return d


def evaluate_commutators(surface: TriSurface, loop: OrientedLoop, eps_sequence) -> CommutatorReport:
    analysis = transverse_analysis(surface, loop, eps_sequence)
    delta = int(sum(c.sign for c in analysis.crossings))
    transverse = analysis.extrapolation.value
    if not analysis.crossings:
        # the telescoping sum is exactly zero; drop rounding noise
        transverse = 0.0
    return CommutatorReport(
        delta_kernel=delta,
        transverse=transverse,
        transverse_extrapolation=list(zip(analysis.eps, analysis.values)),
        superconductor_units_ihc=FOUR_PI * delta,
        vacuum_units_ihc=FOUR_PI * (delta + transverse),
        charge_flux_units_ihc=float(-delta),
        extrapolation_error=analysis.extrapolation.error if analysis.crossings else 0.0,
        convergence_order=analysis.order if analysis.crossings else float("nan"),
        n_crossings=len(analysis.crossings),
        crossing_signs=[c.sign for c in analysis.crossings],
    )


@dataclass(frozen=True)
class UncertaintyCheck:
    dE: float
    dB: float
    l: float
    lhs: float
    rhs: float
    satisfied: bool
    flux_product: float
    flux_bound: float


def uncertainty_bound(dE: float, dB: float, l: float, rel_tol: float = 1e-12) -> UncertaintyCheck:
    """Energy form of the flux uncertainty relation with ``hbar = c = 1``.

    ``lhs = dE dB l^3 / 4 pi`` against ``rhs = 1 / l``; equivalently the flux
    product ``dE dB l^4`` against ``4 pi``.  Equality (to ``rel_tol``) counts as
    satisfied.
    """
    for name, v in (("dE", dE), ("dB", dB), ("l", l)):
        if not v > 0:
            raise NonpositiveInput(f"{name} must be > 0, got {v}")
    lhs = dE * dB * l**3 / FOUR_PI
    rhs = 1.0 / l
    ok = lhs >= rhs or math.isclose(lhs, rhs, rel_tol=rel_tol)
    return UncertaintyCheck(dE, dB, l, lhs, rhs, ok, dE * dB * l**4, FOUR_PI)
