import math

import numpy as np
import pytest

from fluxcomm.commutator import (
    DEFAULT_EPS,
    default_eps_sequence,
    delta_kernel_integral,
    evaluate_commutators,
    excised_arcs,
    transverse_analysis,
    transverse_integral,
    uncertainty_bound,
)
from fluxcomm.crossings import signed_crossings
from fluxcomm.errors import EpsTooLarge, NonpositiveInput
from fluxcomm.extrapolation import richardson
from fluxcomm.flux import flux_jump_table
from fluxcomm.geom import deform_interior

FOUR_PI = 4 * math.pi


def test_delta_kernel_values(hopf, unlinked):
    assert delta_kernel_integral(*hopf) == 1
    assert delta_kernel_integral(*unlinked) == 0
    surface, loop = hopf
    for seed in (0, 1, 2):
        assert delta_kernel_integral(deform_interior(surface, seed, 0.5, [loop]), loop) == 1


def test_transverse_hopf(hopf):
    per_eps, extrapolated = transverse_integral(*hopf, DEFAULT_EPS)
    assert [e for e, _ in per_eps] == list(DEFAULT_EPS)
    assert extrapolated == pytest.approx(1.0, abs=1e-3)


@pytest.mark.xfail(strict=True, reason=(
    "excisions of 0.2 to 0.025 loop lengths remove up to 40% of the loop; the "
    "extrapolated value is 1.010, outside 1e-3 (see test_transverse_hopf)"
))
def test_transverse_hopf_eps_in_loop_lengths(hopf):
    surface, loop = hopf
    eps = [f * loop.length for f in (0.2, 0.1, 0.05, 0.025)]
    assert transverse_integral(surface, loop, eps)[1] == pytest.approx(1.0, abs=1e-3)


def test_transverse_unlinked_is_exactly_zero(unlinked):
    per_eps, extrapolated = transverse_integral(*unlinked, DEFAULT_EPS)
    assert all(abs(v) < 1e-6 for _, v in per_eps)
    assert abs(extrapolated) < 1e-6


def test_transverse_dome_total(dome):
    surface, loop = dome
    eps = default_eps_sequence(loop, signed_crossings(surface, loop)[0])
    assert transverse_integral(surface, loop, eps)[1] == pytest.approx(1.0, abs=1e-3)


def test_transverse_linked_twice(linked2):
    surface, loop = linked2
    eps = default_eps_sequence(loop, signed_crossings(surface, loop)[0])
    assert transverse_integral(surface, loop, eps)[1] == pytest.approx(2.0, abs=2e-3)


def _principal_value(surface, crossing, hs=(0.02, 0.01, 0.005, 0.0025)):
    """Mean of the two one-sided flux limits, probing along the triangle normal."""
    rows = flux_jump_table(surface, crossing, 1.0, hs)
    return richardson(hs, [(r.phi_above + r.phi_below) / 2 for r in rows]).value


def test_arc_limits_are_principal_value_differences(dome):
    """Each arc tends to the jump it inherits plus the change in principal-value flux."""
    surface, loop = dome
    crossings = signed_crossings(surface, loop)[0]
    pv = [_principal_value(surface, c) for c in crossings]
    eps = default_eps_sequence(loop, crossings)
    analysis = transverse_analysis(surface, loop, eps)
    n = len(crossings)
    for k in range(n):
        limit = richardson(eps, [row[k].value for row in analysis.arcs]).value
        # an arc from a + crossing to a + crossing inherits one full 4 pi jump
        jumps = 0 if analysis.arcs[0][k].internal else crossings[k].sign
        expected = jumps + (pv[(k + 1) % n] - pv[k]) / FOUR_PI
        assert limit == pytest.approx(expected, abs=1e-3)


def test_flat_scene_arcs_carry_no_principal_value(hopf):
    surface, loop = hopf
    crossing = signed_crossings(surface, loop)[0][0]
    assert abs(_principal_value(surface, crossing)) < 1e-9


def test_transverse_convergence_order_and_monotone(hopf):
    analysis = transverse_analysis(*hopf, DEFAULT_EPS)
    values = analysis.values
    assert all(b > a for a, b in zip(values, values[1:]))
    assert analysis.order == pytest.approx(1.0, abs=0.05)


def test_surface_independence(hopf):
    surface, loop = hopf
    for seed in range(3):
        deformed = deform_interior(surface, seed, 0.3, [loop])
        eps = default_eps_sequence(loop, signed_crossings(deformed, loop)[0])
        eps = [e / 2 for e in eps]
        assert transverse_integral(deformed, loop, eps)[1] == pytest.approx(1.0, abs=2e-3)


def test_eps_too_large(hopf, dome):
    surface, loop = hopf
    with pytest.raises(EpsTooLarge):
        transverse_integral(surface, loop, [loop.length / 4])
    with pytest.raises(EpsTooLarge):
        transverse_integral(*dome, [0.3])
    with pytest.raises(EpsTooLarge):
        excised_arcs(surface, loop, 0.0)


def test_report_hopf(hopf):
    report = evaluate_commutators(*hopf, DEFAULT_EPS)
    assert report.delta_kernel == 1
    assert report.transverse == pytest.approx(1.0, abs=1e-3)
    assert report.superconductor_units_ihc == FOUR_PI
    assert report.vacuum_units_ihc == pytest.approx(8 * math.pi, abs=0.025)
    assert report.charge_flux_units_ihc == -1.0
    assert abs(report.vacuum_units_ihc / report.superconductor_units_ihc - 2) < 2e-3
    assert report.vacuum_units_ihc == FOUR_PI * (report.delta_kernel + report.transverse)


def test_report_unlinked_all_zero(unlinked):
    report = evaluate_commutators(*unlinked, DEFAULT_EPS)
    assert (report.delta_kernel, report.transverse, report.superconductor_units_ihc,
            report.vacuum_units_ihc, report.charge_flux_units_ihc) == (0, 0.0, 0.0, 0.0, 0.0)
    assert not math.copysign(1, report.charge_flux_units_ihc) < 0


def test_report_reversed(hopf):
    surface, loop = hopf
    report = evaluate_commutators(surface, loop.reversed(), DEFAULT_EPS)
    assert report.delta_kernel == -1
    assert report.vacuum_units_ihc == pytest.approx(-8 * math.pi, abs=0.025)
    assert report.charge_flux_units_ihc == 1.0


def test_factor_two_on_linked_scenes(hopf, dome, linked2):
    for surface, loop in (hopf, dome, linked2):
        eps = default_eps_sequence(loop, signed_crossings(surface, loop)[0])
        report = evaluate_commutators(surface, loop, eps)
        assert abs(report.vacuum_units_ihc / report.superconductor_units_ihc - 2) < 2e-3


def test_uncertainty_boundary_case():
    s = math.sqrt(FOUR_PI)
    check = uncertainty_bound(s, s, 1.0)
    assert check.satisfied
    assert check.lhs == pytest.approx(check.rhs, abs=1e-12)
    assert check.flux_product == pytest.approx(check.flux_bound, rel=1e-12)


def test_uncertainty_violated():
    check = uncertainty_bound(1.0, 1.0, 1.0)
    assert check.lhs == pytest.approx(1 / FOUR_PI)
    assert check.rhs == 1.0
    assert not check.satisfied


def test_uncertainty_scaling():
    a = uncertainty_bound(0.7, 1.3, 1.0)
    b = uncertainty_bound(0.7, 1.3, 2.0)
    assert (b.lhs / b.rhs) / (a.lhs / a.rhs) == pytest.approx(16.0)


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0), (1, 1, float("nan"))])
def test_uncertainty_rejects_nonpositive(args):
    with pytest.raises(NonpositiveInput):
        uncertainty_bound(*args)


def test_default_eps_fits_between_crossings(dome, hopf):
    surface, loop = dome
    eps = default_eps_sequence(loop, signed_crossings(surface, loop)[0])
    assert eps[0] < 0.2 and np.allclose(np.array(eps[:-1]) / eps[1:], 2.0)
    assert default_eps_sequence(hopf[1], signed_crossings(*hopf)[0]) == list(DEFAULT_EPS)
