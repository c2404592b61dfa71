"""Norm chain, pointwise growth bound, instability inequality, and the
zero-set machinery."""

import dataclasses
import math

import numpy as np
import pytest

from conftest import make_band_limited, random_config
from frozen_spectral import (
    PI,
    CharDifference,
    NumericalError,
    ProblemConfig,
    SineTypeSystem,
    chain_constant,
    instability_bound,
    l2_norm_real_axis,
    pair_zero_sets,
    parseval_bound,
    plancherel_polya_check,
    potential_from_samples,
    sine_type_interpolate,
    zero_displacement_ratios,
    zero_set_bound,
    zero_set_sweep,
)
from frozen_spectral.instability import CALIBRATION_MARGIN


def scaled_cos(t, M=256):
    xs = np.linspace(0.0, PI, M + 1)
    return potential_from_samples(t * np.cos(xs), M)


# ---------------------------------------------------------------------------
# real-axis L2 norms


def test_l2_norm_of_sinc():
    norm = l2_norm_real_axis(np.sinc, decay_order=1)
    assert abs(norm.value - 1.0) < 5e-3
    assert norm.tail_fraction < 0.01


def test_l2_norm_zero_function():
    norm = l2_norm_real_axis(lambda x: np.zeros_like(np.asarray(x)))
    assert norm.value == 0.0 and norm.tail_fraction == 0.0


def test_l2_norm_rejects_nonintegrable_order():
    with pytest.raises(ValueError):
        l2_norm_real_axis(np.sinc, decay_order=0)


def test_l2_norm_escalates_cutoff():
    f = lambda x: 1.0 / np.sqrt(1.0 + np.asarray(x) ** 2)
    norm = l2_norm_real_axis(f, decay_order=1, tail_budget=2e-3)
    assert norm.cutoff >= 256.0
    assert abs(norm.value - math.sqrt(PI)) < 5e-3 * math.sqrt(PI)
    with pytest.raises(NumericalError):
        l2_norm_real_axis(f, decay_order=1, tail_budget=1e-4)


def test_l2_norm_of_difference_is_cutoff_stable(cos_q, zero_q):
    cfg = ProblemConfig((1.0,), 0, 0)
    diff = CharDifference(cos_q, zero_q, cfg)
    n128 = l2_norm_real_axis(diff, T=128.0)
    n64 = l2_norm_real_axis(diff, T=64.0)
    assert n128.value > 0
    assert abs(n64.value - n128.value) < 1e-4 * n128.value


# ---------------------------------------------------------------------------
# norm chain


def test_chain_constant_structure(cfg_two):
    cc = chain_constant(cfg_two)
    assert cc.boundary_factor > 0 and cc.frozen_factor > 0
    assert abs(cc.value - math.sqrt(2 * PI) * (cc.boundary_factor
                                               + cc.frozen_factor)) < 1e-12
    assert 20.0 < cc.value < 80.0
    again = chain_constant(cfg_two)
    assert again.value == cc.value


def test_parseval_bound_identical_pair(one_q, cfg_two):
    pb = parseval_bound(one_q, one_q, cfg_two)
    assert pb.holds and pb.lhs == 0.0 and pb.rhs == 0.0


def test_parseval_bound_simple_pair(one_q, zero_q, cfg_two):
    pb = parseval_bound(one_q, zero_q, cfg_two)
    assert pb.holds
    assert 0.0 < pb.lhs < pb.rhs
    assert pb.c_norm == chain_constant(cfg_two).value
    assert pb.coefficient_norm > 0 and pb.K_used >= 128


def test_parseval_bound_exactly_homogeneous(zero_q, cfg_two):
    # both sides are linear in qhat; t = 1/2 is exact in floats
    pb1 = parseval_bound(scaled_cos(1.0), zero_q, cfg_two)
    pb2 = parseval_bound(scaled_cos(0.5), zero_q, cfg_two)
    assert abs(pb2.lhs - 0.5 * pb1.lhs) < 1e-10 * pb1.lhs
    assert abs(pb2.rhs - 0.5 * pb1.rhs) < 1e-10 * pb1.rhs


@pytest.mark.parametrize("seed", range(20))
def test_parseval_bound_random_pairs(seed):
    q1 = make_band_limited(3 * seed + 101)
    q2 = make_band_limited(3 * seed + 102)
    cfg = random_config(3 * seed + 103)
    pb = parseval_bound(q1, q2, cfg)
    assert pb.holds
    assert pb.lhs > 0.0


# ---------------------------------------------------------------------------
# pointwise growth bound


def _probe_points(seed, n=100):
    g = np.random.default_rng(seed)
    return g.uniform(-50.0, 50.0, n) + 1j * g.uniform(-5.0, 5.0, n)


def test_polya_bound_for_sine_kernel():
    f = lambda z: np.sin(PI * z) / z
    pts = _probe_points(7)
    chk = plancherel_polya_check(f, PI, pts, norm=PI)
    assert 0.0 < chk.max_ratio <= 1.0 + 1e-9
    assert chk.worst_point in pts
    assert chk.norm == PI


def test_polya_bound_computes_norm_when_missing():
    f = lambda z: np.sin(PI * z) / z
    pts = _probe_points(11)
    auto = plancherel_polya_check(f, PI, pts, decay_order=1)
    assert abs(auto.norm - PI) < 5e-3 * PI
    assert auto.max_ratio <= 1.0 + 1e-6


def test_polya_bound_for_difference(cos_q, zero_q):
    cfg = ProblemConfig((1.0,), 0, 0)
    diff = CharDifference(cos_q, zero_q, cfg)
    chk = plancherel_polya_check(diff, PI + 1.0, _probe_points(13))
    assert chk.max_ratio <= 1.0 + 1e-6


def test_polya_bound_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        plancherel_polya_check(np.sinc, 0.0, [1.0])
    with pytest.raises(NumericalError):
        plancherel_polya_check(lambda z: np.zeros_like(np.asarray(z)),
                               PI, [1.0])


# ---------------------------------------------------------------------------
# instability inequality


def test_instability_bound_holds(cos_q, zero_q, cfg_two):
    rep = instability_bound(cos_q, zero_q, cfg_two)
    assert rep.holds and rep.lhs >= rep.rhs
    # lhs = (h+1) (a_N + support width), with qhat supported on all of [0, pi]
    assert abs(rep.lhs - 5.0 * (2.0 + PI)) < 1e-9
    assert rep.C > 0 and rep.h == 4.0 and rep.x == 0.0


def test_instability_bound_report_shape():
    names = [f.name for f in dataclasses.fields(
        __import__("frozen_spectral").BoundReport)]
    assert names == ["lhs", "rhs", "C", "h", "x", "holds"]


def test_instability_bound_validates_inputs(cos_q, zero_q, cfg_two):
    with pytest.raises(ValueError):
        instability_bound(cos_q, zero_q, cfg_two, h=2.0)
    with pytest.raises(ValueError):
        instability_bound(cos_q, cos_q, cfg_two)


def test_instability_bound_rejects_vanishing_difference(cfg_half):
    # with the frozen point at pi/2 any difference that is odd about
    # pi/2 cancels out of -B*V + C*W identically (the pair is
    # isospectral), and the cell-exact integrals reproduce that down to
    # rounding; the probe line sees zeros and must refuse
    xs = np.linspace(0.0, PI, 65)
    q1 = potential_from_samples(1.0 + 0.03 * np.cos(xs), 64)
    q2 = potential_from_samples(np.ones(65), 64)
    with pytest.raises(NumericalError, match="vanishes"):
        instability_bound(q1, q2, cfg_half)


def test_instability_rhs_scale_invariant(zero_q, cfg_two):
    # rhs = -ln(C ||c||^2 / |G|^2) and both scale as t^2
    base = instability_bound(scaled_cos(1.0), zero_q, cfg_two)
    for t in (0.5, 2.0):
        rep = instability_bound(scaled_cos(t), zero_q, cfg_two)
        assert abs(rep.rhs - base.rhs) < 1e-9
        assert rep.lhs == base.lhs


# ---------------------------------------------------------------------------
# sine-type interpolation


def _sine_system(halfwidth=20):
    ks = np.arange(-halfwidth, halfwidth + 1)
    return SineTypeSystem.build(np.sin, PI * ks.astype(float), 1.0)


def test_sine_system_build():
    sys = _sine_system()
    assert len(sys.zeros) == 41
    assert np.max(np.abs(np.abs(sys.derivatives) - 1.0)) < 1e-7
    assert sys.sigma == 1.0


def test_sine_system_rejects_bad_nodes():
    with pytest.raises(ValueError, match="zeros of F"):
        SineTypeSystem.build(np.sin, [0.3, 2.0], 1.0)
    with pytest.raises(ValueError, match="simple"):
        SineTypeSystem.build(lambda z: np.sin(z) ** 2, [0.0, PI], 1.0)
    with pytest.raises(ValueError, match="separated"):
        SineTypeSystem.build(np.sin, [0.0, 1e-9], 1.0)
    with pytest.raises(ValueError, match="two"):
        SineTypeSystem.build(np.sin, [0.0], 1.0)


def test_interpolate_delta_gives_cardinal_function():
    sys = _sine_system()
    coeffs = np.zeros(41)
    coeffs[20] = 1.0  # node at the origin
    for z in (0.7, -2.3, 1.5 + 0.4j):
        val = sine_type_interpolate(sys, coeffs, z)
        assert abs(val - np.sin(z) / z) < 1e-12


def test_interpolate_round_trip_is_exact():
    sys = _sine_system()
    g = np.random.default_rng(5)
    coeffs = g.normal(size=41) + 1j * g.normal(size=41)
    vals = sine_type_interpolate(sys, coeffs, sys.zeros)
    assert np.all(vals == coeffs)


def test_interpolate_zero_coefficients():
    sys = _sine_system()
    assert sine_type_interpolate(sys, np.zeros(41), 0.37) == 0.0


def test_interpolate_validates_coefficients():
    sys = _sine_system()
    with pytest.raises(ValueError):
        sine_type_interpolate(sys, np.zeros(7), 1.0)


def test_interpolate_recovers_smaller_band():
    # samples of sin(0.9 z)/(0.9 z) at k pi determine it on the axis
    sys = _sine_system(60)
    b = 0.9

    def ref(z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        nz = z != 0
        out[nz] = np.sin(b * z[nz]) / (b * z[nz])
        return out

    coeffs = ref(sys.zeros)
    grid = np.linspace(-5.0, 5.0, 41)
    err = np.abs(sine_type_interpolate(sys, coeffs, grid) - ref(grid))
    assert float(np.max(err)) < 1e-4


# ---------------------------------------------------------------------------
# zero pairing and the zero-set bound


def test_pair_zero_sets_arithmetic():
    pair = pair_zero_sets(np.array([1.0, 2.0, 3.0]),
                          np.array([1.05, 2.1, 2.95]))
    assert pair.paired == 3
    assert np.allclose(np.abs(pair.displacements), [0.05, 0.1, 0.05])
    assert abs(pair.l2_distance - math.sqrt(0.015)) < 1e-12
    assert abs(pair.max_gap - 0.1) < 1e-12
    assert pair.surplus_a == 0 and pair.surplus_b == 0


def test_pair_zero_sets_excludes_far_pairs():
    with pytest.warns(UserWarning, match="further apart"):
        pair = pair_zero_sets(np.array([1.0, 2.0, 3.0]),
                              np.array([1.05, 2.1, 9.0]))
    assert pair.paired == 2
    assert pair.max_gap < 0.5


def test_pair_zero_sets_surplus():
    pair = pair_zero_sets(np.array([1.0, 2.0, 3.0, 4.0]), np.array([1.0]))
    assert pair.paired == 1 and pair.surplus_a == 3 and pair.surplus_b == 0


def test_displacement_ratios_for_shifted_sine():
    ks = PI * np.arange(-10.0, 11.0)
    ratios = zero_displacement_ratios(np.sin, ks, ks + 0.01)
    assert len(ratios) == 21
    assert np.max(np.abs(ratios - 1.0)) < 1e-4


def _sweep_pair():
    xs = np.linspace(0.0, PI, 65)
    q1 = potential_from_samples(np.ones(65), 64)
    q2 = potential_from_samples(1.0 + 0.03 * np.cos(xs), 64)
    return q1, q2, ProblemConfig((1.0,), 0, 0)


def test_zero_set_bound_calibration():
    q1, q2, cfg = _sweep_pair()
    rep = zero_set_bound(q1, q2, cfg, window=13.3, strip=4.0)
    assert rep.holds
    assert abs(rep.rhs - (rep.lhs - CALIBRATION_MARGIN)) < 1e-9
    assert rep.zero_distance > 0
    assert rep.paired == 12
    fixed = zero_set_bound(q1, q2, cfg, window=13.3, strip=4.0, C=rep.C)
    assert abs(fixed.rhs - rep.rhs) < 1e-9


def test_zero_set_bound_validates_inputs():
    q1, q2, cfg = _sweep_pair()
    with pytest.raises(ValueError):
        zero_set_bound(q1, q2, cfg, h=1.0)
    with pytest.raises(ValueError):
        zero_set_bound(q1, q1, cfg)


def test_zero_set_sweep_co_vanishing():
    q1, q2, cfg = _sweep_pair()
    sw = zero_set_sweep(q1, q2, cfg, ts=(1.0, 0.5, 0.25), window=13.3,
                        strip=4.0)
    assert sw.monotone
    assert all(r.holds for r in sw.reports)
    assert all(r.C == sw.C for r in sw.reports)
    # distance tracks the scale factor to second order
    assert abs(sw.distances[1] / sw.distances[0] - 0.5) < 0.01
    assert abs(sw.distances[2] / sw.distances[1] - 0.5) < 0.01


def test_zero_set_sweep_validates_factors():
    q1, q2, cfg = _sweep_pair()
    with pytest.raises(ValueError):
        zero_set_sweep(q1, q2, cfg, ts=(1.0, -0.5))
