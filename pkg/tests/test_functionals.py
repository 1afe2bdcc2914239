import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entrobounds import densities as dn
from entrobounds import functionals as fn
from entrobounds.densities import ClassSpec

E = math.e
HALF_LOG_2PIE = 1.4189385332046727


class TestDifferentialEntropy:
    def test_unit_uniform_is_zero(self, unit_uniform):
        h = fn.differential_entropy(unit_uniform)
        assert h.converged
        assert h.value == pytest.approx(0.0, abs=1e-9)

    def test_standard_normal(self, std_normal):
        h = fn.differential_entropy(std_normal)
        assert h.value == pytest.approx(HALF_LOG_2PIE, abs=1e-9)

    def test_laplace_form(self):
        h = fn.differential_entropy(dn.generalized_normal(1, 1.0, 1.0))
        assert h.value == pytest.approx(1.6931471805599453, abs=1e-9)

    def test_divergent_density_reports_nonconvergence(self):
        h = fn.differential_entropy(dn.counterexample_p())
        assert not h.converged

    def test_dimension_cap(self, std_normal):
        with pytest.raises(ValueError):
            fn.differential_entropy(dn.iid_product(std_normal, 4))

    @pytest.mark.parametrize("c", [0.5, 2.0, E])
    @pytest.mark.parametrize(
        "base",
        [
            dn.uniform(0.0, 1.0),
            dn.gaussian(0.0, 1.0),
            dn.generalized_normal(1, 1.0, 1.0),
            dn.generalized_normal(1, 4.0, 0.8),
        ],
        ids=lambda d: d.label,
    )
    def test_scaling_identity(self, base, c):
        # h(cX) = h(X) + n log c
        h0 = fn.differential_entropy(base)
        h1 = fn.differential_entropy(dn.scale(base, c))
        assert h1.value == pytest.approx(h0.value + math.log(c), abs=1e-6)

    def test_scaling_identity_2d(self):
        base = dn.iid_product(dn.gaussian(0.0, 0.9), 2)
        h0 = fn.differential_entropy(base)
        h1 = fn.differential_entropy(dn.scale(base, 2.0))
        assert h1.value == pytest.approx(h0.value + 2.0 * math.log(2.0), abs=1e-6)


class TestAlphaMoment:
    def test_uniform_second_moment(self, unit_uniform):
        m = fn.alpha_moment(unit_uniform, 2.0)
        assert m.value == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_standard_normal_first_absolute_moment(self, std_normal):
        m = fn.alpha_moment(std_normal, 1.0)
        assert m.value == pytest.approx(0.79788456080286536, abs=1e-9)

    def test_family_parameter_recovered(self):
        d = dn.generalized_normal(1, 2.0, 1.0)
        m = fn.alpha_moment(d, 2.0)
        assert m.value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 4.0])
    @pytest.mark.parametrize("v", [0.5, 1.0, 2.0])
    def test_exponential_power_moment_grid(self, alpha, v):
        d = dn.generalized_normal(1, alpha, v)
        m = fn.alpha_moment(d, alpha)
        assert m.converged
        assert m.value == pytest.approx(v, abs=1e-6)

    def test_heavy_tail_reports_nonconvergence(self):
        m = fn.alpha_moment(dn.counterexample_p(), 1.0)
        assert not m.converged

    def test_alpha_must_be_positive(self, std_normal):
        with pytest.raises(ValueError):
            fn.alpha_moment(std_normal, 0.0)


class TestEssSup:
    def test_closed_form_tag(self, unit_uniform):
        value, method = fn.ess_sup(unit_uniform)
        assert value == 1.0 and method == "closed_form"

    def test_counterexample_p_boundary_value(self):
        value, method = fn.ess_sup(dn.counterexample_p())
        assert value == pytest.approx(1.0 / E, rel=1e-14)
        assert method == "closed_form"

    def test_propagated_tag(self, std_normal):
        value, method = fn.ess_sup(dn.scale(std_normal, 2.0))
        assert value == pytest.approx(0.19947114020071635, rel=1e-12)
        assert method == "propagated"

    def test_grid_estimate_on_composed_density(self):
        z = dn.normalized_difference(dn.uniform(0.0, 1.0), dn.uniform(0.5, 1.5), 1.0)
        value, method = fn.ess_sup(z)
        assert method == "grid_estimate"
        assert value == pytest.approx(1.0, rel=1e-9)

    def test_grid_estimate_on_gaussian_difference(self):
        p, q = dn.gaussian(0.0, 1.0), dn.gaussian(0.4, 1.0)
        delta = fn.total_variation(p, q).value
        z = dn.normalized_difference(p, q, delta, crossings=(0.2,))
        value, method = fn.ess_sup(z)
        assert method == "grid_estimate"
        # lower bound of the true sup, and positive
        assert 0.0 < value <= (p([0.0]) + q([0.4])) / delta


class TestTotalVariation:
    def test_identical_densities(self, std_normal):
        tv = fn.total_variation(std_normal, std_normal)
        assert tv.value == pytest.approx(0.0, abs=1e-9)

    def test_half_overlapping_uniforms(self):
        tv = fn.total_variation(dn.uniform(0.0, 1.0), dn.uniform(0.5, 1.5))
        assert tv.value == pytest.approx(1.0, abs=1e-9)

    def test_gaussian_shift_closed_form(self, std_normal):
        tv = fn.total_variation(std_normal, dn.gaussian(0.1, 1.0))
        assert tv.value == pytest.approx(0.079755223353489846, abs=1e-8)

    def test_symmetry(self, std_normal):
        a = fn.total_variation(std_normal, dn.uniform(-1.0, 1.0)).value
        b = fn.total_variation(dn.uniform(-1.0, 1.0), std_normal).value
        assert a == pytest.approx(b, abs=1e-9)

    def test_triangle_inequality_on_catalog_triples(self):
        triples = [
            (dn.gaussian(0.0, 1.0), dn.gaussian(0.3, 1.0), dn.uniform(-1.0, 1.0)),
            (dn.uniform(0.0, 1.0), dn.uniform(0.25, 1.25), dn.uniform(0.5, 1.5)),
            (
                dn.generalized_normal(1, 1.0, 1.0),
                dn.gaussian(0.0, 1.0),
                dn.generalized_normal(1, 4.0, 1.0),
            ),
        ]
        for p, q, r in triples:
            pq = fn.total_variation(p, q)
            qr = fn.total_variation(q, r)
            pr = fn.total_variation(p, r)
            slack = pq.error_estimate + qr.error_estimate + pr.error_estimate
            assert pr.value <= pq.value + qr.value + slack + 1e-12

    def test_range(self):
        tv = fn.total_variation(dn.uniform(0.0, 1.0), dn.uniform(5.0, 6.0))
        assert tv.value == pytest.approx(2.0, abs=1e-9)


class TestRelativeEntropy:
    def test_identical_is_zero(self, std_normal):
        kl = fn.relative_entropy(std_normal, std_normal)
        assert kl.value == pytest.approx(0.0, abs=1e-9)

    def test_unit_mean_shift(self, std_normal):
        kl = fn.relative_entropy(dn.gaussian(1.0, 1.0), std_normal)
        assert kl.value == pytest.approx(0.5, abs=1e-8)

    def test_nonnegative(self):
        pairs = [
            (dn.gaussian(0.0, 0.8), dn.gaussian(0.0, 1.0)),
            (dn.uniform(0.0, 1.0), dn.uniform(-0.5, 1.5)),
            (dn.generalized_normal(1, 1.0, 1.0), dn.gaussian(0.0, 1.0)),
        ]
        for p, q in pairs:
            kl = fn.relative_entropy(p, q)
            assert kl.value >= -1e-8

    def test_support_violation_rejected(self):
        with pytest.raises(ValueError, match="support"):
            fn.relative_entropy(dn.uniform(0.0, 2.0), dn.uniform(0.0, 1.0))

    @pytest.mark.parametrize(
        "p,q",
        [
            (dn.gaussian(0.0, 1.0), dn.gaussian(0.1, 1.0)),
            (dn.gaussian(1.0, 1.0), dn.gaussian(0.0, 1.0)),
            (dn.uniform(0.0, 1.0), dn.uniform(0.0, 1.1)),
        ],
    )
    def test_pinsker_inequality(self, p, q):
        kl = fn.relative_entropy(p, q)
        tv = fn.total_variation(p, q)
        assert tv.value <= math.sqrt(2.0 * kl.value) + 1e-6

    def test_pinsker_example_numbers(self, std_normal):
        # shift 0.1: relative entropy mu^2/2 = 0.005, distance 0.0798 <= 0.1
        kl = fn.relative_entropy(std_normal, dn.gaussian(0.1, 1.0))
        assert kl.value == pytest.approx(0.005, abs=1e-8)
        tv = fn.total_variation(std_normal, dn.gaussian(0.1, 1.0))
        assert tv.value <= math.sqrt(2.0 * kl.value)


class TestTruncatedFunctionals:
    def test_counterexample_window_closed_form(self):
        te = fn.truncated_entropy(dn.counterexample_p(), math.exp(E))
        assert te.value == pytest.approx(1.5284822353142307, abs=1e-9)

    def test_uniform_window_zero(self, unit_uniform):
        te = fn.truncated_entropy(unit_uniform, 1.0)
        assert te.value == pytest.approx(0.0, abs=1e-12)

    def test_scaled_uniform_window_value(self):
        d = dn.scale(dn.uniform(0.0, 1.0), E)
        te = fn.truncated_entropy(d, E)
        assert te.value == pytest.approx(1.0, abs=1e-9)

    def test_empty_window(self):
        te = fn.truncated_entropy(dn.counterexample_p(), 1.0)
        assert te.value == 0.0 and te.converged

    def test_window_monotonicity_for_bounded_densities(self):
        # rescale so the density is bounded by one, then widen the window
        bases = [
            dn.gaussian(0.0, 0.3),
            dn.uniform(0.0, 0.5),
            dn.generalized_normal(1, 1.0, 0.3),
        ]
        ws = np.linspace(0.2, 6.0, 10)
        for base in bases:
            sup, _ = fn.ess_sup(base)
            d = dn.scale(base, max(1.0, sup) * 1.001)
            values = [fn.truncated_entropy(d, float(w)).value for w in ws]
            for a, b in zip(values[:-1], values[1:]):
                assert b >= a - 1e-12

    def test_truncated_mass_and_moment(self, std_normal):
        m = fn.truncated_mass(std_normal, 1.0)
        assert m.value == pytest.approx(2.0 * (0.841344746068543 - 0.5), abs=1e-8)
        mom = fn.truncated_alpha_moment(std_normal, 2.0, 50.0)
        assert mom.value == pytest.approx(1.0, abs=1e-8)


class TestTruncatedRelativeEntropy:
    def test_self_reference_vanishes(self):
        spec = ClassSpec(2.0, 1.0, 1.0, 1)
        d = dn.generalized_normal(1, 2.0, 1.0)
        for w in (0.5, 1.0, 3.0, 10.0):
            th = fn.truncated_relative_entropy_to_gn(d, w, spec)
            assert th.value == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize(
        "density,spec",
        [
            (dn.uniform(-0.5, 0.5), ClassSpec(2.0, 1.0, 2.0, 1)),
            (dn.gaussian(0.0, 0.9), ClassSpec(2.0, 1.0, 1.0, 1)),
            (dn.generalized_normal(1, 1.0, 0.7), ClassSpec(1.0, 2.0, 1.0, 1)),
        ],
        ids=["uniform", "gaussian", "exp-power"],
    )
    def test_floor_of_minus_one(self, density, spec):
        for w in (0.25, 1.0, 4.0, 16.0):
            th = fn.truncated_relative_entropy_to_gn(density, w, spec)
            assert th.value >= -1.0 - 1e-8

    def test_window_identity_against_components(self):
        # windowed entropy = coeff*mass + rate*moment - windowed relative
        # entropy, with every term integrated independently
        from entrobounds.bounds import theorem_constants

        spec = ClassSpec(2.0, 1.0, 1.0, 1)
        d = dn.uniform(0.0, 1.0)  # bounded by one, already at the sup cap
        consts = theorem_constants(spec)
        coeff = (1.0 / 2.0) * math.log(consts.b1)
        rate = 1.0 / (spec.v * spec.alpha)
        for w in (0.5, 1.0):
            lhs = fn.truncated_entropy(d, w).value
            rhs = (
                coeff * fn.truncated_mass(d, w).value
                + rate * fn.truncated_alpha_moment(d, spec.alpha, w).value
                - fn.truncated_relative_entropy_to_gn(d, w, spec).value
            )
            assert lhs == pytest.approx(rhs, abs=1e-6)

    def test_dimension_mismatch_rejected(self, std_normal):
        with pytest.raises(ValueError):
            fn.truncated_relative_entropy_to_gn(std_normal, 1.0, ClassSpec(2, 1, 1, 2))


class TestXlogXGap:
    def test_boundary_equality(self):
        lhs, rhs = fn.xlogx_gap(1.0 / E, 0.0)
        assert lhs == pytest.approx(1.0 / E, rel=1e-15)
        assert rhs == pytest.approx(1.0 / E, rel=1e-15)

    def test_identical_arguments(self):
        assert fn.xlogx_gap(0.2, 0.2) == (0.0, 0.0)

    def test_interior_example(self):
        lhs, rhs = fn.xlogx_gap(0.1, 0.2)
        assert lhs == pytest.approx(0.091629073187415507, rel=1e-12)
        assert rhs == pytest.approx(0.23025850929940457, rel=1e-12)

    def test_domain_gate(self):
        with pytest.raises(ValueError):
            fn.xlogx_gap(0.5, 0.1)
        with pytest.raises(ValueError):
            fn.xlogx_gap(0.1, -0.01)

    @settings(max_examples=300, deadline=None, derandomize=True)
    @given(
        x=st.floats(min_value=0.0, max_value=1.0 / E),
        y=st.floats(min_value=0.0, max_value=1.0 / E),
    )
    def test_inequality_holds(self, x, y):
        lhs, rhs = fn.xlogx_gap(x, y)
        assert lhs <= rhs + 1e-12


class TestPointwiseLogBound:
    def test_x_log_ratio_dominates_difference(self):
        # x*log(x/a) >= x - a for x >= 0, a > 0
        rng = np.random.default_rng(123)
        xs = rng.uniform(0.0, 50.0, size=2000)
        az = rng.uniform(1e-6, 50.0, size=2000)
        for x, a in zip(xs, az):
            lhs = 0.0 if x == 0.0 else x * math.log(x / a)
            assert lhs >= x - a - 1e-10


class TestCommonScalingInvariance:
    @pytest.mark.parametrize("c", [0.5, 2.0, E])
    def test_distance_preserved_under_common_scaling(self, c, std_normal):
        q = dn.gaussian(0.3, 1.0)
        before = fn.total_variation(std_normal, q)
        after = fn.total_variation(dn.scale(std_normal, c), dn.scale(q, c))
        assert after.value == pytest.approx(before.value, abs=1e-8)

    @pytest.mark.parametrize("c", [0.5, 2.0, E])
    def test_entropy_difference_preserved_under_common_scaling(self, c):
        p = dn.uniform(0.0, 1.0)
        q = dn.uniform(0.0, 1.4)
        d0 = fn.differential_entropy(p).value - fn.differential_entropy(q).value
        d1 = (
            fn.differential_entropy(dn.scale(p, c)).value
            - fn.differential_entropy(dn.scale(q, c)).value
        )
        assert d1 == pytest.approx(d0, abs=1e-6)
