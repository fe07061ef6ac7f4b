"""
Tests for generator specs, the catalog and the hypothesis checks.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiflow.cplane import INFINITY
from semiflow.errors import (
    BranchCutError,
    ConfigError,
    DivergenceRegion,
    DomainViolation,
    UnknownGeneratorError,
)
from semiflow.generators import (
    ALIASES,
    BerksonPorta,
    Constant,
    DirichletSeriesSpec,
    MoebiusCayley,
    check_class_G_generator,
    cayley_pullback_bound_check,
    difference_quotient_generator,
    dirichlet_eval,
    factor_decomposition_error,
    halfplane_bound_profile,
    halfplane_positivity,
    herglotz_growth_constant,
    horodisc_bound_check,
    list_catalog,
    load_dirichlet_csv,
    log_pullback_bound_check,
    register_herglotz,
    resolve,
)
from semiflow.generators.checks import is_positive


class TestCatalog:
    """Identifier parsing and listing."""

    def test_aliases(self):
        assert resolve("ex5.4").identifier() == "bp:tau=1.0,p=recip"
        assert resolve("ex4.8").identifier() == "hp:sqrt"
        assert set(ALIASES) == {"ex5.4", "ex4.8"}

    @pytest.mark.parametrize(
        "identifier",
        [
            "bp:tau=0,p=const:1",
            "bp:tau=0.3+0.2i,p=cayley:2",
            "bp:tau=1,p=user:cayley-power:0.5",
            "hp:const:1+2i",
            "hp:dirichlet:c0=1,a2=0.5",
            "pull-log:bp:tau=0,p=recip",
            "pull-cayley:ex5.4",
        ],
    )
    def test_identifier_resolves_back(self, identifier):
        spec = resolve(identifier)
        assert resolve(spec.identifier()) == spec
        assert str(spec) == spec.identifier()

    @pytest.mark.parametrize(
        "identifier",
        [
            "zz",
            "bp:tau=2,p=recip",
            "bp:tau=0,p=nope",
            "hp:const:-1",
            "hp:dirichlet:b3=1",
            "pull-log:ex5.4",
            "pull-cayley:hp:sqrt",
        ],
    )
    def test_unknown_identifiers(self, identifier):
        with pytest.raises(UnknownGeneratorError) as excinfo:
            resolve(identifier)
        assert excinfo.value.exit_code == 3
        assert identifier in str(excinfo.value)

    def test_listing(self):
        ids = [row["id"] for row in list_catalog()]
        assert "hp:sqrt" in ids
        assert "ex5.4" in ids
        assert "p=user:cayley-power" in ids
        assert all(row["description"] for row in list_catalog())


class TestGeneratorSpecs:
    """Evaluation, domains and Denjoy-Wolff data."""

    def test_berkson_porta(self):
        spec = BerksonPorta(0, Constant(1))
        assert spec(0.5) == -0.5
        assert spec.closed_form == ("exp_contraction", 1.0)
        assert spec.is_elliptic
        assert spec.denjoy_wolff == 0

    def test_berkson_porta_rejects_tau_outside(self):
        with pytest.raises(ValueError, match="tau"):
            BerksonPorta(1.5, Constant(1))

    def test_domain_check(self):
        with pytest.raises(DomainViolation) as excinfo:
            resolve("ex5.4")(np.array([0.0, 1.0]))
        assert excinfo.value.point == 1.0

    def test_sqrt_branch_cut_is_distinct(self):
        spec = resolve("hp:sqrt")
        assert spec(4.0) == 2.0
        with pytest.raises(BranchCutError):
            spec(-1.0)
        with pytest.raises(DomainViolation) as excinfo:
            spec(1j)
        assert not isinstance(excinfo.value, BranchCutError)

    def test_closed_forms(self):
        assert resolve("hp:const:2").closed_form == ("translation", 2.0)
        assert resolve("hp:sqrt").closed_form == ("sqrt_flow", 1.0)
        assert resolve("bp:tau=1,p=const:0.5").closed_form == ("parabolic_disc", 0.5)
        assert resolve("pull-cayley:bp:tau=1,p=const:1").closed_form == ("translation", 2.0)
        assert resolve("ex5.4").closed_form is None

    def test_denjoy_wolff_points(self):
        assert resolve("hp:sqrt").denjoy_wolff is INFINITY
        assert resolve("hp:const:0").denjoy_wolff is None
        assert resolve("pull-cayley:bp:tau=0.5,p=const:1").denjoy_wolff == pytest.approx(3.0)
        assert not resolve("ex5.4").is_elliptic

    def test_cayley_pullback_of_parabolic(self):
        """With tau = 1 the pullback of recip is (w + 1)/w."""
        spec = resolve("pull-cayley:ex5.4")
        assert spec(1.0) == pytest.approx(2.0)
        assert spec(2 + 1j) == pytest.approx((3 + 1j) / (2 + 1j))
        assert spec.nonnegative_real_part

    def test_log_pullback_singular_ordinates(self):
        spec = resolve("pull-log:bp:tau=0,p=recip")
        expected = [-3 * math.pi, -math.pi, math.pi, 3 * math.pi]
        assert spec.singular_imaginary_parts(10.0) == pytest.approx(expected)

    def test_describe(self):
        info = resolve("hp:sqrt").describe()
        assert info["id"] == "hp:sqrt"
        assert info["closed_form"] == "sqrt_flow"


class TestHerglotz:
    """Herglotz entries and user registration."""

    def test_moebius_scale(self):
        assert MoebiusCayley(2.0)(0.0) == 2.0
        with pytest.raises(ValueError):
            MoebiusCayley(0.0)

    def test_growth_constant(self):
        assert herglotz_growth_constant(Constant(1)) == pytest.approx(1.0)

    def test_user_entry_must_be_herglotz(self):
        register_herglotz("negative-test", lambda z: -1.0 + 0.0 * z, "Re p < 0")
        with pytest.raises(UnknownGeneratorError, match="not a Herglotz"):
            resolve("bp:tau=0,p=user:negative-test")

    def test_user_entry_name(self):
        with pytest.raises(ValueError):
            register_herglotz("a:b", lambda z: z, "bad name")

    def test_unregistered_user_entry(self):
        with pytest.raises(UnknownGeneratorError):
            resolve("bp:tau=0,p=user:missing-entry")


class TestDirichletSeries:
    """Truncated series with declared tails."""

    def test_eval(self):
        spec = DirichletSeriesSpec((0, 1), c0=1)
        value, tail = dirichlet_eval(spec, 1.0)
        assert value == pytest.approx(1.5)
        assert tail == 0.0
        values, tails = dirichlet_eval(spec, np.array([1.0, 2.0]))
        assert values == pytest.approx([1.5, 1.25])
        assert tails.tolist() == [0.0, 0.0]

    def test_divergence_region(self):
        spec = DirichletSeriesSpec((1,), sigma0=0.5)
        with pytest.raises(DivergenceRegion) as excinfo:
            dirichlet_eval(spec, 0.5 + 1j)
        assert excinfo.value.point == 0.5 + 1j

    def test_tail_bound(self):
        spec = DirichletSeriesSpec((0, 1), c0=1, tail_amplitude=1.0, tail_exponent=2.0)
        assert spec.abscissa == -1.0
        assert float(spec.tail_bound(1.0)) == pytest.approx(0.125)
        assert spec.absolute_bound(1.0) == pytest.approx(1.5 + 0.125)

    def test_from_terms(self):
        spec = DirichletSeriesSpec.from_terms({3: 1j}, c0=2)
        assert spec.coefficients == (0j, 0j, 1j)
        assert spec.length == 3
        with pytest.raises(ValueError):
            DirichletSeriesSpec.from_terms({0: 1})

    @given(st.floats(min_value=0.05, max_value=5.0))
    @settings(max_examples=50)
    def test_tail_bound_decreases_with_sigma(self, sigma):
        spec = DirichletSeriesSpec((1, 1, 1), tail_amplitude=2.0, tail_exponent=1.5)
        assert float(spec.tail_bound(sigma + 0.5)) < float(spec.tail_bound(sigma))

    def test_csv(self, tmp_path):
        path = tmp_path / "coeffs.csv"
        path.write_text('n,re,im\n# constant\n0,1,0\n2,0.5,0\n3,"0,-1"\n')
        spec = load_dirichlet_csv(path)
        assert spec.c0 == 1
        assert spec.coefficients == (0j, 0.5 + 0j, -1j)
        generator = resolve(f"hp:dirichlet:file={path}")
        assert generator.identifier() == f"hp:dirichlet:file={path}"
        assert generator(1.0) == pytest.approx(1 + 0.25 - 1j / 3)

    def test_csv_rejects_repeats(self, tmp_path):
        path = tmp_path / "coeffs.csv"
        path.write_text("1,1,0\n1,2,0\n")
        with pytest.raises(ConfigError, match="repeated"):
            load_dirichlet_csv(path)

    def test_csv_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_dirichlet_csv(tmp_path / "absent.csv")


class TestClassGCheck:
    """Closure and boundedness of Dirichlet generators."""

    def test_positive_series_passes(self):
        report = check_class_G_generator(DirichletSeriesSpec((0, 0.5), c0=1), eps_list=(1.0, 0.25))
        assert report.maps_into_closure
        assert report.bounded_on_halfplanes
        assert report.passed
        assert report.min_real_part >= 0.5
        assert report.to_dict()["passed"] is True

    def test_negative_real_part_is_listed(self):
        report = check_class_G_generator(DirichletSeriesSpec((-1,)), eps_list=(1.0,))
        assert not report.maps_into_closure
        assert report.violations
        assert not report.passed

    def test_divergent_series_is_not_bounded(self):
        report = check_class_G_generator(DirichletSeriesSpec((1,), sigma0=0.5), eps_list=(0.25,))
        assert not report.passed
        assert all(z.real <= 0.5 for z in report.violations)


class TestHypothesisChecks:
    """Bound profiles, positivity and decomposition."""

    def test_constant_profile(self):
        profile = halfplane_bound_profile(resolve("hp:const:1"), eps_list=(1.0, 0.5, 0.25))
        assert not profile.window_limited
        assert profile.K_hat == pytest.approx(1.0)

    def test_sqrt_profile_is_window_limited(self):
        profile = halfplane_bound_profile(resolve("hp:sqrt"), eps_list=(1.0, 0.5))
        assert profile.window_limited
        assert profile.K_hat is None
        assert profile.to_dict()["K_hat"] is None

    def test_profile_rejects_bad_offset(self):
        with pytest.raises(ValueError):
            halfplane_bound_profile(resolve("hp:const:1"), eps_list=(0.0,))

    def test_positivity(self):
        assert is_positive(halfplane_positivity(resolve("hp:sqrt")))
        assert is_positive(halfplane_positivity(resolve("pull-cayley:ex5.4")))
        assert not is_positive(-1e-6)

    def test_factor_decomposition(self):
        error = factor_decomposition_error(resolve("bp:tau=0.3+0.2i,p=recip"))
        assert error <= 1e-10

    def test_difference_quotient(self):
        assert difference_quotient_generator(lambda z, t: z + 2 * t, 1.0, 0.1) == pytest.approx(2)
        with pytest.raises(ValueError):
            difference_quotient_generator(lambda z, t: z, 1.0, 0.0)

    def test_horodisc_bound(self):
        check = horodisc_bound_check(resolve("ex5.4"), 0.5)
        assert check.passed
        with pytest.raises(ValueError):
            horodisc_bound_check(resolve("bp:tau=0,p=recip"), 0.5)

    def test_pullback_bounds(self):
        assert cayley_pullback_bound_check(resolve("ex5.4")).passed
        assert log_pullback_bound_check(resolve("bp:tau=0,p=recip")).passed
