import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from levytransport.errors import DivergenceError, ValidationError
from levytransport.measures import (
    Empirical,
    GammaMeasure,
    GenericTail,
    ParetoTail,
    TwoSidedPowerLaw,
    empirical_breaks,
    load_spec,
    read_sample_csv,
    spec_from_dict,
    spec_to_dict,
    transport,
    transport_empirical,
    transport_from_tail,
    transport_pareto,
    two_sided_transport,
    write_sample_csv,
)


def preimage_mass(c, a, b, vmax=1e6):
    """Pi0({v > 0 : a < c(v) <= b}) by brute-force integration over a fine grid."""
    v = np.geomspace(1e-6, vmax, 400_001)
    inside = (c(v) > a) & (c(v) <= b)
    w = 1.0 / v**2
    return float(integrate.trapezoid(np.where(inside, w, 0.0), v))


class TestPareto:
    def test_breakpoint_and_value(self):
        c = transport_pareto(2.0, 1.0, 2.0)
        assert c.plus.breaks[0] == 1.0
        assert c(2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert c(0.999) == 0.0

    def test_cauchy_limit(self):
        c = transport_pareto(1.0, 1e-12, 1.0)
        v = np.array([0.1, 1.0, 7.5, 1e4])
        np.testing.assert_allclose(c(v), v, rtol=1e-14)

    @pytest.mark.parametrize("u", [0.6, 1.0, 2.0])
    def test_pushforward_by_integration(self, u):
        # alpha=3, eps=0.5, lambda=0.375: tail lambda u**-3 / 3
        c = transport_pareto(3.0, 0.5, 0.375)
        want = 0.375 * u**-3 / 3
        assert preimage_mass(c, u, np.inf) == pytest.approx(want, rel=2e-4)
        assert c.pushforward_tail(u) == pytest.approx(want, rel=1e-14)

    def test_probability_normalisation(self):
        spec = ParetoTail(3.3, 0.7)
        assert spec.lam == pytest.approx(3.3 * 0.7**3.3)
        assert spec.mass == pytest.approx(1.0)
        assert transport(spec).plus.breaks[0] == pytest.approx(1.0)

    @pytest.mark.parametrize("bad", [(-1, 1, 1), (1, 0, 1), (1, 1, -2), (math.nan, 1, 1)])
    def test_domain(self, bad):
        with pytest.raises(ValidationError):
            transport_pareto(*bad)


class TestEmpirical:
    def test_single_atom(self):
        c = transport_empirical([2.0], 1.0)
        assert c(0.5) == 0.0
        assert c(1.0) == 2.0
        assert c(1e9) == 2.0

    def test_two_atoms(self):
        c = transport_empirical([1.5, 3.0], 1.0)
        np.testing.assert_array_equal(c(np.array([0.99, 1.0, 1.99, 2.0, 50.0])), [0, 1.5, 1.5, 3.0, 3.0])

    def test_breaks(self):
        np.testing.assert_allclose(empirical_breaks(4), [1.0, 4 / 3, 2.0, 4.0])

    def test_interval_mass(self):
        rng = np.random.default_rng(3)
        sample = np.sort(1.0 + rng.exponential(size=25))
        spec = Empirical(sample, 1.0)
        c = transport(spec)
        for a, b in [(1.0, 1.5), (1.2, 2.0), (0.5, 10.0), (1.7, 1.71)]:
            want = np.count_nonzero((sample > a) & (sample <= b)) / sample.size
            got = c.pushforward_tail(a) - c.pushforward_tail(b)
            assert got == pytest.approx(want, abs=1e-14)
            assert spec.mass_between(a, b) == pytest.approx(want, abs=1e-15)

    def test_validation_lists_offenders(self):
        with pytest.raises(ValidationError, match=r"indices \[0\]"):
            Empirical([0.5, 2.0], 1.0)
        with pytest.raises(ValidationError, match="sorted"):
            Empirical([3.0, 2.0], 1.0)
        with pytest.raises(ValidationError, match="empty"):
            Empirical([], 1.0)


class TestTwoSided:
    def test_one_sided_degeneration(self):
        c = two_sided_transport(TwoSidedPowerLaw(3.0, 2.0, 1.0, 0.0))
        assert c.minus is None
        np.testing.assert_array_equal(c(np.array([-5.0, -0.1])), [0.0, 0.0])

    def test_odd_when_symmetric(self):
        c = two_sided_transport(TwoSidedPowerLaw(2.5, 2.5, 1.3, 1.3))
        v = np.geomspace(0.01, 100, 50)
        np.testing.assert_array_equal(c(-v), -c(v))

    def test_pushforward_positive(self):
        spec = TwoSidedPowerLaw(2.5, 3.0, 1.5, 1.0)
        c = transport(spec)
        for u in (1.2, 3.0, 10.0):
            assert preimage_mass(c, u, np.inf, vmax=1e7) == pytest.approx(1.5 * u**-2.5, rel=2e-4)

    def test_degenerate(self):
        with pytest.raises(ValidationError, match="degenerate"):
            TwoSidedPowerLaw(2.0, 2.0, 0.0, 0.0)


class TestTailInversion:
    def test_cauchy(self):
        assert transport_from_tail(lambda u: 1.0 / u, 3.7) == pytest.approx(3.7, abs=1e-12)

    def test_matches_pareto(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            a, e, lam = rng.uniform(0.5, 6), rng.uniform(0.1, 2), rng.uniform(0.1, 5)
            spec = ParetoTail(a, e, lam)
            c = transport_pareto(a, e, lam)
            b = spec.alpha * e**a / lam
            for v in rng.uniform(b * 1.001, b * 50, 5):
                assert transport_from_tail(spec.tail_plus, v) == pytest.approx(c(v), abs=1e-11)

    @pytest.mark.parametrize("v", [1.0, 10.0, 100.0])
    def test_gamma_against_brute_force(self, v):
        g = GammaMeasure(1.3, 0.8)
        got = transport_from_tail(g.tail_plus, v)
        # independent reference: scipy brentq on the exponential integral at 10x finer tolerance
        from scipy.optimize import brentq

        ref = brentq(lambda u: g.tail_plus(u) - 1.0 / v, 1e-300, 1e3, xtol=1e-13, rtol=1e-15, maxiter=500)
        assert got == pytest.approx(ref, abs=1e-12)

    def test_non_monotone_tail(self):
        with pytest.raises(ValidationError, match="non-increasing"):
            transport_from_tail(lambda u: np.asarray(u, dtype=float) ** 2 + 1, 0.5)

    def test_non_decaying_tail(self):
        with pytest.raises(DivergenceError):
            transport_from_tail(lambda u: np.full(np.shape(u), 2.0), 1.0)


@st.composite
def any_spec(draw):
    kind = draw(st.sampled_from(["pareto", "two_sided", "gamma", "empirical"]))
    pos = st.floats(0.3, 4.0)
    if kind == "pareto":
        return ParetoTail(draw(pos), draw(pos), draw(st.one_of(st.none(), pos)))
    if kind == "two_sided":
        return TwoSidedPowerLaw(draw(st.floats(1.1, 6)), draw(st.floats(1.1, 6)), draw(pos), draw(pos))
    if kind == "gamma":
        return GammaMeasure(draw(pos), draw(pos))
    xs = draw(st.lists(st.floats(0.01, 50), min_size=1, max_size=30))
    return Empirical(np.sort(np.asarray(xs) + 1.0), 1.0)


@settings(max_examples=60, deadline=None)
@given(any_spec(), st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=40))
def test_monotone_and_sign_preserving(spec, vs):
    c = transport(spec)
    v = np.sort(np.asarray(vs))
    cv = c(v)
    assert np.all(np.diff(cv) >= 0)
    assert np.all(cv * v >= 0)


def test_json_round_trip(tmp_path):
    specs = [
        ParetoTail(2.0, 0.5),
        TwoSidedPowerLaw(2.0, 3.0, 1.0, 0.5),
        GammaMeasure(1.0, 2.0),
        Empirical([1.5, 2.5], 1.0),
    ]
    for spec in specs:
        back = spec_from_dict(json.loads(json.dumps(spec_to_dict(spec))))
        assert spec_to_dict(back) == spec_to_dict(spec)


def test_empirical_csv_reference(tmp_path):
    write_sample_csv(tmp_path / "s.csv", [2.5, 1.5, 3.0])
    (tmp_path / "m.json").write_text(json.dumps({"kind": "empirical", "eps": 1.0, "csv": "s.csv"}))
    spec = load_spec(tmp_path / "m.json")
    np.testing.assert_array_equal(spec.sample, [1.5, 2.5, 3.0])


def test_csv_rejects_bad_rows(tmp_path):
    (tmp_path / "s.csv").write_text("value\n1.0\nnan\n2.0\nabc\n")
    with pytest.raises(ValidationError, match=r"\[3, 5\]"):
        read_sample_csv(tmp_path / "s.csv")


def test_generic_tail_expression():
    spec = spec_from_dict({"kind": "tail", "plus": "2/u**3"})
    c = transport(spec)
    # tail 2 u**-3 = 1/v  =>  c(v) = (2 v)**(1/3)
    assert c(4.0) == pytest.approx(8.0 ** (1 / 3), abs=1e-11)
    assert isinstance(spec, GenericTail)


def test_bad_spec_json(tmp_path):
    (tmp_path / "m.json").write_text('{"kind": "pareto", "alpha": 2,}')
    with pytest.raises(ValidationError, match="line 1"):
        load_spec(tmp_path / "m.json")
    with pytest.raises(ValidationError, match="missing key"):
        spec_from_dict({"kind": "pareto", "alpha": 2})
    with pytest.raises(ValidationError, match="unknown"):
        spec_from_dict({"kind": "stable"})
