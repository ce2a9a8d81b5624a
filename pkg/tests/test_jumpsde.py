import csv
import json
import math

import numpy as np
import pytest

from levytransport import kernels
from levytransport.errors import BlowUpError, CouplingError, IncompleteInputError, ValidationError
from levytransport.jumpsde import (
    BOUND_T2_TERMS,
    G,
    JumpDiffusionSpec,
    Marks,
    Regimes,
    abar,
    bound_t1,
    bound_t2,
    coupled_study,
    coupled_sup_rho,
    draw_marks,
    kernel_t1,
    load_spec,
    simulate,
    simulate_coupled,
    spec_from_dict,
    spec_to_dict,
    sup_gap_on_grid,
)
from levytransport.sampling import RngStream


def make(warm=3.5, cold=3.0, drift=(0.0, -1.0), x0=0.0, **kw):
    return JumpDiffusionSpec(drift=drift, alpha_plus=Regimes(warm, cold), alpha_minus=Regimes(warm, cold), x0=x0, **kw)


@pytest.mark.parametrize("x,want", [(0.0, 0.0), (0.25, 0.5), (1.0, 1.0), (4.0, 4.0)])
def test_G(x, want):
    assert G(x) == want


def test_G_domain():
    with pytest.raises(ValidationError):
        G(-0.1)


class TestRegimes:
    def test_profile(self):
        r = Regimes(warm=4.0, cold=3.0, s_star=0.0, delta=0.5)
        assert r(-2.0) == 3.0 and r(2.0) == 4.0
        assert r(0.0) == pytest.approx(3.5)
        assert r.lipschitz == pytest.approx(1.0)

    def test_validation(self):
        with pytest.raises(ValidationError):
            Regimes(1.5, 3.0)
        with pytest.raises(ValidationError):
            Regimes(3.0, 3.0, delta=0.0)


class TestSimulate:
    def test_pure_jump_sum(self):
        spec = make(drift=(0.0,), x0=0.3)
        path = simulate(spec, 5.0, rng=1)
        assert path.final == pytest.approx(0.3 + sum(j[2] for j in path.jumps), abs=1e-12)
        assert len(path.jumps) == len(path.marks)

    def test_jump_sizes_exceed_eps(self):
        spec = make()
        path = simulate(spec, 20.0, rng=2)
        sizes = np.array([j[2] for j in path.jumps])
        assert np.all((sizes >= 0.36) | (sizes <= -0.34))

    def test_replay(self):
        spec = make()
        a = simulate(spec, 3.0, rng=RngStream.for_context(4, "simulate"))
        b = simulate(spec, 3.0, marks=a.marks)
        np.testing.assert_array_equal(a.values, b.values)

    def test_drift_only(self):
        spec = JumpDiffusionSpec(drift=(0.0, -1.0), alpha_plus=Regimes(3, 3), eps_minus=None, mass_plus=1e-300, x0=1.0)
        path = simulate(spec, 1.0, dt=1e-3, marks=Marks(np.empty(0), np.empty(0, np.int8), np.empty(0)))
        assert path.final == pytest.approx(math.exp(-1.0), abs=1e-6)

    def test_backends_agree(self):
        if "cython" not in kernels.available_backends():
            pytest.skip("extension not built")
        spec = make(drift=(0.2, -1.0, 0.0, -0.1))
        marks = draw_marks(spec, 4.0, 5)
        a = simulate(spec, 4.0, marks=marks, backend="python")
        b = simulate(spec, 4.0, marks=marks, backend="cython")
        np.testing.assert_allclose(a.values, b.values, atol=1e-12)

    def test_blow_up_reports_time(self):
        spec = make(drift=(0.0, 0.0, 1.0), x0=1.0)
        empty = Marks(np.empty(0), np.empty(0, np.int8), np.empty(0))
        with pytest.raises(BlowUpError) as info:
            simulate(spec, 2.0, dt=1e-4, marks=empty)
        # x' = x**2 from 1 explodes at t = 1
        assert info.value.time == pytest.approx(1.0, abs=1e-3)

    def test_csv(self, tmp_path):
        path = simulate(make(), 2.0, rng=3)
        path.to_csv(tmp_path / "p.csv")
        rows = list(csv.reader((tmp_path / "p.csv").open()))
        assert rows[0] == ["time", "value", "jump_flag"]
        body = [(float(t), float(x), int(f)) for t, x, f in rows[1:]]
        assert len(body) == path.times.size
        times = [r[0] for r in body]
        assert times == sorted(times)
        for i, (t, _, f) in enumerate(body):
            if f == 1:
                assert body[i - 1][0] == t and body[i - 1][2] == 0

    def test_bad_horizon(self):
        with pytest.raises(ValidationError):
            simulate(make(), 0.0, rng=1)
        with pytest.raises(ValidationError):
            simulate(make(), 1.0, dt=2.0, rng=1)


class TestCoupling:
    def test_identical_specs_zero(self):
        s = make()
        assert coupled_sup_rho(s, s, 5.0, rng=7) == 0.0
        _, _, gap = simulate_coupled(s, s, 5.0, rng=7)
        assert gap == 0.0

    def test_fast_and_path_versions_agree(self):
        s1, s2 = make(), make(warm=3.9, x0=0.1)
        marks = draw_marks(s1, 4.0, 9)
        _, _, gap = simulate_coupled(s1, s2, 4.0, marks=marks)
        assert coupled_sup_rho(s1, s2, 4.0, marks=marks) == pytest.approx(gap, abs=1e-12)

    def test_incompatible(self):
        with pytest.raises(CouplingError):
            coupled_sup_rho(make(), make(eps_plus=0.5), 1.0, rng=1)

    def test_gap_ordering(self):
        # larger initial gaps give larger mean sup distance under common marks
        means = []
        for gap in (0.05, 0.2, 0.5):
            s1, s2 = make(), make(x0=gap)
            means.append(coupled_study(s1, s2, 2.0, 200, seed=3)["mean_sup_rho"])
        assert means[0] < means[1] < means[2]

    def test_study_summary(self):
        s1, s2 = make(), make(warm=4.0)
        out = coupled_study(s1, s2, 1.0, 50, seed=1, bound=True)
        assert set(out) == {"replicates", "mean_sup_rho", "stderr", "delta", "g_of_delta"}
        assert 0 <= out["mean_sup_rho"] <= 1
        assert out["g_of_delta"] == G(out["delta"])
        again = coupled_study(s1, s2, 1.0, 50, seed=1, threads=4, bound=True)
        assert again == out

    def test_study_needs_two(self):
        with pytest.raises(ValidationError):
            coupled_study(make(), make(), 1.0, 1, seed=0)


class TestBounds:
    def test_identical_kernels(self):
        s = make()
        rep = bound_t1(s, s, 0.0, 0.0)
        assert rep.delta == 0.0 and rep.g_of_delta == 0.0

    def test_initial_gap_only(self):
        s = make()
        assert bound_t1(s, s, 0.0, 0.3).delta == pytest.approx(0.3)
        assert bound_t1(s, s, 0.0, 3.0).delta == 1.0

    def test_kernel_gap_is_plateau_sup(self):
        s1, s2 = make(warm=3.5, cold=3.0), make(warm=3.5, cold=3.4)
        rep = bound_t1(s1, s2, 0.0, 0.0)
        assert rep.delta == pytest.approx(kernel_t1(s1, s2, -5.0), rel=1e-12)
        assert kernel_t1(s1, s2, 5.0) == 0.0

    def test_t2_assembly(self):
        params = dict(rho0=0.1, drift_gap=0.2, abar_gap=0.1, diffusion_gap=0.0, sup_t2=0.3)
        rep = bound_t2(params)
        assert rep.delta == pytest.approx(0.1 + 0.04 + 0.01 + 0.0 + 0.3 + 0.09)
        assert rep.g_of_delta == pytest.approx(math.sqrt(rep.delta))

    @pytest.mark.parametrize("missing", BOUND_T2_TERMS)
    def test_t2_missing_term(self, missing):
        params = dict.fromkeys(BOUND_T2_TERMS, 0.1)
        del params[missing]
        with pytest.raises(IncompleteInputError, match=missing):
            bound_t2(params)

    def test_abar(self):
        # probability-normalised sides: mass above 1 is eps**alpha per side
        s = make(warm=3.0, cold=3.0)
        assert abar(s, 0.0) == pytest.approx(0.36**3 + 0.34**3)

    def test_sup_gap(self):
        assert sup_gap_on_grid(lambda x: x, lambda x: 2 * x, [0, 1, 3]) == 3


def test_spec_round_trip(tmp_path):
    s = make(drift=(0.1, -1.0), x0=0.2)
    d = spec_to_dict(s)
    (tmp_path / "s.json").write_text(json.dumps(d))
    assert spec_to_dict(load_spec(tmp_path / "s.json")) == d


def test_spec_constant_exponent_and_one_sided():
    s = spec_from_dict({"alpha_plus": 3.0, "eps_minus": None, "drift": -0.5})
    assert not s.two_sided and s.intensity == 1.0
    assert s.alpha_plus(10.0) == 3.0 and s.drift == (-0.5,)
    with pytest.raises(ValidationError):
        spec_from_dict({"drift": [0]})
