import json
import math

import pytest

import homodyne as h


def test_builtin_ensembles():
    for name in h.BUILTIN_ENSEMBLES:
        e = h.make_builtin(name)
        assert e.label == name
        assert math.isclose(sum(e.priors), 1.0, abs_tol=1e-12)
    assert len(h.make_qam16()) == 16
    assert h.mean_photon_number(h.make_star()) == pytest.approx(4.2)


def test_custom_ensemble_and_errors():
    e = h.Ensemble("bpsk", [0.5, 0.5], [1 + 0j, -1 + 0j])
    assert len(e) == 2
    assert json.loads(h.ensemble_to_json(e))["label"] == "bpsk"
    with pytest.raises(ValueError):
        h.Ensemble("bad", [0.7], [0j])
    with pytest.raises(ValueError):
        h.make_builtin("nope")


def test_information():
    assert h.shannon_entropy([0.25, 0.75]) == pytest.approx(0.8112781244591328, abs=1e-12)
    assert h.capacity_heterodyne(2.0) == pytest.approx(math.log2(3.0))
    assert h.holevo_information(h.make_builtin("8psk")) == pytest.approx(2.449, abs=1e-3)


def test_trajectory_and_batch():
    cfg = h.SimConfig(dt=5e-3, t_max=2.0, seed=3)
    cfg.log_record = True
    r = h.run_trajectory(h.make_star(), 4, h.PolicySpec.lmmi(), cfg, seed=11)
    assert len(r.record) == cfg.steps
    assert r.total_gain == pytest.approx(r.initial_entropy - r.final_entropy, abs=1e-9)
    assert abs(r.projector_b) < 1.0

    a = h.run_batch(h.make_builtin("8psk"), h.PolicySpec.wiseman(), h.SimConfig(t_max=2.0, seed=5), 40)
    b = h.run_batch(h.make_builtin("8psk"), h.PolicySpec.wiseman(), h.SimConfig(t_max=2.0, seed=5), 40,
                    workers=4)
    assert a.mean_gain == b.mean_gain
    assert a.ci_half_width == pytest.approx(2 * a.std_gain / math.sqrt(40))
    assert json.loads(a.to_json())["n_trajectories"] == 40

    single = h.run_batch(h.make_star(), h.PolicySpec.lmmi(), h.SimConfig(t_max=1.0), 1)
    assert single.std_gain is None


def test_povm():
    samples = h.sample_povm(h.make_builtin("16qam"), h.PolicySpec.heterodyne(), h.SimConfig(t_max=10.0, seed=2), 20)
    assert len(samples) == 20
    assert max(abs(s.projector.xi) for s in samples) < 0.05
    p = h.projector_params(0j, -(1 - math.exp(-10.0)) + 0j)
    assert p.xi.real == pytest.approx(5.346562240168643, rel=1e-9)
    with pytest.raises(ValueError):
        h.projector_params(1 + 0j, -1 + 0j)


def test_policy_parse():
    assert h.PolicySpec.parse("wiseman").kind == h.PolicyKind.wiseman
    with pytest.raises(ValueError):
        h.PolicySpec.parse("random")
