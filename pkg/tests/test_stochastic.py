import json
import math

import numpy as np
import pytest
from scipy import stats

from walklab import analytic as an
from walklab import stochastic as st
from walklab.stochastic import ConstantP, ModelSpec, simulate


def _chi2_geometric(p, selection, nd, trials=200_000, seed=11):
    model = ModelSpec("c", 10, tuple(range(nd)), ConstantP(p), selection, count_start=False)
    res = simulate(model, 1, trials, seed)
    q = p if selection == "blind" else 1 - (1 - p) ** nd  # per-step continuation
    kmax = int(math.log(5 / trials) / math.log(q))
    obs = [res.length_histogram.get(k, 0) for k in range(kmax)]
    obs.append(trials - sum(obs))
    exp = [trials * q**k * (1 - q) for k in range(kmax)] + [trials * q**kmax]
    return stats.chisquare(obs, exp).pvalue


@pytest.mark.parametrize("p,selection,nd", [(0.6079, "blind", 10), (0.3, "blind", 4), (0.2, "survivor", 4)])
def test_constant_p_is_geometric(p, selection, nd):
    assert _chi2_geometric(p, selection, nd) > 1e-3


def test_iid_squarefree_mean():
    res = simulate(st.MODELS["squarefree-greedy-iid"](), 1, 400_000, 5)
    p = 6 / math.pi**2
    mean, var = an.geometric_expectation(p)
    assert abs(res.mean_length - 1 - mean) < 4 * res.standard_error
    assert abs(res.variance - var) / var < 0.03


def test_parallelism_does_not_change_output():
    model = st.MODELS["refined-greedy"]()
    a = simulate(model, 2, 100_001, 3, parallelism=1)
    b = simulate(model, 2, 100_001, 3, parallelism=2)
    assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)


def test_seed_changes_output():
    model = st.MODELS["greedy-cramer"]()
    assert simulate(model, 1, 5000, 1).mean_length != simulate(model, 1, 5000, 2).mean_length


@pytest.mark.parametrize("name,r", [("refined-greedy", 2), ("greedy", 1), ("refined-2mod3", 2)])
def test_mc_matches_exact_tree(name, r):
    model = st.MODELS[name]()
    exact, freq = st.exact_tree_mean(model, r)
    res = simulate(model, r, 200_000, 17)
    assert abs(res.mean_length - exact) < 4 * res.standard_error
    for d, f in freq.items():
        assert abs(res.digit_frequency.get(d, 0.0) - f) < 0.01


def test_cramer_models_match_series():
    # blind selection is the one-candidate series, survivor the four-candidate one
    g = simulate(st.MODELS["greedy-cramer"](), 1, 200_000, 8)
    e_g = an.expected_length_series(an.SeriesParams(10, 1, 1))
    assert abs(g.mean_length - e_g) < 4 * g.standard_error
    r = simulate(st.MODELS["refined-cramer"](), 1, 200_000, 8)
    e_r = an.expected_length_series(an.SeriesParams(10, 1, 4, 10 / 4))
    assert abs(r.mean_length - e_r) < 4 * r.standard_error


def test_start_condition_respected():
    res = simulate(st.MODELS["greedy-2mod3"](), 1, 20_000, 1)
    assert set(res.digit_counts) <= {3, 9}


def test_forced_zero_counts_rounds():
    res = simulate(st.MODELS["squarefree-refined"](), 1, 200_000, 4)
    assert abs(res.mean_length - an.refined_squarefree_expectation()) < 4 * res.standard_error
    # every recorded round appends a 0 and an odd digit
    assert res.digit_counts[0] == sum(v for d, v in res.digit_counts.items() if d)


def test_weights_sum():
    for b, s in [(10, 1), (10, 4), (3, 5)]:
        assert st.start_weight_sum(b, s) == pytest.approx(sum(an.start_weights(b, s)))


def test_bad_inputs():
    with pytest.raises(ValueError):
        simulate(st.MODELS["greedy-cramer"](), None, 10, 0)
    with pytest.raises(ValueError):
        simulate(st.MODELS["greedy-cramer"](), 1, 0, 0)
    with pytest.raises(ValueError):
        ModelSpec("x", 10, (), ConstantP(0.5))
    with pytest.raises(ValueError):
        ModelSpec("x", 10, (1,), ConstantP(1.5))
