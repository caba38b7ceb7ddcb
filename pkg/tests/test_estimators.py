import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conpool.estimators import AveragePool, BMSPool, ConsensualPool
from conpool.pooling import ConvergenceError


def test_consensual_estimator_worked_example(example_panel):
    est = ConsensualPool(epsilon=0.01)
    out = est.fit_transform(example_panel)
    np.testing.assert_allclose(out, [0.3175, 0.6825], atol=1e-3)
    np.testing.assert_allclose(est.transform(example_panel), out, atol=1e-9)
    assert est.n_iter_ == len(est.delta_trace_) - 1
    assert est.weights_.shape == (3,)


def test_get_set_params_and_clone():
    est = ConsensualPool(epsilon=0.01, max_iter=50)
    assert est.get_params() == {"epsilon": 0.01, "tolerance": 1e-9, "max_iter": 50}
    est.set_params(epsilon=0.02)
    assert clone(est).epsilon == 0.02
    assert BMSPool(clamp=0.05).get_params() == {"clamp": 0.05}
    assert AveragePool().get_params() == {}


def test_transform_reuses_learned_weights(example_panel):
    est = AveragePool().fit(example_panel)
    other = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
    np.testing.assert_allclose(est.transform(other), [1 / 3, 2 / 3])
    with pytest.raises(ValueError):
        est.transform(other[:2])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        BMSPool().transform([[0.5, 0.5], [0.4, 0.6]])


def test_bms_estimator_matches_function(example_panel):
    from conpool.pooling import bms_pool

    np.testing.assert_allclose(BMSPool().fit_transform(example_panel), bms_pool(example_panel))


def test_estimators_validate_input():
    with pytest.raises(ValueError):
        AveragePool().fit([[0.5, 0.6]])
    with pytest.raises(ValueError):
        AveragePool().fit([[1.0], [1.0]])


def test_consensual_estimator_raises_on_cap(example_panel):
    with pytest.raises(ConvergenceError):
        ConsensualPool(epsilon=0.01, max_iter=1).fit(example_panel)
