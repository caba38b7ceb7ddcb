"""scikit-learn style wrappers around the pooling functions.

Each estimator is fitted on one panel ``X`` of shape (n_experts, n_outcomes)
and learns a weight vector ``weights_`` over the experts. ``transform``
applies those weights to any panel from the same experts, so weights
learned on one event can be reused on another; ``fit_transform(X)``
returns the pooled opinion of ``X`` itself.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import check_panel
from .pooling import (
    DEFAULT_BMS_CLAMP,
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    PoolConfig,
    bms_weights,
    consensual_pool,
    linear_pool,
)


def _validate_panel(X) -> np.ndarray:
    X = check_array(X, dtype=float, ensure_min_features=2)
    return check_panel(X)


class _LinearPoolMixin(TransformerMixin):
    def transform(self, X):
        """Pool the rows of ``X`` with the fitted weights. Returns shape (n_outcomes,)."""
        check_is_fitted(self, "weights_")
        X = _validate_panel(X)
        if X.shape[0] != self.n_experts_:
            raise ValueError(
                f"X has {X.shape[0]} experts, the pool was fitted on {self.n_experts_}"
            )
        return linear_pool(X, self.weights_)

    def fit_transform(self, X, y=None):
        return self.fit(X, y).aggregate_


class ConsensualPool(_LinearPoolMixin, BaseEstimator):
    """Distance-weighted iterative pooling until the experts agree.

    Parameters
    ----------
    epsilon : float, default=1e-4
        Added to every distance before inverting it into a weight.
    tolerance : float, default=1e-9
        Stop once the largest half-L1 gap between any two experts is below this.
    max_iter : int, default=1_000_000
        Cap on revision rounds. Hitting it raises ``ConvergenceError``.

    Attributes
    ----------
    weights_ : ndarray of shape (n_experts,)
        Effective weights; ``weights_ @ X`` reproduces the consensus.
    aggregate_ : ndarray of shape (n_outcomes,)
    n_iter_ : int
    delta_trace_ : tuple of float
    result_ : ConsensusResult
    """

    def __init__(self, epsilon=DEFAULT_EPSILON, tolerance=DEFAULT_TOLERANCE,
                 max_iter=DEFAULT_MAX_ITERATIONS):
        self.epsilon = epsilon
        self.tolerance = tolerance
        self.max_iter = max_iter

    def fit(self, X, y=None):
        X = _validate_panel(X)
        config = PoolConfig(epsilon=self.epsilon, tolerance=self.tolerance,
                            max_iterations=self.max_iter)
        self.result_ = consensual_pool(X, config)
        self.weights_ = self.result_.effective_weights
        self.aggregate_ = self.result_.consensus
        self.n_iter_ = self.result_.iterations
        self.delta_trace_ = self.result_.delta_trace
        self.n_experts_, self.n_outcomes_ = X.shape
        return self


class AveragePool(_LinearPoolMixin, BaseEstimator):
    """Equal weights for every expert."""

    def fit(self, X, y=None):
        X = _validate_panel(X)
        self.n_experts_, self.n_outcomes_ = X.shape
        self.weights_ = np.full(self.n_experts_, 1.0 / self.n_experts_)
        self.aggregate_ = linear_pool(X, self.weights_)
        return self


class BMSPool(_LinearPoolMixin, BaseEstimator):
    """Weights inversely proportional to each expert's largest KL divergence to a peer.

    ``clamp`` replaces exact 0/1 probabilities before divergences are taken.
    """

    def __init__(self, clamp=DEFAULT_BMS_CLAMP):
        self.clamp = clamp

    def fit(self, X, y=None):
        X = _validate_panel(X)
        self.n_experts_, self.n_outcomes_ = X.shape
        self.weights_ = bms_weights(X, self.clamp)
        self.aggregate_ = linear_pool(X, self.weights_)
        return self
