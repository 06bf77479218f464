import logging
import warnings

import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from ckspace.config import EngagementConfig
from ckspace.errors import ValidationError


log = logging.getLogger(__name__)


focused_features = ["input_rate_variance", "minor_error"]
receptive_features = ["help_rate", "correct"]

_min_transition = 1e-6


class GaussianHmm:
    """
    Represents a two-state hidden Markov chain with diagonal Gaussian
    emissions. Missing observations contribute no evidence.

    Parameters
    ----------
    start: Sequence[:class:`float`]
        The initial state distribution.
    transition: Sequence[Sequence[:class:`float`]]
        The row-stochastic transition matrix.
    means: Sequence[Sequence[:class:`float`]]
        The emission means, one row per state.
    variances: Sequence[Sequence[:class:`float`]]
        The emission variances, one row per state.
    """

    __slots__ = ("start", "transition", "means", "variances")

    def __init__(self, start, transition, means, variances):
        self.start = np.asarray(start, dtype=float)
        self.transition = np.asarray(transition, dtype=float)
        self.means = np.atleast_2d(np.asarray(means, dtype=float))
        self.variances = np.atleast_2d(np.asarray(variances, dtype=float))

        if self.transition.shape != (2, 2) or self.start.shape != (2,):
            raise ValidationError("a state chain has exactly two states")

        if self.means.shape != self.variances.shape or self.means.shape[0] != 2:
            raise ValidationError("emission means and variances must have one row per state")

        if (self.variances <= 0).any():
            raise ValidationError("emission variances must be positive")

    def __repr__(self):
        return f"<GaussianHmm features={self.means.shape[1]} stay={np.diag(self.transition).round(3).tolist()}>"

    def _log_emissions(self, X):
        X = np.asarray(X, dtype=float).reshape(-1, self.means.shape[1])
        missing = np.isnan(X)[:, None, :]

        lp = norm.logpdf(
            np.where(missing, 0.0, X[:, None, :]),
            self.means[None, :, :],
            np.sqrt(self.variances)[None, :, :],
        )

        return np.where(missing, 0.0, lp).sum(axis=2)

    def _lattices(self, X):
        log_b = self._log_emissions(X)
        log_a = np.log(self.transition)
        n = log_b.shape[0]

        alpha = np.empty((n, 2))
        beta = np.zeros((n, 2))

        alpha[0] = np.log(self.start) + log_b[0]
        for t in range(1, n):
            alpha[t] = logsumexp(alpha[t - 1][:, None] + log_a, axis=0) + log_b[t]

        for t in range(n - 2, -1, -1):
            beta[t] = logsumexp(log_a + (log_b[t + 1] + beta[t + 1])[None, :], axis=1)

        return log_b, alpha, beta, float(logsumexp(alpha[-1]))

    def log_likelihood(self, X):
        return self._lattices(X)[3]

    def posteriors(self, X):
        """
        Returns the smoothed state posteriors of a sequence, one row per
        step.
        """

        (_, alpha, beta, total) = self._lattices(X)
        return np.exp(alpha + beta - total)

    @classmethod
    def initial(cls, sequences, variance_floor=1e-6):
        """
        Constructs a starting point for fitting: state 0 holds the steps
        whose first feature is below its median, state 1 the rest.
        """

        X = np.vstack(sequences)
        key = X[:, 0]
        split = np.nanmedian(key) if np.isfinite(key).any() else 0.0
        low = key <= split

        means = np.zeros((2, X.shape[1]))
        variances = np.zeros((2, X.shape[1]))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)

            for (state, rows) in enumerate((X[low], X[~low])):
                if not np.isfinite(rows).any():
                    rows = X

                means[state] = np.nan_to_num(np.nanmean(rows, axis=0))
                variances[state] = np.nan_to_num(np.nanvar(rows, axis=0), nan=1.0)

        return cls([0.5, 0.5], [[0.9, 0.1], [0.1, 0.9]], means, np.maximum(variances, variance_floor))

    def fit(self, sequences, max_iter=100, tolerance=1e-6, variance_floor=1e-6):
        """
        Re-estimates the chain by expectation maximization.

        Parameters
        ----------
        sequences: List[:class:`numpy.ndarray`]
            The observation sequences, one row per step.
        max_iter: :class:`int`
            The maximum number of iterations.
        tolerance: :class:`float`
            The log-likelihood change that ends fitting.
        variance_floor: :class:`float`
            The smallest emission variance.

        Returns
        -------
        :class:`~.GaussianHmm`
            The fitted chain. ``self`` is left unchanged.
        """

        model = self
        previous = -np.inf

        for iteration in range(max_iter):
            start = np.zeros(2)
            transition = np.zeros((2, 2))
            weight = np.zeros_like(model.means)
            first = np.zeros_like(model.means)
            second = np.zeros_like(model.means)
            total = 0.0

            log_a = np.log(model.transition)

            for X in sequences:
                X = np.asarray(X, dtype=float)
                (log_b, alpha, beta, ll) = model._lattices(X)
                gamma = np.exp(alpha + beta - ll)
                total += ll

                start += gamma[0]

                if X.shape[0] > 1:
                    xi = alpha[:-1, :, None] + log_a[None, :, :] + (log_b[1:] + beta[1:])[:, None, :] - ll
                    transition += np.exp(xi).sum(axis=0)

                seen = ~np.isnan(X)
                values = np.where(seen, X, 0.0)

                weight += gamma.T @ seen
                first += gamma.T @ values
                second += gamma.T @ (values ** 2)

            with np.errstate(invalid="ignore", divide="ignore"):
                means = np.where(weight > 0, first / weight, model.means)
                variances = np.where(weight > 0, second / weight - means ** 2, model.variances)

            transition = np.maximum(transition, _min_transition)
            transition /= transition.sum(axis=1, keepdims=True)
            start = np.maximum(start / start.sum(), _min_transition)

            model = GaussianHmm(start / start.sum(), transition, means, np.maximum(variances, variance_floor))

            if abs(total - previous) <= tolerance * max(1.0, abs(total)):
                break

            previous = total

        log.debug("state chain fitted after %d iteration(s), log-likelihood %.4f", iteration + 1, total)

        return model

    def permuted(self):
        """
        Returns the chain with its two states swapped.
        """

        order = [1, 0]
        return GaussianHmm(
            self.start[order],
            self.transition[np.ix_(order, order)],
            self.means[order],
            self.variances[order],
        )

    def to_dict(self):
        return {
            "start": self.start.tolist(),
            "transition": self.transition.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["start"], data["transition"], data["means"], data["variances"])
        except (KeyError) as e:
            raise ValidationError(f"state chain document missing field {e.args[0]!r}") from e


class EngagementEstimate:
    """
    Represents the engagement state at one step.

    Attributes
    ----------
    joint: :class:`numpy.ndarray`
        The 2×2 distribution over (focused, not focused) × (receptive,
        not receptive). Sums to 1.
    """

    __slots__ = ("joint",)

    def __init__(self, joint):
        joint = np.asarray(joint, dtype=float)
        self.joint = joint / joint.sum()

    def __repr__(self):
        return f"<EngagementEstimate p_focused={self.p_focused:.3f} p_receptive={self.p_receptive:.3f}>"

    @property
    def p_focused(self):
        """
        The probability of the focused state.

        :type: :class:`float`
        """

        return float(self.joint[0].sum())

    @property
    def p_receptive(self):
        """
        The probability of the receptive state.

        :type: :class:`float`
        """

        return float(self.joint[:, 0].sum())


class EngagementModel:
    """
    Represents the fitted engagement state model: one chain for being
    focused, one for being receptive, and a table re-weighting their
    independent product by how often the states co-occurred in the
    training data.

    Parameters
    ----------
    focused: :class:`~.GaussianHmm`
        The focused chain. State 0 is focused.
    receptive: :class:`~.GaussianHmm`
        The receptive chain. State 0 is receptive.
    lift: Optional[Sequence[Sequence[:class:`float`]]]
        The co-occurrence over the product of marginals. Defaults to
        all ones.
    """

    __slots__ = ("focused", "receptive", "lift")

    def __init__(self, focused, receptive, lift=None):
        self.focused = focused
        self.receptive = receptive
        self.lift = np.ones((2, 2)) if lift is None else np.asarray(lift, dtype=float)

    def __repr__(self):
        return f"<EngagementModel lift={self.lift.round(3).tolist()}>"

    def to_dict(self):
        return {
            "focused": self.focused.to_dict(),
            "receptive": self.receptive.to_dict(),
            "lift": self.lift.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                GaussianHmm.from_dict(data["focused"]),
                GaussianHmm.from_dict(data["receptive"]),
                data.get("lift"),
            )
        except (KeyError) as e:
            raise ValidationError(f"engagement model document missing field {e.args[0]!r}") from e


def _observations(split, features):
    return split.local[features].to_numpy(dtype=float)


def fit_engagement(series, config=None):
    """
    Fits the engagement state model.

    Parameters
    ----------
    series: Iterable[:class:`~.SplitFeatures`]
        Split feature series, e.g. one per student.
    config: Optional[:class:`~.EngagementConfig`]
        The iteration limit.

    Returns
    -------
    :class:`~.EngagementModel`
        The model.

    Raises
    ------
    :exc:`~.ValidationError`
        No series has two or more steps.
    """

    config = config or EngagementConfig()
    series = [s for s in series if len(s) >= 2]

    if not series:
        raise ValidationError("engagement fitting needs a series with at least two steps")

    focused_x = [_observations(s, focused_features) for s in series]
    receptive_x = [_observations(s, receptive_features) for s in series]

    focused = GaussianHmm.initial(focused_x).fit(focused_x, config.hmm_iter)
    receptive = GaussianHmm.initial(receptive_x).fit(receptive_x, config.hmm_iter)

    # focused: steady input; receptive: answers better than the trend
    if focused.means[0, 0] > focused.means[1, 0]:
        focused = focused.permuted()

    if receptive.means[0, 1] < receptive.means[1, 1]:
        receptive = receptive.permuted()

    co = np.zeros((2, 2))
    steps = 0
    for (f, r) in zip(focused_x, receptive_x):
        pf = focused.posteriors(f)
        pr = receptive.posteriors(r)
        co += pf.T @ pr
        steps += pf.shape[0]

    co /= steps
    lift = co / np.outer(co.sum(axis=1), co.sum(axis=0))

    log.info("fitted engagement model on %d series, %d step(s)", len(series), steps)

    return EngagementModel(focused, receptive, lift)


def estimate_engagement(split, model=None):
    """
    Estimates the engagement state at every step of a series.

    Parameters
    ----------
    split: :class:`~.SplitFeatures`
        The split features of a session or a student.
    model: Optional[:class:`~.EngagementModel`]
        The model. ``None`` fits one on ``split`` alone.

    Returns
    -------
    List[:class:`~.EngagementEstimate`]
        One estimate per step. A series shorter than two steps gets
        uniform estimates.
    """

    n = len(split)

    if n < 2:
        return [EngagementEstimate(np.full((2, 2), 0.25)) for _ in range(n)]

    if model is None:
        model = fit_engagement([split])

    pf = model.focused.posteriors(_observations(split, focused_features))
    pr = model.receptive.posteriors(_observations(split, receptive_features))

    return [EngagementEstimate(model.lift * np.outer(f, r)) for (f, r) in zip(pf, pr)]


__all__ = [
    "EngagementEstimate",
    "EngagementModel",
    "GaussianHmm",
    "estimate_engagement",
    "fit_engagement",
    "focused_features",
    "receptive_features",
]
