import logging
import warnings

import numpy as np
import pandas as pd
from scipy.optimize import brentq
from scipy.special import expit
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import LogisticRegression
from sklearn.metrics import log_loss
from sklearn.model_selection import StratifiedGroupKFold, StratifiedKFold

from ckspace.config import EngagementConfig
from ckspace.engagement.features import engagement_columns, extract_engagement_features
from ckspace.engagement.timescale import timescale_split
from ckspace.errors import ValidationError
from ckspace.utils.internal import read_json, write_json


log = logging.getLogger(__name__)


forgetting_columns = ["decay", "interference"]


class ErpModel:
    """
    Represents a fitted error repetition model: a logistic model of the
    probability that an error is committed again at the next
    presentation of its task.

    Parameters
    ----------
    feature_names: List[:class:`str`]
        The inputs, in the order :func:`~.predict_erp` expects them.
    weights: List[:class:`float`]
        One weight per input, on the raw input scale.
    intercept: :class:`float`
        The intercept.
    penalty: :class:`float`
        The chosen L1 penalty.
    fill: Optional[List[:class:`float`]]
        The value that replaces a missing input. Defaults to zeros.
    """

    __slots__ = ("feature_names", "weights", "intercept", "penalty", "fill")

    def __init__(self, feature_names, weights, intercept, penalty, fill=None):
        weights = np.asarray(weights, dtype=float)

        if len(feature_names) != weights.size:
            raise ValidationError(
                f"{len(feature_names)} feature name(s) for {weights.size} weight(s)"
            )

        self.feature_names = list(feature_names)
        self.weights = weights
        self.intercept = float(intercept)
        self.penalty = float(penalty)
        self.fill = np.zeros(weights.size) if fill is None else np.asarray(fill, dtype=float)

    def __repr__(self):
        return f"<ErpModel features={len(self.feature_names)} nonzero={self.support().size} penalty={self.penalty:g}>"

    def support(self):
        """
        Returns the indices of the non-zero weights.
        """

        return np.flatnonzero(self.weights)

    def to_dict(self):
        return {
            "feature_names": self.feature_names,
            "weights": [float(w) for w in self.weights],
            "intercept": self.intercept,
            "penalty": self.penalty,
            "fill": [float(f) for f in self.fill],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["feature_names"], data["weights"], data["intercept"], data["penalty"], data.get("fill"))
        except (KeyError) as e:
            raise ValidationError(f"model document missing field {e.args[0]!r}") from e

    def save(self, path):
        write_json(self.to_dict(), path)

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))


def cv_folds(labels, groups=None, folds=10, seed=0):
    """
    Assigns rows to cross-validation folds.

    Folds are stratified by label. With ``groups`` every group, usually
    a student, falls into a single fold. The number of folds is reduced
    when a class or the groups are too few.

    Returns
    -------
    List[:class:`numpy.ndarray`]
        The row indices of each fold. Every row appears in exactly one.
    """

    labels = np.asarray(labels)
    smallest = int(np.bincount(labels.astype(int)).min())
    n = min(folds, smallest)

    if groups is not None:
        groups = np.asarray(groups)
        n = min(n, np.unique(groups).size)

    if n < 2:
        raise ValidationError("too few rows of a class or too few groups to cross-validate")

    if groups is not None:
        splitter = StratifiedGroupKFold(n_splits=n, shuffle=True, random_state=seed)
        splits = splitter.split(np.zeros(labels.size), labels, groups)
    else:
        splitter = StratifiedKFold(n_splits=n, shuffle=True, random_state=seed)
        splits = splitter.split(np.zeros(labels.size), labels)

    return [test for (_, test) in splits]


def _design(X, feature_names):
    if isinstance(X, pd.DataFrame):
        return X.to_numpy(dtype=float), list(X.columns)

    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValidationError("features must be a two-dimensional table")

    names = feature_names or [f"x{i}" for i in range(X.shape[1])]
    return X, list(names)


def _l1_logistic(penalty):
    # liblinear penalizes the intercept; it is re-solved unpenalized after the fit
    return LogisticRegression(penalty="l1", solver="liblinear", C=1.0 / penalty, intercept_scaling=10.0, random_state=0)


def _intercept(scores, labels):
    target = labels.mean()

    def excess(b):
        return expit(scores + b).mean() - target

    return brentq(excess, -60.0, 60.0)


def fit_erp(X, labels, groups=None, config=None, seed=0, feature_names=None):
    """
    Fits a sparse logistic model of error repetition.

    The L1 penalty is chosen from a log-spaced grid by cross-validated
    log-loss. Among penalties whose loss is within one standard error of
    the best, the strongest is chosen. Inputs are standardized for the
    fit; the returned weights are on the raw scale and the intercept is
    re-solved without penalty.

    Parameters
    ----------
    X: Union[:class:`pandas.DataFrame`, :class:`numpy.ndarray`]
        The inputs, one row per error. Missing values are replaced by
        the column mean.
    labels: Sequence[:class:`int`]
        1 if the error was repeated, 0 otherwise.
    groups: Optional[Sequence[Any]]
        The student of each row. Rows of a student share a fold.
    config: Optional[:class:`~.EngagementConfig`]
        The penalty grid and the number of folds.
    seed: :class:`int`
        The fold assignment seed.
    feature_names: Optional[List[:class:`str`]]
        The input names when ``X`` is an array.

    Returns
    -------
    :class:`~.ErpModel`
        The model.

    Raises
    ------
    :exc:`~.ValidationError`
        The labels hold a single class.
    """

    config = config or EngagementConfig()
    X, names = _design(X, feature_names)
    y = np.asarray(labels, dtype=int)

    if np.unique(y).size < 2:
        raise ValidationError("error repetition labels must contain both classes")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fill = np.nanmean(X, axis=0)

    fill = np.where(np.isfinite(fill), fill, 0.0)
    X = np.where(np.isnan(X), fill, X)

    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    Z = (X - mean) / scale

    penalties = np.logspace(np.log10(config.min_penalty), np.log10(config.max_penalty), config.penalties)
    folds = cv_folds(y, groups, config.folds, seed)
    losses = np.zeros((len(folds), penalties.size))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)

        for (f, test) in enumerate(folds):
            train = np.setdiff1d(np.arange(y.size), test)

            for (i, penalty) in enumerate(penalties):
                if np.unique(y[train]).size < 2:
                    p = np.full(test.size, y[train].mean())
                else:
                    p = _l1_logistic(penalty).fit(Z[train], y[train]).predict_proba(Z[test])[:, 1]

                losses[f, i] = log_loss(y[test], p, labels=[0, 1])

        mean_loss = losses.mean(axis=0)
        error = losses.std(axis=0, ddof=1) / np.sqrt(len(folds))

        best = int(np.argmin(mean_loss))
        chosen = int(np.flatnonzero(mean_loss <= mean_loss[best] + error[best]).max())
        penalty = float(penalties[chosen])

        fitted = _l1_logistic(penalty).fit(Z, y)

    weights = fitted.coef_[0] / scale
    intercept = _intercept(X @ weights, y)

    model = ErpModel(names, weights, intercept, penalty, fill)
    log.info(
        "fitted error repetition model: penalty %g, %d of %d weight(s) non-zero",
        penalty,
        model.support().size,
        weights.size,
    )

    return model


def predict_erp(model, features, engagement=(), forgetting=()):
    """
    Predicts the probability that an error is repeated.

    Parameters
    ----------
    model: :class:`~.ErpModel`
        The model.
    features: Sequence[:class:`float`]
        The split features.
    engagement: Sequence[:class:`float`]
        The engagement inputs, e.g. ``P(Focused)`` and ``P(Receptive)``.
    forgetting: Sequence[:class:`float`]
        The forgetting inputs, e.g. decay and interference.

    Returns
    -------
    :class:`float`
        The probability, in ``(0, 1)``.

    Raises
    ------
    :exc:`~.ValidationError`
        The inputs do not match the model's layout.
    """

    x = np.concatenate(
        [np.ravel(np.asarray(v, dtype=float)) for v in (features, engagement, forgetting)]
    )

    if x.size != model.weights.size:
        raise ValidationError(f"model expects {model.weights.size} input(s), got {x.size}")

    x = np.where(np.isnan(x), model.fill, x)

    return float(expit(x @ model.weights + model.intercept))


def erp_dataset(sessions, slow_alpha=None, estimates=None):
    """
    Builds the error repetition training table from sessions.

    Every wrong answer whose task is presented again later gives one
    row, labelled 1 if the next answer on the task is wrong as well.
    A row holds the split engagement features at the error, the
    forgetting inputs at the repetition and, when ``estimates`` is
    given, the engagement state at the error.

    Parameters
    ----------
    sessions: Iterable[:class:`~.Session`]
        The sessions.
    slow_alpha: Optional[:class:`float`]
        The trend smoothing factor.
    estimates: Optional[Callable[[:class:`~.SplitFeatures`], List[:class:`~.EngagementEstimate`]]]
        Produces engagement estimates for a student's split features.

    Returns
    -------
    :class:`pandas.DataFrame`
        Columns ``student_id``, ``label``, the split feature columns,
        optionally ``p_focused`` and ``p_receptive``, and the
        forgetting columns.
    """

    students = dict()
    for session in sessions:
        students.setdefault(session.student_id, list()).extend(session.events)

    frames = list()

    for (student, events) in sorted(students.items()):
        events.sort(key=lambda e: e.t)
        features = extract_engagement_features(events)

        if features.empty:
            continue

        split = timescale_split(features[engagement_columns], slow_alpha)
        table = split.frame()

        if estimates is not None:
            states = estimates(split)
            table["p_focused"] = [s.p_focused for s in states]
            table["p_receptive"] = [s.p_receptive for s in states]

        tasks = list(features["task"])
        correct = list(features["correct"])
        rows = list()

        for (i, task) in enumerate(tasks):
            if correct[i]:
                continue

            later = next((j for j in range(i + 1, len(tasks)) if tasks[j] == task), None)
            if later is None:
                continue

            row = table.iloc[i].to_dict()
            row["decay"] = features["time_between_repetitions"].iloc[later]
            row["interference"] = features["inputs_between_repetitions"].iloc[later]
            row["label"] = int(not correct[later])
            row["student_id"] = student
            rows.append(row)

        if rows:
            frames.append(pd.DataFrame(rows))

    if not frames:
        return pd.DataFrame(columns=["student_id", "label"])

    data = pd.concat(frames, ignore_index=True)
    columns = ["student_id", "label"] + [c for c in data.columns if c not in ("student_id", "label", *forgetting_columns)]

    return data[columns + forgetting_columns]


__all__ = [
    "ErpModel",
    "cv_folds",
    "erp_dataset",
    "fit_erp",
    "forgetting_columns",
    "predict_erp",
]
