import collections
import logging
import math

import numpy as np
import pandas as pd
from scipy.special import expit, logit
from scipy.stats import norm

from ckspace.config import ScreenerConfig
from ckspace.errors import ParseError, ValidationError
from ckspace.screener.features import ScreenFeature
from ckspace.screener.selection import _check_classes, _labels
from ckspace.utils.internal import Enum, read_json, write_json


log = logging.getLogger(__name__)


class ScreenLabel(Enum):
    """
    Represents the outcome of a screening.

    Attributes
    ----------
    at_risk
        The posterior probability of dyscalculia is at least 0.5.
    not_at_risk
        Otherwise.
    """

    at_risk = "AtRisk"
    not_at_risk = "NotAtRisk"


class ScreenerModel:
    """
    Represents a naive Bayes screener with Gaussian class conditionals
    over an ordered list of features.

    Parameters
    ----------
    features: List[:class:`~.ScreenFeature`]
        The features in test order.
    means: array_like
        The ``(n, 2)`` class means, column 0 for dyscalculia, column 1
        for typical development.
    variances: array_like
        The ``(n, 2)`` class variances.
    prior: :class:`float`
        The prior probability of dyscalculia.
    epsilon: :class:`float`
        The posterior change below which a feature is uninformative.
    patience: :class:`int`
        The number of consecutive uninformative features that end a test.
    """

    __slots__ = ("features", "means", "variances", "prior", "epsilon", "patience")

    def __init__(self, features, means, variances, prior, epsilon=0.01, patience=3):
        self.features = list(features)
        self.means = np.asarray(means, dtype=float).reshape(len(self.features), 2)
        self.variances = np.asarray(variances, dtype=float).reshape(len(self.features), 2)
        self.prior = float(prior)
        self.epsilon = float(epsilon)
        self.patience = int(patience)

        if not 0.0 < self.prior < 1.0:
            raise ValidationError(f"the prior must lie in (0, 1), got {self.prior}")

        if np.any(self.variances <= 0.0):
            raise ValidationError("class variances must be positive")

        ids = [f.id for f in self.features]
        if len(set(ids)) != len(ids):
            raise ValidationError("feature ids must be unique")

    def __len__(self):
        return len(self.features)

    def __repr__(self):
        return f"<ScreenerModel features={len(self.features)} prior={self.prior:.3f} minutes={self.minutes:.1f}>"

    @property
    def minutes(self):
        """
        The minutes of a test that consumes every feature.

        :type: :class:`float`
        """

        return float(sum(f.time_min for f in self.features))

    def log_ratio(self, i, value):
        """
        Returns the log-likelihood ratio of dyscalculia against typical
        development that feature ``i`` contributes. A missing value
        contributes 0.
        """

        if value is None or np.isnan(value):
            return 0.0

        (m, v) = (self.means[i], self.variances[i])
        (a, b) = norm.logpdf(value, loc=m, scale=np.sqrt(v))

        return float(a - b)

    def to_dict(self):
        return {
            "version": 1,
            "features": [{**f.to_dict(), "group": f.group, "p_value": f.p_value} for f in self.features],
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "prior": self.prior,
            "epsilon": self.epsilon,
            "patience": self.patience,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            features = [
                ScreenFeature.from_id(f["id"], f["time_min"], f.get("group_hint"))._replace(
                    group=f.get("group"), p_value=f.get("p_value")
                )
                for f in data["features"]
            ]

            return cls(features, data["means"], data["variances"], data["prior"], data["epsilon"], data["patience"])
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed screener model: {e}") from e

    def save(self, path):
        write_json(self.to_dict(), path)

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))


ScreenResult = collections.namedtuple("ScreenResult", ["label", "posterior", "trace", "features", "minutes"])
ScreenResult.__doc__ = """
Represents the outcome of screening one student.

Attributes
----------
label: :class:`~.ScreenLabel`
    The outcome.
posterior: :class:`float`
    The final posterior probability of dyscalculia.
trace: List[:class:`float`]
    The prior followed by the posterior after each consumed feature.
features: List[:class:`str`]
    The ids of the consumed features.
minutes: :class:`float`
    The acquisition time of the consumed features.
"""


def fit_screener(frame, labels, features=None, config=None):
    """
    Fits the class conditionals of a screener.

    Parameters
    ----------
    frame: :class:`pandas.DataFrame`
        One row per student, one column per feature id. Missing values
        are skipped.
    labels: array_like
        Whether each student has dyscalculia.
    features: Optional[List[:class:`~.ScreenFeature`]]
        The features in test order, e.g. from :func:`~.select_features`.
        Defaults to every column in column order.
    config: Optional[:class:`~.ScreenerConfig`]
        The variance floor and the stopping rule.

    Returns
    -------
    :class:`~.ScreenerModel`
        The screener. The priors are the class frequencies.

    Raises
    ------
    :exc:`~.ValidationError`
        Only one class is present, or a feature is not a column.
    """

    config = config or ScreenerConfig()
    labels = _labels(labels, len(frame))
    _check_classes(labels, 1)

    if features is None:
        features = [ScreenFeature.from_id(c) for c in frame.columns]

    missing = [f.id for f in features if f.id not in frame.columns]
    if missing:
        raise ValidationError(f"feature(s) missing from the data: {', '.join(missing)}")

    means = np.zeros((len(features), 2))
    variances = np.zeros((len(features), 2))

    for (i, f) in enumerate(features):
        values = frame[f.id].to_numpy(dtype=float)
        pooled = values[~np.isnan(values)]

        for (j, members) in enumerate((labels, ~labels)):
            observed = values[members]
            observed = observed[~np.isnan(observed)]

            if len(observed) == 0:
                log.warning("%s: no observation in class %d, using the pooled distribution", f.id, j)
                observed = pooled if len(pooled) else np.zeros(1)

            means[i, j] = observed.mean()
            variances[i, j] = max(observed.var(), config.variance_floor)

    model = ScreenerModel(features, means, variances, labels.mean(), config.epsilon, config.patience)
    log.info("fitted %r", model)

    return model


def _stream(values, model):
    if isinstance(values, (dict, pd.Series)):
        for f in model.features:
            yield f.id, values.get(f.id, np.nan)

        return

    for (i, (id, value)) in enumerate(values):
        if i >= len(model.features):
            raise ValidationError(f"feature {id!r} arrived after the last feature of the test")

        if id != model.features[i].id:
            raise ValidationError(f"feature {id!r} arrived out of order, expected {model.features[i].id!r}")

        yield id, value


def screen(values, model, config=None):
    """
    Screens one student.

    Features are consumed in test order and every feature updates the
    posterior probability of dyscalculia. The test stops once
    :attr:`~.ScreenerConfig.patience` consecutive features changed the
    posterior by less than :attr:`~.ScreenerConfig.epsilon`, or when the
    features run out. A missing feature changes nothing and therefore
    counts as uninformative.

    Parameters
    ----------
    values: Union[Mapping[:class:`str`, :class:`float`], Iterable[Tuple[:class:`str`, :class:`float`]]]
        The feature values: a mapping from feature id, or ``(id, value)``
        pairs arriving in test order.
    model: :class:`~.ScreenerModel`
        The screener.
    config: Optional[:class:`~.ScreenerConfig`]
        Overrides the model's stopping rule.

    Returns
    -------
    :class:`~.ScreenResult`
        The outcome.

    Raises
    ------
    :exc:`~.ValidationError`
        A feature arrived out of test order.
    """

    epsilon = model.epsilon if config is None else config.epsilon
    patience = model.patience if config is None else config.patience

    prior = logit(model.prior)
    ratios = list()
    trace = [model.prior]
    consumed = list()
    quiet = 0

    for (i, (id, value)) in enumerate(_stream(values, model)):
        ratios.append(model.log_ratio(i, value))
        consumed.append(id)

        # an exactly rounded sum keeps the posterior independent of the order
        posterior = float(expit(prior + math.fsum(ratios)))

        quiet = quiet + 1 if abs(posterior - trace[-1]) < epsilon else 0
        trace.append(posterior)

        if quiet >= patience:
            break

    posterior = trace[-1]
    label = ScreenLabel.at_risk if posterior >= 0.5 else ScreenLabel.not_at_risk
    minutes = float(sum(model.features[i].time_min for i in range(len(consumed))))

    log.debug("%s at %.3f after %d feature(s)", label.value, posterior, len(consumed))

    return ScreenResult(label, posterior, trace, consumed, minutes)


Evaluation = collections.namedtuple(
    "Evaluation",
    ["sensitivity", "specificity", "accuracy", "mean_minutes", "mean_features", "classified_by", "results"],
)
Evaluation.__doc__ = """
Represents screening results on held-out students.

Attributes
----------
sensitivity: :class:`float`
    The share of students with dyscalculia labelled at risk. ``NaN``
    without such students.
specificity: :class:`float`
    The share of other students labelled not at risk.
accuracy: :class:`float`
    The share of correct labels.
mean_minutes: :class:`float`
    The mean test duration.
mean_features: :class:`float`
    The mean number of consumed features.
classified_by: :class:`float`
    The share of students whose test ended within the given minute.
results: :class:`pandas.DataFrame`
    One row per student: ``student_id``, ``label``, ``posterior``,
    ``n_features`` and ``minutes``.
"""


def evaluate(model, frame, labels, config=None, minute=None):
    """
    Screens held-out students and summarizes the outcome.

    Parameters
    ----------
    model: :class:`~.ScreenerModel`
        The screener.
    frame: :class:`pandas.DataFrame`
        One row per student indexed by student id, one column per
        feature id.
    labels: array_like
        Whether each student has dyscalculia.
    config: Optional[:class:`~.ScreenerConfig`]
        Overrides the model's stopping rule.
    minute: Optional[:class:`float`]
        The minute :attr:`~.Evaluation.classified_by` is taken at.
        Defaults to a third of the full test.

    Returns
    -------
    :class:`~.Evaluation`
        The summary.

    Raises
    ------
    :exc:`~.ValidationError`
        No student is given.
    """

    if len(frame) == 0:
        raise ValidationError("cannot evaluate on an empty set")

    labels = _labels(labels, len(frame))
    minute = model.minutes / 3.0 if minute is None else minute

    rows = list()
    for (student_id, row) in frame.iterrows():
        result = screen(row, model, config)
        rows.append(
            {
                "student_id": student_id,
                "label": result.label.value,
                "posterior": result.posterior,
                "n_features": len(result.features),
                "minutes": result.minutes,
            }
        )

    results = pd.DataFrame(rows, columns=["student_id", "label", "posterior", "n_features", "minutes"])
    predicted = (results["label"] == ScreenLabel.at_risk.value).to_numpy()

    sensitivity = predicted[labels].mean() if labels.any() else np.nan
    specificity = (~predicted[~labels]).mean() if (~labels).any() else np.nan

    evaluation = Evaluation(
        float(sensitivity),
        float(specificity),
        float((predicted == labels).mean()),
        float(results["minutes"].mean()),
        float(results["n_features"].mean()),
        float((results["minutes"] <= minute + 1e-9).mean()),
        results,
    )

    log.info(
        "sensitivity %.3f, specificity %.3f, %.1f of %.1f minute(s) on average",
        evaluation.sensitivity,
        evaluation.specificity,
        evaluation.mean_minutes,
        model.minutes,
    )

    return evaluation


__all__ = [
    "Evaluation",
    "ScreenLabel",
    "ScreenResult",
    "ScreenerModel",
    "evaluate",
    "fit_screener",
    "screen",
]
