import collections.abc
import logging
import math

import pandas as pd
from sklearn.metrics import roc_auc_score

from ckspace.errors import UnknownSkillError, ValidationError
from ckspace.utils.math import clamp


log = logging.getLogger(__name__)


class SkillBelief(collections.abc.Mapping):
    """
    Maps skill ids to the probability that the skill is learned.

    Besides the marginals a belief carries the covariance of the two
    endpoints of every edge of the net. Evidence on a skill reaches its
    direct precursors and successors through these covariances.

    Beliefs are values: updates return new objects.

    Parameters
    ----------
    values: Dict[:class:`str`, :class:`float`]
        The probabilities.
    links: Optional[Dict[Tuple[:class:`str`, :class:`str`], :class:`float`]]
        The covariances, keyed by ``(precursor, successor)``.
    """

    __slots__ = ("_values", "_links")

    def __init__(self, values, links=None):
        for (skill, p) in values.items():
            if not 0.0 <= p <= 1.0 or math.isnan(p):
                raise ValidationError(f"belief of {skill!r} must lie in [0, 1], got {p}")

        self._values = dict(values)
        self._links = dict(links or dict())

    def __getitem__(self, skill):
        return self._values[skill]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return f"<SkillBelief skills={len(self._values)}>"

    @property
    def links(self):
        """
        The endpoint covariance of every edge.

        :type: Dict[Tuple[:class:`str`, :class:`str`], :class:`float`]
        """

        return dict(self._links)

    def to_frame(self):
        """
        Returns the beliefs as a :class:`pandas.DataFrame` with the
        columns ``skill_id`` and ``p_learned``.
        """

        return pd.DataFrame(
            {"skill_id": list(self._values), "p_learned": list(self._values.values())},
            columns=["skill_id", "p_learned"],
        )

    def to_dict(self):
        return dict(self._values)


def init_beliefs(net):
    """
    Returns the initial beliefs of a net: every skill is learned with
    probability 0.5 and all edges are uncorrelated.

    Parameters
    ----------
    net: :class:`~.SkillNet`
        The net.

    Returns
    -------
    :class:`~.SkillBelief`
        The beliefs.
    """

    return SkillBelief({s: 0.5 for s in net}, {e: 0.0 for e in net.edges})


def predict_correct(p, params):
    """
    Calculates the probability of a correct answer.

    Parameters
    ----------
    p: :class:`float`
        The probability that the skill is learned.
    params: :class:`~.Parameters`
        The skill's parameters.

    Returns
    -------
    :class:`float`
        ``p * (1 - slip) + (1 - p) * guess``.

    Examples
    --------

    .. code-block:: python3

        >>> predict_correct(0.5, Parameters(slip=0.1, guess=0.2))
        0.55
    """

    return p * (1.0 - params.slip) + (1.0 - p) * params.guess


def _bounded(c, a, b):
    # a covariance of two binary variables with marginals a and b
    low = max(-a * b, -(1.0 - a) * (1.0 - b))
    high = min(a * (1.0 - b), b * (1.0 - a))

    return min(max(c, low), high)


def _product(values):
    result = 1.0
    for v in values:
        result *= v

    return result


def observe_answer(beliefs, net, params, skill, correct):
    """
    Conditions beliefs on an answer without letting time pass.

    The answered skill receives the Bayes posterior of the observation.
    Its direct precursors and successors are corrected through their
    covariance with it. When ``slip + guess < 1`` a correct answer never
    lowers the answered skill's belief and an incorrect one never raises
    it.

    Parameters
    ----------
    beliefs: :class:`~.SkillBelief`
        The current beliefs.
    net: :class:`~.SkillNet`
        The net.
    params: :class:`~.SkillParams`
        The parameters.
    skill: :class:`str`
        The skill the answered task trains.
    correct: :class:`bool`
        Whether the answer was correct.

    Returns
    -------
    :class:`~.SkillBelief`
        The conditioned beliefs.

    Raises
    ------
    :exc:`~.UnknownSkillError`
        The skill is not part of the net.
    :exc:`~.ValidationError`
        The answer is impossible under the current beliefs.
    """

    if skill not in net:
        raise UnknownSkillError(skill)

    p = dict(beliefs._values)
    links = dict(beliefs._links)
    sp = params[skill]

    if correct:
        l1, l0 = 1.0 - sp.slip, sp.guess
    else:
        l1, l0 = sp.slip, 1.0 - sp.guess

    ps = p[skill]
    z = ps * l1 + (1.0 - ps) * l0

    if z <= 0.0:
        raise ValidationError(f"answer on {skill!r} has zero probability under the current beliefs")

    posterior = ps * l1 / z

    parents = net.precursors(skill)
    children = net.successors(skill)

    neighbours = [((q, skill), q) for q in parents] + [((skill, c), c) for c in children]
    corrected = dict()

    for (edge, y) in neighbours:
        c = links.get(edge, 0.0)
        py = p[y]

        joint = l1 * (py * ps + c) / z
        py = clamp(py + (l1 - l0) * c / z)

        corrected[y] = py
        links[edge] = _bounded(joint - py * posterior, py, posterior)

    p.update(corrected)
    p[skill] = posterior

    return SkillBelief(p, links)


def update_on_answer(beliefs, net, params, skill, correct):
    """
    Updates beliefs after an answer.

    The beliefs are first conditioned on the answer by
    :func:`~.observe_answer`. The answered skill then takes the learning
    transition ``p <- p * (1 - forget) + learn * P(unlearned, gate
    open)``, where the gate is open when every precursor is learned.
    Without correlations this is ``learn * (1 - p) * prod(p(q))``.

    With ``forget > 0`` the transition can take back more than a correct
    answer added, so only the conditioned belief is monotone in the
    answer.

    Parameters
    ----------
    beliefs: :class:`~.SkillBelief`
        The current beliefs.
    net: :class:`~.SkillNet`
        The net.
    params: :class:`~.SkillParams`
        The parameters.
    skill: :class:`str`
        The skill the answered task trains.
    correct: :class:`bool`
        Whether the answer was correct.

    Returns
    -------
    :class:`~.SkillBelief`
        The updated beliefs.

    Raises
    ------
    :exc:`~.UnknownSkillError`
        The skill is not part of the net.
    :exc:`~.ValidationError`
        The answer is impossible under the current beliefs.
    """

    observed = observe_answer(beliefs, net, params, skill, correct)

    p = dict(observed._values)
    links = dict(observed._links)
    sp = params[skill]
    ps = p[skill]

    parents = net.precursors(skill)
    children = net.successors(skill)

    gate = _product(p[q] for q in parents)
    both = ps * gate + sum(
        links.get((q, skill), 0.0) * _product(p[r] for r in parents if r != q) for q in parents
    )
    opened = clamp(gate - both, 0.0, min(1.0 - ps, gate))

    learned = clamp((1.0 - sp.forget) * ps + sp.learn * opened)

    for q in parents:
        c = links.get((q, skill), 0.0)
        joint = (1.0 - sp.forget) * (p[q] * ps + c) + sp.learn * opened
        links[(q, skill)] = _bounded(joint - p[q] * learned, p[q], learned)

    for ch in children:
        c = links.get((skill, ch), 0.0)
        unlearned = clamp(p[ch] - c / (1.0 - ps)) if ps < 1.0 else p[ch]
        joint = (1.0 - sp.forget) * (ps * p[ch] + c) + sp.learn * opened * unlearned
        links[(skill, ch)] = _bounded(joint - learned * p[ch], learned, p[ch])

    p[skill] = learned

    return SkillBelief(p, links)


def advance(beliefs, net, params, steps=1):
    """
    Lets time pass without observations.

    Every skill takes the gated learning transition, using the
    precursor beliefs of the previous step. With ``forget > 0`` the
    beliefs approach ``learn / (learn + forget)`` for skills whose gate
    is open.

    Parameters
    ----------
    beliefs: :class:`~.SkillBelief`
        The current beliefs.
    net: :class:`~.SkillNet`
        The net.
    params: :class:`~.SkillParams`
        The parameters.
    steps: :class:`int`
        The number of steps.

    Returns
    -------
    :class:`~.SkillBelief`
        The beliefs after ``steps`` transitions.
    """

    p = dict(beliefs._values)
    links = dict(beliefs._links)

    for _ in range(steps):
        previous = dict(p)

        for s in net:
            sp = params[s]
            gate = _product(previous[q] for q in net.precursors(s))
            p[s] = clamp(previous[s] * (1.0 - sp.forget) + (1.0 - previous[s]) * sp.learn * gate)

    links = {(a, b): _bounded(c, p[a], p[b]) for ((a, b), c) in links.items()}

    return SkillBelief(p, links)


def trace_predictions(answers, net, params, beliefs=None):
    """
    Replays an answer sequence.

    Parameters
    ----------
    answers: Iterable[Tuple[:class:`str`, :class:`bool`]]
        ``(skill, correct)`` pairs in time order.
    net: :class:`~.SkillNet`
        The net.
    params: :class:`~.SkillParams`
        The parameters.
    beliefs: Optional[:class:`~.SkillBelief`]
        The starting beliefs. Defaults to :func:`~.init_beliefs`.

    Returns
    -------
    Tuple[List[:class:`float`], :class:`~.SkillBelief`]
        The predicted probability of a correct answer before each
        answer, and the final beliefs.
    """

    if beliefs is None:
        beliefs = init_beliefs(net)

    predictions = list()

    for (skill, correct) in answers:
        if skill not in net:
            raise UnknownSkillError(skill)

        predictions.append(predict_correct(beliefs[skill], params[skill]))
        beliefs = update_on_answer(beliefs, net, params, skill, correct)

    return predictions, beliefs


def prediction_auc(predictions, outcomes):
    """
    Calculates the area under the ROC curve of next-answer predictions.

    Parameters
    ----------
    predictions: Sequence[:class:`float`]
        Predicted probabilities of a correct answer.
    outcomes: Sequence[:class:`bool`]
        Whether each answer was correct.

    Raises
    ------
    :exc:`~.ValidationError`
        The outcomes contain a single class.
    """

    outcomes = [bool(o) for o in outcomes]

    if len(set(outcomes)) < 2:
        raise ValidationError("AUC needs both correct and incorrect answers")

    return float(roc_auc_score(outcomes, predictions))


__all__ = [
    "SkillBelief",
    "advance",
    "init_beliefs",
    "observe_answer",
    "predict_correct",
    "prediction_auc",
    "trace_predictions",
    "update_on_answer",
]
