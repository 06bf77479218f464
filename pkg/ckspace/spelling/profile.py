import logging

from ckspace.errors import ValidationError
from ckspace.spelling.malrule import rule_ids


log = logging.getLogger(__name__)


class MalRuleProfile:
    """
    Holds a student's Gamma posterior over the error rate of every
    mal-rule.

    A rule's rate is the expected number of errors per opportunity.
    Profiles are values: updates return new objects.

    Parameters
    ----------
    alpha: Optional[Dict[:class:`str`, :class:`float`]]
        The shape of each rule. Missing rules take ``1``.
    beta: Optional[Dict[:class:`str`, :class:`float`]]
        The rate of each rule. Missing rules take ``1``.

    Raises
    ------
    :exc:`~.ValidationError`
        A shape or rate is not positive.


    .. container:: operations

        .. describe:: x == y
        .. describe:: x != y

            Compares two :class:`~.MalRuleProfile` objects.
    """

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha=None, beta=None):
        alpha = {r: 1.0 for r in rule_ids} | dict(alpha or dict())
        beta = {r: 1.0 for r in rule_ids} | dict(beta or dict())

        for (name, values) in (("alpha", alpha), ("beta", beta)):
            for (rule, value) in values.items():
                if not value > 0.0:
                    raise ValidationError(f"{name} of {rule!r} must be positive, got {value}")

        self.alpha = {r: float(v) for (r, v) in alpha.items()}
        self.beta = {r: float(v) for (r, v) in beta.items()}

    def __repr__(self):
        means = " ".join(f"{r}={m:.3f}" for (r, m) in self.means().items())
        return f"<MalRuleProfile {means}>"

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return self.alpha == other.alpha and self.beta == other.beta

    def mean(self, rule):
        return self.alpha[rule] / self.beta[rule]

    def means(self):
        """
        Returns the posterior mean rate of every rule.

        Returns
        -------
        Dict[:class:`str`, :class:`float`]
            ``alpha / beta`` per rule.
        """

        return {r: self.alpha[r] / self.beta[r] for r in self.alpha}

    def to_dict(self):
        return {r: {"alpha": self.alpha[r], "beta": self.beta[r]} for r in sorted(self.alpha)}

    @classmethod
    def from_dict(cls, data):
        return cls({r: v["alpha"] for (r, v) in data.items()}, {r: v["beta"] for (r, v) in data.items()})


def update_profile(profile, word, activations):
    """
    Updates a profile with the analysis of one entered word.

    Every rule is updated by Poisson-Gamma conjugacy: ``alpha`` grows by
    the rule's activation count and ``beta`` by its opportunities in the
    word.

    Parameters
    ----------
    profile: :class:`~.MalRuleProfile`
        The profile.
    word: :class:`~.WordEntry`
        The entered word.
    activations: Dict[:class:`str`, :class:`int`]
        The counts :func:`~.analyze_input` returned for the word.

    Returns
    -------
    :class:`~.MalRuleProfile`
        The updated profile.

    Examples
    --------

    .. code-block:: python3

        >>> profile = update_profile(MalRuleProfile(), WordEntry("Ball"), analyze_input("Ball", "Blal"))
        >>> profile.alpha["Transposition"], profile.beta["Transposition"]
        (2.0, 4.0)
    """

    opportunities = word.opportunities
    alpha = dict(profile.alpha)
    beta = dict(profile.beta)

    for rule in alpha:
        count = activations.get(rule, 0)

        if count < 0:
            raise ValidationError(f"activation count of {rule!r} must be non-negative")

        alpha[rule] += count
        beta[rule] += opportunities.get(rule, 0)

    return MalRuleProfile(alpha, beta)


def word_error_expectation(profile, word):
    """
    Calculates how many errors a student is expected to make in a word.

    Parameters
    ----------
    profile: :class:`~.MalRuleProfile`
        The profile.
    word: :class:`~.WordEntry`
        The word.

    Returns
    -------
    Tuple[:class:`float`, :class:`float`]
        The expected number of errors, summed over rules as mean rate
        times opportunities, and that number per letter.
    """

    opportunities = word.opportunities
    expected = sum(m * opportunities[r] for (r, m) in profile.means().items())

    return expected, expected / len(word)


def error_source_probabilities(profile, word):
    """
    Calculates the probability that each mal-rule caused an error in a
    word.

    Returns
    -------
    Dict[:class:`str`, :class:`float`]
        The expected errors of each rule divided by the total. All zeros
        when no error is expected.
    """

    opportunities = word.opportunities
    expected = {r: m * opportunities[r] for (r, m) in profile.means().items()}
    total = sum(expected.values())

    if total <= 0.0:
        return {r: 0.0 for r in expected}

    return {r: e / total for (r, e) in expected.items()}


__all__ = [
    "MalRuleProfile",
    "error_source_probabilities",
    "update_profile",
    "word_error_expectation",
]
