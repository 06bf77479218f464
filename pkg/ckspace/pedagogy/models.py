from ckspace.knowledge.model import init_beliefs, predict_correct, update_on_answer


class BeliefModel:
    """
    Wraps the knowledge model in the interface the stop policy
    consumes.

    Parameters
    ----------
    net: :class:`~.SkillNet`
        The net.
    params: :class:`~.SkillParams`
        The parameters.
    beliefs: Optional[:class:`~.SkillBelief`]
        The starting beliefs. Defaults to :func:`~.init_beliefs`.
    """

    __slots__ = ("net", "params", "beliefs")

    def __init__(self, net, params, beliefs=None):
        self.net = net
        self.params = params
        self.beliefs = beliefs if beliefs is not None else init_beliefs(net)

    def __repr__(self):
        return f"<BeliefModel net={self.net!r}>"

    def predict_correct(self, skill):
        return predict_correct(self.beliefs[skill], self.params[skill])

    def observe(self, skill, correct):
        self.beliefs = update_on_answer(self.beliefs, self.net, self.params, skill, correct)


class FrequencyModel:
    """
    Predicts the next answer from the running share of correct answers,
    ``(correct + 1) / (answers + 2)`` per skill.
    """

    __slots__ = ("_counts",)

    def __init__(self):
        self._counts = dict()

    def __repr__(self):
        return f"<FrequencyModel skills={len(self._counts)}>"

    def predict_correct(self, skill):
        correct, total = self._counts.get(skill, (0, 0))
        return (correct + 1) / (total + 2)

    def observe(self, skill, correct):
        c, n = self._counts.get(skill, (0, 0))
        self._counts[skill] = (c + bool(correct), n + 1)


__all__ = [
    "BeliefModel",
    "FrequencyModel",
]
