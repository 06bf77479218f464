import numpy as np

from ckspace.errors import UnknownSkillError, ValidationError
from ckspace.knowledge.model import SkillBelief


max_exact_skills = 12


def exact_infer(net, params, answers, initial=None):
    """
    Calculates exact filtered marginals by enumerating every joint
    state of the net.

    The model matches :func:`~.update_on_answer`: the answered skill is
    observed through its slip and guess probabilities, then takes one
    transition. A learned skill is forgotten with probability
    ``forget``; an unlearned skill is learned with probability
    ``learn`` if all of its precursors are learned, and stays unlearned
    otherwise. Other skills are unchanged.

    Parameters
    ----------
    net: :class:`~.SkillNet`
        The net. At most 12 skills.
    params: :class:`~.SkillParams`
        The parameters.
    answers: Iterable[Tuple[:class:`str`, :class:`bool`]]
        ``(skill, correct)`` pairs in time order.
    initial: Optional[Mapping[:class:`str`, :class:`float`]]
        Independent starting marginals. Defaults to 0.5 everywhere.

    Returns
    -------
    :class:`~.SkillBelief`
        The exact marginals.

    Raises
    ------
    :exc:`~.ValidationError`
        The net has more than 12 skills; use :func:`~.update_on_answer`
        instead.
    """

    skills = list(net)
    n = len(skills)

    if n > max_exact_skills:
        raise ValidationError(
            f"exact inference supports at most {max_exact_skills} skills, the net has {n}; "
            "use update_on_answer for larger nets"
        )

    bit = {s: 1 << i for (i, s) in enumerate(skills)}
    states = np.arange(1 << n)

    probability = np.ones(1 << n)
    for s in skills:
        p = initial[s] if initial is not None else 0.5
        probability *= np.where(states & bit[s], p, 1.0 - p)

    for (skill, correct) in answers:
        if skill not in bit:
            raise UnknownSkillError(skill)

        sp = params[skill]
        learned = (states & bit[skill]) != 0

        if correct:
            likelihood = np.where(learned, 1.0 - sp.slip, sp.guess)
        else:
            likelihood = np.where(learned, sp.slip, 1.0 - sp.guess)

        probability = probability * likelihood
        total = probability.sum()

        if total <= 0.0:
            raise ValidationError(f"answer on {skill!r} has zero probability")

        probability /= total

        mask = 0
        for q in net.precursors(skill):
            mask |= bit[q]

        gate = (states & mask) == mask
        move = np.where(learned, sp.forget, np.where(gate, sp.learn, 0.0))

        # flipping one bit pairs every state with exactly one other
        flipped = states ^ bit[skill]
        probability = probability * (1.0 - move) + (probability * move)[flipped]

    marginals = {s: float(probability[(states & bit[s]) != 0].sum()) for s in skills}
    marginals = {s: min(max(p, 0.0), 1.0) for (s, p) in marginals.items()}

    return SkillBelief(marginals)


__all__ = [
    "exact_infer",
]
