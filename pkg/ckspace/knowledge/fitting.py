import collections
import logging

import numpy as np
import pandas as pd

from ckspace.config import KnowledgeConfig
from ckspace.errors import UnknownSkillError
from ckspace.knowledge.model import init_beliefs, update_on_answer
from ckspace.knowledge.params import Parameters, SkillParams


log = logging.getLogger(__name__)


SkillFit = collections.namedtuple(
    "SkillFit",
    ["skill", "observations", "sequences", "log_likelihood", "iterations", "converged", "flags"],
)
SkillFit.__doc__ = """
Describes the fit of one skill.

Attributes
----------
skill: :class:`str`
    The skill.
observations: :class:`int`
    The number of answers.
sequences: :class:`int`
    The number of students with at least one answer.
log_likelihood: :class:`float`
    The final log-likelihood.
iterations: :class:`int`
    The number of iterations run.
converged: :class:`bool`
    Whether the tolerance was reached.
flags: Tuple[:class:`str`, ...]
    Notes such as ``"no_observations"``, ``"slip_at_bound"``,
    ``"guess_at_bound"`` or ``"degenerate"``.
"""


class FitSummary:
    """
    Collects the :class:`~.SkillFit` of every fitted skill.


    .. container:: operations

        .. describe:: len(x)

            Returns the number of entries.

        .. describe:: x[skill]

            Returns the entry of a skill.

        .. describe:: iter(x)

            Returns an iterator over the entries.
    """

    __slots__ = ("_fits",)

    def __init__(self, fits=()):
        self._fits = {f.skill: f for f in fits}

    def __getitem__(self, skill):
        return self._fits[skill]

    def __iter__(self):
        return iter(self._fits.values())

    def __len__(self):
        return len(self._fits)

    def __repr__(self):
        return f"<FitSummary skills={len(self._fits)}>"

    def flagged(self, flag):
        return [f.skill for f in self if flag in f.flags]

    def to_frame(self, params=None):
        """
        Returns the summary as a :class:`pandas.DataFrame`, one row per
        skill. When ``params`` is given the fitted values are included.
        """

        rows = list()

        for f in self:
            row = {
                "skill_id": f.skill,
                "observations": f.observations,
                "sequences": f.sequences,
                "log_likelihood": f.log_likelihood,
                "iterations": f.iterations,
                "converged": f.converged,
                "flags": ";".join(f.flags),
            }

            if params is not None:
                row.update(params[f.skill]._asdict())

            rows.append(row)

        columns = ["skill_id", "observations", "sequences", "log_likelihood", "iterations", "converged", "flags"]
        if params is not None:
            columns += list(Parameters._fields)

        return pd.DataFrame(rows, columns=columns)


def _gates(sequences, net, params):
    gates = dict()

    for (student, answers) in sequences.items():
        beliefs = init_beliefs(net)
        values = list()

        for (skill, correct) in answers:
            gate = 1.0
            for q in net.precursors(skill):
                gate *= beliefs[q]

            values.append(gate)
            beliefs = update_on_answer(beliefs, net, params, skill, correct)

        gates[student] = values

    return gates


def _padded(sequences, gates, skill):
    rows = list()

    for (student, answers) in sequences.items():
        obs = [(c, gates[student][i] if gates else 1.0) for (i, (s, c)) in enumerate(answers) if s == skill]
        if obs:
            rows.append(obs)

    if not rows:
        return None

    T = max(len(r) for r in rows)
    obs = np.zeros((len(rows), T), dtype=float)
    gate = np.ones((len(rows), T), dtype=float)
    mask = np.zeros((len(rows), T), dtype=bool)

    for (i, row) in enumerate(rows):
        obs[i, : len(row)] = [float(c) for (c, _) in row]
        gate[i, : len(row)] = [g for (_, g) in row]
        mask[i, : len(row)] = True

    return obs, gate, mask


def _project(slip, guess, learn, forget, config):
    slip = float(np.clip(slip, config.min_rate, config.max_slip))
    guess = float(np.clip(guess, config.min_rate, config.max_guess))
    learn = float(np.clip(learn, 0.0, 1.0))

    if config.fit_forget:
        forget = float(np.clip(forget, 0.0, learn))
    else:
        forget = config.forget

    return Parameters(slip, guess, learn, forget)


def _expectation(obs, gate, mask, p):
    N, T = obs.shape

    e1 = np.where(mask, np.where(obs > 0, 1.0 - p.slip, p.slip), 1.0)
    e0 = np.where(mask, np.where(obs > 0, p.guess, 1.0 - p.guess), 1.0)
    learn = p.learn * gate

    alpha = np.zeros((N, T, 2))
    scale = np.ones((N, T))

    for t in range(T):
        if t == 0:
            prior = np.full(N, 0.5)
        else:
            prior = alpha[:, t - 1, 1] * (1.0 - p.forget) + alpha[:, t - 1, 0] * learn[:, t - 1]
            prior = np.where(mask[:, t], prior, alpha[:, t - 1, 1])

        u1 = prior * e1[:, t]
        u0 = (1.0 - prior) * e0[:, t]
        scale[:, t] = u0 + u1
        alpha[:, t, 1] = u1 / scale[:, t]
        alpha[:, t, 0] = u0 / scale[:, t]

    beta = np.ones((N, T, 2))

    for t in range(T - 2, -1, -1):
        m1 = e1[:, t + 1] * beta[:, t + 1, 1]
        m0 = e0[:, t + 1] * beta[:, t + 1, 0]
        b0 = ((1.0 - learn[:, t]) * m0 + learn[:, t] * m1) / scale[:, t + 1]
        b1 = (p.forget * m0 + (1.0 - p.forget) * m1) / scale[:, t + 1]
        beta[:, t, 0] = np.where(mask[:, t + 1], b0, beta[:, t + 1, 0])
        beta[:, t, 1] = np.where(mask[:, t + 1], b1, beta[:, t + 1, 1])

    gamma = alpha * beta
    gamma /= gamma.sum(axis=2, keepdims=True)

    step = mask[:, 1:]
    xi01 = alpha[:, :-1, 0] * learn[:, :-1] * e1[:, 1:] * beta[:, 1:, 1] / scale[:, 1:] * step
    xi10 = alpha[:, :-1, 1] * p.forget * e0[:, 1:] * beta[:, 1:, 0] / scale[:, 1:] * step

    return gamma, xi01, xi10, float(np.log(scale).sum())


def _fit_skill(skill, obs, gate, mask, start, config):
    p = start
    previous = -np.inf
    converged = False
    iterations = 0
    log_likelihood = previous

    for iterations in range(1, config.max_iter + 1):
        gamma, xi01, xi10, log_likelihood = _expectation(obs, gate, mask, p)

        g1 = gamma[:, :, 1] * mask
        g0 = gamma[:, :, 0] * mask
        step = mask[:, 1:]

        def ratio(numerator, denominator, fallback):
            return numerator / denominator if denominator > 0.0 else fallback

        p = _project(
            ratio((g1 * (1.0 - obs)).sum(), g1.sum(), p.slip),
            ratio((g0 * obs).sum(), g0.sum(), p.guess),
            ratio(xi01.sum(), (gamma[:, :-1, 0] * gate[:, :-1] * step).sum(), p.learn),
            ratio(xi10.sum(), (gamma[:, :-1, 1] * step).sum(), p.forget),
            config,
        )

        if abs(log_likelihood - previous) <= config.tolerance * max(1.0, abs(log_likelihood)):
            converged = True
            break

        previous = log_likelihood

    flags = list()
    answered = obs[mask]

    if answered.min() == answered.max():
        flags.append("degenerate")

    if p.slip <= config.min_rate or p.slip >= config.max_slip:
        flags.append("slip_at_bound")

    if p.guess <= config.min_rate or p.guess >= config.max_guess:
        flags.append("guess_at_bound")

    log.debug("fitted %s in %d iteration(s): %r", skill, iterations, p)

    fit = SkillFit(
        skill,
        int(mask.sum()),
        int(mask.any(axis=1).sum()),
        log_likelihood,
        iterations,
        converged,
        tuple(flags),
    )

    return p, fit


def fit_params(sequences, net, config=None, initial=None):
    """
    Fits per-skill slip, guess, learn and forget probabilities by
    expectation-maximization.

    Every skill's answers form a two-state hidden Markov chain per
    student. The learn probability of a step is scaled by the
    prerequisite gate, estimated by replaying the answers through the
    factored model under the current parameters; with
    :attr:`~.KnowledgeConfig.passes` above one the gates are
    re-estimated from the fitted parameters. Estimates are projected
    into the box ``min_rate <= slip <= max_slip``,
    ``min_rate <= guess <= max_guess``, ``forget <= learn``.

    Parameters
    ----------
    sequences: Dict[:class:`str`, List[Tuple[:class:`str`, :class:`bool`]]]
        The ``(skill, correct)`` answers of every student, as returned
        by :func:`~.answer_sequences`.
    net: :class:`~.SkillNet`
        The net.
    config: Optional[:class:`~.KnowledgeConfig`]
        The fitting configuration.
    initial: Optional[:class:`~.SkillParams`]
        The starting parameters. Defaults to the configured defaults.

    Returns
    -------
    Tuple[:class:`~.SkillParams`, :class:`~.FitSummary`]
        The fitted parameters and the summary. Skills without answers
        keep their starting parameters and are flagged
        ``"no_observations"``.

    Raises
    ------
    :exc:`~.UnknownSkillError`
        An answer names a skill outside the net.
    """

    config = config or KnowledgeConfig()
    params = initial or SkillParams.from_config(config)

    if not any(sequences.values()):
        return params, FitSummary()

    for answers in sequences.values():
        for (skill, _) in answers:
            if skill not in net:
                raise UnknownSkillError(skill)

    passes = config.passes if net.edges else 1
    fits = dict()

    for number in range(passes):
        gates = _gates(sequences, net, params) if net.edges else None
        per_skill = dict(params.per_skill)

        for skill in net:
            arrays = _padded(sequences, gates, skill)

            if arrays is None:
                fits[skill] = SkillFit(skill, 0, 0, 0.0, 0, False, ("no_observations",))
                continue

            per_skill[skill], fits[skill] = _fit_skill(skill, *arrays, params[skill], config)

        params = SkillParams(params.default, per_skill)
        log.info("fit pass %d of %d over %d skill(s)", number + 1, passes, len(fits))

    return params, FitSummary(fits.values())


__all__ = [
    "FitSummary",
    "SkillFit",
    "fit_params",
]
