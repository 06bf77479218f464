import collections
import logging

import numpy as np

from ckspace.config import ControllerConfig, SimulationConfig
from ckspace.errors import ModuleComplete, ValidationError
from ckspace.events.event import Event
from ckspace.events.kind import EventKind
from ckspace.knowledge.params import SkillParams
from ckspace.knowledge.skillnet import load_sample_skill_net
from ckspace.pedagogy.actions import next_action
from ckspace.pedagogy.models import BeliefModel
from ckspace.simulation.population import generate_population
from ckspace.simulation.spelling import render_errors, render_keystrokes
from ckspace.spelling.analysis import analyze_input
from ckspace.spelling.cycle import CycleState, cycle_step
from ckspace.spelling.malrule import MalRuleCategory
from ckspace.spelling.profile import MalRuleProfile, update_profile
from ckspace.spelling.selection import select_next_word
from ckspace.spelling.words import load_sample_tables, load_sample_words
from ckspace.utils.internal import atomic_write, dump_json


log = logging.getLogger(__name__)


day_ms = 24 * 60 * 60 * 1000

SimRun = collections.namedtuple("SimRun", ["events", "truth"])
SimRun.__doc__ = """
Represents the output of a simulation.

Attributes
----------
events: List[:class:`~.Event`]
    The logged events, in time order per student.
truth: List[Dict[:class:`str`, Any]]
    One record of the hidden state per answered task. Never an input
    to a model.
"""

# typical errors by skill family; a wrong answer shows one half of the time
_typical_errors = (("addx", "ten-crossing"), ("subx", "ten-crossing"), ("spok", "counting"), ("arab", "place-value"))

# rules a distracted speller commits twice as often
_minor_rules = (MalRuleCategory.typing.value, MalRuleCategory.capitalization.value)


class MathTutor:
    """
    Represents the adaptive side of a math training: the knowledge
    model, the controller thresholds and the skill in training.

    Parameters
    ----------
    net: :class:`~.SkillNet`
        The net.
    params: Optional[:class:`~.SkillParams`]
        The model parameters.
    current: Optional[:class:`str`]
        The skill training starts on. Defaults to the first skill.
    controller: Optional[:class:`~.ControllerConfig`]
        The thresholds.
    """

    __slots__ = ("net", "model", "current", "controller", "_games")

    def __init__(self, net, params=None, current=None, controller=None):
        self.net = net
        self.model = BeliefModel(net, params or SkillParams())
        self.current = current or net.order[0]
        self.controller = controller or ControllerConfig()

        self._games = dict()
        for (game, skills) in sorted(net.games.items()):
            for skill in skills:
                self._games.setdefault(skill, game)

    def __repr__(self):
        return f"<MathTutor current={self.current!r}>"

    def game(self, skill):
        return self._games.get(skill, "training")


class SpellingTutor:
    """
    Represents the adaptive side of a spelling training.

    Parameters
    ----------
    database: Optional[List[:class:`~.WordEntry`]]
        The words. Defaults to the shipped database.
    tables: Optional[:class:`~.SpellingTables`]
        The character tables. Defaults to the shipped tables.
    """

    __slots__ = ("database", "tables", "profile", "states")

    def __init__(self, database=None, tables=None):
        self.database = list(database if database is not None else load_sample_words())
        self.tables = tables or load_sample_tables()
        self.profile = MalRuleProfile()
        self.states = dict()

    def __repr__(self):
        return f"<SpellingTutor words={len(self.database)} trained={len(self.states)}>"


def _typical_error(skill):
    for (family, tag) in _typical_errors:
        if f"-{family}-" in skill and not (family == "arab" and skill.startswith("r10-")):
            return tag

    return None


def _answer_ms(student, skill_range, rng):
    mu = student.log_seconds.get(skill_range, 8.0)
    if not student.focused:
        mu += 0.3

    return max(int(rng.lognormal(mu, student.time_sigma)), 200)


def _math_step(student, tutor, rng, t, sid, sess, events, truth):
    net = tutor.net
    skill = tutor.current
    p = student.params[skill]
    game = tutor.game(skill)

    slip = min(2.0 * p.slip, 0.5) if not student.focused else p.slip
    knows = student.learned[skill]
    correct = bool(rng.random() < ((1.0 - slip) if knows else p.guess))

    task = f"{skill}/{int(rng.integers(3))}"
    events.append(Event(sid, sess, t, EventKind.task_shown, {"skill": skill, "task": task, "game": game}))

    if rng.random() < (0.05 if student.receptive else 0.2):
        t += int(rng.integers(500, 3000))
        events.append(Event(sid, sess, t, EventKind.help_call, {"skill": skill}))

    duration = _answer_ms(student, net.skills[skill].number_range.value, rng)
    keys = 1 + int(rng.integers(3))
    for k in range(keys):
        kind = EventKind.invalid_input if (not correct and k == keys - 1) else EventKind.key_input
        events.append(Event(sid, sess, t + duration * (k + 1) // (keys + 1), kind, {"char": str(int(rng.integers(10)))}))

    t += duration
    events.append(Event(sid, sess, t, EventKind.enter, {}))

    payload = {"skill": skill, "correct": correct, "time_ms": duration, "task": task, "game": game}

    mistake = _typical_error(skill) if not correct and rng.random() < 0.5 else None
    if mistake is not None:
        payload["mistake"] = mistake

    counting = 0.6 if student.dd else 0.2
    payload["strategy"] = "counting" if rng.random() < counting else "retrieval"

    events.append(Event(sid, sess, t, EventKind.answer_submitted, payload))
    truth.append(
        {
            "sid": sid,
            "t": t,
            "skill": skill,
            "skill_states": dict(student.learned),
            "focused": student.focused,
            "receptive": student.receptive,
        }
    )

    # the student moves first; a non-receptive step teaches nothing
    if knows:
        student.learned[skill] = bool(rng.random() >= p.forget)
    elif student.receptive and all(student.learned[q] for q in net.precursors(skill)):
        student.learned[skill] = bool(rng.random() < p.learn)

    tutor.model.observe(skill, correct)
    action = next_action(tutor.model.beliefs, net, skill, correct, mistake, tutor.controller)

    if action.skill is not None:
        if tutor.game(action.skill) != game:
            t += int(rng.integers(1000, 4000))
            events.append(Event(sid, sess, t, EventKind.nav_game, {"game": tutor.game(action.skill)}))

        tutor.current = action.skill

    return t


def _spelling_step(student, tutor, rng, t, sid, sess, events, truth):
    word = select_next_word(tutor.profile, tutor.database, tutor.states)
    state = tutor.states.get(word.word, CycleState())

    rates = dict(student.mal_rates)
    if not student.focused:
        for rule in _minor_rules:
            rates[rule] *= 2.0

    (typed, planted) = render_errors(word, rates, rng, tutor.tables)
    correct = typed == word.word
    first_attempt = state.last_presented is None

    events.append(Event(sid, sess, t, EventKind.task_shown, {"target": word.word, "game": "spelling"}))

    duration = max(int(rng.lognormal(np.log(700.0 * len(word)), student.time_sigma)), 200)
    if not student.focused:
        duration = int(duration * 1.35)

    for (offset, kind, char) in render_keystrokes(word.word, typed, rng, duration, tables=tutor.tables):
        events.append(Event(sid, sess, t + offset, kind, {"char": char} if char else {}))

    t += duration
    events.append(
        Event(
            sid,
            sess,
            t,
            EventKind.answer_submitted,
            {
                "target": word.word,
                "typed": typed,
                "correct": correct,
                "time_ms": duration,
                "first_attempt": first_attempt,
            },
        )
    )
    truth.append(
        {
            "sid": sid,
            "t": t,
            "target": word.word,
            "errors": planted,
            "focused": student.focused,
            "receptive": student.receptive,
        }
    )

    activations = analyze_input(word, typed, tutor.tables)
    tutor.profile = update_profile(tutor.profile, word, activations)
    tutor.states[word.word] = cycle_step(state, correct, first_attempt, at=t)

    return t


def simulate_session(student, tutor, rng, length=30, t0=0, session_id=None, engagement=True):
    """
    Simulates one closed-loop training session.

    Each step the tutor picks a task, the student answers according to
    its hidden state, and the tutor updates its model. In a math session
    a non-focused student slips twice as often and answers slower, and a
    non-receptive student learns nothing from the step. In a spelling
    session a non-focused student makes twice as many typing and
    capitalization errors. The session ends early when every word of a
    spelling database is done.

    Parameters
    ----------
    student: :class:`~.SyntheticStudent`
        The student. Its knowledge and engagement state change.
    tutor: Union[:class:`~.MathTutor`, :class:`~.SpellingTutor`]
        The adaptive side. Its state changes.
    rng: :class:`numpy.random.Generator`
        The random source.
    length: :class:`int`
        The number of tasks.
    t0: :class:`int`
        The session start, in milliseconds.
    session_id: Optional[:class:`str`]
        The session id written to the events.
    engagement: :class:`bool`
        Whether the engagement states change during the session. When
        off the student stays focused and receptive.

    Returns
    -------
    :class:`~.SimRun`
        The events and the hidden state records.
    """

    if isinstance(tutor, MathTutor):
        step = _math_step
    elif isinstance(tutor, SpellingTutor):
        step = _spelling_step
    else:
        raise ValidationError(f"unsupported tutor {tutor!r}")

    sid = student.student_id
    sess = session_id or ""
    events = list()
    truth = list()

    if engagement:
        student.reset_engagement(rng)
    else:
        student.focused = student.receptive = True

    t = int(t0)
    game = tutor.game(tutor.current) if isinstance(tutor, MathTutor) else "spelling"
    events.append(Event(sid, sess, t, EventKind.nav_game, {"game": game}))

    for i in range(length):
        t += int(rng.integers(500, 2500))

        if rng.random() < 0.05:
            events.append(Event(sid, sess, t, EventKind.nav_shop, {}))
            t += int(rng.integers(5000, 20000))
            events.append(Event(sid, sess, t, EventKind.nav_game, {"game": game}))
        elif rng.random() < 0.03:
            events.append(Event(sid, sess, t, EventKind.nav_performance, {}))
            t += int(rng.integers(3000, 10000))
            events.append(Event(sid, sess, t, EventKind.nav_game, {"game": game}))

        try:
            t = step(student, tutor, rng, t, sid, sess, events, truth)
        except (ModuleComplete) as e:
            log.debug("%s: %s after %d task(s)", sid, e, i)
            break

        if engagement:
            student.step_engagement(rng)

    return SimRun(events, truth)


def simulate(config=None, seed=0, net=None, words=None, tables=None, params=None):
    """
    Simulates a whole population: every student trains for
    :attr:`~.SimulationConfig.sessions` sessions a day apart.

    Parameters
    ----------
    config: Optional[:class:`~.SimulationConfig`]
        The simulation settings.
    seed: :class:`int`
        The seed. The same seed gives the same output.
    net: Optional[:class:`~.SkillNet`]
        The net of math sessions. Defaults to the sample net.
    words: Optional[List[:class:`~.WordEntry`]]
        The words of spelling sessions. Defaults to the shipped words.
    tables: Optional[:class:`~.SpellingTables`]
        The character tables of spelling sessions.
    params: Optional[:class:`~.SkillParams`]
        The tutor's knowledge parameters.

    Returns
    -------
    Tuple[List[:class:`~.SyntheticStudent`], :class:`~.SimRun`]
        The students, with their final hidden state, and the run.
    """

    config = config or SimulationConfig()
    net = net or load_sample_skill_net()

    (population_seed, session_seed) = np.random.SeedSequence(seed).spawn(2)
    students = generate_population(config, int(population_seed.generate_state(1)[0]), net)

    events = list()
    truth = list()
    starts = [s for s in config.start_skills if s in net] or [net.order[0]]

    for (student, child) in zip(students, session_seed.spawn(len(students))):
        rng = np.random.default_rng(child)

        if config.scenario == "spelling":
            tutor = SpellingTutor(words, tables)
        else:
            tutor = MathTutor(net, params, starts[int(rng.integers(len(starts)))])

        for k in range(config.sessions):
            run = simulate_session(
                student,
                tutor,
                rng,
                config.session_length,
                t0=k * day_ms + int(rng.integers(0, 3600 * 1000)),
                session_id=f"{student.student_id}-{k}",
                engagement=config.engagement,
            )

            events.extend(run.events)
            truth.extend(run.truth)

    log.info("simulated %d student(s), %d event(s)", len(students), len(events))

    return students, SimRun(events, truth)


def write_truth(truth, path):
    """
    Writes hidden state records as canonical JSONL.
    """

    with atomic_write(path) as stream:
        for record in truth:
            stream.write(dump_json(record))
            stream.write("\n")


__all__ = [
    "MathTutor",
    "SimRun",
    "SpellingTutor",
    "day_ms",
    "simulate",
    "simulate_session",
    "write_truth",
]
