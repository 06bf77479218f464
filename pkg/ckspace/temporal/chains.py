import collections
import logging

import numpy as np

from ckspace.errors import ValidationError
from ckspace.events.kind import EventKind


log = logging.getLogger(__name__)


StateMapping = collections.namedtuple("StateMapping", ["name", "states", "kinds"])
StateMapping.__doc__ = """
Maps event kinds to the states of a behavior chain.

Attributes
----------
name: :class:`str`
    The mapping name, as used by :attr:`~.TemporalConfig.chain`.
states: Tuple[:class:`str`, ...]
    The states, in matrix order.
kinds: Dict[:class:`~.EventKind`, :class:`str`]
    The state of each event kind. Other kinds are ignored.
"""

NAVIGATION = StateMapping(
    "navigation",
    ("Game", "Shop", "Performance"),
    {
        EventKind.nav_game: "Game",
        EventKind.nav_shop: "Shop",
        EventKind.nav_performance: "Performance",
    },
)

INPUT = StateMapping(
    "input",
    ("Input", "InvalidInput", "Backspace", "Enter"),
    {
        EventKind.key_input: "Input",
        EventKind.invalid_input: "InvalidInput",
        EventKind.backspace: "Backspace",
        EventKind.enter: "Enter",
    },
)

mappings = {m.name: m for m in (NAVIGATION, INPUT)}


class BehaviorChain:
    """
    Summarizes the behavior of one session as a Markov chain.

    Parameters
    ----------
    states: Tuple[:class:`str`, ...]
        The states.
    transition: :class:`numpy.ndarray`
        The row-stochastic transition matrix.
    occupancy: :class:`numpy.ndarray`
        The share of events spent in each state.
    """

    __slots__ = ("states", "transition", "occupancy")

    def __init__(self, states, transition, occupancy):
        self.states = tuple(states)
        self.transition = np.asarray(transition, dtype=float)
        self.occupancy = np.asarray(occupancy, dtype=float)

        m = len(self.states)
        if self.transition.shape != (m, m) or self.occupancy.shape != (m,):
            raise ValidationError("chain dimensions disagree with its states")

        if not np.allclose(self.transition.sum(axis=1), 1.0, atol=1e-9):
            raise ValidationError("transition rows must sum to 1")

        if not np.isclose(self.occupancy.sum(), 1.0, atol=1e-9):
            raise ValidationError("occupancy must sum to 1")

    def __repr__(self):
        return f"<BehaviorChain states={'/'.join(self.states)}>"

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented

        return (
            self.states == other.states
            and np.array_equal(self.transition, other.transition)
            and np.array_equal(self.occupancy, other.occupancy)
        )


def estimate_chain(events, mapping=NAVIGATION, smoothing=0.5):
    """
    Estimates the behavior chain of a session.

    Every transition cell receives ``smoothing`` additional counts before
    the rows are normalized, so states that were never left still have
    a uniform row. An empty sequence gives uniform rows and a uniform
    occupancy.

    Parameters
    ----------
    events: Iterable[:class:`~.Event`]
        The events, e.g. a :class:`~.Session`.
    mapping: :class:`~.StateMapping`
        The states.
    smoothing: :class:`float`
        The additive count.

    Returns
    -------
    :class:`~.BehaviorChain`
        The chain.
    """

    if smoothing <= 0:
        raise ValidationError("smoothing must be positive")

    index = {s: i for (i, s) in enumerate(mapping.states)}
    sequence = [index[mapping.kinds[e.kind]] for e in events if e.kind in mapping.kinds]
    m = len(mapping.states)

    counts = np.zeros((m, m))
    for (a, b) in zip(sequence, sequence[1:]):
        counts[a, b] += 1

    counts += smoothing
    transition = counts / counts.sum(axis=1, keepdims=True)

    if sequence:
        occupancy = np.bincount(sequence, minlength=m) / len(sequence)
    else:
        occupancy = np.full(m, 1.0 / m)

    return BehaviorChain(mapping.states, transition, occupancy)


def chain_distance(a, b):
    """
    Returns the occupancy-weighted squared distance between two chains,
    the sum over rows of the squared row difference weighted by the
    mean occupancy of the row's state.

    Raises
    ------
    :exc:`~.ValidationError`
        The chains have different states.
    """

    if a.states != b.states:
        raise ValidationError(f"cannot compare chains over {a.states} and {b.states}")

    weights = (a.occupancy + b.occupancy) / 2.0

    return float(weights @ ((a.transition - b.transition) ** 2).sum(axis=1))


def chain_similarity(a, b, sigma=1.0):
    """
    Returns the Gaussian similarity ``exp(-d / sigma ** 2)`` of two
    chains, ``d`` being :func:`~.chain_distance`.
    """

    if sigma <= 0:
        raise ValidationError("sigma must be positive")

    return float(np.exp(-chain_distance(a, b) / sigma ** 2))


def similarity_matrix(chains, sigma=None):
    """
    Calculates the pairwise similarities of chains.

    Parameters
    ----------
    chains: List[:class:`~.BehaviorChain`]
        The chains.
    sigma: Optional[:class:`float`]
        The bandwidth. ``None`` takes the median pairwise distance,
        falling back to 1 when it is 0.

    Returns
    -------
    :class:`numpy.ndarray`
        The symmetric similarities with a unit diagonal.
    """

    n = len(chains)
    squared = np.zeros((n, n))

    for i in range(n):
        for j in range(i + 1, n):
            squared[i, j] = squared[j, i] = chain_distance(chains[i], chains[j])

    if sigma is None:
        pairs = np.sqrt(squared[np.triu_indices(n, 1)])
        sigma = float(np.median(pairs)) if len(pairs) else 1.0
        if sigma <= 0:
            sigma = 1.0

    W = np.exp(-squared / sigma ** 2)
    np.fill_diagonal(W, 1.0)

    return W


__all__ = [
    "BehaviorChain",
    "INPUT",
    "NAVIGATION",
    "StateMapping",
    "chain_distance",
    "chain_similarity",
    "estimate_chain",
    "mappings",
    "similarity_matrix",
]
