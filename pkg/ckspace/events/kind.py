from ckspace.utils.internal import Enum


class EventKind(Enum):
    """
    Represents the kind of a logged interaction. Member values are the
    wire strings of the log format.

    Attributes
    ----------
    key_input
        A correct letter or digit was entered.
    invalid_input
        An incorrect letter or digit was entered.
    backspace
        A character was erased.
    enter
        The complete answer was confirmed.
    task_shown
        A task was presented.
    answer_submitted
        An answer was evaluated. The payload carries ``correct`` and
        ``time_ms``.
    nav_game
        The student entered a game.
    nav_shop
        The student entered the shop.
    nav_performance
        The student opened the performance overview.
    help_call
        The student asked for help.
    """

    key_input = "key"
    invalid_input = "invalid"
    backspace = "bksp"
    enter = "enter"
    task_shown = "task"
    answer_submitted = "answer"
    nav_game = "nav_game"
    nav_shop = "nav_shop"
    nav_performance = "nav_perf"
    help_call = "help"


input_kinds = frozenset(
    {EventKind.key_input, EventKind.invalid_input, EventKind.backspace, EventKind.enter}
)


__all__ = [
    "EventKind",
    "input_kinds",
]
