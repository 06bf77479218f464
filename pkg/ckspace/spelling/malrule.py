import collections

from ckspace.utils.internal import Enum


class MalRuleCategory(Enum):
    """
    Represents a class of spelling errors.

    Attributes
    ----------
    capitalization
        A letter was typed in the wrong case.
    typing
        A key next to the intended one was hit, or any other
        substitution no other category explains.
    letter_confusion
        A visually similar letter was written, such as ``b`` for ``d``.
    phoneme_grapheme_match
        A letter of the same sound was written, such as ``v`` for ``f``.
    phoneme_omission
        A letter was left out.
    insertion
        An extra letter was written.
    transposition
        Two neighbouring letters were swapped.
    """

    capitalization = "Capitalization"
    typing = "Typing"
    letter_confusion = "LetterConfusion"
    phoneme_grapheme_match = "PhonemeGraphemeMatch"
    phoneme_omission = "PhonemeOmission"
    insertion = "Insertion"
    transposition = "Transposition"


MalRule = collections.namedtuple("MalRule", ["id", "category"])
MalRule.__doc__ = """
Represents an error production rule.

Attributes
----------
id: :class:`str`
    The rule id. Profiles and activation counts are keyed by it.
category: :class:`~.MalRuleCategory`
    The category.
"""


mal_rules = tuple(MalRule(c.value, c) for c in MalRuleCategory)
rule_ids = tuple(r.id for r in mal_rules)


def zero_activations():
    return {r: 0 for r in rule_ids}


__all__ = [
    "MalRule",
    "MalRuleCategory",
    "mal_rules",
    "rule_ids",
    "zero_activations",
]
