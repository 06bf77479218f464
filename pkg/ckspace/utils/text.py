import re
import unicodedata


_erase = re.compile(r"[^\u0008\u007F]?[\u0008\u007F]")


def normalize(s):
    """
    Normalizes typed text.

    This function does the following, in order:

    - Calls :func:`unicodedata.normalize("NFC", ...) \
      <unicodedata.normalize>`.
    - Emulates backspace and delete, each erasing the character before
      it.

    Parameters
    ----------
    s: :class:`str`
        The string to normalize.

    Returns
    -------
    :class:`str`
        The normalized string.

    Examples
    --------

    .. code-block:: python3

        >>> normalize("Bla\\bal")
        "Blal"

        >>> normalize("\\u0061\\u0301")  # á
        "\\u00E1"
    """

    s = unicodedata.normalize("NFC", s)

    while "\b" in s or "\u007F" in s:
        s = _erase.sub("", s, count=1)

    return s


def letters(s):
    """
    Counts the cased letters of a string, the positions where a
    capitalization error can occur.

    Parameters
    ----------
    s: :class:`str`
        The string.

    Returns
    -------
    :class:`int`
        The number of characters with distinct upper and lower forms.
    """

    return sum(1 for c in s if c.lower() != c.upper())


__all__ = [
    "letters",
    "normalize",
]
