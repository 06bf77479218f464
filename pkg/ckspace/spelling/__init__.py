from ckspace.spelling.malrule import *
from ckspace.spelling.malrule import __all__ as _malrule__all__
from ckspace.spelling.words import *
from ckspace.spelling.words import __all__ as _words__all__
from ckspace.spelling.analysis import *
from ckspace.spelling.analysis import __all__ as _analysis__all__
from ckspace.spelling.profile import *
from ckspace.spelling.profile import __all__ as _profile__all__
from ckspace.spelling.cycle import *
from ckspace.spelling.cycle import __all__ as _cycle__all__
from ckspace.spelling.selection import *
from ckspace.spelling.selection import __all__ as _selection__all__


__all__ = [
    *_malrule__all__,
    *_words__all__,
    *_analysis__all__,
    *_profile__all__,
    *_cycle__all__,
    *_selection__all__,
]
