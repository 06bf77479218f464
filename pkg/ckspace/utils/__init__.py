from ckspace.utils.math import *
from ckspace.utils.math import __all__ as _math__all__
from ckspace.utils.text import *
from ckspace.utils.text import __all__ as _text__all__


__all__ = [
    *_math__all__,
    *_text__all__,
]
