"""GP black-box optimization with a unique-candidate posterior and a
low-switching epoch loop."""

from ._minigp import *  # noqa: F401,F403
from ._minigp import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
