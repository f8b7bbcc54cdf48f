"""Python bindings for the crane anti-sway simulation lab."""

from ._cranesim import *  # noqa: F401,F403
from ._cranesim import __doc__, __version__  # noqa: F401
