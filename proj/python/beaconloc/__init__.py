"""Range-free 3-D sensor localization with mobile anchors."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
