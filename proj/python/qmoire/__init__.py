"""Twin-photon moire scan simulation and fringe analysis."""

from ._qmoire import *  # noqa: F401,F403
from ._qmoire import __version__  # noqa: F401
