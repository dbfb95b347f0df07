"""Electric quantum walks, transducers and welded-tree benchmarks."""

from ._eqwalk import *  # noqa: F401,F403
from ._eqwalk import __version__  # noqa: F401
