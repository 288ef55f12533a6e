"""Cold-atom-beam Mach-Zehnder interferometer and inertial navigation simulator."""

from coldnav._core import *  # noqa: F401,F403
from coldnav._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
