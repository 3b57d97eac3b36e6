"""Time-fractional porous-medium solver: L1-Caputo JKO stepping over a
mobility-weighted dynamic transport metric, with spectral fractional calculus."""

from ._fjko import *  # noqa: F401,F403
from ._fjko import __version__  # noqa: F401
