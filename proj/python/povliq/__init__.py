"""POV liquidation, block pricing and Monte Carlo validation."""

from ._povliq import *  # noqa: F401,F403
from ._povliq import __doc__, PovliqError  # noqa: F401
