"""Randomly wired GNN toolkit: architecture generation, exact path
statistics, receptive-field analysis and desk-scale training."""

from ._ranwire import *  # noqa: F401,F403
from ._ranwire import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
