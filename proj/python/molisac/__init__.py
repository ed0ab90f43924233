"""Microfluidic molecular-communication ISAC simulator.

Thin re-export of the compiled core: Markov channel construction, channel
impulse responses, OOK observation synthesis, and the pilot-assisted joint
distance-sensing / data-detection receiver with its Monte Carlo harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
