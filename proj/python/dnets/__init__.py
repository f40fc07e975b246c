"""Discrete neural nets on finite universes.

Activation functions are operations drawn from a clone (projections,
endomorphism twists, indicator and dominion polymorphisms of the Hamming
graph), the trainer is a seeded local search over neighbor functions, and the
flagship application learns transformations of binary images.
"""

from dnets._dnets import *  # noqa: F401,F403
from dnets._dnets import __doc__ as _core_doc  # noqa: F401
