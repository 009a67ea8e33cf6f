"""Adaptive homodyne detection of coherent-state ensembles."""

from ._homodyne import *  # noqa: F401,F403
from ._homodyne import __doc__  # noqa: F401

BUILTIN_ENSEMBLES = ("8psk", "16qam", "star")
