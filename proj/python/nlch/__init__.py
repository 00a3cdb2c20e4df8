"""Spectral-Galerkin simulator and statistical verification harness for the
stochastic nonlocal convective Cahn-Hilliard equation."""

from nlch._nlch import *  # noqa: F401,F403
from nlch._nlch import __doc__  # noqa: F401

__version__ = "0.1.0"
