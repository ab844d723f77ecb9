"""Exact verification of local scale invariance for logarithmic doublets."""
from .report import ENGINE_VERSION as __version__
