"""Gas-sensor odour classification: baseline-correction features, PNN-based
feature ranking, PCA fusion and fire-detection metrics."""

from ._firenose import *  # noqa: F401,F403
from ._firenose import __doc__  # noqa: F401

__version__ = "0.1.0"
