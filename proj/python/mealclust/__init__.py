"""Meal-taking activity clustering: episodes from home-sensor logs, compared
under K-Means, GMM and DBSCAN with Davies-Bouldin model selection."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
