"""Longitudinal analysis of archived website privacy policies: archive
crawling, text extraction, readability and wording metrics, term tracking,
topical segmentation, content labeling and the statistics behind them."""
from ._accel import USE_NUMBA
from .config import ConfigError, RunConfig, load_config

__version__ = "0.1.0"

__all__ = ["ConfigError", "RunConfig", "USE_NUMBA", "__version__", "load_config"]
