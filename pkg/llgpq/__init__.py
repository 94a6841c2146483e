from importlib.metadata import PackageNotFoundError, version
from logging import INFO

from py9lib.log import get_logger

LOG = get_logger("llgpq")
LOG.setLevel(INFO)

try:
    __version__ = version("llgpq")
except PackageNotFoundError:
    __version__ = "0+unknown"
