from greennet.config import PROJECT_VERSION

__version__ = PROJECT_VERSION
