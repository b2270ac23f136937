"""Package version"""

import importlib.metadata

__all__ = [
    "__version__",
]

DISTRIBUTION_NAME: str = "lspair"

try:
    __version__: str = importlib.metadata.version(DISTRIBUTION_NAME)
except importlib.metadata.PackageNotFoundError:  # pragma: no cover
    # Source checkout without installation
    __version__ = "0.0.0"
