"""
Common types.
"""

import typing as t

from .display.base import BaseDisplay

DisplayClassType = t.Type[BaseDisplay]
DisplayType = BaseDisplay

__all__ = [
    "DisplayClassType",
    "DisplayType",
]
