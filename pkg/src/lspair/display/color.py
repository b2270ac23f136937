"""Colorizing utils"""

import click

from ..config.constants import C

__all__ = [
    "Color",
]


class Color:
    """Text color wrapping"""

    @classmethod
    def gray(cls, message: str) -> str:
        """Make a string gray"""
        return cls._add_formatting(message, "bright_black")

    @classmethod
    def green(cls, message: str) -> str:
        """Make a string green"""
        return cls._add_formatting(message, "green")

    @classmethod
    def yellow(cls, message: str) -> str:
        """Make a string yellow"""
        return cls._add_formatting(message, "yellow")

    @classmethod
    def bold(cls, message: str) -> str:
        """Make a string stand out"""
        return click.style(message, bold=True) if C.USE_COLOR else message

    @classmethod
    def _add_formatting(cls, message: str, color: str) -> str:
        return click.style(message, fg=color) if C.USE_COLOR else message
