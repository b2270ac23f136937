"""Common loader utilities"""

import io
import typing as t
from pathlib import Path

from .base import AbstractBaseScenarioLoader
from .default import DefaultYAMLScenarioLoader
from ..exceptions import LoadError

__all__ = [
    "get_default_loader_class_for_source",
    "load_scenario_file",
]

STREAM_DEFAULT_LOADER: t.Type[AbstractBaseScenarioLoader] = DefaultYAMLScenarioLoader
SUFFIX_TO_LOADER_MAP: t.Dict[str, t.Type[AbstractBaseScenarioLoader]] = {
    ".yml": DefaultYAMLScenarioLoader,
    ".yaml": DefaultYAMLScenarioLoader,
}


def get_default_loader_class_for_source(
    source: t.Union[str, Path, io.TextIOBase],
) -> t.Type[AbstractBaseScenarioLoader]:
    """Return loader class based on file stats"""
    if isinstance(source, io.TextIOBase):
        return STREAM_DEFAULT_LOADER
    source_path: Path = Path(source)
    if (loader_class := SUFFIX_TO_LOADER_MAP.get(source_path.suffix)) is None:
        raise LoadError(f"Unrecognized scenario source: {source_path} (expected .yml or .yaml)", stack=[])
    return loader_class


def load_scenario_file(source: t.Union[str, Path], overrides: t.Iterable[str] = ()):
    """Pick a loader by suffix and load"""
    return get_default_loader_class_for_source(source)().load(source, overrides)
