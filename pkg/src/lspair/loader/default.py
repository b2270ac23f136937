"""YAML-based scenario load routines"""

from __future__ import annotations

import typing as t

import yaml

from .base import AbstractBaseScenarioLoader
from .paths import NodePath

__all__ = [
    "DefaultYAMLScenarioLoader",
]


class DefaultYAMLScenarioLoader(AbstractBaseScenarioLoader):
    """Default loader for YAML source files"""

    def _map_lines(self, node: yaml.Node, path: NodePath) -> None:
        """Remember the 1-based line of every key and list item"""
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                child_path: NodePath = path + (str(key_node.value),)
                self._line_map[child_path] = key_node.start_mark.line + 1
                self._map_lines(value_node, child_path)
        elif isinstance(node, yaml.SequenceNode):
            for num, item_node in enumerate(node.value):
                child_path = path + (num,)
                self._line_map[child_path] = item_node.start_mark.line + 1
                self._map_lines(item_node, child_path)

    def _parse(self, data: t.Union[str, bytes]) -> t.Any:
        if isinstance(data, bytes):
            data = data.decode()
        self._line_map = {(): 1}
        try:
            if (root_node := yaml.compose(data, Loader=yaml.SafeLoader)) is not None:
                self._map_lines(root_node, ())
            return yaml.safe_load(data)
        except yaml.MarkedYAMLError as e:
            line: t.Optional[int] = e.problem_mark.line + 1 if e.problem_mark is not None else None
            self._throw(f"Malformed YAML: {e.problem}", line=line)
        except yaml.YAMLError as e:
            self._throw(f"Malformed YAML: {e}")
