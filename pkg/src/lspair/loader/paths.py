"""Dotted paths into scenario documents: `traffic.pattern.0.mean_up=4`"""

import typing as t

import yaml

from ..exceptions import ScenarioError

__all__ = [
    "NodePath",
    "split_path",
    "represent_path",
    "parse_override",
    "assign_path",
    "apply_override",
]

NodePath = t.Tuple[t.Union[str, int], ...]


def split_path(path: str) -> NodePath:
    """Dotted string into keys; all-digit parts are list indices"""
    if not path or any(not part for part in path.split(".")):
        raise ScenarioError(f"Invalid document path: {path!r}")
    return tuple(int(part) if part.isdigit() else part for part in path.split("."))


def represent_path(path: NodePath) -> str:
    """Inverse of split_path"""
    return ".".join(map(str, path)) if path else "document root"


def parse_override(text: str) -> t.Tuple[NodePath, t.Any]:
    """Split `path=value`; the value is read as a YAML scalar or flow collection"""
    path, separator, raw_value = text.partition("=")
    if not separator:
        raise ScenarioError(f"Invalid override {text!r}: expected path=value")
    try:
        value: t.Any = yaml.safe_load(raw_value) if raw_value.strip() else ""
    except yaml.YAMLError as e:
        raise ScenarioError(f"Invalid override {text!r}: {e}") from None
    return split_path(path.strip()), value


def assign_path(document: t.Dict[str, t.Any], path: NodePath, value: t.Any) -> None:
    """Set a nested value; missing mappings on the way are created"""
    node: t.Any = document
    for depth, key in enumerate(path):
        last: bool = depth == len(path) - 1
        if isinstance(node, list):
            if not isinstance(key, int) or not 0 <= key < len(node):
                raise ScenarioError(f"No list item {key!r} at {represent_path(path[:depth])}")
        elif isinstance(node, dict):
            key = str(key)
            if not last and node.get(key) is None:
                node[key] = {}
        else:
            raise ScenarioError(f"Can't descend into {represent_path(path[:depth])}: not a mapping nor a list")
        if last:
            node[key] = value
        else:
            node = node[key]


def apply_override(document: t.Dict[str, t.Any], text: str) -> None:
    """Parse and assign one override"""
    path, value = parse_override(text)
    assign_path(document, path, value)
