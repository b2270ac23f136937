"""Base interface class for all loaders"""

from __future__ import annotations

import contextlib
import copy
import dataclasses
import typing as t
from enum import Enum
from pathlib import Path

import dacite
from classlogging import LoggerMixin

from .paths import NodePath, apply_override, assign_path, represent_path, split_path
from .schema import ScenarioFile
from ..exceptions import LoadError, ScenarioError
from ..policy import KNOWN_POLICIES, BasePolicy, PolicyKind

__all__ = [
    "AbstractBaseScenarioLoader",
]

RT = t.TypeVar("RT")


def _unwrap(type_: t.Any) -> t.Any:
    """Strip Optional[...] and List[...] down to the item type"""
    while (origin := t.get_origin(type_)) in (t.Union, list):
        args = [arg for arg in t.get_args(type_) if arg is not type(None)]
        if origin is t.Union and len(args) != 1:
            break
        type_ = args[0]
    return type_


class AbstractBaseScenarioLoader(LoggerMixin):
    """Loaders base class"""

    def __init__(self) -> None:
        self._raw_file_names_stack: t.List[str] = []
        self._line_map: t.Dict[NodePath, int] = {}

    def _line_for(self, path: t.Sequence[t.Union[str, int]]) -> t.Optional[int]:
        """Line of the nearest known node on the path"""
        key: NodePath = tuple(path)
        while key:
            if key in self._line_map:
                return self._line_map[key]
            key = key[:-1]
        return self._line_map.get(())

    def _throw(
        self,
        message: str,
        path: t.Sequence[t.Union[str, int]] = (),
        line: t.Optional[int] = None,
    ) -> t.NoReturn:
        """Raise loader exception from text"""
        raise LoadError(
            message=message,
            stack=list(self._raw_file_names_stack),
            line=self._line_for(path) if line is None else line,
        ) from None

    @contextlib.contextmanager
    def _source(self, name: str) -> t.Iterator[None]:
        self._raw_file_names_stack.append(name)
        try:
            yield
        finally:
            self._raw_file_names_stack.pop()

    @contextlib.contextmanager
    def _read_file(self, source_file: t.Union[str, Path]) -> t.Iterator[bytes]:
        """Read file data"""
        source_path: Path = Path(source_file).resolve()
        with self._source(str(source_file)):
            self.logger.debug(f"Loading scenario file: {source_path}")
            if not source_path.is_file():
                self._throw(f"Scenario file not found: {source_path}")
            yield source_path.read_bytes()

    def _parse(self, data: t.Union[str, bytes]) -> t.Any:
        """Turn text into a plain document, filling the line map"""
        raise NotImplementedError

    def loads(self, data: t.Union[str, bytes], overrides: t.Iterable[str] = ()) -> ScenarioFile:
        """Load scenario from text"""
        if not self._raw_file_names_stack:
            with self._source("<string>"):
                return self.load_document(self._parse(data), overrides)
        return self.load_document(self._parse(data), overrides)

    def load(self, source_file: t.Union[str, Path], overrides: t.Iterable[str] = ()) -> ScenarioFile:
        """Load scenario from file"""
        with self._read_file(source_file) as file_data:
            return self.loads(file_data, overrides)

    def load_sweep(
        self,
        source_file: t.Union[str, Path],
        path: str,
        values: t.Iterable[t.Any],
        overrides: t.Sequence[str] = (),
    ) -> t.List[ScenarioFile]:
        """Load one variant of the file per value assigned at the dotted path"""
        with self._read_file(source_file) as file_data:
            document: t.Any = self._parse(file_data)
            try:
                node_path: NodePath = split_path(path)
            except ScenarioError as e:
                self._throw(str(e))
            return [
                self.load_document(copy.deepcopy(document), overrides, assignments=[(node_path, value)])
                for value in values
            ]

    def load_document(
        self,
        document: t.Any,
        overrides: t.Iterable[str] = (),
        source: t.Optional[str] = None,
        assignments: t.Iterable[t.Tuple[NodePath, t.Any]] = (),
    ) -> ScenarioFile:
        """Validate an already parsed document. Overrides go first, then the assignments."""
        if source is not None:
            with self._source(source):
                return self.load_document(document, overrides, assignments=assignments)
        if not isinstance(document, dict):
            self._throw(f"Unknown scenario structure: {type(document)!r} (should be a dict)")
        for override in overrides:
            try:
                apply_override(document, override)
            except ScenarioError as e:
                self._throw(str(e))
        for node_path, value in assignments:
            try:
                assign_path(document, node_path, value)
            except ScenarioError as e:
                self._throw(str(e), path=node_path)
        self._check_keys(ScenarioFile, document, ())
        self._check_policy_kind(document)
        scenario_file: ScenarioFile = self._build(document)
        self._check_semantics(scenario_file)
        return scenario_file

    def _check_keys(self, data_class: t.Type[t.Any], node: t.Any, path: NodePath) -> None:
        """Reject unknown keys, pointing at the enclosing node"""
        if not isinstance(node, dict):
            return
        hints: t.Dict[str, t.Any] = t.get_type_hints(data_class)
        known: t.Set[str] = {field.name for field in dataclasses.fields(data_class)}
        if unknown := sorted(set(map(str, node)) - known):
            self._throw(
                f"Unrecognized keys in {represent_path(path)}: {unknown} (expected some of: {sorted(known)})",
                path=path,
            )
        for key, value in node.items():
            child_type: t.Any = _unwrap(hints[key])
            if not dataclasses.is_dataclass(child_type):
                continue
            if isinstance(value, list):
                for num, item in enumerate(value):
                    self._check_keys(child_type, item, path + (key, num))
            else:
                self._check_keys(child_type, value, path + (key,))

    def _check_policy_kind(self, document: t.Dict[str, t.Any]) -> None:
        policy_node: t.Any = document.get("policy")
        if not isinstance(policy_node, dict) or not isinstance(kind := policy_node.get("kind"), str):
            return
        allowed: t.List[str] = [policy_kind.value for policy_kind in PolicyKind]
        if kind not in allowed:
            self._throw(
                f"Unknown policy kind: {kind!r} (expected one of: {', '.join(allowed)})",
                path=("policy", "kind"),
            )

    def _build(self, document: t.Dict[str, t.Any]) -> ScenarioFile:
        try:
            return dacite.from_dict(
                data_class=ScenarioFile,
                data=document,
                config=dacite.Config(strict=True, cast=[Enum, float]),
            )
        except dacite.MissingValueError as e:
            field_path: NodePath = tuple(e.field_path.split(".")) if e.field_path else ()
            self._throw(f"Missing key: {e.field_path!r}", path=field_path[:-1])
        except dacite.WrongTypeError as e:
            self._throw(
                f"Unrecognized {e.field_path!r} content type: {type(e.value).__name__} (expected {e.field_type!r})",
                path=tuple(e.field_path.split(".")),
            )
        except (dacite.DaciteError, ValueError, TypeError) as e:
            self._throw(f"Invalid scenario: {e}")

    def _check_semantics(self, scenario_file: ScenarioFile) -> None:
        """Build every model object once, anchoring failures to their section"""
        for num in range(len(scenario_file.topology)):
            self._guard(("topology", num), scenario_file.build_pair, num)
        topology = self._guard(("topology",), scenario_file.build_topology)
        self._guard(("traffic", "pattern"), scenario_file.build_pattern)
        self._guard(("traffic",), scenario_file.build_arrival)
        delay_mix = self._guard(("traffic", "delay_mix"), scenario_file.build_delay_mix)
        policy_class: t.Type[BasePolicy] = KNOWN_POLICIES[scenario_file.policy.kind]
        self._guard(("policy", "kind"), policy_class.validate, topology, delay_mix is not None)
        if scenario_file.run.replications < 1:
            self._throw(f"replications must be positive (got {scenario_file.run.replications})", path=("run",))
        self._guard(("run",), lambda: scenario_file.to_scenario().validate())

    def _guard(self, path: NodePath, func: t.Callable[..., RT], *args: t.Any) -> RT:
        try:
            return func(*args)
        except ScenarioError as e:
            self._throw(str(e), path=path)
