"""All intercepted errors"""

import typing as t

__all__ = [
    "BaseError",
    "LoadError",
    "ScenarioError",
    "SimulationError",
    "ContractViolation",
    "NoiseError",
    "InvalidInputError",
    "BracketingError",
]


class BaseError(Exception):
    """Common base to catch in CLI"""

    CODE: int = 3


class LoadError(BaseError):
    """Scenario source could not be parsed or does not match the schema"""

    CODE: int = 2

    def __init__(self, message: str, stack: t.List[str], line: t.Optional[int] = None) -> None:
        self.message: str = message
        self.stack: t.List[str] = stack
        self.line: t.Optional[int] = line
        text: str = message
        if stack:
            location: str = stack[-1] if line is None else f"{stack[-1]}:{line}"
            text = f"{location}: {message}"
        elif line is not None:
            text = f"line {line}: {message}"
        super().__init__(text)


class ScenarioError(BaseError):
    """Scenario is well-formed but semantically invalid"""

    CODE: int = 2


class SimulationError(BaseError):
    """Run-time failure"""

    CODE: int = 3


class ContractViolation(SimulationError):
    """Capacity model invariant broken"""


class NoiseError(SimulationError):
    """Loss estimate is not monotone in the capacity scale"""


class InvalidInputError(BaseError):
    """Estimator received unusable run results"""

    CODE: int = 3


class BracketingError(BaseError):
    """Equal-loss search bounds do not contain the target"""

    CODE: int = 4
