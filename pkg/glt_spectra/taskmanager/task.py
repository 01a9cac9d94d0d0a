"""Unit-of-work abstractions for table and figure sweeps.

`Task` is the minimal interface a sub-computation must satisfy.
`FunctionTask` wraps a plain callable with keyword arguments, which covers
every sweep cell the tables need.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Optional

###############################################################################
# Results
###############################################################################

class TaskResult:
    """Outcome of one task: a value or the exception that stopped it."""

    def __init__(self, task: "Task", value: Any = None, error: Optional[BaseException] = None):
        self.task = task
        self.value = value
        self.error = error

    @property
    def is_success(self) -> bool:
        return self.error is None

    @classmethod
    def from_error(cls, task: "Task", error: BaseException) -> "TaskResult":
        return cls(task=task, value=None, error=error)

    def __repr__(self) -> str:
        state = "ok" if self.is_success else f"error={self.error!r}"
        return f"TaskResult({self.task.name}, {state})"

###############################################################################
# Abstract base task
###############################################################################

class Task(ABC):
    """Minimal contract any task must satisfy."""

    def __init__(self, name: str, context: Any = None):
        self.name = name
        self.context = context

    @abstractmethod
    def run(self) -> Any:
        """Do the work and return its value; raise on failure."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"

###############################################################################
# Callable-backed task
###############################################################################

class FunctionTask(Task):
    """Run ``func(**kwargs)``; the keyword arguments double as the task's context."""

    def __init__(self, name: str, func: Callable[..., Any], kwargs: Optional[Dict[str, Any]] = None):
        kwargs = dict(kwargs or {})
        super().__init__(name, context=kwargs)
        self.func = func
        self.kwargs = kwargs

    def run(self) -> Any:
        return self.func(**self.kwargs)
