from .task import FunctionTask, Task, TaskResult
from .taskmanager import TaskManager

__all__ = [
    'TaskManager',
    'Task',
    'FunctionTask',
    'TaskResult',
]
