import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence

from .task import Task, TaskResult


class TaskManager:
    """
    Runs independent tasks on worker threads.
    Results come back in submission order, so output does not depend on the
    number of workers.
    """

    def __init__(self, num_workers: int = 1):
        """
        Initialize the TaskManager.

        Args:
            num_workers: Maximum number of concurrent worker threads
        """
        if num_workers < 1:
            raise ValueError(f"num_workers must be >= 1 (got {num_workers})")
        self.num_workers = num_workers
        self.logger = logging.getLogger(__name__)

    def process_tasks(self, tasks: Sequence[Task]) -> List[TaskResult]:
        """
        Run every task and collect one TaskResult per task.

        A failing task never stops the others; its exception is kept in the
        result.
        """
        tasks = list(tasks)
        self.logger.debug(f"TaskManager started with {len(tasks)} tasks on {self.num_workers} workers")
        if self.num_workers == 1:
            results = [self._run_one(task) for task in tasks]
        else:
            with ThreadPoolExecutor(max_workers=self.num_workers) as executor:
                futures = [executor.submit(self._run_one, task) for task in tasks]
                results = [future.result() for future in futures]
        failed = sum(not r.is_success for r in results)
        if failed:
            self.logger.warning(f"{failed} of {len(results)} tasks failed")
        return results

    def _run_one(self, task: Task) -> TaskResult:
        try:
            value = task.run()
        except Exception as e:
            self.logger.error(f"Task {task.name} failed: {e}")
            return TaskResult.from_error(task, e)
        self.logger.debug(f"Task {task.name} done")
        return TaskResult(task, value)
