"""Step and wall-clock budgets for the exhaustive searches."""
from __future__ import annotations

import os
import time


class BudgetExceeded(RuntimeError):
    """Raised when a search runs out of its step or time allowance."""


class Budget:
    """A countdown that searches tick once per node.

    Either limit may be None.  A budget is single-use and not thread-safe;
    give each concurrent search its own instance.
    """

    def __init__(self, max_steps: int | None = None, ms: float | None = None):
        self.max_steps = max_steps
        self.ms = ms
        self.steps = 0
        self._deadline = None if ms is None else time.monotonic() + ms / 1000.0

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.max_steps is not None and self.steps > self.max_steps:
            raise BudgetExceeded(f"step budget of {self.max_steps} exhausted")
        # checking the clock every step is measurable in the hot loops
        if self._deadline is not None and (self.steps & 0xFF) == 0:
            if time.monotonic() > self._deadline:
                raise BudgetExceeded(f"time budget of {self.ms} ms exhausted")

    @classmethod
    def from_env(cls, default_ms: float | None = None) -> "Budget":
        raw = os.environ.get("BETAGRAPH_BUDGET_MS")
        if raw:
            return cls(ms=float(raw))
        return cls(ms=default_ms)


def unlimited() -> Budget:
    return Budget()
