from __future__ import annotations

import os

ENV_BUDGET = "SPCHECK_BUDGET"
DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget.

    ``progress`` carries whatever partial diagnostics the caller had gathered
    before refusing, so that reports can say how far the run got.
    """

    def __init__(self, message: str, *, needed: int | None = None,
                 budget: int | None = None, progress: dict | None = None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget
        self.progress = dict(progress or {})


def default_budget() -> int:
    raw = os.environ.get(ENV_BUDGET)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_BUDGET} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{ENV_BUDGET} must be positive")
    return value
