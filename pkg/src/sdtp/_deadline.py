import time


class Deadline:
    """Cooperative time budget; ``None`` means unlimited."""

    __slots__ = ("limit", "start", "end")

    def __init__(self, limit: float | None = None):
        self.limit = limit
        self.start = time.perf_counter()
        self.end = None if limit is None else self.start + limit

    def expired(self) -> bool:
        return self.end is not None and time.perf_counter() > self.end

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def as_deadline(budget) -> Deadline:
    if isinstance(budget, Deadline):
        return budget
    return Deadline(budget)
