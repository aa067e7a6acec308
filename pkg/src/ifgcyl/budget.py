"""Enumeration limits.

Every exhaustive routine takes an optional ``Budget``; exceeding a limit
raises :class:`~ifgcyl.errors.BudgetExceeded` rather than truncating.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded


@dataclass(frozen=True)
class Budget:
    enumeration: int = 2**20
    meaning_valuations: int = 16
    search_valuations: int = 27
    search_steps: int = 2**24
    closure_cap: int = 10_000

    def check(self, what: str, count: int, limit: int) -> None:
        if count > limit:
            raise BudgetExceeded(f"{what}: {count} exceeds limit {limit}")


DEFAULT_BUDGET = Budget()
