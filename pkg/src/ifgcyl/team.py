"""Team combinatorics: agreement outside a slash set, saturated covers,
the partial union, variants and independent choice functions.

Teams here are frozensets of valuation tuples.  These functions are the
readable reference versions; the evaluator works on bitmasks through
:class:`ifgcyl.model.Space` and is cross-checked against this module.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence

from .budget import DEFAULT_BUDGET, Budget
from .errors import WellFormednessError

Valuation = tuple[int, ...]
Team = frozenset


def agrees_outside(a: Valuation, b: Valuation, slash: Iterable[int]) -> bool:
    if len(a) != len(b):
        raise WellFormednessError(f"valuations {a} and {b} have different lengths")
    slash = set(slash)
    return all(x == y for k, (x, y) in enumerate(zip(a, b)) if k not in slash)


def _key(a: Valuation, slash: set[int]) -> tuple:
    return tuple(x for k, x in enumerate(a) if k not in slash)


def classes(team: Iterable[Valuation], slash: Iterable[int]) -> list[frozenset[Valuation]]:
    """Blocks of the team under agreement outside ``slash``, ordered by least member."""
    slash = set(slash)
    groups: dict[tuple, list[Valuation]] = {}
    for a in sorted(team):
        groups.setdefault(_key(a, slash), []).append(a)
    return [frozenset(g) for g in groups.values()]


def union_j(parts: Sequence[Iterable[Valuation]], slash: Iterable[int]) -> frozenset | None:
    """Union of ``parts`` if they form a saturated disjoint cover of it, else ``None``."""
    slash = set(slash)
    parts = [frozenset(p) for p in parts]
    owner: dict[Valuation, int] = {}
    for i, part in enumerate(parts):
        for a in part:
            if a in owner:
                return None
            owner[a] = i
    by_class: dict[tuple, int] = {}
    for a, i in owner.items():
        if by_class.setdefault(_key(a, slash), i) != i:
            return None
    return frozenset(owner)


def saturated_covers(
    team: Iterable[Valuation],
    slash: Iterable[int],
    k: int = 2,
    budget: Budget = DEFAULT_BUDGET,
) -> Iterator[tuple[frozenset, ...]]:
    """Every ``k``-tuple of parts whose partial union is ``team``.

    Each class of the team goes wholly into one part, so there are
    ``k ** len(classes)`` covers.  Empty parts are allowed.
    """
    if k < 1:
        raise WellFormednessError("need at least one part")
    blocks = classes(team, slash)
    budget.check("saturated covers", k ** len(blocks), budget.enumeration)
    for assignment in itertools.product(range(k), repeat=len(blocks)):
        parts = [set() for _ in range(k)]
        for block, i in zip(blocks, assignment):
            parts[i] |= block
        yield tuple(frozenset(p) for p in parts)


def variant(a: Valuation, n: int, b: int, size: int | None = None) -> Valuation:
    if not 0 <= n < len(a):
        raise WellFormednessError(f"coordinate {n} out of range for {a}")
    if size is not None and not 0 <= b < size:
        raise WellFormednessError(f"element {b} outside a universe of size {size}")
    return a[:n] + (b,) + a[n + 1:]


def variation(
    team: Iterable[Valuation],
    n: int,
    by: int | Iterable[int] | Mapping[Valuation, int] | Callable[[Valuation], int],
) -> frozenset[Valuation]:
    """Rewrite coordinate ``n`` of every member.

    ``by`` may be a single element, a set of elements (every member spawns one
    variant per element) or a choice function given as a mapping or callable,
    which must be defined on every member.
    """
    team = list(team)
    if isinstance(by, int):
        return frozenset(variant(a, n, by) for a in team)
    if isinstance(by, Mapping):
        missing = [a for a in team if a not in by]
        if missing:
            raise WellFormednessError(f"choice function undefined on {missing[0]}")
        return frozenset(variant(a, n, by[a]) for a in team)
    if callable(by):
        return frozenset(variant(a, n, by(a)) for a in team)
    values = list(by)
    return frozenset(variant(a, n, b) for a in team for b in values)


def independent_functions(
    team: Iterable[Valuation],
    slash: Iterable[int],
    size: int,
    budget: Budget = DEFAULT_BUDGET,
) -> Iterator[dict[Valuation, int]]:
    """Every function team -> universe that is constant on each class."""
    blocks = classes(team, slash)
    budget.check("independent functions", size ** len(blocks), budget.enumeration)
    for choice in itertools.product(range(size), repeat=len(blocks)):
        yield {a: b for block, b in zip(blocks, choice) for a in block}
