"""Formula generators for exhaustive and randomized checking."""
from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Sequence

from .formula import And, Exists, Forall, Formula, Node, Not, Or


def all_slashes(n: int) -> list[frozenset[int]]:
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]


def enumerate_nodes(
    atoms: Sequence[Node],
    n: int,
    max_depth: int,
    slashes: Sequence[frozenset[int]] = (frozenset(),),
    sugar: bool = True,
) -> list[Node]:
    """Every formula of depth at most ``max_depth`` (atoms have depth 1).

    Connectives use only the given slash sets; with ``sugar`` the
    conjunction and universal forms are included as well.
    """
    if max_depth < 1:
        return []
    levels: list[list[Node]] = [list(atoms)]  # levels[d] = formulas of depth exactly d+1
    for _ in range(max_depth - 1):
        below = [f for level in levels for f in level]
        top = levels[-1]
        top_set = set(top)
        new: list[Node] = [Not(f) for f in top]
        binaries = [Or] + ([And] if sugar else [])
        quants = [Exists] + ([Forall] if sugar else [])
        for left, right in itertools.product(below, repeat=2):
            if left not in top_set and right not in top_set:
                continue
            for J in slashes:
                new.extend(op(J, left, right) for op in binaries)
        for f in top:
            for k in range(n):
                for J in slashes:
                    new.extend(q(k, J, f) for q in quants)
        levels.append(new)
    return [f for level in levels for f in level]


def enumerate_formulas(atoms, n, max_depth, slashes=(frozenset(),), sugar=True) -> Iterator[Formula]:
    for node in enumerate_nodes(atoms, n, max_depth, slashes, sugar):
        yield Formula(node, n)


def random_node(
    rng: random.Random,
    atoms: Sequence[Node],
    n: int,
    max_depth: int,
    slashes: Sequence[frozenset[int]] = (frozenset(),),
    sugar: bool = True,
) -> Node:
    if max_depth <= 1 or rng.random() < 0.2:
        return rng.choice(atoms)
    kinds = ["not", "or", "exists"] + (["and", "forall"] if sugar else [])
    kind = rng.choice(kinds)
    sub = lambda: random_node(rng, atoms, n, max_depth - 1, slashes, sugar)  # noqa: E731
    if kind == "not":
        return Not(sub())
    if kind in ("or", "and"):
        return (Or if kind == "or" else And)(rng.choice(slashes), sub(), sub())
    return (Exists if kind == "exists" else Forall)(rng.randrange(n), rng.choice(slashes), sub())


def random_formula(rng, atoms, n, max_depth, slashes=(frozenset(),), sugar=True) -> Formula:
    return Formula(random_node(rng, atoms, n, max_depth, slashes, sugar), n)
