"""Trump semantics on teams and the meaning of a formula.

``models_plus``/``models_minus`` decide whether a team is a trump/cotrump by
searching saturated covers and independent choice functions, one team at a
time.  ``meaning`` takes the other road: it builds the whole pair of team
families bottom-up with the algebra operations.  The two are expected to
agree and the test suite holds them to it.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass

from . import algebra
from .algebra import Element
from .budget import DEFAULT_BUDGET, Budget
from .errors import BudgetExceeded, WellFormednessError
from .formula import Eq, Exists, Formula, Not, Or, Rel, expand
from .model import Space, Structure, space

Meaning = Element

ATOM, NEG, OR, EX = "atom", "not", "or", "exists"


@dataclass(frozen=True)
class _Compiled:
    kind: str
    position: tuple[int, ...]
    children: tuple[int, ...] = ()
    sat: int = 0
    var: int = -1
    slash: frozenset[int] = frozenset()
    atom: object = None


def _compile(structure: Structure, phi: Formula, sp: Space) -> list[_Compiled]:
    """Flatten the expanded formula; node 0 is the root."""
    nodes: list[_Compiled] = []
    atom_cache: dict = {}

    def visit(node, path) -> int:
        idx = len(nodes)
        nodes.append(None)  # reserve the slot so the root stays at 0
        if isinstance(node, (Eq, Rel)):
            if node not in atom_cache:
                atom_cache[node] = sp.satisfying(structure, node)
            out = _Compiled(ATOM, path, sat=atom_cache[node], atom=node)
        elif isinstance(node, Not):
            out = _Compiled(NEG, path, (visit(node.body, path + (0,)),))
        elif isinstance(node, Or):
            left = visit(node.left, path + (1,))
            right = visit(node.right, path + (2,))
            out = _Compiled(OR, path, (left, right), slash=node.slash)
        elif isinstance(node, Exists):
            out = _Compiled(EX, path, (visit(node.body, path + (3,)),), var=node.var, slash=node.slash)
        else:  # pragma: no cover - expand() leaves only core nodes
            raise WellFormednessError(f"unexpected node {node!r}")
        nodes[idx] = out
        return idx

    visit(expand(phi.root), ())
    return nodes


class Evaluator:
    """Team-by-team evaluation of one formula in one structure.

    Verdicts are memoized per (subformula, team).  With ``prune`` the cover
    and choice-function searches abandon a branch as soon as a partial team
    already fails, which is sound because trumps and cotrumps are closed
    under subsets; ``prune=False`` runs the literal exhaustive search.
    """

    def __init__(
        self,
        structure: Structure,
        phi: Formula,
        budget: Budget = DEFAULT_BUDGET,
        prune: bool = True,
    ):
        self.structure = structure
        self.phi = phi
        self.budget = budget
        self.prune = prune
        budget.check("valuations", structure.size**phi.n, budget.search_valuations)
        self.space = space(structure.size, phi.n)
        self.nodes = _compile(structure, phi, self.space)
        self.positions = {node.position: i for i, node in enumerate(self.nodes)}
        self._plus: dict[tuple[int, int], bool] = {}
        self._minus: dict[tuple[int, int], bool] = {}
        self.steps = 0

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget.search_steps:
            raise BudgetExceeded(f"search exceeded {self.budget.search_steps} steps")

    def plus(self, i: int, team: int) -> bool:
        key = (i, team)
        hit = self._plus.get(key)
        if hit is None:
            hit = self._plus[key] = self._eval_plus(self.nodes[i], team)
        return hit

    def minus(self, i: int, team: int) -> bool:
        key = (i, team)
        hit = self._minus.get(key)
        if hit is None:
            hit = self._minus[key] = self._eval_minus(self.nodes[i], team)
        return hit

    def _eval_plus(self, node: _Compiled, team: int) -> bool:
        if node.kind == ATOM:
            return team & ~node.sat == 0
        if node.kind == NEG:
            return self.minus(node.children[0], team)
        if node.kind == OR:
            return self._split(node, team)
        return self._choose(node, team)

    def _eval_minus(self, node: _Compiled, team: int) -> bool:
        if node.kind == ATOM:
            return team & node.sat == 0
        if node.kind == NEG:
            return self.plus(node.children[0], team)
        if node.kind == OR:
            left, right = node.children
            return self.minus(left, team) and self.minus(right, team)
        return self.minus(node.children[0], self.space.fill(team, node.var))

    def _split(self, node: _Compiled, team: int) -> bool:
        """Is there a saturated cover team = V1 ∪ V2 with V1, V2 trumps of the disjuncts?"""
        left, right = node.children
        pieces = self.space.pieces(team, node.slash)

        if not self.prune:
            for sides in itertools.product((0, 1), repeat=len(pieces)):
                self._tick()
                v1 = sum(p for p, s in zip(pieces, sides) if s == 0)
                if self.plus(left, v1) and self.plus(right, team & ~v1):
                    return True
            return False

        def go(k: int, v1: int, v2: int) -> bool:
            self._tick()
            if k == len(pieces):
                return True
            p = pieces[k]
            if self.plus(left, v1 | p) and go(k + 1, v1 | p, v2):
                return True
            return self.plus(right, v2 | p) and go(k + 1, v1, v2 | p)

        return self.plus(left, 0) and self.plus(right, 0) and go(0, 0, 0)

    def _choose(self, node: _Compiled, team: int) -> bool:
        """Is there a choice function, constant on classes, whose variation is a trump?"""
        (body,) = node.children
        sp = self.space
        images = [sp.images(p, node.var) for p in sp.pieces(team, node.slash)]

        if not self.prune:
            for pick in itertools.product(*images):
                self._tick()
                acc = 0
                for part in pick:
                    acc |= part
                if self.plus(body, acc):
                    return True
            return False

        def go(k: int, acc: int) -> bool:
            self._tick()
            if k == len(images):
                return True
            for img in images[k]:
                nxt = acc | img
                if self.plus(body, nxt) and go(k + 1, nxt):
                    return True
            return False

        return self.plus(body, 0) and go(0, 0)

    def node_meanings(self) -> dict[tuple[int, ...], Element]:
        """Meaning of every subformula, computed bottom-up with algebra operations."""
        size, n = self.structure.size, self.phi.n
        out: dict[int, Element] = {}
        for i in reversed(range(len(self.nodes))):
            node = self.nodes[i]
            if node.kind == ATOM:
                out[i] = algebra.embed_f(algebra.ClassicalElement(node.sat, size, n))
            elif node.kind == NEG:
                out[i] = algebra.neg(out[node.children[0]])
            elif node.kind == OR:
                left, right = node.children
                out[i] = algebra.plus_j(out[left], out[right], node.slash, self.budget)
            else:
                out[i] = algebra.cyl(node.var, node.slash, out[node.children[0]], self.budget)
        return {self.nodes[i].position: m for i, m in out.items()}


def _as_mask(sp: Space, team: int | Iterable[tuple[int, ...]] | str) -> int:
    if team == "full":
        return sp.full
    if isinstance(team, int):
        if team < 0 or team > sp.full:
            raise WellFormednessError(f"team mask {team} outside {sp}")
        return team
    return sp.mask(team)


def models_plus(
    structure: Structure,
    phi: Formula,
    team: int | Iterable[tuple[int, ...]] | str,
    budget: Budget = DEFAULT_BUDGET,
    prune: bool = True,
) -> bool:
    ev = Evaluator(structure, phi, budget, prune)
    return ev.plus(0, _as_mask(ev.space, team))


def models_minus(
    structure: Structure,
    phi: Formula,
    team: int | Iterable[tuple[int, ...]] | str,
    budget: Budget = DEFAULT_BUDGET,
    prune: bool = True,
) -> bool:
    ev = Evaluator(structure, phi, budget, prune)
    return ev.minus(0, _as_mask(ev.space, team))


def is_true(structure: Structure, phi: Formula, budget: Budget = DEFAULT_BUDGET) -> bool:
    return models_plus(structure, phi, "full", budget)


def is_false(structure: Structure, phi: Formula, budget: Budget = DEFAULT_BUDGET) -> bool:
    return models_minus(structure, phi, "full", budget)


def meaning(structure: Structure, phi: Formula, budget: Budget = DEFAULT_BUDGET) -> Meaning:
    """Pair of families (trumps, cotrumps), as antichains of maximal teams."""
    budget.check("valuations", structure.size**phi.n, budget.meaning_valuations)
    # the evaluator is only used here for compilation; no search happens
    ev = Evaluator(structure, phi, budget)
    return ev.node_meanings()[()]
