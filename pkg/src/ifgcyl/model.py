"""Finite relational structures, valuations and classical satisfaction.

Universe elements are always ``0 .. size-1``.  A valuation over ``n``
variables is a length-``n`` tuple of elements.  :class:`Space` fixes an
enumeration of all ``size**n`` valuations so that teams can be handled as
integer bitmasks by the semantics and algebra code.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from .budget import DEFAULT_BUDGET, Budget
from .errors import StructureError, WellFormednessError
from .formula import Eq, Exists, Formula, Node, Not, Or, And, Rel, is_perfect

Valuation = tuple[int, ...]


@dataclass(frozen=True)
class Structure:
    size: int
    relations: dict[str, tuple[int, frozenset[tuple[int, ...]]]] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise StructureError("universe must be nonempty")
        for name, (arity, tuples) in self.relations.items():
            for t in tuples:
                if len(t) != arity:
                    raise StructureError(f"{name}: tuple {t} does not have arity {arity}")
                if any(not 0 <= x < self.size for x in t):
                    raise StructureError(f"{name}: tuple {t} leaves the universe")

    def __hash__(self):
        return hash((self.size, tuple(sorted(self.relations.items()))))

    @classmethod
    def with_relations(cls, size: int, **relations: Iterable[Iterable[int]]) -> "Structure":
        """Build from plain iterables; the arity is read off the first tuple."""
        rels = {}
        for name, tuples in relations.items():
            tuples = frozenset(tuple(t) for t in tuples)
            if not tuples:
                raise StructureError(f"{name}: cannot infer arity of an empty relation")
            rels[name] = (len(next(iter(tuples))), tuples)
        return cls(size, rels)

    def atoms(self, n: int) -> list[Node]:
        """Every atomic formula over ``v0..v{n-1}`` in this signature."""
        found: list[Node] = [Eq(i, j) for i in range(n) for j in range(n)]
        for name in sorted(self.relations):
            arity = self.relations[name][0]
            found.extend(Rel(name, args) for args in itertools.product(range(n), repeat=arity))
        return found


_TUPLE_RE = re.compile(r"\(([^)]*)\)")


def parse_structure(text: str) -> Structure:
    """Read the line format::

        universe = 3
        rel R 1 = (0) (2)
        rel E 2 = (0,1) (1,0)

    Blank lines and ``#`` comments are ignored.
    """
    size = None
    rels: dict[str, tuple[int, frozenset]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"universe\s*=\s*(\d+)", line)
        if m:
            size = int(m.group(1))
            continue
        m = re.fullmatch(r"rel\s+([A-Za-z_][A-Za-z0-9_]*)\s+(\d+)\s*=(.*)", line)
        if not m:
            raise StructureError(f"line {lineno}: cannot parse {raw!r}")
        name, arity, rest = m.group(1), int(m.group(2)), m.group(3)
        if name in rels:
            raise StructureError(f"line {lineno}: relation {name} declared twice")
        tuples = set()
        for body in _TUPLE_RE.findall(rest):
            try:
                tuples.add(tuple(int(x) for x in body.split(",") if x.strip()))
            except ValueError:
                raise StructureError(f"line {lineno}: bad tuple ({body})") from None
        if _TUPLE_RE.sub("", rest).strip():
            raise StructureError(f"line {lineno}: junk after tuples")
        rels[name] = (arity, frozenset(tuples))
    if size is None:
        raise StructureError("missing 'universe = <k>' line")
    return Structure(size, rels)


def load_structure(path: str | Path) -> Structure:
    return parse_structure(Path(path).read_text())


def dump_structure(structure: Structure) -> str:
    lines = [f"universe = {structure.size}"]
    for name in sorted(structure.relations):
        arity, tuples = structure.relations[name]
        body = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(tuples))
        lines.append(f"rel {name} {arity} = {body}".rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- satisfaction


def atomic_eval(structure: Structure, atom: Node, a: Valuation) -> bool:
    if isinstance(atom, Eq):
        return a[atom.left] == a[atom.right]
    if isinstance(atom, Rel):
        if atom.name not in structure.relations:
            raise StructureError(f"unknown relation symbol {atom.name}")
        arity, tuples = structure.relations[atom.name]
        if len(atom.args) != arity:
            raise StructureError(f"{atom.name} has arity {arity}, got {len(atom.args)} arguments")
        return tuple(a[i] for i in atom.args) in tuples
    raise WellFormednessError(f"not an atom: {atom!r}")


def _tarski(structure: Structure, node: Node, a: list[int]) -> bool:
    if isinstance(node, (Eq, Rel)):
        return atomic_eval(structure, node, tuple(a))
    if isinstance(node, Not):
        return not _tarski(structure, node.body, a)
    if isinstance(node, Or):
        return _tarski(structure, node.left, a) or _tarski(structure, node.right, a)
    if isinstance(node, And):
        return _tarski(structure, node.left, a) and _tarski(structure, node.right, a)
    check = any if isinstance(node, Exists) else all
    saved = a[node.var]
    try:
        results = []
        for b in range(structure.size):
            a[node.var] = b
            results.append(_tarski(structure, node.body, a))
        return check(results)
    finally:
        a[node.var] = saved


def tarski_eval(structure: Structure, phi: Formula, a: Valuation) -> bool:
    """Classical satisfaction for a perfect formula, ignoring the empty slashes."""
    if not is_perfect(phi):
        raise WellFormednessError("classical evaluation needs a perfect formula")
    if len(a) != phi.n:
        raise WellFormednessError(f"valuation {a} does not have length {phi.n}")
    return _tarski(structure, phi.root, list(a))


def all_valuations(size: int, n: int, budget: Budget = DEFAULT_BUDGET) -> list[Valuation]:
    """``size**n`` valuations in lexicographic order."""
    if n < 1:
        raise WellFormednessError("need at least one variable")
    budget.check("valuations", size**n, budget.enumeration)
    return list(itertools.product(range(size), repeat=n))


# ---------------------------------------------------------------- bitmask teams


class Space:
    """All valuations ``size**n`` indexed lexicographically; teams are bitmasks.

    Use :func:`space` to get a shared, cached instance.
    """

    def __init__(self, size: int, n: int):
        self.size = size
        self.n = n
        self.valuations = list(itertools.product(range(size), repeat=n))
        self.count = len(self.valuations)
        self.full = (1 << self.count) - 1
        self._index = {a: i for i, a in enumerate(self.valuations)}
        # variant[i][k][b] = index of valuation i with coordinate k set to b
        self.variant = [
            [[self._index[a[:k] + (b,) + a[k + 1:]] for b in range(size)] for k in range(n)]
            for a in self.valuations
        ]
        # fill_bits[k][i] = mask of valuation i with coordinate k ranging over A
        self.fill_bits = [
            [sum(1 << j for j in self.variant[i][k]) for i in range(self.count)]
            for k in range(n)
        ]
        self._classes: dict[frozenset[int], tuple[int, ...]] = {}
        self._images: dict[tuple[int, int], tuple[int, ...]] = {}
        self._fills: dict[tuple[int, int], int] = {}

    def __repr__(self):
        return f"Space(size={self.size}, n={self.n})"

    def index(self, a: Valuation) -> int:
        try:
            return self._index[tuple(a)]
        except KeyError:
            raise WellFormednessError(f"{a} is not a valuation in {self}") from None

    def mask(self, team: Iterable[Valuation]) -> int:
        m = 0
        for a in team:
            m |= 1 << self.index(a)
        return m

    def team(self, mask: int) -> frozenset[Valuation]:
        return frozenset(self.valuations[i] for i in self.members(mask))

    def sorted_team(self, mask: int) -> list[Valuation]:
        return [self.valuations[i] for i in self.members(mask)]

    @staticmethod
    def members(mask: int) -> list[int]:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def satisfying(self, structure: Structure, atom: Node) -> int:
        return sum(
            1 << i for i, a in enumerate(self.valuations) if atomic_eval(structure, atom, a)
        )

    def class_masks(self, slash: frozenset[int]) -> tuple[int, ...]:
        """Masks of the agreement-outside-``slash`` classes of the full space."""
        slash = frozenset(slash)
        cached = self._classes.get(slash)
        if cached is None:
            keep = [k for k in range(self.n) if k not in slash]
            groups: dict[tuple, int] = {}
            for i, a in enumerate(self.valuations):
                key = tuple(a[k] for k in keep)
                groups[key] = groups.get(key, 0) | (1 << i)
            cached = tuple(groups.values())
            self._classes[slash] = cached
        return cached

    def pieces(self, mask: int, slash: frozenset[int]) -> list[int]:
        """Nonempty intersections of ``mask`` with the classes; the classes of the team."""
        return [m & mask for m in self.class_masks(slash) if m & mask]

    def fill(self, mask: int, k: int) -> int:
        """The team with coordinate ``k`` replaced by every element."""
        key = (mask, k)
        out = self._fills.get(key)
        if out is None:
            bits = self.fill_bits[k]
            out = 0
            for i in self.members(mask):
                out |= bits[i]
            self._fills[key] = out
        return out

    def images(self, mask: int, k: int) -> tuple[int, ...]:
        """``shift(mask, k, b)`` for every element ``b``, duplicates dropped (cached)."""
        key = (mask, k)
        out = self._images.get(key)
        if out is None:
            out = self._images[key] = tuple(
                dict.fromkeys(self.shift(mask, k, b) for b in range(self.size))
            )
        return out

    def shift(self, mask: int, k: int, b: int) -> int:
        """Every member with coordinate ``k`` set to ``b``."""
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= 1 << self.variant[i][k][b]
            mask >>= 1
            i += 1
        return out


@lru_cache(maxsize=None)
def space(size: int, n: int) -> Space:
    if size < 1 or n < 1:
        raise WellFormednessError("space needs a nonempty universe and at least one variable")
    return Space(size, n)
