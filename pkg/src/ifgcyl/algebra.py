"""IFG-cylindric set algebra over a finite base set.

An element is a pair of team families ``(plus, minus)``.  Families are
downward closed and stored as the antichain of their maximal teams, each
team a bitmask over :class:`~ifgcyl.model.Space`.  Operations build the
result antichains directly from the operands' maximal teams; the brute-force
membership definitions live in the test oracles.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from .budget import DEFAULT_BUDGET, Budget
from .errors import BudgetExceeded, WellFormednessError
from .model import Space, Structure, space


def _is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def maximal(teams: Iterable[int]) -> tuple[int, ...]:
    """The inclusion-maximal teams, sorted."""
    kept: list[int] = []
    for t in sorted(set(teams), key=lambda m: (-m.bit_count(), m)):
        if not any(_is_subset(t, k) for k in kept):
            kept.append(t)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class Family:
    """A downward-closed family of teams, given by its maximal members.

    ``Family(())`` is the empty family; ``Family((0,))`` is ``{∅}``.
    """

    maximal: tuple[int, ...]

    @classmethod
    def of(cls, teams: Iterable[int]) -> "Family":
        return cls(maximal(teams))

    @classmethod
    def powerset(cls, team: int) -> "Family":
        return cls((team,))

    def __contains__(self, team: int) -> bool:
        return any(_is_subset(team, m) for m in self.maximal)

    def __bool__(self) -> bool:
        return bool(self.maximal)

    def __and__(self, other: "Family") -> "Family":
        return Family.of(a & b for a in self.maximal for b in other.maximal)

    def __or__(self, other: "Family") -> "Family":
        return Family.of(self.maximal + other.maximal)

    def union(self) -> int:
        out = 0
        for m in self.maximal:
            out |= m
        return out

    def teams(self) -> set[int]:
        """Explicit downward closure. Exponential; only for small spaces."""
        out: set[int] = set()
        for m in self.maximal:
            bits = [1 << i for i in Space.members(m)]
            for r in range(len(bits) + 1):
                for combo in itertools.combinations(bits, r):
                    out.add(sum(combo))
        return out


@dataclass(frozen=True)
class Element:
    plus: Family
    minus: Family
    size: int
    n: int

    @property
    def space(self) -> Space:
        return space(self.size, self.n)

    def describe(self) -> dict:
        sp = self.space
        return {
            "plus": [sp.sorted_team(m) for m in self.plus.maximal],
            "minus": [sp.sorted_team(m) for m in self.minus.maximal],
        }


@dataclass(frozen=True)
class ClassicalElement:
    """A subset of the valuation space, as a bitmask."""

    mask: int
    size: int
    n: int

    @property
    def team(self):
        return space(self.size, self.n).team(self.mask)


def _same_shape(*xs) -> tuple[int, int]:
    shapes = {(x.size, x.n) for x in xs}
    if len(shapes) != 1:
        raise WellFormednessError(f"operands live in different spaces: {sorted(shapes)}")
    return shapes.pop()


def _check_index(k: int, n: int) -> None:
    if not 0 <= k < n:
        raise WellFormednessError(f"index {k} out of range for {n} variables")


def _check_slash(slash: Iterable[int], n: int) -> frozenset[int]:
    slash = frozenset(slash)
    for k in slash:
        _check_index(k, n)
    return slash


# ---------------------------------------------------------------- constants


def zero(size: int, n: int) -> Element:
    return Element(Family((0,)), Family((space(size, n).full,)), size, n)


def one(size: int, n: int) -> Element:
    return Element(Family((space(size, n).full,)), Family((0,)), size, n)


def diag(i: int, j: int, size: int, n: int) -> Element:
    _check_index(i, n)
    _check_index(j, n)
    sp = space(size, n)
    eq = sum(1 << k for k, a in enumerate(sp.valuations) if a[i] == a[j])
    return embed_f(ClassicalElement(eq, size, n))


# ---------------------------------------------------------------- operations


def neg(x: Element) -> Element:
    return Element(x.minus, x.plus, x.size, x.n)


def _saturated_joins(
    left: Family, right: Family, slash: frozenset[int], sp: Space, budget: Budget
) -> Family:
    """Teams splitting as ``V1 ∪_J V2`` with ``V1`` in ``left`` and ``V2`` in ``right``.

    For fixed maximal ``M1, M2`` a team qualifies iff each of its classes lies
    inside ``M1`` or inside ``M2``; the maximal such teams pick one side per
    class of the whole space.
    """
    candidates: list[int] = []
    blocks = sp.class_masks(slash)
    for m1 in left.maximal:
        for m2 in right.maximal:
            options = []
            for block in blocks:
                o1, o2 = m1 & block, m2 & block
                if _is_subset(o1, o2):
                    options.append((o2,))
                elif _is_subset(o2, o1):
                    options.append((o1,))
                else:
                    options.append((o1, o2))
            _extend_products(candidates, options, budget)
    return Family.of(candidates)


def _extend_products(out: list[int], options: Sequence[Sequence[int]], budget: Budget) -> None:
    total = 1
    for opts in options:
        total *= len(opts)
    budget.check("antichain candidates", len(out) + total, budget.enumeration)
    for pick in itertools.product(*options):
        acc = 0
        for part in pick:
            acc |= part
        out.append(acc)


def plus_j(x: Element, y: Element, slash: Iterable[int] = (), budget: Budget = DEFAULT_BUDGET) -> Element:
    size, n = _same_shape(x, y)
    slash = _check_slash(slash, n)
    plus = _saturated_joins(x.plus, y.plus, slash, x.space, budget)
    return Element(plus, x.minus & y.minus, size, n)


def times_j(x: Element, y: Element, slash: Iterable[int] = (), budget: Budget = DEFAULT_BUDGET) -> Element:
    size, n = _same_shape(x, y)
    slash = _check_slash(slash, n)
    minus = _saturated_joins(x.minus, y.minus, slash, x.space, budget)
    return Element(x.plus & y.plus, minus, size, n)


def cyl(k: int, slash: Iterable[int], x: Element, budget: Budget = DEFAULT_BUDGET) -> Element:
    """Cylindrification along ``v_k`` with the choice hidden from ``slash``."""
    _check_index(k, x.n)
    slash = _check_slash(slash, x.n)
    sp = x.space
    blocks = sp.class_masks(slash)

    candidates: list[int] = []
    for m in x.plus.maximal:
        options = []
        for block in blocks:
            # members of the block whose k-variant with value b lands in m
            fits = [
                sum(1 << i for i in Space.members(block) if (m >> sp.variant[i][k][b]) & 1)
                for b in range(sp.size)
            ]
            options.append(maximal(fits))
        _extend_products(candidates, options, budget)

    cores = []
    for m in x.minus.maximal:
        cores.append(sum(1 << i for i in range(sp.count) if _is_subset(sp.fill_bits[k][i], m)))
    return Element(Family.of(candidates), Family.of(cores), x.size, x.n)


# ---------------------------------------------------------------- predicates


def is_suit(family: Family | Iterable[int]) -> bool:
    """Nonempty and downward closed.

    A :class:`Family` is downward closed by construction; an explicit
    collection of team masks is checked directly.
    """
    if isinstance(family, Family):
        return bool(family.maximal)
    teams = set(family)
    if not teams:
        return False
    for t in teams:
        for i in Space.members(t):
            if t & ~(1 << i) not in teams:
                return False
    return True


def is_double_suit(x: Element) -> bool:
    return is_suit(x.plus) and is_suit(x.minus) and (x.plus & x.minus).maximal == (0,)


def is_flat(x: Element) -> bool:
    return is_double_suit(x) and len(x.plus.maximal) == 1


def is_perfect(x: Element) -> bool:
    if not is_flat(x):
        return False
    (v,) = x.plus.maximal
    return x.minus.maximal == (x.space.full & ~v,)


# ---------------------------------------------------------------- classical side


def embed_f(v: ClassicalElement) -> Element:
    full = space(v.size, v.n).full
    return Element(Family.powerset(v.mask), Family.powerset(full & ~v.mask), v.size, v.n)


def embed_g(x: Element) -> ClassicalElement:
    return ClassicalElement(x.plus.union(), x.size, x.n)


def complement(v: ClassicalElement) -> ClassicalElement:
    return ClassicalElement(space(v.size, v.n).full & ~v.mask, v.size, v.n)


def union(v: ClassicalElement, w: ClassicalElement) -> ClassicalElement:
    size, n = _same_shape(v, w)
    return ClassicalElement(v.mask | w.mask, size, n)


def cylinder(k: int, v: ClassicalElement) -> ClassicalElement:
    _check_index(k, v.n)
    return ClassicalElement(space(v.size, v.n).fill(v.mask, k), v.size, v.n)


def classical_diag(i: int, j: int, size: int, n: int) -> ClassicalElement:
    _check_index(i, n)
    _check_index(j, n)
    sp = space(size, n)
    return ClassicalElement(
        sum(1 << k for k, a in enumerate(sp.valuations) if a[i] == a[j]), size, n
    )


def atomic_meaning(structure: Structure, atom, n: int) -> Element:
    sp = space(structure.size, n)
    return embed_f(ClassicalElement(sp.satisfying(structure, atom), structure.size, n))


# ---------------------------------------------------------------- closures


@dataclass
class Closure:
    """Elements of a generated subalgebra, in discovery order, with its op table.

    ``table`` maps ``(op_label, *argument_indices)`` to a result index.
    """

    elements: list
    table: dict[tuple, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.elements)

    def index(self, element) -> int:
        return self.elements.index(element)


def _close(
    seeds: Iterable,
    unary: Sequence[tuple[str, Callable]],
    binary: Sequence[tuple[str, Callable]],
    cap: int,
) -> Closure:
    closure = Closure([])
    where: dict = {}

    def add(e) -> int:
        idx = where.get(e)
        if idx is None:
            idx = len(closure.elements)
            if idx >= cap:
                raise BudgetExceeded(f"closure exceeds {cap} elements")
            where[e] = idx
            closure.elements.append(e)
        return idx

    for s in seeds:
        add(s)
    i = 0
    while i < len(closure.elements):
        x = closure.elements[i]
        for label, op in unary:
            closure.table[(label, i)] = add(op(x))
        for j in range(i + 1):
            y = closure.elements[j]
            for label, op in binary:
                closure.table[(label, i, j)] = add(op(x, y))
                if j != i:
                    closure.table[(label, j, i)] = add(op(y, x))
        i += 1
    return closure


def _slash_label(slash: frozenset[int]) -> str:
    return "{" + ",".join(map(str, sorted(slash))) + "}"


def generate_subalgebra(
    generators: Iterable[Element],
    size: int,
    n: int,
    signature: str = "empty",
    budget: Budget = DEFAULT_BUDGET,
) -> Closure:
    """Least set containing the generators and the constants that is closed
    under the operations of ``signature``.

    ``"empty"`` keeps only the operations with empty slash sets; ``"full"``
    uses every slash set over the ``n`` variables.
    """
    if signature == "empty":
        slashes = [frozenset()]
    elif signature == "full":
        slashes = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    else:
        raise ValueError(f"unknown signature {signature!r}")
    seeds = [zero(size, n), one(size, n)]
    seeds += [diag(i, j, size, n) for i in range(n) for j in range(n)]
    for g in generators:
        if (g.size, g.n) != (size, n):
            raise WellFormednessError("generator lives in a different space")
        seeds.append(g)

    unary: list[tuple[str, Callable]] = [("neg", neg)]
    binary: list[tuple[str, Callable]] = []
    for J in slashes:
        lab = _slash_label(J)
        binary.append((f"plus{lab}", lambda x, y, J=J: plus_j(x, y, J, budget)))
        binary.append((f"times{lab}", lambda x, y, J=J: times_j(x, y, J, budget)))
        for k in range(n):
            unary.append((f"cyl{k}{lab}", lambda x, k=k, J=J: cyl(k, J, x, budget)))
    return _close(seeds, unary, binary, budget.closure_cap)


def classical_closure(structure: Structure, n: int, budget: Budget = DEFAULT_BUDGET) -> Closure:
    """The cylindric set algebra of all first-order definable relations.

    Generated from the atomic meanings under complement, union, cylindrification
    and the diagonals.
    """
    size = structure.size
    sp = space(size, n)
    seeds = [ClassicalElement(0, size, n), ClassicalElement(sp.full, size, n)]
    seeds += [classical_diag(i, j, size, n) for i in range(n) for j in range(n)]
    seeds += [ClassicalElement(sp.satisfying(structure, a), size, n) for a in structure.atoms(n)]
    unary: list[tuple[str, Callable]] = [("complement", complement)]
    unary += [(f"cylinder{k}", lambda v, k=k: cylinder(k, v)) for k in range(n)]
    return _close(seeds, unary, [("union", union)], budget.closure_cap)


def ifg_empty_closure(structure: Structure, n: int, budget: Budget = DEFAULT_BUDGET) -> Closure:
    """Subalgebra of the empty-slash reduct generated by the atomic meanings."""
    generators = [atomic_meaning(structure, a, n) for a in structure.atoms(n)]
    return generate_subalgebra(generators, structure.size, n, "empty", budget)


# ---------------------------------------------------------------- isomorphism


@dataclass
class IsoReport:
    size: int
    n: int
    classical_count: int
    ifg_count: int
    checks: list[tuple[str, bool, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, name: str, results: Iterable[bool]) -> None:
        results = list(results)
        self.checks.append((name, all(results), len(results)))

    def text(self) -> str:
        lines = [
            f"|A|={self.size} N={self.n}",
            f"classical algebra: {self.classical_count} elements",
            f"IFG empty-slash algebra: {self.ifg_count} elements",
        ]
        width = max(len(name) for name, _, _ in self.checks)
        for name, ok, count in self.checks:
            lines.append(f"  {name:<{width}}  {'PASS' if ok else 'FAIL'}  ({count} checked)")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"{verdict} ({self.ifg_count} elements)")
        return "\n".join(lines)

    def machine(self) -> str:
        lines = [
            f"CLASSICAL_COUNT={self.classical_count}",
            f"IFG_COUNT={self.ifg_count}",
        ]
        lines += [f"EQ {name} {'PASS' if ok else 'FAIL'}" for name, ok, _ in self.checks]
        lines.append(f"RESULT={'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def verify_isomorphism(structure: Structure, n: int, budget: Budget = DEFAULT_BUDGET) -> IsoReport:
    size = structure.size
    budget.check("valuations", size**n, budget.meaning_valuations)
    cs = classical_closure(structure, n, budget)
    ifg = ifg_empty_closure(structure, n, budget)
    report = IsoReport(size, n, len(cs), len(ifg))
    sp = space(size, n)
    F = embed_f
    V = cs.elements

    report.add("F(0)=0", [F(ClassicalElement(0, size, n)) == zero(size, n)])
    report.add("F(1)=1", [F(ClassicalElement(sp.full, size, n)) == one(size, n)])
    report.add(
        "F(D_ij)=D_ij",
        [F(classical_diag(i, j, size, n)) == diag(i, j, size, n) for i in range(n) for j in range(n)],
    )
    report.add("F(-V)=~F(V)", [F(complement(v)) == neg(F(v)) for v in V])
    report.add(
        "F(V+W)=F(V)+F(W)",
        [F(union(v, w)) == plus_j(F(v), F(w), (), budget) for v in V for w in V],
    )
    report.add(
        "F(C_nV)=C_n(F(V))",
        [F(cylinder(k, v)) == cyl(k, (), F(v), budget) for v in V for k in range(n)],
    )
    report.add("G(F(V))=V", [embed_g(F(v)) == v for v in V])
    report.add("F(G(X))=X", [F(embed_g(x)) == x for x in ifg.elements])
    report.add("image(F)=IFG algebra", [{F(v) for v in V} == set(ifg.elements)])
    report.add("|Cs|=|IFG|", [len(cs) == len(ifg)])
    report.add("all perfect", [is_perfect(x) for x in ifg.elements])
    return report
