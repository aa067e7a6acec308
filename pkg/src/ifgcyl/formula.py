"""IFG formulas: AST, concrete syntax, subformula tree and perfection.

Variables are plain indices (``3`` stands for ``v3``) and slash sets are
frozensets of indices.  A :class:`Formula` pairs a root node with its
variable count ``n``; the same tree with a different ``n`` is a different
formula.

``And`` and ``Forall`` are kept as their own node types so that printing
round-trips, but everything semantic goes through :func:`expand`, which
rewrites them into the negation/disjunction/existential forms they abbreviate.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import FormulaSyntaxError, WellFormednessError

Slash = frozenset  # frozenset[int]


@dataclass(frozen=True)
class Eq:
    left: int
    right: int


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class Not:
    body: "Node"


@dataclass(frozen=True)
class Or:
    slash: frozenset[int]
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class And:
    slash: frozenset[int]
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Exists:
    var: int
    slash: frozenset[int]
    body: "Node"


@dataclass(frozen=True)
class Forall:
    var: int
    slash: frozenset[int]
    body: "Node"


Atom = (Eq, Rel)
Node = Union[Eq, Rel, Not, Or, And, Exists, Forall]


def variables(node: Node) -> set[int]:
    """Every variable index mentioned anywhere in ``node``, slash sets included."""
    if isinstance(node, Eq):
        return {node.left, node.right}
    if isinstance(node, Rel):
        return set(node.args)
    if isinstance(node, Not):
        return variables(node.body)
    if isinstance(node, (Or, And)):
        return set(node.slash) | variables(node.left) | variables(node.right)
    return {node.var} | set(node.slash) | variables(node.body)


def depth(node: Node) -> int:
    """Height of the AST; an atom has depth 1."""
    if isinstance(node, Atom):
        return 1
    if isinstance(node, Not):
        return 1 + depth(node.body)
    if isinstance(node, (Or, And)):
        return 1 + max(depth(node.left), depth(node.right))
    return 1 + depth(node.body)


@dataclass(frozen=True)
class Formula:
    root: Node
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise WellFormednessError(f"variable count must be positive, got {self.n}")
        used = variables(self.root)
        if used and max(used) >= self.n:
            raise WellFormednessError(
                f"v{max(used)} used but the formula only has {self.n} variables"
            )

    def __str__(self) -> str:
        return to_text(self.root)


# ---------------------------------------------------------------- printing


def _slash_text(slash: frozenset[int]) -> str:
    return "{" + ",".join(f"v{i}" for i in sorted(slash)) + "}"


def to_text(node: Node) -> str:
    if isinstance(node, Eq):
        return f"v{node.left} = v{node.right}"
    if isinstance(node, Rel):
        return f"{node.name}(" + ",".join(f"v{i}" for i in node.args) + ")"
    if isinstance(node, Not):
        return "~" + to_text(node.body)
    if isinstance(node, (Or, And)):
        op = "|/" if isinstance(node, Or) else "&/"
        return f"({to_text(node.left)} {op}{_slash_text(node.slash)} {to_text(node.right)})"
    q = "E" if isinstance(node, Exists) else "A"
    return f"{q} v{node.var}/{_slash_text(node.slash)} . {to_text(node.body)}"


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>v\d+(?![A-Za-z0-9_]))
  | (?P<quant>[EA](?=\s*v\d))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\|/|&/)
  | (?P<sym>[~(){},./=])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def error(self, message: str):
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        raise FormulaSyntaxError(message, pos)

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            self.error(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def var(self) -> int:
        return int(self.take("var")[1][1:])

    def slash(self) -> frozenset[int]:
        self.take("sym", "{")
        found = []
        if not (self.peek() and self.peek()[1] == "}"):
            found.append(self.var())
            while self.peek() and self.peek()[1] == ",":
                self.take()
                found.append(self.var())
        self.take("sym", "}")
        return frozenset(found)

    def formula(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        kind, value, _ = tok
        if value == "~":
            self.take()
            return Not(self.formula())
        if value == "(":
            self.take()
            left = self.formula()
            if self.peek() and self.peek()[1] == ")":
                # plain grouping, as in ~(v0 = v0)
                self.take()
                return left
            op = self.take("op")[1]
            slash = self.slash()
            right = self.formula()
            self.take("sym", ")")
            return (Or if op == "|/" else And)(slash, left, right)
        if kind == "quant":
            self.take()
            var = self.var()
            self.take("sym", "/")
            slash = self.slash()
            self.take("sym", ".")
            body = self.formula()
            return (Exists if value == "E" else Forall)(var, slash, body)
        if kind == "var":
            left = self.var()
            self.take("sym", "=")
            return Eq(left, self.var())
        if kind == "ident":
            self.take()
            self.take("sym", "(")
            args = [self.var()]
            while self.peek() and self.peek()[1] == ",":
                self.take()
                args.append(self.var())
            self.take("sym", ")")
            return Rel(value, tuple(args))
        self.error(f"unexpected token {value!r}")


def parse_node(text: str) -> Node:
    if not text.strip():
        raise FormulaSyntaxError("empty formula", 0)
    p = _Parser(text)
    node = p.formula()
    if p.peek() is not None:
        p.error(f"trailing input {p.peek()[1]!r}")
    return node


def parse(text: str, n: int | None = None) -> Formula:
    """Parse concrete syntax into a :class:`Formula`.

    Without ``n`` the variable count is one more than the largest index used.

    >>> str(parse("A v0/{} . E v1/{v0} . v0 = v1"))
    'A v0/{} . E v1/{v0} . v0 = v1'
    """
    node = parse_node(text)
    used = variables(node)
    if n is None:
        n = max(used) + 1 if used else 1
    return Formula(node, n)


# ---------------------------------------------------------------- structure


def expand(node: Node) -> Node:
    """Rewrite ``And``/``Forall`` into the forms they abbreviate, recursively."""
    if isinstance(node, Atom):
        return node
    if isinstance(node, Not):
        return Not(expand(node.body))
    if isinstance(node, Or):
        return Or(node.slash, expand(node.left), expand(node.right))
    if isinstance(node, And):
        return Not(Or(node.slash, Not(expand(node.left)), Not(expand(node.right))))
    if isinstance(node, Exists):
        return Exists(node.var, node.slash, expand(node.body))
    return Not(Exists(node.var, node.slash, Not(expand(node.body))))


def _walk(node: Node, path: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], Node]]:
    yield path, node
    if isinstance(node, Not):
        yield from _walk(node.body, path + (0,))
    elif isinstance(node, Or):
        yield from _walk(node.left, path + (1,))
        yield from _walk(node.right, path + (2,))
    elif isinstance(node, Exists):
        yield from _walk(node.body, path + (3,))
    elif isinstance(node, (And, Forall)):
        # the sugar node shares its position with the root of its expansion
        expanded = expand(node)
        for sub_path, sub in _walk(expanded, path):
            yield sub_path, (node if sub_path == path else sub)


def subformula_tree(phi: Formula | Node) -> list[tuple[tuple[int, ...], Node]]:
    """Pairs ``(position, subformula)`` in preorder.

    Positions are tuples over 0 (under ``~``), 1/2 (left/right disjunct) and
    3 (under a quantifier).  Sugar nodes are addressed through their
    expansion, so the conjuncts of ``(p &/{} q)`` sit at ``(0, 1, 0)`` and
    ``(0, 2, 0)``.
    """
    root = phi.root if isinstance(phi, Formula) else phi
    return list(_walk(root, ()))


def node_at(phi: Formula | Node, position: tuple[int, ...]) -> Node:
    for path, node in subformula_tree(phi):
        if path == tuple(position):
            return node
    raise WellFormednessError(f"no subformula at position {tuple(position)}")


def polarity(position: tuple[int, ...], phi: Formula | Node | None = None) -> str:
    """``"positive"`` when the position has an even number of zeros.

    If ``phi`` is given the position is checked to exist in it first.
    """
    if phi is not None:
        node_at(phi, position)
    return "positive" if list(position).count(0) % 2 == 0 else "negative"


def _perfect_node(node: Node) -> Node:
    if isinstance(node, Atom):
        return node
    if isinstance(node, Not):
        return Not(_perfect_node(node.body))
    if isinstance(node, (Or, And)):
        return type(node)(frozenset(), _perfect_node(node.left), _perfect_node(node.right))
    return type(node)(node.var, frozenset(), _perfect_node(node.body))


def perfection(phi: Formula) -> Formula:
    """The same formula with every slash set emptied, at every depth."""
    return Formula(_perfect_node(phi.root), phi.n)


def is_perfect(phi: Formula | Node) -> bool:
    root = phi.root if isinstance(phi, Formula) else phi
    for _, node in _walk(root, ()):
        if isinstance(node, (Or, And, Exists, Forall)) and node.slash:
            return False
    return True
