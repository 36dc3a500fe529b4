"""Formulas of unit-free MLL with explicit negation.

Formulas are built from variables by binary tensor and unary negation and are
compared syntactically: ``Neg(Neg(A))`` is a different formula from ``A`` and no
de Morgan rewriting is ever applied to a stored formula. The de Morgan
translation to tensor/par trees exists only for the correctness checker.

Concrete syntax (see ``FORMULA_GRAMMAR``)::

    expr    := unary ("-o" expr)?
    unary   := primary "^"*
    primary := VAR | "(" expr ("*" expr)? ")"

``A -o B`` is sugar for ``((A * B^))^``. Parsed formulas may nest at most
``MAX_NESTING`` levels deep.
"""
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from lark import Lark, Token, Transformer_NonRecursive, Tree, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken

from src.core.errors import FormulaSyntaxError, UnknownAddress

logger = logging.getLogger(__name__)

VAR_PATTERN = re.compile(r'[a-z][a-z0-9]*')
MAX_NESTING = 200


class Side(str, Enum):
    DOM = 'dom'
    COD = 'cod'

    @property
    def rank(self) -> int:
        return 0 if self is Side.DOM else 1

    def flipped(self) -> 'Side':
        return Side.COD if self is Side.DOM else Side.DOM


class Polarity(str, Enum):
    POS = 'pos'
    NEG = 'neg'

    def flipped(self) -> 'Polarity':
        return Polarity.NEG if self is Polarity.POS else Polarity.POS


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not VAR_PATTERN.fullmatch(self.name):
            raise FormulaSyntaxError(f"invalid variable name {self.name!r}", position=0)

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Tensor:
    left: 'Formula'
    right: 'Formula'

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Neg:
    child: 'Formula'

    def __str__(self) -> str:
        return print_formula(self)


Formula = Union[Var, Tensor, Neg]

# A leaf address is a path over L/R (tensor children) and N (negation child).
LeafAddr = str


@dataclass(frozen=True)
class LeafRef:
    """A variable occurrence on one side of a morphism."""
    side: Side
    addr: LeafAddr
    var: str
    polarity: Polarity

    @property
    def sort_key(self) -> Tuple[int, str]:
        return (self.side.rank, self.addr)

    def to_json(self) -> Dict[str, str]:
        return {'side': self.side.value, 'addr': self.addr}

    def __str__(self) -> str:
        return f"{self.side.value}:{self.addr or '.'}"


def polarity_of(side: Side, addr: LeafAddr) -> Polarity:
    """Effective polarity: positive iff (even number of N) XOR (domain side)."""
    even = addr.count('N') % 2 == 0
    return Polarity.POS if even != (side is Side.DOM) else Polarity.NEG


# ---------- de Morgan trees (checker only) ----------


@dataclass(frozen=True)
class Literal:
    leaf: LeafRef


@dataclass(frozen=True)
class TensorNode:
    side: Side
    addr: LeafAddr
    left: 'DMTree'
    right: 'DMTree'


@dataclass(frozen=True)
class ParNode:
    side: Side
    addr: LeafAddr
    left: 'DMTree'
    right: 'DMTree'


DMTree = Union[Literal, TensorNode, ParNode]


# ---------- constructors ----------


def var(name: str) -> Var:
    return Var(name)


def tensor(left: Formula, right: Formula) -> Tensor:
    return Tensor(left, right)


def dual(formula: Formula) -> Neg:
    """Purely syntactic negation; no double-negation elimination."""
    return Neg(formula)


def lolli(a: Formula, b: Formula) -> Neg:
    """A -o B is (A * B^)^."""
    return Neg(Tensor(a, Neg(b)))


def lolli_parts(formula: Formula) -> Optional[Tuple[Formula, Formula]]:
    """Return (A, B) when the formula is literally (A * B^)^, else None."""
    if isinstance(formula, Neg) and isinstance(formula.child, Tensor):
        inner = formula.child
        if isinstance(inner.right, Neg):
            return inner.left, inner.right.child
    return None


# ---------- printing / parsing ----------


def print_formula(formula: Formula) -> str:
    if isinstance(formula, Var):
        return formula.name
    if isinstance(formula, Tensor):
        return f"({print_formula(formula.left)} * {print_formula(formula.right)})"
    return f"{print_formula(formula.child)}^"


# ``?`` rules collapse single-child nodes, so plain parentheses leave no trace.
FORMULA_GRAMMAR = r"""
    ?start: expr

    ?expr: unary
         | unary "-o" expr                  -> lolli

    ?unary: primary
          | unary NEG                       -> neg

    ?primary: VAR                           -> var
            | "(" expr ")"
            | "(" expr "*" expr ")"         -> tensor

    NEG: "^"
    VAR: /[a-z][a-z0-9]*/

    %import common.WS
    %ignore WS
"""

formula_parser = Lark(FORMULA_GRAMMAR, parser='lalr', propagate_positions=True)


@v_args(inline=True)
class FormulaBuilder(Transformer_NonRecursive):
    """Turns a parse tree into Var / Tensor / Neg, expanding ``-o``."""

    def var(self, token: Token) -> Var:
        return Var(str(token))

    def neg(self, child: Formula, _mark: Token) -> Neg:
        return Neg(child)

    def tensor(self, left: Formula, right: Formula) -> Tensor:
        return Tensor(left, right)

    def lolli(self, left: Formula, right: Formula) -> Neg:
        return lolli(left, right)


def _tree_position(tree: Tree) -> int:
    if tree.data == 'neg':
        return tree.children[-1].start_pos
    return getattr(tree.meta, 'start_pos', 0)


def _check_nesting(tree: Tree, text: str) -> None:
    """Reject trees whose formula would nest deeper than MAX_NESTING."""
    stack = [(tree, 1)]
    while stack:
        node, depth = stack.pop()
        if not isinstance(node, Tree):
            continue
        if depth > MAX_NESTING:
            raise FormulaSyntaxError(f"formula nests deeper than {MAX_NESTING} levels",
                                     _tree_position(node), text)
        if node.data == 'lolli':
            # A -o B is (A * B^)^: A sits two levels down, B three.
            left, right = node.children
            stack += [(left, depth + 2), (right, depth + 3)]
        else:
            stack += [(child, depth + 1) for child in node.children]


def _syntax_error(error: UnexpectedInput, text: str) -> FormulaSyntaxError:
    if isinstance(error, UnexpectedToken):
        if error.token.type == '$END':
            message = "empty formula" if not text.strip() else "unexpected end of input"
            return FormulaSyntaxError(message, len(text), text)
        return FormulaSyntaxError(f"unexpected token {str(error.token)!r}", error.token.start_pos, text)
    if isinstance(error, UnexpectedCharacters):
        return FormulaSyntaxError(f"unexpected character {text[error.pos_in_stream]!r}",
                                  error.pos_in_stream, text)
    return FormulaSyntaxError("unexpected end of input", len(text), text)


def parse(text: str) -> Formula:
    """Parse formula text; raises FormulaSyntaxError with a position."""
    try:
        tree = formula_parser.parse(text)
    except UnexpectedInput as e:
        raise _syntax_error(e, text) from e
    _check_nesting(tree, text)
    formula = FormulaBuilder().transform(tree)
    logger.debug("Parsed %r", text)
    return formula


def as_formula(value: Union[str, Formula]) -> Formula:
    return parse(value) if isinstance(value, str) else value


# ---------- traversal ----------


def _walk(formula: Formula, addr: LeafAddr = '') -> Iterator[Tuple[LeafAddr, Var]]:
    if isinstance(formula, Var):
        yield addr, formula
    elif isinstance(formula, Tensor):
        yield from _walk(formula.left, addr + 'L')
        yield from _walk(formula.right, addr + 'R')
    else:
        yield from _walk(formula.child, addr + 'N')


def leaves(formula: Formula, side: Side) -> List[LeafRef]:
    """Leaves in left-to-right order with their effective polarity."""
    return [LeafRef(side, addr, leaf.name, polarity_of(side, addr)) for addr, leaf in _walk(formula)]


def leaf_count(formula: Formula) -> int:
    return sum(1 for _ in _walk(formula))


def neg_depth(formula: Formula) -> int:
    """Longest run of directly stacked negations anywhere in the formula."""
    if isinstance(formula, Var):
        return 0
    if isinstance(formula, Tensor):
        return max(neg_depth(formula.left), neg_depth(formula.right))
    run, node = 0, formula
    while isinstance(node, Neg):
        run, node = run + 1, node.child
    return max(run, neg_depth(node))


def subformula(formula: Formula, addr: LeafAddr) -> Formula:
    node = formula
    for position, step in enumerate(addr):
        if step in 'LR' and isinstance(node, Tensor):
            node = node.left if step == 'L' else node.right
        elif step == 'N' and isinstance(node, Neg):
            node = node.child
        else:
            raise UnknownAddress(f"address {addr!r} does not resolve in {print_formula(formula)}",
                                 addr=addr, position=position)
    return node


def leaf_at(formula: Formula, side: Side, addr: LeafAddr) -> LeafRef:
    node = subformula(formula, addr)
    if not isinstance(node, Var):
        raise UnknownAddress(f"address {addr!r} is not a leaf of {print_formula(formula)}", addr=addr)
    return LeafRef(side, addr, node.name, polarity_of(side, addr))


def de_morganize(formula: Formula, start_polarity: Polarity,
                 side: Optional[Side] = None) -> DMTree:
    """Translate to a tensor/par tree: negation flips polarity and disappears."""
    if side is None:
        side = Side.COD if start_polarity is Polarity.POS else Side.DOM

    def build(node: Formula, addr: LeafAddr, polarity: Polarity) -> DMTree:
        while isinstance(node, Neg):
            node, addr, polarity = node.child, addr + 'N', polarity.flipped()
        if isinstance(node, Var):
            return Literal(LeafRef(side, addr, node.name, polarity))
        left = build(node.left, addr + 'L', polarity)
        right = build(node.right, addr + 'R', polarity)
        if polarity is Polarity.POS:
            return TensorNode(side, addr, left, right)
        return ParNode(side, addr, left, right)

    return build(formula, '', start_polarity)


def dm_literals(tree: DMTree) -> List[LeafRef]:
    if isinstance(tree, Literal):
        return [tree.leaf]
    return dm_literals(tree.left) + dm_literals(tree.right)


# ---------- JSON ----------


def formula_to_json(formula: Formula) -> Dict[str, Any]:
    if isinstance(formula, Var):
        return {'var': formula.name}
    if isinstance(formula, Tensor):
        return {'tensor': [formula_to_json(formula.left), formula_to_json(formula.right)]}
    return {'neg': formula_to_json(formula.child)}


def formula_from_json(data: Any, depth: int = 1) -> Formula:
    if isinstance(data, str):
        return parse(data)
    if depth > MAX_NESTING:
        raise FormulaSyntaxError(f"formula nests deeper than {MAX_NESTING} levels", 0)
    if not isinstance(data, dict) or len(data) != 1:
        raise FormulaSyntaxError(f"malformed formula object {data!r}", 0)
    (tag, value), = data.items()
    if tag == 'var':
        return Var(value)
    if tag == 'tensor' and isinstance(value, list) and len(value) == 2:
        return Tensor(formula_from_json(value[0], depth + 1), formula_from_json(value[1], depth + 1))
    if tag == 'neg':
        return Neg(formula_from_json(value, depth + 1))
    raise FormulaSyntaxError(f"malformed formula object {data!r}", 0)
