"""Graphviz DOT rendering of proof nets and J-elements.

Each conclusion is drawn as its de Morgan tree (tensor, par and literal
nodes) with solid edges from a connective to its premises; axiom links are
dashed blue edges with ``constraint=false`` so they do not distort the trees.
"""
import logging
from typing import List

from src.core.formula import DMTree, Literal, Polarity, Side, TensorNode, de_morganize, print_formula
from src.core.net import AnyNet, ProofNet, node_id

logger = logging.getLogger(__name__)

AXIOM_STYLE = 'style=dashed, constraint=false, color=blue'


def _quote(text: str) -> str:
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'


def _label(tree: DMTree) -> str:
    if isinstance(tree, Literal):
        mark = '' if tree.leaf.polarity is Polarity.POS else '^'
        return f"{tree.leaf.var}{mark}"
    return '⊗' if isinstance(tree, TensorNode) else '⅋'


def render_dot(value: AnyNet, name: str = 'net') -> str:
    """DOT source for ``value``; deterministic for equal nets."""
    lines: List[str] = [f"graph {_quote(name)} {{", '  node [shape=plaintext];']

    def emit(tree: DMTree) -> str:
        node = node_id(tree)
        lines.append(f"  {_quote(node)} [label={_quote(_label(tree))}];")
        if not isinstance(tree, Literal):
            for child in (tree.left, tree.right):
                lines.append(f"  {_quote(node)} -- {_quote(emit(child))};")
        return node

    for formula, side in value.conclusions():
        start = Polarity.NEG if side is Side.DOM else Polarity.POS
        tree = de_morganize(formula, start, side)
        lines.append(f"  subgraph {_quote('cluster_' + side.value)} {{")
        lines.append(f"    label={_quote(side.value + ': ' + print_formula(formula))};")
        body_start = len(lines)
        emit(tree)
        lines[body_start:] = ['  ' + line for line in lines[body_start:]]
        lines.append('  }')

    for a, b in value.links:
        lines.append(f"  {_quote(str(a))} -- {_quote(str(b))} [{AXIOM_STYLE}];")
    lines.append('}')
    logger.debug(f"Rendered {'net' if isinstance(value, ProofNet) else 'element'} with {len(value.links)} links")
    return '\n'.join(lines) + '\n'
