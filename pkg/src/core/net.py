"""Proof nets as morphisms, J-elements, Danos–Régnier checking and enumeration.

A morphism A -> B is a perfect matching between complementary leaves of A
(domain side, polarity flipped) and B (codomain side). An element of J(A) is
a matching on the leaves of A alone. Correctness is the Danos–Régnier
criterion checked exhaustively: for k par nodes all 2^k switchings are
examined, so the checker is exponential in the number of pars and is only
meant for desk-scale formulas.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from src.core.errors import NotCorrect, NotPerfectMatching, PolarityMismatch, SizeBoundExceeded
from src.core.formula import (
    DMTree, Formula, LeafRef, Literal, Polarity, Side, TensorNode,
    de_morganize, formula_from_json, formula_to_json, leaf_at, leaves, print_formula,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_LEAVES = 12

Link = Tuple[LeafRef, LeafRef]
# One (par node, chosen premise) pair per par node, in traversal order.
Switching = Tuple[Tuple[str, str], ...]
Endpoint = Union[LeafRef, Tuple[Union[Side, str], str], Dict[str, str]]


def normalize_link(a: LeafRef, b: LeafRef) -> Link:
    return (a, b) if a.sort_key <= b.sort_key else (b, a)


def normalize_links(links: Iterable[Link]) -> Tuple[Link, ...]:
    pairs = [normalize_link(a, b) for a, b in links]
    return tuple(sorted(pairs, key=lambda link: (link[0].sort_key, link[1].sort_key)))


@dataclass(frozen=True)
class ProofNet:
    """A morphism dom -> cod. Equality is equality of the sorted link lists."""
    dom: Formula
    cod: Formula
    links: Tuple[Link, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'links', normalize_links(self.links))

    def conclusions(self) -> List[Tuple[Formula, Side]]:
        return [(self.dom, Side.DOM), (self.cod, Side.COD)]

    def __str__(self) -> str:
        shown = ', '.join(f"{a}~{b}" for a, b in self.links)
        return f"{print_formula(self.dom)} -> {print_formula(self.cod)} [{shown}]"


@dataclass(frozen=True)
class JElement:
    """An element of J(formula): a one-sided net on the formula."""
    formula: Formula
    links: Tuple[Link, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'links', normalize_links(self.links))

    def conclusions(self) -> List[Tuple[Formula, Side]]:
        return [(self.formula, Side.COD)]

    def __str__(self) -> str:
        shown = ', '.join(f"{a}~{b}" for a, b in self.links)
        return f"J({print_formula(self.formula)}) [{shown}]"


AnyNet = Union[ProofNet, JElement]


@dataclass(frozen=True)
class DRResult:
    correct: bool
    witness: Optional[Switching] = None
    switchings: int = 0
    # 'cycle' or 'disconnected' for a failing switching
    reason: Optional[str] = None
    cycle: Tuple[Tuple[str, str], ...] = ()

    def __bool__(self) -> bool:
        return self.correct


# ---------- validation ----------


def _resolve(conclusions: Sequence[Tuple[Formula, Side]], endpoint: Endpoint) -> LeafRef:
    if isinstance(endpoint, LeafRef):
        side, addr = endpoint.side, endpoint.addr
    elif isinstance(endpoint, dict):
        side, addr = Side(endpoint['side']), endpoint['addr']
    else:
        side, addr = Side(endpoint[0]), endpoint[1]
    for formula, conclusion_side in conclusions:
        if conclusion_side is side:
            return leaf_at(formula, side, addr)
    raise NotPerfectMatching(f"no {side.value} conclusion for leaf {addr!r}", side=side.value, addr=addr)


def _check_matching(conclusions: Sequence[Tuple[Formula, Side]], links: Sequence[Link]) -> None:
    expected = [leaf for formula, side in conclusions for leaf in leaves(formula, side)]
    used = Counter(endpoint for link in links for endpoint in link)
    reused = sorted((str(leaf) for leaf, count in used.items() if count > 1))
    unused = [str(leaf) for leaf in expected if leaf not in used]
    if reused or unused:
        raise NotPerfectMatching(
            f"links are not a perfect matching (unused: {unused}, reused: {reused})",
            unused=unused, reused=reused)
    for a, b in links:
        if a.var != b.var or a.polarity == b.polarity:
            raise PolarityMismatch(
                f"link {a}~{b} does not join complementary leaves",
                link=[str(a), str(b)], vars=[a.var, b.var],
                polarities=[a.polarity.value, b.polarity.value])


def _validated(value: AnyNet) -> AnyNet:
    _check_matching(value.conclusions(), value.links)
    result = dr_correct(value)
    if not result.correct:
        raise NotCorrect(f"{value} fails the switching criterion", witness=result.witness,
                         reason=result.reason, cycle=result.cycle)
    return value


def make_net(dom: Formula, cod: Formula, links: Iterable[Tuple[Endpoint, Endpoint]]) -> ProofNet:
    """Build a ProofNet, checking matching, complementarity and correctness."""
    conclusions = [(dom, Side.DOM), (cod, Side.COD)]
    resolved = [(_resolve(conclusions, a), _resolve(conclusions, b)) for a, b in links]
    return _validated(ProofNet(dom, cod, tuple(resolved)))


def make_element(formula: Formula, links: Iterable[Tuple[Endpoint, Endpoint]]) -> JElement:
    conclusions = [(formula, Side.COD)]
    resolved = [(_resolve(conclusions, a), _resolve(conclusions, b)) for a, b in links]
    return _validated(JElement(formula, tuple(resolved)))


def revalidate(value: AnyNet) -> AnyNet:
    """Re-run every check on an already constructed value."""
    return _validated(value)


# ---------- Danos–Régnier ----------


def node_id(tree: DMTree) -> str:
    """Graph node name of a de Morgan tree node: the leaf string or ``side:addr``."""
    if isinstance(tree, Literal):
        return str(tree.leaf)
    return f"{tree.side.value}:{tree.addr or '.'}"


def proof_structure(value: AnyNet) -> Tuple[nx.Graph, List[Tuple[str, str, str]]]:
    """Base graph (tensor edges and axiom links) plus the par nodes with both premises."""
    graph = nx.Graph()
    pars: List[Tuple[str, str, str]] = []

    def add(tree: DMTree) -> str:
        node = node_id(tree)
        graph.add_node(node)
        if isinstance(tree, Literal):
            return node
        left, right = add(tree.left), add(tree.right)
        if isinstance(tree, TensorNode):
            graph.add_edge(node, left)
            graph.add_edge(node, right)
        else:
            pars.append((node, left, right))
        return node

    for formula, side in value.conclusions():
        start = Polarity.NEG if side is Side.DOM else Polarity.POS
        add(de_morganize(formula, start, side))
    graph.add_edges_from((str(a), str(b)) for a, b in value.links)
    return graph, pars


def switchings(pars: Sequence[Tuple[str, str, str]]) -> Iterator[Switching]:
    for choice in itertools.product('LR', repeat=len(pars)):
        yield tuple((node, side) for (node, _, _), side in zip(pars, choice))


def dr_correct(value: AnyNet) -> DRResult:
    """Every switching graph must be a tree (acyclic and connected)."""
    graph, pars = proof_structure(value)
    premise = {node: {'L': left, 'R': right} for node, left, right in pars}
    examined = 0
    for switching in switchings(pars):
        examined += 1
        chosen = [(node, premise[node][side]) for node, side in switching]
        graph.add_edges_from(chosen)
        if not nx.is_tree(graph):
            try:
                cycle = tuple((u, v) for u, v in nx.find_cycle(graph))
                reason = 'cycle'
            except nx.NetworkXNoCycle:
                cycle, reason = (), 'disconnected'
            logger.debug(f"Switching {switching} fails for {value}: {reason}")
            return DRResult(False, switching, examined, reason, cycle)
        graph.remove_edges_from(chosen)
    return DRResult(True, None, examined)


# ---------- enumeration ----------


def _complementary(a: LeafRef, b: LeafRef) -> bool:
    return a.var == b.var and a.polarity != b.polarity


def perfect_matchings(pool: Sequence[LeafRef]) -> Iterator[Tuple[Link, ...]]:
    """All complementary perfect matchings, lexicographic in leaf order."""
    balance = Counter((leaf.var, leaf.polarity) for leaf in pool)
    for name, _ in balance:
        if balance[(name, Polarity.POS)] != balance[(name, Polarity.NEG)]:
            return

    def extend(remaining: Tuple[LeafRef, ...]) -> Iterator[Tuple[Link, ...]]:
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for index, partner in enumerate(rest):
            if _complementary(first, partner):
                for tail in extend(rest[:index] + rest[index + 1:]):
                    yield ((first, partner),) + tail

    yield from extend(tuple(pool))


def _check_bound(total: int, max_leaves: int, what: str) -> None:
    if total > max_leaves:
        raise SizeBoundExceeded(f"{what} has {total} leaves, bound is {max_leaves}",
                                leaves=total, bound=max_leaves)


@lru_cache(maxsize=4096)
def _hom(dom: Formula, cod: Formula) -> Tuple[ProofNet, ...]:
    pool = leaves(dom, Side.DOM) + leaves(cod, Side.COD)
    nets = (ProofNet(dom, cod, links) for links in perfect_matchings(pool))
    return tuple(net for net in nets if dr_correct(net).correct)


@lru_cache(maxsize=4096)
def _j(formula: Formula) -> Tuple[JElement, ...]:
    elements = (JElement(formula, links) for links in perfect_matchings(leaves(formula, Side.COD)))
    return tuple(element for element in elements if dr_correct(element).correct)


def enumerate_hom(dom: Formula, cod: Formula, max_leaves: int = DEFAULT_MAX_LEAVES) -> List[ProofNet]:
    """Every correct net dom -> cod, in lexicographic order of link lists."""
    total = len(leaves(dom, Side.DOM)) + len(leaves(cod, Side.COD))
    _check_bound(total, max_leaves, f"hom({print_formula(dom)}, {print_formula(cod)})")
    return list(_hom(dom, cod))


def enumerate_j(formula: Formula, max_leaves: int = DEFAULT_MAX_LEAVES) -> List[JElement]:
    _check_bound(len(leaves(formula, Side.COD)), max_leaves, f"J({print_formula(formula)})")
    return list(_j(formula))


# ---------- JSON ----------


def links_to_json(links: Iterable[Link]) -> List[List[Dict[str, str]]]:
    return [[a.to_json(), b.to_json()] for a, b in links]


def net_to_json(value: AnyNet) -> Dict[str, Any]:
    if isinstance(value, ProofNet):
        return {'dom': formula_to_json(value.dom), 'cod': formula_to_json(value.cod),
                'links': links_to_json(value.links)}
    return {'cod': formula_to_json(value.formula), 'links': links_to_json(value.links)}


def net_from_json(data: Dict[str, Any], check: bool = True) -> AnyNet:
    """Load a net (with "dom") or an element (without) from its JSON form."""
    cod = formula_from_json(data['cod'])
    pairs = [tuple(pair) for pair in data.get('links', [])]
    if 'dom' in data:
        dom = formula_from_json(data['dom'])
        if check:
            return make_net(dom, cod, pairs)
        conclusions = [(dom, Side.DOM), (cod, Side.COD)]
        return ProofNet(dom, cod, tuple((_resolve(conclusions, a), _resolve(conclusions, b)) for a, b in pairs))
    if check:
        return make_element(cod, pairs)
    conclusions = [(cod, Side.COD)]
    return JElement(cod, tuple((_resolve(conclusions, a), _resolve(conclusions, b)) for a, b in pairs))


def switching_to_json(switching: Optional[Switching]) -> Optional[List[List[str]]]:
    if switching is None:
        return None
    return [[node, side] for node, side in switching]
