"""Categorical structure on proof nets.

Composition is cut elimination by path tracing: starting from each outer
leaf, follow links alternately in the two nets across the shared interface
formula until an outer leaf is reached. A codomain leaf of the left net at
address ``a`` meets the domain leaf of the right net at the same address.
"""
import logging
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from src.core.errors import CutCycle, InterfaceMismatch, ShapeMismatch
from src.core.formula import Formula, LeafAddr, LeafRef, Side, Tensor, leaf_at, leaves, polarity_of, print_formula
from src.core.net import AnyNet, JElement, Link, ProofNet, revalidate

logger = logging.getLogger(__name__)

AddressMap = Callable[[Side, LeafAddr], Tuple[Side, LeafAddr]]


def _partners(links: Iterable[Link]) -> Dict[LeafRef, LeafRef]:
    partner = {}
    for a, b in links:
        partner[a] = b
        partner[b] = a
    return partner


def _across(leaf: LeafRef, to_side: Side) -> LeafRef:
    return LeafRef(to_side, leaf.addr, leaf.var, polarity_of(to_side, leaf.addr))


def _cut(left: AnyNet, right: ProofNet) -> List[Link]:
    """Trace paths through the interface (left's codomain = right's domain)."""
    left_partner = _partners(left.links)
    right_partner = _partners(right.links)
    crossed: Set[LeafAddr] = set()

    def trace(start: LeafRef, in_left: bool) -> LeafRef:
        current, seen = start, set()
        while True:
            partner = (left_partner if in_left else right_partner)[current]
            outer = Side.DOM if in_left else Side.COD
            if partner.side is outer:
                return partner
            if partner.addr in seen:
                raise CutCycle(f"trace from {start} revisits interface leaf {partner.addr!r}",
                               start=str(start), addr=partner.addr)
            seen.add(partner.addr)
            crossed.add(partner.addr)
            current = _across(partner, Side.DOM if in_left else Side.COD)
            in_left = not in_left

    outer_left = [leaf for leaf in left_partner if leaf.side is Side.DOM and isinstance(left, ProofNet)]
    outer_right = [leaf for leaf in right_partner if leaf.side is Side.COD]
    done: Set[LeafRef] = set()
    result: List[Link] = []
    for start, in_left in [(leaf, True) for leaf in sorted(outer_left, key=lambda leaf: leaf.sort_key)] + \
                          [(leaf, False) for leaf in sorted(outer_right, key=lambda leaf: leaf.sort_key)]:
        if start in done:
            continue
        end = trace(start, in_left)
        done.update((start, end))
        result.append((start, end))

    interface = {leaf.addr for leaf in right_partner if leaf.side is Side.DOM}
    if crossed != interface:
        loose = sorted(interface - crossed)
        raise CutCycle(f"interface leaves {loose} form a closed cycle", addrs=loose)
    return result


def identity(formula: Formula) -> ProofNet:
    links = [(leaf, _across(leaf, Side.COD)) for leaf in leaves(formula, Side.DOM)]
    return ProofNet(formula, formula, tuple(links))


def compose(f: ProofNet, g: ProofNet, check: bool = False) -> ProofNet:
    """g after f: f : A -> B, g : B -> C gives A -> C."""
    if f.cod != g.dom:
        raise InterfaceMismatch(
            f"cannot compose: {print_formula(f.cod)} is not {print_formula(g.dom)}",
            left=print_formula(f.cod), right=print_formula(g.dom))
    result = ProofNet(f.dom, g.cod, tuple(_cut(f, g)))
    return revalidate(result) if check else result


def compose_all(*nets: ProofNet, check: bool = False) -> ProofNet:
    result = nets[0]
    for net in nets[1:]:
        result = compose(result, net, check=check)
    return result


def j_map(f: ProofNet, element: JElement, check: bool = False) -> JElement:
    """J(f)(a): cut the element against f."""
    if element.formula != f.dom:
        raise InterfaceMismatch(
            f"cannot apply J: element of J({print_formula(element.formula)}) "
            f"against a net from {print_formula(f.dom)}",
            left=print_formula(element.formula), right=print_formula(f.dom))
    result = JElement(f.cod, tuple(_cut(element, f)))
    return revalidate(result) if check else result


def relabel(value: AnyNet, dom: Optional[Formula], cod: Formula, mapping: AddressMap,
            check: bool = True) -> AnyNet:
    """Move every link endpoint along ``mapping`` into new conclusions.

    With ``dom`` None the result is a JElement on ``cod``.
    """
    targets = {Side.COD: cod}
    if dom is not None:
        targets[Side.DOM] = dom

    def move(leaf: LeafRef) -> LeafRef:
        side, addr = mapping(leaf.side, leaf.addr)
        if side not in targets:
            raise ShapeMismatch(f"{leaf} maps to missing {side.value} side", leaf=str(leaf))
        moved = leaf_at(targets[side], side, addr)
        if moved.var != leaf.var:
            raise ShapeMismatch(f"{leaf} ({leaf.var}) maps to {moved} ({moved.var})",
                                leaf=str(leaf), target=str(moved))
        return moved

    links = tuple((move(a), move(b)) for a, b in value.links)
    result = JElement(cod, links) if dom is None else ProofNet(dom, cod, links)
    return revalidate(result) if check else result


def prefixed(prefix_dom: str, prefix_cod: str) -> AddressMap:
    def mapping(side: Side, addr: LeafAddr) -> Tuple[Side, LeafAddr]:
        return side, (prefix_dom if side is Side.DOM else prefix_cod) + addr
    return mapping


def tensor_mor(f: ProofNet, g: ProofNet, check: bool = False) -> ProofNet:
    """f (x) g : A (x) B -> A' (x) B'."""
    dom, cod = Tensor(f.dom, g.dom), Tensor(f.cod, g.cod)
    left = relabel(f, dom, cod, prefixed('L', 'L'), check=False)
    right = relabel(g, dom, cod, prefixed('R', 'R'), check=False)
    result = ProofNet(dom, cod, left.links + right.links)
    return revalidate(result) if check else result


def tensor_elements(a: JElement, b: JElement, check: bool = False) -> JElement:
    formula = Tensor(a.formula, b.formula)
    left = relabel(a, None, formula, prefixed('', 'L'), check=False)
    right = relabel(b, None, formula, prefixed('', 'R'), check=False)
    result = JElement(formula, left.links + right.links)
    return revalidate(result) if check else result
