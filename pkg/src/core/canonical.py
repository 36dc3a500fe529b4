"""Canonical morphisms of the semi star-autonomous structure, as proof nets.

Most constructors are relabelings: a bijection between the leaves of the
domain and the codomain that keeps variables and effective polarities, so
the net links each domain leaf to its image. Everything returned here has
been through full validation (matching, complementarity, switching check).
"""
import logging
from typing import Sequence, Tuple

from src.core.compose import compose, identity, prefixed, relabel, tensor_elements, tensor_mor
from src.core.errors import NotInvertible, ShapeMismatch, UnknownAddress
from src.core.formula import (
    Formula, LeafAddr, Neg, Side, Tensor, leaf_at, leaves, lolli, lolli_parts, print_formula,
)
from src.core.net import JElement, ProofNet, revalidate

logger = logging.getLogger(__name__)

Rule = Tuple[str, str]


def relabeling_net(dom: Formula, cod: Formula, rules: Sequence[Rule]) -> ProofNet:
    """Link each domain leaf at ``prefix + p`` to the codomain leaf at ``image + p``."""
    ordered = sorted(rules, key=lambda rule: -len(rule[0]))
    links = []
    for leaf in leaves(dom, Side.DOM):
        for prefix, image in ordered:
            if leaf.addr.startswith(prefix):
                try:
                    target = leaf_at(cod, Side.COD, image + leaf.addr[len(prefix):])
                except UnknownAddress as e:
                    raise ShapeMismatch(str(e), leaf=str(leaf)) from e
                links.append((leaf, target))
                break
        else:
            raise ShapeMismatch(f"no relabeling rule covers {leaf}", leaf=str(leaf))
    return revalidate(ProofNet(dom, cod, tuple(links)))


def inverse(net: ProofNet) -> ProofNet:
    """Inverse of an isomorphism net: swap sides on every link."""
    if any(a.side is b.side for a, b in net.links):
        raise NotInvertible(f"{net} has a link inside one side", net=str(net))
    return relabel(net, net.cod, net.dom, lambda side, addr: (side.flipped(), addr))


# ---------- tensor ----------


def alpha(a: Formula, b: Formula, c: Formula) -> ProofNet:
    """(A * B) * C -> A * (B * C)."""
    return relabeling_net(Tensor(Tensor(a, b), c), Tensor(a, Tensor(b, c)),
                          [('LL', 'L'), ('LR', 'RL'), ('R', 'RR')])


def alpha_inv(a: Formula, b: Formula, c: Formula) -> ProofNet:
    return inverse(alpha(a, b, c))


def sigma(a: Formula, b: Formula) -> ProofNet:
    """A * B -> B * A."""
    return relabeling_net(Tensor(a, b), Tensor(b, a), [('L', 'R'), ('R', 'L')])


# ---------- closed structure ----------


def _tensor_parts(formula: Formula, what: str) -> Tuple[Formula, Formula]:
    if not isinstance(formula, Tensor):
        raise ShapeMismatch(f"{what} {print_formula(formula)} is not a tensor", formula=print_formula(formula))
    return formula.left, formula.right


def _lolli_parts(formula: Formula, what: str) -> Tuple[Formula, Formula]:
    parts = lolli_parts(formula)
    if parts is None:
        raise ShapeMismatch(f"{what} {print_formula(formula)} is not of the form (A * B^)^",
                            formula=print_formula(formula))
    return parts


def curry(f: ProofNet) -> ProofNet:
    """C(A * B, C) -> C(A, B -o C)."""
    a, b = _tensor_parts(f.dom, 'domain')

    def mapping(side: Side, addr: LeafAddr):
        if side is Side.COD:
            return Side.COD, 'NRN' + addr
        if addr.startswith('L'):
            return Side.DOM, addr[1:]
        return Side.COD, 'NL' + addr[1:]

    return relabel(f, a, lolli(b, f.cod), mapping)


def uncurry(f: ProofNet) -> ProofNet:
    b, c = _lolli_parts(f.cod, 'codomain')

    def mapping(side: Side, addr: LeafAddr):
        if side is Side.DOM:
            return Side.DOM, 'L' + addr
        if addr.startswith('NL'):
            return Side.DOM, 'R' + addr[2:]
        return Side.COD, addr[3:]

    return relabel(f, Tensor(f.dom, b), c, mapping)


def evaluation(a: Formula, b: Formula) -> ProofNet:
    """The counit (A -o B) * A -> B."""
    return uncurry(identity(lolli(a, b)))


def psi(a: Formula, b: Formula, c: Formula) -> ProofNet:
    """(A * B) -o C -> A -o (B -o C), derived through curry and evaluation."""
    internal = lolli(Tensor(a, b), c)
    return curry(curry(compose(alpha(internal, a, b), evaluation(Tensor(a, b), c))))


def psi_direct(a: Formula, b: Formula, c: Formula) -> ProofNet:
    return relabeling_net(lolli(Tensor(a, b), c), lolli(a, lolli(b, c)),
                          [('NLL', 'NL'), ('NLR', 'NRNNL'), ('NRN', 'NRNNRN')])


def psi_inv(a: Formula, b: Formula, c: Formula) -> ProofNet:
    """A -o (B -o C) -> (A * B) -o C, the uncurried construction."""
    n = lolli(a, lolli(b, c))
    return curry(compose(alpha_inv(n, a, b), uncurry(uncurry(identity(n)))))


def e(x: JElement) -> ProofNet:
    """J(A -o B) -> C(A, B)."""
    a, b = _lolli_parts(x.formula, 'element formula')

    def mapping(side: Side, addr: LeafAddr):
        if addr.startswith('NL'):
            return Side.DOM, addr[2:]
        if addr.startswith('NRN'):
            return Side.COD, addr[3:]
        raise ShapeMismatch(f"leaf {addr!r} is outside both lolli blocks", addr=addr)

    return relabel(x, a, b, mapping)


def e_inv(f: ProofNet) -> JElement:
    def mapping(side: Side, addr: LeafAddr):
        return Side.COD, ('NL' if side is Side.DOM else 'NRN') + addr

    return relabel(f, None, lolli(f.dom, f.cod), mapping)


def lolli_mor(f: ProofNet, g: ProofNet) -> ProofNet:
    """f -o g : (X -o Y) -> (X' -o Y') for f : X' -> X, g : Y -> Y'."""
    return dual_of(tensor_mor(f, dual_of(g)))


# ---------- duality ----------


def dual_of(f: ProofNet) -> ProofNet:
    """f : A -> B gives B^ -> A^."""
    return relabel(f, Neg(f.cod), Neg(f.dom), lambda side, addr: (side.flipped(), 'N' + addr))


def iota(a: Formula) -> ProofNet:
    """A -> A^^."""
    return relabeling_net(a, Neg(Neg(a)), [('', 'NN')])


def iota_inv(a: Formula) -> ProofNet:
    return inverse(iota(a))


def transpose(f: ProofNet) -> ProofNet:
    """C(A * B, C^) -> C(A * C, B^)."""
    a, b = _tensor_parts(f.dom, 'domain')
    if not isinstance(f.cod, Neg):
        raise ShapeMismatch(f"codomain {print_formula(f.cod)} is not a negation",
                            formula=print_formula(f.cod))
    c = f.cod.child

    def mapping(side: Side, addr: LeafAddr):
        if side is Side.COD:
            return Side.DOM, 'R' + addr[1:]
        if addr.startswith('L'):
            return Side.DOM, addr
        return Side.COD, 'N' + addr[1:]

    return relabel(f, Tensor(a, c), Neg(b), mapping)


def curry_chain(f: ProofNet) -> ProofNet:
    """Curry rebuilt from duality: iota on C, symmetry, transpose, dual, iota on A."""
    a, b = _tensor_parts(f.dom, 'domain')
    step = compose(f, iota(f.cod))
    step = compose(sigma(b, a), step)
    step = dual_of(transpose(step))
    return compose(iota(a), step, check=True)


# ---------- elements ----------


def m(a: JElement, b: JElement) -> JElement:
    """Tensor of elements, J(A) x J(B) -> J(A * B)."""
    return tensor_elements(a, b, check=True)


def lin_of(a: JElement, x: Formula) -> ProofNet:
    """The linear element a_X : X -> A * X."""
    cod = Tensor(a.formula, x)
    element_part = relabel(a, x, cod, lambda side, addr: (Side.COD, 'L' + addr), check=False)
    wires = relabel(identity(x), x, cod, prefixed('', 'R'), check=False)
    return revalidate(ProofNet(x, cod, element_part.links + wires.links))


def lin_eval(a: JElement) -> ProofNet:
    """x_A followed by evaluation: J(A -o B) -> C(A, B)."""
    dom, cod = _lolli_parts(a.formula, 'element formula')
    return compose(lin_of(a, dom), evaluation(dom, cod), check=True)

