"""Coherence harness: instantiate each diagram over a grid and compare nets.

Two composites are equal when their sorted link lists are equal. Checks
quantified over hom-sets or J-sets are exhaustive within the enumeration
bound; an instance where the quantified set is empty is reported as vacuous.
"""
import asyncio
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.canonical import (
    alpha, curry, curry_chain, dual_of, e, e_inv, evaluation, inverse, iota, iota_inv,
    lin_eval, lin_of, lolli_mor, m, psi, psi_direct, psi_inv, relabeling_net, sigma, transpose, uncurry,
)
from src.core.compose import compose, compose_all, identity, j_map, tensor_mor
from src.core.errors import MLLError, SizeBoundExceeded
from src.core.formula import (
    Formula, Neg, Side, Tensor, Var, leaf_count, leaves, lolli, print_formula,
)
from src.core.net import (
    DEFAULT_MAX_LEAVES, AnyNet, JElement, ProofNet, enumerate_hom, enumerate_j, net_to_json, revalidate,
)

logger = logging.getLogger(__name__)


class Status(str, Enum):
    HOLDS = 'holds'
    FAILS = 'fails'
    SKIPPED = 'skipped'


@dataclass(frozen=True)
class DiagramReport:
    diagram: str
    instance: Tuple[Formula, ...]
    status: Status
    vacuous: bool = False
    checked: int = 0
    witness: Optional[Tuple[Any, Any]] = None
    note: str = ''
    bound: int = DEFAULT_MAX_LEAVES

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def to_json(self) -> Dict[str, Any]:
        witness = None
        if self.witness is not None:
            witness = [_witness_json(side) for side in self.witness]
        return {
            'diagram': self.diagram,
            'instance': [print_formula(f) for f in self.instance],
            'status': self.status.value,
            'vacuous': self.vacuous,
            'checked': self.checked,
            'witness': witness,
            'note': self.note,
            'bound': self.bound,
        }


def _witness_json(value: Any) -> Any:
    if isinstance(value, (ProofNet, JElement)):
        return net_to_json(value)
    if isinstance(value, (int, str)) or value is None:
        return value
    return str(value)


def _compare(diagram: str, instance: Sequence[Formula], pairs: Iterable[Tuple[Any, Any]],
             bound: int, note: str = '') -> DiagramReport:
    """First unequal pair (in deterministic order) is the witness."""
    checked = 0
    for lhs, rhs in pairs:
        checked += 1
        if lhs != rhs:
            logger.info(f"Diagram {diagram} fails at {[print_formula(f) for f in instance]}")
            return DiagramReport(diagram, tuple(instance), Status.FAILS, False, checked, (lhs, rhs), note, bound)
    return DiagramReport(diagram, tuple(instance), Status.HOLDS, checked == 0, checked, None, note, bound)


# ---------- grid ----------


def _negations(formula: Formula, neg_depth: int) -> List[Formula]:
    wrapped, current = [formula], formula
    for _ in range(neg_depth):
        current = Neg(current)
        wrapped.append(current)
    return wrapped


def formula_grid(names: Sequence[str], max_leaves: int, neg_depth: int = 2) -> List[Formula]:
    """All formulas over ``names`` up to ``max_leaves`` leaves and at most
    ``neg_depth`` stacked negations, ordered by leaf count then text."""
    by_size: Dict[int, List[Formula]] = {}
    for size in range(1, max_leaves + 1):
        cores: List[Formula] = []
        if size == 1:
            cores = [Var(name) for name in names]
        for split in range(1, size):
            for left in by_size[split]:
                for right in by_size[size - split]:
                    cores.append(Tensor(left, right))
        by_size[size] = [w for core in cores for w in _negations(core, neg_depth)]
    grid = {formula for group in by_size.values() for formula in group}
    return sorted(grid, key=lambda f: (leaf_count(f), print_formula(f)))


# ---------- basic structure ----------


def check_sigma(a: Formula, b: Formula, sigma_of: Callable = sigma,
                bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    pairs = [(compose(sigma_of(a, b), sigma_of(b, a)), identity(Tensor(a, b)))]
    return _compare('sigma', (a, b), pairs, bound)


def check_pentagon(a: Formula, b: Formula, c: Formula, d: Formula,
                   bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    top = compose(alpha(Tensor(a, b), c, d), alpha(a, b, Tensor(c, d)))
    bottom = compose_all(tensor_mor(alpha(a, b, c), identity(d)),
                         alpha(a, Tensor(b, c), d),
                         tensor_mor(identity(a), alpha(b, c, d)))
    return _compare('pentagon', (a, b, c, d), [(top, bottom)], bound)


def check_hexagon(a: Formula, b: Formula, c: Formula, sigma_of: Callable = sigma,
                  bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    top = compose_all(alpha(a, b, c), sigma_of(a, Tensor(b, c)), alpha(b, c, a))
    bottom = compose_all(tensor_mor(sigma_of(a, b), identity(c)),
                         alpha(b, a, c),
                         tensor_mor(identity(b), sigma_of(a, c)))
    return _compare('hexagon', (a, b, c), [(top, bottom)], bound)


def check_psicoh(a: Formula, b: Formula, c: Formula, d: Formula, psi_of: Callable = psi,
                 bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    top = compose_all(lolli_mor(alpha(a, b, c), identity(d)),
                      psi_of(Tensor(a, b), c, d),
                      psi_of(a, b, lolli(c, d)))
    bottom = compose(psi_of(a, Tensor(b, c), d), lolli_mor(identity(a), psi_of(b, c, d)))
    return _compare('psicoh', (a, b, c, d), [(top, bottom)], bound)


def check_psi_agree(a: Formula, b: Formula, c: Formula,
                    bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    """Both constructions of psi coincide and the uncurried one inverts them."""
    derived, direct, back = psi(a, b, c), psi_direct(a, b, c), psi_inv(a, b, c)
    pairs = [
        (derived, direct),
        (back, inverse(direct)),
        (compose(derived, back), identity(derived.dom)),
        (compose(back, derived), identity(derived.cod)),
    ]
    return _compare('psi_agree', (a, b, c), pairs, bound)


# ---------- closed structure ----------


def check_def_psi(a: Formula, x: Formula, y: Formula, z: Formula,
                  bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    psi_xyz = psi(x, y, z)

    def pairs():
        for f in enumerate_hom(a, lolli(Tensor(x, y), z), bound):
            yield compose(f, psi_xyz), curry(curry(compose(alpha(a, x, y), uncurry(f))))

    return _compare('def_psi', (a, x, y, z), pairs(), bound)


def check_psi_square(a: Formula, b: Formula, c: Formula, curry_of: Callable = curry,
                     bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    psi_abc = psi(a, b, c)

    def pairs():
        for x in enumerate_j(lolli(Tensor(a, b), c), bound):
            yield curry_of(e(x)), e(j_map(psi_abc, x))

    return _compare('psi_square', (a, b, c), pairs(), bound)


def check_tensel(a: Formula, b: Formula, c: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    """J(alpha)((a * b) * c) = a * (b * c)."""
    alpha_abc = alpha(a, b, c)

    def pairs():
        for x, y, w in itertools.product(enumerate_j(a, bound), enumerate_j(b, bound), enumerate_j(c, bound)):
            yield j_map(alpha_abc, m(m(x, y), w), check=True), m(x, m(y, w))

    return _compare('tensel', (a, b, c), pairs(), bound)


def check_lin(a: Formula, x: Formula, y: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    """Linear-element triangle, naturality in X, and compatibility with J(f)."""
    def pairs():
        for element in enumerate_j(a, bound):
            triangle = compose(tensor_mor(lin_of(element, x), identity(y)), alpha(a, x, y))
            yield lin_of(element, Tensor(x, y)), triangle
            for f in enumerate_hom(x, y, bound):
                yield (compose(lin_of(element, x), tensor_mor(identity(a), f)),
                       compose(f, lin_of(element, y)))
            for g in enumerate_hom(a, a, bound):
                yield (lin_of(j_map(g, element), x),
                       compose(lin_of(element, x), tensor_mor(g, identity(x))))

    return _compare('lin', (a, x, y), pairs(), bound)


def check_l_iso(a: Formula, b: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    """l agrees with e pointwise and is a bijection J(A -o B) -> C(A, B)."""
    elements = enumerate_j(lolli(a, b), bound)
    homs = enumerate_hom(a, b, bound)
    instance = (a, b)
    images: Dict[ProofNet, Any] = {}
    for x in elements:
        image, expected = lin_eval(x), e(x)
        if image != expected:
            return DiagramReport('l_iso', instance, Status.FAILS, False, len(images) + 1,
                                 (image, expected), 'l differs from e', bound)
        if image in images:
            return DiagramReport('l_iso', instance, Status.FAILS, False, len(images) + 1,
                                 (images[image], x), 'l is not injective', bound)
        images[image] = x
    missing = [f for f in homs if f not in images]
    if missing:
        return DiagramReport('l_iso', instance, Status.FAILS, False, len(images),
                             (missing[0], len(elements)), 'l is not surjective', bound)
    return DiagramReport('l_iso', instance, Status.HOLDS, not elements, len(elements), None, '', bound)


# ---------- star-autonomous ----------


def _bijection_pairs(source: Sequence[AnyNet], image_of: Callable, target: Sequence[AnyNet],
                     back: Callable) -> Iterator[Tuple[Any, Any]]:
    images = [image_of(f) for f in source]
    yield len(set(images)), len(source)
    yield sorted(map(str, images)), sorted(map(str, target))
    for f, image in zip(source, images):
        yield back(image), f


def check_sstac(a: Formula, b: Formula, c: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        yield compose(iota(a), iota_inv(a)), identity(a)
        yield compose(iota_inv(a), iota(a)), identity(Neg(Neg(a)))
        into_dual = enumerate_hom(Tensor(a, b), Neg(c), bound)
        for f in into_dual:
            yield transpose(transpose(f)), f
        yield from _bijection_pairs(into_dual, transpose, enumerate_hom(Tensor(a, c), Neg(b), bound), transpose)
        plain = enumerate_hom(a, b, bound)
        yield from _bijection_pairs(plain, dual_of, enumerate_hom(Neg(b), Neg(a), bound),
                                    lambda g: compose_all(iota(a), dual_of(g), iota_inv(b)))
        for f in plain:
            yield compose(f, iota(b)), compose(iota(a), dual_of(dual_of(f)))
        for f in enumerate_hom(Tensor(a, b), c, bound):
            yield curry_chain(f), curry(f)

    return _compare('sstac', (a, b, c), pairs(), bound)


# ---------- category laws and bijections ----------


def check_category(a: Formula, b: Formula, c: Formula, d: Formula,
                   bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        fs, gs, hs = enumerate_hom(a, b, bound), enumerate_hom(b, c, bound), enumerate_hom(c, d, bound)
        for f in fs:
            yield compose(identity(a), f, check=True), f
            yield compose(f, identity(b), check=True), f
        for f, g, h in itertools.product(fs, gs, hs):
            yield (compose(compose(f, g, check=True), h, check=True),
                   compose(f, compose(g, h, check=True), check=True))

    return _compare('category', (a, b, c, d), pairs(), bound)


def check_bijections(a: Formula, b: Formula, c: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    """curry, e, dual_of and transpose are bijections with the stated inverses."""
    def pairs():
        yield from _bijection_pairs(enumerate_hom(Tensor(a, b), c, bound), curry,
                                    enumerate_hom(a, lolli(b, c), bound), uncurry)
        yield from _bijection_pairs(enumerate_j(lolli(a, b), bound), e, enumerate_hom(a, b, bound), e_inv)
        plain = enumerate_hom(a, b, bound)
        yield from _bijection_pairs(plain, dual_of, enumerate_hom(Neg(b), Neg(a), bound),
                                    lambda g: compose_all(iota(a), dual_of(g), iota_inv(b)))
        yield from _bijection_pairs(enumerate_hom(Tensor(a, b), Neg(c), bound), transpose,
                                    enumerate_hom(Tensor(a, c), Neg(b), bound), transpose)

    return _compare('bijections', (a, b, c), pairs(), bound)


# ---------- naturality ----------


def _arrows(formula: Formula, bound: int) -> List[ProofNet]:
    """Morphisms out of ``formula`` used to test naturality: into itself and its double dual."""
    return enumerate_hom(formula, formula, bound) + enumerate_hom(formula, Neg(Neg(formula)), bound)


def check_nat_alpha(a: Formula, b: Formula, c: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for f, g, h in itertools.product(_arrows(a, bound), _arrows(b, bound), _arrows(c, bound)):
            yield (compose(tensor_mor(tensor_mor(f, g), h), alpha(f.cod, g.cod, h.cod)),
                   compose(alpha(a, b, c), tensor_mor(f, tensor_mor(g, h))))

    return _compare('nat_alpha', (a, b, c), pairs(), bound)


def check_nat_sigma(a: Formula, b: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for f, g in itertools.product(_arrows(a, bound), _arrows(b, bound)):
            yield (compose(tensor_mor(f, g), sigma(f.cod, g.cod)),
                   compose(sigma(a, b), tensor_mor(g, f)))

    return _compare('nat_sigma', (a, b), pairs(), bound)


def check_nat_psi(a: Formula, b: Formula, c: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for f, g, h in itertools.product(_arrows(a, bound), _arrows(b, bound), _arrows(c, bound)):
            yield (compose(lolli_mor(tensor_mor(f, g), h), psi(a, b, h.cod)),
                   compose(psi(f.cod, g.cod, c), lolli_mor(f, lolli_mor(g, h))))

    return _compare('nat_psi', (a, b, c), pairs(), bound)


def check_nat_e(a: Formula, b: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for f, g in itertools.product(_arrows(a, bound), _arrows(b, bound)):
            for x in enumerate_j(lolli(f.cod, b), bound):
                yield e(j_map(lolli_mor(f, g), x)), compose_all(f, e(x), g)

    return _compare('nat_e', (a, b), pairs(), bound)


def check_nat_iota(a: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for f in _arrows(a, bound):
            yield compose(f, iota(f.cod)), compose(iota(a), dual_of(dual_of(f)))

    return _compare('nat_iota', (a,), pairs(), bound)


def check_nat_transpose(a: Formula, b: Formula, c: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for u, v, w in itertools.product(_arrows(a, bound), _arrows(b, bound), _arrows(c, bound)):
            for f in enumerate_hom(Tensor(u.cod, v.cod), Neg(w.cod), bound):
                g = compose(tensor_mor(u, v), compose(f, dual_of(w)))
                yield transpose(g), compose_all(tensor_mor(u, w), transpose(f), dual_of(v))

    return _compare('nat_transpose', (a, b, c), pairs(), bound)


def check_nat_eval(a: Formula, b: Formula, bound: int = DEFAULT_MAX_LEAVES) -> DiagramReport:
    def pairs():
        for g in _arrows(b, bound):
            yield (compose(evaluation(a, b), g),
                   compose(tensor_mor(lolli_mor(identity(a), g), identity(a)), evaluation(a, g.cod)))

    return _compare('nat_eval', (a, b), pairs(), bound)


# ---------- negative controls ----------


def reversed_sigma(a: Formula, b: Formula) -> ProofNet:
    """Leaf-order-reversing linking A * B -> B * A; agrees with sigma on atoms only."""
    dom, cod = Tensor(a, b), Tensor(b, a)
    try:
        links = zip(leaves(dom, Side.DOM), reversed(leaves(cod, Side.COD)))
        return revalidate(ProofNet(dom, cod, tuple(links)))
    except MLLError:
        return sigma(a, b)


def misoriented_psi(a: Formula, b: Formula, c: Formula) -> ProofNet:
    """psi with the A and B blocks exchanged, where their shapes allow it."""
    try:
        return relabeling_net(lolli(Tensor(a, b), c), lolli(a, lolli(b, c)),
                              [('NLL', 'NRNNL'), ('NLR', 'NL'), ('NRN', 'NRNNRN')])
    except MLLError:
        return psi(a, b, c)


# ---------- suite ----------


@dataclass(frozen=True)
class Diagram:
    name: str
    arity: int
    check: Callable[..., DiagramReport]
    # designated instances built from the first two generator names
    anchors: Callable[[Formula, Formula], List[Tuple[Formula, ...]]] = lambda v, w: []


def _lolli_atom(v: Formula) -> Formula:
    return lolli(v, v)


DIAGRAMS: List[Diagram] = [
    Diagram('sigma', 2, check_sigma),
    Diagram('pentagon', 4, check_pentagon, lambda v, w: [(Tensor(v, w), v, Neg(w), v)]),
    Diagram('hexagon', 3, check_hexagon, lambda v, w: [(v, v, v), (Tensor(v, w), w, v)]),
    Diagram('psicoh', 4, check_psicoh, lambda v, w: [(v, v, v, v), (v, w, v, w)]),
    Diagram('psi_agree', 3, check_psi_agree, lambda v, w: [(Tensor(v, w), v, Neg(w))]),
    Diagram('def_psi', 4, check_def_psi, lambda v, w: [(v, w, v, Tensor(v, Tensor(w, v)))]),
    Diagram('psi_square', 3, check_psi_square, lambda v, w: [(v, w, Tensor(v, w)), (v, v, Tensor(v, v))]),
    Diagram('tensel', 3, check_tensel, lambda v, w: [(_lolli_atom(v), _lolli_atom(w), _lolli_atom(v))]),
    Diagram('lin', 3, check_lin, lambda v, w: [(_lolli_atom(v), v, v), (_lolli_atom(w), v, Neg(Neg(v)))]),
    Diagram('l_iso', 2, check_l_iso, lambda v, w: [(Tensor(v, v), Tensor(v, v)), (Tensor(v, w), Tensor(w, v))]),
    Diagram('sstac', 3, check_sstac, lambda v, w: [(v, w, Tensor(v, w)), (v, v, Neg(v))]),
    Diagram('category', 4, check_category, lambda v, w: [(v, Neg(Neg(v)), v, Neg(Neg(v)))]),
    Diagram('bijections', 3, check_bijections, lambda v, w: [(v, w, Tensor(v, w)), (v, v, Neg(v))]),
    Diagram('nat_alpha', 3, check_nat_alpha, lambda v, w: [(Tensor(v, v), v, w)]),
    Diagram('nat_sigma', 2, check_nat_sigma, lambda v, w: [(Tensor(v, v), w)]),
    Diagram('nat_psi', 3, check_nat_psi, lambda v, w: [(v, w, v)]),
    Diagram('nat_e', 2, check_nat_e, lambda v, w: [(v, v), (Tensor(v, v), Tensor(v, v))]),
    Diagram('nat_iota', 1, check_nat_iota, lambda v, w: [(Tensor(v, v),)]),
    Diagram('nat_transpose', 3, check_nat_transpose, lambda v, w: [(v, v, Neg(v)), (w, v, Neg(Tensor(w, v)))]),
    Diagram('nat_eval', 2, check_nat_eval, lambda v, w: [(v, Tensor(v, v))]),
]

DIAGRAM_NAMES = [diagram.name for diagram in DIAGRAMS]
CONTROLS = ('wrong_sigma', 'misoriented_psi')
# Diagrams checked on every grid tuple up to ``exhaustive_leaves`` total leaves.
EXHAUSTIVE = ('category', 'bijections')


@dataclass
class SuiteConfig:
    vars: Tuple[str, ...] = ('p', 'q')
    max_leaves: int = 6
    grid_leaves: int = 3
    exhaustive_leaves: int = 4
    neg_depth: int = 2
    samples: int = 16
    seed: int = 0
    workers: int = 4
    enumeration_bound: int = DEFAULT_MAX_LEAVES
    diagrams: Tuple[str, ...] = tuple(DIAGRAM_NAMES)
    inject: Tuple[str, ...] = ()

    @classmethod
    def from_config(cls, settings: Dict[str, Any], **overrides: Any) -> 'SuiteConfig':
        values = {key: settings[key] for key in cls.__dataclass_fields__ if key in settings}
        values.update({key: value for key, value in overrides.items() if value is not None})
        for key in ('vars', 'diagrams', 'inject'):
            if key in values:
                values[key] = tuple(values[key])
        return cls(**values)


class CoherenceSuite:
    """Runs every selected diagram over its instances and collects reports."""

    def __init__(self, config: Optional[SuiteConfig] = None):
        self.config = config or SuiteConfig()
        self.grid: List[Formula] = []
        self.reports: List[DiagramReport] = []

    async def initialize(self):
        """Build the formula grid."""
        unknown = [name for name in self.config.diagrams if name not in DIAGRAM_NAMES]
        if unknown:
            raise ValueError(f"Unknown diagrams: {', '.join(unknown)}")
        bad = [name for name in self.config.inject if name not in CONTROLS]
        if bad:
            raise ValueError(f"Unknown negative controls: {', '.join(bad)}")
        self.grid = formula_grid(self.config.vars, min(self.config.grid_leaves, self.config.max_leaves),
                                 self.config.neg_depth)
        logger.info(f"Formula grid has {len(self.grid)} formulas")

    async def close(self):
        """Release the grid."""
        self.grid = []

    def exhaustive_bound(self, diagram: Diagram) -> int:
        """Total-leaf bound below which every grid tuple is checked; 0 when sampling only."""
        if diagram.name not in EXHAUSTIVE:
            return 0
        return min(self.config.exhaustive_leaves, self.config.max_leaves)

    def grid_tuples(self, arity: int, limit: int) -> List[Tuple[Formula, ...]]:
        """Every ``arity``-tuple of grid formulas with at most ``limit`` leaves in total."""
        sized = [(f, leaf_count(f)) for f in self.grid if leaf_count(f) <= limit - arity + 1]
        partial: List[Tuple[Tuple[Formula, ...], int]] = [((), 0)]
        for _ in range(arity):
            partial = [(prefix + (f,), total + size) for prefix, total in partial
                       for f, size in sized if total + size <= limit]
        return [prefix for prefix, _ in partial]

    def instances(self, diagram: Diagram, index: int) -> List[Tuple[Formula, ...]]:
        """Atom tuples, designated anchors, the exhaustive tier, then seeded
        samples from the grid above the exhaustive bound."""
        names = [Var(name) for name in self.config.vars]
        v, w = names[0], names[1] if len(names) > 1 else names[0]
        candidates = list(itertools.product(names, repeat=diagram.arity))
        candidates += diagram.anchors(v, w)
        exhaustive = self.exhaustive_bound(diagram)
        if exhaustive and self.grid:
            candidates += self.grid_tuples(diagram.arity, exhaustive)
        rng = np.random.default_rng([self.config.seed, index])
        if self.grid:
            drawn, attempts = 0, 0
            while drawn < self.config.samples and attempts < self.config.samples * 20:
                attempts += 1
                picks = rng.integers(0, len(self.grid), size=diagram.arity)
                candidate = tuple(self.grid[int(i)] for i in picks)
                if exhaustive < sum(leaf_count(f) for f in candidate) <= self.config.max_leaves:
                    candidates.append(candidate)
                    drawn += 1
        seen, ordered = set(), []
        for candidate in candidates:
            if candidate not in seen and sum(leaf_count(f) for f in candidate) <= self.config.max_leaves:
                seen.add(candidate)
                ordered.append(candidate)
        return ordered

    def _checker(self, diagram: Diagram) -> Callable[..., DiagramReport]:
        bound = self.config.enumeration_bound
        if diagram.name in ('sigma', 'hexagon') and 'wrong_sigma' in self.config.inject:
            return lambda *fs: diagram.check(*fs, sigma_of=reversed_sigma, bound=bound)
        if diagram.name == 'psicoh' and 'misoriented_psi' in self.config.inject:
            return lambda *fs: diagram.check(*fs, psi_of=misoriented_psi, bound=bound)
        return lambda *fs: diagram.check(*fs, bound=bound)

    def run_diagram(self, diagram: Diagram, index: int) -> List[DiagramReport]:
        check = self._checker(diagram)
        reports = []
        for instance in self.instances(diagram, index):
            try:
                reports.append(check(*instance))
            except SizeBoundExceeded as e:
                logger.debug(f"Skipping {diagram.name} at {instance}: {str(e)}")
                reports.append(DiagramReport(diagram.name, instance, Status.SKIPPED, note=str(e),
                                             bound=self.config.enumeration_bound))
            except MLLError as e:
                logger.error(f"Diagram {diagram.name} error at {[print_formula(f) for f in instance]}: {str(e)}")
                reports.append(DiagramReport(diagram.name, instance, Status.FAILS, note=f"{e.code}: {str(e)}",
                                             bound=self.config.enumeration_bound))
        logger.info(f"Diagram {diagram.name}: {len(reports)} instances")
        return reports

    async def run(self) -> List[DiagramReport]:
        """Fan diagrams out to worker threads; report order is fixed by diagram and instance index."""
        if not self.grid:
            await self.initialize()
        semaphore = asyncio.Semaphore(max(1, self.config.workers))
        selected = [(index, diagram) for index, diagram in enumerate(DIAGRAMS)
                    if diagram.name in self.config.diagrams]

        async def run_one(index: int, diagram: Diagram) -> List[DiagramReport]:
            async with semaphore:
                return await asyncio.to_thread(self.run_diagram, diagram, index)

        try:
            batches = await asyncio.gather(*(run_one(index, diagram) for index, diagram in selected))
        except Exception as e:
            logger.error(f"Coherence suite error: {str(e)}")
            raise
        self.reports = [report for batch in batches for report in batch]
        return self.reports


def run_suite(config: Optional[SuiteConfig] = None) -> List[DiagramReport]:
    async def go() -> List[DiagramReport]:
        suite = CoherenceSuite(config)
        await suite.initialize()
        try:
            return await suite.run()
        finally:
            await suite.close()

    return asyncio.run(go())


def summarize(reports: Sequence[DiagramReport], config: Optional[SuiteConfig] = None) -> Dict[str, Any]:
    """Per-diagram counts; every diagram needs a non-vacuous holding instance.

    With the suite configuration the summary also records which diagrams ran
    exhaustively and up to how many leaves.
    """
    per_diagram: Dict[str, Dict[str, int]] = {}
    for report in reports:
        counts = per_diagram.setdefault(report.diagram, {'holds': 0, 'fails': 0, 'skipped': 0,
                                                         'vacuous': 0, 'non_vacuous': 0})
        counts[report.status.value] += 1
        if report.status is Status.HOLDS:
            counts['vacuous' if report.vacuous else 'non_vacuous'] += 1
    l_reports = [report for report in reports if report.diagram == 'l_iso']
    summary = {
        'diagrams': per_diagram,
        'bound': max((report.bound for report in reports), default=None),
        'failures': sum(counts['fails'] for counts in per_diagram.values()),
        'all_non_vacuous': all(counts['non_vacuous'] > 0 for counts in per_diagram.values()),
        # empirical only
        'l_bijective_empirical': bool(l_reports) and all(report.holds for report in l_reports),
    }
    if config is not None:
        if any(name not in per_diagram for name in config.diagrams):
            summary['all_non_vacuous'] = False
        summary['exhaustive'] = {
            'diagrams': [name for name in EXHAUSTIVE if name in config.diagrams],
            'max_total_leaves': min(config.exhaustive_leaves, config.max_leaves),
        }
    return summary
