import itertools

import pytest

from src.core.canonical import curry, psi, sigma
from src.core.coherence import (
    DIAGRAM_NAMES, DIAGRAMS, CoherenceSuite, Status, SuiteConfig,
    check_bijections, check_category, check_def_psi, check_hexagon, check_l_iso, check_lin,
    check_nat_alpha, check_nat_e, check_nat_eval, check_nat_iota, check_nat_psi, check_nat_sigma,
    check_nat_transpose, check_pentagon, check_psi_agree, check_psi_square, check_psicoh, check_sigma,
    check_sstac, check_tensel, formula_grid, misoriented_psi, reversed_sigma, run_suite, summarize,
)
from src.core.compose import compose
from src.core.formula import Neg, Tensor, Var, leaf_count, lolli, parse, print_formula


@pytest.fixture
def p():
    return Var('p')


@pytest.fixture
def q():
    return Var('q')


@pytest.fixture
async def suite():
    """Fixture to create and cleanup a small CoherenceSuite."""
    runner = CoherenceSuite(SuiteConfig(vars=('p', 'q'), max_leaves=4, samples=4, seed=7,
                                        diagrams=('sigma', 'pentagon', 'hexagon', 'psicoh')))
    await runner.initialize()
    yield runner
    await runner.close()


def test_formula_grid_single_variable():
    """Test the negation-depth cap on one leaf."""
    assert [print_formula(f) for f in formula_grid(['p'], 1, 2)] == ['p', 'p^', 'p^^']


def test_formula_grid_is_monotone():
    sizes = [len(formula_grid(['p', 'q'], bound, 2)) for bound in (1, 2, 3)]
    assert sizes == sorted(sizes)
    assert sizes[0] == 6
    assert sizes[1] == 6 + 4 * 3 * 3 * 3


def test_formula_grid_round_trips_and_respects_bounds():
    grid = formula_grid(['p', 'q'], 2, 1)
    assert len(set(grid)) == len(grid)
    for formula in grid:
        assert parse(print_formula(formula)) == formula
        assert leaf_count(formula) <= 2


def test_sigma_holds(p, q):
    report = check_sigma(p, q)
    assert report.status is Status.HOLDS
    assert not report.vacuous


def test_pentagon_holds():
    report = check_pentagon(*(Var(name) for name in 'pqrs'))
    assert report.holds


def test_pentagon_on_compound_formulas(p, q):
    assert check_pentagon(Tensor(p, q), Neg(p), q, lolli(p, q)).holds


def test_hexagon_holds(p):
    assert check_hexagon(p, p, p).holds
    assert check_hexagon(Tensor(p, Var('q')), Var('q'), p).holds


def test_psicoh_holds():
    assert check_psicoh(*(Var(name) for name in 'pqrs')).holds
    p = Var('p')
    assert check_psicoh(p, p, p, p).holds


def test_psi_agree(p, q):
    assert check_psi_agree(Tensor(p, q), p, Neg(q)).holds


def test_def_psi_vacuous_on_atoms(p):
    report = check_def_psi(p, p, p, p)
    assert report.holds
    assert report.vacuous


def test_def_psi_non_vacuous(p, q):
    report = check_def_psi(p, q, p, Tensor(p, Tensor(q, p)))
    assert report.holds
    assert report.checked == 2


def test_psi_square(p, q):
    report = check_psi_square(p, q, Tensor(p, q))
    assert report.holds
    assert not report.vacuous
    assert check_psi_square(p, q, Var('r')).vacuous


def test_psi_square_negative_control(p, q):
    """Currying the wrong tensor factor breaks the square."""
    def swapped(f):
        a, b = f.dom.left, f.dom.right
        return curry(compose(sigma(b, a), f))

    report = check_psi_square(p, q, Tensor(p, q), curry_of=swapped)
    assert report.status is Status.FAILS
    assert report.witness is not None


def test_tensel(p, q):
    a, b = lolli(p, p), lolli(q, q)
    report = check_tensel(a, b, a)
    assert report.holds
    assert report.checked == 1
    assert check_tensel(p, p, p).vacuous


def test_tensel_over_two_element_sets(p):
    square = lolli(Tensor(p, p), Tensor(p, p))
    report = check_tensel(square, lolli(p, p), lolli(p, p), bound=12)
    assert report.holds
    assert report.checked == 2


def test_lin(p, q):
    assert check_lin(lolli(p, p), p, p).holds
    assert check_lin(lolli(p, p), q, Neg(Neg(q))).holds
    assert check_lin(p, p, p).vacuous


def test_l_iso(p, q):
    report = check_l_iso(p, p)
    assert report.holds and report.checked == 1
    square = Tensor(p, p)
    report = check_l_iso(square, square)
    assert report.holds and report.checked == 2
    assert check_l_iso(Tensor(p, q), Tensor(p, q)).checked == 1


def test_sstac(p, q):
    assert check_sstac(p, q, Tensor(p, q)).holds
    assert check_sstac(p, p, Neg(p)).holds
    assert not check_sstac(p, p, p).vacuous


def test_category_and_bijections(p, q):
    assert check_category(p, Neg(Neg(p)), p, Neg(Neg(p))).holds
    assert check_bijections(p, q, Tensor(p, q)).holds
    assert check_bijections(p, p, Neg(p)).holds


def test_naturality(p, q):
    square = Tensor(p, p)
    assert check_nat_alpha(square, p, q).holds
    assert check_nat_sigma(square, q).holds
    assert check_nat_psi(p, q, p).holds
    assert check_nat_e(square, square).holds
    assert check_nat_iota(square).holds
    report = check_nat_transpose(q, p, Neg(Tensor(q, p)))
    assert report.holds and not report.vacuous
    assert check_nat_eval(p, square).holds


def test_reversed_sigma_breaks_hexagon(p):
    assert reversed_sigma(p, p) == sigma(p, p)
    report = check_hexagon(p, p, p, sigma_of=reversed_sigma)
    assert report.status is Status.FAILS
    lhs, rhs = report.witness
    assert lhs != rhs
    assert report.to_json()['witness'][0]['links']


def test_misoriented_psi_breaks_psicoh(p, q):
    assert misoriented_psi(p, q, Var('r')) == psi(p, q, Var('r'))
    assert misoriented_psi(p, p, p) != psi(p, p, p)
    assert check_psicoh(p, p, p, p, psi_of=misoriented_psi).status is Status.FAILS


def test_report_json(p, q):
    data = check_sigma(p, q).to_json()
    assert data == {
        'diagram': 'sigma',
        'instance': ['p', 'q'],
        'status': 'holds',
        'vacuous': False,
        'checked': 1,
        'witness': None,
        'note': '',
        'bound': 12,
    }


async def test_suite_initialization(suite):
    """Test the grid is built on initialize."""
    assert suite.grid
    assert max(leaf_count(f) for f in suite.grid) == 3


async def test_suite_instances_are_deterministic(suite):
    diagram = next(d for d in DIAGRAMS if d.name == 'hexagon')
    first = suite.instances(diagram, 2)
    second = suite.instances(diagram, 2)
    assert first == second
    assert len(set(first)) == len(first)
    assert all(sum(leaf_count(f) for f in instance) <= 4 for instance in first)


async def test_suite_run(suite):
    reports = await suite.run()
    assert reports
    assert [r.diagram for r in reports] == sorted(
        (r.diagram for r in reports), key=['sigma', 'pentagon', 'hexagon', 'psicoh'].index)
    summary = summarize(reports)
    assert summary['failures'] == 0
    assert summary['all_non_vacuous']


async def test_exhaustive_tier_covers_every_small_grid_tuple():
    """bijections runs on every grid triple with at most four leaves in total."""
    runner = CoherenceSuite(SuiteConfig(vars=('p',), max_leaves=4, neg_depth=1, samples=0,
                                        exhaustive_leaves=4, diagrams=('bijections',)))
    await runner.initialize()
    diagram = next(d for d in DIAGRAMS if d.name == 'bijections')
    instances = runner.instances(diagram, DIAGRAM_NAMES.index('bijections'))
    small = formula_grid(['p'], 2, 1)
    expected = {t for t in itertools.product(small, repeat=3) if sum(leaf_count(f) for f in t) <= 4}
    assert len(expected) == 104
    assert set(instances) == expected
    assert len(instances) == len(expected)
    await runner.close()


async def test_samples_lie_above_the_exhaustive_bound():
    runner = CoherenceSuite(SuiteConfig(vars=('p', 'q'), max_leaves=5, samples=6, seed=3,
                                        exhaustive_leaves=4, diagrams=('category',)))
    await runner.initialize()
    diagram = next(d for d in DIAGRAMS if d.name == 'category')
    instances = runner.instances(diagram, 0)
    exhaustive = set(runner.grid_tuples(4, 4))
    assert exhaustive <= set(instances)
    assert len(exhaustive) == 6 ** 4
    for instance in instances:
        total = sum(leaf_count(f) for f in instance)
        assert instance in exhaustive or total == 5 or instance in diagram.anchors(Var('p'), Var('q'))
    await runner.close()


async def test_exhaustive_tier_is_limited_to_its_diagrams(suite):
    diagram = next(d for d in DIAGRAMS if d.name == 'pentagon')
    assert suite.exhaustive_bound(diagram) == 0


def test_summary_records_exhaustive_tier():
    config = SuiteConfig(vars=('p',), max_leaves=4, neg_depth=1, samples=0, exhaustive_leaves=4,
                         diagrams=('category', 'bijections'))
    reports = run_suite(config)
    summary = summarize(reports, config)
    assert summary['failures'] == 0
    assert summary['all_non_vacuous']
    assert summary['exhaustive'] == {'diagrams': ['category', 'bijections'], 'max_total_leaves': 4}
    assert 'exhaustive' not in summarize(reports)


async def test_suite_rejects_unknown_diagram():
    runner = CoherenceSuite(SuiteConfig(diagrams=('nope',)))
    with pytest.raises(ValueError):
        await runner.initialize()


def test_run_suite_with_injected_sigma():
    config = SuiteConfig(vars=('p',), max_leaves=3, samples=0, diagrams=('hexagon',), inject=('wrong_sigma',))
    reports = run_suite(config)
    assert any(report.status is Status.FAILS for report in reports)
    assert summarize(reports)['failures'] > 0


def test_run_suite_with_misoriented_psi():
    config = SuiteConfig(vars=('p',), max_leaves=4, samples=0, diagrams=('psicoh',), inject=('misoriented_psi',))
    failures = [report for report in run_suite(config) if report.status is Status.FAILS]
    assert failures
    lhs, rhs = failures[0].witness
    assert lhs.dom == rhs.dom and lhs != rhs


def test_run_suite_skips_over_bound():
    config = SuiteConfig(vars=('p',), max_leaves=4, samples=0, diagrams=('l_iso',), enumeration_bound=2)
    reports = run_suite(config)
    assert any(report.status is Status.SKIPPED for report in reports)
    summary = summarize(reports)
    assert summary['failures'] == 0
    assert summary['bound'] == 2
    assert summary['diagrams']['l_iso']['skipped'] >= 1


def test_run_suite_is_repeatable():
    config = SuiteConfig(vars=('p', 'q'), max_leaves=4, samples=3, diagrams=('sigma', 'l_iso'))
    first = [report.to_json() for report in run_suite(config)]
    second = [report.to_json() for report in run_suite(config)]
    assert first == second
    assert summarize(run_suite(config))['l_bijective_empirical']


def test_suite_config_from_settings():
    config = SuiteConfig.from_config({'vars': ['p'], 'samples': 2, 'unused': 1}, seed=5, max_leaves=None)
    assert config.vars == ('p',)
    assert config.samples == 2
    assert config.seed == 5
    assert config.max_leaves == 6


@pytest.mark.slow
def test_default_suite_has_no_failures():
    reports = run_suite(SuiteConfig())
    summary = summarize(reports)
    assert summary['failures'] == 0
    assert summary['all_non_vacuous']
    assert set(summary['diagrams']) == set(DIAGRAM_NAMES)
