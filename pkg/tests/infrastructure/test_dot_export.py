import pytest

from src.core.compose import identity
from src.core.formula import Var, lolli, parse
from src.core.net import enumerate_j, make_net, proof_structure
from src.infrastructure.dot_export import AXIOM_STYLE, render_dot


@pytest.fixture
def intro_net():
    return make_net(Var('p'), parse("(p * (q * q^)^)"), [
        (('dom', ''), ('cod', 'L')),
        (('cod', 'RNL'), ('cod', 'RNRN')),
    ])


def test_identity_dot():
    source = render_dot(identity(Var('p')))
    assert source.startswith('graph "net" {')
    assert source.rstrip().endswith('}')
    assert f'"dom:." -- "cod:." [{AXIOM_STYLE}];' in source
    assert 'subgraph "cluster_dom"' in source
    assert 'subgraph "cluster_cod"' in source


def test_connectives_and_tree_edges(intro_net):
    source = render_dot(intro_net, name='intro')
    assert source.startswith('graph "intro" {')
    assert '"cod:." [label="⊗"];' in source
    assert '"cod:RN" [label="⅋"];' in source
    assert '"cod:." -- "cod:L";' in source
    assert '"cod:RN" -- "cod:RNRN";' in source
    assert source.count(AXIOM_STYLE) == 2


def test_literal_labels_show_polarity(intro_net):
    source = render_dot(intro_net)
    assert '"cod:RNL" [label="q^"];' in source
    assert '"cod:RNRN" [label="q"];' in source
    assert '"dom:." [label="p^"];' in source


def test_element_has_only_codomain():
    element = enumerate_j(lolli(Var('p'), Var('p')))[0]
    source = render_dot(element)
    assert 'cluster_dom' not in source
    assert '"cod:N" [label="⅋"];' in source


def test_rendering_is_deterministic(intro_net):
    assert render_dot(intro_net) == render_dot(intro_net)


def test_nodes_match_correctness_graph(intro_net):
    """DOT node names are the nodes of the switching graph."""
    graph, _ = proof_structure(intro_net)
    source = render_dot(intro_net)
    for node in graph.nodes:
        assert f'"{node}" [label=' in source
