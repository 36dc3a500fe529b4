import pytest

from src.core.errors import (
    CutCycle, FormulaSyntaxError, InterfaceMismatch, MLLError, NotCorrect, NotInvertible,
    NotPerfectMatching, PolarityMismatch, ShapeMismatch, SizeBoundExceeded, UnknownAddress,
)


@pytest.mark.parametrize("error_class,code", [
    (UnknownAddress, 'unknown_address'),
    (NotPerfectMatching, 'not_perfect_matching'),
    (PolarityMismatch, 'polarity_mismatch'),
    (SizeBoundExceeded, 'size_bound_exceeded'),
    (InterfaceMismatch, 'interface_mismatch'),
    (CutCycle, 'cut_cycle'),
    (ShapeMismatch, 'shape_mismatch'),
    (NotInvertible, 'not_invertible'),
])
def test_codes_and_detail(error_class, code):
    error = error_class("boom", leaves=3)
    assert isinstance(error, MLLError)
    assert isinstance(error, ValueError)
    assert error.code == code
    assert error.detail() == {'message': 'boom', 'leaves': 3}


def test_syntax_error_position():
    error = FormulaSyntaxError("unexpected token ')'", 4, "(p *)")
    assert error.position == 4
    assert error.text == "(p *)"
    assert str(error) == "unexpected token ')' at position 4"
    assert error.detail()['position'] == 4


def test_not_correct_witness():
    error = NotCorrect("bad", witness=[('cod:N', 'L')], reason='cycle', cycle=[('a', 'b')])
    assert error.witness == (('cod:N', 'L'),)
    assert error.reason == 'cycle'
    assert error.detail()['witness'] == [['cod:N', 'L']]
    assert error.detail()['cycle'] == [['a', 'b']]
