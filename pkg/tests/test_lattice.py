import pytest
from conftest import box_points
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_spectra import ContractError, RangeError, contains, enumerate_shell, shell_to_json
from torus_spectra.lattice import negate, sign_canonical, squared_norm


def test_shell_2_25_matches_known_points():
    shell = enumerate_shell(2, 25)
    expected = {(5, 0), (-5, 0), (0, 5), (0, -5),
                (3, 4), (3, -4), (-3, 4), (-3, -4),
                (4, 3), (4, -3), (-4, 3), (-4, -3)}
    assert set(shell.points) == expected
    assert len(shell) == 12


def test_shell_lambda_zero_is_origin_only():
    shell = enumerate_shell(4, 0)
    assert shell.points == ((0, 0, 0, 0),)


def test_shell_3_3_is_sign_cube():
    shell = enumerate_shell(3, 3)
    assert len(shell) == 8
    assert all(set(map(abs, p)) == {1} for p in shell.points)


def test_shell_2_3_is_empty():
    assert len(enumerate_shell(2, 3)) == 0


@pytest.mark.parametrize("dim,lam", [(2, 100), (3, 41), (4, 12), (5, 14)])
def test_enumeration_agrees_with_box_scan(dim, lam):
    shell = enumerate_shell(dim, lam)
    assert list(shell.points) == box_points(dim, lam)


@given(dim=st.integers(2, 4), lam=st.integers(0, 300))
@settings(max_examples=60, deadline=None)
def test_enumeration_box_oracle_property(dim, lam):
    shell = enumerate_shell(dim, lam)
    assert list(shell.points) == box_points(dim, lam)
    # exactness and canonical order
    assert all(squared_norm(p) == lam for p in shell.points)
    assert list(shell.points) == sorted(shell.points)
    # negation closure
    assert {negate(p) for p in shell.points} == set(shell.points)


@pytest.mark.parametrize("k", [1, 2, 7, 25])
def test_axis_points_exist_on_square_radii(k):
    assert len(enumerate_shell(2, k * k)) >= 4


def test_range_errors():
    with pytest.raises(RangeError):
        enumerate_shell(1, 5)
    with pytest.raises(RangeError):
        enumerate_shell(17, 5)
    with pytest.raises(RangeError):
        enumerate_shell(2, -1)
    with pytest.raises(RangeError):
        enumerate_shell(2, 2**40 + 1)


def test_contains_and_dimension_mismatch():
    shell = enumerate_shell(2, 25)
    assert contains(shell, (5, 0))
    assert not contains(shell, (4, 4))
    assert contains(enumerate_shell(3, 3), (1, -1, 1))
    with pytest.raises(ContractError):
        contains(shell, (1, 2, 3))


def test_contains_matches_linear_scan():
    shell = enumerate_shell(3, 41)
    for p in shell.points:
        assert contains(shell, p)
    assert not contains(shell, (0, 0, 0))


def test_shell_json_schema():
    shell = enumerate_shell(2, 25)
    obj = shell_to_json(shell)
    assert obj["dim"] == 2 and obj["lambda"] == 25 and obj["count"] == 12
    assert obj["points"] == [list(p) for p in shell.points]


def test_sign_canonical():
    assert sign_canonical((0, -2, 1)) == (0, 2, -1)
    assert sign_canonical((3, -1)) == (3, -1)
    assert sign_canonical((0, 0)) == (0, 0)
