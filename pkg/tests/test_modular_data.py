from fractions import Fraction

import pytest

from services.cyclotomic import CycloNumber
from services.double import DrinfeldDouble
from services.errors import ModularDataError
from services.groups import parse_preset
from services.modular_data import (
    check_modular_data,
    modular_data,
    verlinde_dim,
    verlinde_fusion_check,
)

Z2_S = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]


def test_z2_modular_data(double_z2):
    data = modular_data(double_z2)
    assert data.rank == 4
    for i in range(4):
        for j in range(4):
            assert data.S[i][j] == Fraction(Z2_S[i][j], 2)
    assert data.T == [1, 1, 1, -1]
    assert data.central_charge_phase == 1


@pytest.mark.parametrize("name", ["1", "Z3", "S3", "D4", "Q8"])
def test_axioms_hold(name):
    double = DrinfeldDouble(parse_preset(name))
    data = modular_data(double)
    size = data.rank
    for k, label in enumerate(data.labels):
        assert data.S[0][k] == Fraction(label.dim, double.group.order)
        assert data.S[k][0] == data.S[0][k]
    assert data.T[0] == 1
    phase = data.central_charge_phase
    assert phase ** (2 * double.conductor) == 1
    assert len(data.to_json()["S"]) == size


def test_z3_s_matrix_is_not_real(double_z3):
    data = modular_data(double_z3)
    assert any(not value.is_rational() for row in data.S for value in row)


def test_broken_t_is_rejected(double_z2):
    data = modular_data(double_z2)
    data.T = [data.T[0], data.T[1], data.T[2], CycloNumber.one(2)]
    with pytest.raises(ModularDataError):
        check_modular_data(data)


def test_asymmetric_s_is_rejected(double_s3):
    data = modular_data(double_s3, check=False)
    data.S = [list(row) for row in data.S]
    data.S[0][1] = data.S[0][1] + 1
    with pytest.raises(ModularDataError):
        check_modular_data(data)


@pytest.mark.parametrize(
    "genus, labels, expected",
    [(0, [], 1), (1, [], 8), (2, [], 116), (0, [0, 0, 0], 1), (1, [0], 8), (0, [3, 3], 1)],
)
def test_verlinde_dimensions_s3(double_s3, genus, labels, expected):
    data = modular_data(double_s3)
    assert verlinde_dim(data, genus, [data.labels[i] for i in labels]) == expected


def test_verlinde_torus_z2(double_z2):
    data = modular_data(double_z2)
    assert verlinde_dim(data, 1, []) == 4


def test_verlinde_fusion_matches_coproduct(double_s3, double_z3):
    for double in (double_s3, double_z3):
        data = modular_data(double)
        assert verlinde_fusion_check(data) == data.rank**3
