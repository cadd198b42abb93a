import json
from collections import Counter

import pytest

from services.errors import CapExceededError, GroupValidationError, UnknownPresetError
from services.groups import (
    FiniteGroup,
    dump_group_file,
    load_group_file,
    parse_preset,
    validate_table,
)

# Latin square with identity 0 in which every element squares to 0; not a group
NON_ASSOCIATIVE_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


@pytest.mark.parametrize(
    "name, order, classes",
    [("1", 1, 1), ("Z2", 2, 2), ("Z3", 3, 3), ("S3", 6, 3), ("D4", 8, 5), ("Q8", 8, 5)],
)
def test_preset_orders_and_classes(name, order, classes):
    group = parse_preset(name)
    assert group.order == order
    assert group.conjugacy.count == classes
    assert group.identity == 0
    assert group.conjugacy.classes[0] == (0,)


def test_presets_are_deterministic():
    first, second = parse_preset("S3"), parse_preset("S3")
    assert first.mul == second.mul
    assert first.digest == second.digest
    assert first == second


def test_s3_structure(s3):
    assert not s3.is_abelian
    assert s3.exponent == 6
    assert Counter(s3.element_orders) == {1: 1, 2: 3, 3: 2}
    info = s3.conjugacy
    assert info.sizes == [1, 3, 2]
    assert [info.centralizer_order(c) for c in range(info.count)] == [6, 2, 3]
    # the square of a 3-cycle is a 3-cycle, its cube is the identity
    assert info.power_map[2][2] == 2
    assert info.power_map[2][3] == 0


def test_z3_inverse_classes(z3):
    assert z3.is_abelian
    assert z3.conjugacy.inverse_class == (0, 2, 1)


def test_group_operations(s3):
    for a in range(s3.order):
        assert s3.mul[a][s3.inv[a]] == 0
        assert s3.power(a, s3.element_orders[a]) == 0
        for b in range(s3.order):
            assert s3.commutes(a, b) == (s3.commutator(a, b) == 0)
            assert s3.conj(a, b) in s3.conjugacy.classes[s3.conjugacy.class_of[b]]
    assert s3.is_subgroup(s3.conjugacy.centralizer[1])
    assert not s3.is_subgroup([0, s3.conjugacy.representative[1], s3.conjugacy.representative[2]])


def test_centralizer_masks(q8):
    for x in range(q8.order):
        members = [g for g in range(q8.order) if q8.centralizer_masks[x] >> g & 1]
        assert members == [g for g in range(q8.order) if q8.commutes(g, x)]


def test_direct_product():
    group = parse_preset("Z2xS3")
    assert group.order == 12
    assert group.conjugacy.count == 6
    assert parse_preset("Z2xZ2").is_abelian


@pytest.mark.parametrize("name", ["X4", "S7", "D2", "Z0", ""])
def test_unknown_presets(name):
    with pytest.raises(UnknownPresetError):
        parse_preset(name)


def test_preset_cap():
    with pytest.raises(CapExceededError):
        parse_preset("S5", cap=10)


def test_validate_table_rejects_non_groups():
    with pytest.raises(GroupValidationError, match="not associative"):
        validate_table(NON_ASSOCIATIVE_LOOP)
    with pytest.raises(GroupValidationError, match="identity"):
        validate_table([[1, 0], [0, 1]])
    with pytest.raises(GroupValidationError, match="permutation"):
        validate_table([[0, 1], [1, 1]])
    with pytest.raises(GroupValidationError, match="square"):
        validate_table([[0, 1], [1]])
    with pytest.raises(GroupValidationError):
        FiniteGroup(NON_ASSOCIATIVE_LOOP)


def test_group_file_loading(tmp_path, s3):
    path = tmp_path / "s3.json"
    dump_group_file(s3, str(path))
    loaded = load_group_file(str(path))
    assert loaded == s3
    assert loaded.name == "S3"

    with pytest.raises(CapExceededError):
        load_group_file(str(path), cap=5)


def test_group_file_errors(tmp_path):
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"order": 2, "mul": [0, 1, 1]}))
    with pytest.raises(GroupValidationError):
        load_group_file(str(short))

    loop = tmp_path / "loop.json"
    loop.write_text(json.dumps({"order": 5, "mul": sum(NON_ASSOCIATIVE_LOOP, [])}))
    with pytest.raises(GroupValidationError):
        load_group_file(str(loop))

    with pytest.raises(GroupValidationError):
        load_group_file(str(tmp_path / "missing.json"))
