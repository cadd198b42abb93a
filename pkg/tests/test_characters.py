import json

import pytest

from services.characters import (
    character_table,
    dixon_prime,
    restrict_table_to_subgroup,
    subgroup,
    verify_character_table,
)
from services.cyclotomic import CycloNumber, root_of_unity
from services.errors import CharacterTableError, SubgroupNotClosedError
from services.groups import parse_preset
from services.table_cache import CharacterTableCache


@pytest.mark.parametrize(
    "name, degrees",
    [
        ("1", (1,)),
        ("Z2", (1, 1)),
        ("Z3", (1, 1, 1)),
        ("S3", (1, 1, 2)),
        ("D4", (1, 1, 1, 1, 2)),
        ("Q8", (1, 1, 1, 1, 2)),
        ("S4", (1, 1, 2, 3, 3)),
    ],
)
def test_degrees(name, degrees):
    table = character_table(parse_preset(name))
    assert table.degrees == degrees
    assert all(v == 1 for v in table.values[0])
    verify_character_table(table)


def test_s3_values(s3):
    table = character_table(s3)
    # classes: identity, transpositions, 3-cycles
    assert [str(v) for v in table.values[1]] == ["1", "-1", "1"]
    assert [str(v) for v in table.values[2]] == ["2", "0", "-1"]


def test_z3_values_are_cube_roots(z3):
    table = character_table(z3)
    one, omega = CycloNumber.one(3), root_of_unity(3, 1)
    rows = {tuple(row) for row in table.values[1:]}
    assert rows == {(one, omega, omega**2), (one, omega**2, omega)}


def test_dixon_prime():
    assert dixon_prime(6, 6) == 7
    assert dixon_prime(2, 2) == 3
    assert dixon_prime(8, 4) == 13
    with pytest.raises(CharacterTableError):
        dixon_prime(10**6, 7, bound=50)


def test_conductor_must_be_a_multiple_of_the_exponent(s3):
    with pytest.raises(CharacterTableError):
        character_table(s3, conductor=4)
    assert character_table(s3, conductor=12).conductor == 12


def test_subgroup_tables(s3):
    centralizer = s3.conjugacy.centralizer[2]
    sub, members = subgroup(s3, centralizer)
    assert sub.order == 3
    assert members == tuple(sorted(centralizer))
    table = restrict_table_to_subgroup(s3, centralizer)
    assert table.conductor == s3.exponent
    assert table.degrees == (1, 1, 1)
    rep = s3.conjugacy.representative[2]
    assert table.parent_value(0, rep) == 1
    with pytest.raises(SubgroupNotClosedError):
        subgroup(s3, [0, s3.conjugacy.representative[1], rep])


def test_cache_store_and_load(tmp_path, q8):
    cache = CharacterTableCache(str(tmp_path / "cache"))
    table = character_table(q8)
    assert cache.load(q8, table.conductor) is None
    cache.store(table)
    loaded = cache.load(q8, table.conductor)
    assert loaded.degrees == table.degrees
    assert loaded.values == table.values
    assert loaded.prime == table.prime


def test_cache_ignores_stale_entries(tmp_path, z3):
    cache = CharacterTableCache(str(tmp_path))
    table = character_table(z3)
    cache.store(table)
    path = next(tmp_path.iterdir())
    payload = json.loads(path.read_text())
    payload["digest"] = "0" * 64
    path.write_text(json.dumps(payload))
    assert cache.load(z3, table.conductor) is None
    path.write_text("{not json")
    assert cache.load(z3, table.conductor) is None


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda values: [values[0]] + values[:-1],
        lambda values: [row[:1] for row in values],
        lambda values: [[None] * len(row) for row in values],
    ],
)
def test_cache_ignores_corrupt_entries(tmp_path, s3, corrupt):
    cache = CharacterTableCache(str(tmp_path))
    table = character_table(s3)
    cache.store(table)
    path = next(tmp_path.iterdir())
    payload = json.loads(path.read_text())
    payload["values"] = corrupt(payload["values"])
    path.write_text(json.dumps(payload))
    assert cache.load(s3, table.conductor) is None
