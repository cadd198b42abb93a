import pytest
from pydantic import ValidationError

from services.bundles import Cut, surface
from services.errors import CapExceededError, GluingMismatchError, UsageError
from services.modular_functor import LabelVector, ModularFunctorEngine
from services.settings import Settings


def vector(item, *indices):
    return LabelVector(surface=item, labels=tuple(((i, 1),) for i in indices))


def test_label_vector_expansion():
    item = surface(0, 2)
    labels = LabelVector(surface=item, labels=(((0, 2), (3, 1)), ((1, 1),)))
    assert sorted(labels.expansions()) == [(1, (3, 1)), (2, (0, 1))]
    assert not labels.is_vacuum()
    assert vector(item, 0, 0).is_vacuum()
    with pytest.raises(ValidationError):
        LabelVector(surface=item, labels=(((0, 1),),))
    with pytest.raises(ValidationError):
        LabelVector(surface=item, labels=(((0, -1),), ((0, 1),)))


def test_torus_vacuum_is_the_rank(engine_s3, engine_z2):
    for engine, rank in ((engine_s3, 8), (engine_z2, 4)):
        report = engine.dim_w(vector(surface(1, 1), 0), method="all")
        assert report.routes == {"enumeration": rank, "characters": rank, "verlinde": rank}
        assert report.dimension == rank


def test_disk_selects_the_vacuum(engine_s3):
    table = engine_s3.table(surface(0, 1))
    assert table == {(i,): int(i == 0) for i in range(8)}


def test_annulus_pairs_duals(engine_z3):
    double = engine_z3.double
    table = engine_z3.table(surface(0, 2))
    for (first, second), value in table.items():
        assert value == int(second == double.dual_label(double.labels[first]).index)


def test_pair_of_pants_is_fusion(engine_s3):
    double = engine_s3.double
    labels = double.labels
    table = engine_s3.table(surface(0, 3))
    for (a, b, c), value in table.items():
        coefficients = double.fusion_coefficients(labels[a], labels[b])
        dual = double.dual_label(labels[c])
        assert value == coefficients.get(dual, 0)


def test_character_route_matches_direct_sum(engine_s3):
    item = surface(1, 2)
    table = engine_s3.table(item)
    for labels in [(0, 0), (2, 2), (3, 4), (5, 7)]:
        assert engine_s3.characters_dim(item, labels) == table[labels]


def test_routes_agree_on_a_battery(engine_s3):
    for genus, points in [(0, 3), (1, 1), (1, 2)]:
        item = surface(genus, points)
        for labels, value in engine_s3.table(item).items():
            assert engine_s3.verlinde(genus, labels) == value


def test_combinations_are_multilinear(engine_s3):
    item = surface(0, 1)
    doubled = LabelVector(surface=item, labels=(((0, 2), (2, 1)),))
    assert engine_s3.dim_w(doubled).dimension == 2


def test_method_selection(engine_s3):
    item = surface(1, 1)
    expected = engine_s3.table(item)[(2,)]
    assert engine_s3.dim_w(vector(item, 2), method="verlinde").routes == {"verlinde": expected}
    report = engine_s3.dim_w(vector(item, 2), method="all")
    assert "enumeration" in report.skipped
    assert set(report.routes) == {"characters", "verlinde"}
    with pytest.raises(UsageError):
        engine_s3.dim_w(vector(item, 2), method="enumeration")
    with pytest.raises(UsageError):
        engine_s3.dim_w(vector(item, 0), method="guess")
    with pytest.raises(UsageError):
        engine_s3.dim_w(vector(item, 8))


def test_auto_falls_back_to_verlinde(s3):
    engine = ModularFunctorEngine(s3, Settings(grid_cap=10))
    report = engine.dim_w(vector(surface(0, 3), 0, 0, 0))
    assert report.routes == {"verlinde": 1}
    assert "characters" in report.skipped
    with pytest.raises(CapExceededError):
        engine.dim_w(vector(surface(0, 3), 0, 0, 0), method="characters")


@pytest.mark.parametrize("genus, points", [(0, 1), (0, 2), (0, 3), (1, 1), (0, 4), (1, 2)])
def test_decomposition_is_complete(engine_s3, s3, genus, points):
    item = surface(genus, points)
    table = engine_s3.decomposition_table(item)
    assert table.weighted_total == s3.order ** (2 * genus + 2 * points - 2)
    assert table.square_total == table.self_pairing


def test_decomposition_z2_sphere(engine_z2):
    table = engine_z2.decomposition_table(surface(0, 3))
    assert sum(table.entries.values()) == 16
    assert set(table.entries.values()) == {0, 1}


@pytest.mark.parametrize(
    "genus, points, cut",
    [
        (1, 1, Cut()),
        (1, 2, Cut()),
        (0, 4, Cut(separating=True, names=("p1", "p2"))),
        (1, 2, Cut(separating=True, genus=1, names=("p2",))),
    ],
)
def test_gluing_identity(engine_s3, genus, points, cut):
    report = engine_s3.verify_gluing(surface(genus, points), cut)
    assert report.passed
    assert len(report.records) == 8**points
    for record in report.records:
        assert record.dimension == sum(record.contributions.values())


def test_gluing_identity_for_selected_labels(engine_z3):
    report = engine_z3.verify_gluing(surface(1, 1), Cut(), labels=[(0,), (4,)])
    assert [record.labels for record in report.records] == [(0,), (4,)]
    assert report.records[0].dimension == 9


def test_gluing_mismatch_is_reported(s3):
    engine = ModularFunctorEngine(s3)
    engine.table(surface(1, 1))
    engine._tables[surface(1, 1)] = {(i,): 0 for i in range(8)}
    with pytest.raises(GluingMismatchError) as error:
        engine.verify_gluing(surface(1, 1), Cut())
    assert error.value.exit_code == 3
    assert error.value.payload["contributions"]


def test_toric_code_fusion(engine_z2):
    # charge (1), flux (2) and their composite (3)
    table = engine_z2.table(surface(0, 3))
    assert table[(1, 2, 3)] == 1
    assert table[(1, 2, 0)] == 0


def test_trivial_group_everything_is_one(trivial):
    engine = ModularFunctorEngine(trivial)
    for genus, points in [(0, 1), (0, 3), (1, 1), (1, 2)]:
        assert engine.table(surface(genus, points)) == {(0,) * points: 1}
    assert engine.verify_gluing(surface(1, 2), Cut()).passed


def test_closed_surface_dimensions(engine_s3):
    assert engine_s3.closed_dim(2).routes == {"verlinde": 116}
    report = engine_s3.closed_dim(1, method="all")
    assert report.routes == {"enumeration": 8, "verlinde": 8}
    assert report.dimension == 8
    assert engine_s3.closed_dim(0, method="enumeration").dimension == 1
    with pytest.raises(UsageError):
        engine_s3.closed_dim(1, method="characters")
    with pytest.raises(UsageError):
        engine_s3.closed_dim(-1)


def test_gluing_rejects_label_vectors_that_do_not_fit(engine_z2):
    with pytest.raises(UsageError):
        engine_z2.verify_gluing(surface(1, 1), Cut(), [(0, 0)])
    with pytest.raises(UsageError):
        engine_z2.verify_gluing(surface(1, 1), Cut(), [(7,)])
    with pytest.raises(UsageError):
        engine_z2.verify_gluing(surface(0, 2), Cut(separating=True, names=("p1",)), [(0,)])
