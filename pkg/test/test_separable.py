import pytest

from analysis.separable import (
    SeparableFamily,
    SubsetFamily,
    brute_force_separable,
    enumerate_separable,
    family_from_json,
    inclusion_poset,
    is_separable,
    k_sets,
    layer_sizes,
    max_antichain,
    max_antichain_oracle,
    verify_antichain,
)
from geometry.core import GeneralPositionException, PointSet, side_of_line
from geometry.generators import random_points
from util.helpers import mask_of

TRIANGLE = PointSet.of([(0, 0), (4, 0), (2, 3)], "triangle")
TRIANGLE_INTERIOR = PointSet.of([(0, 0), (4, 0), (2, 3), (3, 1)], "triangle-interior")
CONVEX_FOUR = PointSet.of([(0, 0), (4, 1), (3, 5), (-1, 3)], "convex-four")


@pytest.fixture(scope="session")
def random_point_sets():
    return [random_points(3 + seed % 7, seed) for seed in range(24)]


@pytest.fixture(scope="session")
def cardinality_point_sets():
    return [random_points(3 + seed % 10, 100 + seed) for seed in range(50)]


class TestIsSeparable:
    def test_triangle_all_subsets(self):
        for mask in range(TRIANGLE.full_mask + 1):
            witness = is_separable(mask, TRIANGLE)
            assert witness is not None
            for i, point in enumerate(TRIANGLE):
                assert witness.strictly_right(point) == bool(mask >> i & 1)

    def test_interior_singleton(self):
        assert is_separable(mask_of([3]), TRIANGLE_INTERIOR) is None
        assert is_separable(mask_of([0, 1, 2]), TRIANGLE_INTERIOR) is None
        assert is_separable(mask_of([2]), TRIANGLE_INTERIOR) is not None

    def test_apex_needs_upper_half_plane(self):
        witness = is_separable(mask_of([2]), TRIANGLE)
        assert witness.strictly_right(TRIANGLE[2])
        assert not witness.strictly_right(TRIANGLE[0])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            is_separable(1 << 3, TRIANGLE)

    def test_collinear_refused(self):
        with pytest.raises(GeneralPositionException):
            is_separable(1, PointSet.of([(0, 0), (1, 1), (2, 2)]))


class TestEnumerateSeparable:
    def test_triangle(self):
        family = enumerate_separable(TRIANGLE)
        assert len(family) == 8
        assert family.members[0] == 0
        assert family.members[-1] == TRIANGLE.full_mask

    def test_single_point(self):
        family = enumerate_separable(PointSet.of([(5, 5)]))
        assert family.members == [0, 1]

    def test_convex_four(self):
        family = enumerate_separable(CONVEX_FOUR)
        assert len(family) == 14
        assert mask_of([0, 2]) not in family.members
        assert mask_of([1, 3]) not in family.members

    def test_witnesses(self):
        family = enumerate_separable(TRIANGLE_INTERIOR)
        assert len(family) == 14
        for member in family:
            line = family.witnesses[member]
            for i, point in enumerate(TRIANGLE_INTERIOR):
                assert line.strictly_right(point) == bool(member >> i & 1)
                assert side_of_line(point, line).value != "on"

    def test_empty_refused(self):
        with pytest.raises(ValueError):
            enumerate_separable(PointSet(()))

    def test_cardinality_and_oracle(self, cardinality_point_sets):
        for p in cardinality_point_sets:
            family = enumerate_separable(p)
            assert len(family) == len(p) * (len(p) - 1) + 2
            assert family.members == brute_force_separable(p)

    def test_reproducible(self):
        first = enumerate_separable(random_points(9, 4))
        second = enumerate_separable(random_points(9, 4))
        assert first.to_json() == second.to_json()


class TestKSets:
    def test_triangle(self):
        assert k_sets(TRIANGLE, 1) == [mask_of([0]), mask_of([1]), mask_of([2])]
        assert k_sets(TRIANGLE, 0) == [0]

    def test_convex_four_edges(self):
        assert k_sets(CONVEX_FOUR, 2) == [
            mask_of([0, 1]),
            mask_of([0, 3]),
            mask_of([1, 2]),
            mask_of([2, 3]),
        ]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            k_sets(TRIANGLE, 4)

    def test_layer_sizes(self):
        assert layer_sizes(enumerate_separable(TRIANGLE_INTERIOR)) == {0: 1, 1: 3, 2: 6, 3: 3, 4: 1}


class TestInclusionPoset:
    def test_chain(self):
        p = PointSet.of([(0, 0), (1, 2)])
        poset = inclusion_poset(SubsetFamily(p, [0, 1, 3]))
        assert poset.longest_chain() == 3
        assert sorted(poset.hasse.edges) == [(0, 1), (1, 2)]
        assert poset.reachability[0][2]

    def test_boolean_lattice(self):
        poset = inclusion_poset(enumerate_separable(TRIANGLE))
        assert poset.hasse.number_of_edges() == 12
        assert poset.longest_chain() == 4

    def test_antichain_is_edgeless(self):
        poset = inclusion_poset(SubsetFamily(TRIANGLE, [1, 2, 4]))
        assert poset.hasse.number_of_edges() == 0


class TestMaxAntichain:
    def test_triangle(self):
        family = enumerate_separable(TRIANGLE)
        result = max_antichain(family)
        assert len(result) == 3
        assert result.certificate_valid(family)

    def test_chain(self):
        p = PointSet.of([(0, 0), (1, 2), (2, 1)])
        family = SubsetFamily(p, [0, 1, 3, 7])
        result = max_antichain(family)
        assert len(result) == 1
        assert len(result.chains) == 1

    def test_antichain_family_is_its_own_maximum(self):
        family = SubsetFamily(TRIANGLE, [1, 2, 4])
        assert sorted(max_antichain(family).antichain) == [1, 2, 4]

    def test_against_oracle(self, random_point_sets):
        for p in random_point_sets:
            family = enumerate_separable(p)
            if len(family) > 20:
                continue
            result = max_antichain(family)
            assert result.certificate_valid(family)
            assert len(result) == len(max_antichain_oracle(family, 20))

    def test_middle_layer_bound(self, random_point_sets):
        for p in random_point_sets:
            family = enumerate_separable(p)
            result = max_antichain(family)
            assert verify_antichain(result.antichain)
            assert len(result) >= len(p)

    def test_oracle_limit(self):
        with pytest.raises(ValueError):
            max_antichain_oracle(enumerate_separable(CONVEX_FOUR), 5)


def test_verify_antichain():
    assert verify_antichain([1, 2, 4])
    assert not verify_antichain([1, 3])
    assert verify_antichain([])


def test_family_document():
    family = enumerate_separable(TRIANGLE)
    document = family.to_json()
    assert document["kind"] == "family"
    restored = family_from_json(document)
    assert isinstance(restored, SeparableFamily)
    assert restored.members == family.members
    assert restored.witnesses == family.witnesses
    plain = family_from_json(SubsetFamily(TRIANGLE, [1, 6]).to_json())
    assert type(plain) is SubsetFamily
    assert plain.members == [1, 6]
