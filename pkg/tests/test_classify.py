"""Tests for enumeration, partitioning, the phitilde search, and conjecture runs."""

import pytest

from qlens.errors import BudgetExceededError, InvalidParamsError
from qlens.classify import (
    ClassPartition,
    NotFoundBelow,
    enumerate_matrices,
    partition_classes,
    phitilde_search,
    verify_conjectures,
)
from qlens.equivalence import decide_equiv
from qlens.invariants import lower_bound_classes, phitilde_formula


def test_enumerate_matrices_r3_n4():
    out = enumerate_matrices(3, 4)
    assert len(out) == 2
    corners = sorted(mat.entry(1, 4) for _, mat in out)
    assert corners == [10, 11]
    for params, _ in out:
        assert params.m[0] == params.m[1] == params.m[-1] == 1


def test_enumerate_matrices_forced_small_n():
    assert len(enumerate_matrices(5, 3)) == 1
    assert len(enumerate_matrices(7, 2)) == 1
    assert len(enumerate_matrices(11, 1)) == 1


def test_enumerate_matrices_r5_n4_all_equivalent():
    # m3 in {2, 3} yields the same matrix, so four vectors give three matrices
    out = enumerate_matrices(5, 4)
    assert len(out) == 3
    assert sorted(mat.entry(1, 4) for _, mat in out) == [35, 40, 45]
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            assert decide_equiv(out[i][1], out[j][1]).equivalent
    part = partition_classes(5, 4)
    assert part.phi == 1
    assert part.classes[0].size == 4
    assert part.classes[0].size_matrices == 3


def test_enumerate_matrices_deterministic():
    a = enumerate_matrices(9, 5)
    b = enumerate_matrices(9, 5)
    assert [(p.m, m.entries) for p, m in a] == [(p.m, m.entries) for p, m in b]


def test_enumerate_matrices_budget():
    with pytest.raises(BudgetExceededError):
        enumerate_matrices(5, 10, budget=100)


def test_enumerate_matrices_rejects_bad_n():
    with pytest.raises(InvalidParamsError):
        enumerate_matrices(5, 0)


def test_enumerate_matrices_parallel_matches_serial():
    serial = enumerate_matrices(5, 7)
    parallel = enumerate_matrices(5, 7, jobs=2)
    assert [(p.m, m.entries) for p, m in serial] == [
        (p.m, m.entries) for p, m in parallel
    ]


def test_partition_r3_n4():
    part = partition_classes(3, 4)
    assert part.phi == 2
    assert part.lower_bound == 2
    assert len(part.classes) == 2
    assert {c.representative_m for c in part.classes} == {(1, 1, 1, 1), (1, 1, 2, 1)}
    assert all(c.size == 1 and c.size_matrices == 1 for c in part.classes)


def test_partition_r5_n6():
    part = partition_classes(5, 6)
    assert part.phi == 4
    assert part.lower_bound == 4
    assert sum(c.size for c in part.classes) == 64
    assert len({c.size for c in part.classes}) == 1


def test_partition_r7_n5():
    part = partition_classes(7, 5)
    assert part.phi == 1
    assert sum(c.size for c in part.classes) == 36


def test_partition_classes_sorted_and_bounded():
    for r, n in [(3, 5), (5, 5), (9, 4), (6, 5), (12, 5)]:
        part = partition_classes(r, n)
        keys = [(c.signature.as_tuple(), c.representative_m) for c in part.classes]
        assert keys == sorted(keys)
        assert part.phi >= lower_bound_classes(r, n)


def test_partition_bucketing_matches_plain_solver():
    # the signature buckets must never change the partition
    for r, n in [(3, 6), (5, 6), (6, 6), (9, 6), (3, 5), (5, 5), (6, 5), (9, 5)]:
        bucketed = partition_classes(r, n)
        plain = partition_classes(r, n, use_signature_buckets=False)
        assert bucketed.to_json() == plain.to_json(), (r, n)


def test_partition_parallel_deterministic():
    serial = partition_classes(9, 5)
    parallel = partition_classes(9, 5, jobs=2)
    assert serial.to_json() == parallel.to_json()
    again = partition_classes(9, 5, jobs=2)
    assert parallel.to_json() == again.to_json()


def test_partition_budget_error():
    with pytest.raises(BudgetExceededError):
        partition_classes(7, 8, budget=1000)


def test_class_partition_json_round_trip():
    part = partition_classes(5, 5)
    assert ClassPartition.from_json(part.to_json()) == part


def test_phitilde_search_examples():
    assert phitilde_search(3, 8) == 4
    assert phitilde_search(12, 8) == 4
    assert phitilde_search(35, 5) == NotFoundBelow(5)


def test_phitilde_search_matches_formula_small():
    for r in (3, 5, 6, 9, 12, 15, 21):
        expected = phitilde_formula(r)
        assert phitilde_search(r, 8) == expected, r


def test_phitilde_search_power_of_two():
    assert phitilde_search(4, 8) == 6
    assert phitilde_search(8, 8) == 6


def test_verify_conjectures_r5_n6():
    report = verify_conjectures(5, 6)
    assert report.passed
    assert report.signature_iff is True
    assert report.counts_match is True
    assert report.equal_sizes_vectors is True
    # distinct vectors can share a matrix, so the matrix measure diverges here
    assert report.equal_sizes_matrices is False
    assert any("matrices" in note for note in report.details)
    assert report.phi == 4
    assert report.buckets == 4


def test_verify_conjectures_r9_n5():
    report = verify_conjectures(9, 5)
    assert report.passed
    assert report.phi == report.lower_bound == 4


def test_verify_conjectures_r3_n4():
    report = verify_conjectures(3, 4)
    assert report.passed
    assert report.phi == 2
    assert report.counts_match is True


def test_verify_conjectures_skips_equalities_for_4_divides_r():
    report = verify_conjectures(12, 4)
    assert report.signature_iff is None
    assert report.counts_match is None
    assert report.equal_sizes_vectors is None
    assert report.passed
    assert report.phi >= report.lower_bound


def test_verify_conjectures_json():
    report = verify_conjectures(5, 5)
    payload = report.to_json()
    assert '"phi"' in payload and '"signature_iff"' in payload
