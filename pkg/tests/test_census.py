import itertools
import json

import numpy as np
import pytest

from kronecker import census, linalg as la, orbits, rep, zoo
from kronecker.errors import DomainError, RefusalError
from kronecker.field import get_field


@pytest.fixture(scope="module")
def report22(F2):
    return census.run_census((2, 2), F2)


def test_enumerate_reps_counts(F2):
    assert sum(1 for _ in census.enumerate_reps((1, 1), F2)) == 8
    assert sum(1 for _ in census.enumerate_reps((2, 1), F2)) == 64
    reps = list(census.enumerate_reps((2, 2), F2))
    assert len(reps) == 4096 and len(set(reps)) == 4096
    assert orbits.Layout(F2, 3, 4, 2).size == 2**24
    first = next(iter(census.enumerate_reps((4, 2), F2)))
    assert first == rep.zero_rep(F2, 4, 2)


def test_enumerate_reps_refusal_names_count(F2):
    with pytest.raises(RefusalError) as exc:
        next(iter(census.enumerate_reps((4, 2), F2, bound=1000)))
    assert exc.value.required == 2**24


def test_enumerate_reps_sample_is_seeded(F2):
    a = list(census.enumerate_reps((2, 2), F2, mode="sample", n=50, seed=3))
    b = list(census.enumerate_reps((2, 2), F2, mode="sample", n=50, seed=3))
    assert a == b and len(a) == 50


def test_census_22_counts(report22):
    c = report22["counts"]
    assert report22["verdict"] == "pass" and not report22["anomalies"]
    assert c["total"] == 4096
    assert c["elementary"] == c["a_equiv_to_normal_form"] == 1008
    assert c["nonelementary_left"] + c["nonelementary_right"] == c["tree_modules"]
    assert c["elementary"] + c["tree_modules"] == c["scalar_local"]
    assert census.check_consistency(report22) == []


def test_census_deterministic(F2, report22):
    again = census.run_census((2, 2), F2)
    assert census.to_json(census.strip_timing(again)) == census.to_json(census.strip_timing(report22))


@pytest.mark.parametrize("partitions", [1, 4, 8])
def test_partition_independence(F2, report22, partitions):
    r = census.run_census((2, 2), F2, partitions=partitions)
    assert census.strip_timing(r) == census.strip_timing(report22)


def test_parallel_workers_match(F2, report22):
    r = census.run_census((2, 2), F2, jobs=2, partitions=8)
    assert census.strip_timing(r) == census.strip_timing(report22)


def test_dedup_matches_per_representation(F2, report22):
    r = census.run_census((2, 2), F2, dedup=False)
    for k, v in r["counts"].items():
        if k != "classes":
            assert v == report22["counts"][k], k
    assert r["counts"]["classes"] == 4096
    assert r["verdict"] == report22["verdict"]


def test_orbit_closure_spot_check(F2):
    layout = orbits.Layout(F2, 3, 2, 2)
    plan = census.make_plan((2, 2), F2)
    reps, sizes = orbits.orbit_sweep(layout)
    rng = np.random.default_rng(0)
    for i in rng.choice(len(reps), size=100, replace=False):
        members = orbits.orbit_members(layout, int(reps[i]))
        want = census.classify(plan, layout.decode(int(reps[i])), int(reps[i]))
        for m in rng.choice(members, size=min(5, members.size), replace=False):
            assert census.classify(plan, layout.decode(int(m)), int(m)) == want


def test_sample_mode_deterministic(F2):
    a = census.run_census((2, 2), F2, mode="sample", n=500, seed=7)
    b = census.run_census((2, 2), F2, mode="sample", n=500, seed=7)
    assert census.strip_timing(a) == census.strip_timing(b)
    assert a["normal_form_orbit"] == {"name": "X", "size": 36}
    assert a["counts"]["total"] == 500 + 36


def test_sample_dedup_matches_per_sample(F2):
    a = census.run_census((2, 2), F2, mode="sample", n=300, seed=1)
    b = census.run_census((2, 2), F2, mode="sample", n=300, seed=1, dedup=False)
    for k in census.COUNT_KEYS:
        if k != "classes":
            assert a["counts"][k] == b["counts"][k]


def test_a_equivalence_without_mask_agrees(F2):
    plan = census.make_plan((2, 2), F2)
    slow = census.make_plan((2, 2), F2, use_mask=False)
    layout = plan.layout
    for i in range(0, 4096, 37):
        M = layout.decode(i)
        assert census.classify(plan, M, i) == census.classify(slow, M, None)


def test_bad_checks_rejected(F2):
    with pytest.raises(DomainError):
        census.make_plan((2, 2), F2, checks=["elementary", "bogus"])
    with pytest.raises(DomainError):
        census.run_census((1, 1), F2, mode="other")


def test_checks_subset(F2):
    r = census.run_census((2, 2), F2, checks=["elementary"])
    assert r["counts"]["tree_modules"] == 0 and r["counts"]["a_equiv_to_normal_form"] == 0
    assert r["counts"]["elementary"] == 1008


def test_merge_is_commutative():
    a = {"counts": dict.fromkeys(census.COUNT_KEYS, 1), "anomalies": [{"reason": "x", "index": 2}]}
    b = {"counts": dict.fromkeys(census.COUNT_KEYS, 2), "anomalies": [{"reason": "x", "index": 1}]}
    assert census.merge([a, b]) == census.merge([b, a])
    assert census.merge([a, census.merge([b])]) == census.merge([census.merge([a]), b])


def test_csv_and_json(report22):
    text = census.to_csv([report22])
    header, row = text.strip().split("\n")
    assert header.split(",")[:3] == ["dim", "p", "k"]
    assert row.startswith('"2,2",2,1,full')
    assert json.loads(census.to_json(report22))["counts"]["total"] == 4096


def test_closure_gap_reporting(F2):
    r = census.run_census((3, 2), F2)
    assert r["verdict"] in ("pass", "closure-gap")
    assert all(a["reason"] == "closure_gap" for a in r["anomalies"])
    assert r["counts"]["elementary"] == sum(a["weight"] for a in r["anomalies"])
    for a in r["anomalies"]:
        M = rep.from_dict(a["rep"])
        assert a["non_elementary_after_extension_to"] is not None
        big = get_field(*a["non_elementary_after_extension_to"])
        from kronecker import structure as st

        assert st.is_elementary(M)
        assert not st.is_elementary(rep.extend_scalars(M, big))
    assert census.check_consistency(r) == []


def test_constructive_witness(F2):
    for d in [(1, 1), (2, 1), (2, 2), (4, 2), (1, 2), (5, 2), (2, 4)]:
        M = census.constructive_witness(d, F2)
        assert M is not None and M.dim == d
    assert census.constructive_witness((3, 2), F2) is None


def test_large_group_samples_merge_identical_tuples_only():
    F3 = get_field(3)
    assert la.gl_order(3, 3) > census.DEDUP_GROUP_LIMIT
    a = census.run_census((3, 3), F3, mode="sample", n=40, seed=5)
    b = census.run_census((3, 3), F3, mode="sample", n=40, seed=5, dedup=False)
    assert a["counts"] == b["counts"]  # 40 distinct tuples, so even the class counts agree
    assert a["counts"]["total"] == 40
