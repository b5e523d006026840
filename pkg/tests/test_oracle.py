from itertools import combinations

import pytest

from medex.oracle import (
    BudgetExceeded,
    InstanceSpec,
    enumerate_modules,
    enumerate_strong_modules,
    generate_instances,
    is_hierarchy,
    point_names,
)


def test_module_count_constant(delta5):
    from conftest import constant_map

    # every non-empty subset of a constant map is a module
    assert len(enumerate_modules(constant_map(4))) == 2**4 - 1
    assert len(enumerate_strong_modules(constant_map(4))) == 4 + 1


def test_strong_modules_delta5(delta5):
    got = set(enumerate_strong_modules(delta5))
    want = {frozenset(range(5))} | {frozenset([i]) for i in range(5)}
    want |= {delta5.subset("ce"), delta5.subset("cde")}
    assert got == want


def test_budget(delta5):
    with pytest.raises(BudgetExceeded):
        enumerate_modules(delta5, budget=16)
    with pytest.raises(BudgetExceeded):
        list(generate_instances(InstanceSpec(5, 3, mode="exhaustive", budget=100)))
    with pytest.raises(BudgetExceeded):
        list(generate_instances(InstanceSpec(5, 3, count=10, budget=5)))


def test_exhaustive_counts():
    maps = list(generate_instances(InstanceSpec(3, 2, mode="exhaustive")))
    assert len(maps) == 2**3
    assert len({tuple(lab for _, _, lab in d.pairs()) for d in maps}) == 8


def test_random_deterministic():
    a = [list(d.pairs()) for d in generate_instances(InstanceSpec(6, 3, seed=5, count=10))]
    b = [list(d.pairs()) for d in generate_instances(InstanceSpec(6, 3, seed=5, count=10))]
    c = [list(d.pairs()) for d in generate_instances(InstanceSpec(6, 3, seed=6, count=10))]
    assert a == b != c


def test_alphabet_holds_used_labels():
    for d in generate_instances(InstanceSpec(3, 4, seed=0, count=30)):
        assert set(d.alphabet) == {lab for _, _, lab in d.pairs()}


def test_bad_instance_request():
    with pytest.raises(ValueError):
        list(generate_instances(InstanceSpec(0, 2)))
    with pytest.raises(ValueError):
        list(generate_instances(InstanceSpec(3, 2, mode="sideways")))


def test_point_names():
    assert point_names(3) == ["x0", "x1", "x2"]
    assert point_names(11)[0] == "x00" and sorted(point_names(11)) == point_names(11)


def test_is_hierarchy():
    fam = [frozenset(s) for s in ({0, 1, 2}, {0}, {1}, {2}, {0, 1})]
    assert is_hierarchy(fam, 3)
    assert not is_hierarchy(fam + [frozenset({1, 2})], 3)
    assert not is_hierarchy(fam[:-2], 3)
    assert all(not (a & b) or a <= b or b <= a for a, b in combinations(fam, 2))
