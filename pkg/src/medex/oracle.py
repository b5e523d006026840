"""Brute-force oracles and instance generators for cross-checking."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

import numpy as np

from .symmap import SymMap, from_matrix, is_module

DEFAULT_SUBSET_BUDGET = 1 << 20
DEFAULT_INSTANCE_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


def enumerate_modules(delta: SymMap, budget: int = DEFAULT_SUBSET_BUDGET) -> list[frozenset[int]]:
    """All non-empty modules, by testing every subset."""
    n = delta.n
    if (1 << n) > budget:
        raise BudgetExceeded(f"2^{n} subsets exceed budget {budget}")
    out = []
    for mask in range(1, 1 << n):
        subset = frozenset(i for i in range(n) if mask >> i & 1)
        if is_module(delta, subset):
            out.append(subset)
    return out


def _overlap(a: frozenset[int], b: frozenset[int]) -> bool:
    inter = a & b
    return bool(inter) and inter != a and inter != b


def enumerate_strong_modules(delta: SymMap, budget: int = DEFAULT_SUBSET_BUDGET) -> list[frozenset[int]]:
    mods = enumerate_modules(delta, budget)
    return [m for m in mods if not any(_overlap(m, other) for other in mods)]


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    k: int
    seed: int = 0
    mode: str = "random"  # "random" or "exhaustive"
    count: int = 100
    budget: int = DEFAULT_INSTANCE_BUDGET

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2


def point_names(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"x{i:0{width}d}" for i in range(n)]


def _labels_to_map(names, alphabet, values) -> SymMap:
    n = len(names)
    m = np.full((n, n), -1, dtype=np.int32)
    iu = np.triu_indices(n, 1)
    m[iu] = values
    m.T[iu] = values
    used = sorted(set(int(v) for v in values))
    remap = np.full(len(alphabet), -1, dtype=np.int32)
    remap[used] = np.arange(len(used))
    m = np.where(m >= 0, remap[np.maximum(m, 0)], -1)
    return from_matrix(names, m, [alphabet[u] for u in used])


def generate_instances(spec: InstanceSpec) -> Iterator[SymMap]:
    """Deterministic stream of maps; labels are ``l0 .. l{k-1}``, alphabets hold used labels only."""
    if spec.n < 1 or spec.k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    names = point_names(spec.n)
    alphabet = [f"l{i}" for i in range(spec.k)]
    if spec.mode == "exhaustive":
        total = spec.k ** spec.n_pairs
        if total > spec.budget:
            raise BudgetExceeded(f"{total} labelings exceed budget {spec.budget}")
        for values in product(range(spec.k), repeat=spec.n_pairs):
            yield _labels_to_map(names, alphabet, np.array(values, dtype=np.int32))
    elif spec.mode == "random":
        if spec.count > spec.budget:
            raise BudgetExceeded(f"{spec.count} instances exceed budget {spec.budget}")
        rng = np.random.default_rng(spec.seed)
        for _ in range(spec.count):
            yield _labels_to_map(names, alphabet, rng.integers(0, spec.k, size=spec.n_pairs, dtype=np.int32))
    else:
        raise ValueError(f"unknown mode {spec.mode!r}")


def is_hierarchy(family, n: int) -> bool:
    sets = set(family)
    if frozenset(range(n)) not in sets:
        return False
    if any(frozenset([x]) not in sets for x in range(n)):
        return False
    return not any(_overlap(a, b) for a, b in combinations(sets, 2))
