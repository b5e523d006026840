"""Acceptance criteria, one test each; results are summarized after the run."""

from __future__ import annotations

import os
import subprocess
import sys
import time
from functools import lru_cache
from itertools import combinations

import numpy as np
import pytest

from helpers import complete, cycle, random_tree
from medex.constructions import (
    explain_by_halfgrid,
    explain_by_hypercube,
    extended_half_grid,
    extended_hypercube,
    half_grid,
    half_grid_size,
    hypercube,
)
from medex.graph import explains, is_median_graph, median
from medex.mdt import compute_mdt, maximal_strong_partition, strong_modules
from medex.oracle import InstanceSpec, enumerate_strong_modules, generate_instances
from medex.pvr import pvr_expand
from medex.symmap import is_prime, is_symbolic_ultrametric, quotient

DATA = os.path.join(os.path.dirname(__file__), "data")


class Criterion:
    def __init__(self, log, key, limit):
        self.log, self.key, self.limit = log, key, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.log[self.key] = f"FAIL  {self.key} (did not finish)"
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and dt < self.limit
        line = f"{'PASS' if ok else 'FAIL'}  {self.key}  [{dt:.2f}s, limit {self.limit:g}s]"
        self.log[self.key] = line
        print(line)
        if exc_type is None:
            assert dt < self.limit, line
        return False


@pytest.fixture
def criterion(acceptance_log):
    return lambda key, limit: Criterion(acceptance_log, key, limit)


def test_c1_strong_modules_of_delta5(criterion, delta5):
    with criterion("1 five-point map: strong modules, partition, quotient", 1.0):
        s = delta5.subset
        want = {s("abcde"), s("ce"), s("cde")} | {s(p) for p in "abcde"}
        assert set(strong_modules(delta5)) == want and len(strong_modules(delta5)) == 8
        part = maximal_strong_partition(delta5)
        assert part.parts == [s("a"), s("b"), s("cde")]
        q = quotient(delta5, part.parts)
        assert [lab for _, _, lab in q.pairs()] == ["blue", "purple", "red"]
        assert is_prime(q) and part.is_prime


def test_c2_pvr_of_delta5(criterion, delta5):
    with criterion("2 five-point map: prime root replaced, median and explains", 1.0):
        res = pvr_expand(delta5)
        g = res.graph
        assert res.tree.prime_nodes() == [res.tree.root]
        assert res.replacements[0].graph.n_vertices == half_grid_size(2)[0] + 3
        assert is_median_graph(g)
        assert explains(g, delta5, full_check=True)
        added = [v for v, tag in g.provenance.items() if tag.startswith("replacement")]
        assert sum(v not in g.labels for v in added) == 1


def test_c3_delta4_constructions(criterion, delta4):
    with criterion("3 four-point map: half-grid and hypercube explain", 1.0):
        hg = explain_by_halfgrid(delta4)
        hc = explain_by_hypercube(delta4)
        assert explains(hg, delta4, full_check=True)
        assert explains(hc, delta4, full_check=True)
        assert hg.n_vertices == half_grid_size(3)[0] + 4 == 12
        assert hc.n_vertices == 2**4 + 4 == 20


def test_c4_half_grid_median_formula(criterion):
    with criterion("4 half-grid median formula, n in [2,8]", 10.0):
        for n in range(2, 9):
            names = [f"p{k}" for k in range(1, n + 2)]
            g = extended_half_grid(names)
            for i, j in combinations(range(1, n + 2), 2):
                m = median(g, g.root, g.leaf_vertex(names[i - 1]), g.leaf_vertex(names[j - 1])).vertex
                assert g.coords[m] == (i, j - 1), (n, i, j)


def test_c5_recognition_suite(criterion):
    with criterion("5 median-graph recognition suite", 60.0):
        rng = np.random.default_rng(5)
        for _ in range(20):
            assert is_median_graph(random_tree(rng, int(rng.integers(1, 51))))
        assert is_median_graph(cycle(4))
        assert not is_median_graph(cycle(6))
        assert not is_median_graph(complete(3))
        for n in range(2, 9):
            assert is_median_graph(half_grid(n))
            assert is_median_graph(extended_half_grid([f"p{k}" for k in range(n + 1)]))
        for n in range(1, 7):
            assert is_median_graph(hypercube(n))
            if n >= 2:
                assert is_median_graph(extended_hypercube([f"p{k}" for k in range(n)]))


@lru_cache(maxsize=None)
def instance_sets():
    maps = []
    for n in range(1, 5):
        for k in range(1, 4):
            maps.extend(generate_instances(InstanceSpec(n, k, mode="exhaustive")))
    rng = np.random.default_rng(2026)
    for t in range(1000):
        n, k = int(rng.integers(1, 10)), int(rng.integers(1, 5))
        maps.extend(generate_instances(InstanceSpec(n, k, seed=t, count=1)))
    return maps


def test_c6_oracle_equivalence(criterion):
    with criterion("6 oracle equivalence (exhaustive n<=4,k<=3 + 1000 random)", 300.0):
        bad = 0
        for d in instance_sets():
            mods = strong_modules(d)
            if set(mods) != set(enumerate_strong_modules(d)) or len(mods) != len(set(mods)):
                bad += 1
            if bool(is_symbolic_ultrametric(d)) != (not compute_mdt(d).prime_nodes()):
                bad += 1
        assert bad == 0, f"{bad} disagreements"


def test_c7_pvr_end_to_end(criterion):
    with criterion("7 pvr output is median and explains on the same sets", 600.0):
        bad = 0
        for d in instance_sets():
            if d.n < 2:
                continue
            g = pvr_expand(d).graph
            if not (is_median_graph(g) and explains(g, d, full_check=False)):
                bad += 1
        assert bad == 0, f"{bad} failures"


def test_c8_scaling(criterion):
    (d,) = generate_instances(InstanceSpec(200, 8, seed=8, count=1))
    with criterion("8 scaling: |X|=200, k=8", 10.0):
        res = pvr_expand(d)
        assert res.graph.n_vertices <= 2 * d.n**2
    assert explains(res.graph, d, full_check=False)


def _cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run([sys.executable, "-m", "medex", *args], capture_output=True, env=env)
    return proc.returncode, proc.stdout


def test_c9_cli_determinism(criterion, tmp_path):
    d5 = os.path.join(DATA, "delta5.json")
    commands = [
        ["mdt", d5],
        ["mdt", os.path.join(DATA, "delta5.tsv"), "--format", "dot"],
        ["check", d5],
        ["check", "--sweep", "n=6", "k=3", "count=40"],
    ]
    for c in ("pvr", "halfgrid", "hypercube"):
        for fmt in ("json", "dot", "graphml"):
            commands.append(["explain", d5, "--construction", c, "--format", fmt])
    ref = tmp_path / "ref.json"
    ref.write_bytes(_cli(["explain", d5], 0)[1])
    commands.append(["verify", d5, str(ref)])
    with criterion("9 CLI determinism", 120.0):
        for args in commands:
            first, second = _cli(args, 1), _cli(args, 2)
            assert first[0] == 0, args
            assert first == second, args
