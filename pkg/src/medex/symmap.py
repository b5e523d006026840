"""Symmetric maps on unordered point pairs and module primitives.

A :class:`SymMap` assigns one label to every unordered pair of distinct
points. Point subsets are passed around as ``frozenset`` of point indices;
indices follow the map's point order.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

PRIME_NAME = "prime"


class MapError(ValueError):
    """Base class for invalid map input."""


class MissingPair(MapError):
    def __init__(self, x: str, y: str):
        super().__init__(f"missing pair ({x}, {y})")
        self.pair = (x, y)


class ConflictingEntry(MapError):
    def __init__(self, x: str, y: str, old: str, new: str):
        super().__init__(f"conflicting labels for ({x}, {y}): {old!r} vs {new!r}")
        self.pair = (x, y)


class DuplicatePoint(MapError):
    def __init__(self, name: str):
        super().__init__(f"duplicate point {name!r}")
        self.name = name


class UnknownPoint(MapError):
    def __init__(self, name: str):
        super().__init__(f"unknown point {name!r}")
        self.name = name


class ReservedLabel(MapError):
    def __init__(self):
        super().__init__(f"label {PRIME_NAME!r} is reserved")


class EmptySubset(MapError):
    pass


class SamePoint(MapError):
    pass


class NotAModule(MapError):
    pass


class NotAPartition(MapError):
    pass


class PartNotAModule(MapError):
    pass


class SymMap:
    """Total symmetric labeling of the pairs of a finite point set.

    ``matrix[i, j]`` holds the alphabet index of the label of ``{i, j}``;
    the diagonal is ``-1``. Instances are treated as immutable.
    """

    __slots__ = ("points", "alphabet", "matrix", "_index")

    def __init__(self, points: Sequence[str], alphabet: Sequence[str], matrix: np.ndarray):
        self.points = tuple(points)
        self.alphabet = tuple(alphabet)
        self.matrix = np.asarray(matrix, dtype=np.int32)
        self.matrix.setflags(write=False)
        self._index = {name: i for i, name in enumerate(self.points)}
        if len(self._index) != len(self.points):
            seen = set()
            for name in self.points:
                if name in seen:
                    raise DuplicatePoint(name)
                seen.add(name)

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownPoint(name) from None

    def label(self, x: int | str, y: int | str) -> str:
        i = self.index(x) if isinstance(x, str) else x
        j = self.index(y) if isinstance(y, str) else y
        if i == j:
            raise SamePoint(f"no label on the diagonal ({self.points[i]})")
        return self.alphabet[self.matrix[i, j]]

    def pairs(self):
        """Yield ``(x, y, label)`` for all unordered pairs, ``x`` before ``y``."""
        for i, j in combinations(range(self.n), 2):
            yield self.points[i], self.points[j], self.alphabet[self.matrix[i, j]]

    def subset(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(x) for x in names)

    def names(self, subset: Iterable[int]) -> list[str]:
        return [self.points[i] for i in sorted(subset)]

    def __eq__(self, other):
        if not isinstance(other, SymMap):
            return NotImplemented
        if self.points != other.points:
            return False
        return all(self.label(i, j) == other.label(i, j) for i, j in combinations(range(self.n), 2))

    def __hash__(self):
        return hash((self.points, tuple(lab for _, _, lab in self.pairs())))

    def __repr__(self):
        return f"SymMap(n={self.n}, labels={list(self.alphabet)})"


def _from_table(points: Sequence[str], table: dict[tuple[int, int], str]) -> SymMap:
    alphabet = sorted(set(table.values()))
    ids = {lab: k for k, lab in enumerate(alphabet)}
    n = len(points)
    matrix = np.full((n, n), -1, dtype=np.int32)
    for (i, j), lab in table.items():
        matrix[i, j] = matrix[j, i] = ids[lab]
    return SymMap(points, alphabet, matrix)


def build_map(points: Iterable[str], entries: Iterable[tuple[str, str, str]]) -> SymMap:
    """Build a map from point names and ``(x, y, label)`` entries.

    Points are sorted by name. Every unordered pair must be covered; a
    repeated pair must carry the same label.
    """
    names = list(points)
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise DuplicatePoint(name)
        seen.add(name)
    names.sort()
    index = {name: i for i, name in enumerate(names)}
    table: dict[tuple[int, int], str] = {}
    for x, y, lab in entries:
        if x not in index:
            raise UnknownPoint(x)
        if y not in index:
            raise UnknownPoint(y)
        if x == y:
            raise SamePoint(f"entry on the diagonal ({x})")
        lab = str(lab)
        if lab == PRIME_NAME:
            raise ReservedLabel()
        key = tuple(sorted((index[x], index[y])))
        old = table.get(key)
        if old is not None and old != lab:
            raise ConflictingEntry(x, y, old, lab)
        table[key] = lab
    for i, j in combinations(range(len(names)), 2):
        if (i, j) not in table:
            raise MissingPair(names[i], names[j])
    return _from_table(names, table)


def from_matrix(points: Sequence[str], matrix: np.ndarray, alphabet: Sequence[str]) -> SymMap:
    """Wrap an index matrix without re-sorting points (internal and generator use)."""
    m = np.array(matrix, dtype=np.int32)
    np.fill_diagonal(m, -1)
    return SymMap(points, alphabet, m)


def restrict(delta: SymMap, subset: Iterable[int]) -> SymMap:
    idx = sorted(subset)
    if not idx:
        raise EmptySubset("cannot restrict to the empty set")
    sub = delta.matrix[np.ix_(idx, idx)]
    return SymMap([delta.points[i] for i in idx], delta.alphabet, sub)


def is_module(delta: SymMap, subset: Iterable[int]) -> bool:
    members = sorted(subset)
    if len(members) <= 1 or len(members) == delta.n:
        return True
    inside = np.zeros(delta.n, dtype=bool)
    inside[members] = True
    outside = ~inside
    ref = delta.matrix[outside, members[0]]
    return bool((delta.matrix[np.ix_(outside, members)] == ref[:, None]).all())


def _closure(matrix: np.ndarray, a: int, b: int) -> np.ndarray:
    """Boolean mask of the smallest module of ``matrix`` containing ``a`` and ``b``."""
    n = matrix.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[a] = mask[b] = True
    ref = matrix[:, a]
    # points outside that already distinguish some member from the reference
    pending = np.array([b])
    count = 2
    while count < n:
        split = (matrix[:, pending] != ref[:, None]).any(axis=1) & ~mask
        if not split.any():
            break
        pending = np.flatnonzero(split)
        mask |= split
        count += len(pending)
    return mask


def minimal_module(delta: SymMap, x: int, y: int) -> frozenset[int]:
    if x == y:
        raise SamePoint("minimal_module needs two distinct points")
    return frozenset(np.flatnonzero(_closure(delta.matrix, x, y)).tolist())


def is_strong_module(delta: SymMap, subset: Iterable[int]) -> bool:
    members = frozenset(subset)
    if not is_module(delta, members):
        raise NotAModule(f"{delta.names(members)} is not a module")
    if len(members) <= 1 or len(members) == delta.n:
        return True
    m = np.zeros(delta.n, dtype=bool)
    m[list(members)] = True
    for x in members:
        for y in range(delta.n):
            if m[y]:
                continue
            if not (_closure(delta.matrix, x, y) | ~m).all():
                return False
    return True


def _check_partition(delta: SymMap, parts: Sequence[Iterable[int]]) -> list[list[int]]:
    out = [sorted(p) for p in parts]
    flat = [x for p in out for x in p]
    if any(not p for p in out) or sorted(flat) != list(range(delta.n)):
        raise NotAPartition("parts must be non-empty, disjoint and cover all points")
    return out


def quotient(delta: SymMap, parts: Sequence[Iterable[int]], verify: bool = True) -> SymMap:
    """Quotient map on ``parts``; points are named ``{x,y,...}`` in the given part order.

    With ``verify`` every part is checked to be a module, which also makes the
    representative choice irrelevant.
    """
    plist = _check_partition(delta, parts)
    if verify:
        for p in plist:
            if not is_module(delta, p):
                raise PartNotAModule(f"{delta.names(p)} is not a module")
    reps = [p[0] for p in plist]
    names = ["{" + ",".join(delta.points[i] for i in p) + "}" for p in plist]
    return SymMap(names, delta.alphabet, _quotient_matrix(delta.matrix, reps))


def _quotient_matrix(matrix: np.ndarray, reps: Sequence[int]) -> np.ndarray:
    q = matrix[np.ix_(reps, reps)].copy()
    np.fill_diagonal(q, -1)
    return q


def is_complete(delta: SymMap) -> bool:
    if delta.n <= 2:
        return True
    upper = delta.matrix[np.triu_indices(delta.n, 1)]
    return bool((upper == upper[0]).all())


def is_prime(delta: SymMap) -> bool:
    """True iff only trivial modules exist; maps on fewer than 3 points are not prime."""
    if delta.n < 3:
        return False
    for x, y in combinations(range(delta.n), 2):
        if not _closure(delta.matrix, x, y).all():
            return False
    return True


class UltrametricCheck(NamedTuple):
    ok: bool
    axiom: str | None = None
    witness: tuple[str, ...] | None = None

    def __bool__(self):
        return self.ok


def is_symbolic_ultrametric(delta: SymMap) -> UltrametricCheck:
    """Check U2 (no rainbow triangle) then U1 (no two-colored P4 pattern)."""
    d = delta.matrix
    n = delta.n
    for x, y, z in combinations(range(n), 3):
        if len({d[x, y], d[x, z], d[y, z]}) == 3:
            return UltrametricCheck(False, "U2", (delta.points[x], delta.points[y], delta.points[z]))
    for quad in combinations(range(n), 4):
        for x, y, u, v in permutations(quad):
            if x > v:
                continue  # a path and its reversal describe the same pattern
            a = d[x, y]
            if a == d[y, u] == d[u, v] and d[y, v] == d[x, v] == d[x, u] != a:
                return UltrametricCheck(False, "U1", tuple(delta.points[i] for i in (x, y, u, v)))
    return UltrametricCheck(True)
