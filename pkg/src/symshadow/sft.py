"""Subshift-of-finite-type machinery over 0/1 transition matrices.

A transition matrix A on at most 64 symbols defines the two-sided shift
space X_A of bi-infinite admissible symbol sequences.  This module covers
the combinatorial layer: irreducibility, primitivity, the class period
(gcd of cycle lengths) and the cyclic class decomposition, exact periodic
point counts, cycle enumeration up to rotation, topological entropy via
the Perron root, and return-time sets of cylinder pairs.

All arithmetic on matrix powers is exact (Python integers); only the
Perron eigenvalue computation uses floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_SYMBOLS = 64

Word = tuple[int, ...]


class NonEssentialMatrixError(ValueError):
    """Some symbol cannot be extended forward or backward."""


class ReducibleMatrixError(ValueError):
    """Operation requires an irreducible (strongly connected) matrix."""


class ConvergenceError(RuntimeError):
    """Iterative eigenvalue computation failed to converge."""


class TransitionMatrix:
    """Square 0/1 matrix, essential: every row and every column has a one.

    Immutable by convention; rows are stored as tuples.  Non-essential
    input is rejected here rather than trimmed, so every downstream
    operation may assume each symbol occurs in some bi-infinite sequence.
    """

    __slots__ = ("size", "rows", "succ", "pred")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("transition matrix must be square and non-empty")
        if n > MAX_SYMBOLS:
            raise ValueError(f"at most {MAX_SYMBOLS} symbols supported, got {n}")
        if any(v not in (0, 1) for r in rows for v in r):
            raise ValueError("entries must be 0 or 1")
        self.size = n
        self.rows = rows
        self.succ = tuple(tuple(j for j in range(n) if rows[i][j]) for i in range(n))
        self.pred = tuple(tuple(i for i in range(n) if rows[i][j]) for j in range(n))
        if any(not s for s in self.succ) or any(not p for p in self.pred):
            raise NonEssentialMatrixError(
                "non-essential matrix: every symbol needs an outgoing and an incoming edge"
            )

    def __eq__(self, other) -> bool:
        return isinstance(other, TransitionMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"TransitionMatrix({[list(r) for r in self.rows]})"

    # -- constructors -------------------------------------------------

    @classmethod
    def full_shift(cls, n: int) -> "TransitionMatrix":
        return cls([[1] * n for _ in range(n)])

    @classmethod
    def golden_mean(cls) -> "TransitionMatrix":
        """Forbid the factor 11 in the 2-shift."""
        return cls([[1, 1], [1, 0]])

    @classmethod
    def from_json(cls, text: str) -> "TransitionMatrix":
        data = json.loads(text)
        rows = data["rows"]
        if "size" in data and data["size"] != len(rows):
            raise ValueError("declared size does not match rows")
        return cls(rows)

    def to_json(self) -> str:
        return json.dumps({"rows": [list(r) for r in self.rows], "size": self.size},
                          sort_keys=True)

    # -- admissibility -------------------------------------------------

    def admits(self, i: int, j: int) -> bool:
        return bool(self.rows[i][j])

    def is_admissible_word(self, word: Sequence[int]) -> bool:
        if any(not (0 <= s < self.size) for s in word):
            return False
        return all(self.rows[word[i]][word[i + 1]] for i in range(len(word) - 1))

    def is_admissible_cycle(self, word: Sequence[int]) -> bool:
        if len(word) == 0:
            return False
        return self.is_admissible_word(word) and bool(self.rows[word[-1]][word[0]])

    def require_word(self, word: Sequence[int]) -> Word:
        word = tuple(int(s) for s in word)
        if not self.is_admissible_word(word):
            raise ValueError(f"inadmissible word {word}")
        return word


@dataclass(frozen=True)
class SymbolicCycle:
    """Admissible cyclic word; ``period`` is its length as written and
    ``primitive_period`` the smallest rotation period dividing it."""

    states: Word
    period: int
    primitive_period: int

    @classmethod
    def from_word(cls, matrix: TransitionMatrix, word: Sequence[int]) -> "SymbolicCycle":
        word = tuple(int(s) for s in word)
        if not matrix.is_admissible_cycle(word):
            raise ValueError(f"word {word} is not an admissible cycle")
        return cls(word, len(word), _primitive_period(word))

    def rotations(self) -> list[Word]:
        w = self.states
        return [w[i:] + w[:i] for i in range(len(w))]

    def canonical(self) -> Word:
        return min(self.rotations())

    def __str__(self) -> str:
        return "".join(str(s) for s in self.states)


@dataclass(frozen=True)
class CyclicDecomposition:
    """Partition of the symbols into ``class_period`` sets that the matrix
    permutes cyclically; the restriction of A^l to each set is primitive."""

    class_period: int
    classes: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class CycleEnumeration:
    cycles: tuple[SymbolicCycle, ...]
    truncated: bool


def _primitive_period(word: Word) -> int:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[p:] + word[:p]:
            return p
    return n


# -- boolean matrix helpers (numpy-backed reachability) ----------------


def _bool_rows(matrix: TransitionMatrix) -> np.ndarray:
    return np.array(matrix.rows, dtype=bool)


def _bool_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # int32 accumulation: row sums stay below 2^31 for <= 64 symbols
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


def _all_positive(a: np.ndarray) -> bool:
    return bool(a.all())


def _reachable(matrix: TransitionMatrix, start: int) -> set[int]:
    """States reachable from ``start`` in at least one step."""
    seen: set[int] = set()
    frontier = list(matrix.succ[start])
    while frontier:
        nxt = []
        for v in frontier:
            if v not in seen:
                seen.add(v)
                nxt.extend(matrix.succ[v])
        frontier = nxt
    return seen


# -- core predicates ---------------------------------------------------


def is_irreducible(matrix: TransitionMatrix) -> bool:
    """True iff every state reaches every state in >= 1 steps."""
    n = matrix.size
    for i in range(n):
        if len(_reachable(matrix, i)) != n:
            return False
    return True


def is_primitive(matrix: TransitionMatrix) -> bool:
    """True iff some power up to the Wielandt bound (n-1)^2 + 1 is
    entrywise positive."""
    rows = _bool_rows(matrix)
    n = matrix.size
    bound = (n - 1) * (n - 1) + 1
    cur = rows
    for _ in range(bound):
        if _all_positive(cur):
            return True
        cur = _bool_mul(cur, rows)
    return _all_positive(cur)


def class_period(matrix: TransitionMatrix) -> int:
    """gcd of the lengths of all cycles (equivalently, all cycles through
    state 0) of an irreducible matrix."""
    if not is_irreducible(matrix):
        raise ReducibleMatrixError("class period undefined for reducible matrix")
    n = matrix.size
    dist = [-1] * n
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in matrix.succ[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    g = 0
    for u in range(n):
        for v in matrix.succ[u]:
            g = math.gcd(g, dist[u] + 1 - dist[v])
    return g


def cyclic_decomposition(matrix: TransitionMatrix) -> CyclicDecomposition:
    """Group states by path-length residue mod the class period.

    Class k collects the states at distance = k (mod l) from state 0, so
    the matrix maps class k into class k+1 mod l, and A^l restricted to
    each class is primitive.
    """
    l = class_period(matrix)
    n = matrix.size
    dist = [-1] * n
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in matrix.succ[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    classes = tuple(frozenset(i for i in range(n) if dist[i] % l == k) for k in range(l))
    return CyclicDecomposition(l, classes)


def count_periodic_points(matrix: TransitionMatrix, n: int) -> int:
    """trace(A^n) in exact integer arithmetic: the number of admissible
    cyclic words of length n (= fixed points of the n-th shift power)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    power = _int_mat_pow([list(r) for r in matrix.rows], n)
    return sum(power[i][i] for i in range(matrix.size))


def _int_mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _int_mat_pow(a: list[list[int]], n: int) -> list[list[int]]:
    size = len(a)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    base = a
    while n:
        if n & 1:
            result = _int_mat_mul(result, base)
        base = _int_mat_mul(base, base)
        n >>= 1
    return result


def enumerate_cycles(matrix: TransitionMatrix, n: int, limit: int = 100_000) -> CycleEnumeration:
    """All admissible cyclic words of length exactly n, one representative
    per rotation class (the lexicographically least rotation), in
    lexicographic order, truncated at ``limit``.

    Deduplication is up to rotation only, not symbol relabeling: two
    rotations of one word are the same orbit, differently labeled words
    are not.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[SymbolicCycle] = []
    truncated = False
    word = [0] * n

    def closure_layers(start: int) -> list[set[int]]:
        """layers[t] = states with a path of exactly t edges to ``start``."""
        layers = [set() for _ in range(n + 1)]
        layers[0].add(start)
        for t in range(1, n + 1):
            layers[t] = {s for s in range(matrix.size)
                         if any(v in layers[t - 1] for v in matrix.succ[s])}
        return layers

    def dfs(pos: int, layers: list[set[int]]) -> bool:
        nonlocal truncated
        if pos == n:
            if matrix.rows[word[-1]][word[0]] and _is_min_rotation(word):
                if len(out) >= limit:
                    truncated = True
                    return False
                out.append(SymbolicCycle(tuple(word), n, _primitive_period(tuple(word))))
            return True
        for s in matrix.succ[word[pos - 1]]:
            # prune: from s there must remain a path of exactly n - pos
            # edges back to word[0] to close the cycle
            if s not in layers[n - pos]:
                continue
            word[pos] = s
            if not dfs(pos + 1, layers):
                return False
        return True

    for first in range(matrix.size):
        layers = closure_layers(first)
        if first not in layers[n]:
            continue
        word[0] = first
        if not dfs(1, layers):
            break
    return CycleEnumeration(tuple(out), truncated)


def _is_min_rotation(word: Sequence[int]) -> bool:
    w = tuple(word)
    n = len(w)
    return all(w <= w[i:] + w[:i] for i in range(1, n))


def perron_data(matrix: TransitionMatrix, tol: float = 1e-13, max_iter: int = 500_000
                ) -> tuple[float, list[float], list[float]]:
    """Perron root and right/left Perron vectors of an irreducible matrix.

    Power iteration applied to A + I (primitive whenever A is irreducible,
    so the iteration converges even for periodic matrices), stopped on the
    Collatz-Wielandt spread: min_i (Bv)_i/v_i <= rho(B) <= max_i (Bv)_i/v_i
    for positive v, so the returned eigenvalue carries a certified
    two-sided error below ``tol``.  The +1 shift is removed; vectors are
    positive with unit sum.
    """
    if not is_irreducible(matrix):
        raise ReducibleMatrixError("Perron data requires an irreducible matrix")
    import numpy as np
    n = matrix.size
    shifted = np.array(matrix.rows, dtype=float) + np.eye(n)

    def iterate(mat) -> tuple[float, list[float]]:
        v = np.full(n, 1.0 / n)
        for _ in range(max_iter):
            w = mat @ v
            ratios = w / v
            lo, hi = float(ratios.min()), float(ratios.max())
            v = w / w.sum()
            if hi - lo <= tol * hi:
                return (lo + hi) / 2.0 - 1.0, [float(x) for x in v]
        raise ConvergenceError("power iteration did not converge")

    lam, right = iterate(shifted)
    lam_l, left = iterate(shifted.T)
    if abs(lam - lam_l) > 1e-9 * max(1.0, lam):
        raise ConvergenceError("left/right Perron eigenvalues disagree")
    return lam, right, left


def topological_entropy(matrix: TransitionMatrix, tol: float = 1e-12) -> float:
    """log of the Perron root of an irreducible matrix, to relative
    tolerance ``tol`` on the eigenvalue."""
    lam, _, _ = perron_data(matrix, tol=tol * 0.1)
    return math.log(lam)


def return_time_set(matrix: TransitionMatrix, u: Sequence[int], v: Sequence[int],
                    horizon: int) -> set[int]:
    """All n in [0, horizon] such that the n-th shift image of the
    cylinder [u] meets [v].

    Concretely: there is an admissible pattern carrying u at positions
    [0, |u|) and v at positions [n, n+|v|).  Beyond the transient, the gaps
    in the returned set equal the class period.
    """
    if not is_irreducible(matrix):
        raise ReducibleMatrixError("return-time sets computed for irreducible matrices")
    u = matrix.require_word(u)
    v = matrix.require_word(v)
    hits: set[int] = set()
    powers = [_identity_bool(matrix.size)]
    rows = _bool_rows(matrix)
    for _ in range(horizon + 1):
        powers.append(_bool_mul(powers[-1], rows))
    for n in range(horizon + 1):
        if n < len(u):
            merged = _merge_overlap(u, v, n)
            if merged is not None and matrix.is_admissible_word(merged):
                hits.add(n)
        else:
            gap = n - len(u) + 1
            if powers[gap][u[-1]][v[0]]:
                hits.add(n)
    return hits


def _identity_bool(n: int) -> np.ndarray:
    return np.eye(n, dtype=bool)


def _merge_overlap(u: Word, v: Word, n: int) -> Word | None:
    """Superpose u at 0 and v at n < |u|; None if they disagree."""
    length = max(len(u), n + len(v))
    out: list[int] = []
    for i in range(length):
        a = u[i] if i < len(u) else None
        b = v[i - n] if 0 <= i - n < len(v) else None
        if a is not None and b is not None and a != b:
            return None
        out.append(a if a is not None else b)  # type: ignore[arg-type]
    return tuple(out)


def strongly_connected_component(matrix: TransitionMatrix, state: int) -> frozenset[int]:
    """States mutually reachable with ``state`` (in >= 1 steps in each
    direction, so a loop-free isolated state is not in its own component
    unless it lies on a cycle)."""
    fwd = _reachable(matrix, state)
    back: set[int] = set()
    frontier = list(matrix.pred[state])
    while frontier:
        nxt = []
        for vtx in frontier:
            if vtx not in back:
                back.add(vtx)
                nxt.extend(matrix.pred[vtx])
        frontier = nxt
    return frozenset(fwd & back)


def restrict(matrix: TransitionMatrix, states: Iterable[int]
             ) -> tuple[TransitionMatrix, tuple[int, ...]]:
    """Submatrix on ``states``; returns it with the symbol translation
    table (new index -> original symbol)."""
    order = tuple(sorted(states))
    rows = [[matrix.rows[a][b] for b in order] for a in order]
    return TransitionMatrix(rows), order
