"""Certificates that every large period carries an epsilon-dense periodic point.

For a subshift X_A and epsilon = 2^-m, a period-n witness is an
admissible cyclic word of length n whose bi-infinite repetition visits
every admissible m-cylinder, i.e. contains every admissible m-word as a
cyclic factor.  A certificate exhibits such a witness for every n in
[N0, n_max]; a refutation names a period n at which an exhaustive search
(or an exact fixed-point count of zero) rules every witness out.

Witness construction is splice-and-pad: walk the (m-1)-block graph along
a deterministic closed walk covering every m-word edge, then append a
return walk at the base block to stretch the cycle to the exact target
length.  Exhaustive search over Fix(sigma^n) is the fallback oracle for
periods the construction cannot reach; refutations are only issued from
exhaustive evidence (a non-exhaustive failure is reported, flagged
inconclusive).

The return-time gaps of a primitive matrix die out, so exactly the
primitive matrices are certified; a certificate together with a first
hitting time yields per-cylinder-pair mixing thresholds (see
:func:`verify_mixing_from_certificate`).
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .sft import (SymbolicCycle, TransitionMatrix, count_periodic_points,
                  enumerate_cycles, is_primitive, restrict,
                  strongly_connected_component, _merge_overlap)
from .shiftspace import word_radius

EXHAUSTIVE_CAP = 4096
EXHAUSTIVE_BUDGET = 60_000  # total enumerated cycles per certificate call
PAD_VARIANTS = 8


class HorizonTooSmallError(ValueError):
    """n_max cannot fit a single covering cycle; no verdict possible."""


class CertificateTooCoarseError(ValueError):
    """A requested cylinder pair is finer than the certificate scale."""


class WitnessMap(Mapping):
    """Mapping n -> witness cycle for n in [N0, n_max].

    Witness words are deterministic but constructed on access: a
    certificate verdict over a long horizon does not pay for materializing
    every word (serialization and scans still can).
    """

    def __init__(self, N0: int, n_max: int, build: Callable[[int], SymbolicCycle],
                 cache: dict[int, SymbolicCycle]):
        self._N0 = N0
        self._n_max = n_max
        self._build = build
        self._cache = cache

    def __getitem__(self, n: int) -> SymbolicCycle:
        if not self._N0 <= n <= self._n_max:
            raise KeyError(n)
        if n not in self._cache:
            self._cache[n] = self._build(n)
        return self._cache[n]

    def __iter__(self) -> Iterator[int]:
        return iter(range(self._N0, self._n_max + 1))

    def __len__(self) -> int:
        return self._n_max - self._N0 + 1


@dataclass
class DensePeriodsCertificate:
    epsilon: float
    word_length: int
    N0: int
    n_max: int
    witnesses: Mapping
    component: tuple[int, ...] | None = None

    def nonprimitive_periods(self) -> frozenset[int]:
        """Witnessed periods whose cycle is a repetition of a shorter one
        (still a fixed point of sigma^n, flagged rather than rejected)."""
        return frozenset(n for n, w in self.witnesses.items()
                         if w.primitive_period != n)

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "m": self.word_length,
            "N0": self.N0,
            "n_max": self.n_max,
            "witnesses": {str(n): "".join(map(str, w.states))
                          for n, w in sorted(self.witnesses.items())},
        }


@dataclass
class DensePeriodsRefutation:
    epsilon: float
    blocking_n: int
    exhaustive: bool
    n_max: int
    reason: str = ""

    def to_json_dict(self) -> dict:
        return {"epsilon": self.epsilon, "blocking_n": self.blocking_n,
                "exhaustive": self.exhaustive}


# -- density test ---------------------------------------------------------


def admissible_words(matrix: TransitionMatrix, length: int) -> list[tuple[int, ...]]:
    if length == 0:
        return [()]
    words = [(s,) for s in range(matrix.size)]
    for _ in range(length - 1):
        words = [w + (t,) for w in words for t in matrix.succ[w[-1]]]
    return words


def cyclic_factors(word: Sequence[int], length: int) -> set[tuple[int, ...]]:
    w = tuple(word)
    if length == 0:
        return {()}
    reps = -(-(length + len(w)) // len(w))
    tiled = w * reps
    return {tiled[i:i + length] for i in range(len(w))}


def is_dense_cycle(matrix: TransitionMatrix, word: Sequence[int], m: int) -> bool:
    """Does the cyclic word contain every admissible m-word as a factor?"""
    return set(admissible_words(matrix, m)) <= cyclic_factors(word, m)


# -- block graph and covering walk ---------------------------------------


class _BlockGraph:
    """Graph whose closed length-n walks are the admissible cyclic n-words:
    nodes are admissible (m-1)-words (symbols for m <= 1), and the walk
    must cover all nodes (m = 1) or all edges (m >= 2) to be dense."""

    def __init__(self, matrix: TransitionMatrix, m: int):
        self.matrix = matrix
        self.m = m
        if m <= 1:
            self.nodes = [(s,) for s in range(matrix.size)]
        else:
            self.nodes = admissible_words(matrix, m - 1)
        self.index = {v: i for i, v in enumerate(self.nodes)}
        self.succ: list[list[int]] = [[] for _ in self.nodes]
        for i, v in enumerate(self.nodes):
            for t in matrix.succ[v[-1]]:
                w = v[1:] + (t,) if m >= 2 else (t,)
                j = self.index.get(w)
                if j is not None:
                    self.succ[i].append(j)
        self.cover_edges = m >= 2

    def required_edges(self) -> set[tuple[int, int]]:
        if self.cover_edges:
            return {(i, j) for i in range(len(self.nodes)) for j in self.succ[i]}
        return set()

    def walk_to_word(self, walk: list[int]) -> tuple[int, ...]:
        """Closed walk (node indices, length n, base not repeated) to the
        cyclic word of length n."""
        return tuple(self.nodes[i][0] for i in walk)


def _shortest_path_tables(succ: list[list[int]]) -> list[list[int]]:
    n = len(succ)
    INF = 1 << 30
    dist = [[INF] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in succ[u]:
                    if dist[s][v] > d:
                        dist[s][v] = d
                        nxt.append(v)
            frontier = nxt
    return dist


def _covering_walk(graph: _BlockGraph) -> list[int] | None:
    """Deterministic closed walk from the lex-least node covering all
    required edges (m >= 2) or all nodes (m = 1); None when the graph is
    not strongly connected.  Returned as node sequence of length n (walk
    steps), base node implicit at both ends."""
    succ = graph.succ
    nnodes = len(succ)
    if nnodes == 0:
        return None
    dist = _shortest_path_tables(succ)
    INF = 1 << 30
    base = 0
    if any(dist[base][v] >= INF for v in range(nnodes)) or \
       any(dist[v][base] >= INF for v in range(nnodes)):
        return None

    walk = [base]

    def go_to(target: int) -> bool:
        cur = walk[-1]
        while cur != target:
            step = min((v for v in succ[cur] if dist[v][target] == dist[cur][target] - 1),
                       default=None)
            if step is None:
                return False
            walk.append(step)
            cur = step
        return True

    if graph.cover_edges:
        uncovered = graph.required_edges()
        def discharge():
            for i in range(1, len(walk)):
                uncovered.discard((walk[i - 1], walk[i]))
        while uncovered:
            cur = walk[-1]
            u, v = min(uncovered, key=lambda e: (dist[cur][e[0]], e[0], e[1]))
            if dist[cur][u] >= INF or not go_to(u):
                return None
            walk.append(v)
            discharge()
    else:
        for target in range(nnodes):
            if target not in walk:
                if not go_to(target):
                    return None
    if not go_to(base):
        return None
    return walk[1:]  # length = number of steps; closed at base


class _PadTables:
    """Exact-length return walks at the base node: forward[t] = nodes
    reachable from base in exactly t steps, backward[t] = nodes reaching
    base in exactly t steps."""

    def __init__(self, succ: list[list[int]], base: int, horizon: int):
        self.succ = succ
        self.base = base
        pred: list[list[int]] = [[] for _ in succ]
        for u, outs in enumerate(succ):
            for v in outs:
                pred[v].append(u)
        self.backward: list[set[int]] = [set() for _ in range(horizon + 1)]
        self.backward[0].add(base)
        for t in range(1, horizon + 1):
            self.backward[t] = {u for v in self.backward[t - 1] for u in pred[v]}

    def has_return(self, t: int) -> bool:
        return t < len(self.backward) and self.base in self.backward[t]

    def return_walk(self, t: int, variant: int = 0) -> list[int] | None:
        """A closed walk at base of exactly t steps (node sequence without
        the leading base); ``variant`` perturbs early branch choices."""
        if not self.has_return(t):
            return None
        walk = []
        cur = self.base
        for r in range(t, 0, -1):
            options = sorted(v for v in self.succ[cur] if v in self.backward[r - 1])
            if not options:
                return None
            pick = options[min(variant, len(options) - 1)] if r == t else options[0]
            walk.append(pick)
            cur = pick
        return walk


# -- the engine -----------------------------------------------------------


@dataclass
class _Engine:
    matrix: TransitionMatrix
    epsilon: float
    n_max: int
    m: int = field(init=False)

    def __post_init__(self):
        self.m = word_radius(self.epsilon)
        self.graph = _BlockGraph(self.matrix, self.m)
        self.cover = _covering_walk(self.graph)
        self.pads = None
        if self.cover is not None:
            self.pads = _PadTables(self.graph.succ, 0, self.n_max)

    def constructive_witness(self, n: int) -> SymbolicCycle | None:
        if self.cover is None:
            return None
        c = len(self.cover)
        if n < c or self.pads is None or not self.pads.has_return(n - c):
            return None
        for variant in range(PAD_VARIANTS):
            pad = self.pads.return_walk(n - c, variant)
            if pad is None:
                break
            word = self.graph.walk_to_word(self.cover + pad)
            cyc = SymbolicCycle.from_word(self.matrix, word)
            if cyc.primitive_period == n:
                return cyc
        pad = self.pads.return_walk(n - c, 0)
        word = self.graph.walk_to_word(self.cover + pad)
        return SymbolicCycle.from_word(self.matrix, word)  # flagged by caller

    def exhaustive_witness(self, n: int, budget: list[int]
                           ) -> tuple[SymbolicCycle | None, bool]:
        """(witness or None, verdict_is_exhaustive); an exhausted budget or
        an over-cap period count yields a non-exhaustive None."""
        count = count_periodic_points(self.matrix, n)
        if count > EXHAUSTIVE_CAP or count > budget[0]:
            return None, False
        budget[0] -= count
        enum = enumerate_cycles(self.matrix, n, limit=EXHAUSTIVE_CAP + 1)
        if enum.truncated:
            return None, False
        dense = [c for c in enum.cycles if is_dense_cycle(self.matrix, c.states, self.m)]
        for c in dense:
            if c.primitive_period == n:
                return c, True
        return (dense[0], True) if dense else (None, True)

    def constructive_possible(self, n: int) -> bool:
        if self.cover is None or self.pads is None:
            return False
        return n >= len(self.cover) and self.pads.has_return(n - len(self.cover))


def dense_periods_certificate(matrix: TransitionMatrix, epsilon: float, n_max: int
                              ) -> DensePeriodsCertificate | DensePeriodsRefutation:
    """Certify or refute that every period n in some window [N0, n_max]
    admits an epsilon-dense point of Fix(sigma^n).

    Periods are scanned over [2, n_max].  The certificate reports the
    smallest N0 found whose whole suffix [N0, n_max] is witnessed: the
    splice-and-pad construction settles most periods, and an exhaustive
    search (budgeted, deterministic) extends the suffix downward until a
    period genuinely fails or becomes too expensive to enumerate.  The
    suffix must contain at least two consecutive witnessed periods: dense
    cycles of coprime lengths force a primitive matrix, which in turn
    guarantees witnesses beyond the horizon, so a lone witnessed period at
    n_max is no certificate.  A refutation reports the smallest period
    excluded by exhaustive evidence; a primitive matrix whose covering
    cycle alone exceeds n_max raises :class:`HorizonTooSmallError`
    instead.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    eng = _Engine(matrix, epsilon, n_max)
    if eng.cover is not None and len(eng.cover) > n_max and is_primitive(matrix):
        raise HorizonTooSmallError(
            f"covering cycle needs length {len(eng.cover)} > n_max = {n_max}")

    budget = [EXHAUSTIVE_BUDGET]
    cache: dict[int, SymbolicCycle] = {}
    n = n_max
    while n >= 2:
        if eng.constructive_possible(n):
            n -= 1  # witness constructible on demand
            continue
        cyc, _ = eng.exhaustive_witness(n, budget)
        if cyc is None:
            break
        cache[n] = cyc
        n -= 1
    N0 = n + 1

    if N0 <= n_max - 1:
        def build(k: int, _eng=eng) -> SymbolicCycle:
            cyc = _eng.constructive_witness(k)
            if cyc is None:
                raise RuntimeError(f"witness for period {k} vanished; engine bug")
            return cyc
        return DensePeriodsCertificate(
            epsilon=eng.epsilon, word_length=eng.m, N0=N0, n_max=n_max,
            witnesses=WitnessMap(N0, n_max, build, cache))

    # no witnessed suffix: hunt for the smallest exhaustively excluded period
    budget = [EXHAUSTIVE_BUDGET]
    first_unknown = None
    for k in range(2, n_max + 1):
        cyc, exhaustive = eng.exhaustive_witness(k, budget)
        if cyc is None and exhaustive:
            return DensePeriodsRefutation(eng.epsilon, k, True, n_max,
                                          reason="exhaustive search found no dense cycle")
        if cyc is None and first_unknown is None:
            first_unknown = k
    return DensePeriodsRefutation(eng.epsilon, first_unknown or n_max, False, n_max,
                                  reason="no witnessed suffix and no exhaustive exclusion")


def homoclinic_restricted_certificate(matrix: TransitionMatrix, p: SymbolicCycle,
                                      epsilon: float, n_max: int
                                      ) -> DensePeriodsCertificate | DensePeriodsRefutation:
    """Certificate with every witness confined to the irreducible component
    of the cycle p (the symbolic stand-in for homoclinically related
    orbits: mutual reachability with the p-cycle)."""
    if not matrix.is_admissible_cycle(p.states):
        raise ValueError(f"cycle {p.states} not admissible")
    component = strongly_connected_component(matrix, p.states[0])
    if not set(p.states) <= component:
        raise ValueError("cycle escapes its strongly connected component")
    sub, order = restrict(matrix, component)
    result = dense_periods_certificate(sub, epsilon, n_max)
    if isinstance(result, DensePeriodsRefutation):
        return result

    def build(n: int) -> SymbolicCycle:
        w = result.witnesses[n]
        return SymbolicCycle.from_word(matrix, tuple(order[s] for s in w.states))

    return DensePeriodsCertificate(
        epsilon=result.epsilon, word_length=result.word_length, N0=result.N0,
        n_max=result.n_max, witnesses=WitnessMap(result.N0, result.n_max, build, {}),
        component=order)


# -- mixing verification --------------------------------------------------


@dataclass(frozen=True)
class MixingPairReport:
    u: tuple[int, ...]
    v: tuple[int, ...]
    first_hit: int
    ball_word: tuple[int, ...]
    threshold: int
    verified_all: bool
    misses: tuple[int, ...]


def _hits_directly(matrix: TransitionMatrix, u, v, n: int) -> bool:
    """sigma^n([u]) meets [v]: a pattern with u at 0 and v at n extends."""
    if n < len(u):
        merged = _merge_overlap(tuple(u), tuple(v), n)
        return merged is not None and matrix.is_admissible_word(merged)
    # path of n - |u| + 1 edges from the end of u to the start of v
    steps = n - len(u) + 1
    reach = {u[-1]}
    for _ in range(steps):
        reach = {t for s in reach for t in matrix.succ[s]}
    return v[0] in reach


def verify_mixing_from_certificate(matrix: TransitionMatrix,
                                   cert: DensePeriodsCertificate,
                                   pairs: Sequence[tuple[Sequence[int], Sequence[int]]]
                                   ) -> list[MixingPairReport]:
    """Per-pair mixing thresholds from dense-period witnesses.

    For a cylinder pair ([u], [v]) take the first hitting time n1 of [v]
    into [u] and the ball B = [W] inside [v] with sigma^n1(B) inside [u]
    (W superposes v at 0 and u at n1).  A period-(n + n1) point whose
    orbit visits every |W|-cylinder has an iterate z in B, and
    sigma^n(sigma^{n1} z) = z, so sigma^n([u]) meets [v].  The threshold
    is therefore the N0 of an internal certificate at word length |W|;
    every n in [threshold, n_max] is additionally checked directly against
    matrix powers and any miss reported.
    """
    reports = []
    for u_raw, v_raw in pairs:
        u = matrix.require_word(u_raw)
        v = matrix.require_word(v_raw)
        if max(len(u), len(v)) > max(cert.word_length, 1):
            raise CertificateTooCoarseError(
                f"pair words longer than certificate scale m = {cert.word_length}")
        n1 = None
        for k in range(1, matrix.size * matrix.size + len(u) + len(v) + 2):
            if _hits_directly(matrix, v, u, k):
                n1 = k
                break
        if n1 is None:
            raise ValueError(f"no hitting time for pair {u}, {v}; matrix not mixing")
        ball = _ball_word(matrix, v, u, n1)
        fine = dense_periods_certificate(matrix, 2.0 ** (-len(ball)), cert.n_max)
        if isinstance(fine, DensePeriodsRefutation):
            raise ValueError("internal fine certificate refuted; matrix not mixing")
        threshold = fine.N0
        misses = tuple(n for n in range(threshold, cert.n_max + 1)
                       if not _hits_directly(matrix, u, v, n))
        reports.append(MixingPairReport(u=u, v=v, first_hit=n1, ball_word=ball,
                                        threshold=threshold,
                                        verified_all=not misses, misses=misses))
    return reports


def _ball_word(matrix: TransitionMatrix, v, u, n1: int) -> tuple[int, ...]:
    """Least admissible word carrying v at 0 and u at n1 (a cylinder ball
    inside [v] mapped into [u] by sigma^n1)."""
    if n1 <= len(v):
        merged = _merge_overlap(tuple(v), tuple(u), n1)
        if merged is None or not matrix.is_admissible_word(merged):
            raise ValueError("hitting time inconsistent with admissibility")
        return merged
    # fill the gap between the end of v and the start of u lexicographically
    gap = n1 - len(v)
    best = None

    def rec(word: list[int]):
        nonlocal best
        if best is not None:
            return
        if len(word) == gap:
            if matrix.admits(word[-1] if word else v[-1], u[0]):
                best = tuple(v) + tuple(word) + tuple(u)
            return
        prev = word[-1] if word else v[-1]
        for t in matrix.succ[prev]:
            rec(word + [t])

    rec([])
    if best is None:
        raise ValueError("hitting time inconsistent with admissibility")
    return best
