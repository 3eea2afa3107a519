"""Invariant measures, weak-* distances, and the periodic-to-Markov
approximation pipeline.

Measures come in three representations: finite-support (periodic
measures), Markov chains on a transition-matrix support (with an optional
state-to-symbol labeling, so measures living on a block presentation can
be integrated against cylinders of the ambient shift), and closed-form
references (Lebesgue on the torus, Bernoulli products).

Weak-* proximity is metrized at finite depth by a fixed weighted test
family: cylinder indicators up to a depth for shift spaces, Fourier modes
up to a frequency bound for the torus, with weights 2^-j in a canonical
deterministic order.  All integrals are exact sums or transfer-matrix
products; no sampling.

The pipeline :func:`bernoulli_approximation` approximates a target
measure first by a periodic measure mu_p, then by the maximal-entropy
(Parry) measure of a small mixing subshift built from the homoclinic
splice of the cycle p: blocks {p-loop repeated m times, excursion word},
with an excursion never following an excursion, so that typical points
spend long stretches tracking the p-orbit.  As m grows the Parry measure
converges to mu_p monotonically at desk scale.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .sft import (SymbolicCycle, TransitionMatrix, count_periodic_points,
                  enumerate_cycles, is_primitive, perron_data)
from .shiftspace import ShiftPoint
from .systems import SftSystem, ToralAutomorphism, sft_homoclinic_splice

STOCHASTIC_TOL = 1e-12
NORMALIZATION_TOL = 1e-14


# -- observables ----------------------------------------------------------


@dataclass(frozen=True)
class CylinderObservable:
    """Indicator of the cylinder fixing ``word`` at positions 0..len-1."""

    word: tuple[int, ...]

    def __str__(self) -> str:
        return "[" + "".join(map(str, self.word)) + "]"


@dataclass(frozen=True)
class FourierMode:
    """x -> exp(2 pi i k.x) on the 2-torus."""

    k: tuple[int, int]

    def value(self, point) -> complex:
        phase = float(point[0]) * self.k[0] + float(point[1]) * self.k[1]
        return cmath.exp(2j * math.pi * phase)

    def __str__(self) -> str:
        return f"e({self.k[0]},{self.k[1]})"


@dataclass(frozen=True)
class TestFamily:
    """Ordered observables with weights 2^-j; the weighted sum of integral
    discrepancies is the weak-* distance at this depth."""

    observables: tuple
    weights: tuple[float, ...]
    description: str

    def __len__(self) -> int:
        return len(self.observables)


def cylinder_family(matrix: TransitionMatrix, depth: int) -> TestFamily:
    """All admissible words of length 1..depth, ordered by length then
    lexicographically."""
    obs = []
    words = [(s,) for s in range(matrix.size)]
    for length in range(1, depth + 1):
        if length > 1:
            words = [w + (t,) for w in words for t in matrix.succ[w[-1]]]
        obs.extend(CylinderObservable(w) for w in sorted(words))
    weights = tuple(2.0 ** (-(j + 1)) for j in range(len(obs)))
    return TestFamily(tuple(obs), weights, f"cylinders depth {depth}")


def fourier_family(max_frequency: int) -> TestFamily:
    """Fourier modes with 0 < |k|_inf <= max_frequency, one representative
    per conjugate pair +-k (real measures give conjugate integrals), in
    order of increasing |k|^2 then lexicographic."""
    ks = []
    for k1 in range(-max_frequency, max_frequency + 1):
        for k2 in range(-max_frequency, max_frequency + 1):
            if (k1, k2) == (0, 0):
                continue
            if k1 > 0 or (k1 == 0 and k2 > 0):
                ks.append((k1, k2))
    ks.sort(key=lambda k: (k[0] * k[0] + k[1] * k[1], k[0], k[1]))
    obs = tuple(FourierMode(k) for k in ks)
    weights = tuple(2.0 ** (-(j + 1)) for j in range(len(obs)))
    return TestFamily(obs, weights, f"fourier modes |k| <= {max_frequency}")


# -- measures -------------------------------------------------------------


class FiniteSupportMeasure:
    """Atoms (point, weight) with positive weights summing to one."""

    def __init__(self, atoms: Sequence[tuple]):
        atoms = [(p, w) for p, w in atoms]
        if not atoms or any(w <= 0 for _, w in atoms):
            raise ValueError("atoms must be non-empty with positive weights")
        total = sum(w for _, w in atoms)
        if abs(float(total) - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"weights sum to {float(total)}, not 1")
        self.atoms = atoms

    def integrate(self, obs) -> complex | float:
        if isinstance(obs, CylinderObservable):
            return sum(float(w) for p, w in self.atoms
                       if isinstance(p, ShiftPoint)
                       and p.window(0, len(obs.word)) == obs.word)
        if isinstance(obs, FourierMode):
            return sum(float(w) * obs.value(p) for p, w in self.atoms)
        raise TypeError(f"unsupported observable {obs!r}")

    def is_invariant_under(self, system, tol: float = 1e-9) -> bool:
        """Pushforward permutes the atoms with matching weights."""
        for p, w in self.atoms:
            image = system.apply(p)
            match = [w2 for p2, w2 in self.atoms if system.distance(image, p2) <= tol]
            if not match or abs(float(match[0]) - float(w)) > 1e-12:
                return False
        return True

    def to_json_dict(self) -> dict:
        def enc(p):
            if isinstance(p, ShiftPoint):
                return p.centered_word(8)
            return [f"{float(c):.15g}" for c in p]
        return {"atoms": [{"point": enc(p), "weight": float(w)} for p, w in self.atoms]}


def periodic_measure(orbit_points: Sequence) -> FiniteSupportMeasure:
    """Uniform weights 1/period on the points of a periodic orbit."""
    pts = list(orbit_points)
    w = Fraction(1, len(pts))
    return FiniteSupportMeasure([(p, w) for p in pts])


def cycle_measure(matrix: TransitionMatrix, word: Sequence[int]) -> FiniteSupportMeasure:
    """Periodic measure of the shift orbit of an admissible cyclic word."""
    cyc = SymbolicCycle.from_word(matrix, word)
    base = ShiftPoint.from_cycle(cyc.states)
    return periodic_measure([base.shift(i) for i in range(cyc.primitive_period)])


class MarkovMeasure:
    """Stationary Markov chain on the states of a transition-matrix
    support; ``labels`` maps states to output symbols when the chain is a
    block presentation of a subshift (identity when omitted)."""

    def __init__(self, support: TransitionMatrix, P: Sequence[Sequence[float]],
                 pi: Sequence[float], labels: Sequence[int] | None = None):
        n = support.size
        self.support = support
        self.P = tuple(tuple(float(x) for x in row) for row in P)
        self.pi = tuple(float(x) for x in pi)
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.P) != n or len(self.pi) != n or len(self.labels) != n:
            raise ValueError("dimension mismatch")
        for i in range(n):
            if abs(sum(self.P[i]) - 1.0) > STOCHASTIC_TOL:
                raise ValueError(f"row {i} not stochastic")
            for j in range(n):
                if self.P[i][j] < 0 or (self.P[i][j] > 0 and not support.rows[i][j]):
                    raise ValueError("transition off the support")
        if any(p <= 0 for p in self.pi) or abs(sum(self.pi) - 1.0) > 1e-12:
            raise ValueError("stationary vector must be positive, sum 1")
        drift = max(abs(sum(self.pi[i] * self.P[i][j] for i in range(n)) - self.pi[j])
                    for j in range(n))
        if drift > 1e-10:
            raise ValueError(f"pi not stationary (drift {drift:.2e})")

    def cylinder_mass(self, word: Sequence[int]) -> float:
        """Transfer product over label-compatible state paths."""
        word = tuple(word)
        n = self.support.size
        vec = [self.pi[s] if self.labels[s] == word[0] else 0.0 for s in range(n)]
        for sym in word[1:]:
            vec = [sum(vec[i] * self.P[i][j] for i in range(n))
                   if self.labels[j] == sym else 0.0 for j in range(n)]
        return sum(vec)

    def joint_mass(self, u: Sequence[int], v: Sequence[int], lag: int) -> float:
        """Mass of {x carries u at 0 and v at lag}."""
        u, v = tuple(u), tuple(v)
        if lag < len(u):
            merged = _superpose(u, v, lag)
            return 0.0 if merged is None else self.cylinder_mass(merged)
        n = self.support.size
        vec = [self.pi[s] if self.labels[s] == u[0] else 0.0 for s in range(n)]
        for sym in u[1:]:
            vec = [sum(vec[i] * self.P[i][j] for i in range(n))
                   if self.labels[j] == sym else 0.0 for j in range(n)]
        for _ in range(lag - len(u)):
            vec = [sum(vec[i] * self.P[i][j] for i in range(n)) for j in range(n)]
        for sym in v:
            vec = [sum(vec[i] * self.P[i][j] for i in range(n))
                   if self.labels[j] == sym else 0.0 for j in range(n)]
        return sum(vec)

    def integrate(self, obs) -> float:
        if isinstance(obs, CylinderObservable):
            return self.cylinder_mass(obs.word)
        raise TypeError(f"Markov measures integrate cylinder observables, not {obs!r}")

    def entropy(self) -> float:
        h = 0.0
        for i, row in enumerate(self.P):
            for p in row:
                if p > 0:
                    h -= self.pi[i] * p * math.log(p)
        return h

    def to_json_dict(self) -> dict:
        return {"P": [list(r) for r in self.P], "pi": list(self.pi),
                "support": {"rows": [list(r) for r in self.support.rows]},
                "labels": list(self.labels)}


def _superpose(u: tuple, v: tuple, lag: int) -> tuple | None:
    length = max(len(u), lag + len(v))
    out = []
    for i in range(length):
        a = u[i] if i < len(u) else None
        b = v[i - lag] if 0 <= i - lag < len(v) else None
        if a is not None and b is not None and a != b:
            return None
        out.append(a if a is not None else b)
    return tuple(out)


class LebesgueTorus:
    """Normalized Lebesgue measure on the 2-torus (closed-form integrals)."""

    def integrate(self, obs):
        if isinstance(obs, FourierMode):
            return 0.0 if obs.k != (0, 0) else 1.0
        raise TypeError(f"Lebesgue integrates Fourier modes, not {obs!r}")

    def to_json_dict(self) -> dict:
        return {"reference": "lebesgue_torus"}


class BernoulliProduct:
    """Product measure on the full shift with per-symbol probabilities."""

    def __init__(self, probabilities: Sequence[float]):
        p = tuple(float(x) for x in probabilities)
        if any(x <= 0 for x in p) or abs(sum(p) - 1.0) > 1e-12:
            raise ValueError("probabilities must be positive and sum to 1")
        self.p = p

    def integrate(self, obs):
        if isinstance(obs, CylinderObservable):
            mass = 1.0
            for s in obs.word:
                mass *= self.p[s]
            return mass
        raise TypeError(f"Bernoulli products integrate cylinders, not {obs!r}")

    def to_json_dict(self) -> dict:
        return {"reference": "bernoulli", "p": list(self.p)}


def integrate(measure, observable):
    """Integral of an observable against any supported measure."""
    return measure.integrate(observable)


def weak_star_distance(mu, nu, family: TestFamily) -> float:
    """sum_j 2^-j |int phi_j d mu - int phi_j d nu|."""
    total = 0.0
    for obs, w in zip(family.observables, family.weights):
        total += w * abs(integrate(mu, obs) - integrate(nu, obs))
    return total


# -- maximal-entropy (Parry) measure --------------------------------------


def parry_measure(matrix: TransitionMatrix, labels: Sequence[int] | None = None
                  ) -> MarkovMeasure:
    """The maximal-entropy Markov measure of a primitive subshift:
    P_ij = A_ij v_j / (lambda v_i) and pi_i proportional to u_i v_i for
    the Perron root lambda and right/left Perron vectors v, u.  Its chain
    entropy equals log lambda."""
    if not is_primitive(matrix):
        raise ValueError("Parry measure requires a primitive (mixing) support")
    lam, v, _u = perron_data(matrix)
    n = matrix.size
    P = [[matrix.rows[i][j] * v[j] / (lam * v[i]) for j in range(n)] for i in range(n)]
    # normalize rows exactly to kill the last float drift
    P = [[x / sum(row) for x in row] for row in P]
    pi = _stationary_vector(P)
    measure = MarkovMeasure(matrix, P, pi, labels)
    h = measure.entropy()
    if abs(h - math.log(lam)) > 1e-10:
        raise ValueError(f"Parry entropy {h} drifted from log Perron {math.log(lam)}")
    return measure


def _stationary_vector(P: Sequence[Sequence[float]]) -> list[float]:
    """Stationary row vector of an irreducible stochastic matrix, by a
    direct linear solve (pi (P - I) = 0 with sum pi = 1)."""
    n = len(P)
    a = np.transpose(np.array(P)) - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    return [float(x) for x in pi]


def correlation(measure: MarkovMeasure, phi: CylinderObservable,
                psi: CylinderObservable, n: int) -> float:
    """int phi.(psi o sigma^n) d mu  -  int phi d mu . int psi d mu."""
    joint = measure.joint_mass(phi.word, psi.word, n)
    return joint - measure.cylinder_mass(phi.word) * measure.cylinder_mass(psi.word)


# -- periodic approximation ------------------------------------------------


@dataclass
class ApproximationResult:
    measure: object
    distance: float
    within_epsilon: bool
    description: str
    trace: list = field(default_factory=list)


def _orbit_cycles_of_target(target: FiniteSupportMeasure) -> list[tuple[tuple[int, ...], float]]:
    """Decompose a finite-support shift measure into periodic orbits:
    [(cycle word, total weight)]."""
    remaining = list(target.atoms)
    out = []
    while remaining:
        p, w = remaining[0]
        if not isinstance(p, ShiftPoint):
            return []
        period = 1
        cur = p.shift(1)
        while not cur.equals(p):
            period += 1
            cur = cur.shift(1)
            if period > 10_000:
                return []
        word = p.window(0, period)
        weight = 0.0
        keep = []
        for p2, w2 in remaining:
            if any(p2.equals(p.shift(i)) for i in range(period)):
                weight += float(w2)
            else:
                keep.append((p2, w2))
        remaining = keep
        out.append((word, weight))
    return out


def approximate_by_periodic(target, system, epsilon: float, family: TestFamily,
                            max_period: int = 12, max_denominator: int = 64,
                            block_reps: int = 40,
                            prefer: str = "distance") -> ApproximationResult:
    """Best periodic measure within the search horizon.

    Shift systems scan enumerated short cycles plus block concatenations
    matching the cylinder frequencies of a finite-support target; toral
    systems scan rational orbits by denominator.  ``prefer`` picks the
    winner among candidates: smallest distance (default, ties to the
    smaller period) or the shortest orbit already within epsilon
    ("shortest_within", falling back to smallest distance when none is).
    """
    candidates: list[tuple[str, FiniteSupportMeasure]] = []
    if isinstance(system, SftSystem):
        matrix = system.matrix
        for n in range(1, max_period + 1):
            if count_periodic_points(matrix, n) > 2048:
                break
            for cyc in enumerate_cycles(matrix, n).cycles:
                if cyc.primitive_period == n:
                    candidates.append((str(cyc), cycle_measure(matrix, cyc.states)))
        if isinstance(target, FiniteSupportMeasure):
            parts = _orbit_cycles_of_target(target)
            total = sum(w for _, w in parts)
            if parts and total > 0:
                for reps in range(1, block_reps + 1):
                    word: tuple[int, ...] = ()
                    for cyc_word, w in parts:
                        count = max(1, round(reps * (w / total)))
                        word = word + cyc_word * count
                    if matrix.is_admissible_cycle(word):
                        candidates.append((f"blocks x{reps}", cycle_measure(matrix, word)))
    elif isinstance(system, ToralAutomorphism):
        seen: set = set()
        for q in range(1, max_denominator + 1):
            for i in range(q):
                for j in range(q):
                    if math.gcd(math.gcd(i, j), q) != 1:
                        continue
                    p0 = (Fraction(i, q), Fraction(j, q))
                    if p0 in seen:
                        continue
                    orbit = [p0]
                    seen.add(p0)
                    cur = system.apply(p0)
                    closed = cur == p0
                    while not closed and len(orbit) <= max_period:
                        orbit.append(cur)
                        seen.add(cur)
                        cur = system.apply(cur)
                        closed = cur == p0
                    if closed and len(orbit) <= max_period:
                        candidates.append((f"orbit({i}/{q},{j}/{q})",
                                           periodic_measure(orbit)))
    else:
        raise TypeError(f"unsupported system {system!r}")

    if not candidates:
        raise ValueError("no periodic candidates within the horizon")
    scored = []
    for desc, mu in candidates:
        d = weak_star_distance(target, mu, family)
        scored.append((d, len(mu.atoms), desc, mu))
    if prefer == "shortest_within":
        within = [s for s in scored if s[0] <= epsilon]
        pick = min(within, key=lambda s: (s[1], s[0], s[2])) if within \
            else min(scored, key=lambda s: (s[0], s[1], s[2]))
    else:
        pick = min(scored, key=lambda s: (s[0], s[1], s[2]))
    d, _, desc, mu = pick
    return ApproximationResult(mu, d, d <= epsilon, desc)


# -- the mixing-subshift pipeline ------------------------------------------


@dataclass
class BlockSubshift:
    """Letter-level presentation of the block language {loop = p^m,
    excursion}: chain states for each letter of each block, block-to-block
    moves at the seams, and no excursion following an excursion."""

    matrix: TransitionMatrix
    labels: tuple[int, ...]
    loop_word: tuple[int, ...]
    excursion_word: tuple[int, ...]
    loops_per_block: int


def block_subshift(matrix: TransitionMatrix, cycle: Sequence[int], m: int,
                   excursion: Sequence[int]) -> BlockSubshift:
    loop = tuple(cycle) * m
    exc = tuple(excursion)
    blocks = [loop, exc]
    allowed = {(0, 0), (0, 1), (1, 0)}  # excursion cannot follow excursion
    states = [(b, off) for b, blk in enumerate(blocks) for off in range(len(blk))]
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    rows = [[0] * n for _ in range(n)]
    for b, blk in enumerate(blocks):
        for off in range(len(blk) - 1):
            rows[index[(b, off)]][index[(b, off + 1)]] = 1
        for b2 in range(len(blocks)):
            if (b, b2) in allowed:
                rows[index[(b, len(blk) - 1)]][index[(b2, 0)]] = 1
    labels = tuple(blocks[b][off] for b, off in states)
    sub = TransitionMatrix(rows)
    # every letter move must be admissible in the ambient shift
    for i, (b, off) in enumerate(states):
        for j in range(n):
            if rows[i][j] and not matrix.admits(labels[i], labels[j]):
                raise ValueError("block seams violate ambient admissibility")
    return BlockSubshift(sub, labels, loop, exc, m)


@dataclass
class BernoulliApproximation:
    subshift: BlockSubshift
    measure: MarkovMeasure
    periodic_measure: FiniteSupportMeasure
    cycle: tuple[int, ...]
    distance_to_target: float
    distance_to_periodic: float
    within_epsilon: bool
    m: int
    scan: list[tuple[int, float]]


def bernoulli_approximation(target, matrix: TransitionMatrix, epsilon: float,
                            family: TestFamily, cycle: Sequence[int] | None = None,
                            m_max: int = 16) -> BernoulliApproximation:
    """Approximate a target measure by a mixing-support Markov measure.

    Steps: (1) pick a periodic measure mu_p within epsilon/2 of the target
    (searched unless a cycle is supplied); (2) take the homoclinic splice
    of the cycle and its minimal excursion word; (3) for each m, build the
    block subshift {p-loop repeated m times, excursion} and its Parry
    measure; (4) return the best m, whose distance to mu_p decreases in m,
    so the total distance lands within epsilon when step (1) met
    epsilon/2.
    """
    if not is_primitive(matrix):
        raise ValueError("ambient shift must be primitive (mixing)")
    if cycle is None:
        step1 = approximate_by_periodic(target, SftSystem(matrix), epsilon / 2.0, family,
                                        prefer="shortest_within")
        if not isinstance(step1.measure, FiniteSupportMeasure):
            raise ValueError("periodic step did not produce a finite-support measure")
        parts = _orbit_cycles_of_target(step1.measure)
        if len(parts) != 1:
            raise ValueError("periodic step did not produce a single orbit")
        cycle = parts[0][0]
        mu_p = step1.measure
    else:
        cycle = tuple(cycle)
        mu_p = cycle_measure(matrix, cycle)
    dist_p = weak_star_distance(target, mu_p, family)

    q, center = sft_homoclinic_splice(matrix, cycle)
    excursion = ((cycle[0],) + center) if len(cycle) > 1 else center
    tau = len(cycle)

    best = None
    scan: list[tuple[int, float]] = []
    for m in range(1, m_max + 1):
        if m * tau + len(excursion) > 64:
            break
        sub = block_subshift(matrix, cycle, m, excursion)
        if not is_primitive(sub.matrix):
            continue
        nu = parry_measure(sub.matrix, labels=sub.labels)
        d_p = weak_star_distance(nu, mu_p, family)
        scan.append((m, d_p))
        if best is None or d_p < best[0] - 1e-15:
            d_t = weak_star_distance(nu, target, family)
            best = (d_p, m, sub, nu, d_t)
    if best is None:
        raise ValueError("no primitive block subshift fits the 64-state cap")
    d_p, m, sub, nu, d_t = best
    return BernoulliApproximation(
        subshift=sub, measure=nu, periodic_measure=mu_p, cycle=tuple(cycle),
        distance_to_target=d_t, distance_to_periodic=d_p,
        within_epsilon=(d_p <= epsilon / 2.0 and d_t <= epsilon),
        m=m, scan=scan)
