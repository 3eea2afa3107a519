"""Concrete hyperbolic system backends.

Three kinds of system share one small interface (``apply``,
``apply_inverse``, ``distance``):

* :class:`ToralAutomorphism` -- a hyperbolic 2x2 integer matrix acting on
  the torus R^2/Z^2 (the cat map [[2,1],[1,1]] being the standard
  instance), with exact rational arithmetic for periodic points and
  closed-form homoclinic orbits along the eigenlines;
* :class:`Horseshoe` -- a two-branch affine model on the unit square with
  declared contraction/expansion rates; its maximal invariant set is coded
  by the full 2-shift and the coding map is exposed;
* :class:`SftSystem` -- a subshift of finite type presented as a dynamical
  system on exact :class:`~symshadow.shiftspace.ShiftPoint` sequences.

Homoclinic orbits for toral systems are never produced by naive forward
iteration (which would amplify floating-point error along the unstable
direction); instead each orbit point is evaluated from the eigenline
parametrization f^k(q) = f^k(p) + t lam_s^k v_s (k >= 0) and
f^k(q) = f^{k+1}(p) + s lam_u^k v_u (k < 0), which is stable on both
tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .homoclinic import HomoclinicDatum, homoclinic_datum
from .sft import TransitionMatrix
from .shiftspace import ShiftPoint, word_radius


@dataclass(frozen=True)
class HyperbolicSplitting:
    """Stable/unstable data: eigenvalues, unit directions, contraction and
    expansion moduli, and the shadowing constant C derived from them.

    C bounds the distance from a periodic delta-pseudo-orbit to its
    shadowing orbit: the geometric-series bound max(1/(1-mu_s),
    1/(1-1/mu_u)) per adapted coordinate, times 2/sin(angle) to convert
    between the adapted frame and the ambient metric.
    """

    lam_s: float
    lam_u: float
    v_s: tuple[float, float]
    v_u: tuple[float, float]

    @property
    def mu_s(self) -> float:
        return abs(self.lam_s)

    @property
    def mu_u(self) -> float:
        return abs(self.lam_u)

    @property
    def basis_angle_sin(self) -> float:
        cross = self.v_s[0] * self.v_u[1] - self.v_s[1] * self.v_u[0]
        return abs(cross)  # unit vectors: |cross| = sin(angle)

    @property
    def shadowing_constant(self) -> float:
        per_coord = max(1.0 / (1.0 - self.mu_s), 1.0 / (1.0 - 1.0 / self.mu_u))
        return 2.0 / self.basis_angle_sin * per_coord


@dataclass(frozen=True)
class ManifoldSegment:
    """Local stable or unstable manifold piece of a linear system: the
    line through ``base`` along the unit eigen-direction, restricted to a
    parameter interval."""

    base: tuple
    direction: tuple[float, float]
    lo: float
    hi: float
    stable: bool

    def point(self, t: float) -> tuple[float, float]:
        if not self.lo <= t <= self.hi:
            raise ValueError(f"parameter {t} outside [{self.lo}, {self.hi}]")
        return (float(self.base[0]) + t * self.direction[0],
                float(self.base[1]) + t * self.direction[1])


def _wrap(value):
    if isinstance(value, Fraction):
        return value - value.__floor__()
    return value - math.floor(value)


def _wrap_point(p):
    return (_wrap(p[0]), _wrap(p[1]))


def torus_distance(a, b) -> float:
    """Euclidean distance on the 2-torus (wrap-aware per coordinate)."""
    total = 0.0
    for x, y in zip(a, b):
        d = abs(float(x) - float(y)) % 1.0
        d = min(d, 1.0 - d)
        total += d * d
    return math.sqrt(total)


class ToralAutomorphism:
    """x -> A x mod 1 for an integer matrix with |det| = 1 and no
    eigenvalue on the unit circle.

    Fraction inputs are mapped exactly; float inputs in floating point.
    Only 2x2 matrices are supported (hyperbolicity then forces real,
    distinct eigenvalues).
    """

    kind = "toral"
    chart_radius = 0.25

    def __init__(self, matrix: Sequence[Sequence[int]]):
        m = tuple(tuple(int(v) for v in row) for row in matrix)
        if len(m) != 2 or any(len(r) != 2 for r in m):
            raise ValueError("only 2x2 toral automorphisms are supported")
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if det not in (1, -1):
            raise ValueError("matrix must have determinant +-1")
        tr = m[0][0] + m[1][1]
        disc = tr * tr - 4 * det
        if disc <= 0:
            raise ValueError("matrix is not hyperbolic (eigenvalues on the unit circle)")
        self.matrix = m
        self.det = det
        root = math.sqrt(disc)
        lam1 = (tr + root) / 2.0
        lam2 = (tr - root) / 2.0
        if abs(lam1) < abs(lam2):
            lam1, lam2 = lam2, lam1
        if abs(lam2) >= 1.0 or abs(lam1) <= 1.0:
            raise ValueError("matrix is not hyperbolic (|eigenvalue| = 1)")
        self.lam_u = lam1
        self.lam_s = lam2
        self.v_u = self._unit_eigenvector(lam1)
        self.v_s = self._unit_eigenvector(lam2)
        inv_det = det  # inverse of a unimodular 2x2: adj / det, det = +-1
        self.inverse_matrix = ((m[1][1] * inv_det, -m[0][1] * inv_det),
                               (-m[1][0] * inv_det, m[0][0] * inv_det))

    def _unit_eigenvector(self, lam: float) -> tuple[float, float]:
        (a, b), (c, d) = self.matrix
        # (A - lam I) v = 0: v = (b, lam - a) kills row one, (lam - d, c) row two
        cand1 = (float(b), lam - a)
        cand2 = (lam - d, float(c))
        v = cand1 if math.hypot(*cand1) >= math.hypot(*cand2) else cand2
        norm = math.hypot(*v)
        if norm < 1e-12:
            raise ValueError("degenerate eigenvector")
        return (v[0] / norm, v[1] / norm)

    # -- dynamics ------------------------------------------------------

    def apply(self, p):
        (a, b), (c, d) = self.matrix
        return _wrap_point((a * p[0] + b * p[1], c * p[0] + d * p[1]))

    def apply_inverse(self, p):
        (a, b), (c, d) = self.inverse_matrix
        return _wrap_point((a * p[0] + b * p[1], c * p[0] + d * p[1]))

    def differential(self, p=None):
        return self.matrix

    def distance(self, a, b) -> float:
        return torus_distance(a, b)

    def splitting(self) -> HyperbolicSplitting:
        return HyperbolicSplitting(self.lam_s, self.lam_u, self.v_s, self.v_u)

    # -- exact periodic points ----------------------------------------

    def periodic_lattice_points(self, n: int, cap: int = 200_000) -> list:
        """All fixed points of A^n on the torus, as exact Fractions.

        Solves (A^n - I) x = 0 mod Z^2 by Smith normal form; the count is
        |det(A^n - I)|.
        """
        mat = _int_pow2(self.matrix, n)
        m = ((mat[0][0] - 1, mat[0][1]), (mat[1][0], mat[1][1] - 1))
        count = abs(m[0][0] * m[1][1] - m[0][1] * m[1][0])
        if count == 0:
            raise ValueError("A^n - I singular; matrix not hyperbolic?")
        if count > cap:
            raise ValueError(f"{count} fixed points of order {n} exceeds cap {cap}")
        d, _u, v = _smith_normal_form_2x2(m)
        # U m V = diag, so m x integer iff y := V^{-1} x has d_k y_k integer;
        # enumerate y on the (1/d1) x (1/d2) lattice and map back by x = V y
        points = []
        for i in range(d[0]):
            for j in range(d[1]):
                y = (Fraction(i, d[0]), Fraction(j, d[1]))
                x = (v[0][0] * y[0] + v[0][1] * y[1],
                     v[1][0] * y[0] + v[1][1] * y[1])
                points.append(_wrap_point(x))
        points.sort()
        assert len(points) == count
        return points

    def orbit_of(self, p, cap: int = 10_000) -> list:
        """Forward orbit of an exact rational point up to first return."""
        orbit = [_wrap_point((Fraction(p[0]), Fraction(p[1])))]
        while len(orbit) <= cap:
            nxt = self.apply(orbit[-1])
            if nxt == orbit[0]:
                return orbit
            orbit.append(nxt)
        raise ValueError(f"point {p} not periodic within {cap} iterates")

    # -- homoclinic orbit along the eigenlines ------------------------

    def stable_segment(self, base, radius: float = 1.0) -> ManifoldSegment:
        return ManifoldSegment(base, self.v_s, -radius, radius, stable=True)

    def unstable_segment(self, base, radius: float = 1.0) -> ManifoldSegment:
        return ManifoldSegment(base, self.v_u, -radius, radius, stable=False)

    def homoclinic_intersection(self, p_orbit: Sequence, translate_range: int = 3
                                ) -> tuple[float, float]:
        """Coefficients (t, s) with p + t v_s = f(p) + m + s v_u for the
        deck translate m minimizing max(|t|, |s|) over nonzero solutions:
        q = p + t v_s lies on the stable segment of p and the unstable
        segment of f(p), a transverse homoclinic point with the backward
        tail along W^u(f(p))."""
        p = p_orbit[0]
        fp = p_orbit[1 % len(p_orbit)]
        rhs0 = (float(fp[0]) - float(p[0]), float(fp[1]) - float(p[1]))
        det = self.v_s[0] * (-self.v_u[1]) - self.v_s[1] * (-self.v_u[0])
        best = None
        for m1 in range(-translate_range, translate_range + 1):
            for m2 in range(-translate_range, translate_range + 1):
                r = (rhs0[0] + m1, rhs0[1] + m2)
                t = (r[0] * (-self.v_u[1]) - r[1] * (-self.v_u[0])) / det
                s = (self.v_s[0] * r[1] - self.v_s[1] * r[0]) / det
                if abs(t) < 1e-12 or abs(s) < 1e-12:
                    continue  # on the orbit itself, not homoclinic
                score = max(abs(t), abs(s))
                if best is None or score < best[0]:
                    best = (score, t, s)
        if best is None:
            raise ValueError(f"no transverse homoclinic intersection among deck "
                             f"translates up to {translate_range}")
        return best[1], best[2]

    def homoclinic_orbit_point(self, p_orbit: Sequence, t: float, s: float, k: int):
        """f^k(q) for q = p + t v_s = f(p) + s v_u (mod 1), evaluated from
        the tail that is numerically stable at k."""
        tau = len(p_orbit)
        if k >= 0:
            base = p_orbit[k % tau]
            coef = t * self.lam_s ** k
            direction = self.v_s
        else:
            base = p_orbit[(k + 1) % tau]
            coef = s * self.lam_u ** k
            direction = self.v_u
        return _wrap_point((float(base[0]) + coef * direction[0],
                            float(base[1]) + coef * direction[1]))

    def to_config(self) -> dict:
        return {"kind": "toral", "matrix": [list(r) for r in self.matrix]}


def _int_pow2(m, n: int):
    result = ((1, 0), (0, 1))
    base = tuple(tuple(row) for row in m)
    while n:
        if n & 1:
            result = _int_mul2(result, base)
        base = _int_mul2(base, base)
        n >>= 1
    return result


def _int_mul2(a, b):
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def _smith_normal_form_2x2(m):
    """(diag, U, V) with U m V = diag(d1, d2), d1 | d2, U and V unimodular."""
    a = [list(r) for r in m]
    u = [[1, 0], [0, 1]]
    v = [[1, 0], [0, 1]]

    def row_op(i, j, k):  # row_i += k * row_j
        a[i][0] += k * a[j][0]
        a[i][1] += k * a[j][1]
        u[i][0] += k * u[j][0]
        u[i][1] += k * u[j][1]

    def col_op(i, j, k):  # col_i += k * col_j
        a[0][i] += k * a[0][j]
        a[1][i] += k * a[1][j]
        v[0][i] += k * v[0][j]
        v[1][i] += k * v[1][j]

    def swap_rows():
        a[0], a[1] = a[1], a[0]
        u[0], u[1] = u[1], u[0]

    def swap_cols():
        a[0][0], a[0][1] = a[0][1], a[0][0]
        a[1][0], a[1][1] = a[1][1], a[1][0]
        v[0][0], v[0][1] = v[0][1], v[0][0]
        v[1][0], v[1][1] = v[1][1], v[1][0]

    # clear position (1,0) and (0,1) by gcd reduction
    for _ in range(200):
        if a[1][0] != 0:
            if a[0][0] == 0 or abs(a[1][0]) < abs(a[0][0]):
                swap_rows()
                continue
            row_op(1, 0, -(a[1][0] // a[0][0]))
            continue
        if a[0][1] != 0:
            if a[0][0] == 0 or abs(a[0][1]) < abs(a[0][0]):
                swap_cols()
                continue
            col_op(1, 0, -(a[0][1] // a[0][0]))
            continue
        break
    assert a[1][0] == 0 and a[0][1] == 0, "Smith reduction failed to terminate"
    if a[0][0] < 0:
        a[0][0], a[0][1] = -a[0][0], -a[0][1]
        u[0][0], u[0][1] = -u[0][0], -u[0][1]
    if a[1][1] < 0:
        a[1][0], a[1][1] = -a[1][0], -a[1][1]
        u[1][0], u[1][1] = -u[1][0], -u[1][1]
    # enforce divisibility d1 | d2
    if a[0][0] != 0 and a[1][1] % a[0][0] != 0:
        col_op(0, 1, 1)
        # restart the reduction once; 2x2 always terminates
        d, u2, v2 = _smith_normal_form_2x2(a)
        return d, _int_mul2(u2, tuple(map(tuple, u))), _int_mul2(tuple(map(tuple, v)), v2)
    return (a[0][0], a[1][1]), tuple(map(tuple, u)), tuple(map(tuple, v))


def _unimodular_inverse_2x2(v):
    det = v[0][0] * v[1][1] - v[0][1] * v[1][0]
    assert det in (1, -1)
    return ((v[1][1] * det, -v[0][1] * det), (-v[1][0] * det, v[0][0] * det))


class Horseshoe:
    """Two-branch affine horseshoe model on the unit square.

    Branch c in {0, 1} acts on the horizontal strip H_c (height 1/mu_u,
    at the bottom resp. top of the square) by
    f(x, y) = (mu_s x + c (1 - mu_s), mu_u y - c (mu_u - 1)),
    carrying H_c onto the vertical strip of width mu_s at the left resp.
    right edge.  The maximal invariant set is coded by the full 2-shift;
    x-coordinates are read off the backward itinerary, y-coordinates off
    the forward itinerary.
    """

    kind = "horseshoe"
    chart_radius = 0.2

    def __init__(self, contraction: float, expansion: float):
        if not 0.0 < contraction < 0.5:
            raise ValueError("contraction rate must lie in (0, 1/2)")
        if not expansion > 2.0:
            raise ValueError("expansion rate must exceed 2")
        self.mu_s = float(contraction)
        self.mu_u = float(expansion)
        self.coding_matrix = TransitionMatrix.full_shift(2)

    def branch_of(self, p) -> int:
        y = p[1]
        if y <= 1.0 / self.mu_u + 1e-12:
            return 0
        if y >= 1.0 - 1.0 / self.mu_u - 1e-12:
            return 1
        raise ValueError(f"point {p} lies in the escape gap of the horseshoe")

    def apply(self, p):
        c = self.branch_of(p)
        return (self.mu_s * p[0] + c * (1.0 - self.mu_s),
                self.mu_u * p[1] - c * (self.mu_u - 1.0))

    def apply_inverse(self, p):
        x = p[0]
        if x <= self.mu_s + 1e-12:
            c = 0
        elif x >= 1.0 - self.mu_s - 1e-12:
            c = 1
        else:
            raise ValueError(f"point {p} has no preimage in the horseshoe strips")
        return ((x - c * (1.0 - self.mu_s)) / self.mu_s,
                (p[1] + c * (self.mu_u - 1.0)) / self.mu_u)

    def differential(self, p=None):
        return ((self.mu_s, 0.0), (0.0, self.mu_u))

    def distance(self, a, b) -> float:
        return math.hypot(a[0] - b[0], a[1] - b[1])

    def splitting(self) -> HyperbolicSplitting:
        return HyperbolicSplitting(self.mu_s, self.mu_u, (1.0, 0.0), (0.0, 1.0))

    # -- coding --------------------------------------------------------

    def code_point(self, itinerary: ShiftPoint) -> tuple[float, float]:
        """Point of the invariant set with the given 2-shift itinerary:
        x = (1-mu_s) sum_{k>=1} s_{-k} mu_s^{k-1},
        y = (1-1/mu_u) sum_{k>=0} s_k mu_u^{-k}."""
        x = (1.0 - self.mu_s) * _tail_sum(itinerary, -1, -1, self.mu_s)
        y = (1.0 - 1.0 / self.mu_u) * _tail_sum(itinerary, 0, +1, 1.0 / self.mu_u)
        return (x, y)

    def itinerary(self, p, radius: int) -> list[int]:
        """Strip indices of f^k(p) for k in [-radius, radius)."""
        back = p
        for _ in range(radius):
            back = self.apply_inverse(back)
        out = []
        cur = back
        for _ in range(2 * radius):
            out.append(self.branch_of(cur))
            cur = self.apply(cur)
        return out

    def coding_table(self, depth: int) -> list[dict]:
        """word <-> point table: one row per (backward, forward) word pair
        of length ``depth`` (full 2-shift: all pairs admissible)."""
        rows = []
        for b in range(2 ** depth):
            for f in range(2 ** depth):
                back = tuple((b >> i) & 1 for i in range(depth))
                fwd = tuple((f >> (depth - 1 - i)) & 1 for i in range(depth))
                pt = ShiftPoint((0,), back[::-1] + fwd, (0,), pos=-depth)
                x, y = self.code_point(pt)
                rows.append({"backward": "".join(map(str, back[::-1])),
                             "forward": "".join(map(str, fwd)),
                             "x": x, "y": y})
        return rows

    def to_config(self) -> dict:
        return {"kind": "horseshoe", "rates": [self.mu_s, self.mu_u]}


def _tail_sum(point: ShiftPoint, start: int, step: int, ratio: float) -> float:
    """sum_{j>=0} point[start + j*step] * ratio^j for an eventually
    periodic point, using the closed form for the periodic tail."""
    # resolve the pre-periodic part explicitly, then sum the periodic tail
    if step > 0:
        period = len(point.right)
        tail_from = max(start, point.pos + len(point.center))
    else:
        period = len(point.left)
        tail_from = min(start, point.pos - 1)
    total = 0.0
    j = 0
    idx = start
    while (idx - tail_from) * step < 0:
        total += point[idx] * ratio ** j
        j += 1
        idx += step
    block = sum(point[idx + i * step] * ratio ** i for i in range(period))
    total += ratio ** j * block / (1.0 - ratio ** period)
    return total


class SftSystem:
    """A subshift of finite type as a dynamical system on exact
    eventually-periodic shift points."""

    kind = "sft"
    chart_radius = 0.25

    def __init__(self, matrix: TransitionMatrix):
        self.matrix = matrix

    def apply(self, p: ShiftPoint) -> ShiftPoint:
        return p.shift(1)

    def apply_inverse(self, p: ShiftPoint) -> ShiftPoint:
        return p.shift(-1)

    def distance(self, a: ShiftPoint, b: ShiftPoint) -> float:
        return a.distance(b)

    def to_config(self) -> dict:
        return {"kind": "sft", "matrix": {"rows": [list(r) for r in self.matrix.rows],
                                          "size": self.matrix.size}}

    def shortest_connector(self, a: int, b: int) -> tuple[int, ...]:
        """Shortest (possibly empty) word w with a -> w -> b admissible."""
        if self.matrix.admits(a, b):
            return ()
        # BFS over states, tracking the interior word
        frontier = {a: ()}
        for _ in range(self.matrix.size + 1):
            nxt: dict[int, tuple[int, ...]] = {}
            for state, word in sorted(frontier.items()):
                for t in self.matrix.succ[state]:
                    cand = word + (t,)
                    if self.matrix.admits(t, b):
                        return cand
                    if t not in nxt:
                        nxt[t] = cand
            frontier = nxt
        raise ValueError(f"no admissible connector from {a} to {b}")


# -- dispatching helpers ------------------------------------------------


def evaluate(system, x):
    """One application of the system map."""
    return system.apply(x)


def differential(system, x):
    """Derivative of the map at x (constant for these linear/affine
    systems); shift systems carry no differentiable structure."""
    if isinstance(system, SftSystem):
        raise TypeError("shift systems have no differential")
    return system.differential(x)


@dataclass(frozen=True)
class LyapunovReport:
    exponents: tuple[float, ...]
    defined: bool
    note: str = ""


def lyapunov_exponents_periodic(system, orbit_points: Sequence) -> LyapunovReport:
    """(1/tau) log of the eigenvalue moduli of the derivative cocycle over
    one period of the orbit, sorted descending."""
    if isinstance(system, SftSystem):
        return LyapunovReport((), False, "shift systems carry no differentiable structure")
    tau = len(orbit_points)
    prod = ((1.0, 0.0), (0.0, 1.0))
    for p in orbit_points:
        d = system.differential(p)
        prod = _float_mul2(tuple(tuple(float(v) for v in row) for row in d), prod)
    tr = prod[0][0] + prod[1][1]
    det = prod[0][0] * prod[1][1] - prod[0][1] * prod[1][0]
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        roots = ((tr + math.sqrt(disc)) / 2.0, (tr - math.sqrt(disc)) / 2.0)
        moduli = sorted((abs(roots[0]), abs(roots[1])), reverse=True)
    else:
        modulus = math.sqrt(abs(det))  # complex pair: |root|^2 = det
        moduli = [modulus, modulus]
    exps = tuple(math.log(m) / tau if m > 0 else float("-inf") for m in moduli)
    return LyapunovReport(exps, True)


def _float_mul2(a, b):
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def net(system, spacing: float) -> list:
    """A spacing-dense finite point set: a grid on the torus or the unit
    square, one representative per admissible m-word on a shift space."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if isinstance(system, ToralAutomorphism):
        k = math.ceil(1.0 / spacing)
        return [(i / k, j / k) for i in range(k) for j in range(k)]
    if isinstance(system, Horseshoe):
        m = 1
        while max(system.mu_s ** m, system.mu_u ** (-m)) > spacing / 2.0:
            m += 1
            if m > 7:
                raise ValueError("spacing too fine for a horseshoe net at desk scale")
        return [(row["x"], row["y"]) for row in system.coding_table(m)]
    if isinstance(system, SftSystem):
        m = max(1, word_radius(spacing))
        reps = []
        for word in _admissible_words(system.matrix, m):
            reps.append(sft_point_through_word(system.matrix, word))
        return reps
    raise TypeError(f"unknown system {system!r}")


def _admissible_words(matrix: TransitionMatrix, length: int) -> list[tuple[int, ...]]:
    words = [(s,) for s in range(matrix.size)]
    for _ in range(length - 1):
        words = [w + (t,) for w in words for t in matrix.succ[w[-1]]]
    return words


def sft_point_through_word(matrix: TransitionMatrix, word: Sequence[int]) -> ShiftPoint:
    """A canonical admissible point carrying ``word`` at positions 0..|w|-1:
    the word is closed into a cycle by a shortest connector and repeated."""
    word = matrix.require_word(word)
    connector = SftSystem(matrix).shortest_connector(word[-1], word[0])
    cycle = word + connector
    return ShiftPoint.from_cycle(cycle)


# -- homoclinic data ----------------------------------------------------


def sft_homoclinic_splice(matrix: TransitionMatrix, cycle: Sequence[int]
                          ) -> tuple[ShiftPoint, tuple[int, ...]]:
    """Transverse-homoclinic analogue for a shift: a point whose backward
    tail is the cycle advanced by one phase and whose forward tail is the
    cycle itself, with the shortest admissible center insertion c (length
    a multiple of the period, possibly empty).  Returns (q, c)."""
    w = tuple(cycle)
    tau = len(w)
    if not matrix.is_admissible_cycle(w):
        raise ValueError(f"cycle {w} not admissible")
    rho = w[1:] + w[:1]  # advanced phase for the backward tail
    max_len = tau * (matrix.size + 2)
    length = 0 if tau > 1 else tau
    while length <= max_len:
        for c in _center_candidates(matrix, w, length):
            q = ShiftPoint(rho, c, w, pos=0)
            if not q.is_admissible(matrix):
                continue
            if any(q.equals(ShiftPoint.from_cycle(w, phase)) for phase in range(tau)):
                continue
            return q, c
        length += tau if tau > 1 else 1
    raise ValueError(f"no homoclinic splice found for cycle {w}")


def _center_candidates(matrix: TransitionMatrix, w, length: int):
    if length == 0:
        yield ()
        return
    # lexicographic admissible words of the given length, seam-compatible
    def rec(prefix):
        if len(prefix) == length:
            yield prefix
            return
        prev = prefix[-1] if prefix else w[0]  # left tail ends with w[0]
        for t in matrix.succ[prev]:
            yield from rec(prefix + (t,))

    yield from rec(())


def toral_homoclinic_datum(system: ToralAutomorphism, p, delta: float,
                           forward_length: int, backward_length: int
                           ) -> HomoclinicDatum:
    """Homoclinic datum of a rational periodic point of a toral
    automorphism, with the orbit segment generated from the eigenline
    parametrization (stable on both tails)."""
    p_orbit = system.orbit_of(p)
    t, s = system.homoclinic_intersection(p_orbit)
    segment = [system.homoclinic_orbit_point(p_orbit, t, s, k)
               for k in range(-backward_length, forward_length + 1)]
    return homoclinic_datum(system, p_orbit, segment, backward_length, delta)


def sft_homoclinic_datum(system: SftSystem, cycle: Sequence[int], delta: float,
                         forward_length: int, backward_length: int
                         ) -> HomoclinicDatum:
    """Homoclinic datum of a periodic cycle of a shift system, built from
    the exact spliced point."""
    q, _ = sft_homoclinic_splice(system.matrix, cycle)
    w = tuple(cycle)
    p_orbit = tuple(ShiftPoint.from_cycle(w, phase) for phase in range(len(w)))
    segment = [q.shift(k) for k in range(-backward_length, forward_length + 1)]
    return homoclinic_datum(system, p_orbit, segment, backward_length, delta)


def horseshoe_homoclinic_datum(system: Horseshoe, cycle: Sequence[int], delta: float,
                               forward_length: int, backward_length: int
                               ) -> HomoclinicDatum:
    """Homoclinic datum on the horseshoe: the symbolic splice pushed
    through the coding map (exact geometric stable/unstable tails)."""
    q, _ = sft_homoclinic_splice(system.coding_matrix, cycle)
    w = tuple(cycle)
    p_orbit = tuple(system.code_point(ShiftPoint.from_cycle(w, phase))
                    for phase in range(len(w)))
    segment = [system.code_point(q.shift(k))
               for k in range(-backward_length, forward_length + 1)]
    return homoclinic_datum(system, p_orbit, segment, backward_length, delta)


def homoclinic_point(system, p, delta: float = 1e-2, forward_length: int = 120,
                     backward_length: int = 60) -> HomoclinicDatum:
    """Homoclinic datum for a periodic point of any supported system.

    The phase convention is fixed: the backward tail of q follows the
    orbit of f(p), the forward tail the orbit of p (a phase shift of one).
    ``p`` is a rational point for toral systems and a symbolic cycle for
    shift and horseshoe systems.
    """
    if isinstance(system, ToralAutomorphism):
        return toral_homoclinic_datum(system, p, delta, forward_length, backward_length)
    if isinstance(system, SftSystem):
        return sft_homoclinic_datum(system, p, delta, forward_length, backward_length)
    if isinstance(system, Horseshoe):
        return horseshoe_homoclinic_datum(system, p, delta, forward_length, backward_length)
    raise TypeError(f"unknown system {system!r}")


def parse_system(config: dict):
    """System from its JSON configuration {"kind": ..., ...}."""
    kind = config.get("kind")
    if kind == "toral":
        return ToralAutomorphism(config["matrix"])
    if kind == "horseshoe":
        rates = config["rates"]
        return Horseshoe(rates[0], rates[1])
    if kind == "sft":
        return SftSystem(TransitionMatrix(config["matrix"]["rows"]))
    raise ValueError(f"unknown system kind {kind!r}")


def cat_map() -> ToralAutomorphism:
    return ToralAutomorphism([[2, 1], [1, 1]])
