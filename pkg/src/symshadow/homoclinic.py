"""Periodic pseudo-orbits built from homoclinic data.

Given a hyperbolic periodic point p of period tau and a transverse
homoclinic point q whose backward orbit follows the orbit of f(p) and
whose forward orbit follows the orbit of p, this module assembles, for
every prescribed length n >= N0, a periodic delta-pseudo-orbit of exact
period n that stays close to O(p) u O(q): n is decomposed into r
excursion strings along the homoclinic loop (each of length l*tau + 1,
shifting the phase along the p-orbit by one) followed by a block of
iterates near the p-orbit, with jumps of size < delta only where two
points sit in the same delta/2-ball.

The excursion count r is n mod tau, except that lengths divisible by tau
use tau excursions: a pseudo-orbit made of whole p-loops alone would have
period tau rather than n, so the phase must be walked all the way around.
With L the product of the partial excursion budgets r*l and an extra
tau*l*tau margin for the all-the-way-around case, every n >= N0 =
(L + tau*l) * tau decomposes with a nonnegative number of near-p loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Any, Sequence


class InsufficientSegmentError(ValueError):
    """Homoclinic orbit segment too short; carries the needed extension."""

    def __init__(self, message: str, extend_backward: int = 0, extend_forward: int = 0):
        super().__init__(message)
        self.extend_backward = extend_backward
        self.extend_forward = extend_forward


@dataclass(frozen=True)
class HomoclinicDatum:
    """Periodic point p with period tau, a homoclinic orbit segment, and
    the pseudo-orbit tolerance delta.

    ``segment[k + k_back]`` holds f^k(q) for k in [-k_back, k_fwd]; the
    backward tail tracks the orbit of f(p) (one phase ahead), the forward
    tail the orbit of p.
    """

    system: Any
    p_orbit: tuple  # (f^0(p), ..., f^{tau-1}(p))
    tau: int
    segment: tuple
    k_back: int
    delta: float

    def q_point(self, k: int):
        """f^k(q); raises when the stored segment does not reach k."""
        idx = k + self.k_back
        if not 0 <= idx < len(self.segment):
            need_back = max(0, -(k + self.k_back))
            need_fwd = max(0, k - (len(self.segment) - 1 - self.k_back))
            raise InsufficientSegmentError(
                f"segment covers q-orbit indices [{-self.k_back}, "
                f"{len(self.segment) - 1 - self.k_back}], needed {k}",
                extend_backward=need_back, extend_forward=need_fwd)
        return self.segment[idx]

    @property
    def k_fwd(self) -> int:
        return len(self.segment) - 1 - self.k_back

    def in_p_ball(self, point, radius: float) -> bool:
        return self.system.distance(point, self.p_orbit[0]) <= radius

    def validate(self) -> None:
        """Both tails must enter the delta/2-ball of the right phase point
        and carry at least tau points near translates of O(p)."""
        half = self.delta / 2.0
        tau = self.tau
        # forward tail follows O(p): f^{k}(q) near f^{k mod tau}(p) at the far end
        far = self.k_fwd
        for r in range(tau):
            k = far - r
            target = self.p_orbit[k % tau]
            if self.system.distance(self.q_point(k), target) > half:
                raise ValueError("forward tail of homoclinic segment not within "
                                 "delta/2 of the p-orbit")
        # backward tail follows O(f(p)): f^{-k}(q) near f^{1-k}(p)
        for r in range(tau):
            k = -self.k_back + r
            target = self.p_orbit[(k + 1) % tau]
            if self.system.distance(self.q_point(k), target) > half:
                raise ValueError("backward tail of homoclinic segment not within "
                                 "delta/2 of the f(p)-orbit")


@dataclass(frozen=True)
class ExcursionParameters:
    """Anchor x = f^{N tau}(q) deep in the forward tail, the first backward
    return index l, the per-remainder excursion budgets k_r = r*l, their
    product L, and the resulting admissible-length threshold N0."""

    N: int
    l: int
    k_r: tuple[int, ...]
    L: int
    x_index: int   # = N * tau, index of x in the q-orbit
    N0_product: int  # L * tau
    N0: int        # (L + tau*l) * tau, valid for every residue of n mod tau


@dataclass
class PseudoOrbit:
    """Cyclic point sequence with per-step defect d(f(x_i), x_{i+1}).

    ``jump_indices`` are the steps i at which the construction jumped;
    every other step is an exact application of the map.
    """

    points: list
    period: int
    defect: float
    jump_indices: tuple[int, ...] = ()
    system: Any = None
    exact_period: bool = True

    def to_json_dict(self) -> dict:
        return {"points": [encode_point(p) for p in self.points],
                "n": self.period, "defect": self.defect}


def encode_point(p):
    """Symbolic points as centered words, planar points as decimal pairs
    with 15 significant digits."""
    if hasattr(p, "centered_word"):
        return p.centered_word(12)
    return [f"{float(c):.15g}" for c in p]


def homoclinic_datum(system, p_orbit: Sequence, segment: Sequence, k_back: int,
                     delta: float) -> HomoclinicDatum:
    datum = HomoclinicDatum(system, tuple(p_orbit), len(p_orbit), tuple(segment),
                            k_back, float(delta))
    datum.validate()
    return datum


def compute_excursion_parameters(datum: HomoclinicDatum) -> ExcursionParameters:
    """Locate x = f^{N tau}(q) and the backward return index l.

    N is minimal with f^{-r tau}(x) within delta/2 of p for r = 0..tau
    (one multiple beyond the excursion count, so that the jump out of the
    first of tau excursions also lands near p); l is minimal positive with
    f^{-l tau - 1}(x) within delta/2 of p.
    """
    half = datum.delta / 2.0
    tau = datum.tau
    k_fwd = datum.k_fwd

    N = None
    for cand in range(1, k_fwd // tau + 1):
        if (cand - tau) * tau < -datum.k_back:
            continue
        if all(datum.in_p_ball(datum.q_point((cand - r) * tau), half)
               for r in range(tau + 1)):
            N = cand
            break
    if N is None:
        raise InsufficientSegmentError(
            "no anchor x = f^(N tau)(q) with tau+1 backward tau-multiples near p; "
            "extend the forward segment", extend_forward=2 * tau * tau + 2 * tau)

    x_index = N * tau
    l = None
    cand = 1
    while x_index - cand * tau - 1 >= -datum.k_back:
        if datum.in_p_ball(datum.q_point(x_index - cand * tau - 1), half):
            l = cand
            break
        cand += 1
    if l is None:
        raise InsufficientSegmentError(
            "backward tail never re-enters the delta/2-ball of p at a "
            "(-l tau - 1)-index; extend the backward segment",
            extend_backward=(cand + 2) * tau + 1)

    k_r = tuple(r * l for r in range(1, tau))
    L = prod(k_r) if k_r else 1
    return ExcursionParameters(N=N, l=l, k_r=k_r, L=L, x_index=N * tau,
                               N0_product=L * tau, N0=(L + tau * l) * tau)


def build_periodic_pseudo_orbit(datum: HomoclinicDatum, params: ExcursionParameters,
                                n: int) -> PseudoOrbit:
    """Periodic delta-pseudo-orbit of exact period n >= params.N0.

    Writes n = r*(l*tau + 1) + a*tau with r in {1..tau} congruent to n mod
    tau (r = tau when tau divides n) and a >= 0: r excursion strings, each
    the l*tau + 1 true iterates starting at f^{-(l + r - j) tau - 1}(x),
    then a*tau iterates of x along the forward tail, then the closing jump
    back to the start.
    """
    tau, l = datum.tau, params.l
    if n < params.N0:
        raise ValueError(f"n = {n} below the admissible threshold N0 = {params.N0}")
    r = n % tau
    if r == 0:
        r = tau
    string_len = l * tau + 1
    a_tau = n - r * string_len
    if a_tau < 0 or a_tau % tau != 0:
        raise ValueError(f"length n = {n} does not decompose with tau = {tau}, l = {l}")

    x_index = params.x_index
    points = []
    jump_indices = []
    for j in range(r):
        start = x_index - (l + r - j) * tau - 1
        points.extend(datum.q_point(start + t) for t in range(string_len))
        jump_indices.append(len(points) - 1)
    for t in range(a_tau):
        points.append(datum.q_point(x_index + t))
    assert len(points) == n
    if a_tau > 0:
        jump_indices.append(n - 1)  # closure out of the near-p block
    # when a_tau = 0 the final excursion jump, already recorded, is the closure

    po = PseudoOrbit(points=points, period=n, defect=0.0,
                     jump_indices=tuple(jump_indices), system=datum.system)
    report = verify_pseudo_orbit(po, datum.delta)
    po.defect = report["max_defect"]
    po.exact_period = report["exact_period_ok"]
    if po.defect > datum.delta:
        raise ValueError(f"constructed pseudo-orbit has defect {po.defect} > "
                         f"delta = {datum.delta}; datum tolerances inconsistent")
    return po


def verify_pseudo_orbit(po: PseudoOrbit, delta: float, reference: Sequence = ()
                        ) -> dict:
    """Recompute the defect step by step, test for a smaller cyclic period,
    and (when a reference point set is supplied) measure the Hausdorff
    distance to it."""
    system = po.system
    n = po.period
    pts = po.points
    max_defect = 0.0
    for i in range(n):
        d = system.distance(system.apply(pts[i]), pts[(i + 1) % n])
        max_defect = max(max_defect, d)

    exact = True
    for p in range(1, n):
        if n % p == 0 and all(_same_point(system, pts[i], pts[(i + p) % n])
                              for i in range(n)):
            exact = False
            break

    report = {
        "max_defect": max_defect,
        "within_delta": max_defect <= delta,
        "exact_period_ok": exact,
    }
    if reference:
        ref = list(reference)
        to_ref = max(min(system.distance(x, y) for y in ref) for x in pts)
        from_ref = max(min(system.distance(x, y) for x in pts) for y in ref)
        report["hausdorff_to_reference"] = max(to_ref, from_ref)
    return report


def _same_point(system, x, y) -> bool:
    return system.distance(x, y) <= 1e-12
