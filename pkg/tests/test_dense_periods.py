"""Dense-period certificates, refutations, and mixing thresholds."""

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symshadow.dense_periods import (CertificateTooCoarseError,
                                     DensePeriodsCertificate,
                                     DensePeriodsRefutation,
                                     HorizonTooSmallError, admissible_words,
                                     dense_periods_certificate,
                                     homoclinic_restricted_certificate,
                                     is_dense_cycle,
                                     verify_mixing_from_certificate)
from symshadow.sft import (SymbolicCycle, TransitionMatrix, count_periodic_points,
                           is_primitive)

FULL2 = TransitionMatrix.full_shift(2)
GOLDEN = TransitionMatrix.golden_mean()
PARITY = TransitionMatrix([[0, 1], [1, 0]])
WHEEL = TransitionMatrix([[1, 1, 0], [0, 0, 1], [1, 0, 0]])


def scanner_contains_all_words(matrix, cycle_word, m):
    """Independent density check: string scan of the doubled word."""
    text = "".join(map(str, cycle_word))
    doubled = text + text + text[:m]
    for word in admissible_words(matrix, m):
        if "".join(map(str, word)) not in doubled:
            return False
    return True


def random_essential(rng, size, density):
    while True:
        rows = [[1 if rng.random() < density else 0 for _ in range(size)]
                for _ in range(size)]
        if all(any(r) for r in rows) and all(any(rows[i][j] for i in range(size))
                                             for j in range(size)):
            return TransitionMatrix(rows)


# -- certificates -----------------------------------------------------------


def test_full_shift_certificate_smallest_n0():
    cert = dense_periods_certificate(FULL2, 0.5, 20)
    assert isinstance(cert, DensePeriodsCertificate)
    assert cert.N0 == 2
    assert cert.word_length == 1
    witness2 = cert.witnesses[2]
    assert sorted(witness2.states) == [0, 1]  # the 2-cycle through both symbols


def test_parity_refutation_at_three():
    result = dense_periods_certificate(PARITY, 0.5, 20)
    assert isinstance(result, DensePeriodsRefutation)
    assert result.blocking_n == 3
    assert result.exhaustive is True
    assert count_periodic_points(PARITY, 3) == 0  # Fix(sigma^3) is empty


def test_golden_mean_certificate_all_two_words():
    cert = dense_periods_certificate(GOLDEN, 0.25, 30)
    assert isinstance(cert, DensePeriodsCertificate)
    assert cert.N0 == 3  # no 2-cycle contains 00, 01 and 10
    for n, witness in cert.witnesses.items():
        assert len(witness.states) == n
        assert scanner_contains_all_words(GOLDEN, witness.states, 2)


def test_witnesses_prefer_exact_primitive_period():
    cert = dense_periods_certificate(FULL2, 0.5, 40)
    flagged = cert.nonprimitive_periods()
    for n in cert.witnesses:
        if n not in flagged:
            assert cert.witnesses[n].primitive_period == n


def test_horizon_too_small_error():
    # primitive 4-state wheel with loop: covering 2-word cycle is longer
    # than this tiny horizon
    wheel4 = TransitionMatrix([[1, 1, 0, 0], [0, 0, 1, 0],
                               [0, 0, 0, 1], [1, 0, 0, 0]])
    assert is_primitive(wheel4)
    with pytest.raises(HorizonTooSmallError):
        dense_periods_certificate(wheel4, 0.25, 3)


def test_refutation_for_reducible_matrix():
    two_loops = TransitionMatrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]])
    # essential but reducible: no single cycle sees both components' words
    result = dense_periods_certificate(two_loops, 0.5, 30)
    assert isinstance(result, DensePeriodsRefutation)
    assert result.exhaustive is True


@given(st.integers(2, 5), st.sampled_from([0.5, 0.25]), st.integers(0, 10**9))
def test_certificate_iff_primitive(size, epsilon, seed):
    matrix = random_essential(random.Random(seed), size, 0.4)
    result = dense_periods_certificate(matrix, epsilon, 100)
    assert isinstance(result, DensePeriodsCertificate) == is_primitive(matrix)


@given(st.integers(0, 10**9))
def test_every_witness_passes_independent_scanner(seed):
    rng = random.Random(seed)
    matrix = random_essential(rng, rng.choice([2, 3, 4]), 0.5)
    result = dense_periods_certificate(matrix, 0.25, 60)
    if isinstance(result, DensePeriodsRefutation):
        return
    for n in (result.N0, (result.N0 + result.n_max) // 2, result.n_max):
        witness = result.witnesses[n]
        assert len(witness.states) == n
        assert matrix.is_admissible_cycle(witness.states)
        assert scanner_contains_all_words(matrix, witness.states, result.word_length)


# -- component restriction ----------------------------------------------------


def test_homoclinic_restriction_single_component_matches():
    p = SymbolicCycle.from_word(FULL2, (0,))
    restricted = homoclinic_restricted_certificate(FULL2, p, 0.5, 20)
    plain = dense_periods_certificate(FULL2, 0.5, 20)
    assert restricted.N0 == plain.N0
    assert restricted.component == (0, 1)


def test_homoclinic_restriction_block_diagonal():
    block = TransitionMatrix([[1, 1, 0, 0], [1, 1, 0, 0],
                              [0, 0, 1, 1], [0, 0, 1, 1]])
    p = SymbolicCycle.from_word(block, (2,))
    cert = homoclinic_restricted_certificate(block, p, 0.5, 20)
    assert isinstance(cert, DensePeriodsCertificate)
    assert cert.component == (2, 3)
    for n in (cert.N0, cert.n_max):
        assert set(cert.witnesses[n].states) <= {2, 3}


def test_homoclinic_restriction_golden_mean():
    p = SymbolicCycle.from_word(GOLDEN, (0, 1))
    cert = homoclinic_restricted_certificate(GOLDEN, p, 0.25, 40)
    assert isinstance(cert, DensePeriodsCertificate)


# -- mixing verification --------------------------------------------------------


def brute_all_hits_from(matrix, u, v, horizon):
    """Smallest N with sigma^n([u]) meeting [v] for every n in [N, horizon],
    by plain matrix powers."""
    a = np.array(matrix.rows, dtype=np.int64)
    hits = {}
    for n in range(len(u), horizon + 1):
        steps = n - len(u) + 1
        hits[n] = bool(np.linalg.matrix_power(a, steps)[u[-1], v[0]] > 0)
    best = None
    for n in range(horizon, len(u) - 1, -1):
        if hits[n]:
            best = n
        else:
            break
    return best


def test_mixing_full_shift_pair():
    cert = dense_periods_certificate(FULL2, 0.5, 20)
    report = verify_mixing_from_certificate(FULL2, cert, [((0,), (1,))])[0]
    assert report.verified_all and not report.misses
    # ground truth: the full shift hits from n = 1 on
    assert brute_all_hits_from(FULL2, (0,), (1,), 20) == 1
    assert report.threshold >= 1


def test_mixing_wheel_thresholds_within_five():
    cert = dense_periods_certificate(WHEEL, 0.5, 40)
    pairs = [((a,), (b,)) for a in range(3) for b in range(3)]
    reports = verify_mixing_from_certificate(WHEEL, cert, pairs)
    for rep in reports:
        assert rep.verified_all and not rep.misses
        truth = brute_all_hits_from(WHEEL, rep.u, rep.v, 40)
        assert truth is not None and truth <= 5
        assert rep.threshold >= truth  # derived threshold never overclaims


def test_mixing_pair_too_fine_raises():
    cert = dense_periods_certificate(FULL2, 0.5, 20)  # m = 1
    with pytest.raises(CertificateTooCoarseError):
        verify_mixing_from_certificate(FULL2, cert, [((0, 1), (1,))])


def test_mixing_never_misses_above_threshold_random():
    rng = random.Random(7)
    for _ in range(10):
        matrix = random_essential(rng, rng.choice([2, 3, 4]), 0.55)
        if not is_primitive(matrix):
            continue
        cert = dense_periods_certificate(matrix, 0.5, 50)
        u = (rng.randrange(matrix.size),)
        v = (rng.randrange(matrix.size),)
        rep = verify_mixing_from_certificate(matrix, cert, [(u, v)])[0]
        assert rep.verified_all, f"miss above threshold for {matrix} {u} {v}"


# -- density helper -------------------------------------------------------------


def test_is_dense_cycle_agrees_with_scanner():
    for word in [(0, 1), (0, 0, 1), (0, 1, 1), (0,)]:
        for m in (1, 2):
            assert is_dense_cycle(FULL2, word, m) == \
                scanner_contains_all_words(FULL2, word, m)
