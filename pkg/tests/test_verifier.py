"""verify/scan orchestration, counterexample search and CRT reassembly."""

import pytest

from lehmer_congruences.bernoulli import BernoulliCache
from lehmer_congruences.errors import (
    NoCounterexampleInRange,
    PreconditionError,
)
from lehmer_congruences.report import CongruenceReport, IdentityId
from lehmer_congruences.verifier import (
    counterexample_search,
    crt_reassembly_check,
    scan,
    verify,
)

ALL_IDENTITIES = list(IdentityId)


def test_verify_pinned_examples():
    report = verify(IdentityId.THM_3, n=5)
    assert (report.lhs.rep, report.rhs.rep, report.modulus) == (13, 13, 25)
    assert report.holds and report.params == {"n": 5, "d": 3}
    report = verify(IdentityId.THM_6, n=5)
    assert (report.lhs.rep, report.rhs.rep) == (0, 0)
    report = verify(IdentityId.CAI_HALF, n=9)
    assert (report.lhs.rep, report.rhs.rep) == (22, 22)
    report = verify(IdentityId.LEHMER_HALF, n=3)
    assert report.holds
    report = verify(IdentityId.LEMMA_2_D3, n=35, p=5)
    assert (report.lhs.rep, report.rhs.rep) == (13, 13)
    assert report.params == {"n": 35, "p": 5, "d": 3, "alpha": 1}
    report = verify(IdentityId.MOEBIUS_DECOMP, n=35, p=5, d=3)
    assert report.holds and report.modulus == 25


def test_verify_preconditions_name_the_predicate():
    with pytest.raises(PreconditionError, match="gcd"):
        verify(IdentityId.THM_3, n=4)
    with pytest.raises(PreconditionError, match="odd prime"):
        verify(IdentityId.LEHMER_HALF, n=9)
    with pytest.raises(PreconditionError, match="prime >= 5"):
        verify(IdentityId.LEHMER_P3, n=9)
    with pytest.raises(PreconditionError, match="required"):
        verify(IdentityId.THM_3)
    with pytest.raises(PreconditionError, match="required"):
        verify(IdentityId.LEMMA_3, n=5)
    with pytest.raises(PreconditionError, match="required"):
        verify(IdentityId.MOEBIUS_DECOMP, n=35, p=5)


def test_verify_every_identity_dispatches():
    # one admissible parameter set per identity: the catalog is closed
    calls = {
        IdentityId.LEHMER_HALF: dict(n=5),
        IdentityId.CAI_HALF: dict(n=9),
        IdentityId.LEHMER_P3: dict(n=7),
        IdentityId.LEHMER_P4: dict(n=7),
        IdentityId.LEHMER_P6: dict(n=7),
        IdentityId.THM_3: dict(n=25),
        IdentityId.THM_4: dict(n=25),
        IdentityId.THM_6: dict(n=25),
        IdentityId.LEMMA_1: dict(p=7),
        IdentityId.LEMMA_2_D3: dict(n=35, p=5),
        IdentityId.LEMMA_2_D4: dict(n=35, p=7),
        IdentityId.LEMMA_2_D6: dict(n=25, p=5),
        IdentityId.LEMMA_3: dict(n=7, a=2),
        IdentityId.LEMMA_4: dict(n=55, a=3, p=11),
        IdentityId.MOEBIUS_DECOMP: dict(n=35, p=5, d=4),
    }
    assert set(calls) == set(ALL_IDENTITIES)
    for identity, kwargs in calls.items():
        report = verify(identity, **kwargs)
        assert report.holds, identity
        assert report.identity is identity


def test_verify_exact_oracle_spotchecks():
    for identity, kwargs in (
        (IdentityId.THM_3, dict(n=35)),
        (IdentityId.THM_6, dict(n=49)),
        (IdentityId.CAI_HALF, dict(n=15)),
        (IdentityId.LEHMER_HALF, dict(n=13)),
        (IdentityId.LEMMA_2_D4, dict(n=35, p=5)),
        (IdentityId.LEMMA_3, dict(n=25, a=7)),
        (IdentityId.LEMMA_4, dict(n=35, a=2, p=7)),
        (IdentityId.MOEBIUS_DECOMP, dict(n=55, p=5, d=6)),
        (IdentityId.LEMMA_1, dict(p=11)),
    ):
        report = verify(identity, exact_oracle=True, **kwargs)
        assert report.holds, identity


def test_scan_theorem_range():
    reports = scan(IdentityId.THM_3, 5, 55)
    # admissible n: gcd(n, 6) = 1 in [5, 55], inclusive on both ends
    assert len(reports) == 18
    assert [r.params["n"] for r in reports] == [
        5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49, 53, 55,
    ]
    assert all(r.holds for r in reports)
    assert scan(IdentityId.THM_3, 10, 9) == []


def test_scan_prime_identities():
    reports = scan(IdentityId.LEHMER_P6, 5, 100)
    assert [r.params["n"] for r in reports] == [
        5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
        73, 79, 83, 89, 97,
    ]
    assert all(r.holds for r in reports)
    # the half-range identity includes p = 3
    reports = scan(IdentityId.LEHMER_HALF, 3, 30)
    assert [r.params["n"] for r in reports] == [3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert all(r.holds for r in reports)


def test_scan_lemma2_needs_p():
    reports = scan(IdentityId.LEMMA_2_D3, 2, 200, p=5)
    assert [r.params["n"] for r in reports] == [5, 25, 35, 55, 65, 85, 95, 115, 125, 145, 155, 175, 185]
    assert all(r.holds for r in reports)
    with pytest.raises(PreconditionError, match="p is required"):
        scan(IdentityId.LEMMA_2_D3, 2, 100)


def test_scan_skip_reports_under_cap():
    # B_{p(p-1)} outgrows a tight cap; the scan must say so, not vanish
    cache = BernoulliCache(max_index=120)
    reports = scan(IdentityId.LEMMA_1, 5, 13, cache=cache)
    by_p = {r.params["p"]: r for r in reports}
    assert set(by_p) == {5, 7, 11, 13}
    assert by_p[5].holds and by_p[7].holds and by_p[11].holds
    assert by_p[13].holds is None
    assert "capped" in by_p[13].skipped_reason
    assert by_p[13].modulus == 169


def test_scan_custom_predicate_skips_inadmissible():
    # a permissive predicate routes precondition failures into skip reports
    reports = scan(IdentityId.THM_3, 8, 10, predicate=lambda n: True)
    assert [r.params["n"] for r in reports] == [8, 9, 10]
    assert all(r.holds is None for r in reports)
    assert all("gcd" in r.skipped_reason for r in reports)


def test_scan_deterministic():
    a = scan(IdentityId.CAI_HALF, 3, 151)
    b = scan(IdentityId.CAI_HALF, 3, 151)
    assert a == b


def test_scan_workers_match_serial():
    serial = scan(IdentityId.THM_4, 5, 251)
    parallel = scan(IdentityId.THM_4, 5, 251, workers=4)
    assert serial == parallel
    serial = scan(IdentityId.LEMMA_1, 3, 23, workers=1)
    parallel = scan(IdentityId.LEMMA_1, 3, 23, workers=3)
    assert serial == parallel


def test_counterexample_thm3_class4():
    trail = counterexample_search(IdentityId.THM_3, 4)
    last = trail[-1]
    assert last.params["n"] == 4
    assert (last.lhs.rep, last.rhs.rep, last.modulus) == (1, 13, 16)
    assert last.holds is False


def test_counterexample_thm4_class3():
    trail = counterexample_search(IdentityId.THM_4, 3)
    last = trail[-1]
    assert last.params["n"] == 3
    assert (last.lhs.rep, last.rhs.rep, last.modulus) == (0, 3, 9)
    assert last.holds is False


def test_counterexample_thm3_class2():
    trail = counterexample_search(IdentityId.THM_3, 2, n_to=50)
    last = trail[-1]
    # first failure: derived once via the exact-rational route, frozen here
    assert last.params["n"] == 8
    assert (last.lhs.rep, last.rhs.rep, last.modulus) == (13, 61, 64)
    # n = 2 holds trivially on the way (both sides vanish mod 4)
    first = trail[0]
    assert first.params["n"] == 2 and first.holds


def test_counterexample_skip_reports():
    # class 0 mod 6: q_n(3) never exists, so every n is skipped and the
    # search exhausts its range
    with pytest.raises(NoCounterexampleInRange):
        counterexample_search(IdentityId.THM_3, 0, n_to=60)
    # a predicate filter behaves like its residue class
    trail = counterexample_search(IdentityId.THM_4, lambda n: n % 6 == 3, n_to=100)
    assert trail[-1].holds is False
    assert trail[-1].params["n"] == 3
    # thm6 is accepted, but its right side needs both q_n(2) and q_n(3),
    # so every n in a failing class is a skip and the bound runs out
    with pytest.raises(NoCounterexampleInRange):
        counterexample_search(IdentityId.THM_6, 2, n_to=60)
    with pytest.raises(PreconditionError):
        counterexample_search(IdentityId.LEMMA_3, 1)


def test_counterexample_exhaustion():
    with pytest.raises(NoCounterexampleInRange):
        counterexample_search(IdentityId.THM_3, 1, n_to=40)


def test_crt_reassembly():
    assert crt_reassembly_check(35, 3)
    assert crt_reassembly_check(55, 6)
    assert crt_reassembly_check(7, 4)  # degenerate single prime
    assert crt_reassembly_check(1225, 3)
    with pytest.raises(PreconditionError):
        crt_reassembly_check(35, 5)
    with pytest.raises(PreconditionError):
        crt_reassembly_check(15, 3)  # gcd(n, 6) > 1


def test_reports_are_value_objects():
    a = verify(IdentityId.THM_3, n=5)
    b = verify(IdentityId.THM_3, n=5)
    assert a == b and a is not b
    assert isinstance(a, CongruenceReport)
