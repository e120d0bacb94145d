from itertools import combinations
from math import comb

import pytest
from conftest import full_scan_translates

from torus_spectra import (
    AntipodalError,
    ContractError,
    DegenerateSimplexError,
    MembershipError,
    ResourceLimitError,
    enumerate_shell,
    find_translates,
    sweep_to_json,
    validate_simplex,
    verify_lemma,
)
from torus_spectra.lattice import negate
from torus_spectra.lemma import affine_rank


# --------------------------------------------------------------------------
# simplex validation


def test_validate_simplex_accepts_worked_pair():
    shell = enumerate_shell(2, 25)
    simplex = validate_simplex(shell, [(5, 0), (4, 3)])
    assert simplex.vertices == ((5, 0), (4, 3))


def test_validate_simplex_rejects_antipodal():
    shell = enumerate_shell(2, 25)
    with pytest.raises(AntipodalError):
        validate_simplex(shell, [(5, 0), (-5, 0)])
    shell3 = enumerate_shell(3, 3)
    with pytest.raises(AntipodalError):
        validate_simplex(shell3, [(1, 1, 1), (-1, -1, -1), (1, -1, 1)])


def test_validate_simplex_rejects_off_shell_and_duplicates():
    shell = enumerate_shell(2, 25)
    with pytest.raises(MembershipError):
        validate_simplex(shell, [(5, 0), (4, 4)])
    with pytest.raises(DegenerateSimplexError):
        validate_simplex(shell, [(5, 0), (5, 0)])
    with pytest.raises(ContractError):
        validate_simplex(shell, [(5, 0)])


def test_validate_simplex_rejects_coplanar_quadruple():
    # four points in the 2-plane x1 = x2 = 1: affine rank 2 < 3
    shell = enumerate_shell(4, 4)
    quad = [(1, 1, 1, 1), (1, 1, 1, -1), (1, 1, -1, 1), (1, 1, -1, -1)]
    with pytest.raises(DegenerateSimplexError):
        validate_simplex(shell, quad)


def test_affine_rank_exact():
    assert affine_rank(((0, 0), (1, 0))) == 1
    assert affine_rank(((1, 1, 1), (2, 2, 2), (3, 3, 3))) == 1
    assert affine_rank(((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))) == 3
    # scaling-sensitive case that would defeat a float tolerance
    assert affine_rank(((0, 0, 0), (10**9, 1, 0), (2 * 10**9, 2, 0))) == 1


# --------------------------------------------------------------------------
# translate search


def test_worked_translate_example():
    shell = enumerate_shell(2, 25)
    report = find_translates(validate_simplex(shell, [(5, 0), (4, 3)]))
    assert report.translates == ((1, -3), (9, 3))
    assert report.edge_translates == ((1, -3),)
    assert report.non_edge_count == 1
    assert report.budget == 2
    assert not report.violated


def test_translates_are_sound():
    shell = enumerate_shell(3, 9)
    simplex = validate_simplex(shell, [(3, 0, 0), (2, 2, 1), (1, 2, 2)])
    report = find_translates(simplex)
    for tau in report.translates:
        assert any(tau)
        for v in simplex.vertices:
            minus = tuple(x - t for x, t in zip(v, tau))
            plus = tuple(x + t for x, t in zip(v, tau))
            assert minus in shell.index or plus in shell.index


def test_translates_sign_class_unique_and_sorted():
    shell = enumerate_shell(3, 41)
    simplex = validate_simplex(shell, [(6, 2, 1), (5, 4, 0), (4, 4, 3)])
    report = find_translates(simplex)
    assert list(report.translates) == sorted(report.translates)
    as_set = set(report.translates)
    for tau in report.translates:
        assert negate(tau) not in as_set


@pytest.mark.parametrize(
    "dim,lam,verts",
    [
        (2, 25, [(5, 0), (4, 3)]),
        (2, 25, [(3, 4), (0, -5)]),
        (3, 9, [(3, 0, 0), (2, 2, 1), (1, 2, 2)]),
        (3, 41, [(6, 2, 1), (5, 4, 0), (4, 4, 3)]),
        (4, 4, [(2, 0, 0, 0), (1, 1, 1, 1), (1, 1, -1, 1), (0, 2, 0, 0)]),
    ],
)
def test_translates_complete_against_full_scan(dim, lam, verts):
    shell = enumerate_shell(dim, lam)
    report = find_translates(validate_simplex(shell, verts))
    assert set(report.translates) == full_scan_translates(shell, verts)


# --------------------------------------------------------------------------
# sweeps


def test_exhaustive_pairs_2_25():
    shell = enumerate_shell(2, 25)
    report = verify_lemma(shell, mode="exhaustive")
    assert report.simplices_checked == 60  # 66 pairs minus the 6 antipodal ones
    assert report.skipped_antipodal == 6
    assert report.skipped_degenerate == 0
    assert report.max_nonedge_count <= 2
    assert not report.violations
    total = report.simplices_checked + report.skipped_antipodal + report.skipped_degenerate
    assert total == comb(len(shell), 2)


def test_exhaustive_triples_3_9():
    shell = enumerate_shell(3, 9)
    report = verify_lemma(shell, mode="exhaustive")
    assert report.budget == 4
    assert report.max_nonedge_count <= 4
    assert not report.violations
    assert sum(report.histogram.values()) == report.simplices_checked
    total = report.simplices_checked + report.skipped_antipodal + report.skipped_degenerate
    assert total == comb(len(shell), 3)


def test_exhaustive_agrees_with_reference_path():
    shell = enumerate_shell(3, 9)
    report = verify_lemma(shell, mode="exhaustive")
    hist: dict[int, int] = {}
    checked = 0
    for verts in combinations(shell.points, 3):
        try:
            simplex = validate_simplex(shell, verts)
        except ContractError:
            continue
        checked += 1
        ne = find_translates(simplex).non_edge_count
        hist[ne] = hist.get(ne, 0) + 1
    assert checked == report.simplices_checked
    assert hist == report.histogram


def test_empty_and_tiny_shells():
    report = verify_lemma(enumerate_shell(2, 3), mode="exhaustive")
    assert report.simplices_checked == 0
    assert not report.violations
    # lambda 0: single point, fewer points than vertices needed
    report = verify_lemma(enumerate_shell(3, 0), mode="exhaustive")
    assert report.simplices_checked == 0


def test_budget_depends_only_on_dimension():
    r1 = verify_lemma(enumerate_shell(3, 9), mode="exhaustive")
    r2 = verify_lemma(enumerate_shell(3, 41), mode="exhaustive")
    assert r1.budget == r2.budget == 4


def test_extra_points_same_budget():
    shell = enumerate_shell(3, 9)
    report = verify_lemma(shell, mode="exhaustive", extra_points=1)
    assert report.budget == 4
    assert report.max_nonedge_count <= 4
    assert not report.violations
    total = report.simplices_checked + report.skipped_antipodal + report.skipped_degenerate
    assert total == comb(len(shell), 4)


def test_exhaustive_guard_directs_to_sampled():
    shell = enumerate_shell(5, 5)
    with pytest.raises(ResourceLimitError, match="sampled"):
        verify_lemma(shell, mode="exhaustive")


def test_sampled_is_deterministic():
    shell = enumerate_shell(5, 5)
    r1 = verify_lemma(shell, mode="sampled", count=2000, seed=11)
    r2 = verify_lemma(shell, mode="sampled", count=2000, seed=11)
    assert r1 == r2
    assert r1.simplices_checked == 2000
    assert r1.max_nonedge_count <= r1.budget
    r3 = verify_lemma(shell, mode="sampled", count=2000, seed=12)
    assert r3.histogram != r1.histogram


def test_sampled_requires_count():
    with pytest.raises(ContractError):
        verify_lemma(enumerate_shell(5, 5), mode="sampled")
    with pytest.raises(ContractError):
        verify_lemma(enumerate_shell(5, 5), mode="bogus")


def test_threads_do_not_change_results():
    shell = enumerate_shell(3, 41)
    assert verify_lemma(shell, mode="exhaustive", threads=2) == verify_lemma(
        shell, mode="exhaustive", threads=1
    )
    shell5 = enumerate_shell(5, 5)
    assert verify_lemma(shell5, mode="sampled", count=1500, seed=3, threads=2) == verify_lemma(
        shell5, mode="sampled", count=1500, seed=3, threads=1
    )


def test_known_budget_excess_on_4_12_is_reported_and_sound():
    """shell(4,12) genuinely exceeds the 2^(n-1) budget under per-vertex signs.

    Mixed-sign configurations whose sign-flipped vertex sets degenerate into
    a 2-plane admit 9 translate classes against a budget of 8. The sweep
    must surface these verbatim rather than hide them, and every reported
    translate must survive an independent re-check.
    """
    shell = enumerate_shell(4, 12)
    report = verify_lemma(shell, mode="sampled", count=4000, seed=0)
    assert report.max_nonedge_count == 9
    assert report.violations
    for violation in report.violations:
        assert violation.violated
        assert violation.non_edge_count > violation.budget
        verts = violation.simplex.vertices
        assert set(violation.translates) == full_scan_translates(shell, verts)


def test_sweep_json_schema():
    report = verify_lemma(enumerate_shell(2, 25), mode="exhaustive")
    obj = sweep_to_json(report)
    assert obj["dim"] == 2 and obj["lambda"] == 25 and obj["mode"] == "exhaustive"
    assert obj["checked"] == 60
    assert obj["skipped"] == {"degenerate": 0, "antipodal": 6}
    assert obj["budget"] == 2
    assert obj["violations"] == []
    assert sum(obj["histogram"].values()) == 60
