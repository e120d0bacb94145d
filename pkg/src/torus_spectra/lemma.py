"""Translate-budget verification for lattice simplices on sphere shells.

Fix m >= n lattice points {v_i} on a shell in Z^n, pairwise distinct, no
two antipodal, affinely spanning a hyperplane (a codimension-one simplex
when m = n). A nonzero vector tau is an admissible translate when every
vertex moves onto the shell under tau with some per-vertex sign:

    for all i:  v_i - tau  or  v_i + tau  lies on the shell,

with tau and -tau identified (canonical representative: first nonzero
coordinate positive). The conjectured budget for the number of admissible
classes, not counting chords +-(v_i - v_j) of the simplex itself, is
2^(n-1), independent of the eigenvalue. This module verifies it by
exhaustive or sampled search over vertex subsets and preserves any
counterexample verbatim.

Candidate generation is anchored at one vertex: an admissible tau must
move the anchor onto the shell, so {+-(v_1 - eta) : eta in shell} already
contains every admissible class. All arithmetic is exact; affine rank is
decided by fraction-free integer elimination, never by a floating-point
tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, isqrt

import numpy as np

from ._packing import pack_rows, pack_spec
from .errors import (
    AntipodalError,
    ContractError,
    DegenerateSimplexError,
    MembershipError,
    ResourceLimitError,
)
from .lattice import Point, SphereShell, enumerate_shell, negate, sign_canonical

EXHAUSTIVE_GUARD = 10**7
SAMPLE_ATTEMPT_FACTOR = 50


@dataclass(frozen=True)
class Simplex:
    """Validated vertex tuple on a shell; construct via validate_simplex."""

    shell: SphereShell
    vertices: tuple[Point, ...]


@dataclass(frozen=True)
class TranslateReport:
    """Admissible translate classes of one simplex versus the 2^(n-1) budget.

    `translates` holds one sign-canonical representative per class in
    lexicographic order; `edge_translates` is the sub-list matching some
    +-(v_i - v_j). The violation predicate counts only non-edge classes.
    """

    simplex: Simplex
    translates: tuple[Point, ...]
    edge_translates: tuple[Point, ...]
    budget: int
    violated: bool

    @property
    def non_edge_count(self) -> int:
        return len(self.translates) - len(self.edge_translates)


@dataclass(frozen=True)
class LemmaSweepReport:
    dim: int
    lam: int
    mode: str
    extra_points: int
    budget: int
    simplices_checked: int
    skipped_degenerate: int
    skipped_antipodal: int
    max_nonedge_count: int
    histogram: dict[int, int]
    violations: tuple[TranslateReport, ...]
    sample_count: int | None = None
    seed: int | None = None
    attempts: int = 0


def _diff(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def affine_rank(vertices: tuple[Point, ...]) -> int:
    """Rank of {v_i - v_0}, by exact integer elimination with cross-multiplied rows."""
    rows = [list(_diff(v, vertices[0])) for v in vertices[1:]]
    ncols = len(vertices[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                a, b = prow[col], rows[r][col]
                rows[r] = [a * x - b * y for x, y in zip(rows[r], prow)]
        rank += 1
    return rank


def validate_simplex(shell: SphereShell, vertices: list[Point] | tuple[Point, ...]) -> Simplex:
    """Check the simplex hypotheses exactly; raises on any failure.

    Requires exactly dim vertices, all on the shell, pairwise distinct, no
    antipodal pair, and affine rank dim - 1.
    """
    verts = tuple(tuple(v) for v in vertices)
    if len(verts) != shell.dim:
        raise ContractError(f"expected {shell.dim} vertices, got {len(verts)}")
    for v in verts:
        if v not in shell.index:
            raise MembershipError(f"vertex {v} is not on shell({shell.dim}, {shell.lam})")
    for a, b in combinations(verts, 2):
        if a == b:
            raise DegenerateSimplexError(f"duplicate vertex {a}")
        if negate(a) == b:
            raise AntipodalError(f"vertices {a} and {b} are diametrically opposite")
    rank = affine_rank(verts)
    if rank < shell.dim - 1:
        raise DegenerateSimplexError(
            f"affine rank {rank} < {shell.dim - 1}: vertices lie in a smaller subspace"
        )
    return Simplex(shell=shell, vertices=verts)


def _translate_sets(
    shell: SphereShell, verts: tuple[Point, ...]
) -> tuple[tuple[Point, ...], tuple[Point, ...]]:
    """Reference path: admissible translate classes of a vertex tuple.

    Scans the anchored candidate set with plain membership queries; used
    for single simplices and to materialize sweep findings independently
    of the batched fast path.
    """
    anchor = verts[0]
    candidates = sorted({sign_canonical(_diff(anchor, q)) for q in shell.points if q != anchor})
    translates = []
    for t in candidates:
        if all(_diff(v, t) in shell.index or _add(v, t) in shell.index for v in verts):
            translates.append(t)
    edges = {sign_canonical(_diff(a, b)) for a, b in combinations(verts, 2)}
    edge_translates = tuple(t for t in translates if t in edges)
    return tuple(translates), edge_translates


def find_translates(simplex: Simplex) -> TranslateReport:
    """All admissible translate classes of a validated simplex.

    Deterministic: output is sorted lexicographically on the canonical
    representatives.
    """
    translates, edge_translates = _translate_sets(simplex.shell, simplex.vertices)
    budget = 2 ** (simplex.shell.dim - 1)
    return TranslateReport(
        simplex=simplex,
        translates=translates,
        edge_translates=edge_translates,
        budget=budget,
        violated=len(translates) - len(edge_translates) > budget,
    )


# ---------------------------------------------------------------------------
# Exhaustive sweeps. Subsets are enumerated as index chains i_1 < ... < i_m
# over the canonical point order. The recursion carries the surviving
# candidate classes of the prefix (a tau admissible for the subset must be
# admissible for every prefix), the echelon basis of difference rows for
# exact rank pruning, and a bitmask of forbidden (antipodal) partners, so
# invalid or hopeless branches are cut with their subset counts tallied.


class _SweepTables:
    def __init__(self, shell: SphereShell):
        pts = shell.points
        n = len(pts)
        self.pts = pts
        self.index = {p: i for i, p in enumerate(pts)}
        self.neg = [self.index[negate(p)] for p in pts]
        tau_id: dict[Point, int] = {}
        taus: list[Point] = []
        cand: list[list[int]] = []
        for i, p in enumerate(pts):
            seen = set()
            for j, q in enumerate(pts):
                if i == j:
                    continue
                t = sign_canonical(_diff(p, q))
                tid = tau_id.get(t)
                if tid is None:
                    tid = len(taus)
                    tau_id[t] = tid
                    taus.append(t)
                seen.add(tid)
            cand.append(sorted(seen, key=taus.__getitem__))
        adm = [0] * len(taus)
        index = self.index
        for tid, t in enumerate(taus):
            mask = 0
            for i, p in enumerate(pts):
                if _diff(p, t) in index or _add(p, t) in index:
                    mask |= 1 << i
            adm[tid] = mask
        self.tau_id = tau_id
        self.taus = taus
        self.cand = cand
        self.adm = adm
        self.n = n
        self._pair_cache: dict[tuple[int, int], int] = {}

    def pair_tau(self, i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        tid = self._pair_cache.get(key)
        if tid is None:
            tid = self.tau_id[sign_canonical(_diff(self.pts[key[0]], self.pts[key[1]]))]
            self._pair_cache[key] = tid
        return tid


@lru_cache(maxsize=4)
def _sweep_tables(dim: int, lam: int) -> _SweepTables:
    return _SweepTables(enumerate_shell(dim, lam))


def _reduce_row(row: list[int], rows: list[tuple[int, list[int]]]):
    """Reduce against echelon rows; returns (pivot_col, row) or None if dependent."""
    for pivcol, prow in rows:
        if row[pivcol]:
            a, b = prow[pivcol], row[pivcol]
            row = [a * x - b * y for x, y in zip(row, prow)]
    for c, v in enumerate(row):
        if v:
            g = 0
            for x in row:
                g = math.gcd(g, x)
            if g > 1:
                row = [x // g for x in row]
            return (c, row)
    return None


def _exhaustive_chunk(dim: int, lam: int, m: int, lo: int, hi: int) -> dict:
    """Sweep all index chains whose first index lies in [lo, hi)."""
    tb = _sweep_tables(dim, lam)
    n, pts, neg = tb.n, tb.pts, tb.neg
    cand, adm = tb.cand, tb.adm
    need_rank = dim - 1
    checked = 0
    sk_anti = 0
    sk_degen = 0
    max_ne = 0
    hist: dict[int, int] = {}
    violations: list[tuple[int, ...]] = []
    edge_count: dict[int, int] = {}
    chosen: list[int] = []

    def recurse(k: int, start: int, stop: int, candids, rows, forb: int) -> None:
        nonlocal checked, sk_anti, sk_degen, max_ne
        remaining = m - k - 1
        for j in range(start, stop):
            if (forb >> j) & 1:
                sk_anti += comb(n - 1 - j, remaining)
                continue
            if k == 0:
                nrows = []
                ncand = cand[j]
            else:
                red = _reduce_row([a - b for a, b in zip(pts[j], pts[chosen[0]])], rows)
                nrank = len(rows) + (0 if red is None else 1)
                if nrank + remaining < need_rank:
                    sk_degen += comb(n - 1 - j, remaining)
                    continue
                nrows = rows if red is None else rows + [red]
                ncand = [t for t in candids if (adm[t] >> j) & 1]
            added = []
            for c in chosen:
                tid = tb.pair_tau(c, j)
                edge_count[tid] = edge_count.get(tid, 0) + 1
                added.append(tid)
            chosen.append(j)
            if k + 1 == m:
                checked += 1
                ne = sum(1 for t in ncand if t not in edge_count)
                hist[ne] = hist.get(ne, 0) + 1
                if ne > max_ne:
                    max_ne = ne
                if ne > 2 ** (dim - 1):
                    violations.append(tuple(chosen))
            else:
                recurse(k + 1, j + 1, n, ncand, nrows, forb | (1 << neg[j]))
            chosen.pop()
            for tid in added:
                if edge_count[tid] == 1:
                    del edge_count[tid]
                else:
                    edge_count[tid] -= 1

    recurse(0, lo, hi, None, [], 0)
    return {
        "checked": checked,
        "antipodal": sk_anti,
        "degenerate": sk_degen,
        "max_ne": max_ne,
        "hist": hist,
        "violations": violations,
    }


# ---------------------------------------------------------------------------
# Sampled sweeps. Membership tests run vectorized over the anchored
# candidate array through packed int64 keys and binary search, shrinking
# the surviving candidates vertex by vertex. Falls back to plain set
# membership when coordinates are too large to pack.


class _SampleTables:
    def __init__(self, shell: SphereShell):
        self.shell = shell
        pts = shell.points
        self.n = len(pts)
        self.arr = np.array(pts, dtype=np.int64).reshape(self.n, shell.dim)
        index = {p: i for i, p in enumerate(pts)}
        self.neg = np.array([index[negate(p)] for p in pts], dtype=np.intp)
        # query rows v +- tau stay within 3*isqrt(lam) componentwise
        self.spec = pack_spec(shell.dim, 3 * isqrt(shell.lam) if shell.lam else 0)
        if self.spec is not None:
            bias, radix = self.spec
            self.keys = pack_rows(self.arr, bias, radix)
        self._cand: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def cand(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        hit = self._cand.get(i)
        if hit is not None:
            return hit
        d = self.arr[i][None, :] - np.delete(self.arr, i, axis=0)
        first = (d != 0).argmax(axis=1)
        s = np.take_along_axis(d, first[:, None], axis=1)[:, 0]
        d = d * np.where(s < 0, -1, 1)[:, None]
        bias, radix = self.spec
        keys = pack_rows(d, bias, radix)
        uniq, uidx = np.unique(keys, return_index=True)
        out = (np.ascontiguousarray(d[uidx]), uniq)
        self._cand[i] = out
        return out

    def member_mask(self, rows: np.ndarray) -> np.ndarray:
        bias, radix = self.spec
        k = pack_rows(rows, bias, radix)
        pos = np.searchsorted(self.keys, k)
        pos[pos == self.n] = 0
        return self.keys[pos] == k

    def pack_point(self, p: Point) -> int:
        bias, radix = self.spec
        key = 0
        for c in p:
            key = key * radix + (c + bias)
        return key


@lru_cache(maxsize=4)
def _sample_tables(dim: int, lam: int) -> _SampleTables:
    return _SampleTables(enumerate_shell(dim, lam))


def _evaluate_sample(tb: _SampleTables, idx: tuple[int, ...], m: int) -> tuple[str, int]:
    """Outcome of one sampled subset: ('a'|'d', 0) skip or ('ok', nonedge count)."""
    if {int(tb.neg[i]) for i in idx} & set(idx):
        return ("a", 0)
    verts = [tb.shell.points[i] for i in idx]
    if affine_rank(tuple(verts)) < tb.shell.dim - 1:
        return ("d", 0)
    if tb.spec is None:
        return _evaluate_sample_slow(tb.shell, verts)
    taus, tkeys = tb.cand(idx[0])
    for i in idx[1:]:
        v = tb.arr[i][None, :]
        stacked = np.concatenate([v - taus, v + taus])
        mem = tb.member_mask(stacked)
        keep = mem[: len(taus)] | mem[len(taus):]
        taus = taus[keep]
        tkeys = tkeys[keep]
        if len(taus) == 0:
            return ("ok", 0)
    edge_keys = {
        tb.pack_point(sign_canonical(_diff(a, b))) for a, b in combinations(verts, 2)
    }
    ne = sum(1 for k in tkeys.tolist() if k not in edge_keys)
    return ("ok", ne)


def _evaluate_sample_slow(shell: SphereShell, verts: list[Point]) -> tuple[str, int]:
    translates, edge_translates = _translate_sets(shell, tuple(verts))
    return ("ok", len(translates) - len(edge_translates))


def _sampled_chunk(dim: int, lam: int, m: int, subsets: list[tuple[int, ...]]) -> list[tuple[str, int]]:
    tb = _sample_tables(dim, lam)
    return [_evaluate_sample(tb, idx, m) for idx in subsets]


def _split_ranges(n: int, parts: int) -> list[tuple[int, int]]:
    # Front-load the ranges: low first indices own the deepest subtrees.
    bounds = [round(n * (1 - (1 - f / parts) ** 0.5)) for f in range(parts + 1)]
    bounds[0], bounds[-1] = 0, n
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]


def _run_chunks(fn, argses, threads: int):
    if threads <= 1 or len(argses) <= 1:
        return [fn(*a) for a in argses]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, *zip(*argses)))


def verify_lemma(
    shell: SphereShell,
    mode: str = "exhaustive",
    count: int | None = None,
    seed: int = 0,
    extra_points: int = 0,
    threads: int = 1,
) -> LemmaSweepReport:
    """Sweep vertex subsets of the shell and tally translate counts.

    Exhaustive mode visits every subset of size dim + extra_points (guarded
    at 10^7 combinations); sampled mode draws seeded random subsets until
    `count` valid simplices have been checked (or a 50x attempt cap is
    hit). Invalid subsets are skipped and tallied by reason, antipodal
    checked before degeneracy. The result is deterministic for a fixed
    seed and identical for any thread count; violations, if any exist, are
    re-derived through the reference membership path and preserved
    verbatim.
    """
    if extra_points < 0:
        raise ContractError(f"extra_points must be >= 0, got {extra_points}")
    m = shell.dim + extra_points
    budget = 2 ** (shell.dim - 1)
    base = dict(
        dim=shell.dim, lam=shell.lam, mode=mode, extra_points=extra_points, budget=budget
    )
    n = len(shell)

    if mode == "exhaustive":
        if n >= m:
            total = comb(n, m)
            if total > EXHAUSTIVE_GUARD:
                raise ResourceLimitError(
                    f"{total} subsets of size {m} exceed the exhaustive guard of {EXHAUSTIVE_GUARD}; "
                    "use sampled mode"
                )
        if n < m:
            return LemmaSweepReport(
                **base, simplices_checked=0, skipped_degenerate=0, skipped_antipodal=0,
                max_nonedge_count=0, histogram={}, violations=(),
            )
        ranges = _split_ranges(n, max(1, threads * 4)) if threads > 1 else [(0, n)]
        argses = [(shell.dim, shell.lam, m, lo, hi) for lo, hi in ranges]
        parts = _run_chunks(_exhaustive_chunk, argses, threads)
        checked = sum(p["checked"] for p in parts)
        sk_a = sum(p["antipodal"] for p in parts)
        sk_d = sum(p["degenerate"] for p in parts)
        max_ne = max((p["max_ne"] for p in parts), default=0)
        hist: dict[int, int] = {}
        for p in parts:
            for k, v in p["hist"].items():
                hist[k] = hist.get(k, 0) + v
        tables = _sweep_tables(shell.dim, shell.lam)
        violations = []
        for p in parts:
            for idx in p["violations"]:
                violations.append(_materialize(shell, tuple(tables.pts[i] for i in idx), budget))
        return LemmaSweepReport(
            **base, simplices_checked=checked, skipped_degenerate=sk_d,
            skipped_antipodal=sk_a, max_nonedge_count=max_ne,
            histogram=dict(sorted(hist.items())), violations=tuple(violations),
        )

    if mode != "sampled":
        raise ContractError(f"unknown mode {mode!r}; expected exhaustive or sampled")
    if count is None or count < 1:
        raise ContractError("sampled mode requires a positive count")
    if n < m:
        return LemmaSweepReport(
            **base, simplices_checked=0, skipped_degenerate=0, skipped_antipodal=0,
            max_nonedge_count=0, histogram={}, violations=(), sample_count=count, seed=seed,
        )

    rng = np.random.default_rng(seed)
    cap = SAMPLE_ATTEMPT_FACTOR * count
    checked = sk_a = sk_d = attempts = 0
    max_ne = 0
    hist = {}
    viol_subsets: list[tuple[Point, ...]] = []
    while checked < count and attempts < cap:
        want = min(cap - attempts, max(1024, count - checked + (count - checked) // 8))
        batch = [
            tuple(sorted(int(x) for x in rng.choice(n, size=m, replace=False)))
            for _ in range(want)
        ]
        if threads > 1:
            slices = np.array_split(np.arange(len(batch)), threads)
            argses = [
                (shell.dim, shell.lam, m, [batch[i] for i in sl]) for sl in slices if len(sl)
            ]
            outcomes = [o for part in _run_chunks(_sampled_chunk, argses, threads) for o in part]
        else:
            outcomes = _sampled_chunk(shell.dim, shell.lam, m, batch)
        for idx, (status, ne) in zip(batch, outcomes):
            attempts += 1
            if status == "a":
                sk_a += 1
                continue
            if status == "d":
                sk_d += 1
                continue
            checked += 1
            hist[ne] = hist.get(ne, 0) + 1
            if ne > max_ne:
                max_ne = ne
            if ne > budget:
                viol_subsets.append(tuple(shell.points[i] for i in idx))
            if checked >= count:
                break
    violations = tuple(_materialize(shell, verts, budget) for verts in viol_subsets)
    return LemmaSweepReport(
        **base, simplices_checked=checked, skipped_degenerate=sk_d, skipped_antipodal=sk_a,
        max_nonedge_count=max_ne, histogram=dict(sorted(hist.items())),
        violations=violations, sample_count=count, seed=seed, attempts=attempts,
    )


def _materialize(shell: SphereShell, verts: tuple[Point, ...], budget: int) -> TranslateReport:
    translates, edge_translates = _translate_sets(shell, verts)
    return TranslateReport(
        simplex=Simplex(shell=shell, vertices=verts),
        translates=translates,
        edge_translates=edge_translates,
        budget=budget,
        violated=len(translates) - len(edge_translates) > budget,
    )


def translate_report_to_json(report: TranslateReport) -> dict:
    return {
        "vertices": [list(v) for v in report.simplex.vertices],
        "translates": [list(t) for t in report.translates],
        "edge_translates": [list(t) for t in report.edge_translates],
        "non_edge_count": report.non_edge_count,
        "budget": report.budget,
        "violated": report.violated,
    }


def sweep_to_json(report: LemmaSweepReport) -> dict:
    return {
        "dim": report.dim,
        "lambda": report.lam,
        "mode": report.mode,
        "checked": report.simplices_checked,
        "skipped": {
            "degenerate": report.skipped_degenerate,
            "antipodal": report.skipped_antipodal,
        },
        "budget": report.budget,
        "max_nonedge_count": report.max_nonedge_count,
        "histogram": {str(k): v for k, v in sorted(report.histogram.items())},
        "violations": [translate_report_to_json(v) for v in report.violations],
    }
