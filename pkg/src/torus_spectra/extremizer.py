"""Maximize the l^p spectrum norm over the unit sphere of amplitudes.

The objective is the l^p norm of the autocorrelation spectrum as a
function of the coefficient vector on a fixed shell, constrained to
sum |a_xi|^2 = 1. Since b_0 = 1 the optimum is at least 1, and for p = n
the dimensional bound C(n) is a proven ceiling; the gap between the
empirical maximum and C(n) is the quantity of interest (sharpness of the
constant is open).

Internally the ascent works on f = sum_tau |b_tau|^p, the p-th power of
the objective: same maximizers, smooth gradient. Writing amplitudes as
real coordinate pairs and packaging the gradient as the complex vector
g_xi = dF/dx_xi + i dF/dy_xi, bilinearity of b gives

    g_xi = 2 p sum_{zeta in S} |b_{xi-zeta}|^(p-2) b_{xi-zeta} a_zeta,

a Hermitian matrix-vector product over the precomputed pair structure.
Ascent is projected gradient with renormalization to the sphere after
every step and backtracking halving whenever the objective would
decrease, so each run's objective sequence is non-decreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .lattice import Point, SphereShell
from .spectra import (
    BOUND_SLACK,
    EigenfunctionCoeffs,
    applicable_bound,
    autocorrelation,
    lp_norm,
    pair_structure,
)

# |b_tau| below this contributes no gradient term: |b|^p = (|b|^2)^(p/2) is
# non-smooth at 0 for odd p, and zeroing the term avoids NaN without biasing
# generic points.
GRAD_ZERO_TOL = 1e-14

STEP_FLOOR = 1e-18
STEP_GROW = 1.5
STEP_CAP = 1e3


@dataclass(frozen=True)
class ExtremizerConfig:
    restarts: int = 10
    max_iters: int = 5000
    step_init: float = 0.1
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ContractError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ContractError("max_iters must be >= 1")
        if self.step_init <= 0:
            raise ContractError("step_init must be positive")
        if self.tol <= 0:
            raise ContractError("tol must be positive")


@dataclass(frozen=True)
class AscentRun:
    """One restart: final objective value, iteration count, convergence flag.

    `history` (objective value per accepted iterate, starting point
    included) is kept only when requested.
    """

    index: int
    value: float
    iterations: int
    converged: bool
    history: tuple[float, ...] | None = None


@dataclass(frozen=True)
class ExtremalReport:
    best_coeffs: EigenfunctionCoeffs
    best_value: float
    bound_value: float | None
    iterations_used: int
    converged: bool
    p: float
    restarts: int
    runs: tuple[AscentRun, ...] | None = None


class SpectrumEngine:
    """Vectorized objective/gradient evaluation on a fixed point support.

    Amplitude vectors are complex arrays aligned with `points` (by default
    the whole shell, optionally a sub-support); evaluation works for any
    vector, normalized or not, which also makes the engine the natural
    target for finite-difference checks.
    """

    def __init__(self, shell: SphereShell, support: tuple[Point, ...] | None = None):
        if len(shell) == 0:
            raise ContractError(f"shell({shell.dim}, {shell.lam}) is empty")
        pts = tuple(sorted(support)) if support is not None else shell.points
        for p in pts:
            if p not in shell.index:
                raise ContractError(f"support point {p} is not on the shell")
        self.shell = shell
        self.points = pts
        arr = np.array(pts, dtype=np.int64).reshape(len(pts), shell.dim)
        self._pairs = pair_structure(shell.dim, shell.lam, arr)

    def vector(self, coeffs: EigenfunctionCoeffs) -> np.ndarray:
        return np.array([coeffs.amplitudes.get(p, 0.0) for p in self.points], dtype=np.complex128)

    def coeffs(self, a: np.ndarray) -> EigenfunctionCoeffs:
        scale = 1.0 / math.sqrt(math.fsum((x.real * x.real + x.imag * x.imag) for x in a))
        return EigenfunctionCoeffs(
            self.shell, {p: complex(x * scale) for p, x in zip(self.points, a)}
        )

    def _weights(self, b: np.ndarray, p: float) -> np.ndarray:
        if p == 2:
            return p * b
        mags = np.abs(b)
        scale = np.where(mags < GRAD_ZERO_TOL, 0.0, mags ** (p - 2))
        return p * scale * b

    def power_value(self, a: np.ndarray, p: float) -> float:
        b = self._pairs.accumulate(a)
        return float((np.abs(b) ** p).sum())

    def power_value_and_gradient(self, a: np.ndarray, p: float) -> tuple[float, np.ndarray]:
        b = self._pairs.accumulate(a)
        f = float((np.abs(b) ** p).sum())
        w = self._weights(b, p)
        s = self._pairs.size
        matrix = w[self._pairs.inv].reshape(s, s)
        return f, 2.0 * (matrix @ a)


def objective(coeffs: EigenfunctionCoeffs, p: float) -> float:
    """l^p norm of the autocorrelation spectrum; pure, requires p >= 1."""
    return lp_norm(autocorrelation(coeffs), p)


def gradient(coeffs: EigenfunctionCoeffs, p: float) -> dict[Point, complex]:
    """Gradient of objective**p in real amplitude coordinates, over all shell points.

    Packaged per point as dF/dx + i*dF/dy. Requires p >= 2 (below that the
    power sum is not differentiable where entries vanish).
    """
    if p < 2:
        raise ContractError(f"gradient requires p >= 2, got {p}")
    engine = SpectrumEngine(coeffs.shell)
    _, g = engine.power_value_and_gradient(engine.vector(coeffs), p)
    return {pt: complex(v) for pt, v in zip(engine.points, g)}


def finite_difference_gradient(fn, a: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a real-valued fn of a complex vector.

    Perturbs each real and imaginary coordinate by +-h and packages the
    result like `gradient` does: d/dx + i*d/dy per entry.
    """
    out = np.empty(len(a), dtype=np.complex128)
    for i in range(len(a)):
        for part, delta in ((0, h), (1, 1j * h)):
            plus = a.copy()
            minus = a.copy()
            plus[i] += delta
            minus[i] -= delta
            d = (fn(plus) - fn(minus)) / (2 * h)
            out[i] = d if part == 0 else out[i] + 1j * d
    return out


def _ascend(engine: SpectrumEngine, a0: np.ndarray, p: float, cfg: ExtremizerConfig,
            keep_history: bool) -> tuple[np.ndarray, float, int, bool, list[float] | None]:
    a = a0 / np.linalg.norm(a0)
    f, g = engine.power_value_and_gradient(a, p)
    history = [f ** (1.0 / p)] if keep_history else None
    step = cfg.step_init
    converged = False
    iterations = 0
    while iterations < cfg.max_iters:
        iterations += 1
        radial = (a.conj() @ g).real
        if np.linalg.norm(g - radial * a) < cfg.tol:
            converged = True
            break
        moved = False
        while step > STEP_FLOOR:
            trial = a + step * g
            trial /= np.linalg.norm(trial)
            f_trial = engine.power_value(trial, p)
            if f_trial >= f:
                moved = True
                break
            step *= 0.5
        if not moved:
            break  # no ascent at any step size: numerically stationary
        a = trial
        f, g = engine.power_value_and_gradient(a, p)
        if keep_history:
            history.append(f ** (1.0 / p))
        step = min(step * STEP_GROW, STEP_CAP)
    return a, f, iterations, converged, history


def _restart_chunk(dim: int, lam: int, support, p: float, cfg_fields: tuple,
                   indices: list[int], keep_history: bool) -> list[dict]:
    from .lattice import enumerate_shell

    cfg = ExtremizerConfig(*cfg_fields)
    shell = enumerate_shell(dim, lam)
    engine = SpectrumEngine(shell, support)
    out = []
    for r in indices:
        rng = np.random.default_rng(cfg.seed + r)
        n = len(engine.points)
        a0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a, f, iterations, converged, history = _ascend(engine, a0, p, cfg, keep_history)
        out.append(
            {"index": r, "a": a, "f": f, "iterations": iterations,
             "converged": converged, "history": history}
        )
    return out


def maximize(
    shell: SphereShell,
    p: float,
    config: ExtremizerConfig | None = None,
    support: tuple[Point, ...] | None = None,
    keep_history: bool = False,
    threads: int = 1,
) -> ExtremalReport:
    """Best-of-restarts projected gradient ascent on the amplitude sphere.

    Restart r draws a gaussian start with seed config.seed + r (restricted
    to `support` when given; off-support gradients vanish, so the support
    is invariant under the ascent). The winner is selected by (value,
    restart index), making the report deterministic for a fixed seed under
    any execution order, including `threads` > 1.
    """
    if len(shell) == 0:
        raise ContractError(f"shell({shell.dim}, {shell.lam}) is empty")
    if p < 2:
        raise ContractError(f"maximize requires p >= 2, got {p}")
    cfg = config or ExtremizerConfig()
    support_t = tuple(sorted(tuple(q) for q in support)) if support is not None else None
    cfg_fields = (cfg.restarts, cfg.max_iters, cfg.step_init, cfg.tol, cfg.seed)
    indices = list(range(cfg.restarts))
    if threads > 1 and cfg.restarts > 1:
        slices = np.array_split(np.array(indices), min(threads, cfg.restarts))
        argses = [
            (shell.dim, shell.lam, support_t, p, cfg_fields, [int(i) for i in sl], keep_history)
            for sl in slices
            if len(sl)
        ]
        from .lemma import _run_chunks

        results = [r for part in _run_chunks(_restart_chunk, argses, threads) for r in part]
    else:
        results = _restart_chunk(
            shell.dim, shell.lam, support_t, p, cfg_fields, indices, keep_history
        )

    best = None
    for r in results:
        if best is None or r["f"] > best["f"]:
            best = r
    engine = SpectrumEngine(shell, support_t)
    best_coeffs = engine.coeffs(best["a"])
    best_value = objective(best_coeffs, p)
    runs = None
    if keep_history:
        runs = tuple(
            AscentRun(
                index=r["index"], value=r["f"] ** (1.0 / p), iterations=r["iterations"],
                converged=r["converged"], history=tuple(r["history"]),
            )
            for r in results
        )
    return ExtremalReport(
        best_coeffs=best_coeffs,
        best_value=best_value,
        bound_value=applicable_bound(shell.dim, p),
        iterations_used=best["iterations"],
        converged=best["converged"],
        p=p,
        restarts=cfg.restarts,
        runs=runs,
    )


def report_passes_bound(report: ExtremalReport) -> bool:
    return report.bound_value is None or report.best_value <= report.bound_value + BOUND_SLACK
