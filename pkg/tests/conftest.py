"""Shared independent oracles for the test suite.

Everything here is deliberately naive: box scans, double loops over all
pairs, full scans over difference-vector balls. The production code must
agree with these, never the other way around.
"""

from __future__ import annotations

import io
import math
from contextlib import redirect_stderr, redirect_stdout
from itertools import combinations, product
from math import isqrt

import numpy as np

from torus_spectra import EigenfunctionCoeffs, SphereShell
from torus_spectra.cli import main
from torus_spectra.lattice import Point, sign_canonical


def box_points(dim: int, lam: int) -> list[Point]:
    """All lattice points with |p|^2 = lam by scanning the full box."""
    r = isqrt(lam)
    return sorted(
        p for p in product(range(-r, r + 1), repeat=dim) if sum(c * c for c in p) == lam
    )


def brute_spectrum(coeffs: EigenfunctionCoeffs) -> dict[Point, complex]:
    """b_tau by the explicit double loop over all supported pairs."""
    supp = [(p, a) for p, a in sorted(coeffs.amplitudes.items()) if a != 0]
    out: dict[Point, complex] = {}
    for xi, a_xi in supp:
        for eta, a_eta in supp:
            tau = tuple(x - y for x, y in zip(xi, eta))
            out[tau] = out.get(tau, 0.0) + a_xi * a_eta.conjugate()
    return out


def full_scan_translates(shell: SphereShell, verts) -> set[Point]:
    """Admissible translate classes by scanning every tau with |tau|^2 <= 4*lam."""
    dim = shell.dim
    r = isqrt(4 * shell.lam)
    found = set()
    for tau in product(range(-r, r + 1), repeat=dim):
        if not any(tau) or sum(c * c for c in tau) > 4 * shell.lam:
            continue
        ok = True
        for v in verts:
            minus = tuple(x - t for x, t in zip(v, tau))
            plus = tuple(x + t for x, t in zip(v, tau))
            if minus not in shell.index and plus not in shell.index:
                ok = False
                break
        if ok:
            found.add(sign_canonical(tau))
    return found


def normalized_coeffs(shell: SphereShell, raw: dict[Point, complex]) -> EigenfunctionCoeffs:
    """Construct coefficients from arbitrary nonzero raw amplitudes."""
    total = math.fsum(abs(a) ** 2 for a in raw.values())
    scale = 1.0 / math.sqrt(total)
    return EigenfunctionCoeffs(shell, {p: a * scale for p, a in raw.items()})


def random_raw_coeffs(shell: SphereShell, rng: np.random.Generator) -> EigenfunctionCoeffs:
    """Random complex coefficients over the full shell, test-side construction."""
    raw = {
        p: complex(rng.standard_normal(), rng.standard_normal()) for p in shell.points
    }
    return normalized_coeffs(shell, raw)


def run_cli(argv: list[str]) -> tuple[int, str, str]:
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:  # argparse usage failures
            code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()
