"""Numerical engine: expectations, inner products, Laurent coefficients and
variances of black-box functions, computed by uniform sampling of the product
of boundary circles |w_j| = lam.

The boundary measure turns every integral into a plain average over the
equispaced sample grid, and coefficient extraction into a discrete Fourier
contraction.  Uniform sampling of a periodic analytic integrand is spectrally
accurate, and exact (to rounding) for Laurent polynomials whose exponent range
per dimension is narrower than the grid.

Evaluators are duck-typed: anything with integer attributes ``n`` and ``k``
and a method ``eval_grid(coords) -> list[np.ndarray]`` accepting broadcastable
coordinate arrays works, e.g. ``expr.MeroExpr``, ``laurent.LaurentPoly`` or
the :class:`GridFunction` adapter below.  Evaluators must be re-entrant and
side-effect free; grids and summaries are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AliasingRisk,
    DimensionMismatch,
    DivisionNearZero,
    GridTooLarge,
    NonConvergent,
    PoleOnTorus,
)

DEFAULT_TOL = 1e-10
DEFAULT_START_N = 16
DEFAULT_MAX_N = 4096          # per-dimension cap; env LENS_MAX_GRID overrides via CLI
MAX_TOTAL_POINTS = 2**24      # budget on N**n
MAX_DIMENSION = 4
BLOWUP_THRESHOLD = 1e12       # |f| beyond this counts as a pole on the torus


@dataclass(frozen=True)
class GridFunction:
    """Adapter turning a plain callable on coordinate arrays into an evaluator."""

    n: int
    k: int
    fn: Callable[[Sequence[np.ndarray]], list[np.ndarray]]

    def eval_grid(self, coords: Sequence[np.ndarray]) -> list[np.ndarray]:
        return self.fn(coords)


@dataclass(frozen=True)
class TorusGrid:
    """Values of an evaluator on the N^n equispaced grid of the radius-lam
    torus; values[m1,...,mn,alpha] = f_alpha(lam * exp(2*pi*i*m/N))."""

    n: int
    k: int
    lam: float
    N: int
    values: np.ndarray  # shape (N,)*n + (k,)


def torus_coords(n: int, lam: float, N: int) -> list[np.ndarray]:
    """Broadcastable coordinate arrays for the sample grid."""
    circle = lam * np.exp(2j * np.pi * np.arange(N) / N)
    coords = []
    for j in range(n):
        shape = [1] * n
        shape[j] = N
        coords.append(circle.reshape(shape))
    return coords


def sample_torus(f, lam: float, N: int, max_points: int = MAX_TOTAL_POINTS) -> TorusGrid:
    """Evaluate f on the N^n torus grid.

    Raises PoleOnTorus when evaluation divides by a near-zero modulus or any
    value is non-finite or beyond the blow-up threshold, and GridTooLarge when
    the point count exceeds the budget (or n > 4).
    """
    n, k = f.n, f.k
    if lam <= 0:
        raise ValueError("radius must be positive")
    if N < 4:
        raise ValueError("need at least 4 points per dimension")
    if n > MAX_DIMENSION:
        raise GridTooLarge(f"dimension {n} exceeds the cap of {MAX_DIMENSION}")
    if N**n > max_points:
        raise GridTooLarge(f"grid of {N}^{n} points exceeds the budget of {max_points}")
    coords = torus_coords(n, lam, N)
    try:
        components = f.eval_grid(coords)
    except DivisionNearZero as exc:
        raise PoleOnTorus(
            f"pole on the radius-{lam:g} torus: {exc}", point=exc.point
        ) from exc
    shape = (N,) * n
    values = np.stack([np.broadcast_to(c, shape) for c in components], axis=-1)
    if not np.all(np.isfinite(values)):
        raise PoleOnTorus(f"non-finite value on the radius-{lam:g} torus")
    peak = float(np.max(np.abs(values)))
    if peak > BLOWUP_THRESHOLD:
        raise PoleOnTorus(
            f"value of modulus {peak:.3g} on the radius-{lam:g} torus"
        )
    return TorusGrid(n=n, k=k, lam=lam, N=N, values=values)


def laurent_coefficient(grid: TorusGrid, a: Sequence[int]) -> np.ndarray:
    """Coefficient c_a of the sampled function, one entry per component.

    c_a = lam^(-sum a) * (1/N^n) * sum_m values(m) exp(-2*pi*i*a.m/N); exact to
    rounding for Laurent polynomials whose per-dimension exponent width is
    below N.  Requires |a_j| <= N/2 - 1 against aliasing.
    """
    avec = tuple(int(x) for x in a)
    if len(avec) != grid.n:
        raise DimensionMismatch(f"index {avec} has length {len(avec)}, expected {grid.n}")
    if any(abs(x) > grid.N // 2 - 1 for x in avec):
        raise AliasingRisk(
            f"coefficient order {avec} too high for N={grid.N} (need |a_j| <= N/2 - 1)"
        )
    m = np.arange(grid.N)
    out = grid.values
    for aj in avec:
        phases = np.exp(-2j * np.pi * aj * m / grid.N)
        out = np.tensordot(phases, out, axes=(0, 0))
    return out * (grid.lam ** (-sum(avec)) / grid.N**grid.n)


def _mean_power(grid: TorusGrid) -> float:
    """Average of |f|^2 over the grid, summed over components."""
    return float(np.mean(np.sum(np.abs(grid.values) ** 2, axis=-1)))


@dataclass(frozen=True)
class SpectralSummary:
    """Constant term, residue and first-derivative matrices, and variance of
    an evaluator at one scale, with the refinement error estimate."""

    lam: float
    core: np.ndarray       # (k,)
    eta: np.ndarray        # (k, n): coefficient of 1/w_beta per component
    jacobian: np.ndarray   # (k, n): coefficient of w_beta per component
    variance: float
    tail_energy: float     # variance minus the two-term closed form
    est_error: float
    grid_n: int

    @property
    def variance_model(self) -> float:
        tr_eta = float(np.sum(np.abs(self.eta) ** 2))
        tr_jac = float(np.sum(np.abs(self.jacobian) ** 2))
        return tr_eta / self.lam**2 + self.lam**2 * tr_jac

    def to_json_dict(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]
        return {
            "lambda": self.lam,
            "core": [pair(z) for z in self.core],
            "eta": [[pair(z) for z in row] for row in self.eta],
            "jacobian": [[pair(z) for z in row] for row in self.jacobian],
            "variance": self.variance,
            "tail_energy": self.tail_energy,
            "est_error": self.est_error,
            "grid_n": self.grid_n,
        }


def _adaptive(
    stat: Callable[[int], np.ndarray],
    tol: float,
    n_start: int,
    max_n: int,
) -> tuple[np.ndarray, float, int]:
    """Double N until two successive evaluations of stat agree within tol.

    Agreement is absolute for entries of modulus <= 1 and relative above, so
    large variances do not stall the refinement at the rounding floor.  The
    returned error estimate is the raw infinity-norm of the last delta.
    """
    prev = None
    N = n_start
    while N <= max_n:
        cur = stat(N)
        if prev is not None:
            delta = np.abs(cur - prev)
            if np.all(delta <= tol * np.maximum(1.0, np.abs(cur))):
                return cur, float(np.max(delta)), N
        prev = cur
        N *= 2
    raise NonConvergent(
        f"refinement reached N={max_n} without two grids agreeing within {tol:g}"
    )


def _index_set(n: int, orders: Sequence[int]) -> list[tuple[int, ...]]:
    """Zero vector plus each +-order unit vector for the requested orders."""
    out = [(0,) * n]
    for order in orders:
        for beta in range(n):
            vec = [0] * n
            vec[beta] = order
            out.append(tuple(vec))
    return out


def adaptive_coefficients(
    f,
    lam: float,
    indices: Sequence[Sequence[int]],
    tol: float = DEFAULT_TOL,
    with_power: bool = False,
    n_start: int = DEFAULT_START_N,
    max_n: int = DEFAULT_MAX_N,
    max_points: int = MAX_TOTAL_POINTS,
) -> tuple[dict[tuple[int, ...], np.ndarray], float | None, float, int]:
    """Laurent coefficients at the given indices (and optionally the mean of
    |f|^2), refined by grid doubling until stable.

    Returns (coefficients, mean_power, est_error, N_used).
    """
    idx = [tuple(int(x) for x in a) for a in indices]

    def stat(N: int) -> np.ndarray:
        grid = sample_torus(f, lam, N, max_points)
        parts = [laurent_coefficient(grid, a).ravel() for a in idx]
        if with_power:
            parts.append(np.asarray([_mean_power(grid)], dtype=complex))
        return np.concatenate(parts)

    vec, err, n_used = _adaptive(stat, tol, n_start, max_n)
    coeffs: dict[tuple[int, ...], np.ndarray] = {}
    for i, a in enumerate(idx):
        coeffs[a] = vec[i * f.k : (i + 1) * f.k]
    power = float(vec[-1].real) if with_power else None
    return coeffs, power, err, n_used


def spectral_summary(
    f,
    lam: float,
    tol: float = DEFAULT_TOL,
    n_start: int = DEFAULT_START_N,
    max_n: int = DEFAULT_MAX_N,
    max_points: int = MAX_TOTAL_POINTS,
) -> SpectralSummary:
    """Full one-scale summary of an evaluator whose only possible pole on the
    closed poly-disc is at the origin.

    The variance is the grid mean of |f|^2 minus |c_0|^2 (the boundary average
    of |f|^2 equals <f,f>); the tail energy is whatever part of it the
    two-term closed form does not account for.
    """
    n, k = f.n, f.k
    indices = _index_set(n, (-1, 1))
    coeffs, power, err, n_used = adaptive_coefficients(
        f, lam, indices, tol=tol, with_power=True,
        n_start=n_start, max_n=max_n, max_points=max_points,
    )
    core = coeffs[(0,) * n]
    eta = np.empty((k, n), dtype=complex)
    jac = np.empty((k, n), dtype=complex)
    for beta in range(n):
        vec = [0] * n
        vec[beta] = -1
        eta[:, beta] = coeffs[tuple(vec)]
        vec[beta] = 1
        jac[:, beta] = coeffs[tuple(vec)]
    variance = max(power - float(np.sum(np.abs(core) ** 2)), 0.0)
    tr_eta = float(np.sum(np.abs(eta) ** 2))
    tr_jac = float(np.sum(np.abs(jac) ** 2))
    tail = variance - (tr_eta / lam**2 + lam**2 * tr_jac)
    return SpectralSummary(
        lam=lam, core=core, eta=eta, jacobian=jac,
        variance=variance, tail_energy=tail, est_error=err, grid_n=n_used,
    )


def first_order_summary(
    f,
    lam: float,
    tol: float = DEFAULT_TOL,
    max_n: int = DEFAULT_MAX_N,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float, int]:
    """Constant term plus residue and derivative matrices only (no variance).

    Unlike spectral_summary this stays meaningful for functions whose pole
    structure mixes coordinates, e.g. pullbacks under coordinate changes.
    """
    n, k = f.n, f.k
    coeffs, _, err, n_used = adaptive_coefficients(
        f, lam, _index_set(n, (-1, 1)), tol=tol, max_n=max_n
    )
    core = coeffs[(0,) * n]
    eta = np.empty((k, n), dtype=complex)
    jac = np.empty((k, n), dtype=complex)
    for beta in range(n):
        vec = [0] * n
        vec[beta] = -1
        eta[:, beta] = coeffs[tuple(vec)]
        vec[beta] = 1
        jac[:, beta] = coeffs[tuple(vec)]
    return core, eta, jac, err, n_used


def expectation_numeric(
    f,
    lam: float,
    tol: float = DEFAULT_TOL,
    max_n: int = DEFAULT_MAX_N,
) -> np.ndarray:
    """Boundary-measure expectation of f (its constant Laurent coefficient)."""
    coeffs, _, _, _ = adaptive_coefficients(f, lam, [(0,) * f.n], tol=tol, max_n=max_n)
    return coeffs[(0,) * f.n]


def inner_product_numeric(
    f,
    g,
    lam: float,
    tol: float = DEFAULT_TOL,
    n_start: int = DEFAULT_START_N,
    max_n: int = DEFAULT_MAX_N,
) -> complex:
    """<f, g> as the grid mean of conj(f).g, conjugate-linear in f."""
    if f.n != g.n or f.k != g.k:
        raise DimensionMismatch(
            f"shape ({f.n},{f.k}) vs ({g.n},{g.k})"
        )

    def stat(N: int) -> np.ndarray:
        gf = sample_torus(f, lam, N)
        gg = sample_torus(g, lam, N)
        value = np.mean(np.sum(np.conj(gf.values) * gg.values, axis=-1))
        return np.asarray([value])

    vec, _, _ = _adaptive(stat, tol, n_start, max_n)
    return complex(vec[0])
