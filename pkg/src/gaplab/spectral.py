"""Interpolation Hamiltonians and the minimum spectral gap.

For a column-stochastic Google matrix G the penalty operator

    h(G) = (I - G)^T (I - G)

is symmetric positive semidefinite and annihilates exactly the eigenvalue-1
vector of G, i.e. the PageRank vector.  The interpolation family

    H(s) = s h(G) + (1 - s) h(G_c),   s in [0, 1]

connects the trivial reference (G_c is the uniform matrix, h(G_c) a rank
deficient projector with spectrum {0, 1, ..., 1}) to the target.  The
quantity of interest is the gap delta(s) between the two lowest eigenvalues,
minimized over s.

Minimization protocol (fixed, deterministic): evaluate delta on an inclusive
uniform grid over [0, 1], then refine from the best grid point with a
one-dimensional Nelder-Mead simplex clamped to the interval.  The reported
minimum is the smallest value over every probe, and ties are broken toward
the largest s, since for most graphs the true minimum sits at the s = 1
boundary.
"""

import numpy as np
from dataclasses import dataclass, field
from scipy.linalg import eigh, eigh_tridiagonal

from .errors import ConvergenceError
from .netgen import SimpleDigraph
from .pagerank import GoogleMatrix, google_matrix, DEFAULT_DAMPING

DENSE_EIGH_LIMIT = 1024     # largest n solved by full symmetric eigensolve
PSD_FLOOR = -1e-10          # most negative lambda0 accepted as roundoff
LANCZOS_SEED = 987654321    # fixed start-vector stream; keeps runs identical
LANCZOS_MAX_STEPS = 500


def complete_reference(n, alpha_g=DEFAULT_DAMPING):
    """Google matrix of the complete-with-loops graph on n vertices.

    With every row of the surfer matrix uniform, damping cancels and the
    result is the uniform matrix J/n for any alpha_g.  The edgeless graph
    (all rows dangling) produces the identical operator without storing the
    n^2 explicit edges, so that is what we build.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return google_matrix(SimpleDigraph(n, []), alpha_g)


class HamiltonianOperator:
    """H(s) = s h(G) + (1-s) h(G_c), applied matrix-free or materialized."""

    def __init__(self, target, reference, s, mode="auto"):
        if not isinstance(target, GoogleMatrix):
            raise TypeError("target must be a GoogleMatrix")
        if not isinstance(reference, GoogleMatrix):
            raise TypeError("reference must be a GoogleMatrix")
        if target.n != reference.n:
            raise ValueError("target and reference sizes differ")
        if not (0.0 <= s <= 1.0):
            raise ValueError("s must lie in [0,1]")
        if mode not in ("auto", "dense", "iterative"):
            raise ValueError("mode must be auto, dense or iterative")
        self.target = target
        self.reference = reference
        self.s = float(s)
        self.n = target.n
        self.mode = mode

    def _penalty_apply(self, gm, v):
        u = v - gm.apply(v)
        return u - gm.apply_transpose(u)

    def apply(self, v):
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        if self.s > 0.0:
            out += self.s * self._penalty_apply(self.target, v)
        if self.s < 1.0:
            out += (1.0 - self.s) * self._penalty_apply(self.reference, v)
        return out

    def dense(self):
        n = self.n
        H = np.zeros((n, n))
        if self.s > 0.0:
            M = np.eye(n) - self.target.to_dense()
            H += self.s * (M.T @ M)
        if self.s < 1.0:
            # h of the uniform matrix is the projector I - J/n
            H += (1.0 - self.s) * (np.eye(n) - np.full((n, n), 1.0 / n))
        return H


def h_of(gm):
    """Penalty operator of a single Google matrix (s pinned to 1)."""
    return HamiltonianOperator(gm, complete_reference(gm.n, gm.alpha_g), 1.0)


def H_of(target, reference, s, mode="auto"):
    return HamiltonianOperator(target, reference, s, mode=mode)


# ---------------------------------------------------------------------------
# eigensolvers
# ---------------------------------------------------------------------------

def _two_lowest_dense(op):
    w = eigh(op.dense(), eigvals_only=True, subset_by_index=(0, 1))
    return float(w[0]), float(w[1])


def _two_lowest_lanczos(op, tol):
    """Smallest two eigenvalues by Lanczos with full reorthogonalization.

    The start vector comes from a fixed-seed stream, so repeated calls are
    identical.  A zero beta means an invariant subspace was exhausted; we
    then restart the recurrence with a fresh orthogonalized vector (the
    tridiagonal matrix simply becomes block diagonal).  Ritz pair (theta, y)
    has residual |beta * y[-1]|; we stop when the two smallest are below
    tol.  Failure raises rather than silently degrading.
    """
    n = op.n
    steps = min(n, LANCZOS_MAX_STEPS)
    rng = np.random.default_rng(LANCZOS_SEED)
    V = np.empty((n, steps))
    a = np.empty(steps)       # diagonal of T
    b = np.empty(steps)       # subdiagonal; b[k] couples step k and k+1
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    V[:, 0] = v
    beta = 0.0
    k = 0
    last_residual = np.inf
    while True:
        w = op.apply(V[:, k])
        if k > 0 and b[k - 1] != 0.0:
            w -= b[k - 1] * V[:, k - 1]
        a[k] = float(V[:, k] @ w)
        w -= a[k] * V[:, k]
        # full reorthogonalization against everything so far
        w -= V[:, :k + 1] @ (V[:, :k + 1].T @ w)
        beta = float(np.linalg.norm(w))
        m = k + 1
        if m >= 2 or beta <= n * 1e-14:
            theta, Y = eigh_tridiagonal(a[:m], b[:m - 1])
            res = np.abs(beta * Y[-1, :])
            order = np.argsort(theta)
            if m >= 2:
                last_residual = float(max(res[order[0]], res[order[1]]))
                if last_residual <= tol:
                    return float(theta[order[0]]), float(theta[order[1]])
            if m == n:
                # Krylov space is the whole space; T's spectrum is exact
                if m >= 2:
                    return float(theta[order[0]]), float(theta[order[1]])
                raise ConvergenceError("no excited state in dimension 1")
        if m == steps or m == n:
            break
        if beta <= n * 1e-14:
            # invariant subspace; restart with a fresh direction
            fresh = rng.standard_normal(n)
            fresh -= V[:, :m] @ (V[:, :m].T @ fresh)
            norm = np.linalg.norm(fresh)
            if norm <= n * 1e-14:
                break  # space exhausted, handled above or hopeless
            V[:, m] = fresh / norm
            b[k] = 0.0
        else:
            V[:, m] = w / beta
            b[k] = beta
        k += 1
    raise ConvergenceError(
        "Lanczos did not reach tol=%.1e in %d steps (last residual %.3e)"
        % (tol, steps, last_residual), residual=last_residual)


def two_lowest(op, tol=1e-10):
    """Two smallest eigenvalues of a HamiltonianOperator."""
    if op.n < 2:
        raise ValueError("no excited state exists for n < 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    mode = op.mode
    if mode == "auto":
        mode = "dense" if op.n <= DENSE_EIGH_LIMIT else "iterative"
    if mode == "dense":
        return _two_lowest_dense(op)
    return _two_lowest_lanczos(op, tol)


def gap(target, reference, s, mode="auto", tol=1e-10):
    """delta(s) = lambda1 - lambda0 of H(s)."""
    lam0, lam1 = two_lowest(H_of(target, reference, s, mode=mode), tol=tol)
    return lam1 - lam0


# ---------------------------------------------------------------------------
# gap minimization over s
# ---------------------------------------------------------------------------

@dataclass
class GapResult:
    delta: float
    s_star: float
    lambda0: float
    lambda1: float
    evaluations: list
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lambda0 < PSD_FLOOR:
            raise ValueError("lambda0 = %r below the PSD floor" % self.lambda0)
        if self.lambda1 < self.lambda0:
            raise ValueError("eigenvalues out of order")
        if self.delta < 0:
            raise ValueError("negative gap")


class _DenseObjective:
    """Caches the two dense penalty matrices so each probe is one eigh."""

    def __init__(self, gm):
        n = gm.n
        M = np.eye(n) - gm.to_dense()
        self.hT = M.T @ M
        self.hR = np.eye(n) - np.full((n, n), 1.0 / n)

    def __call__(self, s):
        H = s * self.hT + (1.0 - s) * self.hR
        w = eigh(H, eigvals_only=True, subset_by_index=(0, 1))
        return float(w[0]), float(w[1])


class _IterativeObjective:
    def __init__(self, gm, tol):
        self.gm = gm
        self.ref = complete_reference(gm.n, gm.alpha_g)
        self.tol = tol

    def __call__(self, s):
        op = H_of(self.gm, self.ref, s, mode="iterative")
        return _two_lowest_lanczos(op, self.tol)


def min_gap(gm, n_scan=21, mode="auto", tol=1e-10,
            width_tol=1e-4, objective_tol=1e-10, tie_tol=1e-12,
            max_refine=200):
    """Minimize delta(s) over s in [0, 1].

    Protocol: evaluate the inclusive uniform grid of n_scan points (both
    endpoints always included), then run a one-dimensional Nelder-Mead
    refinement from the best grid point.  Candidate points are clamped to
    [0, 1].  Refinement stops when the simplex is narrower than width_tol
    and its objective spread is below objective_tol, or after max_refine
    iterations (reported, not fatal).  Everything probed lands in the trace;
    the reported delta is the smallest value over the whole trace and s* is
    the largest s attaining it within tie_tol.
    """
    if gm.n < 2:
        raise ValueError("need n >= 2 to have a gap")
    if n_scan < 2:
        raise ValueError("n_scan must be at least 2")
    if mode == "auto":
        mode = "dense" if gm.n <= DENSE_EIGH_LIMIT else "iterative"
    if mode == "dense":
        objective = _DenseObjective(gm)
    elif mode == "iterative":
        objective = _IterativeObjective(gm, tol)
    else:
        raise ValueError("mode must be auto, dense or iterative")

    cache = {}

    def probe(s):
        s = float(min(1.0, max(0.0, s)))
        if s not in cache:
            lam0, lam1 = objective(s)
            if lam0 < PSD_FLOOR:
                raise RuntimeError(
                    "lambda0 = %r at s=%r violates positive semidefiniteness"
                    % (lam0, s))
            cache[s] = (lam0, lam1)
        lam0, lam1 = cache[s]
        return lam1 - lam0

    grid = np.linspace(0.0, 1.0, n_scan)
    grid_vals = [probe(s) for s in grid]
    k_best = int(np.argmin(grid_vals))

    # two-point simplex: best grid point plus its better-looking neighbor
    x0 = float(grid[k_best])
    if k_best == 0:
        x1 = float(grid[1])
    elif k_best == n_scan - 1:
        x1 = float(grid[n_scan - 2])
    else:
        left, right = float(grid[k_best - 1]), float(grid[k_best + 1])
        x1 = left if probe(left) <= probe(right) else right

    converged = False
    iterations = 0
    f0, f1 = probe(x0), probe(x1)
    for iterations in range(1, max_refine + 1):
        if f1 < f0:
            x0, x1, f0, f1 = x1, x0, f1, f0
        if abs(x1 - x0) < width_tol and abs(f1 - f0) < objective_tol:
            converged = True
            break
        xr = min(1.0, max(0.0, 2.0 * x0 - x1))     # reflect worst over best
        if xr != x0:
            fr = probe(xr)
        else:
            fr = np.inf  # clamped onto the best point: force a contraction
        if fr < f0:
            xe = min(1.0, max(0.0, 3.0 * x0 - 2.0 * x1))
            fe = probe(xe)
            if fe < fr:
                x1, f1 = xe, fe
            else:
                x1, f1 = xr, fr
        elif fr < f1:
            x1, f1 = xr, fr
        else:
            # in one dimension the inside contraction and the shrink both
            # move the worst point to the midpoint, so accept it either way
            xc = 0.5 * (x0 + x1)
            x1, f1 = xc, probe(xc)

    deltas = {s: lam1 - lam0 for s, (lam0, lam1) in cache.items()}
    best = min(deltas.values())
    s_star = max(s for s, d in deltas.items() if d <= best + tie_tol)
    lam0, lam1 = cache[s_star]
    reported_lam0 = 0.0 if lam0 < 0.0 else lam0
    trace = sorted(deltas.items())
    return GapResult(
        delta=best, s_star=s_star,
        lambda0=reported_lam0, lambda1=lam1,
        evaluations=trace,
        diagnostics={
            "mode": mode,
            "evaluations": len(cache),
            "refine_iterations": iterations,
            "refine_converged": converged,
            "raw_lambda0": lam0,
            "grid_best_s": float(grid[k_best]),
        })
