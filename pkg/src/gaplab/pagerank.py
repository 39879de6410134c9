"""Transition and Google matrices, plus the classical power-iteration rank.

The Google matrix is never materialized during normal operation.  It is kept
as a sparse row-stochastic part plus two analytic corrections (dangling rows
and the uniform teleport term), so applying it costs O(edges + n):

    G v   = a * Ps^T v + (a * (sum of v over dangling) / n
                          + (1 - a) * sum(v) / n) * ones
    G^T w = a * Ps w + a * (sum(w)/n) * dangling_indicator
                      + ((1 - a) / n) * sum(w) * ones

where Ps holds the explicit 1/d_out rows and a is the damping factor.
"""

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError

DEFAULT_DAMPING = 0.85
DENSE_LIMIT = 8192


class TransitionMatrix:
    """Row-stochastic random-surfer matrix of a simple digraph.

    Rows of vertices with outgoing edges hold 1/d_out entries; rows of
    dangling vertices are uniform 1/n and stay implicit.
    """

    def __init__(self, graph):
        n = graph.n
        dout = graph.out_degrees()
        rows = np.fromiter((i for (i, j) in graph.edges), dtype=np.int64,
                           count=len(graph.edges))
        cols = np.fromiter((j for (i, j) in graph.edges), dtype=np.int64,
                           count=len(graph.edges))
        vals = 1.0 / dout[rows] if len(rows) else np.zeros(0)
        self.n = n
        self.sparse = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        self.dangling = dout == 0

    def row_sums(self):
        """Explicit + implicit row sums; all ones for a valid matrix."""
        s = np.asarray(self.sparse.sum(axis=1)).ravel()
        s[self.dangling] = 1.0
        return s


class GoogleMatrix:
    """Damped random-surfer matrix in column-stochastic orientation."""

    def __init__(self, transition, alpha_g=DEFAULT_DAMPING):
        if not (0.0 < alpha_g < 1.0):
            raise ValueError("alpha_g must lie in (0,1)")
        self.base = transition
        self.alpha_g = float(alpha_g)
        self.n = transition.n
        self._sparse_T = transition.sparse.T.tocsr()
        self._dangling = transition.dangling.astype(float)

    def apply(self, v):
        """Return G v."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError("vector length %r, expected %d"
                             % (v.shape, self.n))
        a = self.alpha_g
        uniform = (a * float(v @ self._dangling)
                   + (1.0 - a) * float(v.sum())) / self.n
        return a * (self._sparse_T @ v) + uniform

    def apply_transpose(self, w):
        """Return G^T w."""
        w = np.asarray(w, dtype=float)
        if w.shape != (self.n,):
            raise ValueError("vector length %r, expected %d"
                             % (w.shape, self.n))
        a = self.alpha_g
        total = float(w.sum())
        out = a * (self.base.sparse @ w)
        out += (a * total / self.n) * self._dangling
        out += (1.0 - a) / self.n * total
        return out

    def to_dense(self):
        if self.n > DENSE_LIMIT:
            raise ValueError("refusing to materialize n=%d > %d"
                             % (self.n, DENSE_LIMIT))
        a = self.alpha_g
        P = self.base.sparse.toarray()
        P[self.base.dangling, :] = 1.0 / self.n
        return a * P.T + (1.0 - a) / self.n


def transition_matrix(graph):
    return TransitionMatrix(graph)


def google_matrix(graph, alpha_g=DEFAULT_DAMPING):
    return GoogleMatrix(TransitionMatrix(graph), alpha_g)


def apply_G(gm, v):
    return gm.apply(v)


def dense_google(gm):
    return gm.to_dense()


def pagerank_power(gm, tol=1e-12, max_iter=100000):
    """Power iteration for the dominant (eigenvalue 1) vector of G.

    Starts uniform, iterates v <- G v, stops when the 1-norm change drops
    below tol.  Damping makes the iteration contract geometrically at rate
    alpha_g, so the loop bound is generous.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = gm.n
    v = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        w = gm.apply(v)
        w /= w.sum()  # guard drift; G is column-stochastic so this is ~1
        err = np.abs(w - v).sum()
        v = w
        if err < tol:
            return v
    raise ConvergenceError(
        "power iteration stalled at residual %.3e after %d iterations"
        % (err, max_iter), residual=err)


def write_rank_csv(path, rank):
    with open(path, "w", newline="") as f:
        f.write("index,value\n")
        for i, x in enumerate(rank):
            f.write("%d,%r\n" % (i, float(x)))
