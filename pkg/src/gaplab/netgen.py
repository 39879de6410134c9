"""Directed scale-free graph generators.

Three growth families are provided, all seeded from the complete directed
graph with self-loops on m+1 vertices:

  * preferential attachment: new vertex emits m edges, targets drawn with
    probability proportional to total (in + out) degree
  * copying: new vertex either duplicates a uniformly chosen star vertex's
    outgoing edges, or emits m uniform random edges
  * alpha-preferential attachment: a three-way step mix that adds vertices
    with a single out- or in-edge, or an edge alone, with attachment
    probability proportional to (degree + alpha)

The first two build composite graphs: one copy grown normally (X) and one
grown with every edge direction mirrored (Y), added together with weights
clipped to one and loops dropped.  The third produces a digraph directly.
All growth is bit-reproducible given the same numpy Generator.
"""

import numpy as np
from dataclasses import dataclass


class MultiDigraph:
    """Mutable adjacency-list multigraph used during growth.

    Parallel edges and self-loops are allowed; they are cleaned up by
    simplify()/compose_and_simplify() once growth finishes.
    """

    def __init__(self, n0=0):
        self.out = [[] for _ in range(n0)]
        self.indeg = [0] * n0

    @property
    def node_count(self):
        return len(self.out)

    def add_node(self):
        self.out.append([])
        self.indeg.append(0)
        return len(self.out) - 1

    def add_edge(self, i, j):
        self.out[i].append(j)
        self.indeg[j] += 1

    def out_degree(self, i):
        return len(self.out[i])

    def in_degree(self, i):
        return self.indeg[i]

    def num_edges(self):
        return sum(len(t) for t in self.out)

    def edges(self):
        for i, targets in enumerate(self.out):
            for j in targets:
                yield (i, j)


class SimpleDigraph:
    """Immutable simple digraph: no loops, no parallel edges.

    Edges are kept sorted lexicographically, which doubles as the canonical
    serialization order.
    """

    def __init__(self, n, edges):
        self.n = int(n)
        seen = set()
        for (i, j) in edges:
            if i == j:
                raise ValueError("self-loop (%d,%d) in SimpleDigraph" % (i, j))
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError("edge (%d,%d) outside node range" % (i, j))
            if (i, j) in seen:
                raise ValueError("duplicate edge (%d,%d)" % (i, j))
            seen.add((i, j))
        self.edges = sorted(seen)
        self._dout = np.zeros(self.n, dtype=np.int64)
        self._din = np.zeros(self.n, dtype=np.int64)
        for (i, j) in self.edges:
            self._dout[i] += 1
            self._din[j] += 1

    @property
    def num_edges(self):
        return len(self.edges)

    def out_degrees(self):
        return self._dout.copy()

    def in_degrees(self):
        return self._din.copy()

    def write_text(self, path):
        with open(path, "w") as f:
            f.write("n %d\n" % self.n)
            for (i, j) in self.edges:
                f.write("%d %d\n" % (i, j))

    @classmethod
    def read_text(cls, path):
        with open(path) as f:
            header = f.readline().split()
            if len(header) != 2 or header[0] != "n":
                raise ValueError("bad edge-list header in %s" % path)
            n = int(header[1])
            edges = []
            for line in f:
                if not line.strip():
                    continue
                i, j = line.split()
                edges.append((int(i), int(j)))
        return cls(n, edges)


# ---------------------------------------------------------------------------
# model parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PaParams:
    """Preferential-attachment composite: m_x out-edges in X, m_y in Y."""
    m_x: int = 1
    m_y: int = 1

    def __post_init__(self):
        if self.m_x < 1 or self.m_y < 1:
            raise ValueError("edge counts must be >= 1")


@dataclass(frozen=True)
class CopyParams:
    """Copying composite; p_x/p_y are the uniform-branch probabilities."""
    m_x: int = 1
    m_y: int = 1
    p_x: float = 0.5
    p_y: float = 0.5

    def __post_init__(self):
        if self.m_x < 1 or self.m_y < 1:
            raise ValueError("edge counts must be >= 1")
        if not (0.0 < self.p_x < 1.0 and 0.0 < self.p_y < 1.0):
            raise ValueError("copy probabilities must lie in (0,1)")


@dataclass(frozen=True)
class AlphaPaParams:
    """alpha-preferential attachment step mix (p1, p2, alpha)."""
    p1: float = 0.25
    p2: float = 0.25
    alpha: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.p1 < 1.0 and 0.0 < self.p2 < 1.0):
            raise ValueError("p1, p2 must lie in (0,1)")
        if self.p1 + self.p2 > 1.0:
            raise ValueError("p1 + p2 must not exceed 1")
        if self.alpha < 0.0:
            raise ValueError("alpha must be non-negative")


@dataclass(frozen=True)
class ExponentPair:
    gamma_in: float
    gamma_out: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma_in) and np.isfinite(self.gamma_out)):
            raise ValueError("exponents must be finite")
        if self.gamma_in <= 1.0 or self.gamma_out <= 1.0:
            raise ValueError("exponents must exceed 1")


def model_name(params):
    if isinstance(params, PaParams):
        return "pa"
    if isinstance(params, CopyParams):
        return "copy"
    if isinstance(params, AlphaPaParams):
        return "alpha_pa"
    raise TypeError("unknown parameter type %r" % (params,))


# ---------------------------------------------------------------------------
# growth
# ---------------------------------------------------------------------------

def seed_graph(m):
    """Complete directed graph including loops on m+1 vertices."""
    if m < 1:
        raise ValueError("m must be >= 1")
    g = MultiDigraph(m + 1)
    for i in range(m + 1):
        for j in range(m + 1):
            g.add_edge(i, j)
    return g


def transpose(g):
    r = MultiDigraph(g.node_count)
    for (i, j) in g.edges():
        r.add_edge(j, i)
    return r


def grow_pa(m, n, rng, reverse_direction=False):
    """Grow by preferential attachment to total degree.

    Each new vertex emits m edges to pre-existing vertices; target choice is
    proportional to total degree, updated after every single edge.  The pool
    list holds one entry per unit of degree, so a uniform pool draw is the
    degree-proportional draw.  With reverse_direction the finished graph is
    transposed, which realizes the mirrored construction (total degree is
    direction-blind, so the processes are identical up to transposition).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n < m + 1:
        raise ValueError("n must be at least m+1")
    g = seed_graph(m)
    pool = []
    for (i, j) in g.edges():
        pool.append(i)
        pool.append(j)
    while g.node_count < n:
        v = g.add_node()
        for _ in range(m):
            j = pool[rng.integers(len(pool))]
            g.add_edge(v, j)
            pool.append(j)
        # the new vertex's own out-stubs join the pool only now: it is not
        # a valid target during its own step
        pool.extend([v] * m)
    return transpose(g) if reverse_direction else g


def grow_copy(m, p, n, rng, reverse_direction=False):
    """Grow by the copying rule.

    With probability p the new vertex emits m edges to uniform random
    pre-existing targets (drawn with replacement; duplicates collapse at
    simplification).  Otherwise it duplicates every outgoing edge of a
    uniformly chosen star vertex.  Note the star may have out-degree m+1
    (seed vertices do, and duplication propagates it), so out-degrees live
    in {m, m+1}, not {m} alone.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not (0.0 < p < 1.0):
        raise ValueError("p must lie in (0,1)")
    if n < m + 1:
        raise ValueError("n must be at least m+1")
    g = seed_graph(m)
    while g.node_count < n:
        v = g.add_node()
        if rng.random() < p:
            for _ in range(m):
                g.add_edge(v, int(rng.integers(v)))
        else:
            star = int(rng.integers(v))
            for t in list(g.out[star]):
                g.add_edge(v, t)
    return transpose(g) if reverse_direction else g


def grow_alpha_pa(params, n, rng):
    """Grow by the alpha-preferential attachment step mix.

    Per step: with probability p1 a new vertex arrives with one outgoing
    edge (target drawn proportional to in-degree + alpha); with probability
    p2 a new vertex arrives with one incoming edge (source proportional to
    out-degree + alpha); otherwise only an edge is added, source and target
    drawn the same way (self-loops possible here).  Steps repeat until the
    vertex count reaches n; edge-only steps do not advance it.

    The biased draw uses a two-part mixture: the total weight over n_cur
    vertices is E + n_cur*alpha where E is the current edge count, so with
    probability E/(E + n_cur*alpha) we draw uniformly from a pool holding
    one entry per unit of degree, else uniformly from all vertices.
    """
    if not isinstance(params, AlphaPaParams):
        raise TypeError("params must be AlphaPaParams")
    if n < 2:
        raise ValueError("n must be at least 2")
    g = seed_graph(1)
    in_pool = []
    out_pool = []
    for (i, j) in g.edges():
        out_pool.append(i)
        in_pool.append(j)
    alpha = params.alpha

    def draw(pool, n_cur):
        e = len(pool)
        if rng.random() < e / (e + n_cur * alpha):
            return pool[rng.integers(e)]
        return int(rng.integers(n_cur))

    while g.node_count < n:
        u = rng.random()
        if u < params.p1:
            j = draw(in_pool, g.node_count)
            v = g.add_node()
            g.add_edge(v, j)
            out_pool.append(v)
            in_pool.append(j)
        elif u < params.p1 + params.p2:
            j = draw(out_pool, g.node_count)
            v = g.add_node()
            g.add_edge(j, v)
            out_pool.append(j)
            in_pool.append(v)
        else:
            j = draw(in_pool, g.node_count)
            i = draw(out_pool, g.node_count)
            g.add_edge(i, j)
            out_pool.append(i)
            in_pool.append(j)
    return g


# ---------------------------------------------------------------------------
# composition and cleanup
# ---------------------------------------------------------------------------

def compose_and_simplify(x, y):
    """Add two multigraphs on the same vertex set, clip weights, drop loops."""
    if x.node_count != y.node_count:
        raise ValueError("node counts differ: %d vs %d"
                         % (x.node_count, y.node_count))
    s = set(x.edges()) | set(y.edges())
    return SimpleDigraph(x.node_count, [(i, j) for (i, j) in s if i != j])


def simplify(g):
    """Single-graph case of the same discard rule."""
    s = set(g.edges())
    return SimpleDigraph(g.node_count, [(i, j) for (i, j) in s if i != j])


def generate_graph(params, n, rng, allow_unequal_m=False):
    """Grow the finished simple digraph for any parameter set.

    Composite models grow X normally and Y mirrored, then add them.  Unequal
    m_x/m_y distorts the degree distributions away from a clean power law
    over a wide range, so it is refused unless explicitly allowed.
    """
    if isinstance(params, PaParams):
        if params.m_x != params.m_y and not allow_unequal_m:
            raise ValueError("m_x != m_y breaks scale-freeness; "
                             "pass allow_unequal_m=True to force")
        x = grow_pa(params.m_x, n, rng)
        y = grow_pa(params.m_y, n, rng, reverse_direction=True)
        return compose_and_simplify(x, y)
    if isinstance(params, CopyParams):
        if params.m_x != params.m_y and not allow_unequal_m:
            raise ValueError("m_x != m_y breaks scale-freeness; "
                             "pass allow_unequal_m=True to force")
        x = grow_copy(params.m_x, params.p_x, n, rng)
        y = grow_copy(params.m_y, params.p_y, n, rng, reverse_direction=True)
        return compose_and_simplify(x, y)
    if isinstance(params, AlphaPaParams):
        return simplify(grow_alpha_pa(params, n, rng))
    raise TypeError("unknown parameter type %r" % (params,))


# ---------------------------------------------------------------------------
# closed-form predictions
# ---------------------------------------------------------------------------

def predicted_exponents(params):
    """Degree-distribution exponents implied by the growth parameters."""
    if isinstance(params, PaParams):
        return ExponentPair(3.0, 3.0)
    if isinstance(params, CopyParams):
        return ExponentPair((2.0 - params.p_x) / (1.0 - params.p_x),
                            (2.0 - params.p_y) / (1.0 - params.p_y))
    if isinstance(params, AlphaPaParams):
        p1, p2, a = params.p1, params.p2, params.alpha
        return ExponentPair((2.0 + (p1 + p2) * a - p2) / (1.0 - p2),
                            (2.0 + (p1 + p2) * a - p1) / (1.0 - p1))
    raise TypeError("unknown parameter type %r" % (params,))


def composite_offset_prediction(m_x, m_y, k, direction="in"):
    """Unnormalized offset power law for the unequal-m composite.

    In-degree form (k + m_x - m_y)^-3, out-degree form mirrored.  With
    m_x = m_y both collapse to a pure cubic decay.
    """
    if direction == "in":
        base = k + m_x - m_y
    elif direction == "out":
        base = k - m_x + m_y
    else:
        raise ValueError("direction must be 'in' or 'out'")
    if base <= 0:
        raise ValueError("offset form undefined at k=%r (base %r)" % (k, base))
    return float(base) ** -3.0
