"""Degree statistics, adaptive binning, scaling fits.

Raw degree histograms of scale-free ensembles are noisy in the tail where a
handful of hub vertices live.  The adaptive binner sweeps degrees in
ascending order and merges consecutive degrees until each bin holds at least
s_t samples; whatever is left at the end joins the final bin.  A bin reports
the count-weighted mean degree and the per-degree probability (bin mass
divided by the degree span it covers), which keeps power-law slopes intact
under merging.

Three scaling fits are provided for inverse-gap-versus-size data, all plain
least squares in transformed coordinates:

    semilog    y = a ln(n) + b        (fit y against ln n)
    powerlaw   y = a n^b              (fit ln y against ln n)
    polylog    y = a ln(n)^b          (fit ln y against ln ln n)

Residuals are root-mean-square in the transformed space, so the three forms
can be compared side by side.
"""

import csv
import math
import numpy as np
from dataclasses import dataclass

DEFAULT_SAMPLE_THRESHOLD = 200


@dataclass(frozen=True)
class DegreeCounts:
    direction: str
    counts: dict
    total_observations: int

    def __post_init__(self):
        if self.direction not in ("in", "out", "total"):
            raise ValueError("direction must be in, out or total")
        if sum(self.counts.values()) != self.total_observations:
            raise ValueError("counts do not sum to total_observations")
        if any(k < 0 for k in self.counts):
            raise ValueError("negative degree key")


@dataclass(frozen=True)
class Bin:
    mean_degree: float
    mean_probability: float
    samples: int
    degree_span: int


@dataclass(frozen=True)
class BinnedDistribution:
    bins: tuple
    s_t: int
    total_observations: int

    def __post_init__(self):
        degs = [b.mean_degree for b in self.bins]
        if any(x >= y for x, y in zip(degs, degs[1:])):
            raise ValueError("bins not strictly increasing in mean degree")
        if any(b.samples < self.s_t for b in self.bins[:-1]):
            raise ValueError("interior bin below sample threshold")
        mass = sum(b.mean_probability * b.degree_span for b in self.bins)
        expect = sum(b.samples for b in self.bins) / self.total_observations
        if abs(mass - expect) > 1e-12:
            raise ValueError("probability mass not conserved")


@dataclass(frozen=True)
class FitResult:
    form: str
    a: float
    b: float
    residual: float
    points_used: int


def degree_counts(graphs, direction):
    """Pool per-vertex degrees over a collection of simple digraphs."""
    graphs = list(graphs)
    if not graphs:
        raise ValueError("empty graph collection")
    counts = {}
    total = 0
    for g in graphs:
        if direction == "in":
            degs = g.in_degrees()
        elif direction == "out":
            degs = g.out_degrees()
        elif direction == "total":
            degs = g.in_degrees() + g.out_degrees()
        else:
            raise ValueError("direction must be in, out or total")
        for d in degs:
            d = int(d)
            counts[d] = counts.get(d, 0) + 1
        total += g.n
    return DegreeCounts(direction, counts, total)


def adaptive_bin(counts, s_t=DEFAULT_SAMPLE_THRESHOLD):
    """Aggregate a degree histogram into bins of at least s_t samples.

    Ascending sweep; a degree with s_t samples on its own becomes a
    singleton bin, otherwise consecutive degrees merge until the threshold
    is met.  Leftover degrees at the top merge into the final emitted bin
    (or form the only bin when nothing met the threshold).  Bin spans count
    every integer degree between the first and last merged, including
    interior degrees that happened to have zero samples.
    """
    if s_t < 1:
        raise ValueError("s_t must be >= 1")
    ks = sorted(k for k, c in counts.counts.items() if c > 0)
    if not ks:
        raise ValueError("no samples to bin")
    groups = []
    cur = None
    for k in ks:
        c = counts.counts[k]
        if cur is None:
            cur = [k, k, c, k * c]          # first, last, samples, ksum
        else:
            cur[1] = k
            cur[2] += c
            cur[3] += k * c
        if cur[2] >= s_t:
            groups.append(cur)
            cur = None
    if cur is not None:
        if groups:
            groups[-1][1] = cur[1]
            groups[-1][2] += cur[2]
            groups[-1][3] += cur[3]
        else:
            groups.append(cur)
    total = counts.total_observations
    bins = tuple(
        Bin(mean_degree=ksum / samples,
            mean_probability=samples / (total * (last - first + 1)),
            samples=samples,
            degree_span=last - first + 1)
        for first, last, samples, ksum in groups)
    return BinnedDistribution(bins, s_t, total)


# ---------------------------------------------------------------------------
# scaling fits
# ---------------------------------------------------------------------------

def _prepare(points):
    pts = sorted((float(n), float(y)) for n, y in points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    ns = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if len(np.unique(ns)) < 2:
        raise ValueError("degenerate fit: all sizes equal")
    return ns, ys


def _linear_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return float(slope), float(intercept), rms


def fit_semilog(points):
    """Least squares for y = a ln(n) + b."""
    ns, ys = _prepare(points)
    if np.any(ns <= 1):
        raise ValueError("semilog fit needs n > 1")
    a, b, rms = _linear_fit(np.log(ns), ys)
    return FitResult("semilog", a, b, rms, len(ns))


def fit_powerlaw(points):
    """Least squares for y = a n^b (linear in log-log space)."""
    ns, ys = _prepare(points)
    if np.any(ns <= 1):
        raise ValueError("powerlaw fit needs n > 1")
    if np.any(ys <= 0):
        raise ValueError("powerlaw fit needs positive values")
    slope, intercept, rms = _linear_fit(np.log(ns), np.log(ys))
    return FitResult("powerlaw", float(np.exp(intercept)), slope, rms, len(ns))


def fit_polylog(points):
    """Least squares for y = a ln(n)^b (linear in ln y vs ln ln n)."""
    ns, ys = _prepare(points)
    if np.any(ns <= math.e):
        raise ValueError("polylog fit needs n > e")
    if np.any(ys <= 0):
        raise ValueError("polylog fit needs positive values")
    slope, intercept, rms = _linear_fit(np.log(np.log(ns)), np.log(ys))
    return FitResult("polylog", float(np.exp(intercept)), slope, rms, len(ns))


def tail_exponent(binned, k_min):
    """Power-law exponent gamma from the binned tail.

    Fits log(mean probability) against log(mean degree) over bins whose mean
    degree is at least k_min and returns the negated slope.  A sensible
    k_min is about twice the mean degree, enough to clear the
    non-asymptotic head of the distribution.
    """
    pts = [(b.mean_degree, b.mean_probability) for b in binned.bins
           if b.mean_degree >= k_min and b.mean_probability > 0]
    if len(pts) < 3:
        raise ValueError("need at least 3 qualifying bins, have %d" % len(pts))
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, _, _ = _linear_fit(x, y)
    return -slope


# ---------------------------------------------------------------------------
# plain fixed-width histograms (for gap ensembles and similar value lists)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Histogram:
    edges: tuple
    counts: tuple

    def as_dict(self):
        return {self.edges[i]: self.counts[i] for i in range(len(self.counts))}


def freedman_diaconis_width(values):
    """2 IQR m^(-1/3); returns 0 for degenerate (constant-ish) samples."""
    v = np.asarray(values, dtype=float)
    q75, q25 = np.percentile(v, [75.0, 25.0])
    return float(2.0 * (q75 - q25) * len(v) ** (-1.0 / 3.0))


def value_histogram(values, bin_width=None):
    """Fixed-width histogram over [min, max].

    Without an explicit width the Freedman-Diaconis rule is used; if that
    degenerates to zero (tight or constant data) the full range becomes a
    single bin.
    """
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValueError("empty value list")
    if bin_width is not None and bin_width <= 0:
        raise ValueError("bin width must be positive")
    lo, hi = float(v.min()), float(v.max())
    if bin_width is None:
        bin_width = freedman_diaconis_width(v)
    if bin_width <= 0 or hi == lo:
        edges = np.array([lo, hi if hi > lo else lo + 1.0])
    else:
        # half-open [e, e+w) bins: the max value opens one more bin instead
        # of sitting on a closed right edge
        nbins = int(math.floor((hi - lo) / bin_width)) + 1
        edges = lo + bin_width * np.arange(nbins + 1)
    counts, edges = np.histogram(v, bins=edges)
    return Histogram(tuple(float(e) for e in edges),
                     tuple(int(c) for c in counts))


# ---------------------------------------------------------------------------
# CSV interfaces
# ---------------------------------------------------------------------------

BINNED_HEADER = ["degree", "probability", "samples", "span"]
FIT_HEADER = ["form", "a", "b", "residual", "points"]


def write_binned_csv(path, binned):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(BINNED_HEADER)
        for b in binned.bins:
            w.writerow([repr(b.mean_degree), repr(b.mean_probability),
                        b.samples, b.degree_span])


def read_binned_csv(path, s_t=DEFAULT_SAMPLE_THRESHOLD):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != BINNED_HEADER:
            raise ValueError("unexpected header %r" % (header,))
        bins = [Bin(float(row[0]), float(row[1]), int(row[2]), int(row[3]))
                for row in r if row]
    total = sum(b.samples for b in bins)
    # reconstruct a distribution object; mass bookkeeping needs the original
    # observation count, which equals total when the bins cover everything
    return BinnedDistribution(tuple(bins), s_t, total)


def write_fits_csv(path, fits):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(FIT_HEADER)
        for fit in fits:
            w.writerow([fit.form, repr(fit.a), repr(fit.b),
                        repr(fit.residual), fit.points_used])


def read_fits_csv(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != FIT_HEADER:
            raise ValueError("unexpected header %r" % (header,))
        return [FitResult(row[0], float(row[1]), float(row[2]),
                          float(row[3]), int(row[4]))
                for row in r if row]
