"""Figure rendering for sweep outputs.

All figures are written as SVG with a fixed hash salt and no date metadata,
so re-rendering identical inputs produces byte-identical files.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

plt.rcParams["svg.hashsalt"] = "gaplab"
plt.rcParams["svg.fonttype"] = "path"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_scaling(summaries, fits, path):
    """Mean inverse gap vs size, semilog and log-log panels side by side."""
    ns = np.array([s.n for s in summaries], dtype=float)
    means = np.array([s.mean_inverse_delta for s in summaries])
    errs = np.array([s.stderr for s in summaries])
    fit_by_form = {f.form: f for f in fits}
    dense = np.linspace(ns.min(), ns.max(), 256)

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6),
                                   constrained_layout=True)

    ax1.errorbar(ns, means, yerr=errs, fmt="o", ms=4, capsize=3,
                 color="tab:blue", label="ensemble mean")
    if "semilog" in fit_by_form:
        f = fit_by_form["semilog"]
        ax1.plot(dense, f.a * np.log(dense) + f.b, "-", color="tab:orange",
                 label="%.3g ln(n) %+.3g" % (f.a, f.b))
    ax1.set_xscale("log")
    ax1.set_xlabel("n")
    ax1.set_ylabel(r"mean $\delta^{-1}$")
    ax1.set_title("log-linear")
    ax1.legend(fontsize=8)

    ax2.errorbar(ns, means, yerr=errs, fmt="o", ms=4, capsize=3,
                 color="tab:blue", label="ensemble mean")
    if "powerlaw" in fit_by_form:
        f = fit_by_form["powerlaw"]
        ax2.plot(dense, f.a * dense ** f.b, "-", color="tab:green",
                 label=r"%.3g $n^{%.3g}$" % (f.a, f.b))
    if "polylog" in fit_by_form:
        f = fit_by_form["polylog"]
        ax2.plot(dense, f.a * np.log(dense) ** f.b, "--", color="tab:red",
                 label=r"%.3g $\ln^{%.3g}(n)$" % (f.a, f.b))
    ax2.set_xscale("log")
    ax2.set_yscale("log")
    ax2.set_xlabel("n")
    ax2.set_ylabel(r"mean $\delta^{-1}$")
    ax2.set_title("log-log")
    ax2.legend(fontsize=8)

    _save(fig, path)
    return path


def render_histogram(hist, path, xlabel=r"$\delta^{-1}$"):
    """Bar rendering of a fixed-width Histogram."""
    edges = np.asarray(hist.edges)
    counts = np.asarray(hist.counts)
    widths = np.diff(edges)
    fig, ax = plt.subplots(figsize=(5.0, 3.4), constrained_layout=True)
    ax.bar(edges[:-1], counts, width=widths, align="edge",
           color="tab:blue", edgecolor="white")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    _save(fig, path)
    return path


def render_degree_distribution(binned_by_label, path, guide=None):
    """Log-log scatter of binned degree distributions.

    binned_by_label maps a legend label to a BinnedDistribution.  guide, if
    given, is a (slope, anchor_k, anchor_p) triple drawn as a dashed power
    law for visual reference.
    """
    fig, ax = plt.subplots(figsize=(5.0, 3.8), constrained_layout=True)
    markers = ["o", "s", "D", "^", "v", "x"]
    for i, (label, binned) in enumerate(sorted(binned_by_label.items())):
        ks = [b.mean_degree for b in binned.bins if b.mean_probability > 0]
        ps = [b.mean_probability for b in binned.bins
              if b.mean_probability > 0]
        ax.plot(ks, ps, markers[i % len(markers)], ms=4, ls="none",
                label=label)
    if guide is not None:
        slope, k0, p0 = guide
        ks = np.logspace(np.log10(k0), np.log10(k0) + 2, 32)
        ax.plot(ks, p0 * (ks / k0) ** slope, "k--", lw=1,
                label="slope %.3g" % slope)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("degree")
    ax.set_ylabel("probability")
    ax.legend(fontsize=8)
    _save(fig, path)
    return path
