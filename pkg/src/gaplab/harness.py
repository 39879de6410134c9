"""Ensemble sweeps: configuration, seeding, execution, records, summaries.

A sweep walks a grid of (size, instance) cells.  Each cell derives its own
64-bit seed from the master seed by splitmix64 mixing, grows a graph, builds
the Google matrix and minimizes the interpolation gap.  Cells are
independent, so they run in parallel; records append to the output CSV in
completion order (making interrupted runs resumable) and the file is
rewritten sorted by (n, instance) at the end.  The sorted rewrite plus
repr-formatted floats make the records file byte-identical for a fixed
config no matter how many workers ran or how the schedule interleaved.

Timing is deliberately excluded from the records file; it lives on the
in-memory record objects only.
"""

import csv
import json
import math
import os
import time
import numpy as np
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, fields

from . import netgen, pagerank, spectral
from .errors import ConvergenceError
from .netgen import PaParams, CopyParams, AlphaPaParams

RECORD_HEADER = ["model", "params", "n", "instance", "seed", "status",
                 "delta", "inverse_delta", "s_star", "lambda0", "lambda1",
                 "solver"]
SUMMARY_HEADER = ["n", "count", "mean_inverse_delta", "std", "stderr",
                  "min", "max", "failures"]

_PARAM_TYPES = {"pa": PaParams, "copy": CopyParams, "alpha_pa": AlphaPaParams}


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    model: str
    params: object
    sizes: tuple
    instances_per_size: int
    master_seed: int
    alpha_g: float = 0.85
    solver: str = "auto"
    n_scan: int = 21
    s_t: int = 200
    out_dir: str = "runs/sweep"
    workers: int = 1

    def __post_init__(self):
        if self.model not in _PARAM_TYPES:
            raise ValueError("unknown model %r" % self.model)
        if not isinstance(self.params, _PARAM_TYPES[self.model]):
            raise ValueError("params type does not match model %r"
                             % self.model)
        self.sizes = tuple(int(n) for n in self.sizes)
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if not self.sizes:
            raise ValueError("no sizes given")
        if self.instances_per_size < 1:
            raise ValueError("instances_per_size must be >= 1")
        if not (0 <= self.master_seed < 2 ** 64):
            raise ValueError("master_seed must fit in 64 bits")
        if self.solver not in ("auto", "dense", "iterative"):
            raise ValueError("solver must be auto, dense or iterative")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def params_from_dict(model, d):
    cls = _PARAM_TYPES.get(model)
    if cls is None:
        raise ValueError("unknown model %r" % model)
    return cls(**d)


def params_echo(params):
    """Canonical one-field string for the records file, e.g. m_x=1;p_x=0.5."""
    parts = []
    for f in fields(params):
        v = getattr(params, f.name)
        parts.append("%s=%s" % (f.name, repr(v) if isinstance(v, float)
                                else str(v)))
    return ";".join(parts)


def params_from_echo(model, echo):
    d = {}
    for part in echo.split(";"):
        k, v = part.split("=")
        d[k] = float(v) if ("." in v or "e" in v or "inf" in v) else int(v)
    return params_from_dict(model, d)


def config_from_dict(d):
    d = dict(d)
    model = d.pop("model")
    if "params" in d and "targets" in d:
        raise ValueError("give either params or targets, not both")
    if "targets" in d:
        t = d.pop("targets")
        params = params_for_targets(model, t["gamma_in"], t["gamma_out"],
                                    t["mean_degree"])
    elif "params" in d:
        params = params_from_dict(model, d.pop("params"))
    else:
        raise ValueError("config needs params or targets")
    return ExperimentConfig(model=model, params=params, **d)


def load_config(path):
    with open(path) as f:
        return config_from_dict(json.load(f))


# ---------------------------------------------------------------------------
# closed-form parameter solving
# ---------------------------------------------------------------------------

def params_for_targets(model, gamma_in, gamma_out, mean_degree):
    """Invert the exponent formulas for the requested model.

    copy:      gamma = (2 - p) / (1 - p)        =>  p = (gamma-2)/(gamma-1)
    alpha_pa:  gamma_in  = (2 + S a - p2)/(1 - p2),
               gamma_out = (2 + S a - p1)/(1 - p1),  S = p1 + p2 = 1/mean
               solved exactly for (p1, p2, alpha)
    pa supports gamma 3 only; composite mean degree fixes m = mean/2.
    """
    if mean_degree <= 0:
        raise ValueError("mean degree must be positive")
    if model == "pa":
        if abs(gamma_in - 3.0) > 1e-9 or abs(gamma_out - 3.0) > 1e-9:
            raise ValueError("preferential attachment pins both exponents "
                             "to 3; requested (%r, %r)" % (gamma_in, gamma_out))
        m = mean_degree / 2.0
        if abs(m - round(m)) > 1e-9 or round(m) < 1:
            raise ValueError("mean degree must be an even positive integer")
        m = int(round(m))
        return PaParams(m, m)
    if model == "copy":
        for g in (gamma_in, gamma_out):
            if g <= 2.0:
                raise ValueError("copy model needs exponents > 2")
        m = mean_degree / 2.0
        if abs(m - round(m)) > 1e-9 or round(m) < 1:
            raise ValueError("mean degree must be an even positive integer")
        m = int(round(m))
        return CopyParams(m, m,
                          (gamma_in - 2.0) / (gamma_in - 1.0),
                          (gamma_out - 2.0) / (gamma_out - 1.0))
    if model == "alpha_pa":
        S = 1.0 / mean_degree
        if S > 1.0:
            raise ValueError("mean degree below 1 needs p1 + p2 > 1")
        a = gamma_in - 1.0
        b = gamma_out - 1.0
        if a <= 0 or b <= 0:
            raise ValueError("exponents must exceed 1")
        A = (2.0 - S) * a * b / (a + b) - 1.0   # A = alpha * S
        if A < 0:
            raise ValueError("targets infeasible: implied alpha negative")
        p2 = (a - 1.0 - A) / a
        p1 = (b - 1.0 - A) / b
        alpha = A / S
        return AlphaPaParams(p1=p1, p2=p2, alpha=alpha)
    raise ValueError("unknown model %r" % model)


# ---------------------------------------------------------------------------
# seeding
# ---------------------------------------------------------------------------

_M64 = (1 << 64) - 1


def _splitmix64(z):
    """One splitmix64 output step; the standard avalanche constants."""
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def derive_seed(master_seed, n, instance_id):
    """Mix (master, n, instance) into one well-spread 64-bit stream seed."""
    return _splitmix64(_splitmix64(_splitmix64(master_seed) ^ n)
                       ^ instance_id)


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    model: str
    params: str
    n: int
    instance: int
    seed: int
    status: str
    delta: float = None
    inverse_delta: float = None
    s_star: float = None
    lambda0: float = None
    lambda1: float = None
    solver: str = ""
    wall_time: float = 0.0   # in-memory only, never serialized


def _run_instance(task):
    """Worker body: one (n, instance) cell.  Must stay picklable/top-level."""
    model, params, n, instance, seed, alpha_g, solver, n_scan = task
    echo = params_echo(params)
    t0 = time.perf_counter()
    rec = RunRecord(model=model, params=echo, n=n, instance=instance,
                    seed=seed, status="ok", solver=solver)
    try:
        rng = np.random.default_rng(seed)
        g = netgen.generate_graph(params, n, rng)
        gm = pagerank.google_matrix(g, alpha_g)
        res = spectral.min_gap(gm, n_scan=n_scan, mode=solver)
        if res.delta <= 0.0:
            rec.status = "degenerate-gap"
        else:
            rec.delta = res.delta
            rec.inverse_delta = 1.0 / res.delta
            rec.s_star = res.s_star
            rec.lambda0 = res.lambda0
            rec.lambda1 = res.lambda1
            rec.solver = res.diagnostics["mode"]
    except ConvergenceError:
        rec.status = "convergence-failure"
    except Exception as e:             # keep the sweep alive; log the class
        rec.status = "error:" + type(e).__name__
    rec.wall_time = time.perf_counter() - t0
    return rec


def _fmt(x):
    return "" if x is None else repr(float(x))


def _record_row(r):
    return [r.model, r.params, str(r.n), str(r.instance), str(r.seed),
            r.status, _fmt(r.delta), _fmt(r.inverse_delta), _fmt(r.s_star),
            _fmt(r.lambda0), _fmt(r.lambda1), r.solver]


def _record_from_row(row):
    def num(s):
        return None if s == "" else float(s)
    return RunRecord(model=row[0], params=row[1], n=int(row[2]),
                     instance=int(row[3]), seed=int(row[4]), status=row[5],
                     delta=num(row[6]), inverse_delta=num(row[7]),
                     s_star=num(row[8]), lambda0=num(row[9]),
                     lambda1=num(row[10]), solver=row[11])


def read_records_csv(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r, None)
        if header is None:
            return []
        if header != RECORD_HEADER:
            raise ValueError("unexpected records header %r" % (header,))
        return [_record_from_row(row) for row in r if row]


def write_records_csv(path, records):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for r in records:
            w.writerow(_record_row(r))
    os.replace(tmp, path)


def run_experiment(config, progress=None):
    """Run (or resume) the full sweep; returns all records sorted.

    Already-recorded (n, instance) cells are skipped, new results append to
    the records file as they finish, and the file is finally rewritten in
    sorted order through a temp file.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    records_path = os.path.join(config.out_dir, "records.csv")
    existing = (read_records_csv(records_path)
                if os.path.exists(records_path) else [])
    done = {(r.n, r.instance) for r in existing}
    tasks = [(config.model, config.params, n, i,
              derive_seed(config.master_seed, n, i),
              config.alpha_g, config.solver, config.n_scan)
             for n in config.sizes
             for i in range(config.instances_per_size)
             if (n, i) not in done]
    new = []
    if tasks:
        with open(records_path, "a", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            if f.tell() == 0:
                w.writerow(RECORD_HEADER)
                f.flush()

            def collect(rec):
                new.append(rec)
                w.writerow(_record_row(rec))
                f.flush()
                if progress is not None:
                    progress(rec)

            if config.workers == 1:
                for t in tasks:
                    collect(_run_instance(t))
            else:
                with ProcessPoolExecutor(max_workers=config.workers) as ex:
                    futures = [ex.submit(_run_instance, t) for t in tasks]
                    for fut in as_completed(futures):
                        collect(fut.result())
    merged = sorted(existing + new, key=lambda r: (r.n, r.instance))
    write_records_csv(records_path, merged)
    return merged


# ---------------------------------------------------------------------------
# summaries and emission
# ---------------------------------------------------------------------------

@dataclass
class SizeSummary:
    n: int
    count: int
    mean_inverse_delta: float
    std: float
    stderr: float
    minimum: float
    maximum: float
    failures: int = 0


def summarize(records):
    """Per-size statistics of inverse delta over successful records."""
    if not records:
        raise ValueError("no records to summarize")
    by_n = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r)
    out = []
    for n in sorted(by_n):
        ok = [r for r in by_n[n] if r.status == "ok"]
        failures = len(by_n[n]) - len(ok)
        if not ok:
            raise ValueError("no successful records at n=%d" % n)
        inv = np.array([r.inverse_delta for r in ok])
        std = float(inv.std())    # population standard deviation
        out.append(SizeSummary(
            n=n, count=len(ok), mean_inverse_delta=float(inv.mean()),
            std=std, stderr=std / math.sqrt(len(ok)),
            minimum=float(inv.min()), maximum=float(inv.max()),
            failures=failures))
    return out


def fit_summaries(summaries):
    """All three scaling forms on the per-size means."""
    from . import analysis
    pts = [(s.n, s.mean_inverse_delta) for s in summaries]
    return [analysis.fit_semilog(pts), analysis.fit_powerlaw(pts),
            analysis.fit_polylog(pts)]


def write_summary_csv(path, summaries):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for s in summaries:
            w.writerow([s.n, s.count, repr(s.mean_inverse_delta),
                        repr(s.std), repr(s.stderr), repr(s.minimum),
                        repr(s.maximum), s.failures])


def read_summary_csv(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != SUMMARY_HEADER:
            raise ValueError("unexpected summary header %r" % (header,))
        return [SizeSummary(int(row[0]), int(row[1]), float(row[2]),
                            float(row[3]), float(row[4]), float(row[5]),
                            float(row[6]), int(row[7]))
                for row in r if row]


def emit_outputs(summaries, fits, out_dir, records=None, make_plots=True):
    """Write summary and fit CSVs, the largest-size gap histogram, plots.

    Returns the list of paths written.  Plot files are byte-stable for
    identical inputs (fixed SVG hash salt, no timestamps).
    """
    from . import analysis
    os.makedirs(out_dir, exist_ok=True)
    written = []

    path = os.path.join(out_dir, "summary.csv")
    write_summary_csv(path, summaries)
    written.append(path)

    path = os.path.join(out_dir, "fits.csv")
    analysis.write_fits_csv(path, fits)
    written.append(path)

    hist = None
    if records:
        n_max = max(r.n for r in records)
        values = [r.inverse_delta for r in records
                  if r.n == n_max and r.status == "ok"]
        if values:
            hist = analysis.value_histogram(values)
            path = os.path.join(out_dir, "gap_histogram.csv")
            with open(path, "w", newline="") as f:
                w = csv.writer(f, lineterminator="\n")
                w.writerow(["left_edge", "count"])
                for i, c in enumerate(hist.counts):
                    w.writerow([repr(hist.edges[i]), c])
            written.append(path)

    if make_plots:
        from . import plots
        path = os.path.join(out_dir, "scaling.svg")
        plots.render_scaling(summaries, fits, path)
        written.append(path)
        if hist is not None:
            path = os.path.join(out_dir, "gap_histogram.svg")
            plots.render_histogram(hist, path)
            written.append(path)
    return written
