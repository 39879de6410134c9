"""Command-line front end.

Subcommands: generate, gap, sweep, analyze, fit, plot.  Exit codes: 0 on
success, 1 for usage errors, 2 for runtime failures.
"""

import argparse
import dataclasses
import os
import sys
import numpy as np

from . import analysis, harness, netgen, pagerank, spectral


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(1)


def _build_params(args):
    if args.targets is not None:
        gin, gout, mean = args.targets
        return harness.params_for_targets(args.model, gin, gout, mean)
    if args.model == "pa":
        return netgen.PaParams(args.m, args.m)
    if args.model == "copy":
        return netgen.CopyParams(args.m, args.m, args.p_x, args.p_y)
    return netgen.AlphaPaParams(args.p1, args.p2, args.alpha)


def cmd_generate(args):
    params = _build_params(args)
    rng = np.random.default_rng(args.seed)
    g = netgen.generate_graph(params, args.n, rng)
    g.write_text(args.out)
    print("wrote %s: n=%d edges=%d model=%s %s"
          % (args.out, g.n, g.num_edges, args.model,
             harness.params_echo(params)))
    return 0


def cmd_gap(args):
    g = netgen.SimpleDigraph.read_text(args.graph)
    gm = pagerank.google_matrix(g, args.alpha_g)
    res = spectral.min_gap(gm, n_scan=args.n_scan, mode=args.solver)
    print("delta=%r inverse_delta=%r s_star=%r lambda0=%r lambda1=%r "
          "probes=%d mode=%s"
          % (res.delta, 1.0 / res.delta if res.delta > 0 else float("inf"),
             res.s_star, res.lambda0, res.lambda1,
             res.diagnostics["evaluations"], res.diagnostics["mode"]))
    if args.out:
        with open(args.out, "w", newline="") as f:
            f.write("s,delta\n")
            for s, d in res.evaluations:
                f.write("%r,%r\n" % (s, d))
        print("trace written to %s" % args.out)
    return 0


def cmd_sweep(args):
    config = harness.load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.solver is not None:
        overrides["solver"] = args.solver
    if args.out is not None:
        overrides["out_dir"] = args.out
    if overrides:
        config = dataclasses.replace(config, **overrides)

    done = [0]

    def progress(rec):
        done[0] += 1
        print("  [%d] n=%d instance=%d status=%s (%.2fs)"
              % (done[0], rec.n, rec.instance, rec.status, rec.wall_time),
              flush=True)

    total = len(config.sizes) * config.instances_per_size
    print("sweep: model=%s sizes=%s instances=%d workers=%d -> %s"
          % (config.model, list(config.sizes), config.instances_per_size,
             config.workers, config.out_dir))
    records = harness.run_experiment(config, progress=progress)
    print("%d/%d records in %s" % (len(records), total, config.out_dir))
    summaries = harness.summarize(records)
    fits = harness.fit_summaries(summaries)
    paths = harness.emit_outputs(summaries, fits, config.out_dir,
                                 records=records,
                                 make_plots=not args.no_plots)
    for s in summaries:
        print("n=%-6d mean(1/delta)=%-12.6g std=%-12.6g count=%d failures=%d"
              % (s.n, s.mean_inverse_delta, s.std, s.count, s.failures))
    for f in fits:
        print("fit %-8s a=%-12.6g b=%-10.6g rms=%.3g"
              % (f.form, f.a, f.b, f.residual))
    print("outputs: %s" % ", ".join(paths))
    return 0


def cmd_analyze(args):
    records = harness.read_records_csv(args.records)
    if not records:
        raise ValueError("no records in %s" % args.records)
    summaries = harness.summarize(records)
    paths = harness.emit_outputs(summaries, [], args.out, records=records,
                                 make_plots=not args.no_plots)
    for s in summaries:
        print("n=%-6d mean(1/delta)=%-12.6g std=%-12.6g count=%d failures=%d"
              % (s.n, s.mean_inverse_delta, s.std, s.count, s.failures))
    if args.degrees:
        n_max = max(r.n for r in records)
        graphs = []
        for r in records:
            if r.n != n_max or r.status != "ok":
                continue
            params = harness.params_from_echo(r.model, r.params)
            rng = np.random.default_rng(r.seed)
            graphs.append(netgen.generate_graph(params, r.n, rng))
        print("regenerated %d graphs at n=%d for degree analysis"
              % (len(graphs), n_max))
        binned = {}
        for direction in ("in", "out"):
            counts = analysis.degree_counts(graphs, direction)
            b = analysis.adaptive_bin(counts, s_t=args.s_t)
            path = os.path.join(args.out, "degree_%s.csv" % direction)
            analysis.write_binned_csv(path, b)
            paths.append(path)
            binned["%s-degree" % direction] = b
        if not args.no_plots:
            from . import plots
            path = os.path.join(args.out, "degrees.svg")
            plots.render_degree_distribution(binned, path)
            paths.append(path)
    print("outputs: %s" % ", ".join(paths))
    return 0


def cmd_fit(args):
    summaries = harness.read_summary_csv(args.summary)
    fits = harness.fit_summaries(summaries)
    analysis.write_fits_csv(args.out, fits)
    for f in fits:
        print("fit %-8s a=%-12.6g b=%-10.6g rms=%.3g"
              % (f.form, f.a, f.b, f.residual))
    print("wrote %s" % args.out)
    return 0


def cmd_plot(args):
    from . import plots
    summaries = harness.read_summary_csv(args.summary)
    fits = analysis.read_fits_csv(args.fits) if args.fits else []
    os.makedirs(args.out, exist_ok=True)
    paths = [plots.render_scaling(summaries, fits,
                                  os.path.join(args.out, "scaling.svg"))]
    if args.records:
        records = harness.read_records_csv(args.records)
        n_max = max(r.n for r in records)
        values = [r.inverse_delta for r in records
                  if r.n == n_max and r.status == "ok"]
        if values:
            hist = analysis.value_histogram(values)
            paths.append(plots.render_histogram(
                hist, os.path.join(args.out, "gap_histogram.svg")))
    print("outputs: %s" % ", ".join(paths))
    return 0


def build_parser():
    parser = _Parser(prog="gaplab",
                     description="Spectral-gap scaling experiments on "
                                 "directed scale-free graph ensembles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="grow one graph, write its edge list")
    p.add_argument("--model", required=True,
                   choices=["pa", "copy", "alpha_pa"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--m", type=int, default=1,
                   help="edges per new vertex (pa, copy)")
    p.add_argument("--p-x", type=float, default=0.5)
    p.add_argument("--p-y", type=float, default=0.5)
    p.add_argument("--p1", type=float, default=0.25)
    p.add_argument("--p2", type=float, default=0.25)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--targets", type=float, nargs=3, default=None,
                   metavar=("GAMMA_IN", "GAMMA_OUT", "MEAN_DEGREE"),
                   help="solve model parameters for these targets instead")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("gap", help="minimum interpolation gap of one graph")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--alpha-g", type=float, default=0.85)
    p.add_argument("--solver", default="auto",
                   choices=["auto", "dense", "iterative"])
    p.add_argument("--n-scan", type=int, default=21)
    p.add_argument("--out", default=None, metavar="FILE",
                   help="write the probe trace as CSV")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("sweep", help="run a configured ensemble sweep")
    p.add_argument("--config", required=True, metavar="FILE")
    p.add_argument("--seed", type=int, default=None,
                   help="override master seed")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--solver", default=None,
                   choices=["auto", "dense", "iterative"])
    p.add_argument("--out", default=None, metavar="DIR")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze",
                       help="summaries and histograms from a records file")
    p.add_argument("--records", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--degrees", action="store_true",
                   help="regenerate largest-size graphs, bin their degrees")
    p.add_argument("--s-t", type=int, default=200)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit", help="fit scaling forms to a summary file")
    p.add_argument("--summary", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="render figures from summary/fit files")
    p.add_argument("--summary", required=True, metavar="FILE")
    p.add_argument("--fits", default=None, metavar="FILE")
    p.add_argument("--records", default=None, metavar="FILE")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 2
    except Exception as e:
        print("gaplab: error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
