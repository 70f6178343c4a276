"""Command-line benchmark harness: ``growthdist-bench``."""

import argparse
import sys

from .bench import (
    BenchConfig,
    find_instance,
    run_suite,
    trace_convergence,
    vertex_scaling_study,
    write_trace_csv,
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="growthdist-bench",
        description="Randomized growth-distance benchmarks, warm-start comparisons, "
        "and per-iteration convergence traces.",
    )
    p.add_argument("--shape-class", default="curved-primitives",
                   choices=["curved-primitives", "polytopes", "meshes"])
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--poses", type=int, default=100)
    p.add_argument("--repeats", type=int, default=100,
                   help="function calls averaged per timing sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps-tol", type=float, default=1.49e-8)
    p.add_argument("--k-max", type=int, default=100)
    p.add_argument("--warm-start", action="store_true",
                   help="paired cold/warm runs after a small rigid displacement")
    p.add_argument("--displacement-frac", type=float, default=0.01)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--vertices", type=int, default=8,
                   help="vertex count for the polytope shape class")
    p.add_argument("--mesh-vertices", type=int, default=120,
                   help="vertex count for synthetic mesh hulls")
    p.add_argument("--mesh-dir", default=None, help="directory of OFF files to use as meshes")
    p.add_argument("--trace", metavar="INSTANCE_ID", default=None,
                   help="emit the per-iteration convergence trace of one instance")
    p.add_argument("--scaling-study", default=None,
                   help="comma-separated vertex counts, e.g. 10,100,1000,4000")
    p.add_argument("--out", default=None, help="output CSV path")
    return p


def _config(args) -> BenchConfig:
    return BenchConfig(
        shape_class=args.shape_class,
        pairs=args.pairs,
        poses_per_pair=args.poses,
        repeats_per_call=args.repeats,
        seed=args.seed,
        warm_start=args.warm_start,
        displacement_frac=args.displacement_frac,
        dim=args.dim,
        eps_tol=args.eps_tol,
        k_max=args.k_max,
        polytope_vertices=args.vertices,
        mesh_vertices=args.mesh_vertices,
        mesh_dir=args.mesh_dir,
    )


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    config = _config(args)

    if args.trace is not None:
        pair, _ = find_instance(config, args.trace)
        rows = trace_convergence(pair, config.solver_config())
        if args.out:
            write_trace_csv(args.out, rows)
            print(f"wrote {len(rows)} trace rows to {args.out}")
        else:
            print("k,beta_lower,beta_upper,gap")
            for k, bl, bu, gap in rows:
                print(f"{k},{bl:.17g},{bu:.17g},{gap:.17g}")
        return 0

    if args.scaling_study is not None:
        ns = [int(tok) for tok in args.scaling_study.split(",") if tok]
        rows = vertex_scaling_study(ns, dim=args.dim, seed=args.seed)
        print(f"{'N':>6} {'plain [s]':>12} {'hill climb [s]':>15}")
        for row in rows:
            print(f"{row['n']:>6} {row['time_plain']:>12.3e} {row['time_hill']:>15.3e}")
        return 0

    summary, _ = run_suite(config, out_path=args.out)
    print(f"shape class     : {config.shape_class} (dim {config.dim})")
    print(f"calls           : {summary['calls']}")
    print(f"median iters    : {summary['median_iterations']:g}")
    print("time percentiles:")
    for q, v in summary["time_percentiles"].items():
        print(f"  {q:>6}%: {v * 1e6:10.2f} us")
    print(f"max primal infeasibility: {summary['max_primal_infeasibility']:.3e} m")
    print(f"convergence failures    : {summary['convergence_failures']}")
    if config.warm_start:
        print(f"median cold iters       : {summary['median_cold_iterations']:g}")
        print(f"total iteration delta   : {summary['total_iteration_delta']}")
    if args.out:
        print(f"records written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
