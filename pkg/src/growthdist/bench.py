"""Benchmark and convergence-study harness.

Generates randomized shape-pair instances (primitive parameters swept over
a log-uniform span of configurable width, polytope and mesh vertices drawn
from an aspect-10 ellipsoid surface), times growth distance calls, and
aggregates percentile statistics into CSV records.  Pose translations are
drawn so that a substantial fraction of instances overlap.

Timing covers only the solver call: instance generation happens outside
the measured region, and each measurement averages ``repeats_per_call``
calls of the same query.
"""

import csv
import json
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import QhullError

from .hull import hull_edge_adjacency, polytope_center
from .meshio import load_off
from .minkowski import DifferencePair
from .oracle import polytope_growth_distance_lp
from .shapes import (
    Box,
    Capsule,
    CenterSpec,
    Cylinder,
    Ellipsoid,
    MeshHull,
    Polytope,
    Pose,
    Shape,
    Sphere,
    inradius_bound,
    random_rotation,
    rotation_2d,
)
from .solver import Config, Status, WarmStartData, growth_distance, primal_infeasibility

#: Largest primitive size parameter in meters; spanned downward by
#: ``scale_span_decades`` (default two decades, i.e. down to 0.25e-2 m).
SCALE_MAX = 0.25

PERCENTILES = (0.01, 25.0, 50.0, 75.0, 99.99)

_SHAPE_CLASSES = ("curved-primitives", "polytopes", "meshes")


@dataclass
class BenchConfig:
    """Benchmark protocol parameters.

    Defaults follow the reference protocol: 1000 random pairs, 100 poses
    each, timings averaged over 100 calls, primitive parameters varied over
    two orders of magnitude, and 1% rigid displacements for warm-start
    comparisons.  The pose translation range is chosen so that roughly half
    the instances overlap; it is derived from the bodies' circumradius sum.
    """

    shape_class: str = "curved-primitives"
    pairs: int = 1000
    poses_per_pair: int = 100
    repeats_per_call: int = 100
    seed: int = 0
    scale_span_decades: float = 2.0
    warm_start: bool = False
    displacement_frac: float = 0.01
    dim: int = 3
    eps_tol: float = 1.49e-8
    k_max: int = 100
    polytope_vertices: int = 8
    mesh_vertices: int = 120
    mesh_dir: Optional[str] = None

    def __post_init__(self):
        if self.shape_class not in _SHAPE_CLASSES:
            raise ValueError(f"shape_class must be one of {_SHAPE_CLASSES}")
        if self.dim < 2:
            raise ValueError("dim must be at least 2")

    def solver_config(self, **overrides) -> Config:
        return Config(eps_tol=self.eps_tol, k_max=self.k_max, **overrides)


def _rng(seed: int, *ids: int) -> np.random.Generator:
    return np.random.default_rng([seed, *ids])


def _sample_scale(rng, span_decades: float) -> float:
    return SCALE_MAX * 10.0 ** (-span_decades * rng.uniform())


def _sample_curved(rng, cfg: BenchConfig) -> Tuple[Shape, CenterSpec]:
    dim = cfg.dim
    kinds = ("sphere", "ellipsoid", "capsule") if dim != 3 else (
        "sphere",
        "ellipsoid",
        "capsule",
        "cylinder",
    )
    kind = kinds[rng.integers(len(kinds))]
    s = lambda: _sample_scale(rng, cfg.scale_span_decades)
    if kind == "sphere":
        shape = Sphere(s())
    elif kind == "ellipsoid":
        shape = Ellipsoid([s() for _ in range(dim)])
    elif kind == "capsule":
        shape = Capsule(half_length=s(), radius=s())
    else:
        shape = Cylinder(half_height=s(), radius=s())
    zero = np.zeros(dim)
    return shape, CenterSpec(zero, inradius_bound(shape, zero))


def aspect10_surface_points(rng, n: int, dim: int, scale: float) -> np.ndarray:
    """Points on an ellipsoid surface with a 10:1 aspect ratio."""
    axes = np.full(dim, 0.1 * scale)
    axes[0] = scale
    u = rng.standard_normal((n, dim))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return u * axes


def _sample_vertex_shape(rng, cfg: BenchConfig, n: int, as_mesh: bool) -> Tuple[Shape, CenterSpec]:
    for _ in range(64):
        scale = _sample_scale(rng, cfg.scale_span_decades)
        verts = aspect10_surface_points(rng, n, cfg.dim, scale)
        try:
            spec = polytope_center(verts)
        except (QhullError, ValueError):
            continue
        if as_mesh:
            return MeshHull(verts, hull_edge_adjacency(verts)), spec
        return Polytope(verts), spec
    raise RuntimeError("could not sample a solid vertex shape")


def _load_mesh_shape(path) -> Tuple[Shape, CenterSpec]:
    mesh = load_off(path)
    return mesh, polytope_center(mesh.vertices)


def _reach(shape: Shape, center: np.ndarray) -> float:
    """Upper bound on the body radius about its center (body frame)."""
    if isinstance(shape, Sphere):
        return shape.radius
    if isinstance(shape, Ellipsoid):
        return float(shape.semi_axes.max())
    if isinstance(shape, Capsule):
        return shape.half_length + shape.radius
    if isinstance(shape, Cylinder):
        return math.hypot(shape.half_height, shape.radius)
    if isinstance(shape, Box):
        return float(np.linalg.norm(shape.half_extents))
    return float(np.linalg.norm(shape.vertices - center, axis=1).max())


def _sample_bodies(rng, cfg: BenchConfig, mesh_files):
    if cfg.shape_class == "curved-primitives":
        return _sample_curved(rng, cfg), _sample_curved(rng, cfg)
    if cfg.shape_class == "polytopes":
        n = cfg.polytope_vertices
        return (
            _sample_vertex_shape(rng, cfg, n, as_mesh=False),
            _sample_vertex_shape(rng, cfg, n, as_mesh=False),
        )
    if mesh_files:
        pick = lambda: _load_mesh_shape(mesh_files[rng.integers(len(mesh_files))])
        return pick(), pick()
    n = cfg.mesh_vertices
    return (
        _sample_vertex_shape(rng, cfg, n, as_mesh=True),
        _sample_vertex_shape(rng, cfg, n, as_mesh=True),
    )


def _posed_pair(body1, body2, rng, cfg: BenchConfig, distance: Optional[float] = None) -> DifferencePair:
    (shape1, spec1), (shape2, spec2) = body1, body2
    dim = cfg.dim
    r1 = random_rotation(rng, dim)
    r2 = random_rotation(rng, dim)
    u = rng.standard_normal(dim)
    u /= np.linalg.norm(u)
    reach = _reach(shape1, spec1.center) + _reach(shape2, spec2.center)
    d = rng.uniform(0.0, 1.5 * reach) if distance is None else distance
    # World center 1 sits at the origin; center 2 at distance d along u.
    pose1 = Pose(r1, -r1 @ spec1.center)
    pose2 = Pose(r2, d * u - r2 @ spec2.center)
    return DifferencePair(shape1, pose1, spec1, shape2, pose2, spec2)


def generate_instances(config: BenchConfig) -> Iterator[Tuple[str, DifferencePair, dict]]:
    """Deterministic stream of (instance id, pair, metadata) tuples.

    The same seed and config always produce the same stream; every
    (pair, pose) combination draws from its own child generator, so the
    stream content does not depend on consumption order.
    """
    mesh_files = None
    if config.shape_class == "meshes" and config.mesh_dir:
        mesh_files = sorted(str(f) for f in Path(config.mesh_dir).glob("*.off"))
    for i in range(config.pairs):
        bodies = _sample_bodies(_rng(config.seed, 1, i), config, mesh_files)
        for j in range(config.poses_per_pair):
            pair = _posed_pair(bodies[0], bodies[1], _rng(config.seed, 2, i, j), config)
            meta = {
                "pair": i,
                "pose": j,
                "shape1": repr(pair.shape1),
                "shape2": repr(pair.shape2),
            }
            yield f"{i}-{j}", pair, meta


def _small_rotation(rng, dim: int, angle: float) -> np.ndarray:
    if dim == 2:
        return rotation_2d(angle if rng.uniform() < 0.5 else -angle)
    if dim == 3:
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        k = np.array(
            [
                [0.0, -axis[2], axis[1]],
                [axis[2], 0.0, -axis[0]],
                [-axis[1], axis[0], 0.0],
            ]
        )
        return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)
    raise ValueError("displacement supported in 2D and 3D only")


def displace_pair(pair: DifferencePair, rng, frac: float) -> DifferencePair:
    """Rigidly perturb both bodies by roughly ``frac`` of their own size."""
    poses = []
    for shape, spec, pose in (
        (pair.shape1, pair.center1, pair.pose1),
        (pair.shape2, pair.center2, pair.pose2),
    ):
        reach = _reach(shape, spec.center)
        delta_r = _small_rotation(rng, pair.dim, frac)
        u = rng.standard_normal(pair.dim)
        u /= np.linalg.norm(u)
        w_new = pose.transform(spec.center) + frac * reach * u
        r_new = delta_r @ pose.rotation
        poses.append(Pose(r_new, w_new - r_new @ spec.center))
    return DifferencePair(pair.shape1, poses[0], pair.center1, pair.shape2, poses[1], pair.center2)


def _timed_solve(pair, solver_cfg, warm, repeats: int):
    result = None
    start = time.perf_counter()
    for _ in range(repeats):
        result = growth_distance(pair, solver_cfg, warm=warm)
    elapsed = (time.perf_counter() - start) / repeats
    return elapsed, result


def run_suite(config: BenchConfig, out_path=None):
    """Run the benchmark and return ``(summary, records)``.

    In warm-start mode every instance is solved once to harvest witnesses,
    displaced by ``displacement_frac``, then solved cold and warm on the
    displaced configuration; records carry both iteration counts and the
    paired delta.
    """
    solver_cfg = config.solver_config()
    records = []
    for iid, pair, meta in generate_instances(config):
        if config.warm_start:
            base = growth_distance(pair, solver_cfg)
            moved = displace_pair(
                pair, _rng(config.seed, 3, meta["pair"], meta["pose"]), config.displacement_frac
            )
            t_cold, cold = _timed_solve(moved, solver_cfg, None, config.repeats_per_call)
            t_warm, warm_res = _timed_solve(
                moved, solver_cfg, base.warm_start, config.repeats_per_call
            )
            records.append(
                {
                    "instance_id": iid,
                    "shape1": meta["shape1"],
                    "shape2": meta["shape2"],
                    "alpha": warm_res.alpha,
                    "iterations": warm_res.iterations,
                    "status": warm_res.status.value,
                    "gap": warm_res.gap,
                    "cold_iterations": cold.iterations,
                    "iteration_delta": warm_res.iterations - cold.iterations,
                    "wall_time_cold": t_cold,
                    "wall_time_warm": t_warm,
                    "primal_infeasibility": primal_infeasibility(moved, warm_res),
                }
            )
        else:
            t, res = _timed_solve(pair, solver_cfg, None, config.repeats_per_call)
            records.append(
                {
                    "instance_id": iid,
                    "shape1": meta["shape1"],
                    "shape2": meta["shape2"],
                    "alpha": res.alpha,
                    "iterations": res.iterations,
                    "status": res.status.value,
                    "gap": res.gap,
                    "wall_time": t,
                    "primal_infeasibility": primal_infeasibility(pair, res),
                }
            )
    summary = summarize_records(records, warm=config.warm_start)
    if out_path is not None:
        write_records_csv(out_path, config, records)
    return summary, records


def percentile(sorted_values: Sequence[float], q: float) -> float:
    """Sort-based percentile with linear interpolation between ranks."""
    n = len(sorted_values)
    if n == 0:
        raise ValueError("no values")
    pos = (n - 1) * q / 100.0
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac


def percentiles(values, qs=PERCENTILES) -> dict:
    ordered = sorted(values)
    return {q: percentile(ordered, q) for q in qs}


def summarize_records(records, warm: bool = False) -> dict:
    time_key = "wall_time_warm" if warm else "wall_time"
    statuses = {}
    for r in records:
        statuses[r["status"]] = statuses.get(r["status"], 0) + 1
    failures = sum(
        1
        for r in records
        if r["status"] in (Status.MAX_ITERATIONS.value, Status.NUMERICAL_FAILURE.value)
    )
    summary = {
        "calls": len(records),
        "time_percentiles": percentiles([r[time_key] for r in records]),
        "max_primal_infeasibility": max(r["primal_infeasibility"] for r in records),
        "statuses": statuses,
        "convergence_failures": failures,
        "median_iterations": percentile(sorted(r["iterations"] for r in records), 50.0),
    }
    if warm:
        summary["median_cold_iterations"] = percentile(
            sorted(r["cold_iterations"] for r in records), 50.0
        )
        summary["total_iteration_delta"] = sum(r["iteration_delta"] for r in records)
        summary["cold_time_percentiles"] = percentiles([r["wall_time_cold"] for r in records])
    return summary


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_records_csv(path, config: BenchConfig, records) -> None:
    """One JSON config line, then a CSV header row and one row per record.
    Floats carry 17 significant digits."""
    with open(path, "w", newline="") as f:
        f.write(json.dumps(asdict(config)) + "\n")
        if not records:
            return
        writer = csv.writer(f)
        fields = list(records[0])
        writer.writerow(fields)
        for r in records:
            writer.writerow([_fmt(r[k]) for k in fields])


def read_records_csv(path):
    """Inverse of :func:`write_records_csv`; numeric fields stay strings."""
    with open(path) as f:
        config = json.loads(f.readline())
        rows = list(csv.DictReader(f))
    return config, rows


def trace_convergence(pair: DifferencePair, config: Config = None):
    """Per-iteration rows ``(k, beta_lower, beta_upper, gap)`` for one query."""
    rows = []
    growth_distance(
        pair,
        config if config is not None else Config(),
        on_iteration=lambda k, bl, bu, gap: rows.append((k, bl, bu, gap)),
    )
    return rows


def write_trace_csv(path, rows) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["k", "beta_lower", "beta_upper", "gap"])
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def find_instance(config: BenchConfig, instance_id: str):
    for iid, pair, meta in generate_instances(config):
        if iid == instance_id:
            return pair, meta
    raise KeyError(f"no instance {instance_id!r} in this configuration")


def vertex_scaling_study(
    ns: Sequence[int],
    dim: int = 3,
    poses: int = 3,
    seed: int = 0,
    oracle_at: Sequence[int] = (),
    repeats: int = 3,
) -> list:
    """Solve times versus polytope vertex count on aspect-10 ellipsoid hulls.

    For each vertex count the same world-frame instances are solved with an
    exhaustive-scan support (Polytope), with hill climbing (MeshHull), and,
    for counts listed in ``oracle_at``, with the generic LP oracle over all
    vertex differences.  Returns one row per vertex count with median times.
    """
    solver_cfg = Config()
    rows = []
    for n in ns:
        gen = _rng(seed, 4, n)
        verts1 = aspect10_surface_points(gen, n, dim, SCALE_MAX)
        verts2 = aspect10_surface_points(gen, n, dim, SCALE_MAX)
        spec1 = polytope_center(verts1)
        spec2 = polytope_center(verts2)
        plain = (Polytope(verts1), spec1), (Polytope(verts2), spec2)
        hill = (
            (MeshHull(verts1, hull_edge_adjacency(verts1)), spec1),
            (MeshHull(verts2, hull_edge_adjacency(verts2)), spec2),
        )
        t_plain, t_hill, t_oracle = [], [], []
        alphas = []
        cfg_like = BenchConfig(shape_class="polytopes", dim=dim, pairs=1, poses_per_pair=1)
        for j in range(poses):
            rng_pose = _rng(seed, 5, n, j)
            state = rng_pose.bit_generator.state
            pair_plain = _posed_pair(plain[0], plain[1], rng_pose, cfg_like)
            rng_pose.bit_generator.state = state
            pair_hill = _posed_pair(hill[0], hill[1], rng_pose, cfg_like)
            tp, rp = _timed_solve(pair_plain, solver_cfg, None, repeats)
            th, rh = _timed_solve(pair_hill, solver_cfg, None, repeats)
            t_plain.append(tp)
            t_hill.append(th)
            alphas.append((rp.alpha, rh.alpha))
            if n in oracle_at:
                w1 = (pair_plain.pose1.rotation @ verts1.T).T + pair_plain.pose1.translation
                w2 = (pair_plain.pose2.rotation @ verts2.T).T + pair_plain.pose2.translation
                start = time.perf_counter()
                a_lp = polytope_growth_distance_lp(
                    w1, w2, pair_plain.world_center1, pair_plain.world_center2
                )
                t_oracle.append(time.perf_counter() - start)
                alphas[-1] = alphas[-1] + (a_lp,)
        row = {
            "n": n,
            "time_plain": percentile(sorted(t_plain), 50.0),
            "time_hill": percentile(sorted(t_hill), 50.0),
            "time_oracle": percentile(sorted(t_oracle), 50.0) if t_oracle else None,
            "alphas": alphas,
        }
        rows.append(row)
    return rows
