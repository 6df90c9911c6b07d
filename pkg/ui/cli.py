"""
Command-line surface of curvemed.

Exit codes: 0 success, 1 failed self-checks, 2 usage or parameter error, 3 resource cap
exceeded, 4 dataset or I/O error.
"""

import argparse
import json
import logging
import sys
import time

from core.candidates import EnumerationCaps
from core.config import load_settings
from core.dataset import read_dataset, write_dataset
from core.errors import CurveMedError, DatasetError, ParameterError, ResourceError
from core.evaluation import CostEvaluator
from core.frechet import FrechetConfig
from core.geometry import PolygonalCurve
from core.kmedian import ALGORITHMS, SIMPLE, ClusteringParams, cluster
from core.planted import PlantedSpec, generate_planted
from core.sampling import FAITHFUL, SampleScale, make_rng
from core.simplify import simplify
from core.verification import SUITES, all_ok, run_suites, summary_line
from ui.report import build_report, dumps, write_report

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_IO = 4

logger = logging.getLogger("curvemed.cli")


def _add_tolerance(parser):
    parser.add_argument("--tolerance", type=float, default=None,
                        help="absolute Frechet tolerance (default: 1e-9 of the bounding-box diameter)")


def build_parser():
    parser = argparse.ArgumentParser(prog="curvemed", description="(k,l)-median clustering of polygonal curves under the Frechet distance.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--config", default=None, help="path of the JSON settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a planted dataset and its ground-truth sidecar")
    gen.add_argument("output")
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--n", type=int, default=20)
    gen.add_argument("--m", type=int, default=3)
    gen.add_argument("--d", type=int, default=2)
    gen.add_argument("--radius", type=float, default=0.05)
    gen.add_argument("--extent", type=float, default=10.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--sidecar", default=None, help="default: <output>.truth.json")
    gen.add_argument("--name", default=None)

    clu = sub.add_parser("cluster", help="cluster a dataset and write a run report")
    clu.add_argument("dataset")
    clu.add_argument("-o", "--output", default=None, help="report path (default: stdout)")
    clu.add_argument("--k", type=int, default=1)
    clu.add_argument("--l", type=int, default=2)
    clu.add_argument("--epsilon", type=float, default=0.5)
    clu.add_argument("--delta", type=float, default=0.1)
    clu.add_argument("--algorithm", choices=ALGORITHMS, default=SIMPLE)
    clu.add_argument("--seed", type=int, default=0)
    clu.add_argument("--scale", type=float, default=None, help="sample-size factor; anything but 1 selects test mode")
    clu.add_argument("--caps-grid", type=int, default=None)
    clu.add_argument("--caps-candidates", type=int, default=None)
    clu.add_argument("--caps-subsets", type=int, default=None)
    clu.add_argument("--threads", type=int, default=None)
    _add_tolerance(clu)

    dist = sub.add_parser("dist", help="Frechet distance of two curves of a dataset")
    dist.add_argument("dataset")
    dist.add_argument("first", type=int)
    dist.add_argument("second", type=int)
    _add_tolerance(dist)

    simp = sub.add_parser("simplify", help="simplify one curve of a dataset")
    simp.add_argument("dataset")
    simp.add_argument("id", type=int)
    simp.add_argument("--l", type=int, default=2)
    simp.add_argument("-o", "--output", default=None)
    _add_tolerance(simp)

    ev = sub.add_parser("eval", help="cost of given centers over a dataset")
    ev.add_argument("dataset")
    ev.add_argument("centers", help="a run report or a dataset file of center curves")
    ev.add_argument("--threads", type=int, default=None)
    _add_tolerance(ev)

    ver = sub.add_parser("verify", help="run the oracle self-checks")
    ver.add_argument("--seed", type=int, default=1)
    ver.add_argument("--trials", type=int, default=20)
    ver.add_argument("--suite", action="append", choices=sorted(SUITES), default=None)
    return parser


def _configure_logging(verbose, settings):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(settings.log_level).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _frechet_config(settings):
    return FrechetConfig(abs_tol=settings.frechet_abs_tol, rel_tol=settings.frechet_rel_tol)


def _curve_by_id(t, cid):
    try:
        return t[t.ids.index(cid)]
    except ValueError:
        raise ParameterError(f"No curve with id {cid} in the dataset.")


def cmd_generate(args, settings):
    spec = PlantedSpec(k=args.k, n=args.n, m=args.m, d=args.d, radius=args.radius, seed=args.seed, extent=args.extent)
    t, sidecar = generate_planted(spec)
    write_dataset(args.output, t, name=args.name)
    sidecar_path = args.sidecar or f"{args.output}.truth.json"
    with open(sidecar_path, 'w') as f:
        f.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(t)} curves to {args.output}; planted bound {spec.planted_bound:.17g}")
    return EXIT_OK


def cmd_cluster(args, settings):
    t, _ = read_dataset(args.dataset)
    if settings.scale_factor == 1.0 and settings.scale_mode == FAITHFUL:
        scale = SampleScale()
    else:
        scale = SampleScale.test(settings.scale_factor)
    params = ClusteringParams(
        k=args.k,
        l=args.l,
        delta=args.delta,
        epsilon=args.epsilon,
        seed=args.seed,
        scale=scale,
        caps=EnumerationCaps(settings.max_grid_points, settings.max_candidates, settings.max_subsets),
        frechet=_frechet_config(settings),
        threads=settings.threads,
    )
    started = time.perf_counter()
    with CostEvaluator(params.frechet, params.threads) as evaluator:
        result = cluster(t, params, args.algorithm, make_rng(params.seed), evaluator)
    report = build_report(t, params, args.algorithm, result, time.perf_counter() - started, args.dataset)
    if report["truncated"]:
        logger.warning("result is truncated by the enumeration caps; raise --caps-* or lower --scale for a faithful run")
    if args.output:
        write_report(args.output, report)
    else:
        print(dumps(report))
    return EXIT_OK


def cmd_dist(args, settings):
    t, _ = read_dataset(args.dataset)
    evaluator = CostEvaluator(_frechet_config(settings))
    print(f"{evaluator.distance(_curve_by_id(t, args.first), _curve_by_id(t, args.second)):.17g}")
    return EXIT_OK


def cmd_simplify(args, settings):
    t, _ = read_dataset(args.dataset)
    result = simplify(_curve_by_id(t, args.id), args.l, _frechet_config(settings))
    out = {"id": args.id, "l": args.l, "vertices": result.curve.to_list(), "indices": list(result.indices), "error": result.error}
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, 'w') as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _read_centers(path):
    with open(path, 'r') as f:
        text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict) and "centers" in data:
        return [PolygonalCurve(c) for c in data["centers"]]
    centers, _ = read_dataset(path)
    return list(centers)


def cmd_eval(args, settings):
    t, _ = read_dataset(args.dataset)
    centers = _read_centers(args.centers)
    with CostEvaluator(_frechet_config(settings), settings.threads) as evaluator:
        index, _ = evaluator.nearest(t, centers)
        total = evaluator.cost(t, centers)
    print(json.dumps({"total_cost": total, "assignment": index.tolist(), "centers": len(centers)}, sort_keys=True))
    return EXIT_OK


def cmd_verify(args, settings):
    results = run_suites(seed=args.seed, trials=args.trials, names=args.suite)
    for result in results:
        print(summary_line(result))
        for detail in result.failures[:5]:
            print(f"    {detail}")
    total = sum(r.passed + r.failed for r in results)
    print(f"{total} checks, {sum(r.failed for r in results)} failed")
    return EXIT_OK if all_ok(results) else EXIT_CHECKS_FAILED


COMMANDS = {
    "generate": cmd_generate,
    "cluster": cmd_cluster,
    "dist": cmd_dist,
    "simplify": cmd_simplify,
    "eval": cmd_eval,
    "verify": cmd_verify,
}


def _overrides(args):
    scale = getattr(args, "scale", None)
    return {
        "frechet_abs_tol": getattr(args, "tolerance", None),
        "max_grid_points": getattr(args, "caps_grid", None),
        "max_candidates": getattr(args, "caps_candidates", None),
        "max_subsets": getattr(args, "caps_subsets", None),
        "threads": getattr(args, "threads", None),
        "scale_factor": scale,
        "scale_mode": None if scale is None else ("faithful" if scale == 1.0 else "test"),
    }


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(_overrides(args), args.config)
        _configure_logging(args.verbose, settings)
        return COMMANDS[args.command](args, settings)
    except ParameterError as e:
        print(f"curvemed: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as e:
        print(f"curvemed: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DatasetError, OSError) as e:
        print(f"curvemed: {e}", file=sys.stderr)
        return EXIT_IO
    except CurveMedError as e:
        print(f"curvemed: {e}", file=sys.stderr)
        return EXIT_USAGE
