import json

from core.kmedian import assignment_sizes


def build_report(t, params, algorithm, result, wall_time, dataset=None):
    """Plain-dict run report; centers re-evaluated against t reproduce total_cost."""
    return {
        "dataset": dataset,
        "input": {"n": len(t), "m": t.max_complexity, "d": t.dimension},
        "params": {
            "algorithm": algorithm,
            "k": params.k,
            "l": params.l,
            "beta": result.diagnostics.get("beta"),
            "delta": params.delta,
            "epsilon": params.epsilon,
            "seed": params.seed,
            "scale": {"factor": params.scale.factor, "mode": params.scale.mode},
            "caps": {
                "max_grid_points": params.caps.max_grid_points,
                "max_candidates": params.caps.max_candidates,
                "max_subsets": params.caps.max_subsets,
            },
            "threads": params.threads,
        },
        "centers": [c.to_list() for c in result.centers],
        "ids": list(t.ids),
        "assignment": result.assignment,
        "cluster_sizes": assignment_sizes(result),
        "cluster_costs": result.cluster_costs,
        "total_cost": result.total_cost,
        "truncated": bool(result.diagnostics.get("truncated", False)),
        "diagnostics": result.diagnostics,
        "wall_time": wall_time,
    }


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True)


def write_report(path, report):
    with open(path, 'w') as f:
        f.write(dumps(report) + "\n")
