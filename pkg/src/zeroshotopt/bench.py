"""Benchmark functions, the normalized performance metric and report generation."""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import io
import json
import logging
import warnings
import zlib

import numpy as np

from zeroshotopt.exceptions import InputError

logger = logging.getLogger(__name__)

SUITE_DIMS = (2, 5, 10, 20)
DEGENERATE_TOL = 1e-12


@dataclass(eq=False)
class BenchmarkFunction:
    """A native-domain test function exposed on the unit box."""

    name: str
    dimension: int
    native: object
    lower: np.ndarray
    upper: np.ndarray
    f_star: float
    argmin: np.ndarray = None

    def to_native(self, x):
        return self.lower + np.asarray(x, dtype=np.float64) * (self.upper - self.lower)

    def to_unit(self, z):
        return (np.asarray(z, dtype=np.float64) - self.lower) / (self.upper - self.lower)

    def __call__(self, x):
        return float(self.native(self.to_native(x)))


def sphere(z):
    return np.sum(z ** 2)


def rosenbrock(z):
    return np.sum(100.0 * (z[1:] - z[:-1] ** 2) ** 2 + (1.0 - z[:-1]) ** 2)


def rastrigin(z):
    return 10.0 * z.size + np.sum(z ** 2 - 10.0 * np.cos(2 * np.pi * z))


def ackley(z):
    d = z.size
    return (-20.0 * np.exp(-0.2 * np.sqrt(np.sum(z ** 2) / d))
            - np.exp(np.sum(np.cos(2 * np.pi * z)) / d) + 20.0 + np.e)


def griewank(z):
    i = np.arange(1, z.size + 1)
    return np.sum(z ** 2) / 4000.0 - np.prod(np.cos(z / np.sqrt(i))) + 1.0


def levy(z):
    w = 1.0 + (z - 1.0) / 4.0
    head = np.sin(np.pi * w[0]) ** 2
    mid = np.sum((w[:-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * w[:-1] + 1) ** 2))
    tail = (w[-1] - 1) ** 2 * (1 + np.sin(2 * np.pi * w[-1]) ** 2)
    return head + mid + tail


def styblinski_tang(z):
    return 0.5 * np.sum(z ** 4 - 16.0 * z ** 2 + 5.0 * z)


def branin(z):
    x1, x2 = z
    b = 5.1 / (4 * np.pi ** 2)
    c = 5.0 / np.pi
    t = 1.0 / (8 * np.pi)
    return (x2 - b * x1 ** 2 + c * x1 - 6.0) ** 2 + 10.0 * (1 - t) * np.cos(x1) + 10.0


def six_hump_camel(z):
    x1, x2 = z
    return ((4 - 2.1 * x1 ** 2 + x1 ** 4 / 3) * x1 ** 2 + x1 * x2
            + (-4 + 4 * x2 ** 2) * x2 ** 2)


ST_ARGMIN = -2.903534027771178
ST_MIN_PER_DIM = -39.166165703771412
BRANIN_MIN = 0.39788735772973816
CAMEL_MIN = -1.0316284534898774


def _box(lo, hi, d):
    return np.full(d, float(lo)), np.full(d, float(hi))


def builtin_suite(dims=(2,)):
    """Classic test functions mapped onto the unit box for each dimension in ``dims``."""
    suite = []
    for d in dims:
        if d not in SUITE_DIMS:
            raise InputError(f"unsupported suite dimension {d}; choose from {SUITE_DIMS}")
        zeros, ones = np.zeros(d), np.ones(d)
        specs = [
            ("sphere", sphere, _box(-5.12, 5.12, d), 0.0, zeros),
            ("rosenbrock", rosenbrock, _box(-5.0, 10.0, d), 0.0, ones),
            ("rastrigin", rastrigin, _box(-5.12, 5.12, d), 0.0, zeros),
            ("ackley", ackley, _box(-32.768, 32.768, d), 0.0, zeros),
            ("griewank", griewank, _box(-600.0, 600.0, d), 0.0, zeros),
            ("levy", levy, _box(-10.0, 10.0, d), 0.0, ones),
            ("styblinski_tang", styblinski_tang, _box(-5.0, 5.0, d), ST_MIN_PER_DIM * d,
             np.full(d, ST_ARGMIN)),
        ]
        if d == 2:
            specs += [
                ("branin", branin, (np.array([-5.0, 0.0]), np.array([10.0, 15.0])), BRANIN_MIN,
                 np.array([np.pi, 2.275])),
                ("six_hump_camel", six_hump_camel, (np.array([-3.0, -2.0]), np.array([3.0, 2.0])),
                 CAMEL_MIN, np.array([0.08984201368301331, -0.7126564032704135])),
            ]
        for name, fn, (lo, hi), fstar, arg in specs:
            suite.append(BenchmarkFunction(f"{name}_{d}d", d, fn, lo, hi, fstar, arg))
    return suite


def gp_benchmark(f, name=None):
    """Wrap a synthetic GP function (with a min estimate) as a suite entry."""
    if f.min_estimate is None:
        raise InputError(f"function {f.id} has no global minimum estimate")
    return BenchmarkFunction(name or f"gp{f.dimension}d_{f.id}", f.dimension, f,
                             np.zeros(f.dimension), np.ones(f.dimension), f.min_estimate)


def normalized_performance(values, f_star, m):
    """``(f_m - best) / (f_m - f_star)`` with ``f_m`` the median of the first ``m`` values."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < m + 1:
        raise InputError(f"trajectory of {values.shape[0]} evaluations is shorter than m + 1")
    return float(performance_curve(values, f_star, m)[-1])


def performance_curve(values, f_star, m, printed=False):
    """Normalized performance after each evaluation (running best)."""
    values = np.asarray(values, dtype=np.float64)
    f_m = float(np.median(values[:m]))
    best = np.minimum.accumulate(values)
    denom = f_m - f_star
    if denom <= DEGENERATE_TOL:
        reached = best <= f_star + DEGENERATE_TOL
        out = np.where(reached, 1.0, 0.0)
        return -out if printed else out
    if printed:
        return (f_star - best) / denom
    return (f_m - best) / denom


@dataclass
class BenchReport:
    methods: list
    functions: list
    seeds: list
    budget: int
    m: int
    cells: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def means(self):
        return {k: v["mean"] for k, v in self.summary.items()}


def _init_points(function_name, d, seed, m):
    stream = np.random.SeedSequence([int(seed), zlib.crc32(function_name.encode())])
    return np.random.default_rng(stream).random((m, d))


def _run_cell(args):
    method, runner, fn, seed, budget, m = args
    init = _init_points(fn.name, fn.dimension, seed, m)
    try:
        history = runner(fn, init, budget - m, seed)
    except Exception as exc:  # recorded as a missing cell
        return {"method": method, "function": fn.name, "seed": seed, "error": repr(exc)}
    values = np.asarray(history.values, dtype=np.float64)
    if values.shape[0] != budget:
        return {"method": method, "function": fn.name, "seed": seed,
                "error": f"expected {budget} evaluations, got {values.shape[0]}"}
    curve = performance_curve(values, fn.f_star, m)
    return {
        "method": method,
        "function": fn.name,
        "seed": seed,
        "f_star": fn.f_star,
        "f_m": float(np.median(values[:m])),
        "best": float(values.min()),
        "P": float(curve[-1]),
        "P_raw": float(performance_curve(values, fn.f_star, m, printed=True)[-1]),
        "best_so_far": np.minimum.accumulate(values).tolist(),
        "init_values": values[:m].tolist(),
    }


def summarize(cells, methods, seeds):
    """Mean and SD over seed splits of the per-split mean (clipped) performance."""
    summary = {}
    for method in methods:
        split_means = []
        for seed in seeds:
            ps = [min(max(c["P"], 0.0), 1.0) for c in cells
                  if c["method"] == method and c["seed"] == seed and "error" not in c]
            if ps:
                split_means.append(float(np.mean(ps)))
        if split_means:
            mean = float(np.mean(split_means))
            sd = float(np.std(split_means, ddof=1)) if len(split_means) > 1 else 0.0
        else:
            mean, sd = float("nan"), float("nan")
        summary[method] = {"mean": mean, "sd": sd, "splits": split_means}
    order = sorted(methods, key=lambda k: (-summary[k]["mean"]
                                           if np.isfinite(summary[k]["mean"]) else np.inf, k))
    for rank, method in enumerate(order, start=1):
        summary[method]["rank"] = rank
    return summary


def run_benchmark(methods, suite, seeds=5, budget=50, m=10, workers=1):
    """Run every method on every (function, seed) cell from a shared initial design.

    ``methods`` maps a name to ``runner(objective, init_points, steps, seed)``
    returning a History. ``seeds`` is a count or an explicit list.
    """
    if not methods or not suite:
        raise InputError("need at least one method and one function")
    seeds = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    jobs = [(name, runner, fn, seed, budget, m)
            for fn in suite for seed in seeds for name, runner in methods.items()]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            cells = list(pool.map(_run_cell, jobs))
    else:
        cells = [_run_cell(job) for job in jobs]
    for c in cells:
        if "error" in c:
            warnings.warn(f"{c['method']} failed on {c['function']} seed {c['seed']}: {c['error']}")
    names = list(methods)
    report = BenchReport(names, [fn.name for fn in suite], seeds, budget, m, cells)
    report.summary = summarize(cells, names, seeds)
    return report


CSV_FIELDS = ("method", "function", "seed", "f_star", "f_m", "best", "P", "P_raw",
              "error")


def report_csv(report):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for c in report.cells:
        writer.writerow({k: (repr(c[k]) if isinstance(c.get(k), float) else c.get(k, ""))
                         for k in CSV_FIELDS})
    return buf.getvalue()


def report_markdown(report):
    lines = ["| Method | Mean ± SD | Rank |", "|---|---|---|"]
    ordered = sorted(report.methods, key=lambda k: report.summary[k]["rank"])
    for method in ordered:
        s = report.summary[method]
        lines.append(f"| {method} | {s['mean']:.3f} ± {s['sd']:.3f} | {s['rank']} |")
    return "\n".join(lines) + "\n"


def report_curves_jsonl(report):
    out = []
    for c in report.cells:
        if "error" in c:
            continue
        out.append(json.dumps({k: c[k] for k in ("method", "function", "seed", "f_star", "f_m",
                                                   "best_so_far", "init_values")}))
    return "\n".join(out) + ("\n" if out else "")


def report_from_curves(lines, m):
    """Rebuild a report (cells and summary) from JSON-lines curves."""
    cells = []
    for line in lines:
        if not line.strip():
            continue
        row = json.loads(line)
        best = np.asarray(row["best_so_far"], dtype=np.float64)
        init = np.asarray(row["init_values"], dtype=np.float64)
        f_star = row["f_star"]
        row["f_m"] = float(np.median(init[:m]))
        row["best"] = float(best[-1])
        denom = row["f_m"] - f_star
        if denom <= DEGENERATE_TOL:
            reached = 1.0 if best[-1] <= f_star + DEGENERATE_TOL else 0.0
            row["P"], row["P_raw"] = reached, -reached
        else:
            row["P"] = float((row["f_m"] - best[-1]) / denom)
            row["P_raw"] = float((f_star - best[-1]) / denom)
        cells.append(row)
    methods = list(dict.fromkeys(c["method"] for c in cells))
    seeds = list(dict.fromkeys(c["seed"] for c in cells))
    functions = list(dict.fromkeys(c["function"] for c in cells))
    budget = len(cells[0]["best_so_far"]) if cells else 0
    report = BenchReport(methods, functions, seeds, budget, m, cells)
    report.summary = summarize(cells, methods, seeds)
    return report
