"""Command-line pipeline: generate, trajectories, train, finetune, optimize, benchmark, report.

Every command takes a JSON config (``--config``), command-line overrides and
``--seed``; ``--print-config`` dumps the fully resolved config and exits.
Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import hashlib
import json
import logging
import os
import sys

import jsonschema
import numpy as np

from zeroshotopt import __version__
from zeroshotopt.exceptions import FormatError, InputError, NumericalError

logger = logging.getLogger("zeroshotopt")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

_INT = {"type": "integer"}
_NONNEG = {"type": "integer", "minimum": 0}
_POS = {"type": "integer", "minimum": 1}
_PATH = {"type": "string", "minLength": 1}
_OPT_PATH = {"type": ["string", "null"]}
_SCALING = {"enum": ["fixed", "scaled", "scaled_high"]}

DEFAULTS = {
    "generate": {
        "seed": 0, "dims": [2], "functions_per_dim": 10, "estimate_min": True,
        "min_budget": 10000, "output": "bank.zsof", "jsonl": None,
    },
    "trajectories": {
        "seed": 0, "bank": "bank.zsof",
        "variants": ["EI-RBF", "EI-Matern52", "LogEI-RBF", "LogEI-Matern52", "UCB-RBF",
                     "UCB-Matern52", "MES-RBF", "MES-Matern52", "TS-RBF", "TS-Matern52"],
        "m": 10, "steps": 40, "max_functions": None,
        "output": "trajectories.zsot", "jsonl": None, "summary": None,
    },
    "train": {
        "seed": 0, "dataset": "trajectories.zsot", "model": {}, "train": {},
        "output": "model.zsoc", "loss_csv": None,
    },
    "finetune": {
        "seed": 0, "dataset": "trajectories.zsot", "from": "model.zsoc", "train": {},
        "output": "finetuned.zsoc", "loss_csv": None,
    },
    "optimize": {
        "seed": 0, "checkpoint": "model.zsoc", "target": "branin_2d", "bank": None,
        "budget": 50, "m": 10, "candidates": 4, "top_p": 0.9, "scaling": "scaled_high",
        "init_design": "uniform", "output": "history.jsonl",
    },
    "benchmark": {
        "seed": 0, "methods": ["EI-Matern52", "Random"], "builtin_dims": [2], "bank": None,
        "seeds": 5, "budget": 50, "m": 10, "model_options": {}, "output_dir": "bench",
    },
    "report": {"curves": "bench/curves.jsonl", "m": 10, "output_dir": "bench_report",
               "seed": 0},
}

_PROPS = {
    "generate": {
        "seed": _NONNEG, "dims": {"type": "array", "items": _INT, "minItems": 1},
        "functions_per_dim": _POS, "estimate_min": {"type": "boolean"},
        "min_budget": {"type": "integer", "minimum": 1000}, "output": _PATH, "jsonl": _OPT_PATH,
    },
    "trajectories": {
        "seed": _NONNEG, "bank": _PATH,
        "variants": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "m": _POS, "steps": _POS, "max_functions": {"type": ["integer", "null"], "minimum": 1},
        "output": _PATH, "jsonl": _OPT_PATH, "summary": _OPT_PATH,
    },
    "train": {
        "seed": _NONNEG, "dataset": _PATH, "model": {"type": ["object", "string"]},
        "train": {"type": ["object", "string"]}, "output": _PATH, "loss_csv": _OPT_PATH,
    },
    "finetune": {
        "seed": _NONNEG, "dataset": _PATH, "from": _PATH, "train": {"type": ["object", "string"]},
        "output": _PATH, "loss_csv": _OPT_PATH,
    },
    "optimize": {
        "seed": _NONNEG, "checkpoint": _PATH, "target": {"type": "string"}, "bank": _OPT_PATH,
        "budget": _POS, "m": _POS, "candidates": _POS,
        "top_p": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "scaling": _SCALING, "init_design": {"enum": ["uniform", "lhs"]}, "output": _PATH,
    },
    "benchmark": {
        "seed": _NONNEG, "methods": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "builtin_dims": {"type": "array", "items": _INT}, "bank": _OPT_PATH, "seeds": _POS,
        "budget": _POS, "m": _POS, "model_options": {"type": "object"}, "output_dir": _PATH,
    },
    "report": {"curves": _PATH, "m": _POS, "output_dir": _PATH, "seed": _NONNEG},
}

# inputs that must exist when the config is validated
_INPUT_KEYS = {
    "trajectories": ("bank",), "train": ("dataset",), "finetune": ("dataset", "from"),
    "optimize": ("checkpoint", "bank"), "benchmark": ("bank",), "report": ("curves",),
}


def schema(command):
    return {"type": "object", "properties": _PROPS[command], "additionalProperties": False,
            "required": ["seed"]}


def config_hash(config):
    raw = json.dumps(config, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(raw).hexdigest()


def manifest(command, config, **extra):
    """Provenance block; deliberately free of timestamps and host details."""
    return {"tool": "zeroshotopt", "version": __version__, "command": command,
            "config_hash": config_hash(config), "seed": config["seed"], **extra}


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(path, command, config, **extra):
    write_json(path + ".manifest.json", {**manifest(command, config, **extra), "config": config})


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _load_json_arg(value, what):
    if isinstance(value, str):
        if not os.path.exists(value):
            raise InputError(f"{what} file does not exist: {value}")
        try:
            with open(value, encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{what} file {value} is not valid JSON: {exc}") from None
    return dict(value)


def resolve_config(command, config_path=None, overrides=None):
    """Defaults <- config file <- overrides, then schema and path validation."""
    config = json.loads(json.dumps(DEFAULTS[command]))
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"config {config_path} is not valid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise InputError("config file must hold a JSON object")
        config.update(loaded)
    for key, value in (overrides or {}).items():
        if value is not None:
            config[key] = value
    try:
        jsonschema.validate(config, schema(command))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"invalid {command} config at {where}: {exc.message}") from None
    return config


def check_inputs(command, config):
    for key in _INPUT_KEYS.get(command, ()):
        path = config.get(key)
        if path is not None and not os.path.exists(path):
            raise InputError(f"{key} path does not exist: {path}")


def _workers(args):
    if deterministic_mode(args):
        return 1
    return args.workers if args.workers else (os.cpu_count() or 1)


def deterministic_mode(args):
    return bool(getattr(args, "deterministic", False)) or os.environ.get("ZSO_DETERMINISTIC") == "1"


def _map(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


# ---------------------------------------------------------------- generate

def _generate_one(job):
    from zeroshotopt.functions import estimate_global_min, generate_function

    d, fid, seed, estimate, budget = job
    f = generate_function(d, seed, function_id=fid)
    if estimate:
        estimate_global_min(f, budget=budget, seed=seed)
    return f


def function_seed(global_seed, d, index):
    return int(np.random.SeedSequence([global_seed, d, index]).generate_state(1)[0])


def cmd_generate(config, workers=1):
    from zeroshotopt.functions import MAX_DIM, MIN_DIM, write_bank, write_bank_jsonl

    for d in config["dims"]:
        if not MIN_DIM <= d <= MAX_DIM:
            raise InputError(f"dimension {d} outside [{MIN_DIM}, {MAX_DIM}]")
    jobs = []
    for d in config["dims"]:
        for i in range(config["functions_per_dim"]):
            jobs.append((d, len(jobs), function_seed(config["seed"], d, i),
                         config["estimate_min"], config["min_budget"]))
    logger.info("generating %d functions", len(jobs))
    functions = _map(_generate_one, jobs, workers)
    _ensure_parent(config["output"])
    write_bank(functions, config["output"])
    if config["jsonl"]:
        _ensure_parent(config["jsonl"])
        write_bank_jsonl(functions, config["jsonl"])
    counts = {str(d): config["functions_per_dim"] for d in config["dims"]}
    write_manifest(config["output"], "generate", config, counts=counts)
    logger.info("wrote %s", config["output"])
    return functions


# ------------------------------------------------------------ trajectories

def _read_bank_any(path):
    from zeroshotopt.functions import read_bank, read_bank_jsonl

    if path.endswith(".jsonl"):
        return list(read_bank_jsonl(path))
    return list(read_bank(path))


def _read_dataset_any(path):
    from zeroshotopt.trajectories import read_dataset, read_dataset_jsonl

    if path.endswith(".jsonl"):
        return list(read_dataset_jsonl(path))
    return list(read_dataset(path))


def shared_init_points(seed, function_id, m, d):
    rng = np.random.default_rng(np.random.SeedSequence([seed, function_id]))
    return rng.random((m, d))


def _trajectory_group(job):
    from zeroshotopt.methods import resolve_method
    from zeroshotopt.trajectories import label_group, make_record

    f, variants, m, steps, seed = job
    init = shared_init_points(seed, f.id, m, f.dimension)
    records = []
    try:
        for j, name in enumerate(variants):
            run_seed = int(np.random.SeedSequence([seed, f.id, j]).generate_state(1)[0])
            history = resolve_method(name)(f, init, steps, run_seed)
            records.append(make_record(f.id, name, m, history))
        return label_group(records).records, None
    except (NumericalError, InputError, FloatingPointError) as exc:
        return None, f"function {f.id}: {exc}"


def cmd_trajectories(config, workers=1):
    from zeroshotopt.methods import resolve_method
    from zeroshotopt.trajectories import DatasetWriter, write_dataset_jsonl

    for name in config["variants"]:
        resolve_method(name)
    if any(v.startswith("model:") for v in config["variants"]):
        raise InputError("trajectories are generated with baseline optimizers only")
    bank = _read_bank_any(config["bank"])
    if config["max_functions"]:
        bank = bank[:config["max_functions"]]
    jobs = [(f, config["variants"], config["m"], config["steps"], config["seed"]) for f in bank]
    logger.info("running %d variants on %d functions", len(config["variants"]), len(bank))
    results = _map(_trajectory_group, jobs, workers)
    all_records, failures = [], []
    _ensure_parent(config["output"])
    with DatasetWriter(config["output"]) as writer:
        for records, error in results:
            if error is not None:
                logger.warning("skipped %s", error)
                failures.append(error)
                continue
            for r in records:
                writer.write(r)
            all_records.extend(records)
    if config["jsonl"]:
        _ensure_parent(config["jsonl"])
        write_dataset_jsonl(all_records, config["jsonl"])
    summary = trajectory_summary(all_records, config["variants"])
    summary.update(n_functions=len(bank), failures=failures,
                   manifest=manifest("trajectories", config))
    summary_path = config["summary"] or config["output"] + ".summary.json"
    _ensure_parent(summary_path)
    write_json(summary_path, summary)
    write_manifest(config["output"], "trajectories", config, records=len(all_records))
    return all_records, summary


def trajectory_summary(records, variants):
    per_variant = {}
    for name in variants:
        regrets = [r.regret for r in records if r.method_id == name]
        per_variant[name] = {
            "count": len(regrets),
            "mean_regret": float(np.mean(regrets)) if regrets else None,
            "zero_regret": int(sum(r == 0.0 for r in regrets)),
        }
    return {"n_records": len(records), "per_variant": per_variant}


# ------------------------------------------------------------ train/finetune

def _write_loss_csv(path, ckpt):
    _ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "loss", "accuracy", "learning_rate"])
        for row in ckpt.extra.get("loss_history", []):
            writer.writerow([row[0]] + [repr(float(v)) for v in row[1:]])


def _train_config(config, defaults=None):
    from zeroshotopt.seqmodel.training import TrainConfig

    overrides = {**(defaults or {}), **_load_json_arg(config["train"], "train config")}
    overrides.setdefault("seed", config["seed"])
    if overrides.get("checkpoint_interval") and not overrides.get("checkpoint_path"):
        overrides["checkpoint_path"] = config["output"]
    return TrainConfig.from_dict(overrides)


def cmd_train(config, resume=None):
    from zeroshotopt.seqmodel.checkpoint import load_checkpoint, save_checkpoint
    from zeroshotopt.seqmodel.model import ModelConfig
    from zeroshotopt.seqmodel.training import set_deterministic, train

    set_deterministic()
    records = _read_dataset_any(config["dataset"])
    if not records:
        raise InputError(f"dataset {config['dataset']} holds no records")
    if resume is not None:
        ckpt = load_checkpoint(resume)
        model_cfg = ModelConfig.from_dict(ckpt.model_config)
        base = {k: v for k, v in ckpt.train_config.items()
                if k not in ("checkpoint_path", "checkpoint_interval")}
        train_cfg = _train_config(config, base)
        if train_cfg.total_iterations <= ckpt.step:
            raise InputError(f"total_iterations {train_cfg.total_iterations} does not extend "
                             f"the checkpoint step {ckpt.step}")
    else:
        ckpt = None
        try:
            model_cfg = ModelConfig.from_dict(_load_json_arg(config["model"], "model config"))
        except TypeError as exc:
            raise InputError(f"invalid model config: {exc}") from None
        train_cfg = _train_config(config)
    max_dim = max(r.dimension for r in records)
    if max_dim > model_cfg.max_dim:
        raise InputError(f"dataset dimension {max_dim} exceeds model max_dim {model_cfg.max_dim}")
    _ensure_parent(config["output"])
    result = train(records, model_cfg, train_cfg, resume_from=ckpt)
    result.extra["manifest"] = manifest("finetune" if resume else "train", config)
    save_checkpoint(result, config["output"])
    _write_loss_csv(config["loss_csv"] or config["output"] + ".loss.csv", result)
    write_manifest(config["output"], "finetune" if resume else "train", config, step=result.step)
    return result


# ---------------------------------------------------------------- optimize

def resolve_target(name, bank_path=None):
    """A builtin benchmark by name, or ``gp:<id>`` from a function bank."""
    from zeroshotopt.bench import SUITE_DIMS, builtin_suite, gp_benchmark

    builtins = {fn.name: fn for fn in builtin_suite(SUITE_DIMS)}
    if name in builtins:
        return builtins[name]
    available = sorted(builtins)
    if bank_path:
        bank = {f"gp:{f.id}": f for f in _read_bank_any(bank_path)}
        if name in bank:
            f = bank[name]
            return gp_benchmark(f, name) if f.min_estimate is not None else f
        available += sorted(bank, key=lambda k: int(k[3:]))
    raise InputError(f"unknown target {name!r}; available: {', '.join(available)}")


def history_lines(history):
    best = history.best_so_far()
    lines = []
    for i in range(len(history)):
        info = history.info[i] if i < len(history.info) else {}
        lines.append({
            "step": i,
            "point": history.points[i].tolist(),
            "value": float(history.values[i]),
            "bestSoFar": float(best[i]),
            "selectedCandidateIndex": info.get("selected"),
            "candidateEIs": info.get("candidate_eis"),
        })
    return lines


def cmd_optimize(config):
    from zeroshotopt.policy import OptimizeConfig, OptimizationAborted, optimize
    from zeroshotopt.seqmodel.checkpoint import load_checkpoint
    from zeroshotopt.seqmodel.training import model_from_checkpoint, set_deterministic

    set_deterministic()
    target = resolve_target(config["target"], config["bank"])
    model = model_from_checkpoint(load_checkpoint(config["checkpoint"]))
    opt_cfg = OptimizeConfig(budget=config["budget"], init_count=config["m"],
                             candidates=config["candidates"], top_p=config["top_p"],
                             scaling=config["scaling"], init_design=config["init_design"],
                             seed=config["seed"])
    aborted = None
    try:
        history = optimize(model, target, target.dimension, opt_cfg)
    except OptimizationAborted as exc:
        history, aborted = exc.history, exc
    _ensure_parent(config["output"])
    with open(config["output"], "w", encoding="utf-8") as fh:
        for line in history_lines(history):
            fh.write(json.dumps(line) + "\n")
    write_manifest(config["output"], "optimize", config, evaluations=len(history))
    if aborted is not None:
        raise NumericalError(str(aborted))
    return history


# --------------------------------------------------------------- benchmark

def _suite(config):
    from zeroshotopt.bench import builtin_suite, gp_benchmark

    suite = builtin_suite(config["builtin_dims"]) if config["builtin_dims"] else []
    if config["bank"]:
        for f in _read_bank_any(config["bank"]):
            suite.append(gp_benchmark(f))
    if not suite:
        raise InputError("benchmark suite is empty")
    return suite


def _write_report(report, out_dir, command, config):
    from zeroshotopt.bench import report_csv, report_curves_jsonl, report_markdown

    os.makedirs(out_dir, exist_ok=True)
    files = {"report.csv": report_csv(report), "report.md": report_markdown(report),
             "curves.jsonl": report_curves_jsonl(report)}
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(text)
    summary = {"summary": report.summary, "methods": report.methods,
               "functions": report.functions, "seeds": report.seeds, "budget": report.budget,
               "m": report.m, "manifest": manifest(command, config)}
    write_json(os.path.join(out_dir, "summary.json"), summary)


def cmd_benchmark(config, workers=1):
    from zeroshotopt.bench import run_benchmark
    from zeroshotopt.methods import resolve_method
    from zeroshotopt.seqmodel.training import set_deterministic

    set_deterministic()
    methods = {}
    for name in config["methods"]:
        if name.startswith("model:") and not os.path.exists(name[len("model:"):]):
            raise InputError(f"checkpoint not found for method {name}")
        methods[name] = resolve_method(name, **config["model_options"])
    suite = _suite(config)
    seeds = [config["seed"] + i for i in range(config["seeds"])]
    report = run_benchmark(methods, suite, seeds=seeds, budget=config["budget"], m=config["m"],
                           workers=workers)
    _write_report(report, config["output_dir"], "benchmark", config)
    return report


def cmd_report(config):
    from zeroshotopt.bench import report_from_curves

    with open(config["curves"], encoding="utf-8") as fh:
        report = report_from_curves(fh.readlines(), config["m"])
    if not report.cells:
        raise InputError(f"no curves in {config['curves']}")
    _write_report(report, config["output_dir"], "report", config)
    return report


# -------------------------------------------------------------------- main

def build_parser():
    parser = argparse.ArgumentParser(prog="zso", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"zeroshotopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int, default=None,
                       help="parallel processes (default: all cores; 1 in deterministic mode)")
        p.add_argument("--deterministic", action="store_true",
                       help="same as ZSO_DETERMINISTIC=1")
        p.add_argument("--print-config", action="store_true",
                       help="print the resolved config and exit")
        p.add_argument("-v", "--verbose", action="store_true")
        return p

    p = add("generate", "sample synthetic GP functions into a bank")
    p.add_argument("--dims", type=int, nargs="+")
    p.add_argument("--functions-per-dim", type=int)
    p.add_argument("--no-estimate-min", dest="estimate_min", action="store_false", default=None)
    p.add_argument("--output")
    p.add_argument("--jsonl")

    p = add("trajectories", "run baseline optimizers on a bank and label regret")
    p.add_argument("--bank")
    p.add_argument("--variants", nargs="+")
    p.add_argument("--m", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--max-functions", type=int)
    p.add_argument("--output")
    p.add_argument("--jsonl")
    p.add_argument("--summary")

    for name, text in (("train", "train a model"), ("finetune", "continue training a checkpoint")):
        p = add(name, text)
        p.add_argument("--dataset")
        if name == "train":
            p.add_argument("--model", help="model config JSON file")
        else:
            p.add_argument("--from", dest="from_")
        p.add_argument("--train", help="training config JSON file")
        p.add_argument("--iterations", type=int, help="shortcut for train.total_iterations")
        p.add_argument("--output")
        p.add_argument("--loss-csv")

    p = add("optimize", "minimize a target with a trained model")
    p.add_argument("--checkpoint")
    p.add_argument("--target")
    p.add_argument("--bank")
    p.add_argument("--budget", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--candidates", type=int)
    p.add_argument("--top-p", type=float)
    p.add_argument("--scaling", choices=["fixed", "scaled", "scaled_high"])
    p.add_argument("--init-design", choices=["uniform", "lhs"])
    p.add_argument("--output")

    p = add("benchmark", "compare methods on benchmark functions")
    p.add_argument("--methods", nargs="+")
    p.add_argument("--builtin-dims", type=int, nargs="*")
    p.add_argument("--bank")
    p.add_argument("--seeds", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--output-dir")

    p = add("report", "rebuild report tables from stored curves")
    p.add_argument("--curves")
    p.add_argument("--m", type=int)
    p.add_argument("--output-dir")
    return parser


_GLOBAL_ARGS = {"command", "config", "workers", "deterministic", "print_config", "verbose",
                "iterations", "from_"}


def _overrides(args):
    out = {k: v for k, v in vars(args).items() if k not in _GLOBAL_ARGS}
    if getattr(args, "from_", None) is not None:
        out["from"] = args.from_
    if args.command in ("train", "finetune"):
        for key in ("model", "train"):
            if out.get(key) is not None:
                out[key] = _load_json_arg(out[key], f"{key} config")
    return out


def run(args):
    config = resolve_config(args.command, args.config, _overrides(args))
    if getattr(args, "iterations", None) is not None:
        train_cfg = _load_json_arg(config["train"], "train config")
        config["train"] = {**train_cfg, "total_iterations": args.iterations}
    if args.print_config:
        print(json.dumps(config, indent=2, sort_keys=True))
        return None
    check_inputs(args.command, config)
    workers = _workers(args)
    if args.command == "generate":
        return cmd_generate(config, workers)
    if args.command == "trajectories":
        return cmd_trajectories(config, workers)
    if args.command == "train":
        return cmd_train(config)
    if args.command == "finetune":
        return cmd_train(config, resume=config["from"])
    if args.command == "optimize":
        return cmd_optimize(config)
    if args.command == "benchmark":
        return cmd_benchmark(config, workers)
    return cmd_report(config)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if deterministic_mode(args):
        os.environ["ZSO_DETERMINISTIC"] = "1"
    try:
        run(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
