"""Acceptance criteria 1-10, each reported as one PASS / FAIL / NOT RUN line.

Criterion 8 (the full generate / train / benchmark pipeline, about a day of
desktop compute) only runs when ``ZSO_RUN_E2E=1``; ``ZSO_E2E_DIR`` selects its
working directory.
"""

from fractions import Fraction
import json
import math
import os
from pathlib import Path
import time

import numpy as np
import pytest
from scipy.stats import norm, qmc
import torch

from zeroshotopt.baselines.acquisition import acq_ei, acq_logei
from zeroshotopt.baselines.bo import BoVariant, all_variants, run_bo
from zeroshotopt.bench import builtin_suite, report_curves_jsonl, report_from_curves, run_benchmark
from zeroshotopt.cli import cmd_generate, cmd_trajectories, main, shared_init_points
from zeroshotopt.functions import generate_function, read_bank, sample_kernel_spec
from zeroshotopt.gp import fit_posterior, posterior_sample_batch
from zeroshotopt.methods import ModelRunner, resolve_method
from zeroshotopt.policy import OptimizeConfig, scale_states, scaling_coefficients
from zeroshotopt.seqmodel.checkpoint import (
    Checkpoint,
    load_checkpoint,
    model_state_arrays,
    save_checkpoint,
)
from zeroshotopt.seqmodel.model import (
    ModelConfig,
    TrajectoryTransformer,
    collate,
    forward_batch,
    masked_accuracy,
    sequence_loss,
)
from zeroshotopt.seqmodel.tokenizer import TokenizerConfig, encode_record, encode_tokens
from zeroshotopt.seqmodel.training import TrainConfig, model_from_checkpoint, train
from zeroshotopt.trajectories import label_group, make_record, read_dataset

pytestmark = pytest.mark.acceptance


def conclude(verdict, number, ok, detail):
    verdict(number, "PASS" if ok else "FAIL", detail)
    assert ok, detail


# ---------------------------------------------------------------- 1

def test_criterion_1_gp_correctness(verdict):
    start = time.perf_counter()
    errors = []
    for seed in range(100):
        rng = np.random.default_rng([1, seed])
        d = 1 + seed % 5
        n = int(rng.integers(10 * d, min(30 * d, 60) + 1))
        spec = sample_kernel_spec(int(rng.integers(2 ** 63)))
        X, y = rng.random((n, d)), rng.standard_normal(n)
        gp = fit_posterior(X, y, spec, jitter=1e-6)
        errors.append(float(np.max(np.abs(gp.predict(X)[0] - y))))
    errors = np.array(errors)
    # sample variance against predictive variance at off-support points
    rng = np.random.default_rng(2)
    X = rng.random((20, 2))
    gp = fit_posterior(X, rng.standard_normal(20), sample_kernel_spec(5).with_lengthscale(0.3))
    P = rng.random((5, 2))
    draws = np.array([posterior_sample_batch(gp, P, s) for s in range(10_000)])
    var = gp.predict(P)[1]
    rel = np.abs(draws.var(axis=0, ddof=1) - var) / var
    elapsed = time.perf_counter() - start
    ok_interp = errors.max() <= 1e-3
    ok = ok_interp and rel.max() <= 0.05 and elapsed <= 60
    conclude(verdict, 1, ok,
             f"interpolation max err {errors.max():.2e} (median {np.median(errors):.1e}, "
             f"{int(np.sum(errors <= 1e-3))}/100 fits within 1e-3); sample variance max rel "
             f"dev {rel.max():.3f}; {elapsed:.0f}s")


# ---------------------------------------------------------------- 2

def test_criterion_2_acquisition_oracle(verdict):
    start = time.perf_counter()
    # 2^20 scrambled-Sobol normals: a 10^6-sample Monte Carlo estimate
    z = norm.ppf(qmc.Sobol(1, scramble=True, seed=0).random_base2(20)[:, 0])
    rng = np.random.default_rng(3)
    worst, checked = 0.0, 0
    while checked < 100:
        mu, sigma, best = rng.normal(), rng.uniform(0.1, 2.0), rng.normal()
        ei = acq_ei(mu, sigma ** 2, best)
        if ei < 1e-4:
            continue
        mc = float(np.maximum(best - (mu + sigma * z), 0.0).mean())
        worst = max(worst, abs(mc - ei) / ei)
        checked += 1
    agree = 0
    for _ in range(100):
        mean, var, best = rng.normal(size=64), rng.uniform(0.01, 2.0, 64), rng.normal()
        agree += int(np.argmax(acq_ei(mean, var, best)) == np.argmax(acq_logei(mean, var, best)))
    elapsed = time.perf_counter() - start
    conclude(verdict, 2, worst < 0.01 and agree == 100 and elapsed <= 60,
             f"EI vs MC worst rel err {worst:.4f} over 100 triples; LogEI/EI argmax agree "
             f"{agree}/100; {elapsed:.0f}s")


# ---------------------------------------------------------------- 3

def test_criterion_3_regret_invariant(verdict, tmp_path):
    start = time.perf_counter()
    bank = str(tmp_path / "bank.zsof")
    cmd_generate({"seed": 11, "dims": [2], "functions_per_dim": 200, "estimate_min": False,
                  "min_budget": 10000, "output": bank, "jsonl": None})
    variants = [v.name for v in all_variants()]
    cmd_trajectories({"seed": 11, "bank": bank, "variants": variants, "m": 10, "steps": 40,
                      "max_functions": None, "output": str(tmp_path / "t.zsot"), "jsonl": None,
                      "summary": None})
    records = list(read_dataset(tmp_path / "t.zsot"))
    groups = {}
    for r in records:
        groups.setdefault(r.function_id, []).append(r)
    in_range = all(0.0 <= r.regret <= 1.0 for r in records)
    has_zero = all(any(r.regret == 0.0 for r in g) for g in groups.values())
    shared = all(np.array_equal(r.points[:10], g[0].points[:10])
                 and np.array_equal(r.values[:10], g[0].values[:10])
                 for g in groups.values() for r in g)
    complete = len(groups) == 200 and all(len(g) == 10 for g in groups.values())
    elapsed = time.perf_counter() - start
    conclude(verdict, 3, in_range and has_zero and shared and complete and elapsed <= 1800,
             f"{len(records)} records in {len(groups)} groups; labels in [0,1]: {in_range}; "
             f"zero per group: {has_zero}; shared init: {shared}; {elapsed / 60:.1f} min")


# ---------------------------------------------------------------- 4

def test_criterion_4_tokenizer(verdict):
    tok = TokenizerConfig(2000)
    edges = np.arange(2001) / 2000
    near = np.concatenate([edges, np.nextafter(edges, 2), np.nextafter(edges, -1)])
    v = np.concatenate([np.linspace(0, 1, 1_000_001), near])
    v = v[(v >= 0) & (v <= 1)]
    # exact rational check: the value against the exact center of its bin
    probe = np.concatenate([near[(near >= 0) & (near <= 1)],
                            np.random.default_rng(4).random(20_000)])
    half = Fraction(1, 4000)
    exact = all(abs(Fraction(float(x)) - Fraction(2 * int(b) + 1, 4000)) <= half
                for x, b in zip(probe, tok.bin(probe)))
    # float path: decoded centers are the nearest doubles to the exact centers,
    # so they may sit up to one ulp of 1.0 outside the exact bound
    err = float(np.max(np.abs(tok.unbin(tok.bin(v)) - v)))
    boundary = (tok.bin(0.0) == 0 and tok.bin(1.0) == 1999 and tok.unbin(0) == 0.00025
                and tok.unbin(1999) == 0.99975)
    ok = exact and err <= 1 / 4000 + np.spacing(1.0) and boundary
    conclude(verdict, 4, ok,
             f"exact-arithmetic bound holds on {len(probe)} probes: {exact}; float round-trip "
             f"max err 1/4000 + {err - 1 / 4000:.1e}; boundary bins exact: {boundary}")


# ---------------------------------------------------------------- 5

def _batch(cfg, seed, d=2, n=8, B=2):
    rng = np.random.default_rng(seed)
    seqs = [encode_tokens(rng.random(), rng.random(), rng.random((n, d)), rng.random(n), 2)
            for _ in range(B)]
    return collate(seqs, TokenizerConfig(cfg.bin_count))


def test_criterion_5_model_mechanics(verdict, tmp_path):
    start = time.perf_counter()
    # causal mask
    cfg = ModelConfig(n_layer=2, n_head=2, n_embd=32, context_length=128, bin_count=2000,
                      max_dim=3, max_steps=30)
    torch.manual_seed(0)
    model = TrajectoryTransformer(cfg).double().eval()
    batch = _batch(cfg, 0, n=20)
    causal = True
    with torch.no_grad():
        base = forward_batch(model, batch)
        for j in range(1, batch["values"].shape[1]):
            pert = dict(batch, values=batch["values"].clone())
            pert["values"][:, j] = 1.0 - pert["values"][:, j]
            causal &= bool(torch.equal(forward_batch(model, pert)[:, :j], base[:, :j]))
    # initial loss
    model32 = TrajectoryTransformer(cfg).eval()
    big = _batch(cfg, 1, n=20, B=16)
    with torch.no_grad():
        init_loss = sequence_loss(forward_batch(model32, big), big["targets"], big["mask"]).item()
    init_dev = abs(init_loss - math.log(2000)) / math.log(2000)
    # finite differences
    small = ModelConfig(n_layer=1, n_head=2, n_embd=16, context_length=32, bin_count=20,
                        max_dim=2, max_steps=10)
    torch.manual_seed(1)
    fd_model = TrajectoryTransformer(small).double()
    n_params = fd_model.n_params()
    fb = _batch(small, 2, n=5)

    def loss_fn():
        return sequence_loss(forward_batch(fd_model, fb), fb["targets"], fb["mask"])

    fd_model.zero_grad()
    loss_fn().backward()
    params = list(fd_model.parameters())
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        p = params[int(rng.integers(len(params)))]
        idx = tuple(int(rng.integers(s)) for s in p.shape)
        analytic = p.grad[idx].item()
        with torch.no_grad():
            old = p[idx].item()
            p[idx] = old + 1e-5
            up = loss_fn().item()
            p[idx] = old - 1e-5
            down = loss_fn().item()
            p[idx] = old
        numeric = (up - down) / 2e-5
        worst = max(worst, abs(analytic - numeric) / max(abs(numeric), abs(analytic), 1e-3))
    # checkpoint round trip
    ckpt = Checkpoint(cfg.to_dict(), {"bin_count": 2000}, {"precision": "float32"}, 0,
                      model_state_arrays(model32), {})
    save_checkpoint(ckpt, tmp_path / "c.zsoc")
    loaded = model_from_checkpoint(load_checkpoint(tmp_path / "c.zsoc"))
    with torch.no_grad():
        bitwise = bool(torch.equal(forward_batch(model32, big), forward_batch(loaded, big)))
    elapsed = time.perf_counter() - start
    ok = (causal and init_dev < 0.05 and n_params <= 10_000 and worst <= 1e-4 and bitwise
          and elapsed <= 300)
    conclude(verdict, 5, ok,
             f"causal exact: {causal}; init loss {init_loss:.4f} vs ln 2000 "
             f"({100 * init_dev:.2f}% off); FD worst rel err {worst:.1e} on {n_params} params; "
             f"checkpoint bitwise: {bitwise}; {elapsed:.0f}s")


# ---------------------------------------------------------------- 6

def overfit_fixture():
    """64 trajectories: 32 2-D functions x {EI, UCB} with a Matern-5/2 surrogate."""
    records = []
    for fid in range(32):
        f = generate_function(2, 500 + fid, function_id=fid)
        init = shared_init_points(6, fid, 10, 2)
        group = [make_record(fid, v, 10, run_bo(f, BoVariant.from_name(v), init, 40, fid))
                 for v in ("EI-Matern52", "UCB-Matern52")]
        records += label_group(group).records
    return records


def test_criterion_6_trainability(verdict):
    start = time.perf_counter()
    records = overfit_fixture()
    cfg = ModelConfig(n_layer=4, n_head=4, n_embd=128, max_dim=2, max_steps=50)
    n_params = TrajectoryTransformer(cfg).n_params()
    tc = TrainConfig(learning_rate=1e-3, min_learning_rate=1e-4, batch_size=16,
                     total_iterations=5000, augment=False, truncate=False, weight_decay=0.0,
                     log_interval=250, seed=0)
    full = collate([encode_record(r) for r in records], TokenizerConfig(cfg.bin_count))
    ckpt, acc, loss, step = None, 0.0, float("inf"), 0
    while step < 5000 and acc <= 0.9:
        step += 250
        ckpt = train(records, cfg, tc, resume_from=ckpt, stop_at=step)
        model = model_from_checkpoint(ckpt)
        with torch.no_grad():
            logits = forward_batch(model, full)
        acc = masked_accuracy(logits, full["targets"], full["mask"])
        loss = sequence_loss(logits, full["targets"], full["mask"]).item()
    elapsed = time.perf_counter() - start
    conclude(verdict, 6, acc > 0.9 and elapsed <= 1200,
             f"{len(records)} trajectories, {n_params / 1e6:.2f}M params: masked top-1 acc "
             f"{acc:.3f}, loss {loss:.3f} at step {step}; {elapsed / 60:.1f} min")


# ---------------------------------------------------------------- 7

def test_criterion_7_scaling_formulas(verdict):
    v = np.array([4.0, -2.0, 9.0, 0.5])
    t0 = scale_states(v, "scaled_high", 0, 40)
    tL = scale_states(v, "scaled_high", 40, 40)
    ends = (t0.min(), t0.max(), tL.min(), tL.max())
    exact = np.allclose(ends, (0.5, 0.9, 0.1, 0.95), rtol=0, atol=1e-15)
    selectable = all(len(scale_states(v, k, 5, 40)) == 4 for k in ("fixed", "scaled", "scaled_high"))
    fixed = scaling_coefficients("fixed", 7, 40) == (0.1, 0.2)
    default = OptimizeConfig().scaling == "scaled_high"
    conclude(verdict, 7, exact and selectable and fixed and default,
             f"ScaledHigh t=0 -> ({ends[0]:.2f}, {ends[1]:.2f}), t=L -> ({ends[2]:.2f}, "
             f"{ends[3]:.2f}); all three selectable: {selectable}; default ScaledHigh: {default}")


# ---------------------------------------------------------------- 8

def test_criterion_8_end_to_end_ordering(verdict, tmp_path):
    if os.environ.get("ZSO_RUN_E2E") != "1":
        verdict(8, "NOT RUN", "needs ~24 h of desktop compute; set ZSO_RUN_E2E=1 to run")
        pytest.skip("end-to-end run disabled; set ZSO_RUN_E2E=1")
    work = Path(os.environ.get("ZSO_E2E_DIR", tmp_path))
    work.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    bank, held = str(work / "train_bank.zsof"), str(work / "held_out.zsof")
    if not os.path.exists(bank):
        cmd_generate({"seed": 100, "dims": [2], "functions_per_dim": 2000,
                      "estimate_min": False, "min_budget": 10000, "output": bank, "jsonl": None})
    if not os.path.exists(held):
        cmd_generate({"seed": 200, "dims": [2], "functions_per_dim": 100,
                      "estimate_min": True, "min_budget": 10000, "output": held, "jsonl": None})
    data = str(work / "train.zsot")
    baselines = ["EI-Matern52", "UCB-Matern52", "TS-Matern52"]
    if not os.path.exists(data):
        cmd_trajectories({"seed": 100, "bank": bank, "variants": baselines, "m": 10,
                          "steps": 40, "max_functions": None, "output": data, "jsonl": None,
                          "summary": None})
    ckpt_path = str(work / "model.zsoc")
    if not os.path.exists(ckpt_path):
        ckpt = train(list(read_dataset(data)), ModelConfig(),
                     TrainConfig(total_iterations=50_000, checkpoint_interval=1000,
                                 checkpoint_path=str(work / "partial.zsoc")))
        save_checkpoint(ckpt, ckpt_path)
    from zeroshotopt.bench import gp_benchmark

    suite = [gp_benchmark(f) for f in read_bank(held)]
    methods = {"model": ModelRunner(ckpt_path), "Random": resolve_method("Random")}
    methods.update({name: resolve_method(name) for name in baselines})
    report = run_benchmark(methods, suite, seeds=5, budget=50, m=10)
    means = report.means()
    best_bo = max(means[name] for name in baselines)
    gap = means["model"] - means["Random"]
    ratio = means["model"] / best_bo
    elapsed = time.perf_counter() - start
    conclude(verdict, 8, gap >= 0.10 and ratio >= 0.85,
             f"model {means['model']:.3f}, random {means['Random']:.3f} (gap {gap:.3f}), "
             f"best BO {best_bo:.3f} (ratio {ratio:.3f}); {elapsed / 3600:.1f} h")


# ---------------------------------------------------------------- 9

def test_criterion_9_benchmark_harness(verdict):
    start = time.perf_counter()
    names = [v.name for v in all_variants()] + ["Random"]
    methods = {name: resolve_method(name) for name in names}
    report = run_benchmark(methods, builtin_suite([2]), seeds=5, budget=50, m=10)
    means = report.means()
    beaten = [n for n in names[:-1] if means[n] > means["Random"]]
    rebuilt = report_from_curves(report_curves_jsonl(report).splitlines(), 10)
    recompute = json.dumps(rebuilt.summary, sort_keys=True) == json.dumps(report.summary,
                                                                          sort_keys=True)
    ranks_ok = [report.summary[k]["rank"] for k in sorted(names, key=lambda k: -means[k])] == \
        list(range(1, len(names) + 1))
    elapsed = time.perf_counter() - start
    worst = min(names[:-1], key=lambda n: means[n])
    conclude(verdict, 9, len(beaten) == 10 and recompute and ranks_ok,
             f"{len(beaten)}/10 BO variants beat random ({means['Random']:.3f}); weakest "
             f"{worst} {means[worst]:.3f}; recompute bitwise: {recompute}; ranks consistent: "
             f"{ranks_ok}; {elapsed / 60:.1f} min")


# ---------------------------------------------------------------- 10

def _snapshot(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_criterion_10_determinism(verdict, tmp_path, monkeypatch):
    monkeypatch.setenv("ZSO_DETERMINISTIC", "1")
    (tmp_path / "model.json").write_text(json.dumps(
        {"n_layer": 1, "n_head": 2, "n_embd": 16, "context_length": 128, "bin_count": 100,
         "max_dim": 3, "max_steps": 30}))
    (tmp_path / "train.json").write_text(json.dumps({"batch_size": 4, "total_iterations": 10}))
    p = str(tmp_path)
    commands = {
        "generate": ["generate", "--seed", "5", "--dims", "2", "3", "--functions-per-dim", "3",
                     "--output", f"{p}/bank.zsof", "--jsonl", f"{p}/bank.jsonl"],
        "trajectories": ["trajectories", "--seed", "5", "--bank", f"{p}/bank.zsof", "--m", "5",
                         "--steps", "10", "--output", f"{p}/t.zsot", "--jsonl", f"{p}/t.jsonl"],
        "optimize": ["optimize", "--seed", "5", "--checkpoint", f"{p}/model.zsoc", "--target",
                     "gp:4", "--bank", f"{p}/bank.zsof", "--budget", "20", "--m", "5",
                     "--output", f"{p}/h.jsonl"],
        "benchmark": ["benchmark", "--seed", "5", "--methods", "EI-RBF", "CMA-ES", "Random",
                      f"model:{p}/model.zsoc", "--bank", f"{p}/bank.zsof", "--builtin-dims",
                      "2", "--seeds", "2", "--budget", "20", "--m", "5", "--output-dir",
                      f"{p}/bench"],
    }
    train_cmd = ["train", "--seed", "5", "--dataset", f"{p}/t.zsot", "--model",
                 f"{p}/model.json", "--train", f"{p}/train.json", "--output", f"{p}/model.zsoc"]
    results = {}
    for name, argv in commands.items():
        assert main(argv) == 0, name
        if name == "trajectories":
            assert main(train_cmd) == 0
        first = _snapshot(tmp_path)
        assert main(argv) == 0, name
        second = _snapshot(tmp_path)
        results[name] = first == second
    conclude(verdict, 10, all(results.values()),
             ", ".join(f"{k} {'identical' if v else 'DIFFERS'}" for k, v in results.items()))
