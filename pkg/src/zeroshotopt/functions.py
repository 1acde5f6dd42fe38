"""Random GP-posterior objectives on the unit box.

A :class:`SyntheticFunction` is the posterior mean plus a single fixed
standard-normal multiple of the posterior standard deviation, which gives a
continuous deterministic function.
"""

from dataclasses import dataclass
import io
import json
import logging
import struct

import numpy as np

from zeroshotopt.exceptions import FormatError, InputError, NumericalError
from zeroshotopt.gp import (
    KERNEL_FORMS,
    KERNEL_KINDS,
    KernelSpec,
    fit_posterior,
)
from zeroshotopt.search import coordinate_descent, sobol_points
from zeroshotopt.validation import check_unit_box

logger = logging.getLogger(__name__)

MIN_DIM, MAX_DIM = 2, 20
LENGTHSCALE_RANGE = (0.1, 10.0)
MAX_RETRIES = 5
BENCHMARK_BUDGET = 10_000

BANK_MAGIC = b"ZSOF"
BANK_VERSION = 1


def sample_kernel_spec(seed):
    """Draw a kernel recipe: form class uniform, kinds uniform, log-uniform lengthscale."""
    rng = np.random.default_rng(seed)
    form = KERNEL_FORMS[rng.integers(len(KERNEL_FORMS))]
    n_kinds = 1 if form == "base" else 2
    kinds = tuple(KERNEL_KINDS[i] for i in rng.integers(len(KERNEL_KINDS), size=n_kinds))
    lo, hi = np.log(LENGTHSCALE_RANGE[0]), np.log(LENGTHSCALE_RANGE[1])
    lengthscale = float(np.exp(rng.uniform(lo, hi)))
    return KernelSpec(form, kinds, lengthscale)


@dataclass(eq=False)
class SyntheticFunction:
    id: int
    dimension: int
    posterior: object
    z_draw: float
    min_estimate: float = None
    min_estimate_budget: int = 0

    def __call__(self, x):
        return evaluate(self, x)

    def evaluate_batch(self, X):
        X = check_unit_box(X, self.dimension)
        mean, var = self.posterior.predict(X)
        return mean + self.z_draw * np.sqrt(var)

    @property
    def kernel(self):
        return self.posterior.kernel


def _function_rng(d, seed, attempt):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(d), attempt]))


def generate_function(d, seed, function_id=None):
    """Fit a GP to random standard-normal data and wrap it as an objective.

    All draws come from ``(d, seed)``. A failed fit is retried with a
    perturbed sub-seed up to five times.
    """
    if not (MIN_DIM <= d <= MAX_DIM):
        raise InputError(f"dimension must be in [{MIN_DIM}, {MAX_DIM}], got {d}")
    last_error = None
    for attempt in range(MAX_RETRIES + 1):
        rng = _function_rng(d, seed, attempt)
        spec = sample_kernel_spec(rng.integers(2**63))
        n = int(rng.integers(10 * d, 30 * d + 1))
        X = rng.random((n, d))
        y = rng.standard_normal(n)
        z = float(rng.standard_normal())
        try:
            posterior = fit_posterior(X, y, spec)
        except NumericalError as exc:
            last_error = exc
            logger.warning("function (d=%d, seed=%s) attempt %d failed: %s", d, seed, attempt, exc)
            continue
        fid = int(seed) if function_id is None else int(function_id)
        return SyntheticFunction(fid, d, posterior, z)
    raise NumericalError(f"could not generate function for d={d}, seed={seed}: {last_error}")


def evaluate(f, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InputError("evaluate expects a single d-vector")
    return float(f.evaluate_batch(x[None, :])[0])


def estimate_global_min(f, budget=BENCHMARK_BUDGET, seed=0, n_starts=10, refine_steps=200):
    """Quasi-random probing plus coordinate-descent refinement of the best probes."""
    if budget < 1000:
        raise InputError("budget must be at least 1000")
    probes = sobol_points(budget, f.dimension, seed)
    values = _batched(f.evaluate_batch, probes)
    order = np.argsort(values, kind="stable")[:n_starts]
    _, refined = coordinate_descent(lambda X: _batched(f.evaluate_batch, X),
                                     probes[order], refine_steps)
    estimate = float(min(values.min(), refined.min()))
    f.min_estimate = estimate
    f.min_estimate_budget = int(budget)
    return estimate


def _batched(fn, X, chunk=4096):
    if X.shape[0] <= chunk:
        return fn(X)
    return np.concatenate([fn(X[i:i + chunk]) for i in range(0, X.shape[0], chunk)])


# -- function bank serialization ------------------------------------------------

def function_to_dict(f):
    post = f.posterior
    return {
        "id": f.id,
        "d": f.dimension,
        "kernel": post.kernel.to_dict(),
        "support_points": post.support_points.tolist(),
        "targets": post.targets.tolist(),
        "jitter": post.jitter,
        "z_draw": f.z_draw,
        "min_estimate": f.min_estimate,
        "min_estimate_budget": f.min_estimate_budget,
    }


def function_from_dict(data):
    spec = KernelSpec.from_dict(data["kernel"])
    X = np.asarray(data["support_points"], dtype=np.float64).reshape(-1, int(data["d"]))
    posterior = fit_posterior(X, np.asarray(data["targets"], dtype=np.float64),
                              spec, float(data["jitter"]))
    if posterior.jitter != float(data["jitter"]):
        raise NumericalError(f"function {data['id']}: stored jitter no longer factorizes")
    me = data.get("min_estimate")
    return SyntheticFunction(int(data["id"]), int(data["d"]), posterior, float(data["z_draw"]),
                             None if me is None else float(me),
                             int(data.get("min_estimate_budget", 0)))


def write_bank_jsonl(functions, path):
    with open(path, "w", encoding="utf-8") as fh:
        for f in functions:
            fh.write(json.dumps(function_to_dict(f)) + "\n")


def read_bank_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield function_from_dict(json.loads(line))


_FORM_CODE = {form: i for i, form in enumerate(KERNEL_FORMS)}
_KIND_CODE = {kind: i for i, kind in enumerate(KERNEL_KINDS)}
_FN_HEAD = struct.Struct("<QHBBBdIdddQ")


def _pack_function(f):
    post = f.posterior
    kinds = list(post.kernel.kinds) + [post.kernel.kinds[0]] * (2 - len(post.kernel.kinds))
    n, d = post.support_points.shape
    me = np.nan if f.min_estimate is None else f.min_estimate
    buf = io.BytesIO()
    buf.write(_FN_HEAD.pack(f.id, d, _FORM_CODE[post.kernel.form],
                          _KIND_CODE[kinds[0]], _KIND_CODE[kinds[1]], post.kernel.lengthscale,
                          n, post.jitter, f.z_draw, me, f.min_estimate_budget))
    buf.write(np.ascontiguousarray(post.support_points, dtype="<f8").tobytes())
    buf.write(np.ascontiguousarray(post.targets, dtype="<f8").tobytes())
    return buf.getvalue()


def _unpack_function(payload, offset):
    if len(payload) < _FN_HEAD.size:
        raise FormatError("function payload too short", offset)
    (fid, d, form, ka, kb, ls, n, jitter, z, me, budget) = _FN_HEAD.unpack_from(payload)
    expected = _FN_HEAD.size + 8 * n * (d + 1)
    if len(payload) != expected:
        raise FormatError(f"function payload has {len(payload)} bytes, expected {expected}", offset)
    pts = np.frombuffer(payload, "<f8", n * d, _FN_HEAD.size).reshape(n, d)
    tgt = np.frombuffer(payload, "<f8", n, _FN_HEAD.size + 8 * n * d)
    form_name = KERNEL_FORMS[form]
    kinds = (KERNEL_KINDS[ka],) if form_name == "base" else (KERNEL_KINDS[ka], KERNEL_KINDS[kb])
    return function_from_dict({
        "id": fid, "d": d, "kernel": {"form": form_name, "kinds": kinds, "lengthscale": ls},
        "support_points": pts.copy(), "targets": tgt.copy(), "jitter": jitter, "z_draw": z,
        "min_estimate": None if np.isnan(me) else me, "min_estimate_budget": budget,
    })


def write_bank(functions, path):
    """Packed little-endian bank: header then length-prefixed records."""
    functions = list(functions)
    with open(path, "wb") as fh:
        fh.write(BANK_MAGIC + struct.pack("<IQ", BANK_VERSION, len(functions)))
        for f in functions:
            payload = _pack_function(f)
            fh.write(struct.pack("<Q", len(payload)))
            fh.write(payload)


def read_bank(path):
    """Stream functions from a packed bank file."""
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) < 16 or header[:4] != BANK_MAGIC:
            raise FormatError("not a function bank (bad magic)", 0)
        version, count = struct.unpack("<IQ", header[4:])
        if version != BANK_VERSION:
            raise FormatError(f"unsupported bank version {version}", 4)
        for _ in range(count):
            offset = fh.tell()
            raw = fh.read(8)
            if len(raw) < 8:
                raise FormatError("truncated record length", offset)
            (size,) = struct.unpack("<Q", raw)
            payload = fh.read(size)
            if len(payload) != size:
                raise FormatError(f"truncated payload, wanted {size} bytes", offset)
            yield _unpack_function(payload, offset)
