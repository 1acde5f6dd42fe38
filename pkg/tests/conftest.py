import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_functions():
    from zeroshotopt.functions import estimate_global_min, generate_function

    fns = [generate_function(2, s, function_id=s) for s in range(3)]
    for f in fns:
        estimate_global_min(f, budget=2000, seed=0)
    return fns


@pytest.fixture(scope="session")
def tiny_records():
    """Two labelled groups of short 2-D trajectories."""
    from zeroshotopt.baselines.evolution import run_random
    from zeroshotopt.functions import generate_function
    from zeroshotopt.trajectories import label_group, make_record

    records = []
    for fid in range(2):
        f = generate_function(2, 100 + fid, function_id=fid)
        init = np.random.default_rng(fid).random((4, 2))
        group = [make_record(fid, f"random{j}", 4, run_random(f, init, 10, j)) for j in range(3)]
        records += label_group(group).records
    return records


@pytest.fixture(scope="session")
def tiny_model_config():
    from zeroshotopt.seqmodel.model import ModelConfig

    return ModelConfig(n_layer=1, n_head=2, n_embd=16, context_length=64, bin_count=50,
                       max_dim=3, max_steps=20)


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; it is echoed in the terminal summary."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(number, status, detail):
        line = f"criterion {number}: {status} ({detail})"
        lines.append((number, line))
        print(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
