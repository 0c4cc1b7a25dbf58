import json

import numpy as np
import pytest
from click.testing import CliRunner

from phkit import create_config

CELL_COMPONENTS = {
    "G1": (0, 1, 2),
    "G2": (1, 2),
    "G3": (0, 2),
    "G4": (0, 1),
    "G5": (0,),
    "G6": (1,),
    "G7": (2,),
}


@pytest.fixture
def run_config():
    return create_config("testing")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def metric_factory():
    """Random metrics of a given cell, kept away from cell boundaries."""
    from phkit.analyzers.metric_forms import MetricForms

    def build(cell, rng, kind="invertible"):
        g_real = np.zeros(3)
        for i in CELL_COMPONENTS[cell]:
            g_real[i] = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
        norm = float(np.linalg.norm(g_real))
        if kind == "singular":
            d = rng.choice([-1.0, 1.0]) * norm
        elif kind == "traceless":
            d = 0.0
        elif kind == "positive":
            d = rng.choice([-1.0, 1.0]) * norm * rng.uniform(1.3, 3.0)
        elif kind == "negative":
            d = rng.choice([-1.0, 1.0]) * norm * rng.uniform(0.1, 0.75)
        else:
            d = rng.choice([-1.0, 1.0]) * norm * rng.choice(
                [rng.uniform(0.1, 0.75), rng.uniform(1.3, 3.0)]
            )
        return MetricForms.from_components(d, g_real)

    return build


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def runner():
    return CliRunner()
