"""
Shared fixtures
"""
import json
import os

import pytest
from click.testing import CliRunner

from brouwerlab.config import set_settings
from brouwerlab.graph_core import build_graph, named_graph


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from the packaged defaults"""
    for key in list(os.environ):
        if key.startswith("BROUWERLAB_"):
            monkeypatch.delenv(key)
    set_settings(None)
    yield
    set_settings(None)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def k3():
    return named_graph("complete", 3)


@pytest.fixture
def p3():
    return named_graph("path", 3)


@pytest.fixture
def weighted_graph():
    """Small graph with one negative weight"""
    return build_graph(4, [(0, 1, 0.5), (1, 2, -0.25), (2, 3, 1.5), (0, 3, 0.75), (0, 2, 0.3)])


@pytest.fixture
def write_graph(tmp_path):
    """Write a Graph JSON document and return its path"""

    def _write(document, name="graph.json"):
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document)
        path.write_text(text, encoding="utf-8")
        return path

    return _write
