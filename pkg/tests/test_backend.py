import json
import os
import subprocess
import sys

from shootout import _pykernels
from shootout._backend import BACKEND
from shootout.engine import simulate
from shootout.mechanisms import CATCH_UP
from shootout.model import PRESETS


def _backend_in_subprocess(**env):
    code = "from shootout._backend import BACKEND; print(BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={**os.environ, **env},
                         capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_fallback_forced_by_environment():
    assert _backend_in_subprocess(SHOOTOUT_PURE_PYTHON="1") == "python"
    assert _backend_in_subprocess(SHOOTOUT_PURE_PYTHON="0") == BACKEND


def test_explicit_fallback_reports_its_name():
    res = simulate(CATCH_UP, 5, PRESETS["brams"], seed=3, trials=500, backend=_pykernels)
    assert res.backend == "python"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "shootout.cli", "replay", "abba", "SS.MS",
                          "--format", "json"], capture_output=True, text=True)
    assert out.returncode == 0
    assert len(json.loads(out.stdout)["data"]) == 2
