import os
import subprocess
import sys

import pytest


def _run(pure: bool, *argv):
    env = dict(os.environ)
    env.pop("FORMQM_PURE", None)
    if pure:
        env["FORMQM_PURE"] = "1"
    return subprocess.run([sys.executable, "-m", "formqm.cli", *argv], env=env,
                          capture_output=True, text=True, timeout=300)


def _backend(pure: bool) -> str:
    env = dict(os.environ)
    env.pop("FORMQM_PURE", None)
    if pure:
        env["FORMQM_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", "import formqm; print(formqm.BACKEND)"], env=env,
                         capture_output=True, text=True, check=True)
    return res.stdout.strip()


def test_pure_switch_selects_fractions():
    assert _backend(True) == "fractions"


@pytest.mark.parametrize("argv", [("verify", "all"), ("clifford", "--xi", "3/2"), ("rep", "--j", "3/2")],
                         ids=lambda a: "-".join(a))
def test_backends_agree(argv):
    pytest.importorskip("gmpy2")
    assert _backend(False) == "gmpy2"
    fast, pure = _run(False, *argv), _run(True, *argv)
    assert fast.returncode == pure.returncode == 0
    assert fast.stdout == pure.stdout
