import json
import os
import pathlib
import shutil
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("MEETWALK_CLI") or shutil.which("meetwalk")
    if not exe:
        pytest.skip("meetwalk executable not found (set MEETWALK_CLI)")

    def run(*args, check=True):
        proc = subprocess.run([exe, *map(str, args)], capture_output=True, text=True)
        if check and proc.returncode != 0:
            raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
        return proc

    return run


@pytest.fixture(scope="session")
def run_json(cli):
    def run(*args):
        return json.loads(cli(*args, "--json").stdout)

    return run
