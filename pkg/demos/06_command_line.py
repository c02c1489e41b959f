"""Driving the command-line interface on the sample documents in demos/data."""

import json
import subprocess
import sys
from pathlib import Path

DATA = Path(__file__).resolve().parent / "data"


def koszulkit(*args):
    proc = subprocess.run([sys.executable, "-m", "koszulkit.cli", *map(str, args)], capture_output=True, text=True)
    return proc.returncode, proc.stdout


for cmd, doc in [("check-koszul", "typ_xy.kz"), ("check-koszul", "nonmonic.kz"), ("tot", "typ_xy.kz"),
                 ("snf", "snf.kz"), ("gb", "ideal.kz"), ("zigzag", "double.kz")]:
    code, out = koszulkit(cmd, "--doc", DATA / doc)
    print(f"$ koszulkit {cmd} --doc {doc}    (exit {code})")
    print("\n".join("    " + ln for ln in out.splitlines()[:12]))

code, out = koszulkit("suite", "--seed", 42, "--count", 2, "--format", "structured")
rep = json.loads(out)
print(f"$ koszulkit suite --seed 42 --count 2 --format structured    (exit {code})")
print("    outcome:", rep["outcome"], " properties:", len(rep["data"]["tallies"]))
