"""Driving the command line tool from Python.

Each subcommand reads one INI file and writes files named
<task>-<hash of the config>.*; rerunning the same file rewrites
byte-identical data.
"""
import os
import subprocess
import sys

here = os.path.dirname(os.path.abspath(__file__))
out = os.path.join(here, "out", "cli")
cfg = os.path.join(here, "configs", "spreading.ini")

for task in ("threshold", "simulate", "classify"):
    cmd = [sys.executable, "-m", "aedesfront.cli", task, "--config", cfg, "--out", out]
    res = subprocess.run(cmd, capture_output=True, text=True)
    print("$ aedesfront", task, "--config configs/spreading.ini", f"(exit {res.returncode})")
    print(res.stdout.strip())

# A broken config is reported field by field with exit code 2
bad = os.path.join(out, "bad.ini")
with open(cfg) as fh:
    text = fh.read().replace("D = 1.0", "D = -1.0")
with open(bad, "w") as fh:
    fh.write(text)
res = subprocess.run([sys.executable, "-m", "aedesfront.cli", "simulate", "--config", bad],
                     capture_output=True, text=True)
print("exit", res.returncode, res.stderr.strip())
