"""Drive the whole pipeline from one YAML file, the way the CLI does.

Writes a config, then runs check-params, greens, constants, solve and
verify in process, printing the artifacts each stage leaves behind.
Equivalent shell session:

    navier4 check-params --config run.yaml
    navier4 greens       --config run.yaml
    navier4 constants    --config run.yaml
    navier4 solve        --config run.yaml
    navier4 verify       --config run.yaml
"""

import json
import os
import tempfile

from navier4.cli import main

CONFIG = """\
domain:
  lengths: [1.0]
equations:
  - {alpha: 0.0, beta: 0.0}
  - {alpha: 0.0, beta: 0.0}
f1: {kind: power, c: 1.0, p: 2.0}
f2: {kind: power, c: 1.0, p: 2.0}
strategy: auto
tol: 1.0e-8
max_iter: 50
init_amplitude: 10.0
forcing: {kind: mode, k: [1]}
seed: 42
"""

workdir = tempfile.mkdtemp(prefix="navier4_demo_")
cfg = os.path.join(workdir, "run.yaml")
out = os.path.join(workdir, "out")
with open(cfg, "w") as fh:
    fh.write(CONFIG)

for sub in ("check-params", "greens", "constants", "solve", "verify"):
    print(f"\n$ navier4 {sub} --config run.yaml")
    rc = main([sub, "--config", cfg, "--out", out])
    print(f"-> exit {rc}")
    assert rc == 0

print(f"\nartifacts in {out}:")
for name in sorted(os.listdir(out)):
    print(f"  {name}")

report = json.load(open(os.path.join(out, "report.json")))
print(f"\nreport.json says: strategy={report['solve']['strategy']}, "
      f"iterations={report['solve']['iterations']}, "
      f"classification={report['classification']['classification']}")
