"""Broken inputs and the witnesses that refute them."""
import io

from gradedpoisson.cli import run
from gradedpoisson.corpus import path

for command, name in (("check-poisson", "nonpoisson"), ("check-thm-a2", "broken_dirac"),
                      ("check-coisotropic", "noncoiso"), ("check-presymplectic", "rankjump")):
    out = io.StringIO()
    status = run([command, str(path(name))], out, io.StringIO())
    failing = [block for block in out.getvalue().split("\n[") if block.startswith("FAILS]")]
    print(f"== {command} {name}: exit status {status}")
    for block in failing:
        lines = [line for line in block.splitlines() if line.startswith(("FAILS]", " "))]
        print("\n".join("[" + line if i == 0 else line for i, line in enumerate(lines)))
    print()
