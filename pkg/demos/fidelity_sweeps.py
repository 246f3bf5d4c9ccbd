"""
Stage fidelity against resource entanglement
============================================

Writes both sweeps as CSV and SVG into ./sweeps_out. The same files come
from ``mfteleport dv-sweep`` and ``mfteleport cv-sweep``.
"""

from pathlib import Path

from mfteleport import cli

out = Path("sweeps_out")
out.mkdir(exist_ok=True)

cli.main(["dv-sweep", "--out", str(out / "dv.csv"), "--svg", str(out / "dv.svg")])
cli.main(["cv-sweep", "--g2", "3", "--out", str(out / "cv.csv"), "--svg", str(out / "cv.svg")])

for name in ("dv.csv", "cv.csv"):
    lines = (out / name).read_text().splitlines()
    print(name, "first row:", lines[1], "last row:", lines[-1])
