#!/usr/bin/env python3
"""Download the canonical UCI clustering files into a directory.

Usage: python scripts/fetch_uci.py [DEST]   (default: ./data)

The printed ``swarmcluster cluster`` flags load each file with the expected shape.
"""

import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

FILES = {
    # name: (url, cluster flags, expected rows x features)
    "iris.data": (f"{UCI}/iris/iris.data", "--label-column last --clusters 3", "150 x 4"),
    "wine.data": (f"{UCI}/wine/wine.data", "--label-column first --clusters 3", "178 x 13"),
    # column 0 is the name attribute; keep it for 5 inputs, add --drop-columns 0 for 4
    "hayes-roth.data": (f"{UCI}/hayes-roth/hayes-roth.data", "--label-column last --clusters 3", "132 x 5"),
    "pima-indians-diabetes.csv": (
        "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv",
        "--label-column last --clusters 2",
        "768 x 8",
    ),
}


def main(argv):
    dest = Path(argv[1] if len(argv) > 1 else "data")
    dest.mkdir(parents=True, exist_ok=True)
    for name, (url, flags, shape) in FILES.items():
        target = dest / name
        if not target.exists():
            print(f"fetching {url}")
            with urllib.request.urlopen(url, timeout=60) as resp:
                target.write_bytes(resp.read())
        print(f"  {target}  ({shape}):  swarmcluster cluster --data {target} {flags} --algo gbest")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv))
