#!/usr/bin/env python3
"""Turn a solve output (solution.csv) into a vega-lite spec.

Usage: python3 scripts/solution_vega.py out/solution.csv > solution.vl.json
Render with any vega-lite viewer or vl-convert.
"""

import csv
import json
import sys


def main(path):
    rows = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            rows.append({"x": float(rec["x"]), "value": float(rec["u"]), "series": "u"})
            rows.append({"x": float(rec["x"]), "value": float(rec["Iu"]), "series": "Iu"})
    spec = {
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "width": 600,
        "height": 360,
        "data": {"values": rows},
        "mark": "line",
        "encoding": {
            "x": {"field": "x", "type": "quantitative"},
            "y": {"field": "value", "type": "quantitative"},
            "color": {"field": "series", "type": "nominal"},
        },
    }
    json.dump(spec, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "solution.csv")
