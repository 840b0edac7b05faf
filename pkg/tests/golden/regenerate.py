"""Rewrite the expected CSVs next to each golden config.  Run only after an intended output change."""

from __future__ import annotations

import contextlib
import io
import pathlib
import sys

from annuli.cli import main

HERE = pathlib.Path(__file__).parent
CASES = {
    "profile_rational": "profile",
    "locate_exp_minus_one": "locate",
    "smt_exp": "smt-scan",
    "borel_recip": "borel",
    "logderiv_boundary_exp": "logderiv",
}

if __name__ == "__main__":
    for name, sub in CASES.items():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main([sub, "--config", str(HERE / f"{name}.cfg"), "--threads", "1"])
        if code != 0:
            sys.exit(f"{name}: exit code {code}")
        (HERE / f"{name}.csv").write_text(buf.getvalue(), encoding="utf-8")
        print(f"wrote {name}.csv")
