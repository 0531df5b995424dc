"""Render all six reference tables and check every cell (exit 1 on any deviation)."""

import argparse
import sys

from gkwseries.cli import main as cli

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ids", default="1,2,3,4,5,6")
    args = ap.parse_args()
    status = 0
    for tid in args.ids.split(","):
        print(f"== table {tid}")
        sys.stdout.flush()
        status |= cli(["table", "--id", tid, "--check"])
    sys.exit(status)
