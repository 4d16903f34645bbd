#!/usr/bin/env python3
"""Run every verification suite and print the aggregated JSON report.

Exit code 0 means every check landed as expected (including the deliberate
majority-scoring contrast, which is expected to show a value drop).
"""

import argparse
import sys

from teamcomp.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--instances", type=int, default=10, help="instances per randomized suite")
    parser.add_argument("--Cmax", type=int, default=4)
    args = parser.parse_args()
    return cli_main(
        [
            "verify",
            "all",
            "--seed",
            str(args.seed),
            "--instances",
            str(args.instances),
            "--Cmax",
            str(args.Cmax),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
