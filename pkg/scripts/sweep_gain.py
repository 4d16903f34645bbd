#!/usr/bin/env python3
"""Search random rosters for the largest recruiting gain.

Writes a per-instance CSV and prints the JSON summary.  Gains above the
conjectured ceiling (2/3 under majority scoring, 1 under expected-wins
scoring) are reported as counterexample candidates; none are known.
"""

import argparse
import sys

from teamcomp.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--instances", type=int, default=300)
    parser.add_argument("--utility", choices=["UE", "UM"], default="UM")
    parser.add_argument("--T", type=int, default=4, help="largest round count to sample")
    parser.add_argument("--out", default="sweep.csv")
    args = parser.parse_args()
    return cli_main(
        [
            "sweep",
            "--seed",
            str(args.seed),
            "--instances",
            str(args.instances),
            "--utility",
            args.utility,
            "--T",
            str(args.T),
            "--out",
            args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
