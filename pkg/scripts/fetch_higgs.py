#!/usr/bin/env python3
"""Download the UCI HIGGS dataset (or a leading slice of it).

The full file is ~2.6 GB compressed; with --rows only the first N lines are
kept, which is enough for the reference experiment (20,096 rows) and keeps
the download/decode small on disk.
"""

import argparse
import gzip
import os
import shutil
import urllib.request

URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/00280/HIGGS.csv.gz"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/HIGGS.csv.gz")
    parser.add_argument("--rows", type=int, default=20_096,
                        help="keep only the first N rows; 0 keeps the whole file")
    parser.add_argument("--url", default=URL)
    args = parser.parse_args()

    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    print(f"fetching {args.url} ...")
    try:
        response = urllib.request.urlopen(args.url)
    except OSError as err:
        print(f"error: download failed ({err}); fetch the file manually and place "
              f"it at {args.out}")
        return 1

    if args.rows <= 0:
        with open(args.out, "wb") as fh:
            shutil.copyfileobj(response, fh)
        print(f"wrote {args.out}")
        return 0

    kept = 0
    with gzip.open(response, "rt") as src, gzip.open(args.out, "wt") as dst:
        for line in src:
            dst.write(line)
            kept += 1
            if kept >= args.rows:
                break
    print(f"wrote first {kept} rows to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
