"""Time both SVD methods on random integer complexes of the six benchmark shapes.

Every row is checked against exact ranks over Q.
"""

import argparse

from svdcomplex import bench


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=3, help="independent draws per shape")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats (best is kept)")
    args = ap.parse_args()

    rows = []
    for seed in range(args.seeds):
        for idx in range(len(bench.TABLE1_SHAPES)):
            C = bench.table1_case(idx, seed)
            rows.append(bench.run_case(f"shape {idx + 1} seed {seed}", C, ("projection", "laplacian"), args.repeats))
    print(bench.format_rows(rows))
    faster = sum(r.times["projection"] < r.times["laplacian"] for r in rows)
    print(f"\n{sum(r.passed for r in rows)}/{len(rows)} rows agree with the exact oracle; "
          f"projection faster on {faster}/{len(rows)}")


if __name__ == "__main__":
    main()
