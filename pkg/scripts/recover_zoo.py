#!/usr/bin/env python3
"""Recover every zoo group from its convolution algebra and print a table.

Usage: python scripts/recover_zoo.py [--p 1.2 1.5 3 4]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from lpconv import (ConvolutionContext, convolver_algebra, is_isomorphic,
                    recover_group, zoo)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--p", type=float, nargs="+", default=[1.2, 1.5, 3.0, 4.0])
    args = parser.parse_args()

    print(f"{'group':8} {'order':>5} " + " ".join(f"p={p:<5}" for p in args.p))
    t0 = time.perf_counter()
    all_ok = True
    for name, g in zoo():
        cells = []
        for p in args.p:
            basis = convolver_algebra(ConvolutionContext(g, p))
            rec = recover_group(basis, p)
            ok = is_isomorphic(rec.group, g) is not None
            all_ok &= ok
            cells.append("ok   " if ok else "FAIL ")
        print(f"{name:8} {g.order:>5} " + "  ".join(cells))
    print(f"total {time.perf_counter() - t0:.2f}s, "
          f"{'all recovered' if all_ok else 'RECOVERY FAILURES'}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
