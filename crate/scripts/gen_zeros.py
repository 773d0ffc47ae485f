#!/usr/bin/env python3
"""Generate tables of Riemann zeta zero ordinates with mpmath.

Writes one decimal ordinate per line, ascending, 12 decimal places
(the format expected by the `--zeros` table loader).

Usage:
    python3 scripts/gen_zeros.py 100           > data/zeros_first100.txt
    python3 scripts/gen_zeros.py --upto 3000   > data/zeros_upto3000.txt
"""

import sys
from multiprocessing import Pool

import mpmath

mpmath.mp.dps = 25


def ordinate(n: int) -> str:
    return mpmath.nstr(mpmath.zetazero(n).imag, 17, strip_zeros=False)


def main() -> None:
    args = sys.argv[1:]
    if args and args[0] == "--upto":
        limit = float(args[1])
        # Riemann-von Mangoldt: N(T) ~ (T/2pi) log(T/2pi e) + 7/8; overshoot a bit.
        t = mpmath.mpf(limit)
        guess = int(t / (2 * mpmath.pi) * mpmath.log(t / (2 * mpmath.pi * mpmath.e)) + 30)
        with Pool() as pool:
            vals = pool.map(ordinate, range(1, guess + 1))
        for v in vals:
            if float(v) > limit:
                break
            print(f"{float(v):.12f}")
    else:
        count = int(args[0]) if args else 100
        with Pool() as pool:
            vals = pool.map(ordinate, range(1, count + 1))
        for v in vals:
            print(f"{float(v):.12f}")


if __name__ == "__main__":
    main()
