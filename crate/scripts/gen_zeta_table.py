#!/usr/bin/env python3
"""Emit a Rust constant table of high-precision zeta values.

Reference values come from mpmath's arbitrary-precision zeta at 50
significant digits; they are frozen into the evaluation accuracy tests.

Usage:
    python3 scripts/gen_zeta_table.py > /tmp/zeta_table.rs
"""

import mpmath

mpmath.mp.dps = 50

SIGMAS = [0.55, 0.6, 0.75, 0.8, 0.9, 1.1, 1.5, 2.0, 2.5, 3.0]
HEIGHTS = [0.0, 0.5, 1.0, 3.14159, 14.134, 50.0, 100.0, 1000.0, 12345.6789, 99999.5]
# A handful of tall points exercising the extended-precision phase path.
TALL = [(0.75, 1.0e6), (0.6, 5.0e6), (0.9, 1.0e7), (2.0, 1.0e7)]


def row(sigma: float, t: float) -> str:
    z = mpmath.zeta(mpmath.mpc(sigma, t))
    return f"    ({sigma!r}, {t!r}, {mpmath.nstr(z.real, 22)}, {mpmath.nstr(z.imag, 22)}),"


print("/// (sigma, t, re, im) — zeta(sigma + i t) from mpmath at 50 digits.")
print(f"pub const ZETA_TABLE: [(f64, f64, f64, f64); {len(SIGMAS) * len(HEIGHTS)}] = [")
for s in SIGMAS:
    for t in HEIGHTS:
        print(row(s, t))
print("];")
print()
print(f"pub const ZETA_TABLE_TALL: [(f64, f64, f64, f64); {len(TALL)}] = [")
for s, t in TALL:
    print(row(s, t))
print("];")
