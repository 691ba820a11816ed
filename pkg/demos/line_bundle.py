"""Bott-Chern number of 0 -> (C, b) -> (C, a) -> 0 against -log(b/a)/2."""

import math

from bottchern import bott_chern as bc

if __name__ == "__main__":
    for ratio in (math.e ** 2, 10.0, 0.25, 3.0):
        res = bc.bott_chern(bc.line_cube(ratio, 1.0))
        expected = -0.5 * math.log(ratio)
        print(f"b/a = {ratio:8.4f}   ch_1 = {res.value.real:+.10f}   "
              f"-log(b/a)/2 = {expected:+.10f}   error = {abs(res.value - expected):.1e}")
