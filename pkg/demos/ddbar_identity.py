"""Both sides of -2 ∂∂̄ ch_1 = ch_0(A) + ch_0(C) - ch_0(B) on a 9x9 base grid."""

import numpy as np

from bottchern import bott_chern as bc

if __name__ == "__main__":
    grid = bc.base_grid()
    for name, fam in bc.eq2_families().items():
        lhs, rhs = bc.eq2_sides(fam, grid)
        centre = grid.shape[0] // 2, grid.shape[1] // 2
        print(f"{name:15s} at s=0: lhs={lhs[centre].real:+.8f} rhs={rhs[centre].real:+.8f}   "
              f"max residual {np.max(np.abs(lhs - rhs)):.2e}")
