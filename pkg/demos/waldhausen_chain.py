"""Cub of a random 3-simplex of the S-construction commutes with the differentials."""

from bottchern import waldhausen as wd

if __name__ == "__main__":
    E = wd.random_s_simplex(3, 2, seed=1)
    C = wd.cub(E)
    print("vertex dimensions of Cub E:", {a: d for a, d in C.dims.items() if d})
    print("d Cub E - Cub d E vanishes modulo degenerates:", wd.cub_chain_map_residual(E).is_zero())
