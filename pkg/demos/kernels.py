"""The fiber-integration kernels I'(W_n) for n = 1..4 and their pipeline signs."""

from bottchern import fiber_forms as ff

if __name__ == "__main__":
    for n in range(1, 5):
        ip = ff.i_prime(n)
        print(f"n={n}  sigma={ip.sigma:+d}  terms={len(ip.form.terms)}")
        if n <= 2:
            print(f"    {ip.form}")
