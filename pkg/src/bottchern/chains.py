"""Integer chains of metrized cubes modulo degenerate cubes.

Terms are merged by structural comparison with a Gram/arrow tolerance rather
than by hashing, so two cubes that agree to ``tol`` collapse into one term.
"""

from . import cubes as _cubes
from .errors import DegreeError


class ChainElement:
    """Finite integer combination of cubes, reduced modulo degenerates.

    Parameters
    ----------
    terms : iterable of (MetrizedCube, int)
    tol : float
        Relative tolerance for identifying cubes and detecting degeneracies.
    drop_degenerate : bool
        Reduce modulo degenerate cubes (the default).  Intermediate
        computations may keep them.
    """

    def __init__(self, terms=(), tol=_cubes.TOL, drop_degenerate=True):
        self.tol = tol
        buckets = {}
        for cube, coeff in terms:
            coeff = int(coeff)
            if coeff == 0:
                continue
            if drop_degenerate and _cubes.is_degenerate(cube, tol):
                continue
            bucket = buckets.setdefault(cube.signature(), [])
            for entry in bucket:
                if _cubes.cubes_close(entry[0], cube, tol):
                    entry[1] += coeff
                    break
            else:
                bucket.append([cube, coeff])
        self.terms = tuple((c, k) for sig in buckets for c, k in buckets[sig] if k != 0)

    @classmethod
    def of(cls, cube, coeff=1):
        return cls([(cube, coeff)])

    @property
    def degrees(self):
        return sorted({c.n for c, _ in self.terms})

    @property
    def degree(self):
        """Common degree of the terms, ``None`` for the empty chain."""
        degs = self.degrees
        if len(degs) > 1:
            raise DegreeError(f"chain is not homogeneous: degrees {degs}")
        return degs[0] if degs else None

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other):
        return ChainElement(self.terms + other.terms, min(self.tol, other.tol))

    def __neg__(self):
        return ChainElement([(c, -k) for c, k in self.terms], self.tol, drop_degenerate=False)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return ChainElement([(c, k * m) for c, m in self.terms], self.tol, drop_degenerate=False)

    def equals(self, other):
        """Equality in the quotient by degenerate cubes."""
        return (self - other).is_zero()

    def __repr__(self):
        parts = [f"{k:+d}*[{c.n}-cube dims={c.signature()[1:]}]" for c, k in self.terms]
        return "ChainElement(" + (" ".join(parts) if parts else "0") + ")"


def boundary(c):
    """``d = sum_i sum_j (-1)^(i+j) face(., i, j)`` on a homogeneous chain of degree >= 1."""
    if isinstance(c, _cubes.MetrizedCube):
        c = ChainElement.of(c)
    deg = c.degree
    if deg == 0:
        raise DegreeError("boundary is not defined in degree 0")
    out = []
    for cube, coeff in c.terms:
        for i in range(1, cube.n + 1):
            for j in (-1, 0, 1):
                out.append((_cubes.face(cube, i, j), coeff * (-1) ** (i + j)))
    return ChainElement(out, c.tol)


def _lambda_axis(c, i):
    out = []
    for cube, coeff in c.terms:
        if cube.n < i:
            out.append((cube, coeff))
            continue
        out.append((_cubes.lambda1(cube, i), coeff))
        out.append((_cubes.lambda2(cube, i), coeff))
    return ChainElement(out, c.tol, drop_degenerate=False)


def lambda_total(c):
    """The chain map ``lambda = lambda_n o ... o lambda_1`` with ``lambda_i = lambda1_i + lambda2_i``.

    Degree-0 terms are left alone.  The result is reduced modulo degenerates
    and every surviving cube is emi.
    """
    if isinstance(c, _cubes.MetrizedCube):
        c = ChainElement.of(c)
    top = max(c.degrees, default=0)
    cur = ChainElement(c.terms, c.tol, drop_degenerate=False)
    for i in range(1, top + 1):
        cur = _lambda_axis(cur, i)
    return ChainElement(cur.terms, c.tol)
