"""Numeric exterior algebra at (batches of) points.

Coordinate ``c`` (0-based) contributes the generators ``dz_c`` with id ``2c``
and ``dz̄_c`` with id ``2c + 1``.  A word is a strictly increasing tuple of
ids.  Coefficients are complex arrays sharing a common batch shape, so one
form can represent values at many quadrature nodes at once.
"""

import numpy as np


def sort_word(word):
    """Sort a word of odd generators; returns ``(sign, sorted_word)`` or ``(0, None)``."""
    w = list(word)
    if len(set(w)) != len(w):
        return 0, None
    sign = 1
    for i in range(1, len(w)):  # insertion sort counting transpositions
        j = i
        while j > 0 and w[j - 1] > w[j]:
            w[j - 1], w[j] = w[j], w[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(w)


def merge_words(a, b):
    """Sign and word of ``a ∧ b`` for sorted words, ``(0, None)`` if they overlap."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1) ** inversions, tuple(sorted(a + b))


def generator_name(g):
    c, bar = divmod(g, 2)
    return f"d{'zbar' if bar else 'z'}{c}"


class PointForm:
    """Element of the exterior algebra with scalar (batched) coefficients."""

    def __init__(self, terms=None, shape=()):
        self.shape = tuple(shape)
        self.terms = {}
        for w, v in (terms or {}).items():
            v = np.asarray(v, dtype=complex)
            if v.shape != self.shape:
                v = np.broadcast_to(v, self.shape).copy()
            self.terms[tuple(w)] = v

    @classmethod
    def scalar(cls, value):
        v = np.asarray(value, dtype=complex)
        return cls({(): v}, v.shape)

    @classmethod
    def generator(cls, g, shape=()):
        return cls({(g,): np.ones(shape, dtype=complex)}, shape)

    def copy(self):
        return PointForm({w: v.copy() for w, v in self.terms.items()}, self.shape)

    def __add__(self, other):
        if not isinstance(other, PointForm):
            other = PointForm.scalar(np.broadcast_to(np.asarray(other, dtype=complex), self.shape))
        out = {w: v.copy() for w, v in self.terms.items()}
        for w, v in other.terms.items():
            out[w] = out[w] + v if w in out else v.copy()
        return PointForm(out, np.broadcast_shapes(self.shape, other.shape))

    __radd__ = __add__

    def __neg__(self):
        return PointForm({w: -v for w, v in self.terms.items()}, self.shape)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = np.asarray(c, dtype=complex)
        shape = np.broadcast_shapes(self.shape, c.shape)
        return PointForm({w: v * c for w, v in self.terms.items()}, shape)

    def __mul__(self, c):
        if isinstance(c, PointForm):
            return self.wedge(c)
        return self.scale(c)

    __rmul__ = scale

    def wedge(self, other):
        shape = np.broadcast_shapes(self.shape, other.shape)
        out = {}
        for wa, va in self.terms.items():
            for wb, vb in other.terms.items():
                sign, w = merge_words(wa, wb)
                if sign == 0:
                    continue
                term = sign * va * vb
                out[w] = out[w] + term if w in out else term
        return PointForm(out, shape)

    def coefficient(self, word):
        sign, w = sort_word(word)
        if sign == 0 or w not in self.terms:
            return np.zeros(self.shape, dtype=complex)
        return sign * self.terms[w]

    def degree_part(self, k):
        return PointForm({w: v for w, v in self.terms.items() if len(w) == k}, self.shape)

    def conj(self):
        """Complex conjugate: coefficients conjugated, ``dz <-> dz̄`` with re-sorting."""
        out = {}
        for w, v in self.terms.items():
            sign, s = sort_word([g ^ 1 for g in w])
            out[s] = sign * np.conj(v)
        return PointForm(out, self.shape)

    def max_abs(self):
        return max((float(np.max(np.abs(v))) if v.size else 0.0 for v in self.terms.values()), default=0.0)

    def __repr__(self):
        if self.shape:
            return f"PointForm({len(self.terms)} words, batch shape {self.shape})"
        parts = [f"({complex(v):.6g})" + ("*" + "^".join(generator_name(g) for g in w) if w else "")
                 for w, v in sorted(self.terms.items())]
        return "PointForm(" + (" + ".join(parts) if parts else "0") + ")"


class MatrixForm:
    """Matrix-valued form: words map to arrays of shape ``batch + (r, r)``."""

    def __init__(self, terms, rank, shape=()):
        self.rank = rank
        self.shape = tuple(shape)
        self.terms = {tuple(w): np.asarray(v, dtype=complex) for w, v in terms.items()}

    @classmethod
    def identity(cls, rank, shape=()):
        eye = np.broadcast_to(np.eye(rank, dtype=complex), tuple(shape) + (rank, rank)).copy()
        return cls({(): eye}, rank, shape)

    def __add__(self, other):
        out = {w: v.copy() for w, v in self.terms.items()}
        for w, v in other.terms.items():
            out[w] = out[w] + v if w in out else v.copy()
        return MatrixForm(out, self.rank, self.shape)

    def scale(self, c):
        c = np.asarray(c)
        return MatrixForm({w: v * c[..., None, None] if c.ndim else v * c
                           for w, v in self.terms.items()}, self.rank, self.shape)

    def __neg__(self):
        return self.scale(-1.0)

    def matmul(self, other):
        out = {}
        for wa, va in self.terms.items():
            for wb, vb in other.terms.items():
                sign, w = merge_words(wa, wb)
                if sign == 0:
                    continue
                term = sign * (va @ vb)
                out[w] = out[w] + term if w in out else term
        return MatrixForm(out, self.rank, self.shape)

    def trace(self):
        return PointForm({w: np.trace(v, axis1=-2, axis2=-1) for w, v in self.terms.items()}, self.shape)

    def entry(self, i, j):
        return PointForm({w: v[..., i, j] for w, v in self.terms.items()}, self.shape)

    def conj_transpose(self):
        out = {}
        for w, v in self.terms.items():
            sign, s = sort_word([g ^ 1 for g in w])
            out[s] = sign * np.conj(np.swapaxes(v, -1, -2))
        return MatrixForm(out, self.rank, self.shape)

    def max_abs(self):
        return max((float(np.max(np.abs(v))) if v.size else 0.0 for v in self.terms.values()), default=0.0)
