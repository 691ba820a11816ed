"""Chern connection curvature and Chern character forms of Gram families.

A Gram family is a callable ``H(z)`` taking complex points of shape
``(..., m)`` to hermitian matrices of shape ``(..., r, r)`` in a holomorphic
frame.  Derivatives are taken by central differences in the real and
imaginary parts of every coordinate and assembled into Wirtinger
derivatives.  The curvature uses the ordering ``dz̄_l ∧ dz_k``::

    K = Σ_{k,l} ∂_{z̄_l}(H^{-1} ∂_{z_k} H) dz̄_l ∧ dz_k

so that for a line bundle ``-K = ∂∂̄ log h``; with this convention the
tautological weight ``1/(1 + |t|^2)`` on ``P^1`` has degree ``+1``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularityError
from .pointforms import MatrixForm

DEFAULT_STEP = 1e-4


@dataclass
class Jet:
    """Value, first Wirtinger derivatives and mixed second derivatives.

    ``dz[k] = ∂_{z_k} H``, ``dzbar[k] = ∂_{z̄_k} H`` and
    ``mixed[l, k] = ∂_{z̄_l} ∂_{z_k} H``.
    """

    value: np.ndarray
    dz: list
    dzbar: list
    mixed: dict


def _raw_jet(H, z, h):
    """Jet from one step size ``h`` (array broadcastable to ``z``)."""
    m = z.shape[-1]
    shifts = [np.zeros(m, dtype=complex)]
    index = {}

    def add(vec):
        key = tuple(vec)
        if key not in index:
            index[key] = len(shifts)
            shifts.append(np.array(vec, dtype=complex))
        return index[key]

    unit = np.eye(m, dtype=complex)
    for k in range(m):
        for d in (1, 1j):
            add(unit[k] * d)
            add(-unit[k] * d)
    pairs = [(l, k) for l in range(m) for k in range(l + 1, m)]
    for l, k in pairs:
        for dl in (1, 1j):
            for dk in (1, 1j):
                for sl in (1, -1):
                    for sk in (1, -1):
                        add(sl * dl * unit[l] + sk * dk * unit[k])
    S = np.stack(shifts)  # (E, m)
    pts = z[None, ...] + S.reshape((len(shifts),) + (1,) * (z.ndim - 1) + (m,)) * h[None, ...]
    vals = H(pts)

    def at(vec):
        return vals[index[tuple(np.asarray(vec, dtype=complex))]]

    def step(k):
        return h[..., k][..., None, None]

    d1 = {}
    lap = []
    for k in range(m):
        for d, name in ((1, "x"), (1j, "y")):
            plus, minus = at(unit[k] * d), at(-unit[k] * d)
            d1[k, name] = (plus - minus) / (2 * step(k))
        xx = (at(unit[k]) - 2 * vals[0] + at(-unit[k])) / step(k) ** 2
        yy = (at(unit[k] * 1j) - 2 * vals[0] + at(-unit[k] * 1j)) / step(k) ** 2
        lap.append(xx + yy)
    dz = [0.5 * (d1[k, "x"] - 1j * d1[k, "y"]) for k in range(m)]
    dzbar = [0.5 * (d1[k, "x"] + 1j * d1[k, "y"]) for k in range(m)]
    mixed = {}
    for k in range(m):
        mixed[k, k] = 0.25 * lap[k]
    for l, k in pairs:
        second = {}
        for dl, nl in ((1, "x"), (1j, "y")):
            for dk, nk in ((1, "x"), (1j, "y")):
                pp = at(dl * unit[l] + dk * unit[k])
                pm = at(dl * unit[l] - dk * unit[k])
                mp = at(-dl * unit[l] + dk * unit[k])
                mm = at(-dl * unit[l] - dk * unit[k])
                second[nl + nk] = (pp - pm - mp + mm) / (4 * step(l) * step(k))
        # ∂_{z̄_l} ∂_{z_k} = ¼ (∂x_l + i∂y_l)(∂x_k - i∂y_k)
        mixed[l, k] = 0.25 * (second["xx"] - 1j * second["xy"] + 1j * second["yx"] + second["yy"])
        # ∂_{z̄_k} ∂_{z_l}
        mixed[k, l] = 0.25 * (second["xx"] + 1j * second["xy"] - 1j * second["yx"] + second["yy"])
    return Jet(vals[0], dz, dzbar, mixed)


def gram_jet(H, z, step=None, richardson=False):
    """Finite-difference jet of ``H`` at points ``z`` (shape ``(..., m)``).

    The step for coordinate ``k`` is ``step * (1 + |z_k|)`` (default
    ``1e-4``).  With ``richardson=True`` two step sizes are combined to
    cancel the leading ``O(step^2)`` error.
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        z = z[None]
    base = DEFAULT_STEP if step is None else float(step)
    h = base * (1.0 + np.abs(z))
    if not richardson:
        return _raw_jet(H, z, h)
    a = _raw_jet(H, z, h)
    b = _raw_jet(H, z, h / 2)

    def comb(x, y):
        return (4 * y - x) / 3

    return Jet(a.value, [comb(x, y) for x, y in zip(a.dz, b.dz)],
               [comb(x, y) for x, y in zip(a.dzbar, b.dzbar)],
               {key: comb(a.mixed[key], b.mixed[key]) for key in a.mixed})


def curvature_from_jet(jet):
    """Curvature :class:`MatrixForm` from a jet."""
    Hv = jet.value
    r = Hv.shape[-1]
    shape = Hv.shape[:-2]
    try:
        Hinv = np.linalg.inv(Hv)
    except np.linalg.LinAlgError:
        raise SingularityError("Gram matrix is singular") from None
    m = len(jet.dz)
    A = [Hinv @ d for d in jet.dz]  # H^{-1} ∂_k H
    terms = {}
    for l in range(m):
        Bl = Hinv @ jet.dzbar[l]
        for k in range(m):
            coeff = Hinv @ jet.mixed[l, k] - Bl @ A[k]
            # dz̄_l ∧ dz_k in sorted form
            if k <= l:
                word, sign = (2 * k, 2 * l + 1), -1
            else:
                word, sign = (2 * l + 1, 2 * k), 1
            terms[word] = terms.get(word, 0) + sign * coeff
    return MatrixForm(terms, r, shape)


def curvature(H, z, step=None, richardson=False):
    """Curvature of the Chern connection of ``H`` at ``z``."""
    return curvature_from_jet(gram_jet(H, z, step, richardson))


def ch0_from_curvature(K, max_degree=None):
    """``tr exp(-K) = Σ_k tr((-K)^k) / k!`` up to the nilpotency bound."""
    m = max((max(w) // 2 + 1 for w in K.terms if w), default=0)
    top = m if max_degree is None else min(m, max_degree)
    minus = -K
    power = MatrixForm.identity(K.rank, K.shape)
    out = power.trace()
    for k in range(1, top + 1):
        power = power.matmul(minus)
        out = out + power.trace().scale(1.0 / math.factorial(k))
    return out


def ch0_point(H, z, step=None, richardson=False):
    """Chern character form ``tr exp(-K)`` of the family ``H`` at ``z``."""
    return ch0_from_curvature(curvature(H, z, step, richardson))
