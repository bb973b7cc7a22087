"""Normalized simplicial cochains: coboundaries, cup products, Bocksteins.

Cochains on a finite simplicial set are supported on nondegenerate cells
(duals of normalized chains); evaluating a cochain on a degenerate simplex
gives zero.  The cup product is the front-face/back-face formula.
"""

from __future__ import annotations

import numpy as np

from . import complexes, linalg
from .errors import ValidationError
from .fields import FieldSpec
from .simplicial import FiniteSimplicialSet, SimplexRef


def coboundary_matrix(K: FiniteSimplicialSet, q: int, field: FieldSpec) -> np.ndarray:
    """delta: C^q(K) -> C^{q+1}(K), the transpose of the boundary."""
    lower = {c: k for k, c in enumerate(K.cells_of_dim(q))}
    upper = K.cells_of_dim(q + 1)
    mat = field.zeros(len(upper), len(lower))
    for r, c in enumerate(upper):
        sgn = field.one
        for ref in K.faces[c]:
            if not ref.degens:
                k = lower[ref.cell]
                mat[r, k] = field.add(mat[r, k], sgn)
            sgn = field.neg(sgn)
    return mat


def cochain_complex(K: FiniteSimplicialSet, field: FieldSpec, top: int | None = None) -> complexes.GradedComplex:
    """The normalized cochain complex of K as a GradedComplex."""
    top = K.dim if top is None else top
    components = {q: list(K.cells_of_dim(q)) for q in range(top + 1)}
    differentials = {q: coboundary_matrix(K, q, field) for q in range(top)}
    return complexes.GradedComplex(field, components, differentials)


def front_face(K: FiniteSimplicialSet, ref: SimplexRef, r: int) -> SimplexRef:
    """Restriction of a simplex to its first r + 1 vertices."""
    n = K.ref_dim(ref)
    out = ref
    for b in range(n, r, -1):
        out = K.face_of_ref(out, b)
    return out


def back_face(K: FiniteSimplicialSet, ref: SimplexRef, s: int) -> SimplexRef:
    """Restriction of a simplex to its last s + 1 vertices."""
    n = K.ref_dim(ref)
    out = ref
    for _ in range(n - s):
        out = K.face_of_ref(out, 0)
    return out


def cup_product(K: FiniteSimplicialSet, q: int, r: int, x: np.ndarray, y: np.ndarray,
                field: FieldSpec) -> np.ndarray:
    """Cup product of a q-cochain and an r-cochain of K.

    Both inputs are coordinate vectors over the nondegenerate cell bases; the
    value on a (q+r)-cell is x(front) * y(back), with degenerate front or
    back faces contributing zero.
    """
    qpos = {c: k for k, c in enumerate(K.cells_of_dim(q))}
    rpos = {c: k for k, c in enumerate(K.cells_of_dim(r))}
    out = field.zeros(len(K.cells_of_dim(q + r)))
    for k, c in enumerate(K.cells_of_dim(q + r)):
        top = SimplexRef(c)
        fr = front_face(K, top, q)
        bk = back_face(K, top, r)
        if fr.degens or bk.degens:
            continue
        a = x[qpos[fr.cell]]
        b = y[rpos[bk.cell]]
        if a != 0 and b != 0:
            out[k] = field.add(out[k], field.mul(a, b))
    return out


def cup_unit(K: FiniteSimplicialSet, field: FieldSpec) -> np.ndarray:
    """The 0-cochain taking value 1 on every vertex (the cup unit)."""
    out = field.zeros(len(K.cells_of_dim(0)))
    for k in range(len(out)):
        out[k] = field.one
    return out


# -- Bockstein ------------------------------------------------------------


class BocksteinResult:
    """The mod-p Bockstein of a finite simplicial set.

    matrices[n] carries the connecting map H_n(K; F_p) -> H_{n-1}(K; F_p) in
    the representative bases of `homology`.
    """

    def __init__(self, homology, matrices: dict[int, np.ndarray]):
        self.homology = homology
        self.matrices = matrices


def bockstein(K: FiniteSimplicialSet, p: int) -> BocksteinResult:
    """Connecting map of 0 -> Z/p -> Z/p^2 -> Z/p -> 0 on homology.

    Each mod-p cycle representative is lifted to an integer chain, its
    integral boundary divided by p, and the result reduced mod p and
    expressed in the degree-(n-1) representative basis.
    """
    field = FieldSpec.prime(p)
    hom = K.homology(field)
    integral = K.integral_boundary_matrices()
    matrices: dict[int, np.ndarray] = {}
    for n in range(1, K.dim + 1):
        dh = hom.degrees[n]
        lower_dim = hom.degrees[n - 1].dim
        mat = field.zeros(lower_dim, dh.dim)
        bnd = integral.get(n)
        for k in range(dh.dim):
            lift = np.array([int(x) % p for x in dh.representatives[:, k]], dtype=object)
            w = bnd @ lift if bnd is not None and bnd.size else np.zeros(len(K.cells_of_dim(n - 1)), dtype=object)
            if any(int(v) % p != 0 for v in w.flat):
                raise ValidationError("representative is not a mod-p cycle")
            shifted = field.vector([int(v) // p for v in w.flat])
            mat[:, k] = hom.class_coords(n - 1, shifted)
        matrices[n] = mat
    return BocksteinResult(hom, matrices)
