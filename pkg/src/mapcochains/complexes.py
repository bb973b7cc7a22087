"""Graded complexes, bicomplexes, normalization, totalization, shuffles.

Conventions.  A GradedComplex is a cochain complex: its differential d^n
raises degree by one and is stored as a matrix of shape (dim C^{n+1},
dim C^n).  A Bicomplex carries a horizontal differential lowering p (the
alternating face sum of a simplicial direction) and a vertical differential
raising q (an internal cochain differential); the two commute.  Its total
complex lives on the diagonals n = q - p with differential

    D|_(p,q) = delta + (-1)^q * del

which squares to zero precisely because del and delta commute.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ValidationError
from .fields import FieldSpec


# -- homology with representatives ----------------------------------------


@dataclass
class DegreeHomology:
    dim: int
    representatives: np.ndarray  # ambient_dim x dim, columns are cycles
    boundaries: np.ndarray       # ambient_dim x b, columns span the boundaries
    labels: list


class _HomologyTable:
    """Shared representative bookkeeping for chain and cochain complexes."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.degrees: dict[int, DegreeHomology] = {}
        self._solvers: dict[int, np.ndarray] = {}

    def add_degree(self, n: int, ambient: int, labels, out_matrix, in_matrix) -> None:
        """Register degree n with outgoing differential `out` and incoming `in`."""
        f = self.field
        if ambient == 0:
            self.degrees[n] = DegreeHomology(0, f.zeros(0, 0), f.zeros(0, 0), labels)
            return
        out_matrix = out_matrix if out_matrix is not None else f.zeros(0, ambient)
        in_matrix = in_matrix if in_matrix is not None else f.zeros(ambient, 0)
        cycles = linalg.kernel_basis(out_matrix, f)
        bounds = linalg.image_basis(in_matrix, f)
        combined = f.zeros(ambient, bounds.shape[1] + cycles.shape[1])
        if bounds.shape[1]:
            combined[:, : bounds.shape[1]] = bounds
        if cycles.shape[1]:
            combined[:, bounds.shape[1]:] = cycles
        pivots = linalg.column_space_pivots(combined, f)
        rep_cols = [j - bounds.shape[1] for j in pivots if j >= bounds.shape[1]]
        reps = cycles[:, rep_cols] if rep_cols else f.zeros(ambient, 0)
        self.degrees[n] = DegreeHomology(len(rep_cols), reps, bounds, labels)

    def betti(self, n: int) -> int:
        return self.degrees[n].dim if n in self.degrees else 0

    def betti_list(self, degrees) -> list[int]:
        return [self.betti(n) for n in degrees]

    def class_coords(self, n: int, vector: np.ndarray) -> np.ndarray:
        """Coordinates of a cycle's class in the representative basis."""
        dh = self.degrees[n]
        f = self.field
        if dh.dim == 0:
            if dh.boundaries.shape[1]:
                linalg.solve(dh.boundaries, vector, f)  # raises if not a boundary
            elif any(x != 0 for x in vector):
                raise ValidationError(f"nonzero vector in zero homology at degree {n}")
            return f.zeros(0)
        m = f.zeros(dh.representatives.shape[0], dh.dim + dh.boundaries.shape[1])
        m[:, : dh.dim] = dh.representatives
        if dh.boundaries.shape[1]:
            m[:, dh.dim:] = dh.boundaries
        sol = linalg.solve(m, vector, f)
        return sol[: dh.dim]

    def induced_matrix(self, n: int, chain_map: np.ndarray) -> np.ndarray:
        """Matrix on homology at degree n induced by a chain-level map."""
        dh = self.degrees[n]
        f = self.field
        out = f.zeros(dh.dim, dh.dim)
        for k in range(dh.dim):
            image = f.matmul(chain_map, dh.representatives[:, k])
            out[:, k] = self.class_coords(n, image)
        return out


class ChainHomology(_HomologyTable):
    """Homology of a chain complex given by boundary matrices d_n: C_n -> C_{n-1}."""

    def __init__(self, dims: list[int], boundaries: dict[int, np.ndarray], field: FieldSpec, labels=None):
        super().__init__(field)
        self.dims = dims
        top = len(dims) - 1
        for n in range(top + 1):
            out = boundaries.get(n) if n >= 1 else None
            inc = boundaries.get(n + 1) if n + 1 <= top else None
            lab = labels[n] if labels else list(range(dims[n]))
            self.add_degree(n, dims[n], lab, out, inc)

    @property
    def betti_numbers(self) -> list[int]:
        return self.betti_list(range(len(self.dims)))


def homology_of_boundaries(dims, boundaries, field, labels=None) -> ChainHomology:
    return ChainHomology(dims, boundaries, field, labels)


# -- graded (cochain) complexes --------------------------------------------


class GradedComplex:
    """A degreewise-finite cochain complex with labeled bases.

    components maps a degree to its basis labels; differentials[n] is the
    matrix of d^n: C^n -> C^{n+1}.  Missing degrees are zero.
    """

    def __init__(self, field: FieldSpec, components: dict[int, list], differentials: dict[int, np.ndarray]):
        self.field = field
        self.components = {n: list(ls) for n, ls in components.items() if ls}
        self.differentials = dict(differentials)

    def dim(self, n: int) -> int:
        return len(self.components.get(n, []))

    def differential(self, n: int) -> np.ndarray:
        d = self.differentials.get(n)
        if d is not None:
            return d
        if self.dim(n) == 0 or self.dim(n + 1) == 0:
            return self.field.zeros(self.dim(n + 1), self.dim(n))
        raise ValidationError(f"differential at degree {n} not stored")

    def check(self) -> None:
        """Verify d^{n+1} d^n = 0 wherever both are stored."""
        for n in sorted(self.differentials):
            if (n + 1) in self.differentials or self.dim(n + 2) == 0:
                comp = self.field.matmul(self.differential(n + 1), self.differential(n))
                if not self.field.is_zero_matrix(comp):
                    raise ValidationError(f"d^2 != 0 between degrees {n} and {n + 2}")

    def homology(self, degrees) -> "CochainHomology":
        return CochainHomology(self, degrees)


class CochainHomology(_HomologyTable):
    def __init__(self, cx: GradedComplex, degrees):
        super().__init__(cx.field)
        self.complex = cx
        self.computed_degrees = list(degrees)
        for n in self.computed_degrees:
            self.add_degree(
                n,
                cx.dim(n),
                cx.components.get(n, []),
                cx.differential(n),
                cx.differential(n - 1),
            )

    @property
    def betti_numbers(self) -> list[int]:
        return self.betti_list(self.computed_degrees)


def complex_homology(cx: GradedComplex, degrees) -> CochainHomology:
    """Cohomology of a stored range of a cochain complex, with representatives."""
    return cx.homology(degrees)


# -- bicomplexes and totalization -------------------------------------------


class Bicomplex:
    """A commuting bicomplex: del lowers p, delta raises q, del delta = delta del."""

    def __init__(self, field: FieldSpec, components: dict[tuple[int, int], list],
                 horizontal: dict[tuple[int, int], np.ndarray],
                 vertical: dict[tuple[int, int], np.ndarray]):
        self.field = field
        self.components = {pq: list(ls) for pq, ls in components.items() if ls}
        self.horizontal = dict(horizontal)
        self.vertical = dict(vertical)

    def dim(self, p: int, q: int) -> int:
        return len(self.components.get((p, q), []))

    def h(self, p: int, q: int) -> np.ndarray:
        m = self.horizontal.get((p, q))
        if m is not None:
            return m
        if self.dim(p, q) == 0 or self.dim(p - 1, q) == 0:
            return self.field.zeros(self.dim(p - 1, q), self.dim(p, q))
        raise ValidationError(f"horizontal differential missing at {(p, q)}")

    def v(self, p: int, q: int) -> np.ndarray:
        m = self.vertical.get((p, q))
        if m is not None:
            return m
        if self.dim(p, q) == 0 or self.dim(p, q + 1) == 0:
            return self.field.zeros(self.dim(p, q + 1), self.dim(p, q))
        raise ValidationError(f"vertical differential missing at {(p, q)}")

    def check(self) -> None:
        f = self.field
        for (p, q) in self.components:
            if self.dim(p - 2, q) or self.dim(p - 1, q):
                if not f.is_zero_matrix(f.matmul(self.h(p - 1, q), self.h(p, q))):
                    raise ValidationError(f"horizontal d^2 != 0 at {(p, q)}")
            if self.dim(p, q + 1) or self.dim(p, q + 2):
                if not f.is_zero_matrix(f.matmul(self.v(p, q + 1), self.v(p, q))):
                    raise ValidationError(f"vertical d^2 != 0 at {(p, q)}")
            a = f.matmul(self.v(p - 1, q), self.h(p, q))
            b = f.matmul(self.h(p, q + 1), self.v(p, q))
            if a.shape == b.shape and not f.is_zero_matrix(f.reduce(a - b)):
                raise ValidationError(f"del delta != delta del at {(p, q)}")


def total_complex(bic: Bicomplex, N: int, p_cutoff: int | None = None) -> GradedComplex:
    """Direct-sum totalization along n = q - p, for degrees n <= N + 1.

    The summand (p, q) contributes to degree q - p; on it the differential is
    delta + (-1)^q del.  Summands are ordered by increasing p.
    """
    f = bic.field
    spots: dict[int, list[tuple[int, int]]] = {}
    for (p, q) in bic.components:
        if p_cutoff is not None and p > p_cutoff:
            continue
        n = q - p
        if n <= N + 1:
            spots.setdefault(n, []).append((p, q))
    for n in spots:
        spots[n].sort()
    components = {}
    offsets: dict[int, dict[tuple[int, int], int]] = {}
    for n, pqs in spots.items():
        labels = []
        offsets[n] = {}
        for (p, q) in pqs:
            offsets[n][(p, q)] = len(labels)
            labels.extend(((p, q), lab) for lab in bic.components[(p, q)])
        components[n] = labels
    differentials = {}
    for n in sorted(spots):
        if n > N:
            continue
        tgt = components.get(n + 1, [])
        mat = f.zeros(len(tgt), len(components[n]))
        for (p, q) in spots[n]:
            src_off = offsets[n][(p, q)]
            w = bic.dim(p, q)
            if (p, q + 1) in offsets.get(n + 1, {}):
                dst = offsets[n + 1][(p, q + 1)]
                block = bic.v(p, q)
                mat[dst:dst + block.shape[0], src_off:src_off + w] = block
            elif bic.dim(p, q + 1):
                raise ValidationError(f"stored range misses {(p, q + 1)}")
            if (p - 1, q) in offsets.get(n + 1, {}):
                dst = offsets[n + 1][(p - 1, q)]
                block = bic.h(p, q)
                sign = f.one if q % 2 == 0 else f.neg(f.one)
                if sign != f.one:
                    block = f.reduce(-block)
                mat[dst:dst + block.shape[0], src_off:src_off + w] = block
            elif bic.dim(p - 1, q) and (p_cutoff is None or p - 1 <= p_cutoff):
                raise ValidationError(f"stored range misses {(p - 1, q)}")
        differentials[n] = mat
    return GradedComplex(f, components, differentials)


# -- normalization -----------------------------------------------------------


@dataclass
class QuotientData:
    """A presented quotient: kept ambient coordinates, projection, section."""

    keep: list[int]
    projection: np.ndarray
    section: np.ndarray


def normalize_quotient(degeneracy_images: list[np.ndarray], dim_p: int, field: FieldSpec) -> QuotientData:
    """Quotient of a level by the span of its degeneracy images.

    Args:
        degeneracy_images: matrices s_0 ... s_{p-1} into the level, each of
            shape (dim_p, dim of the previous level).
        dim_p: dimension of the level being normalized.
        field: coefficient field.

    Returns:
        QuotientData with projection @ section = identity and
        projection @ s_j = 0 for every degeneracy image.
    """
    cols = sum(m.shape[1] for m in degeneracy_images)
    span = field.zeros(dim_p, cols)
    at = 0
    for m in degeneracy_images:
        if m.shape[0] != dim_p:
            raise ValidationError("degeneracy image has wrong ambient dimension")
        span[:, at:at + m.shape[1]] = m
        at += m.shape[1]
    keep, proj, sec = linalg.quotient_by_span(span, field)
    return QuotientData(keep, proj, sec)


# -- shuffles ----------------------------------------------------------------


def shuffles(a: int, b: int):
    """All (a, b)-shuffles of {0, ..., a+b-1}.

    Yields (mu, nu, sign): mu (size a) is the degeneracy word applied to the
    level-b factor, nu (size b) the word applied to the level-a factor, and
    sign the shuffle signature (-1)^{sum(mu_i - i)}.
    """
    universe = range(a + b)
    for mu in itertools.combinations(universe, a):
        nu = tuple(sorted(set(universe) - set(mu)))
        eps = sum(m - i for i, m in enumerate(mu))
        yield mu, nu, (-1) ** (eps % 2)


class SimplicialVectorData:
    """A simplicial graded vector space presented by explicit operator matrices.

    levels[p] is the basis label list of level p; face(p, i) maps level p to
    p - 1 and degen(p, j) maps level p to p + 1.
    """

    def __init__(self, field: FieldSpec, levels: dict[int, list], faces: dict, degens: dict):
        self.field = field
        self.levels = levels
        self._faces = faces
        self._degens = degens

    def dim(self, p: int) -> int:
        return len(self.levels.get(p, []))

    def face(self, p: int, i: int) -> np.ndarray:
        return self._faces[(p, i)]

    def degen(self, p: int, j: int) -> np.ndarray:
        return self._degens[(p, j)]

    def degen_word(self, p: int, word, vec: np.ndarray) -> np.ndarray:
        """Apply s_{word_k} ... s_{word_1} (ascending word) to a level-p vector."""
        out = vec
        lev = p
        for j in word:
            out = self.field.matmul(self.degen(lev, j), out)
            lev += 1
        return out

    def boundary(self, p: int) -> np.ndarray:
        f = self.field
        out = f.zeros(self.dim(p - 1), self.dim(p))
        sign = f.one
        for i in range(p + 1):
            m = self.face(p, i)
            if sign == f.one:
                out = f.reduce(out + m)
            else:
                out = f.reduce(out - m)
            sign = f.neg(sign)
        return out


def shuffle_map(A: SimplicialVectorData, B: SimplicialVectorData, p: int, q: int,
                avec: np.ndarray, bvec: np.ndarray):
    """The Eilenberg-Zilber shuffle of a level-p element of A with a level-q
    element of B, landing in the levelwise tensor (A x B)_{p+q}.

    Returns (labels, vector) over the pair basis of level p + q.
    """
    f = A.field
    la = A.levels.get(p + q, [])
    lb = B.levels.get(p + q, [])
    labels = [(x, y) for x in la for y in lb]
    out = f.zeros(len(labels))
    for mu, nu, sign in shuffles(p, q):
        sa = A.degen_word(p, nu, avec)
        sb = B.degen_word(q, mu, bvec)
        s = f.of_int(sign)
        for i, xa in enumerate(sa):
            if xa == 0:
                continue
            for j, xb in enumerate(sb):
                if xb == 0:
                    continue
                k = i * len(lb) + j
                out[k] = f.add(out[k], f.mul(s, f.mul(xa, xb)))
    return labels, out


# -- integral complexes -------------------------------------------------------


class IntegralComplex:
    """A chain complex with integer matrices, for Smith-form and torsion work."""

    def __init__(self, dims: list[int], boundaries: dict[int, np.ndarray]):
        self.dims = dims
        self.boundaries = boundaries

    @staticmethod
    def of_simplicial_set(K) -> "IntegralComplex":
        dims = [len(K.cells_of_dim(n)) for n in range(K.dim + 1)]
        return IntegralComplex(dims, K.integral_boundary_matrices())

    def check(self) -> None:
        for n in range(2, len(self.dims)):
            m = self.boundaries.get(n - 1)
            mm = self.boundaries.get(n)
            if m is not None and mm is not None and m.size and mm.size:
                comp = m @ mm
                if any(int(x) != 0 for x in comp.flat):
                    raise ValidationError(f"integral d^2 != 0 at degree {n}")

    def smith(self, n: int) -> list[int]:
        m = self.boundaries.get(n)
        if m is None or m.size == 0:
            return []
        return linalg.smith_normal_form(m)

    def betti_and_torsion(self, n: int) -> tuple[int, list[int]]:
        """Integral homology at degree n: free rank and torsion coefficients."""
        rank_out = len([d for d in self.smith(n) if d != 0]) if n >= 1 else 0
        diag_in = self.smith(n + 1) if n + 1 < len(self.dims) else []
        rank_in = len([d for d in diag_in if d != 0])
        free = self.dims[n] - rank_out - rank_in
        torsion = [d for d in diag_in if d > 1]
        return free, torsion

    def field_betti(self, n: int, field: FieldSpec) -> int:
        """Betti number over a field, derived from the Smith data."""
        free, torsion = self.betti_and_torsion(n)
        if field.kind == "Q":
            return free
        p = field.p
        here = sum(1 for t in torsion if t % p == 0)
        below = 0
        if n >= 1:
            below = sum(1 for t in (self.smith(n) or []) if t > 1 and t % p == 0)
        return free + here + below
