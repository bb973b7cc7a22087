"""Finite simplicial sets with normal-form simplex arithmetic.

Every simplex is stored as a nondegenerate cell together with a strictly
decreasing word of degeneracy indices (the unique normal form).  A simplex
``s_{w1} s_{w2} ... s_{wk} c`` with ``w1 > w2 > ... > wk`` is represented by
``SimplexRef(cell=c, degens=(w1, ..., wk))``.  All operator actions reduce to
this normal form via the simplicial identities, which makes equality of
simplices a syntactic check and keeps the level sets K_p minimal.

The module also hosts simplicial maps, group actions, the standard
constructions (simplices, minimal spheres, polygons, wedges, products,
quotients, mapping cones, Moore spaces, smash products) and field homology.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import complexes
from .errors import ResourceLimitError, ValidationError
from .fields import FieldSpec


@dataclass(frozen=True)
class SimplexRef:
    """A simplex in normal form: a nondegenerate cell with a degeneracy word.

    The word is strictly decreasing; the represented simplex has dimension
    dim(cell) + len(degens).
    """

    cell: str
    degens: tuple[int, ...] = ()

    def __str__(self):
        if not self.degens:
            return self.cell
        return "s[" + ",".join(map(str, self.degens)) + "]" + self.cell


def degenerate_ref(ref: SimplexRef, j: int) -> SimplexRef:
    """Apply the degeneracy operator s_j and renormalize the word.

    Pushing s_j inward through the stored word shifts every index >= j up by
    one and then inserts j, which keeps the word strictly decreasing.
    """
    new = [w + 1 if w >= j else w for w in ref.degens]
    new.append(j)
    new.sort(reverse=True)
    return SimplexRef(ref.cell, tuple(new))


class FiniteSimplicialSet:
    """A simplicial set with finitely many nondegenerate cells.

    Attributes:
        name: identifier for reports.
        cells: per dimension, the ordered list of nondegenerate cell ids.
        faces: for each cell of dimension n >= 1, the list [d_0, ..., d_n]
            of SimplexRef face values.
        pointed: whether a basepoint is distinguished.
        basepoint: the basepoint 0-cell id when pointed.
    """

    def __init__(self, name, cells, faces, pointed=False, basepoint=None, meta=None):
        self.name = name
        self.cells = {d: list(cs) for d, cs in cells.items() if cs}
        self.faces = dict(faces)
        self.pointed = pointed
        self.basepoint = basepoint
        self.meta = meta or {}
        self.cell_dim = {}
        for d, cs in self.cells.items():
            for c in cs:
                if c in self.cell_dim:
                    raise ValidationError(f"duplicate cell id {c!r}")
                self.cell_dim[c] = d
        self._level_cache: dict[int, list[SimplexRef]] = {}
        self._level_pos: dict[int, dict[SimplexRef, int]] = {}

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self.cells) if self.cells else -1

    def cells_of_dim(self, d: int) -> list[str]:
        return self.cells.get(d, [])

    def all_cells(self):
        for d in sorted(self.cells):
            yield from self.cells[d]

    def n_cells(self) -> dict[int, int]:
        return {d: len(cs) for d, cs in sorted(self.cells.items())}

    def ref_dim(self, ref: SimplexRef) -> int:
        return self.cell_dim[ref.cell] + len(ref.degens)

    def validate(self) -> None:
        """Check all structural invariants; raise ValidationError on failure."""
        for d, cs in self.cells.items():
            for c in cs:
                if d == 0:
                    if self.faces.get(c):
                        raise ValidationError(f"0-cell {c!r} has faces")
                    continue
                fs = self.faces.get(c)
                if fs is None or len(fs) != d + 1:
                    raise ValidationError(f"cell {c!r} needs {d + 1} faces")
                for i, ref in enumerate(fs):
                    if ref.cell not in self.cell_dim:
                        raise ValidationError(f"face {i} of {c!r} targets unknown cell")
                    if self.ref_dim(ref) != d - 1:
                        raise ValidationError(f"face {i} of {c!r} has wrong dimension")
                    if list(ref.degens) != sorted(ref.degens, reverse=True) or len(set(ref.degens)) != len(ref.degens):
                        raise ValidationError(f"face {i} of {c!r} is not in normal form")
        # simplicial identities d_i d_j = d_{j-1} d_i for i < j, on every cell
        for d, cs in self.cells.items():
            if d < 2:
                continue
            for c in cs:
                top = SimplexRef(c)
                for j in range(1, d + 1):
                    for i in range(j):
                        left = self.face_of_ref(self.face_of_ref(top, j), i)
                        right = self.face_of_ref(self.face_of_ref(top, i), j - 1)
                        if left != right:
                            raise ValidationError(
                                f"simplicial identity fails on {c!r}: d_{i} d_{j} != d_{j - 1} d_{i}"
                            )
        if self.pointed:
            if self.basepoint is None or self.cell_dim.get(self.basepoint) != 0:
                raise ValidationError("pointed complex needs a 0-cell basepoint")

    # -- simplex arithmetic --------------------------------------------------

    def face_of_ref(self, ref: SimplexRef, i: int) -> SimplexRef:
        """Compute d_i of a simplex in normal form.

        The face operator is pushed through the degeneracy word with the
        identities d_i s_j = s_{j-1} d_i (i < j), d_i s_j = id (i = j, j+1)
        and d_i s_j = s_j d_{i-1} (i > j + 1); if it survives to the cell,
        the stored face table supplies the answer.
        """
        n = self.ref_dim(ref)
        if not 0 <= i <= n:
            raise ValidationError(f"face index {i} out of range for dimension {n}")
        left: list[int] = []
        word = ref.degens
        for pos, w in enumerate(word):
            if i < w:
                left.append(w - 1)
            elif i in (w, w + 1):
                rest = tuple(left) + word[pos + 1:]
                return SimplexRef(ref.cell, rest)
            else:
                left.append(w)
                i -= 1
        out = self.faces[ref.cell][i]
        for j in reversed(left):
            out = degenerate_ref(out, j)
        return out

    def apply_operator(self, phi, ref: SimplexRef) -> SimplexRef:
        """Act by K(phi) for a monotone map phi: [p] -> [q] on a level-q simplex.

        phi is given by its value tuple (phi(0), ..., phi(p)).  The map is
        factored into faces (the complement of its image, applied from the
        top index down) followed by degeneracies (its repeat positions,
        applied from the bottom up).
        """
        phi = tuple(phi)
        q = self.ref_dim(ref)
        if not phi:
            raise ValidationError("empty operator")
        if any(phi[k] > phi[k + 1] for k in range(len(phi) - 1)):
            raise ValidationError(f"operator {phi} is not monotone")
        if phi[0] < 0 or phi[-1] > q:
            raise ValidationError(f"operator {phi} does not map into [{q}]")
        out = ref
        for b in sorted(set(range(q + 1)) - set(phi), reverse=True):
            out = self.face_of_ref(out, b)
        for d in [k for k in range(len(phi) - 1) if phi[k] == phi[k + 1]]:
            out = degenerate_ref(out, d)
        return out

    def level_simplices(self, p: int) -> list[SimplexRef]:
        """All simplices of K_p in normal form, in the canonical total order.

        The order is lexicographic on (cell id, degeneracy word); it is the
        fixed factor ordering used by every downstream tensor construction.
        """
        if p not in self._level_cache:
            refs = []
            for d in sorted(self.cells):
                if d > p:
                    break
                for c in self.cells[d]:
                    for word in itertools.combinations(range(p - 1, -1, -1), p - d):
                        refs.append(SimplexRef(c, word))
            refs.sort(key=lambda r: (r.cell, r.degens))
            self._level_cache[p] = refs
            self._level_pos[p] = {r: k for k, r in enumerate(refs)}
        return self._level_cache[p]

    def level_index(self, p: int) -> dict[SimplexRef, int]:
        self.level_simplices(p)
        return self._level_pos[p]

    def basepoint_ref(self, p: int) -> SimplexRef:
        if not self.pointed:
            raise ValidationError("complex is not pointed")
        return SimplexRef(self.basepoint, tuple(range(p - 1, -1, -1)))

    # -- homology ---------------------------------------------------------

    def boundary_matrices(self, field: FieldSpec) -> dict[int, np.ndarray]:
        """Normalized boundary matrices over a field, one per dimension n >= 1."""
        out = {}
        for n in range(1, self.dim + 1):
            lower = {c: k for k, c in enumerate(self.cells_of_dim(n - 1))}
            mat = field.zeros(len(lower), len(self.cells_of_dim(n)))
            for k, c in enumerate(self.cells_of_dim(n)):
                sgn = field.one
                for i, ref in enumerate(self.faces[c]):
                    if not ref.degens:
                        r = lower[ref.cell]
                        mat[r, k] = field.add(mat[r, k], sgn)
                    sgn = field.neg(sgn)
            out[n] = mat
        return out

    def integral_boundary_matrices(self) -> dict[int, np.ndarray]:
        """Boundary matrices with plain integer entries."""
        out = {}
        for n in range(1, self.dim + 1):
            lower = {c: k for k, c in enumerate(self.cells_of_dim(n - 1))}
            mat = np.zeros((len(lower), len(self.cells_of_dim(n))), dtype=object)
            mat[:, :] = 0
            for k, c in enumerate(self.cells_of_dim(n)):
                for i, ref in enumerate(self.faces[c]):
                    if not ref.degens:
                        mat[lower[ref.cell], k] += (-1) ** i
            out[n] = mat
        return out

    def homology(self, field: FieldSpec) -> "complexes.ChainHomology":
        """Field homology of the normalized chain complex, with representatives."""
        dims = [len(self.cells_of_dim(n)) for n in range(self.dim + 1)]
        return complexes.homology_of_boundaries(dims, self.boundary_matrices(field), field)


# -- simplicial maps ----------------------------------------------------


class SimplicialMap:
    """A map of simplicial sets, stored on nondegenerate source cells."""

    def __init__(self, source: FiniteSimplicialSet, target: FiniteSimplicialSet, images: dict[str, SimplexRef]):
        self.source = source
        self.target = target
        self.images = dict(images)

    def __call__(self, ref: SimplexRef) -> SimplexRef:
        out = self.images[ref.cell]
        for j in reversed(ref.degens):
            out = degenerate_ref(out, j)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialMap)
            and self.source is other.source
            and self.target is other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash(tuple(sorted((c, r) for c, r in self.images.items())))

    def validate(self) -> None:
        for c, ref in self.images.items():
            d = self.source.cell_dim[c]
            if self.target.ref_dim(ref) != d:
                raise ValidationError(f"image of {c!r} has wrong dimension")
        for d, cs in self.source.cells.items():
            if d == 0:
                continue
            for c in cs:
                for i in range(d + 1):
                    want = self(self.source.faces[c][i])
                    got = self.target.face_of_ref(self.images[c], i)
                    if want != got:
                        raise ValidationError(f"map does not commute with d_{i} on {c!r}")
        if self.source.pointed and self.target.pointed:
            if self.images.get(self.source.basepoint) != SimplexRef(self.target.basepoint):
                raise ValidationError("map does not preserve the basepoint")

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other (self âˆ˜ other)."""
        if other.target is not self.source:
            raise ValidationError("composition mismatch")
        images = {c: self(ref) for c, ref in other.images.items()}
        return SimplicialMap(other.source, self.target, images)

    def chain_matrix(self, n: int, field: FieldSpec) -> np.ndarray:
        """The induced map on normalized n-chains (degenerate images die)."""
        tgt = self.target.cells_of_dim(n)
        pos = {c: k for k, c in enumerate(tgt)}
        src = self.source.cells_of_dim(n)
        mat = field.zeros(len(tgt), len(src))
        for k, c in enumerate(src):
            ref = self.images[c]
            if not ref.degens:
                mat[pos[ref.cell], k] = field.one
        return mat


def identity_map(K: FiniteSimplicialSet) -> SimplicialMap:
    return SimplicialMap(K, K, {c: SimplexRef(c) for c in K.all_cells()})


def enumerate_maps(source: FiniteSimplicialSet, target: FiniteSimplicialSet, pointed: bool = False) -> list[SimplicialMap]:
    """All simplicial maps from source to target.

    Images are assigned to nondegenerate cells in dimension order with
    face-compatibility pruning, so the search touches only consistent
    partial assignments.
    """
    order = [c for d in sorted(source.cells) for c in source.cells[d]]
    results: list[SimplicialMap] = []
    assignment: dict[str, SimplexRef] = {}

    if pointed and not (source.pointed and target.pointed):
        raise ValidationError("pointed enumeration needs pointed complexes")

    def candidates(c: str):
        d = source.cell_dim[c]
        if pointed and c == source.basepoint:
            return [SimplexRef(target.basepoint)]
        return target.level_simplices(d)

    def extend(k: int):
        if k == len(order):
            results.append(SimplicialMap(source, target, dict(assignment)))
            return
        c = order[k]
        d = source.cell_dim[c]
        for ref in candidates(c):
            ok = True
            if d > 0:
                for i in range(d + 1):
                    fr = source.faces[c][i]
                    want = assignment[fr.cell]
                    for j in reversed(fr.degens):
                        want = degenerate_ref(want, j)
                    if target.face_of_ref(ref, i) != want:
                        ok = False
                        break
            if ok:
                assignment[c] = ref
                extend(k + 1)
                del assignment[c]

    extend(0)
    return results


# -- group actions -------------------------------------------------------


@dataclass
class SimplicialGroupAction:
    """A strict action of a finite group on a simplicial set.

    `group` is any object exposing elements, identity, mult(g, h) and
    inverse(g); `maps` assigns to each element an automorphism of K.
    """

    group: object
    maps: dict[object, SimplicialMap]


@dataclass
class ActionReport:
    valid: bool
    message: str
    induced: dict | None = None
    homology: object | None = None


def validate_action(K: FiniteSimplicialSet, action: SimplicialGroupAction, field: FieldSpec | None = None) -> ActionReport:
    """Check the group-action axioms and compute the induced homology matrices.

    Returns a report whose `induced` maps each group element to a
    per-degree matrix acting on H_*(K; field).  The first violated identity
    aborts the check with a message naming it.
    """
    field = field or FieldSpec.rationals()
    g_e = action.group.identity
    for g in action.group.elements:
        if g not in action.maps:
            return ActionReport(False, f"no map for element {g!r}")
        f = action.maps[g]
        if f.source is not K or f.target is not K:
            return ActionReport(False, f"map for {g!r} is not an endomorphism of {K.name}")
        try:
            f.validate()
        except ValidationError as e:
            return ActionReport(False, f"map for {g!r}: {e}")
        for d in K.cells:
            imgs = {f.images[c] for c in K.cells_of_dim(d)}
            if len(imgs) != len(K.cells_of_dim(d)) or any(r.degens for r in imgs):
                return ActionReport(False, f"map for {g!r} is not an automorphism in dimension {d}")
        if K.pointed and f.images.get(K.basepoint) != SimplexRef(K.basepoint):
            return ActionReport(False, f"map for {g!r} moves the basepoint")
    if action.maps[g_e] != identity_map(K):
        return ActionReport(False, "identity element does not act as the identity")
    for g in action.group.elements:
        for h in action.group.elements:
            gh = action.group.mult(g, h)
            if action.maps[g].compose(action.maps[h]) != action.maps[gh]:
                return ActionReport(False, f"composition fails on pair ({g!r}, {h!r})")
    hom = K.homology(field)
    induced = {}
    for g in action.group.elements:
        mats = {}
        for n in range(K.dim + 1):
            chain = action.maps[g].chain_matrix(n, field)
            mats[n] = hom.induced_matrix(n, chain)
        induced[g] = mats
    return ActionReport(True, "ok", induced=induced, homology=hom)


# -- standard constructions ----------------------------------------------


def standard_simplex(n: int) -> FiniteSimplicialSet:
    """The n-simplex: nondegenerate cells are the vertex subsets of [n]."""
    if n < 0:
        raise ValidationError("simplex dimension must be nonnegative")
    cells: dict[int, list[str]] = {}
    faces: dict[str, list[SimplexRef]] = {}

    def cid(vs):
        return "v" + "".join(str(v) for v in vs)

    for d in range(n + 1):
        cells[d] = [cid(vs) for vs in itertools.combinations(range(n + 1), d + 1)]
        for vs in itertools.combinations(range(n + 1), d + 1):
            if d > 0:
                faces[cid(vs)] = [SimplexRef(cid(vs[:i] + vs[i + 1:])) for i in range(d + 1)]
            else:
                faces[cid(vs)] = []
    return FiniteSimplicialSet(f"simplex{n}", cells, faces, pointed=(n == 0), basepoint=cid((0,)) if n == 0 else None)


def minimal_sphere(n: int) -> FiniteSimplicialSet:
    """The sphere model with one vertex and one n-cell (two vertices for n=0)."""
    if n < 0:
        raise ValidationError("sphere dimension must be nonnegative")
    if n == 0:
        cells = {0: ["pt0", "pt1"]}
        faces = {"pt0": [], "pt1": []}
        return FiniteSimplicialSet("sphere0", cells, faces, pointed=True, basepoint="pt0")
    degenerate_pt = SimplexRef("pt", tuple(range(n - 2, -1, -1)))
    cells = {0: ["pt"], n: ["top"]}
    faces = {"pt": [], "top": [degenerate_pt] * (n + 1)}
    return FiniteSimplicialSet(f"sphere{n}", cells, faces, pointed=True, basepoint="pt")


def polygon(m: int) -> FiniteSimplicialSet:
    """An m-gon: m vertices and m edges forming a cycle.

    Edge orientations alternate around even cycles so that the dihedral
    reflections through vertices are simplicial maps; odd cycles are
    oriented uniformly so that all rotations are simplicial maps.
    """
    if m < 3:
        raise ValidationError("polygon needs at least 3 vertices")
    cells = {0: [f"v{i}" for i in range(m)], 1: [f"e{i}" for i in range(m)]}
    faces: dict[str, list[SimplexRef]] = {f"v{i}": [] for i in range(m)}
    for i in range(m):
        a, b = f"v{i}", f"v{(i + 1) % m}"
        if m % 2 == 0 and i % 2 == 1:
            a, b = b, a
        # oriented a -> b: d_0 = b, d_1 = a
        faces[f"e{i}"] = [SimplexRef(b), SimplexRef(a)]
    return FiniteSimplicialSet(f"polygon{m}", cells, faces)


def directed_cycle(m: int) -> FiniteSimplicialSet:
    """A cycle of m >= 2 uniformly oriented edges v_i -> v_{i+1}.

    Unlike `polygon`, the orientation is uniform for every m, so the map
    wrapping all edges around the minimal circle has degree m.
    """
    if m < 2:
        raise ValidationError("directed cycle needs at least 2 edges")
    cells = {0: [f"v{i}" for i in range(m)], 1: [f"e{i}" for i in range(m)]}
    faces: dict[str, list[SimplexRef]] = {f"v{i}": [] for i in range(m)}
    for i in range(m):
        faces[f"e{i}"] = [SimplexRef(f"v{(i + 1) % m}"), SimplexRef(f"v{i}")]
    return FiniteSimplicialSet(f"cycle{m}", cells, faces)


def discrete(points: list[str], name: str = "discrete") -> FiniteSimplicialSet:
    return FiniteSimplicialSet(name, {0: list(points)}, {p: [] for p in points})


def wedge(summands: list[FiniteSimplicialSet], name: str = "wedge") -> FiniteSimplicialSet:
    """Wedge of pointed complexes: disjoint union with basepoints merged."""
    for K in summands:
        if not K.pointed:
            raise ValidationError("wedge needs pointed summands")
    cells: dict[int, list[str]] = {0: ["bp"]}
    faces: dict[str, list[SimplexRef]] = {"bp": []}

    def rename(k, c):
        K = summands[k]
        return "bp" if c == K.basepoint else f"w{k}.{c}"

    for k, K in enumerate(summands):
        for d in sorted(K.cells):
            cells.setdefault(d, [])
            for c in K.cells_of_dim(d):
                if d == 0 and c == K.basepoint:
                    continue
                nid = rename(k, c)
                cells[d].append(nid)
                faces[nid] = [SimplexRef(rename(k, r.cell), r.degens) for r in K.faces[c]]
    return FiniteSimplicialSet(name, cells, faces, pointed=True, basepoint="bp")


def disjoint_union(A: FiniteSimplicialSet, B: FiniteSimplicialSet, name: str = "sum") -> FiniteSimplicialSet:
    cells: dict[int, list[str]] = {}
    faces: dict[str, list[SimplexRef]] = {}
    for tag, K in (("l", A), ("r", B)):
        for d in sorted(K.cells):
            cells.setdefault(d, [])
            for c in K.cells_of_dim(d):
                nid = f"{tag}.{c}"
                cells[d].append(nid)
                faces[nid] = [SimplexRef(f"{tag}.{r.cell}", r.degens) for r in K.faces[c]]
    return FiniteSimplicialSet(name, cells, faces)


# -- products -------------------------------------------------------------


def _tuple_id(refs) -> str:
    return "(" + "|".join(str(r) for r in refs) + ")"


def _tuple_normal_form(factors: list[FiniteSimplicialSet], refs: list[SimplexRef], index: dict) -> SimplexRef:
    """Normal form of a tuple simplex: strip shared degeneracy indices.

    A tuple is in the image of s_j exactly when j lies in every coordinate's
    degeneracy word; stripping the largest shared index first produces the
    strictly decreasing word.
    """
    word: list[int] = []
    refs = list(refs)
    while True:
        common = set(refs[0].degens)
        for r in refs[1:]:
            common &= set(r.degens)
        if not common:
            break
        j = max(common)
        word.append(j)
        refs = [factors[k].face_of_ref(r, j) for k, r in enumerate(refs)]
    out = SimplexRef(index[tuple(refs)])
    for j in reversed(word):
        out = degenerate_ref(out, j)
    return out


def power(factors: list[FiniteSimplicialSet], dim_bound: int, name: str | None = None,
          max_cells: int | None = None) -> FiniteSimplicialSet:
    """Product of a list of simplicial sets, truncated above dim_bound.

    Level-n cells are tuples of level-n simplices whose degeneracy words have
    empty intersection.  The result's meta carries the factor tuple of every
    cell and the tuple -> cell index used by normal-form reduction.
    """
    if not factors:
        raise ValidationError("empty product")
    cells: dict[int, list[str]] = {}
    faces: dict[str, list[SimplexRef]] = {}
    index: dict[tuple, str] = {}
    factor_refs: dict[str, tuple] = {}
    count = 0
    for n in range(dim_bound + 1):
        level = []
        for combo in itertools.product(*[K.level_simplices(n) for K in factors]):
            common = set(combo[0].degens)
            for r in combo[1:]:
                common &= set(r.degens)
            if common:
                continue
            cid = _tuple_id(combo)
            index[tuple(combo)] = cid
            factor_refs[cid] = tuple(combo)
            level.append(cid)
            count += 1
            if max_cells is not None and count > max_cells:
                raise ResourceLimitError(f"product exceeds {max_cells} cells")
        if level:
            cells[n] = level
    for n in sorted(cells):
        for cid in cells[n]:
            combo = factor_refs[cid]
            if n == 0:
                faces[cid] = []
                continue
            fs = []
            for i in range(n + 1):
                frefs = [factors[k].face_of_ref(r, i) for k, r in enumerate(combo)]
                fs.append(_tuple_normal_form(factors, frefs, index))
            faces[cid] = fs
    pointed = all(K.pointed for K in factors)
    bp = _tuple_id([SimplexRef(K.basepoint) for K in factors]) if pointed else None
    out = FiniteSimplicialSet(
        name or "x".join(K.name for K in factors), cells, faces,
        pointed=pointed, basepoint=bp,
        meta={"factors": factors, "factor_refs": factor_refs, "tuple_index": index},
    )
    return out


def product(K: FiniteSimplicialSet, L: FiniteSimplicialSet, dim_bound: int, name: str | None = None) -> FiniteSimplicialSet:
    """Binary cartesian product truncated above dim_bound."""
    return power([K, L], dim_bound, name=name)


def product_ref(P: FiniteSimplicialSet, refs: list[SimplexRef]) -> SimplexRef:
    """The normal form in a product P of a tuple of coordinate simplices."""
    return _tuple_normal_form(P.meta["factors"], refs, P.meta["tuple_index"])


def reindex_map(P_src: FiniteSimplicialSet, P_dst: FiniteSimplicialSet, position_source) -> SimplicialMap:
    """The product map that fills target coordinate t from source coordinate
    position_source[t] (a diagonal-style map between power complexes)."""
    factors_dst = P_dst.meta["factors"]
    images = {}
    for cid, combo in P_src.meta["factor_refs"].items():
        refs = [combo[position_source[t]] for t in range(len(factors_dst))]
        images[cid] = _tuple_normal_form(factors_dst, refs, P_dst.meta["tuple_index"])
    return SimplicialMap(P_src, P_dst, images)


# -- levelwise presentations and quotients --------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if str(rb) < str(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


class LevelwisePresentation:
    """A simplicial set given by its level sets and operator actions.

    Subclasses provide elements(j), face(j, i, x), degen(j, i, x) and
    key_str(j, x); `condense` turns the presentation into normal form.
    """

    top: int

    def elements(self, j: int):
        raise NotImplementedError

    def face(self, j: int, i: int, x):
        raise NotImplementedError

    def degen(self, j: int, i: int, x):
        raise NotImplementedError

    def key_str(self, j: int, x) -> str:
        return str(x)


def condense(pres: LevelwisePresentation, top_dim: int, name: str,
             basepoint_key=None, guard_level: bool = True):
    """Extract the nondegenerate-cell presentation of a levelwise simplicial set.

    An element x of level j is degenerate iff s_i(d_i(x)) == x for some i;
    stripping the largest such i repeatedly yields the normal form.  When
    guard_level is set and the presentation stores level top_dim + 1, the
    extraction verifies that no nondegenerate element lives there.

    Returns (FiniteSimplicialSet, locate) where locate(j, x) gives the
    normal form of any presented element as a SimplexRef of the result.
    """
    cells: dict[int, list[str]] = {}
    faces: dict[str, list[SimplexRef]] = {}
    cell_id: dict[tuple[int, object], str] = {}

    def is_degenerate_from(j, x):
        for i in range(j - 1, -1, -1):
            if pres.degen(j - 1, i, pres.face(j, i, x)) == x:
                return i
        return None

    def normal_form(j, x) -> SimplexRef:
        word = []
        while j > 0:
            i = is_degenerate_from(j, x)
            if i is None:
                break
            word.append(i)
            x = pres.face(j, i, x)
            j -= 1
        ref = SimplexRef(cell_id[(j, x)])
        for w in reversed(word):
            ref = degenerate_ref(ref, w)
        return ref

    for j in range(min(pres.top, top_dim) + 1):
        level = []
        for x in pres.elements(j):
            if j > 0 and is_degenerate_from(j, x) is not None:
                continue
            cid = pres.key_str(j, x)
            cell_id[(j, x)] = cid
            level.append(cid)
        if level:
            cells[j] = level
    if guard_level and pres.top >= top_dim + 1:
        for x in pres.elements(top_dim + 1):
            if is_degenerate_from(top_dim + 1, x) is None:
                raise ValidationError(
                    f"{name}: nondegenerate cell above dimension {top_dim}; raise the truncation"
                )
    for (j, x), cid in list(cell_id.items()):
        faces[cid] = [normal_form(j - 1, pres.face(j, i, x)) for i in range(j + 1)] if j > 0 else []
    bp = None
    if basepoint_key is not None:
        bp = cell_id[(0, basepoint_key)]
    out = FiniteSimplicialSet(name, cells, faces, pointed=bp is not None, basepoint=bp)
    return out, lambda j, x: normal_form(j, x)


class _QuotientPresentation(LevelwisePresentation):
    """Levelwise quotient of a finite simplicial set by generated identifications."""

    def __init__(self, K: FiniteSimplicialSet, seeds, top: int):
        self.K = K
        self.top = top
        self.uf = _UnionFind()
        for j in range(top + 1):
            for r in K.level_simplices(j):
                self.uf.find((j, r))
        work = []
        for (j, a, b) in seeds:
            if self.uf.union((j, a), (j, b)):
                work.append((j, a, b))
        while work:
            j, a, b = work.pop()
            if j > 0:
                for i in range(j + 1):
                    fa, fb = K.face_of_ref(a, i), K.face_of_ref(b, i)
                    if self.uf.union((j - 1, fa), (j - 1, fb)):
                        work.append((j - 1, fa, fb))
            if j < top:
                for i in range(j + 1):
                    da, db = degenerate_ref(a, i), degenerate_ref(b, i)
                    if self.uf.union((j + 1, da), (j + 1, db)):
                        work.append((j + 1, da, db))
        self._classes: dict[int, list] = {}
        for j in range(top + 1):
            reps = sorted({self.uf.find((j, r)) for r in K.level_simplices(j)}, key=str)
            self._classes[j] = reps

    def elements(self, j):
        return self._classes[j]

    def face(self, j, i, x):
        (_, r) = x
        return self.uf.find((j - 1, self.K.face_of_ref(r, i)))

    def degen(self, j, i, x):
        (_, r) = x
        return self.uf.find((j + 1, degenerate_ref(r, i)))

    def key_str(self, j, x):
        return str(x[1])

    def locate_ref(self, j, r: SimplexRef):
        return self.uf.find((j, r))


def quotient(K: FiniteSimplicialSet, collapse: set[str], name: str | None = None) -> FiniteSimplicialSet:
    """Collapse a face-closed set of cells to a single basepoint.

    The collapse set must contain the nondegenerate faces of each of its
    members; the result is pointed at the collapsed class.
    """
    collapse = set(collapse)
    for c in collapse:
        if c not in K.cell_dim:
            raise ValidationError(f"unknown cell {c!r} in collapse set")
        for ref in K.faces.get(c, []):
            if ref.cell not in collapse:
                raise ValidationError(f"collapse set is not face-closed: {c!r} has face {ref.cell!r} outside")
    if not collapse:
        raise ValidationError("empty collapse set; include at least a basepoint cell")
    top = K.dim + 1
    seeds = []
    for j in range(top + 1):
        refs = [r for r in K.level_simplices(j) if r.cell in collapse]
        for a, b in zip(refs, refs[1:]):
            seeds.append((j, a, b))
    pres = _QuotientPresentation(K, seeds, top)
    bp_cell = sorted(collapse, key=lambda c: (K.cell_dim[c], c))[0]
    if K.cell_dim[bp_cell] != 0:
        raise ValidationError("collapse set contains no 0-cell")
    bp_key = pres.locate_ref(0, SimplexRef(bp_cell))
    out, _ = condense(pres, K.dim, name or f"{K.name}/collapse", basepoint_key=bp_key)
    return out


def identify(K: FiniteSimplicialSet, pairs, top_dim: int, name: str,
             basepoint_ref: SimplexRef | None = None) -> FiniteSimplicialSet:
    """Quotient by identifications generated by pairs of same-level simplices.

    pairs is an iterable of (level, refA, refB); the generated equivalence is
    closed under faces and degeneracies before extraction.
    """
    pres = _QuotientPresentation(K, list(pairs), top_dim + 1)
    bp_key = pres.locate_ref(0, basepoint_ref) if basepoint_ref is not None else None
    out, _ = condense(pres, top_dim, name, basepoint_key=bp_key)
    return out


def mapping_cone(f: SimplicialMap, name: str | None = None) -> FiniteSimplicialSet:
    """The mapping cone of f: A -> B, built from A x Delta^1 glued to B.

    The cylinder end A x {0} is glued along f and the end A x {1} is
    collapsed to the cone point; the result is pointed at the cone point.
    """
    A, B = f.source, f.target
    d1 = standard_simplex(1)
    top = A.dim + 2
    cyl = power([A, d1], min(A.dim + 1, top), name="cyl")
    U = disjoint_union(cyl, B, name="cone-carrier")

    def cyl_ref(aref: SimplexRef, vertex: str, level: int) -> SimplexRef:
        vref = SimplexRef(vertex, tuple(range(level - 1, -1, -1)))
        r = product_ref(cyl, [aref, vref])
        return SimplexRef("l." + r.cell, r.degens)

    def base_ref(bref: SimplexRef) -> SimplexRef:
        return SimplexRef("r." + bref.cell, bref.degens)

    pairs = []
    for j in range(top + 1):
        collapse_refs = []
        for aref in A.level_simplices(j):
            pairs.append((j, cyl_ref(aref, "v0", j), base_ref(f(aref))))
            collapse_refs.append(cyl_ref(aref, "v1", j))
        for a, b in zip(collapse_refs, collapse_refs[1:]):
            pairs.append((j, a, b))
    cone_pt = cyl_ref(SimplexRef(A.cells_of_dim(0)[0]), "v1", 0)
    return identify(U, pairs, A.dim + 1, name or f"cone({f.source.name})", basepoint_ref=cone_pt)


def moore_space(n: int, p: int) -> FiniteSimplicialSet:
    """The mod-p Moore space in dimension n (only n = 1 is supported).

    Built as the mapping cone of the degree-p map that wraps every edge of a
    p-cycle around the minimal circle.  For odd p the cycle is `polygon(p)`;
    for even p the alternating orientation of `polygon` caps the attainable
    degree at p/2, so a uniformly oriented cycle is used instead.
    """
    if n != 1:
        raise ValidationError("only the dimension-1 Moore space is built")
    if p < 2:
        raise ValidationError("the attaching degree must be at least 2")
    src = polygon(p) if p % 2 == 1 else directed_cycle(p)
    circle = minimal_sphere(1)
    images: dict[str, SimplexRef] = {}
    for c in src.cells_of_dim(0):
        images[c] = SimplexRef("pt")
    for c in src.cells_of_dim(1):
        images[c] = SimplexRef("top")
    f = SimplicialMap(src, circle, images)
    f.validate()
    return mapping_cone(f, name=f"moore(1,{p})")


def smash(K: FiniteSimplicialSet, L: FiniteSimplicialSet, dim_bound: int, name: str | None = None) -> FiniteSimplicialSet:
    """Smash product: the product with the axis wedge collapsed."""
    if not (K.pointed and L.pointed):
        raise ValidationError("smash needs pointed factors")
    P = product(K, L, dim_bound, name=f"{K.name}x{L.name}")
    wedge_cells = set()
    for cid, (ra, rb) in P.meta["factor_refs"].items():
        if ra.cell == K.basepoint or rb.cell == L.basepoint:
            wedge_cells.add(cid)
    return quotient(P, wedge_cells, name=name or f"{K.name}^{L.name}")


def switch_action_map(P: FiniteSimplicialSet) -> SimplicialMap:
    """The coordinate swap on a binary product of a complex with itself."""
    return reindex_map(P, P, [1, 0])


def build_standard(kind: str, *args) -> FiniteSimplicialSet:
    """Dispatch for the named standard models.

    kind is one of "simplex", "minimal_sphere", "polygon", "wedge", "moore".
    """
    if kind == "simplex":
        return standard_simplex(*args)
    if kind == "minimal_sphere":
        return minimal_sphere(*args)
    if kind == "polygon":
        return polygon(*args)
    if kind == "wedge":
        return wedge(*args)
    if kind == "moore":
        return moore_space(*args)
    raise ValidationError(f"unknown standard model {kind!r}")
