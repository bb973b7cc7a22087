"""Cosimplicial simplicial sets, the tensor product under the simplex
category, and finite verification of the mapping-space adjunction.

A cosimplicial simplicial set Z is stored up to a truncation level with its
coface and codegeneracy maps; general operators Z(phi) are assembled from the
elementary ones via the epi-mono factorization of phi.

The tensor product of a simplicial set K with Z is the colimit of the levels
Z[n] over the simplices of K.  Every pair (sigma, z) with sigma degenerate
reduces to a pair based at a nondegenerate cell, so the colimit is computed
by union-find over the finitely many nondegenerate-based pairs, with one
generating relation per elementary face of each nondegenerate cell.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TruncationError, ValidationError
from .simplicial import (
    FiniteSimplicialSet,
    LevelwisePresentation,
    SimplexRef,
    SimplicialMap,
    _UnionFind,
    condense,
    enumerate_maps,
    identity_map,
    standard_simplex,
)


def _surjection_with_repeats(m: int, repeats: set[int]) -> tuple[int, ...]:
    """The monotone surjection on [m] whose repeat positions are `repeats`."""
    vals = [0]
    for i in range(m):
        vals.append(vals[-1] if i in repeats else vals[-1] + 1)
    return tuple(vals)


def coface_values(p: int, i: int) -> tuple[int, ...]:
    """delta^i: [p-1] -> [p], skipping i."""
    return tuple(v for v in range(p + 1) if v != i)


def codegeneracy_values(p: int, j: int) -> tuple[int, ...]:
    """sigma^j: [p+1] -> [p], repeating j."""
    return tuple(v if v <= j else v - 1 for v in range(p + 2))


class CosimplicialSSet:
    """Levels Z[0..trunc] with coface and codegeneracy simplicial maps.

    cofaces[(p, i)] is Z(delta^i): Z[p-1] -> Z[p]; codegens[(p, j)] is
    Z(sigma^j): Z[p+1] -> Z[p].
    """

    def __init__(self, levels: list[FiniteSimplicialSet], cofaces: dict, codegens: dict, name: str = "Z"):
        self.levels = list(levels)
        self.cofaces = dict(cofaces)
        self.codegens = dict(codegens)
        self.name = name

    @property
    def trunc(self) -> int:
        return len(self.levels) - 1

    def operator_to(self, phi, src_level: int, dst_level: int) -> SimplicialMap:
        """Z(phi): Z[src_level] -> Z[dst_level] for a monotone value tuple phi.

        phi is factored as a surjection followed by an injection; the
        codegeneracies for its repeat positions apply first (largest
        position innermost), then the cofaces for the complement of its
        image (smallest index innermost).
        """
        phi = tuple(phi)
        p = src_level
        if len(phi) != p + 1:
            raise ValidationError(f"operator arity {len(phi) - 1} != source level {p}")
        if any(phi[k] > phi[k + 1] for k in range(len(phi) - 1)):
            raise ValidationError(f"operator {phi} is not monotone")
        if phi[0] < 0 or phi[-1] > dst_level:
            raise ValidationError(f"operator {phi} does not map into [{dst_level}]")
        repeats = sorted(k for k in range(p) if phi[k] == phi[k + 1])
        m = None
        level = p
        for d in reversed(repeats):
            step = self.codegens[(level - 1, d)]
            m = step if m is None else step.compose(m)
            level -= 1
        for c in sorted(set(range(dst_level + 1)) - set(phi)):
            step = self.cofaces[(level + 1, c)]
            m = step if m is None else step.compose(m)
            level += 1
        if m is None:
            m = identity_map(self.levels[p])
        return m

    def validate(self) -> None:
        """Cosimplicial identities on the stored range, by explicit composition."""
        t = self.trunc
        for p in range(1, t + 1):
            for i in range(p + 1):
                self.cofaces[(p, i)].validate()
        for p in range(t):
            for j in range(p + 1):
                self.codegens[(p, j)].validate()
        for p in range(2, t + 1):
            for j in range(p + 1):
                for i in range(j):
                    left = self.cofaces[(p, j)].compose(self.cofaces[(p - 1, i)])
                    right = self.cofaces[(p, i)].compose(self.cofaces[(p - 1, j - 1)])
                    if left != right:
                        raise ValidationError(f"coface identity fails at (p={p}, i={i}, j={j})")
        for p in range(t - 1):
            for j in range(p + 1):
                for i in range(j + 1):
                    left = self.codegens[(p, j)].compose(self.codegens[(p + 1, i)])
                    right = self.codegens[(p, i)].compose(self.codegens[(p + 1, j + 1)])
                    if left != right:
                        raise ValidationError(f"codegeneracy identity fails at (p={p}, i={i}, j={j})")
        for p in range(1, t):
            for j in range(p + 1):
                for i in range(p + 2):
                    lhs = self.codegens[(p, j)].compose(self.cofaces[(p + 1, i)])
                    if i < j:
                        rhs = self.cofaces[(p, i)].compose(self.codegens[(p - 1, j - 1)])
                    elif i in (j, j + 1):
                        rhs = identity_map(self.levels[p])
                    else:
                        rhs = self.cofaces[(p, i - 1)].compose(self.codegens[(p - 1, j)])
                    if lhs != rhs:
                        raise ValidationError(f"mixed identity fails at (p={p}, i={i}, j={j})")


def _simplex_vertex_map(src: FiniteSimplicialSet, dst: FiniteSimplicialSet, values) -> SimplicialMap:
    """The map of standard simplices induced by a monotone vertex assignment."""
    images = {}
    for c in src.all_cells():
        vs = [int(v) for v in c[1:].split("_")] if "_" in c else [int(v) for v in c[1:]]
        ws = [values[v] for v in vs]
        strict = sorted(set(ws))
        word = tuple(sorted((i for i in range(len(ws) - 1) if ws[i] == ws[i + 1]), reverse=True))
        cid = "v" + "".join(str(v) for v in strict)
        images[c] = SimplexRef(cid, word)
    return SimplicialMap(src, dst, images)


def yoneda_cosimplicial(trunc: int) -> CosimplicialSSet:
    """The standard-simplex cosimplicial object, truncated."""
    levels = [standard_simplex(p) for p in range(trunc + 1)]
    cofaces = {}
    codegens = {}
    for p in range(1, trunc + 1):
        for i in range(p + 1):
            cofaces[(p, i)] = _simplex_vertex_map(levels[p - 1], levels[p], coface_values(p, i))
    for p in range(trunc):
        for j in range(p + 1):
            codegens[(p, j)] = _simplex_vertex_map(levels[p + 1], levels[p], codegeneracy_values(p, j))
    return CosimplicialSSet(levels, cofaces, codegens, name="yoneda")


def constant_cosimplicial(X: FiniteSimplicialSet, trunc: int) -> CosimplicialSSet:
    levels = [X] * (trunc + 1)
    cofaces = {(p, i): identity_map(X) for p in range(1, trunc + 1) for i in range(p + 1)}
    codegens = {(p, j): identity_map(X) for p in range(trunc) for j in range(p + 1)}
    return CosimplicialSSet(levels, cofaces, codegens, name=f"const({X.name})")


# -- mapping cosimplicial sets (set level) ---------------------------------


class CosimplicialFiniteSets:
    """The cosimplicial family of finite sets p -> Set(K_p, X).

    Level p lists each function K_p -> X as a tuple of X-indices over the
    canonical order of K_p; operators act by precomposition.
    """

    def __init__(self, K: FiniteSimplicialSet, n_elements: int, trunc: int):
        import itertools

        self.K = K
        self.n_elements = n_elements
        self.trunc = trunc
        self.levels = []
        for p in range(trunc + 1):
            size = len(K.level_simplices(p))
            self.levels.append(list(itertools.product(range(n_elements), repeat=size)))

    def operator(self, phi, src_level: int, dst_level: int) -> list[int]:
        """Index map level src -> level dst for monotone phi: [src] -> [dst]."""
        K = self.K
        src_elems = self.levels[src_level]
        pos = {f: k for k, f in enumerate(self.levels[dst_level])}
        src_pos = K.level_index(src_level)
        out = []
        target_refs = [K.apply_operator(phi, r) for r in K.level_simplices(dst_level)]
        idx = [src_pos[r] for r in target_refs]
        for f in src_elems:
            g = tuple(f[i] for i in idx)
            out.append(pos[g])
        return out


def mapping_cosimplicial_set(K: FiniteSimplicialSet, n_elements: int, trunc: int) -> CosimplicialFiniteSets:
    """The levelwise function sets of the mapping construction, truncated."""
    return CosimplicialFiniteSets(K, n_elements, trunc)


# -- tensor product under the simplex category ------------------------------


class _TensorPresentation(LevelwisePresentation):
    """Levelwise presentation of the colimit of Z over the simplices of K."""

    def __init__(self, K: FiniteSimplicialSet, Z: CosimplicialSSet, top: int):
        self.K = K
        self.Z = Z
        self.top = top
        need = K.dim
        if Z.trunc < need:
            raise TruncationError(
                f"cosimplicial object stored to level {Z.trunc} but the source has cells of dimension {need}"
            )
        self.uf = _UnionFind()
        for j in range(top + 1):
            for c in K.all_cells():
                for z in Z.levels[K.cell_dim[c]].level_simplices(j):
                    self.uf.find((j, c, z))
        for c in K.all_cells():
            m = K.cell_dim[c]
            if m == 0:
                continue
            for i in range(m + 1):
                fref = K.faces[c][i]
                eta = _surjection_with_repeats(m - 1, set(fref.degens))
                z_eta = Z.operator_to(eta, m - 1, m - 1 - len(fref.degens))
                z_dlt = Z.operator_to(coface_values(m, i), m - 1, m)
                for j in range(top + 1):
                    for z in Z.levels[m - 1].level_simplices(j):
                        a = (j, fref.cell, z_eta(z))
                        b = (j, c, z_dlt(z))
                        self._union_closed(a, b)
        self._classes: dict[int, list] = {}
        for j in range(top + 1):
            reps = sorted(
                {self.uf.find((j, c, z)) for c in K.all_cells() for z in Z.levels[K.cell_dim[c]].level_simplices(j)},
                key=str,
            )
            self._classes[j] = reps

    def _union_closed(self, a, b):
        # closing under z-side operators keeps the relation simplicial
        work = []
        if self.uf.union(a, b):
            work.append((a, b))
        while work:
            x, y = work.pop()
            j = x[0]
            if j > 0:
                for i in range(j + 1):
                    fx, fy = self._face_key(j, i, x), self._face_key(j, i, y)
                    if self.uf.union(fx, fy):
                        work.append((fx, fy))
            if j < self.top:
                for i in range(j + 1):
                    dx, dy = self._degen_key(j, i, x), self._degen_key(j, i, y)
                    if self.uf.union(dx, dy):
                        work.append((dx, dy))

    def _face_key(self, j, i, key):
        (_, c, z) = key
        zs = self.Z.levels[self.K.cell_dim[c]]
        return (j - 1, c, zs.face_of_ref(z, i))

    def _degen_key(self, j, i, key):
        from .simplicial import degenerate_ref

        (_, c, z) = key
        return (j + 1, c, degenerate_ref(z, i))

    def elements(self, j):
        return self._classes[j]

    def face(self, j, i, x):
        return self.uf.find(self._face_key(j, i, x))

    def degen(self, j, i, x):
        return self.uf.find(self._degen_key(j, i, x))

    def key_str(self, j, x):
        (_, c, z) = x
        return f"{c}|{z}"

    def root(self, j, c, z):
        return self.uf.find((j, c, z))


@dataclass
class TensorProduct:
    """The condensed tensor product with its class bookkeeping."""

    space: FiniteSimplicialSet
    presentation: _TensorPresentation
    _locate: object
    representative: dict[str, tuple]  # result cell id -> (level, K-cell, Z-ref)

    def locate(self, j: int, c: str, z: SimplexRef) -> SimplexRef:
        """Normal form in the tensor product of the class of (c, z) at level j."""
        return self._locate(j, self.presentation.root(j, c, z))


def tensor_under_delta(K: FiniteSimplicialSet, Z: CosimplicialSSet, trunc: int,
                       name: str | None = None) -> TensorProduct:
    """Colimit of Z over the simplices of K, in normal form up to dim trunc.

    Raises TruncationError when Z is not stored deep enough or when the
    result has nondegenerate cells above trunc.
    """
    pres = _TensorPresentation(K, Z, trunc + 1)
    try:
        space, locate = condense(pres, trunc, name or f"{K.name}(x){Z.name}")
    except ValidationError as e:
        raise TruncationError(str(e)) from e
    reps = {}
    for j, classes in pres._classes.items():
        if j > trunc:
            continue
        for root in classes:
            ref = locate(j, root)
            if not ref.degens and ref.cell not in reps:
                reps[ref.cell] = (j, root[1], root[2])
    return TensorProduct(space, pres, locate, reps)


def tensor_functor_map(tp_src: TensorProduct, tp_dst: TensorProduct, g: SimplicialMap) -> SimplicialMap:
    """The map K (x) Z -> K' (x) Z induced by g: K -> K' (same Z)."""
    images = {}
    for cid, (j, c, z) in tp_src.representative.items():
        gref = g(SimplexRef(c))
        eta = _surjection_with_repeats(
            tp_src.presentation.K.cell_dim[c], set(gref.degens)
        )
        z_eta = tp_dst.presentation.Z.operator_to(
            eta, tp_src.presentation.K.cell_dim[c],
            tp_src.presentation.K.cell_dim[c] - len(gref.degens),
        )
        images[cid] = tp_dst.locate(j, gref.cell, z_eta(z))
    return SimplicialMap(tp_src.space, tp_dst.space, images)


# -- compatible families and the adjunction check ----------------------------


def compatible_families(K: FiniteSimplicialSet, Z: CosimplicialSSet, X: FiniteSimplicialSet,
                        pointed: bool = False) -> list[dict[str, SimplicialMap]]:
    """All systems {phi_c: Z[dim c] -> X} indexed by nondegenerate cells of K
    that are compatible with every elementary face.

    The compatibility constraint for d_i c = s_V c' is
    phi_c o Z(delta^i) = phi_{c'} o Z(eta_V); values on degenerate simplices
    of K are determined by these, so the finite system is complete.
    """
    if Z.trunc < K.dim:
        raise TruncationError("cosimplicial object not stored to the source dimension")
    if pointed:
        if not (K.pointed and X.pointed):
            raise ValidationError("pointed family enumeration needs pointed K and X")
        if len(K.cells_of_dim(0)) != 1:
            raise ValidationError("pointed mode accepts only reduced sources")
    order = [c for d in sorted(K.cells) for c in K.cells_of_dim(d)]
    hom_cache: dict[int, list[SimplicialMap]] = {}

    def homs(m: int) -> list[SimplicialMap]:
        if m not in hom_cache:
            hom_cache[m] = enumerate_maps(Z.levels[m], X)
        return hom_cache[m]

    constraints: dict[str, list[tuple[str, SimplicialMap, SimplicialMap]]] = {c: [] for c in order}
    for c in order:
        m = K.cell_dim[c]
        for i in range(m + 1) if m > 0 else ():
            fref = K.faces[c][i]
            eta = _surjection_with_repeats(m - 1, set(fref.degens))
            z_eta = Z.operator_to(eta, m - 1, m - 1 - len(fref.degens))
            z_dlt = Z.operator_to(coface_values(m, i), m - 1, m)
            constraints[c].append((fref.cell, z_dlt, z_eta))

    results: list[dict[str, SimplicialMap]] = []
    chosen: dict[str, SimplicialMap] = {}

    def extend(k: int):
        if k == len(order):
            results.append(dict(chosen))
            return
        c = order[k]
        for phi in homs(K.cell_dim[c]):
            if pointed and c == K.basepoint and phi.images.get(Z.levels[0].cells_of_dim(0)[0]) != SimplexRef(X.basepoint):
                continue
            ok = True
            for (c2, z_dlt, z_eta) in constraints[c]:
                if phi.compose(z_dlt) != chosen[c2].compose(z_eta):
                    ok = False
                    break
            if ok:
                chosen[c] = phi
                extend(k + 1)
                del chosen[c]

    extend(0)
    return results


@dataclass
class AdjunctionReport:
    left_count: int
    right_count: int
    bijection_ok: bool
    detail: str


def adjunction_check(K: FiniteSimplicialSet, Z: CosimplicialSSet, X: FiniteSimplicialSet,
                     trunc: int, pointed: bool = False) -> AdjunctionReport:
    """Verify that compatible families correspond bijectively to maps out of
    the tensor product.

    Families are enumerated on one side and simplicial maps K (x) Z -> X on
    the other; the explicit correspondence is constructed in both directions
    and checked to be mutually inverse.
    """
    tp = tensor_under_delta(K, Z, trunc)
    right = enumerate_maps(tp.space, X, pointed=pointed)
    fams = compatible_families(K, Z, X, pointed=pointed)

    def canon(h: SimplicialMap):
        return tuple(sorted(h.images.items()))

    built = []
    for fam in fams:
        images = {}
        for cid, (j, c, z) in tp.representative.items():
            images[cid] = fam[c](z)
        h = SimplicialMap(tp.space, X, images)
        h.validate()
        built.append(h)

    recovered = []
    for h in right:
        fam = {}
        for c in K.all_cells():
            m = K.cell_dim[c]
            Zm = Z.levels[m]
            images = {}
            for zc in Zm.all_cells():
                jz = Zm.cell_dim[zc]
                if jz > trunc:
                    raise TruncationError(
                        f"level-{m} piece has cells of dimension {jz} beyond the truncation {trunc}"
                    )
                images[zc] = h(tp.locate(jz, c, SimplexRef(zc)))
            fam[c] = SimplicialMap(Zm, X, images)
        recovered.append(fam)

    counts_ok = len(fams) == len(right)
    forward_ok = len({canon(h) for h in built}) == len(built) and {canon(h) for h in built} == {canon(h) for h in right}
    inv_ok = all(rec in fams for rec in recovered)
    detail = f"families={len(fams)} maps={len(right)} round_trip={'ok' if (forward_ok and inv_ok) else 'FAIL'}"
    return AdjunctionReport(len(fams), len(right), counts_ok and forward_ok and inv_ok, detail)
