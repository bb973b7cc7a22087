"""Normalized column complexes of the mapping construction.

For a finite source K and a coefficient model, level p of the column object
is the cochain model of the mapping construction evaluated on the level set
K_p, with face maps induced by the faces of K.  Two backends realize this:

* tensor: the coefficient algebra A is free graded-commutative and level p
  is A tensored over K_p.  Normalization is structural: A splits as the unit
  line plus its augmentation ideal, so the quotient by degeneracy images
  keeps exactly the summands whose support is contained in no degeneracy
  image of K_{p-1}.  A support qualifies precisely when the degeneracy words
  of its members have empty intersection.

* simplicial: the coefficient is a finite simplicial target L and level p is
  the normalized cochain complex of the product of #K_p copies of L, with
  the quotient by degeneracy images computed by literal elimination.

Levels are truncated in the internal degree by a staircase bound
q <= q_base + p, which is exactly what totalization in degrees <= q_base - 1
consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import cochains, complexes, linalg
from .errors import HypothesisError, ResourceLimitError, ValidationError
from .fields import FieldSpec
from .gcalgebra import FreeGCAlgebra, Mono
from .simplicial import FiniteSimplicialSet, SimplexRef, SimplicialMap, degenerate_ref, power, reindex_map


@dataclass
class CoefficientModel:
    """Coefficient data for the mapping construction.

    backend "tensor" carries a free graded-commutative algebra; backend
    "simplicial" carries a finite simplicial target.  `connectivity` is the
    declared connectivity c: the tensor algebra must have no generators in
    degrees <= c, the simplicial target no nondegenerate cells in 1..c.
    """

    backend: str
    field: FieldSpec
    connectivity: int
    algebra: FreeGCAlgebra | None = None
    target: FiniteSimplicialSet | None = None
    name: str = "coefficients"

    def validate(self) -> None:
        if self.connectivity < 0:
            raise ValidationError("connectivity must be nonnegative")
        if self.backend == "tensor":
            if self.algebra is None:
                raise ValidationError("tensor backend needs an algebra")
            if not self.algebra.connectivity_at_least(self.connectivity):
                raise ValidationError(
                    f"algebra has generators in degrees <= {self.connectivity}"
                )
        elif self.backend == "simplicial":
            L = self.target
            if L is None:
                raise ValidationError("simplicial backend needs a target complex")
            if len(L.cells_of_dim(0)) != 1:
                raise ValidationError("simplicial target must have exactly one 0-cell")
            for d in range(1, self.connectivity + 1):
                if L.cells_of_dim(d):
                    raise ValidationError(
                        f"simplicial target has cells in dimension {d} <= connectivity"
                    )
        else:
            raise ValidationError(f"unknown backend {self.backend!r}")

    @property
    def model_dependent(self) -> bool:
        """Mod-p tensor coefficients are admitted but flagged: the tensor
        model is not certified to agree with literal cochains over F_p."""
        return self.backend == "tensor" and self.field.kind == "Fp"


class LevelTables:
    """Canonical level orderings of K with face/degeneracy index maps."""

    def __init__(self, K: FiniteSimplicialSet, pointed: bool = False, reverse_order: bool = False):
        self.K = K
        self.pointed = pointed
        if pointed and not K.pointed:
            raise ValidationError("pointed columns need a pointed source")
        self.reverse_order = reverse_order
        self._elems: dict[int, list[SimplexRef]] = {}
        self._pos: dict[int, dict[SimplexRef, int]] = {}
        self._face: dict[tuple[int, int], list[int]] = {}
        self._degen: dict[tuple[int, int], list[int]] = {}

    def elems(self, p: int) -> list[SimplexRef]:
        if p not in self._elems:
            refs = list(self.K.level_simplices(p))
            if self.reverse_order:
                refs = refs[::-1]
            self._elems[p] = refs
            self._pos[p] = {r: k for k, r in enumerate(refs)}
        return self._elems[p]

    def pos(self, p: int) -> dict[SimplexRef, int]:
        self.elems(p)
        return self._pos[p]

    def size(self, p: int) -> int:
        return len(self.elems(p))

    def face_index(self, p: int, i: int) -> list[int]:
        key = (p, i)
        if key not in self._face:
            tgt = self.pos(p - 1)
            self._face[key] = [tgt[self.K.face_of_ref(r, i)] for r in self.elems(p)]
        return self._face[key]

    def degen_index(self, p: int, j: int) -> list[int]:
        key = (p, j)
        if key not in self._degen:
            tgt = self.pos(p + 1)
            self._degen[key] = [tgt[degenerate_ref(r, j)] for r in self.elems(p)]
        return self._degen[key]

    def word_set(self, p: int, k: int) -> frozenset:
        return frozenset(self.elems(p)[k].degens)

    def coverage(self, p: int, k: int) -> frozenset:
        return frozenset(range(p)) - self.word_set(p, k)

    def basepoint_index(self, p: int) -> int | None:
        if not self.pointed:
            return None
        return self.pos(p)[self.K.basepoint_ref(p)]

    def auto_morphism_index(self, p: int, g: SimplicialMap) -> list[int]:
        """The permutation of level p induced by an automorphism of K."""
        tgt = self.pos(p)
        return [tgt[g(r)] for r in self.elems(p)]


# -- tensor backend -----------------------------------------------------------


TLabel = tuple[tuple[int, ...], tuple[Mono, ...]]  # (support positions, monomials)


class TensorColumns:
    """Normalized columns for a free graded-commutative coefficient algebra."""

    kind = "tensor"

    def __init__(self, K: FiniteSimplicialSet, coeff: CoefficientModel, p_max: int, q_base: int,
                 pointed: bool = False, reverse_order: bool = False, max_basis: int = 500_000):
        self.K = K
        self.coeff = coeff
        self.alg = coeff.algebra
        self.field = coeff.field
        self.p_max = p_max
        self.q_base = q_base
        self.pointed = pointed
        self.tables = LevelTables(K, pointed=pointed, reverse_order=reverse_order)
        self.max_basis = max_basis
        self._abar = self.alg.reduced_basis_by_degree(self.q_bound(p_max))
        self._abar_degrees = sorted(q for q, ms in self._abar.items() if ms)
        self._bases: dict[int, dict[int, list[TLabel]]] = {}
        self._index: dict[tuple[int, int], dict[TLabel, int]] = {}
        self._facemats: dict[tuple[int, int, int], np.ndarray] = {}
        self._deltamats: dict[tuple[int, int], np.ndarray] = {}
        self.normalized = False

    def q_bound(self, p: int) -> int:
        return self.q_base + p

    # -- basis enumeration ----------------------------------------------------

    def _admissible_supports(self, p: int):
        """All subsets of the level whose coverage is the full position set.

        An element covers the positions missing from its degeneracy word; a
        support is kept by normalization iff its members' words have empty
        intersection, i.e. the coverages cover every position.
        """
        t = self.tables
        n = t.size(p)
        bp = t.basepoint_index(p)
        idxs = [k for k in range(n) if k != bp]
        min_deg = self.alg.min_positive_degree
        cap = self.q_bound(p) // min_deg
        full = frozenset(range(p))
        cov = {k: t.coverage(p, k) for k in idxs}
        suffix = [frozenset()] * (len(idxs) + 1)
        for a in range(len(idxs) - 1, -1, -1):
            suffix[a] = suffix[a + 1] | cov[idxs[a]]
        out: list[tuple[int, ...]] = []

        def dfs(a: int, chosen: list[int], covered: frozenset):
            if covered == full:
                out.append(tuple(chosen))
                if len(out) > self.max_basis:
                    raise ResourceLimitError("support enumeration exceeds the basis cap")
            if a == len(idxs) or len(chosen) >= cap:
                return
            if not (covered | suffix[a]) >= full:
                return
            dfs(a + 1, chosen, covered)
            k = idxs[a]
            chosen.append(k)
            dfs(a + 1, chosen, covered | cov[k])
            chosen.pop()

        dfs(0, [], frozenset())
        return out

    def _build_level(self, p: int) -> None:
        if p in self._bases:
            return
        qb = self.q_bound(p)
        min_deg = self.alg.min_positive_degree
        by_q: dict[int, list[TLabel]] = {}
        for support in self._admissible_supports(p):
            k = len(support)
            if k * min_deg > qb:
                continue

            def assign(i: int, monos: list[Mono], deg: int):
                if i == k:
                    by_q.setdefault(deg, []).append((support, tuple(monos)))
                    return
                room = qb - deg - (k - i - 1) * min_deg
                for d in self._abar_degrees:
                    if d > room:
                        break
                    for m in self._abar[d]:
                        monos.append(m)
                        assign(i + 1, monos, deg + d)
                        monos.pop()

            assign(0, [], 0)
        for q in by_q:
            by_q[q].sort()
        self._bases[p] = by_q
        for q, labels in by_q.items():
            self._index[(p, q)] = {lab: i for i, lab in enumerate(labels)}

    def basis(self, p: int, q: int) -> list[TLabel]:
        self._build_level(p)
        return self._bases[p].get(q, [])

    def level_degrees(self, p: int) -> list[int]:
        self._build_level(p)
        return sorted(self._bases[p])

    def label_str(self, p: int, label: TLabel) -> str:
        support, monos = label
        elems = self.tables.elems(p)
        if not support:
            return f"p={p} 1"
        parts = [f"{elems[k]}:{self.alg.mono_str(m)}" for k, m in zip(support, monos)]
        return f"p={p} " + " ".join(parts)

    # -- raw vectors over the unnormalized tensor space -------------------------

    def raw_zero(self) -> dict:
        return {}

    def raw_add(self, acc: dict, term: dict, scalar) -> dict:
        f = self.field
        for lab, c in term.items():
            v = f.add(acc.get(lab, f.zero), f.mul(scalar, c))
            if v == 0:
                acc.pop(lab, None)
            else:
                acc[lab] = v
        return acc

    def include(self, p: int, q: int, coords: np.ndarray) -> dict:
        out = {}
        for i, lab in enumerate(self.basis(p, q)):
            if coords[i] != 0:
                out[lab] = coords[i]
        return out

    def admissible(self, p: int, label: TLabel) -> bool:
        t = self.tables
        covered = frozenset()
        for k in label[0]:
            covered |= t.coverage(p, k)
        return covered == frozenset(range(p))

    def project(self, p: int, q: int, raw: dict) -> np.ndarray:
        index = None
        out = None
        f = self.field
        basis = self.basis(p, q)
        index = self._index.get((p, q), {})
        out = f.zeros(len(basis))
        for lab, c in raw.items():
            if not self.admissible(p, lab):
                continue
            if lab not in index:
                raise ValidationError(f"admissible term outside the stored basis at {(p, q)}")
            out[index[lab]] = f.add(out[index[lab]], c)
        return out

    def _push(self, p_src: int, p_dst: int, index_map: list[int], label: TLabel):
        """Push a summand through the map induced by a level map of K.

        Fibers multiply in the target order (source order within a fiber);
        the Koszul sign is that of the sorting permutation on the odd-degree
        factors.  Returns (field sign, label) or None when a product dies.
        """
        support, monos = label
        alg = self.alg
        pairs = [(index_map[k], i) for i, k in enumerate(support)]
        order = sorted(range(len(pairs)), key=lambda i: (pairs[i][0], i))
        sign_exp = 0
        degs = [alg.mono_degree(m) for m in monos]
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                if order[a] > order[b]:
                    sign_exp += degs[order[a]] * degs[order[b]]
        bp = self.tables.basepoint_index(p_dst) if self.pointed else None
        new_support: list[int] = []
        new_monos: list[Mono] = []
        i = 0
        sign = (-1) ** (sign_exp % 2)
        while i < len(order):
            tgt = pairs[order[i]][0]
            mono = monos[order[i]]
            i += 1
            while i < len(order) and pairs[order[i]][0] == tgt:
                r = alg.mono_mul(mono, monos[order[i]])
                if r is None:
                    return None
                s, mono = r
                sign *= s
                i += 1
            if bp is not None and tgt == bp:
                return None  # augmentation kills positive-degree factors at the basepoint
            new_support.append(tgt)
            new_monos.append(mono)
        return self.field.of_int(sign), (tuple(new_support), tuple(new_monos))

    def face_apply(self, p: int, i: int, label: TLabel):
        return self._push(p, p - 1, self.tables.face_index(p, i), label)

    def degen_apply(self, p: int, j: int, label: TLabel):
        return self._push(p, p + 1, self.tables.degen_index(p, j), label)

    def degen_word(self, p: int, q: int, word, raw: dict) -> dict:
        f = self.field
        out = raw
        lev = p
        for j in word:
            nxt: dict = {}
            idx = self.tables.degen_index(lev, j)
            for lab, c in out.items():
                r = self._push(lev, lev + 1, idx, lab)
                if r is None:
                    continue
                s, lab2 = r
                v = f.add(nxt.get(lab2, f.zero), f.mul(s, c))
                if v == 0:
                    nxt.pop(lab2, None)
                else:
                    nxt[lab2] = v
            out = nxt
            lev += 1
        return out

    def mult(self, level: int, qa: int, qb: int, raw_a: dict, raw_b: dict) -> dict:
        """Componentwise product in the level tensor algebra.

        The interleaving sign moves each factor of the second argument past
        the later-position factors of the first.
        """
        f = self.field
        alg = self.alg
        out: dict = {}
        for (sa, ma), ca in raw_a.items():
            dega = {k: alg.mono_degree(m) for k, m in zip(sa, ma)}
            for (sb, mb), cb in raw_b.items():
                sign_exp = 0
                for kb, m2 in zip(sb, mb):
                    d2 = alg.mono_degree(m2)
                    if d2 % 2 == 1:
                        sign_exp += sum(d for k, d in dega.items() if k > kb and d % 2 == 1)
                merged: dict[int, Mono] = dict(zip(sa, ma))
                sign = (-1) ** (sign_exp % 2)
                dead = False
                for kb, m2 in zip(sb, mb):
                    if kb in merged:
                        r = alg.mono_mul(merged[kb], m2)
                        if r is None:
                            dead = True
                            break
                        s, mm = r
                        sign *= s
                        merged[kb] = mm
                    else:
                        merged[kb] = m2
                if dead:
                    continue
                support = tuple(sorted(merged))
                lab = (support, tuple(merged[k] for k in support))
                c = f.mul(f.mul(ca, cb), f.of_int(sign))
                v = f.add(out.get(lab, f.zero), c)
                if v == 0:
                    out.pop(lab, None)
                else:
                    out[lab] = v
        return out

    # -- matrices ---------------------------------------------------------------

    def face_matrix(self, p: int, i: int, q: int) -> np.ndarray:
        key = (p, i, q)
        if key not in self._facemats:
            f = self.field
            src = self.basis(p, q)
            tgt_index = None
            self._build_level(p - 1)
            tgt_index = self._index.get((p - 1, q), {})
            mat = f.zeros(len(self.basis(p - 1, q)), len(src))
            for col, lab in enumerate(src):
                r = self.face_apply(p, i, lab)
                if r is None:
                    continue
                s, lab2 = r
                if not self.admissible(p - 1, lab2):
                    continue
                mat[tgt_index[lab2], col] = f.add(mat[tgt_index[lab2], col], s)
            self._facemats[key] = mat
        return self._facemats[key]

    def delta_matrix(self, p: int, q: int) -> np.ndarray:
        key = (p, q)
        if key not in self._deltamats:
            f = self.field
            src = self.basis(p, q)
            tgt_index = self._index.get((p, q + 1), {})
            mat = f.zeros(len(self.basis(p, q + 1)), len(src))
            for col, (support, monos) in enumerate(src):
                prefix = 0
                for k in range(len(support)):
                    dm = self.alg.diff_mono(monos[k])
                    if dm:
                        sgn = f.of_int((-1) ** (prefix % 2))
                        for m2, c in dm.items():
                            lab2 = (support, monos[:k] + (m2,) + monos[k + 1:])
                            row = tgt_index[lab2]
                            mat[row, col] = f.add(mat[row, col], f.mul(sgn, c))
                    prefix += self.alg.mono_degree(monos[k])
            self._deltamats[key] = mat
        return self._deltamats[key]

    def action_matrix(self, p: int, q: int, g: SimplicialMap) -> np.ndarray:
        """The permutation action of an automorphism of K on the level basis."""
        f = self.field
        idx_map = self.tables.auto_morphism_index(p, g)
        src = self.basis(p, q)
        index = self._index.get((p, q), {})
        mat = f.zeros(len(src), len(src))
        for col, lab in enumerate(src):
            r = self._push(p, p, idx_map, lab)
            if r is None:
                raise ValidationError("automorphism push produced a zero term")
            s, lab2 = r
            mat[index[lab2], col] = s
        return mat

    def unit_coords(self):
        """The unit class: the empty-support label at level 0, degree 0."""
        basis = self.basis(0, 0)
        f = self.field
        out = f.zeros(len(basis))
        lab = ((), ())
        out[self._index[(0, 0)][lab]] = f.one
        return (0, 0, out)


# -- simplicial backend --------------------------------------------------------


class SimplicialColumns:
    """Normalized columns for a finite simplicial coefficient target.

    Level p is the normalized cochain complex of the product of #K_p copies
    of the target, normalized in the simplicial direction by literal
    elimination against the degeneracy-induced images.
    """

    kind = "simplicial"

    def __init__(self, K: FiniteSimplicialSet, coeff: CoefficientModel, p_max: int, q_base: int,
                 pointed: bool = False, reverse_order: bool = False, max_cells: int = 200_000):
        if pointed:
            raise ValidationError("pointed mode is supported on the tensor backend only")
        self.K = K
        self.coeff = coeff
        self.L = coeff.target
        self.field = coeff.field
        self.p_max = p_max
        self.q_base = q_base
        self.tables = LevelTables(K, pointed=False, reverse_order=reverse_order)
        self.max_cells = max_cells
        self._powers: dict[int, FiniteSimplicialSet] = {}
        self._vface: dict[tuple[int, int, int], np.ndarray] = {}
        self._vdegen: dict[tuple[int, int, int], np.ndarray] = {}
        self._quot: dict[tuple[int, int], complexes.QuotientData] = {}
        self._facemats: dict[tuple[int, int, int], np.ndarray] = {}
        self._deltamats: dict[tuple[int, int], np.ndarray] = {}
        self.normalized = False

    def q_bound(self, p: int) -> int:
        return self.q_base + p

    def power_at(self, p: int) -> FiniteSimplicialSet:
        if p not in self._powers:
            m = self.tables.size(p)
            self._powers[p] = power([self.L] * m, self.q_bound(p),
                                    name=f"L^{m}@{p}", max_cells=self.max_cells)
        return self._powers[p]

    def v_dim(self, p: int, q: int) -> int:
        return len(self.power_at(p).cells_of_dim(q))

    def _chain_transpose(self, f: SimplicialMap, q: int) -> np.ndarray:
        return f.chain_matrix(q, self.field).T.copy()

    def v_face(self, p: int, i: int, q: int) -> np.ndarray:
        """C^q of the coface: cochains at level p map to level p - 1."""
        key = (p, i, q)
        if key not in self._vface:
            fidx = self.tables.face_index(p, i)
            fmap = reindex_map(self.power_at(p - 1), self.power_at(p), fidx)
            self._vface[key] = self._chain_transpose(fmap, q)
        return self._vface[key]

    def v_degen(self, p: int, j: int, q: int) -> np.ndarray:
        """C^q of the codegeneracy: cochains at level p map to level p + 1."""
        key = (p, j, q)
        if key not in self._vdegen:
            didx = self.tables.degen_index(p, j)
            dmap = reindex_map(self.power_at(p + 1), self.power_at(p), didx)
            self._vdegen[key] = self._chain_transpose(dmap, q)
        return self._vdegen[key]

    def v_delta(self, p: int, q: int) -> np.ndarray:
        return cochains.coboundary_matrix(self.power_at(p), q, self.field)

    def quotient(self, p: int, q: int) -> complexes.QuotientData:
        key = (p, q)
        if key not in self._quot:
            if p == 0:
                n = self.v_dim(0, q)
                self._quot[key] = complexes.QuotientData(list(range(n)), self.field.eye(n), self.field.eye(n))
            else:
                images = [self.v_degen(p - 1, j, q) for j in range(p)]
                self._quot[key] = complexes.normalize_quotient(images, self.v_dim(p, q), self.field)
        return self._quot[key]

    def basis(self, p: int, q: int) -> list:
        if q > self.q_bound(p):
            return []
        qd = self.quotient(p, q)
        cells = self.power_at(p).cells_of_dim(q)
        return [(p, q, cells[k]) for k in qd.keep]

    def level_degrees(self, p: int) -> list[int]:
        return [q for q in range(self.q_bound(p) + 1) if self.basis(p, q)]

    def label_str(self, p: int, label) -> str:
        return f"p={p} {label[2]}"

    # -- raw vectors over the cochain space ---------------------------------

    def raw_zero(self):
        return None

    def raw_add(self, acc, term, scalar):
        f = self.field
        scaled = np.array([f.mul(scalar, x) for x in term], dtype=object) if term is not None else None
        if acc is None:
            return scaled
        if scaled is None:
            return acc
        return f.reduce(acc + scaled)

    def include(self, p: int, q: int, coords: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.quotient(p, q).section, coords)

    def project(self, p: int, q: int, raw) -> np.ndarray:
        if raw is None:
            return self.field.zeros(len(self.basis(p, q)))
        return self.field.matmul(self.quotient(p, q).projection, raw)

    def degen_word(self, p: int, q: int, word, raw):
        out = raw
        lev = p
        for j in word:
            out = self.field.matmul(self.v_degen(lev, j, q), out)
            lev += 1
        return out

    def mult(self, level: int, qa: int, qb: int, raw_a, raw_b):
        return cochains.cup_product(self.power_at(level), qa, qb, raw_a, raw_b, self.field)

    # -- matrices -------------------------------------------------------------

    def face_matrix(self, p: int, i: int, q: int) -> np.ndarray:
        key = (p, i, q)
        if key not in self._facemats:
            f = self.field
            qd_src = self.quotient(p, q)
            qd_tgt = self.quotient(p - 1, q)
            m = f.matmul(qd_tgt.projection, f.matmul(self.v_face(p, i, q), qd_src.section))
            self._facemats[key] = m
        return self._facemats[key]

    def delta_matrix(self, p: int, q: int) -> np.ndarray:
        key = (p, q)
        if key not in self._deltamats:
            f = self.field
            qd_src = self.quotient(p, q)
            qd_tgt = self.quotient(p, q + 1)
            self._deltamats[key] = f.matmul(qd_tgt.projection, f.matmul(self.v_delta(p, q), qd_src.section))
        return self._deltamats[key]

    def action_matrix(self, p: int, q: int, g: SimplicialMap) -> np.ndarray:
        f = self.field
        idx_map = self.tables.auto_morphism_index(p, g)
        amap = reindex_map(self.power_at(p), self.power_at(p), idx_map)
        vmat = self._chain_transpose(amap, q)
        qd = self.quotient(p, q)
        return f.matmul(qd.projection, f.matmul(vmat, qd.section))

    def unit_coords(self):
        basis = self.basis(0, 0)
        f = self.field
        raw = cochains.cup_unit(self.power_at(0), f)
        return (0, 0, self.project(0, 0, raw))


def build_columns(K: FiniteSimplicialSet, coeff: CoefficientModel, p_max: int, q_base: int,
                  pointed: bool = False, reverse_order: bool = False, max_basis: int = 500_000):
    """Construct the column object for the requested backend.

    Level p stores internal degrees q <= q_base + p; totalization through
    total degree q_base - 1 stays inside this staircase.
    """
    coeff.validate()
    if coeff.backend == "tensor":
        return TensorColumns(K, coeff, p_max, q_base, pointed=pointed,
                             reverse_order=reverse_order, max_basis=max_basis)
    return SimplicialColumns(K, coeff, p_max, q_base, pointed=pointed,
                             reverse_order=reverse_order, max_cells=max_basis)


def structural_normalize(columns):
    """Finalize the normalized bases of every stored level.

    The tensor backend is normalized structurally during enumeration (the
    admissibility condition on supports); the simplicial backend runs its
    literal elimination quotients here.  Idempotent.
    """
    for p in range(columns.p_max + 1):
        columns.level_degrees(p)
    columns.normalized = True
    return columns


def unnormalized_tensor_dimensions(K: FiniteSimplicialSet, alg: FreeGCAlgebra, field: FieldSpec,
                                   p: int, q_max: int) -> dict[int, int]:
    """Dimensions of the literal degeneracy-quotient of the full tensor level.

    Materializes the whole of the level tensor space (exponential in #K_p;
    test-scale inputs only) and eliminates the degeneracy images, giving an
    independent check of the structural normalization.
    """
    full = alg.basis_by_degree(q_max)

    def level_basis(m: int) -> dict[int, list[tuple[Mono, ...]]]:
        out: dict[int, list] = {}
        for combo in itertools.product(*([sum(full.values(), [])] * m)):
            q = sum(alg.mono_degree(x) for x in combo)
            if q <= q_max:
                out.setdefault(q, []).append(tuple(combo))
        return out

    n_p = len(K.level_simplices(p))
    n_prev = len(K.level_simplices(p - 1)) if p >= 1 else 0
    basis_p = level_basis(n_p)
    if p == 0:
        return {q: len(v) for q, v in basis_p.items()}
    basis_prev = level_basis(n_prev)
    pos_prev = {lab: i for q, labs in basis_prev.items() for i, lab in enumerate(labs)}
    tables = LevelTables(K)
    out: dict[int, int] = {}
    for q, labs in basis_p.items():
        index = {lab: i for i, lab in enumerate(labs)}
        prev = basis_prev.get(q, [])
        images = []
        for j in range(p):
            idx = tables.degen_index(p - 1, j)
            mat = field.zeros(len(labs), len(prev))
            for col, lab in enumerate(prev):
                # push a full tensor through the injective degeneracy
                new = [UNIT_SENTINEL] * n_p
                sign = 1
                order_positions = []
                for k, m in enumerate(lab):
                    order_positions.append((idx[k], k, m))
                order_positions.sort(key=lambda t: (t[0], t[1]))
                degs = [alg.mono_degree(m) for m in lab]
                for a in range(len(lab)):
                    for b in range(a + 1, len(lab)):
                        if idx[a] > idx[b]:
                            sign *= (-1) ** (degs[a] * degs[b])
                for tgt, _, m in order_positions:
                    new[tgt] = m
                newlab = tuple(x if x is not UNIT_SENTINEL else () for x in new)
                mat[index[newlab], col] = field.of_int(sign)
            images.append(mat)
        qd = complexes.normalize_quotient(images, len(labs), field)
        out[q] = len(qd.keep)
    return out


UNIT_SENTINEL = object()
