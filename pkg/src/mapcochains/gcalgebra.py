"""Free graded-commutative cochain algebras with augmentation.

Monomials are canonical: tuples of (generator index, exponent) sorted by
index, with odd generators capped at exponent one.  Products reorder factors
into canonical form and pick up the Koszul sign; the differential is given on
generators and extended by the graded Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .fields import FieldSpec

Mono = tuple[tuple[int, int], ...]

UNIT: Mono = ()


class FreeGCAlgebra:
    """A free graded-commutative algebra over a field with differential.

    Args:
        field: coefficient field.
        generators: list of (name, positive degree).
        differential: maps a generator name to its image, given as a list of
            (coefficient, [(name, exponent), ...]) terms; omitted names have
            zero differential.
    """

    def __init__(self, field: FieldSpec, generators: list[tuple[str, int]], differential: dict | None = None):
        self.field = field
        if not generators and generators != []:
            raise ValidationError("generator list required")
        self.names = [n for n, _ in generators]
        self.degrees = [d for _, d in generators]
        if len(set(self.names)) != len(self.names):
            raise ValidationError("duplicate generator names")
        if any(d <= 0 for d in self.degrees):
            raise ValidationError("generator degrees must be positive")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.d_gen: dict[int, dict[Mono, object]] = {}
        for name, terms in (differential or {}).items():
            if name not in self.index:
                raise ValidationError(f"differential given for unknown generator {name!r}")
            poly: dict[Mono, object] = {}
            for coeff, mono_spec in terms:
                mono = self.mono_from_spec(mono_spec)
                c = field.coerce(coeff)
                if c != 0:
                    poly[mono] = field.add(poly.get(mono, field.zero), c)
            poly = {m: c for m, c in poly.items() if c != 0}
            if poly:
                self.d_gen[self.index[name]] = poly
        self._basis_cache: dict[int, dict[int, list[Mono]]] = {}
        self.validate()

    # -- monomials ---------------------------------------------------------

    def mono_from_spec(self, spec) -> Mono:
        pairs = []
        for name, exp in spec:
            if name not in self.index:
                raise ValidationError(f"unknown generator {name!r}")
            pairs.append((self.index[name], int(exp)))
        pairs.sort()
        for (i, e) in pairs:
            if e < 1 or (self.degrees[i] % 2 == 1 and e > 1):
                raise ValidationError(f"bad exponent {e} on generator {self.names[i]!r}")
        if len({i for i, _ in pairs}) != len(pairs):
            raise ValidationError("repeated generator in monomial spec")
        return tuple(pairs)

    def mono_degree(self, mono: Mono) -> int:
        return sum(self.degrees[i] * e for i, e in mono)

    def mono_str(self, mono: Mono) -> str:
        if not mono:
            return "1"
        return "*".join(self.names[i] + (f"^{e}" if e > 1 else "") for i, e in mono)

    def mono_mul(self, m1: Mono, m2: Mono):
        """Product of canonical monomials.

        Returns (sign, mono) or None when an odd generator squares to zero.
        The sign moves each m2 factor left past the m1 factors of larger
        generator index.
        """
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        sign_exp = 0
        for i, e2 in m2:
            di = self.degrees[i]
            if di % 2 == 0:
                continue
            crossed = sum(e1 * self.degrees[j] for j, e1 in m1 if j > i and self.degrees[j] % 2 == 1)
            sign_exp += e2 * crossed
        merged: dict[int, int] = {}
        for i, e in m1:
            merged[i] = merged.get(i, 0) + e
        for i, e in m2:
            merged[i] = merged.get(i, 0) + e
        for i, e in merged.items():
            if self.degrees[i] % 2 == 1 and e > 1:
                return None
        mono = tuple(sorted(merged.items()))
        return (-1) ** (sign_exp % 2), mono

    # -- polynomials ---------------------------------------------------------

    def poly_add(self, a: dict, b: dict, scale=None) -> dict:
        f = self.field
        out = dict(a)
        for m, c in b.items():
            cc = f.mul(c, scale) if scale is not None else c
            s = f.add(out.get(m, f.zero), cc)
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return out

    def poly_mul_mono(self, mono: Mono, poly: dict, side_left: bool = True) -> dict:
        f = self.field
        out: dict[Mono, object] = {}
        for m, c in poly.items():
            r = self.mono_mul(mono, m) if side_left else self.mono_mul(m, mono)
            if r is None:
                continue
            sign, mm = r
            cc = f.mul(c, f.of_int(sign))
            s = f.add(out.get(mm, f.zero), cc)
            if s == 0:
                out.pop(mm, None)
            else:
                out[mm] = s
        return out

    def diff_mono(self, mono: Mono) -> dict:
        """Leibniz extension of the generator differential to a monomial."""
        f = self.field
        out: dict[Mono, object] = {}
        prefix_deg = 0
        for j, (i, e) in enumerate(mono):
            dg = self.d_gen.get(i)
            if dg:
                rest = mono[:j] + ((i, e - 1),) if e > 1 else mono[:j]
                rest = tuple(p for p in rest if p[1] > 0)
                suffix = mono[j + 1:]
                coeff = f.of_int(e if e > 1 else 1)
                sign = f.of_int((-1) ** (prefix_deg % 2))
                term = self.poly_mul_mono(rest, dg, side_left=True)
                term2: dict[Mono, object] = {}
                for m, c in term.items():
                    r = self.mono_mul(m, suffix)
                    if r is None:
                        continue
                    s2, mm = r
                    cc = f.mul(c, f.of_int(s2))
                    acc = f.add(term2.get(mm, f.zero), cc)
                    if acc == 0:
                        term2.pop(mm, None)
                    else:
                        term2[mm] = acc
                out = self.poly_add(out, term2, scale=f.mul(coeff, sign))
            prefix_deg += self.degrees[i] * e
        return out

    def diff_poly(self, poly: dict) -> dict:
        out: dict[Mono, object] = {}
        for m, c in poly.items():
            out = self.poly_add(out, self.diff_mono(m), scale=c)
        return out

    # -- bases and validation --------------------------------------------------

    def basis_by_degree(self, max_q: int) -> dict[int, list[Mono]]:
        """Monomial basis in each degree <= max_q (the unit sits in degree 0)."""
        if max_q in self._basis_cache:
            return self._basis_cache[max_q]
        out: dict[int, list[Mono]] = {q: [] for q in range(max_q + 1)}

        def extend(i: int, mono: list, deg: int):
            if deg <= max_q:
                out[deg].append(tuple(mono))
            if i == len(self.names) or deg >= max_q:
                return
            extend(i + 1, mono, deg)
            d = self.degrees[i]
            cap = 1 if d % 2 == 1 else (max_q - deg) // d
            for e in range(1, cap + 1):
                if deg + e * d <= max_q:
                    extend(i + 1, mono + [(i, e)], deg + e * d)

        extend(0, [], 0)
        for q in out:
            out[q].sort()
        self._basis_cache[max_q] = out
        return out

    def reduced_basis_by_degree(self, max_q: int) -> dict[int, list[Mono]]:
        """Basis of the augmentation ideal: positive-degree monomials."""
        full = self.basis_by_degree(max_q)
        return {q: ms for q, ms in full.items() if q >= 1}

    @property
    def min_positive_degree(self) -> int:
        return min(self.degrees) if self.degrees else 10 ** 9

    def connectivity_at_least(self, c: int) -> bool:
        """The augmentation ideal vanishes in degrees <= c."""
        return self.min_positive_degree >= c + 1

    def validate(self) -> None:
        for i, poly in self.d_gen.items():
            want = self.degrees[i] + 1
            for m in poly:
                if self.mono_degree(m) != want:
                    raise ValidationError(
                        f"differential of {self.names[i]!r} is not homogeneous of degree {want}"
                    )
        for i, poly in self.d_gen.items():
            if self.diff_poly(poly):
                raise ValidationError(f"differential does not square to zero on {self.names[i]!r}")
