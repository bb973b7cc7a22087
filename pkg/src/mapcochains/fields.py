"""Exact coefficient fields: the rationals and prime fields F_p.

All matrices in this library are numpy arrays of dtype=object whose entries
are `fractions.Fraction` (over Q) or plain python ints reduced into [0, p)
(over F_p).  Python integers are arbitrary precision, so no computation ever
overflows or rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """An exact coefficient field, either Q or F_p for a prime p.

    Attributes:
        kind: "Q" for the rationals, "Fp" for a prime field.
        p: the prime when kind == "Fp", else None.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValidationError("rational field takes no prime")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValidationError(f"modulus {self.p!r} is not prime")
        else:
            raise ValidationError(f"unknown field kind {self.kind!r}")

    # -- constructors --------------------------------------------------

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("Q")

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec("Fp", p)

    @staticmethod
    def parse(text: str) -> "FieldSpec":
        """Parse "Q" or "F<p>" (e.g. "F3", "F7")."""
        text = text.strip()
        if text in ("Q", "QQ"):
            return FieldSpec.rationals()
        if text.startswith("F"):
            try:
                return FieldSpec.prime(int(text[1:]))
            except ValueError:
                pass
        raise ValidationError(f"cannot parse field {text!r}")

    # -- scalar arithmetic ----------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def coerce(self, x):
        """Coerce an int, Fraction, or "a/b" string into a field element."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValidationError(f"denominator of {x} vanishes mod {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a):
        if self.kind == "Q":
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / a
        return pow(int(a), -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def of_int(self, n: int):
        return Fraction(n) if self.kind == "Q" else n % self.p

    def invertible_int(self, n: int) -> bool:
        """Whether the integer n is nonzero in the field."""
        if self.kind == "Q":
            return n != 0
        return n % self.p != 0

    # -- arrays ----------------------------------------------------------

    def array(self, rows) -> np.ndarray:
        """Build a 2-d dtype=object matrix with coerced entries."""
        rows = [[self.coerce(x) for x in row] for row in rows]
        if not rows:
            return np.zeros((0, 0), dtype=object)
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    def vector(self, entries) -> np.ndarray:
        out = np.empty(len(entries), dtype=object)
        out[:] = [self.coerce(x) for x in entries]
        return out

    def zeros(self, m: int, n: int | None = None) -> np.ndarray:
        if n is None:
            out = np.empty(m, dtype=object)
            out[:] = [self.zero] * m
            return out
        out = np.empty((m, n), dtype=object)
        out[:, :] = self.zero
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        """Reduce all entries mod p (no-op over Q)."""
        if self.kind == "Q":
            return a
        return np.vectorize(lambda x: x % self.p, otypes=[object])(a) if a.size else a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] != b.shape[0]:
            raise ValidationError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.size == 0 or b.size == 0:
            shape = (a.shape[0], b.shape[1]) if b.ndim == 2 else (a.shape[0],)
            return self.zeros(*shape) if len(shape) == 2 else self.zeros(shape[0])
        return self.reduce(a @ b)

    def is_zero_matrix(self, a: np.ndarray) -> bool:
        return all(x == 0 for x in a.flat)

    def format(self, a) -> str:
        return str(a)
