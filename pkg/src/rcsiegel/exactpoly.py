"""Sparse multivariate polynomials with exact rational coefficients.

Variables are entries of two symmetric matrices ``R`` and ``R'`` plus
auxiliary scalars ``u_i``.  A symmetric entry ``R[i,j]`` and ``R[j,i]`` is a
single variable, always stored with ``row <= col``; differentiating with
respect to it differentiates that one variable once.

Polynomials are immutable; all arithmetic returns new objects in canonical
form (no zero coefficients, monomials as sorted tuples).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Tuple, Union

SLOT_R = 0
SLOT_RP = 1
SLOT_U = 2

_SLOT_NAMES = {SLOT_R: "R", SLOT_RP: "Rp", SLOT_U: "u"}
_SLOT_CODES = {v: k for k, v in _SLOT_NAMES.items()}


class VarId(NamedTuple):
    slot: int
    row: int
    col: int

    def __str__(self) -> str:
        if self.slot == SLOT_U:
            return f"u[{self.row}]"
        return f"{_SLOT_NAMES[self.slot]}[{self.row},{self.col}]"


def matvar(slot: int, i: int, j: int) -> VarId:
    """Variable for the symmetric entry (i, j) of the ``R`` or ``R'`` matrix."""
    if i < 1 or j < 1:
        raise ValueError(f"matrix indices start at 1, got ({i}, {j})")
    return VarId(slot, min(i, j), max(i, j))


def R(i: int, j: int) -> VarId:
    return matvar(SLOT_R, i, j)


def Rp(i: int, j: int) -> VarId:
    return matvar(SLOT_RP, i, j)


def U(i: int) -> VarId:
    if i < 1:
        raise ValueError(f"u index starts at 1, got {i}")
    return VarId(SLOT_U, i, 0)


Monomial = Tuple[Tuple[VarId, int], ...]
Scalar = Union[int, Fraction]

_ONE: Monomial = ()


def _norm(c: Scalar) -> Scalar:
    # ints are much cheaper than Fractions in the inner loops
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


_SENTINEL = VarId(99, 0, 0)


def _grlex_key(m: Monomial):
    # descending graded lex: higher degree first, then larger exponent on the
    # earliest variable first
    return (-mono_degree(m), [(v, -e) for v, e in m] + [(_SENTINEL, 0)])


class Poly:
    """Immutable sparse polynomial ``{monomial: coefficient}``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _norm(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Scalar]) -> "Poly":
        # caller guarantees canonical form
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({_ONE: c}) if c else cls()

    @classmethod
    def var(cls, v: VarId) -> "Poly":
        return cls._raw({((v, 1),): 1})

    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, slot: int) -> set:
        """Set of degrees in the variables of ``slot`` over all terms."""
        return {sum(e for v, e in m if v.slot == slot) for m in self._terms}

    def constant_term(self) -> Scalar:
        return self._terms.get(_ONE, 0)

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        if not c:
            return Poly()
        return Poly._raw({m: _norm(v * c) for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, Scalar] = {}
        get = out.get
        bitems = list(b.items())
        for ma, ca in a.items():
            for mb, cb in bitems:
                m = mono_mul(ma, mb)
                out[m] = get(m, 0) + ca * cb
        return Poly({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus and substitution -------------------------------------------

    def partial(self, v: VarId) -> "Poly":
        out: Dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            for idx, (w, e) in enumerate(m):
                if w == v:
                    if e == 1:
                        nm = m[:idx] + m[idx + 1:]
                    else:
                        nm = m[:idx] + ((w, e - 1),) + m[idx + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return Poly({m: c for m, c in out.items() if c})

    def substitute(self, bindings: Mapping[VarId, "Poly | Scalar"]) -> "Poly":
        """Simultaneously replace variables by polynomials (unbound ones stay)."""
        binds = {v: (p if isinstance(p, Poly) else Poly.const(p)) for v, p in bindings.items()}
        powers: Dict[Tuple[VarId, int], Poly] = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = binds[v] ** e
            return powers[key]

        acc: Dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            kept = tuple((v, e) for v, e in m if v not in binds)
            factor = Poly._raw({kept: c})
            for v, e in m:
                if v in binds:
                    factor = factor * power(v, e)
                    if not factor:
                        break
            for fm, fc in factor._terms.items():
                acc[fm] = acc.get(fm, 0) + fc
        return Poly({m: c for m, c in acc.items() if c})

    def evaluate(self, point: Mapping[VarId, Scalar]) -> Fraction:
        total = Fraction(0)
        cache: Dict[Tuple[VarId, int], Scalar] = {}
        for m, c in self._terms.items():
            val = Fraction(c)
            for v, e in m:
                if v not in point:
                    raise KeyError(f"unbound variable {v}")
                key = (v, e)
                if key not in cache:
                    cache[key] = Fraction(point[v]) ** e
                val *= cache[key]
            total += val
        return total

    def collect(self, slot: int) -> Dict[Monomial, "Poly"]:
        """Split by the monomial in the variables of ``slot``.

        Returns ``{monomial in slot variables: coefficient polynomial}``.
        """
        out: Dict[Monomial, Dict[Monomial, Scalar]] = {}
        for m, c in self._terms.items():
            key = tuple((v, e) for v, e in m if v.slot == slot)
            rest = tuple((v, e) for v, e in m if v.slot != slot)
            bucket = out.setdefault(key, {})
            bucket[rest] = c
        return {k: Poly._raw(v) for k, v in out.items()}

    # text form -------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: _grlex_key(mc[0]))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            c = Fraction(c)
            factors = [f"{c.numerator}/{c.denominator}"]
            for v, e in m:
                factors.append(str(v) if e == 1 else f"{v}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "Poly":
        text = text.strip()
        if text == "0":
            return cls()
        terms: Dict[Monomial, Scalar] = {}
        for part in text.split(" + "):
            coeff_s, *factors = part.split("*")
            coeff = Fraction(coeff_s)
            mono: Dict[VarId, int] = {}
            for f in factors:
                mt = _FACTOR_RE.fullmatch(f)
                if mt is None:
                    raise ValueError(f"cannot parse factor {f!r}")
                name, a, b, e = mt.groups()
                if name == "u":
                    if b is not None:
                        raise ValueError(f"u takes one index: {f!r}")
                    v = U(int(a))
                else:
                    if b is None:
                        raise ValueError(f"{name} takes two indices: {f!r}")
                    v = matvar(_SLOT_CODES[name], int(a), int(b))
                mono[v] = mono.get(v, 0) + (int(e) if e else 1)
            key = tuple(sorted(mono.items()))
            terms[key] = terms.get(key, 0) + coeff
        return cls(terms)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


_FACTOR_RE = re.compile(r"(Rp|R|u)\[(\d+)(?:,(\d+))?\](?:\^(\d+))?")


# functional spellings ---------------------------------------------------------

def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def partial(p: Poly, v: VarId) -> Poly:
    return p.partial(v)


def substitute(p: Poly, bindings: Mapping[VarId, Poly | Scalar]) -> Poly:
    return p.substitute(bindings)


def evaluate(p: Poly, point: Mapping[VarId, Scalar]) -> Fraction:
    return p.evaluate(point)


def poly_sum(polys: Iterable[Poly]) -> Poly:
    acc: Dict[Monomial, Scalar] = {}
    for p in polys:
        for m, c in p.items():
            acc[m] = acc.get(m, 0) + c
    return Poly({m: c for m, c in acc.items() if c})


def sym_matrix(slot: int, n: int):
    """n x n nested list of variable polynomials for a symmetric matrix."""
    return [[Poly.var(matvar(slot, i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]


def congruence_bindings(slot: int, A) -> Dict[VarId, Poly]:
    """Bindings realising ``X -> A^T X A`` for the symmetric matrix in ``slot``."""
    n = len(A)
    X = sym_matrix(slot, n)
    out = {}
    for i in range(n):
        for j in range(i, n):
            entry = Poly()
            for a in range(n):
                if not A[a][i]:
                    continue
                for b in range(n):
                    if A[b][j]:
                        entry = entry + X[a][b] * (Fraction(A[a][i]) * A[b][j])
            out[matvar(slot, i + 1, j + 1)] = entry
    return out
