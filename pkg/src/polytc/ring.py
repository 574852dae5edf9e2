"""Graded commutative ring generated by R, V_1..V_{n-1} in degree 2.

Degrees here are counted in units of generators (d), so the cohomological
degree is 2d. Normal monomials are ``R^a * V_S`` with ``S`` squarefree: the
rule ``V_i^2 = R*V_i`` collapses every higher power. Supports are bitmasks
with bit ``i-1`` standing for ``V_i``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .intmat import SmithForm, hermite_normal_form, in_row_lattice, smith_normal_form


class RingInputError(ValueError):
    pass


class PresentationIncomplete(ValueError):
    """A degree was requested beyond the presentation's asserted range."""


class TopClassError(ValueError):
    """The top graded piece is not infinite cyclic."""


def bits(mask: int) -> tuple[int, ...]:
    """1-based indices of the set bits of ``mask``."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if i < 1:
            raise RingInputError(f"index {i} out of range")
        m |= 1 << (i - 1)
    return m


class Monomial(NamedTuple):
    r_exp: int
    support: int

    @property
    def degree(self) -> int:
        return self.r_exp + self.support.bit_count()

    @property
    def indices(self) -> tuple[int, ...]:
        return bits(self.support)

    def sort_key(self):
        return (self.degree, self.support.bit_count(), self.indices, self.r_exp)

    def __mul__(self, other: "Monomial") -> "Monomial":
        # V_i^2 = R V_i: each shared index trades one V for one R
        shared = (self.support & other.support).bit_count()
        return Monomial(self.r_exp + other.r_exp + shared, self.support | other.support)

    def __str__(self) -> str:
        parts = []
        if self.r_exp == 1:
            parts.append("R")
        elif self.r_exp > 1:
            parts.append(f"R^{self.r_exp}")
        parts.extend(f"V{i}" for i in self.indices)
        return "*".join(parts) or "1"


ONE = Monomial(0, 0)


def monomial(r_exp: int = 0, support: Iterable[int] = ()) -> Monomial:
    return Monomial(r_exp, mask_of(support))


class Polynomial:
    """Integer combination of normal monomials. Immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean: dict[Monomial, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for m, c in items:
                if c:
                    c = clean.get(m, 0) + c
                    if c:
                        clean[m] = c
                    else:
                        clean.pop(m, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def from_monomial(cls, m: Monomial, coef: int = 1) -> "Polynomial":
        return cls({m: coef})

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({ONE: c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, k: int) -> "Polynomial":
        return Polynomial({m: k * c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        # free normalized algebra, no annihilators
        return multiply(self, other, None)

    def degrees(self) -> set[int]:
        return {m.degree for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise RingInputError(f"inhomogeneous polynomial {self}")
        return ds.pop()

    def max_index(self) -> int:
        return max((m.support.bit_length() for m in self.terms), default=0)

    def sorted_terms(self, descending: bool = True) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: mc[0].sort_key(), reverse=descending)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if m == ONE:
                body = str(a)
            elif a == 1:
                body = str(m)
            else:
                body = f"{a}*{m}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


_GEN = re.compile(r"^(R|V(\d+))$")


def normalize(word, pres=None) -> Polynomial:
    """Normal form of a product of generators.

    ``word`` is a sequence of ``(symbol, exponent)`` pairs (``"R"``,
    ``"V3"``) or bare symbols. With ``pres`` given, a support containing an
    annihilated set reduces the result to 0.
    """
    r = 0
    vexp: dict[int, int] = {}
    for item in word:
        sym, e = (item, 1) if isinstance(item, str) else item
        if e < 0:
            raise RingInputError(f"negative exponent {e} on {sym}")
        mt = _GEN.match(sym.strip())
        if not mt:
            raise RingInputError(f"unknown generator {sym!r}")
        if mt.group(2) is None:
            r += e
        else:
            i = int(mt.group(2))
            if i < 1:
                raise RingInputError(f"unknown generator {sym!r}")
            vexp[i] = vexp.get(i, 0) + e
    support = 0
    for i, e in vexp.items():
        if e:
            support |= 1 << (i - 1)
            r += e - 1
    m = Monomial(r, support)
    if pres is not None and pres.kills(m):
        return Polynomial()
    return Polynomial.from_monomial(m)


def multiply(p: Polynomial, q: Polynomial, pres=None) -> Polynomial:
    """Product with normalization and (if ``pres`` given) annihilator reduction.

    ``pres`` can be anything exposing ``kills(monomial) -> bool``.
    """
    acc: dict[Monomial, int] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = m1 * m2
            if pres is not None and pres.kills(m):
                continue
            acc[m] = acc.get(m, 0) + c1 * c2
    return Polynomial(acc)


def reduce(p: Polynomial, pres) -> Polynomial:
    return Polynomial({m: c for m, c in p.terms.items() if not pres.kills(m)})


def power(p: Polynomial, k: int, pres=None) -> Polynomial:
    out = Polynomial.constant(1)
    for _ in range(k):
        out = multiply(out, p, pres)
    return out


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_polynomial(text: str, pres=None) -> Polynomial:
    """Parse e.g. ``"2*R^2*V1*V3 - V2 + V1^3"``; non-normal words are normalized."""
    s = text.strip()
    if not s:
        raise RingInputError("empty polynomial")
    if s == "0":
        return Polynomial()
    pos = 0
    out = Polynomial()
    for mt in _TERM.finditer(s):
        if mt.start() != pos:
            raise RingInputError(f"cannot parse {text!r} at offset {pos}")
        pos = mt.end()
        sign = -1 if mt.group(1) == "-" else 1
        coef = sign
        word = []
        for factor in mt.group(2).split("*"):
            factor = factor.strip()
            if not factor:
                raise RingInputError(f"empty factor in {text!r}")
            if factor.isdigit():
                coef *= int(factor)
                continue
            sym, _, e = factor.partition("^")
            word.append((sym.strip(), int(e) if e else 1))
        out = out + normalize(word, pres).scale(coef)
    if pos != len(s):
        raise RingInputError(f"cannot parse {text!r} at offset {pos}")
    return out


def normal_monomials(nvars: int, d: int) -> list[Monomial]:
    """All normal monomials of degree ``d`` over V_1..V_nvars, in monomial order."""
    out = []
    for k in range(min(d, nvars) + 1):
        for S in itertools.combinations(range(1, nvars + 1), k):
            out.append(Monomial(d - k, mask_of(S)))
    out.sort(key=Monomial.sort_key)
    return out


def up_closure(masks: Iterable[int], nvars: int) -> frozenset[int]:
    gens = set(masks)
    width = max([nvars] + [m.bit_length() for m in gens])
    full = (1 << width) - 1
    out = set()
    for g in gens:
        rest = full & ~g
        sub = rest
        while True:
            out.add(g | sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return frozenset(out)


def minimal_sets(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=lambda m: (m.bit_count(), bits(m)))
    keep: list[int] = []
    for m in ms:
        if not any(k & m == k for k in keep):
            keep.append(m)
    return keep


@dataclass(frozen=True)
class Presentation:
    """Generators R, V_1..V_{n-1}; annihilated V-supports; linear relations.

    ``annihilators`` is always stored up-closed. ``max_degree`` is the degree
    through which the relations are claimed complete; queries above it fail.
    """

    n: int
    annihilators: frozenset[int]
    linear_relations: tuple[Polynomial, ...] = ()
    max_degree: int = 0
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def build(cls, n, annihilators=(), linear_relations=(), max_degree=0, name=""):
        masks = [a if isinstance(a, int) else mask_of(a) for a in annihilators]
        return cls(
            n=n,
            annihilators=up_closure(masks, n - 1) if masks else frozenset(),
            linear_relations=tuple(linear_relations),
            max_degree=max_degree,
            name=name,
        )

    @property
    def top_degree(self) -> int:
        return self.n - 3

    @property
    def nvars(self) -> int:
        return self.n - 1

    def kills(self, m: Monomial) -> bool:
        return m.support in self.annihilators

    def with_max_degree(self, max_degree: int) -> "Presentation":
        return Presentation(self.n, self.annihilators, self.linear_relations, max_degree, self.name)

    def with_relations(self, extra: Iterable[Polynomial]) -> "Presentation":
        return Presentation(
            self.n,
            self.annihilators,
            self.linear_relations + tuple(extra),
            self.max_degree,
            self.name,
        )

    def minimal_annihilators(self) -> list[int]:
        return minimal_sets(self.annihilators)


@dataclass(frozen=True)
class GradedComponent:
    degree: int
    basis: tuple[Monomial, ...]
    relation_matrix: tuple[tuple[int, ...], ...]
    smith: SmithForm
    hnf: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return self.smith.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.smith.torsion

    @property
    def betti(self) -> int:
        return len(self.basis) - self.rank

    def vector(self, p: Polynomial) -> list[int]:
        index = {m: k for k, m in enumerate(self.basis)}
        vec = [0] * len(self.basis)
        for m, c in p.terms.items():
            k = index.get(m)
            if k is None:
                raise RingInputError(f"monomial {m} is not in the degree-{self.degree} basis")
            vec[k] += c
        return vec

    def contains(self, p: Polynomial) -> bool:
        """True iff ``p`` lies in the integer span of the relations (is zero in the ring)."""
        return in_row_lattice([list(r) for r in self.hnf], self.vector(p))

    def coordinates(self, p: Polynomial) -> list[tuple[int, int]]:
        return self.smith.cokernel_coordinates(self.vector(p))


def _check_degree(pres: Presentation, d: int) -> None:
    if d > pres.max_degree:
        raise PresentationIncomplete(
            f"degree {d} requested but the presentation is only complete through degree {pres.max_degree}"
        )


def basis(pres: Presentation, d: int) -> list[Monomial]:
    return [m for m in normal_monomials(pres.nvars, d) if not pres.kills(m)]


def component(pres: Presentation, d: int) -> GradedComponent:
    """Degree-``d`` piece: basis, relation lattice, Smith and Hermite forms."""
    _check_degree(pres, d)
    key = ("component", d)
    hit = pres._cache.get(key)
    if hit is not None:
        return hit
    B = basis(pres, d)
    index = {m: k for k, m in enumerate(B)}
    rows = []
    for rel in pres.linear_relations:
        e = rel.degree
        if e is None or e > d:
            continue
        for m in basis(pres, d - e):
            prod = multiply(rel, Polynomial.from_monomial(m), pres)
            if not prod:
                continue
            row = [0] * len(B)
            for mm, c in prod.terms.items():
                k = index.get(mm)
                if k is None:
                    raise RingInputError(f"relation {rel} produces {mm} outside the generator range")
                row[k] += c
            if any(row):
                rows.append(tuple(row))
    comp = GradedComponent(
        degree=d,
        basis=tuple(B),
        relation_matrix=tuple(rows),
        smith=smith_normal_form([list(r) for r in rows], len(B)),
        hnf=tuple(tuple(r) for r in hermite_normal_form([list(r) for r in rows], len(B))),
    )
    pres._cache[key] = comp
    return comp


def betti_numbers(pres: Presentation, upto: int | None = None) -> list[int]:
    top = pres.max_degree if upto is None else upto
    return [component(pres, d).betti for d in range(top + 1)]


def is_nonzero(pres: Presentation, p: Polynomial) -> bool:
    if not p:
        return False
    d = p.degree
    p = reduce(p, pres)
    if not p:
        return False
    return not component(pres, d).contains(p)


def _top_functional(pres: Presentation) -> tuple[GradedComponent, int]:
    key = ("top",)
    hit = pres._cache.get(key)
    if hit is not None:
        return hit
    top = pres.top_degree
    comp = component(pres, top)
    if comp.betti != 1 or comp.torsion:
        raise TopClassError(
            f"degree {top} piece has betti {comp.betti} and torsion {list(comp.torsion)}; expected Z"
        )
    # fix the sign: the first nonzero monomial in (support size, lex) order is positive
    sign = 1
    for r in range(0, top + 1):
        found = False
        for S in itertools.combinations(range(1, pres.nvars + 1), r):
            m = Monomial(top - r, mask_of(S))
            if pres.kills(m):
                continue
            (val, _), = comp.coordinates(Polynomial.from_monomial(m))
            if val:
                sign = 1 if val > 0 else -1
                found = True
                break
        if found:
            break
    pres._cache[key] = (comp, sign)
    return comp, sign


def top_coordinate(pres: Presentation, p: Polynomial) -> int:
    """Integer coordinate of a top-degree class against the fixed generator."""
    comp, sign = _top_functional(pres)
    if not p:
        return 0
    if p.degree != pres.top_degree:
        raise RingInputError(f"{p} is not in the top degree {pres.top_degree}")
    p = reduce(p, pres)
    if not p:
        return 0
    (val, _), = comp.coordinates(p)
    return sign * val
