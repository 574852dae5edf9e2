"""Zero-divisor products in the tensor square and the TC certificate.

The product
    (R(x)1 - 1(x)R)^(2n-6-2r) * prod_j (V_j(x)1 - 1(x)V_j)^2
is expanded by brute force and its top(x)top part is compared with
(-1)^(n-3) * C(2n-6-2r, n-3-r) * 2^r times M(x)M, M = R^(n-3-r) V_S.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from math import comb

from . import ring
from .lengths import LengthVector, genericity_witness, is_nondegenerate
from .presentation import ValidationReport, presentation_id, validate
from .ring import Monomial, Polynomial, Presentation, bits, mask_of

CONVENTION = "non-reduced (TC of a point is 1)"


class RefusalError(ValueError):
    """Lengths outside the theorem's hypotheses."""


class ValidationFailed(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("presentation failed validation")
        self.report = report


class CoefficientMismatch(ArithmeticError):
    pass


class TensorPolynomial:
    """Integer combination of ``(left, right)`` monomial pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[tuple[Monomial, Monomial], int] = {}
        for k, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            if c:
                c += clean.get(k, 0)
                if c:
                    clean[k] = c
                else:
                    clean.pop(k, None)
        self.terms = clean

    @classmethod
    def one(cls) -> "TensorPolynomial":
        return cls({(ring.ONE, ring.ONE): 1})

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorPolynomial) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        return TensorPolynomial(itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self):
        return TensorPolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return TensorPolynomial({key: k * c for key, c in self.terms.items()})

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(a.degree, b.degree) for a, b in self.terms}

    def part(self, d1: int, d2: int) -> "TensorPolynomial":
        return TensorPolynomial({(a, b): c for (a, b), c in self.terms.items() if a.degree == d1 and b.degree == d2})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()), reverse=True)
        out = []
        for k, ((a, b), c) in enumerate(items):
            body = f"{a}(x){b}"
            if abs(c) != 1:
                body = f"{abs(c)}*{body}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"TensorPolynomial({str(self)!r})"


def tensor(p: Polynomial, q: Polynomial) -> TensorPolynomial:
    return TensorPolynomial({(a, b): c * e for a, c in p.terms.items() for b, e in q.terms.items()})


def zero_divisor(y: Polynomial) -> TensorPolynomial:
    """``y(x)1 - 1(x)y``."""
    if not y.is_homogeneous():
        raise ring.RingInputError(f"{y} is not homogeneous")
    one = Polynomial.constant(1)
    return tensor(y, one) - tensor(one, y)


def _keep(m: Monomial, pres) -> bool:
    return m.degree <= pres.n - 3 and not pres.kills(m)


def tensor_multiply(a: TensorPolynomial, b: TensorPolynomial, pres) -> TensorPolynomial:
    """Sidewise product; drops pairs with a side above degree n-3 or killed.

    With ``pres=None`` nothing is dropped (free normalized algebra).
    """
    acc: dict = {}
    for (a1, a2), c in a.terms.items():
        for (b1, b2), e in b.terms.items():
            left, right = a1 * b1, a2 * b2
            if pres is None or (_keep(left, pres) and _keep(right, pres)):
                key = (left, right)
                acc[key] = acc.get(key, 0) + c * e
    return TensorPolynomial(acc)


class MinimalityOracle:
    """Free normalized algebra that kills only top-degree monomials with fewer than r V's.

    Stands in for any ring where ``R^(n-3-r) V_S`` is a nonzero top class of
    minimal support size ``r``; needs no presentation.
    """

    def __init__(self, n: int, support):
        self.n = n
        self.support = support if isinstance(support, int) else mask_of(support)
        self.r = self.support.bit_count()
        if not 0 <= self.r <= n - 3:
            raise ValueError(f"support size {self.r} outside 0..{n - 3}")

    def kills(self, m: Monomial) -> bool:
        return m.degree == self.n - 3 and m.support.bit_count() < self.r

    def top_coordinate(self, m: Monomial) -> int:
        if m.degree != self.n - 3 or m.support != self.support:
            raise ValueError(f"{m} is not a multiple of the minimal top class")
        return 1


def certificate_factors(n: int, support) -> list[TensorPolynomial]:
    """Factors of the certificate product: R-bar repeated, then each V-bar squared.

    Squares are taken in the free algebra so every one of their three terms
    stays visible to the brute-force distribution.
    """
    S = bits(support if isinstance(support, int) else mask_of(support))
    r = len(S)
    rbar = zero_divisor(Polynomial.from_monomial(Monomial(1, 0)))
    factors = [rbar] * (2 * n - 6 - 2 * r)
    for i in S:
        vbar = zero_divisor(Polynomial.from_monomial(Monomial(0, mask_of([i]))))
        factors.append(tensor_multiply(vbar, vbar, None))
    return factors


def expand_brute(factors: list[TensorPolynomial], pres) -> tuple[TensorPolynomial, int]:
    """Full distribution over every choice of one term per factor.

    Each raw term is multiplied out completely before reduction. Returns the
    product and the number of raw terms visited.
    """
    acc: dict = {}
    raw = 0
    lists = [list(f.terms.items()) for f in factors]
    for choice in itertools.product(*lists):
        raw += 1
        left, right, coef = ring.ONE, ring.ONE, 1
        for (a, b), c in choice:
            left, right, coef = left * a, right * b, coef * c
        if _keep(left, pres) and _keep(right, pres):
            key = (left, right)
            acc[key] = acc.get(key, 0) + coef
    return TensorPolynomial(acc), raw


def expand_sequential(factors: list[TensorPolynomial], pres) -> TensorPolynomial:
    out = TensorPolynomial.one()
    for f in factors:
        out = tensor_multiply(out, f, pres)
    return out


def expand_shortcut(n: int, support, pres) -> TensorPolynomial:
    """Middle terms only: binomial expansion of the R-bar power, then -2 V(x)V per square."""
    S = bits(support if isinstance(support, int) else mask_of(support))
    k2 = 2 * n - 6 - 2 * len(S)
    rpow = TensorPolynomial(
        {(Monomial(j, 0), Monomial(k2 - j, 0)): comb(k2, j) * (-1) ** (k2 - j) for j in range(k2 + 1)}
    )
    out = TensorPolynomial({key: c for key, c in rpow.terms.items() if _keep(key[0], pres) and _keep(key[1], pres)})
    for i in S:
        v = Monomial(0, mask_of([i]))
        out = tensor_multiply(out, TensorPolynomial({(v, v): -2}), pres)
    return out


def closed_form(n: int, r: int) -> int:
    k = n - 3 - r
    return (-1) ** (n - 3) * comb(2 * k, k) * 2**r


def _top_value(pres, m: Monomial) -> int:
    if isinstance(pres, MinimalityOracle):
        return pres.top_coordinate(m)
    return ring.top_coordinate(pres, Polynomial.from_monomial(m))


def top_pair_coordinate(product: TensorPolynomial, pres) -> int:
    """Coordinate of the top(x)top part against generator(x)generator."""
    top = pres.n - 3
    return sum(c * _top_value(pres, a) * _top_value(pres, b) for (a, b), c in product.part(top, top).terms.items())


@dataclass
class Expansion:
    n: int
    support: tuple[int, ...]
    raw_terms: int
    product: TensorPolynomial
    raw_coordinate: int
    monomial_coordinate: int
    coefficient: int


def expand_certificate_product(n: int, support, pres, shortcut: bool = False) -> Expansion:
    S = bits(support if isinstance(support, int) else mask_of(support))
    r = len(S)
    M = Monomial(n - 3 - r, mask_of(S))
    if shortcut:
        product, raw = expand_shortcut(n, S, pres), 0
    else:
        product, raw = expand_brute(certificate_factors(n, S), pres)
    raw_coord = top_pair_coordinate(product, pres)
    mcoord = _top_value(pres, M)
    if mcoord == 0:
        raise CoefficientMismatch(f"{M} is zero in the top degree")
    if raw_coord % (mcoord * mcoord):
        raise CoefficientMismatch(
            f"top coordinate {raw_coord} is not a multiple of {mcoord}^2 = coordinate of {M}(x){M}"
        )
    return Expansion(n, S, raw, product, raw_coord, mcoord, raw_coord // (mcoord * mcoord))


def certificate_coefficient(pres, r: int, support, shortcut: bool = False) -> int:
    """Multiple of M(x)M in the expanded zero-divisor product, M the minimal top monomial."""
    S = bits(support if isinstance(support, int) else mask_of(support))
    if len(S) != r:
        raise ValueError(f"support {list(S)} does not have size {r}")
    return expand_certificate_product(pres.n, S, pres, shortcut).coefficient


def minimal_top_monomial(pres: Presentation) -> tuple[int, tuple[int, ...]]:
    """First ``(r, S)`` in (size, lex) order with ``R^(n-3-r) V_S`` nonzero."""
    top = pres.n - 3
    for r in range(0, top + 1):
        for S in itertools.combinations(range(1, pres.n), r):
            m = Monomial(top - r, mask_of(S))
            if ring.is_nonzero(pres, Polynomial.from_monomial(m)):
                return r, S
    raise ValueError("no nonzero monomial in the top degree")


def all_minimal_supports(pres: Presentation) -> list[tuple[int, ...]]:
    r, _ = minimal_top_monomial(pres)
    top = pres.n - 3
    return [
        S
        for S in itertools.combinations(range(1, pres.n), r)
        if ring.is_nonzero(pres, Polynomial.from_monomial(Monomial(top - r, mask_of(S))))
    ]


@dataclass
class TCCertificate:
    n: int
    lengths: list[str]
    generic: bool
    nondegenerate: bool
    r: int
    support: list[int]
    monomial: str
    coefficient: int
    expected: int
    raw_coordinate: int
    monomial_coordinate: int
    expansion: str
    raw_terms: int
    tc_lower: int | None
    tc_upper: int
    tc: int | None
    convention: str
    presentation_id: str
    valid: bool
    witnesses: list[list[int]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TCCertificate":
        return cls(**json.loads(text))


def check_lengths(ell: LengthVector) -> None:
    w = genericity_witness(ell)
    if w is not None:
        raise RefusalError(
            f"lengths {ell} are not generic: subset {list(bits(w))} splits the total evenly, "
            "so straight-line polygons exist"
        )
    if not is_nondegenerate(ell):
        raise RefusalError(f"lengths {ell} are degenerate: the longest side is too long, so N(l) is empty")


def certify(ell: LengthVector, pres: Presentation, shortcut: bool = False, all_witnesses: bool = False) -> TCCertificate:
    check_lengths(ell)
    report = validate(pres, ell)
    if not report.accepted:
        raise ValidationFailed(report)
    n = ell.n
    r, S = minimal_top_monomial(pres)
    exp = expand_certificate_product(n, S, pres, shortcut)
    expected = closed_form(n, r)
    valid = exp.coefficient == expected and exp.coefficient != 0
    return TCCertificate(
        n=n,
        lengths=[str(e) for e in ell.entries],
        generic=True,
        nondegenerate=True,
        r=r,
        support=list(S),
        monomial=str(Monomial(n - 3 - r, mask_of(S))),
        coefficient=exp.coefficient,
        expected=expected,
        raw_coordinate=exp.raw_coordinate,
        monomial_coordinate=exp.monomial_coordinate,
        expansion="shortcut" if shortcut else "brute-force",
        raw_terms=exp.raw_terms,
        # an m-fold nonzero zero-divisor product gives TC >= m + 1, here m = 2n - 6
        tc_lower=2 * n - 5 if valid else None,
        # simply connected closed (2n-6)-manifold: TC <= dim + 1
        tc_upper=2 * n - 5,
        tc=2 * n - 5 if valid else None,
        convention=CONVENTION,
        presentation_id=presentation_id(pres),
        valid=valid,
        witnesses=[list(s) for s in all_minimal_supports(pres)] if all_witnesses else [],
    )


def tensor_is_nonzero(pres: Presentation, t: TensorPolynomial) -> bool:
    """Nonzero test in H(x)H using cyclic decompositions of each graded piece.

    ``Z/a (x) Z/b = Z/gcd(a, b)`` with ``Z = Z/0``, so each coordinate pair is
    tested modulo the gcd of the two moduli.
    """
    from math import gcd

    for d1, d2 in sorted(t.bidegrees()):
        part = t.part(d1, d2)
        c1, c2 = ring.component(pres, d1), ring.component(pres, d2)
        coords: dict[tuple[int, int], int] = {}
        moduli: dict[tuple[int, int], int] = {}
        for (a, b), c in part.terms.items():
            if pres.kills(a) or pres.kills(b):
                continue
            xa = c1.coordinates(Polynomial.from_monomial(a))
            xb = c2.coordinates(Polynomial.from_monomial(b))
            for i, (va, ma) in enumerate(xa):
                if not va:
                    continue
                for j, (vb, mb) in enumerate(xb):
                    if vb:
                        coords[(i, j)] = coords.get((i, j), 0) + c * va * vb
                        moduli[(i, j)] = gcd(ma, mb)
        for key, v in coords.items():
            mod = moduli[key]
            if (v % mod if mod else v) != 0:
                return True
    return False


def cup_length_lower_bound(pres: Presentation, classes: list[Polynomial], m: int) -> bool:
    """True iff the product of the zero divisors of the first ``m`` classes is nonzero."""
    if m > 2 * pres.max_degree:
        raise ring.PresentationIncomplete(f"m={m} exceeds twice max_degree {pres.max_degree}")
    if m > len(classes):
        raise ValueError(f"only {len(classes)} classes given for an {m}-fold product")
    prod = TensorPolynomial.one()
    for y in classes[:m]:
        if y and y.degree != 1:
            raise ring.RingInputError(f"{y} is not a degree-1 class")
        prod = tensor_multiply(prod, zero_divisor(ring.reduce(y, pres)), pres)
        if not prod:
            return False
    return tensor_is_nonzero(pres, prod)


def proof_classes(n: int, support) -> list[Polynomial]:
    """The 2n-6 degree-1 classes used in the certificate product."""
    S = bits(support if isinstance(support, int) else mask_of(support))
    R = Polynomial.from_monomial(Monomial(1, 0))
    out = [R] * (2 * n - 6 - 2 * len(S))
    for i in S:
        V = Polynomial.from_monomial(Monomial(0, mask_of([i])))
        out += [V, V]
    return out
