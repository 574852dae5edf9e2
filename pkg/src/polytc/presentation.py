"""Presentations of the polygon-space cohomology ring: base, fixtures, validation.

The full relation ideal is never derived here. Fixture files carry it as
data, and ``validate`` decides whether a presentation has every structural
property the certifier relies on.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import ring
from .intmat import determinant
from .lengths import LengthVector, PreconditionError, is_generic, is_long, is_nondegenerate
from .ring import Monomial, Polynomial, Presentation, bits, mask_of


class FixtureError(ValueError):
    """Malformed presentation file; the message names the offending location."""


def build_base(ell: LengthVector) -> Presentation:
    """Annihilators ``V_S`` for every S with ``S + {n}`` long; no linear relations.

    The result is declared complete only through degree 0.
    """
    if not is_generic(ell):
        raise PreconditionError(f"{ell} is not generic")
    if not is_nondegenerate(ell):
        raise PreconditionError(f"{ell} is degenerate")
    n = ell.n
    last = 1 << (n - 1)
    ann = [m for m in range(1 << (n - 1)) if is_long(ell, m | last)]
    return Presentation.build(n, ann, (), max_degree=0, name=f"base({ell})")


def _poly_from_json(obj, where: str) -> list:
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise FixtureError(f"{where}: expected an object with a 'terms' list")
    terms = []
    for k, t in enumerate(obj["terms"]):
        loc = f"{where}.terms[{k}]"
        if not isinstance(t, dict):
            raise FixtureError(f"{loc}: expected an object")
        coef, r_exp, support = t.get("coef"), t.get("r_exp", 0), t.get("support", [])
        if not isinstance(coef, int) or isinstance(coef, bool):
            raise FixtureError(f"{loc}.coef: expected an integer")
        if not isinstance(r_exp, int) or r_exp < 0:
            raise FixtureError(f"{loc}.r_exp: expected a nonnegative integer")
        if not isinstance(support, list) or not all(isinstance(i, int) for i in support):
            raise FixtureError(f"{loc}.support: expected a list of integers")
        if len(set(support)) != len(support):
            raise FixtureError(f"{loc}.support: repeated index")
        terms.append((support, r_exp, coef, loc))
    return terms


def presentation_from_dict(data, source: str = "<data>") -> Presentation:
    if not isinstance(data, dict):
        raise FixtureError(f"{source}: top level must be an object")
    n = data.get("n")
    if not isinstance(n, int) or n < 3:
        raise FixtureError(f"{source}: 'n' must be an integer >= 3")
    max_degree = data.get("max_degree")
    if not isinstance(max_degree, int) or max_degree < 0:
        raise FixtureError(f"{source}: 'max_degree' must be a nonnegative integer")

    def check_support(support, loc):
        for i in support:
            if i == n:
                raise FixtureError(f"{loc}: index {n} is not a generator (only V1..V{n - 1})")
            if not 1 <= i < n:
                raise FixtureError(f"{loc}: index {i} out of range 1..{n - 1}")

    ann_raw = data.get("annihilators", [])
    if not isinstance(ann_raw, list):
        raise FixtureError(f"{source}: 'annihilators' must be a list")
    ann = []
    for k, a in enumerate(ann_raw):
        loc = f"{source}: annihilators[{k}]"
        if not isinstance(a, list) or not all(isinstance(i, int) for i in a):
            raise FixtureError(f"{loc}: expected a list of integers")
        check_support(a, loc)
        ann.append(mask_of(a))

    rels_raw = data.get("linear_relations", [])
    if not isinstance(rels_raw, list):
        raise FixtureError(f"{source}: 'linear_relations' must be a list")
    rels = []
    for k, obj in enumerate(rels_raw):
        where = f"{source}: linear_relations[{k}]"
        acc: dict[Monomial, int] = {}
        degrees = set()
        for support, r_exp, coef, loc in _poly_from_json(obj, where):
            check_support(support, f"{loc}.support")
            m = Monomial(r_exp, mask_of(support))
            degrees.add(m.degree)
            acc[m] = acc.get(m, 0) + coef
        if len(degrees) > 1:
            raise FixtureError(f"{where}: inhomogeneous relation mixes degrees {sorted(degrees)}")
        rels.append(Polynomial(acc))
    name = data.get("name", "")
    return Presentation.build(n, ann, [r for r in rels if r], max_degree, name=str(name))


def load_fixture(path) -> Presentation:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    return presentation_from_dict(data, str(path))


def presentation_to_dict(pres: Presentation) -> dict:
    out = {"n": pres.n, "max_degree": pres.max_degree}
    if pres.name:
        out["name"] = pres.name
    out["annihilators"] = [list(bits(m)) for m in pres.minimal_annihilators()]
    out["linear_relations"] = [
        {
            "terms": [
                {"coef": c, "r_exp": m.r_exp, "support": list(m.indices)}
                for m, c in rel.sorted_terms(descending=False)
            ]
        }
        for rel in pres.linear_relations
    ]
    return out


def presentation_id(pres: Presentation) -> str:
    """SHA-256 of the canonical JSON form (name excluded)."""
    d = presentation_to_dict(pres)
    d.pop("name", None)
    blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class Check:
    name: str
    passed: bool | None  # None: not applicable at this max_degree
    witness: object = None

    def to_dict(self):
        status = {True: "pass", False: "fail", None: "skip"}[self.passed]
        return {"name": self.name, "status": status, "witness": self.witness}


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    betti: list[int] = field(default_factory=list)
    torsion: dict[int, list[int]] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return bool(self.checks) and all(c.passed is True for c in self.checks)

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self):
        return {
            "accepted": self.accepted,
            "betti": self.betti,
            "torsion": {str(k): v for k, v in self.torsion.items()},
            "checks": [c.to_dict() for c in self.checks],
        }

    def summary(self) -> str:
        lines = [f"accepted: {self.accepted}"]
        for c in self.checks:
            status = {True: "pass", False: "FAIL", None: "skip"}[c.passed]
            tail = "" if c.witness is None else f"  ({c.witness})"
            lines.append(f"  [{status}] {c.name}{tail}")
        return "\n".join(lines)


def _exponent_splittings(S: tuple[int, ...], d: int):
    """All (e0, {e_i}) with e_i >= 1 on S and e0 + sum e_i = d."""
    k = len(S)
    spare = d - k
    if spare < 0:
        return
    # stars and bars over k+1 slots for the spare degree
    for cut in itertools.combinations(range(spare + k), k):
        prev = -1
        parts = []
        for c in cut + (spare + k,):
            parts.append(c - prev - 1)
            prev = c
        e0 = parts[0]
        yield [("R", e0)] + [(f"V{i}", 1 + e) for i, e in zip(S, parts[1:])]


def _vanishes(pres: Presentation, p: Polynomial):
    """True/False if decidable, None if the degree is beyond max_degree."""
    p = ring.reduce(p, pres)
    if not p:
        return True
    if p.degree > pres.max_degree:
        return None
    return not ring.is_nonzero(pres, p)


def validate(pres: Presentation, ell: LengthVector | None = None, extended: bool = False) -> ValidationReport:
    """Run the structural and cohomological checks in a fixed order.

    Failures are report entries, never exceptions. Checks needing degrees
    beyond ``max_degree`` are marked skipped, which blocks acceptance.
    """
    rep = ValidationReport()
    n = pres.n
    top = n - 3
    nvars = n - 1
    full_mask = (1 << nvars) - 1

    if ell is not None and ell.n != n:
        rep.checks.append(Check("length vector size", False, f"lengths have n={ell.n}, presentation n={n}"))
        return rep

    bad = [sorted(bits(a)) for a in pres.minimal_annihilators() if a & ~full_mask]
    for rel in pres.linear_relations:
        bad += [str(m) for m in rel.terms if m.support & ~full_mask]
    rep.checks.append(Check("generators", not bad, bad[0] if bad else None))
    if bad:
        return rep

    witness = None
    undecided = None
    for S in itertools.combinations(range(1, nvars + 1), n - 2):
        v = _vanishes(pres, Polynomial.from_monomial(Monomial(0, mask_of(S))))
        if v is False:
            witness = list(S)
            break
        if v is None and undecided is None:
            undecided = list(S)
    if witness is not None:
        rep.checks.append(Check("n-2 distinct V product vanishes", False, witness))
    elif undecided is not None:
        rep.checks.append(Check("n-2 distinct V product vanishes", False, f"{undecided} not annihilated and beyond max_degree"))
    else:
        rep.checks.append(Check("n-2 distinct V product vanishes", True))

    witness = None
    for d in range(0, max(top, 0) + 1):
        for k in range(0, d + 1):
            for S in itertools.combinations(range(1, nvars + 1), k):
                target = ring.normalize([("R", d - k)] + [(f"V{i}", 1) for i in S], pres)
                for word in _exponent_splittings(S, d):
                    if ring.normalize(word, pres) != target:
                        witness = {"degree": d, "support": list(S), "word": word}
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    rep.checks.append(Check("monomials with equal support agree", witness is None, witness))

    c0 = ring.component(pres, 0)
    rep.checks.append(Check("connected (betti_0 = 1)", c0.betti == 1, None if c0.betti == 1 else {"betti_0": c0.betti}))

    if pres.max_degree < top:
        for name in ("top class is Z", "Poincare symmetry", "nonzero top monomial"):
            rep.checks.append(Check(name, None, f"max_degree {pres.max_degree} < {top}"))
        if extended:
            rep.checks.append(Check("intersection pairing unimodular", None))
        return rep

    comps = [ring.component(pres, d) for d in range(top + 1)]
    rep.betti = [c.betti for c in comps]
    rep.torsion = {d: list(c.torsion) for d, c in enumerate(comps) if c.torsion}
    ct = comps[top]
    ok_top = ct.betti == 1 and not ct.torsion
    rep.checks.append(Check("top class is Z", ok_top, None if ok_top else {"betti": ct.betti, "torsion": list(ct.torsion)}))

    asym = [d for d in range(top + 1) if rep.betti[d] != rep.betti[top - d]]
    rep.checks.append(Check("Poincare symmetry", not asym, None if not asym else {"degree": asym[0], "betti": rep.betti}))

    nonzero = None
    for m in ring.basis(pres, top):
        if ring.is_nonzero(pres, Polynomial.from_monomial(m)):
            nonzero = str(m)
            break
    rep.checks.append(Check("nonzero top monomial", nonzero is not None, nonzero))

    if extended:
        rep.checks.append(_pairing_check(pres, comps, ok_top and not rep.torsion))
        if pres.max_degree >= top + 1:
            above = ring.component(pres, top + 1).betti
            rep.checks.append(Check("vanishing above top", above == 0, None if above == 0 else {"betti": above}))
    return rep


def _pairing_check(pres: Presentation, comps, applicable: bool) -> Check:
    name = "intersection pairing unimodular"
    if not applicable:
        return Check(name, None, "needs torsion-free pieces and top = Z")
    top = pres.top_degree

    def free_generators(c):
        sm = c.smith
        return [
            Polynomial({m: v for m, v in zip(c.basis, sm.generator(j)) if v})
            for j in range(sm.rank, sm.ncols)
        ]

    gens = [free_generators(c) for c in comps]
    for d in range(top // 2 + 1):
        A, B = gens[d], gens[top - d]
        M = [[ring.top_coordinate(pres, ring.multiply(a, b, pres)) for b in B] for a in A]
        det = determinant(M) if M else 1
        if abs(det) != 1:
            return Check(name, False, {"degree": d, "det": det})
    return Check(name, True)

