"""Length vectors: exact subset sums, short/long subsets, genericity, chambers.

Subsets of ``[n] = {1..n}`` are int bitmasks, bit ``i-1`` for index ``i``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .ring import bits, mask_of


class LengthInputError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class LengthVector:
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        ents = tuple(Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", ents)
        if len(ents) < 3:
            raise LengthInputError(f"need at least 3 sides, got {len(ents)}")
        for i, e in enumerate(ents, 1):
            if e <= 0:
                raise LengthInputError(f"side {i} has non-positive length {e}")

    @classmethod
    def parse(cls, text: str) -> "LengthVector":
        """Parse comma-separated rationals such as ``"1, 1, 1/2, 2"``."""
        parts = [p.strip() for p in text.split(",")]
        try:
            return cls(tuple(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise LengthInputError(f"cannot parse lengths {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def integer_weights(self) -> list[int]:
        """Entries scaled by the lcm of denominators; same short/long structure."""
        den = math.lcm(*(e.denominator for e in self.entries))
        return [int(e * den) for e in self.entries]

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.entries)


def _as_mask(ell: LengthVector, s) -> int:
    m = s if isinstance(s, int) else mask_of(s)
    if m < 0 or m >> ell.n:
        raise LengthInputError(f"subset {sorted(bits(m)) if m >= 0 else m} not contained in [1..{ell.n}]")
    return m


def subset_sum(ell: LengthVector, s) -> Fraction:
    m = _as_mask(ell, s)
    return sum((ell.entries[i - 1] for i in bits(m)), Fraction(0))


def is_short(ell: LengthVector, s) -> bool:
    return 2 * subset_sum(ell, s) < ell.total


def is_long(ell: LengthVector, s) -> bool:
    return 2 * subset_sum(ell, s) > ell.total


def _sums_without_last(weights: list[int]) -> list[int]:
    n = len(weights)
    sums = [0] * (1 << (n - 1))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + weights[low.bit_length() - 1]
    return sums


def genericity_witness(ell: LengthVector) -> int | None:
    """A subset mask splitting the total evenly, or None if ``ell`` is generic.

    Only subsets avoiding index n are scanned; complements cover the rest.
    """
    w = ell.integer_weights()
    total = sum(w)
    for mask, s in enumerate(_sums_without_last(w)):
        if 2 * s == total:
            return mask
    return None


def is_generic(ell: LengthVector) -> bool:
    return genericity_witness(ell) is None


def is_nondegenerate(ell: LengthVector) -> bool:
    big = max(ell.entries)
    return big < ell.total - big


@dataclass(frozen=True)
class ChamberSignature:
    """Sorted short subsets containing the last index n."""

    n: int
    short_sets: tuple[tuple[int, ...], ...]

    def sort_key(self):
        return (len(self.short_sets), self.short_sets)

    def to_json(self) -> str:
        return json.dumps([list(s) for s in self.short_sets], separators=(",", ":"))

    @classmethod
    def from_json(cls, n: int, text: str) -> "ChamberSignature":
        sets = [tuple(sorted(s)) for s in json.loads(text)]
        return cls(n, tuple(sorted(sets, key=lambda s: (len(s), s))))


def _signature_from_masks(n: int, short_masks: Iterable[int]) -> ChamberSignature:
    last = 1 << (n - 1)
    sets = [bits(m | last) for m in short_masks]
    sets.sort(key=lambda s: (len(s), s))
    return ChamberSignature(n, tuple(sets))


def chamber_signature(ell: LengthVector) -> ChamberSignature:
    if not is_generic(ell):
        raise PreconditionError(f"{ell} lies on a wall; chamber signature is undefined")
    w = ell.integer_weights()
    total = sum(w)
    last = w[-1]
    shorts = [m for m, s in enumerate(_sums_without_last(w)) if 2 * (s + last) < total]
    return _signature_from_masks(ell.n, shorts)


def enumerate_chambers(n: int, bound: int, backend: str | None = None, chunk: int = 1 << 16):
    """One representative per chamber signature among integer vectors in ``[1, bound]^n``.

    Keeps only generic, nondegenerate vectors; the representative is the
    lexicographically first candidate. The result is sorted by signature and
    makes no completeness claim beyond the given bound.
    """
    if n < 3:
        raise LengthInputError("n must be at least 3")
    if bound < 1:
        raise LengthInputError("bound must be at least 1")
    count = bound**n
    seen: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}
    for start in range(0, count, chunk):
        cands = _kernels.candidates(n, bound, start, min(count, start + chunk))
        ok, short = _kernels.scan(cands, backend)
        if not ok.any():
            continue
        good = short[ok]
        rows = cands[ok]
        uniq, first = np.unique(good, axis=0, return_index=True)
        for u, k in zip(uniq, first):
            key = u.tobytes()
            # earlier chunks hold lexicographically smaller candidates
            if key not in seen:
                seen[key] = (u, rows[k])
    out = []
    for u, rep in seen.values():
        sig = _signature_from_masks(n, np.flatnonzero(u).tolist())
        out.append((sig, LengthVector(tuple(int(x) for x in rep))))
    out.sort(key=lambda pair: pair[0].sort_key())
    return out
