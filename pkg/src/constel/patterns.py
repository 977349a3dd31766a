"""Constellation offset patterns.

A pattern (0, a_1, ..., a_{m-1}) describes a prime constellation
p, p+a_1, ..., p+a_{m-1}.  Offsets are normalized to start at 0 and must all
be even: an odd gap forces one even member, so at most one such
constellation exists.  Admissibility and smoothness classify which patterns
can occur infinitely often and which carry a conjectured rational density
factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError

# Lexicographically first densest admissible pattern for each length.
BASIC_OFFSETS = {
    2: (0, 2),
    3: (0, 2, 6),
    4: (0, 2, 6, 8),
    5: (0, 2, 6, 8, 12),
    6: (0, 2, 6, 8, 12, 18),
}


@dataclass(frozen=True)
class OffsetPattern:
    """Strictly increasing even offsets with offsets[0] == 0.

    Construction canonicalizes: offsets are sorted, deduplication is
    rejected, and the whole tuple is translated so it starts at 0.
    """

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(int(a) for a in self.offsets)
        if len(offs) < 2:
            raise DomainError("a pattern needs at least two offsets")
        if len(set(offs)) != len(offs):
            raise DomainError(f"duplicate offsets in {offs}")
        offs = tuple(sorted(offs))
        if offs[0] != 0:
            offs = tuple(a - offs[0] for a in offs)
        if any(a % 2 for a in offs):
            raise DomainError(
                f"offsets must all be even after translation, got {offs}; "
                "an odd gap forces an even member")
        object.__setattr__(self, "offsets", offs)

    @property
    def m(self) -> int:
        """Number of constellation members."""
        return len(self.offsets)

    @property
    def span(self) -> int:
        """Distance between the smallest and largest member."""
        return self.offsets[-1]

    @classmethod
    def parse(cls, text: str) -> "OffsetPattern":
        """Build a pattern from a comma-separated offset list like '0,2,6'."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise DomainError(f"no offsets in pattern {text!r}")
        try:
            offsets = tuple(int(p) for p in parts)
        except ValueError:
            raise DomainError(f"pattern {text!r} has non-integer offsets") from None
        return cls(offsets)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.offsets)


@dataclass(frozen=True)
class PatternClassification:
    """Admissibility verdict for a pattern.

    obstruction is the smallest prime whose residues are fully covered by
    the offsets, or None when the pattern is admissible.  is_basic adds the
    smoothness requirement on offsets and pairwise differences.
    """

    is_admissible: bool
    is_basic: bool
    obstruction: int | None = None


def is_smooth(k: int, bound: int) -> bool:
    """True when every prime factor of k is <= bound; k == 1 is vacuously smooth."""
    if k < 1:
        raise DomainError(f"smoothness needs k >= 1, got {k}")
    if bound < 2:
        raise DomainError(f"smoothness bound must be >= 2, got {bound}")
    n = k
    d = 2
    while d * d <= n:
        if d > bound:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return n <= bound


def _primes_through(m: int):
    for q in range(2, m + 1):
        if all(q % d for d in range(2, q)):
            yield q


def classify(pattern: OffsetPattern) -> PatternClassification:
    """Full classification: admissibility obstruction plus the basic test."""
    obstruction = None
    for q in _primes_through(pattern.m):
        if len({a % q for a in pattern.offsets}) == q:
            obstruction = q
            break
    admissible = obstruction is None
    smooth = all(
        is_smooth(b - a, pattern.m)
        for a, b in combinations(pattern.offsets, 2))
    return PatternClassification(admissible, admissible and smooth, obstruction)


def is_admissible(pattern: OffsetPattern) -> bool:
    """True when no prime q <= m has all residues covered by the offsets.

    A covered prime forces one member of every occurrence to be divisible
    by q, so an inadmissible pattern occurs at most once beyond q.
    """
    return classify(pattern).is_admissible


def is_basic(pattern: OffsetPattern) -> bool:
    """Admissible, with all offsets and pairwise differences m-smooth."""
    return classify(pattern).is_basic


def basic_pattern_for(m: int) -> OffsetPattern:
    """The canonical densest pattern of length m, for m in 2..6."""
    if m not in BASIC_OFFSETS:
        raise DomainError(
            f"no canonical pattern for m={m}; supported lengths are "
            f"{sorted(BASIC_OFFSETS)}")
    return OffsetPattern(BASIC_OFFSETS[m])
