from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from projclosure.domain.errors import EmptySupport

# (m_1, ..., m_n); nonnegative entries.
DegreeVector = tuple[int, ...]


def mask_of(indices: Iterable[int]) -> int:
    """Bitmask of a set of 1-based block indices."""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out: list[int] = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subset_key(mask: int) -> str:
    return ",".join(str(i) for i in indices_of(mask))


def parse_subset_key(key: str, n: int) -> int:
    try:
        idx = [int(part) for part in str(key).split(",")]
    except ValueError as exc:
        raise ValueError("BAD_SUBSET_KEY") from exc
    if not idx or len(set(idx)) != len(idx) or any(i < 1 or i > n for i in idx):
        raise ValueError("BAD_SUBSET_KEY")
    return mask_of(idx)


@dataclass(frozen=True, slots=True)
class RankTable:
    """d_I = dim of the intersection of V_i over I, for every subset I of [n].

    `values` is indexed by subset bitmask; values[0] is d_empty = r+1.
    `abstract` marks tables read directly from input rather than computed from subspaces.
    """

    n: int
    r_plus_1: int
    values: tuple[int, ...]
    abstract: bool = False

    def __post_init__(self) -> None:
        if self.n < 1 or self.r_plus_1 < 1:
            raise ValueError("BAD_RANK_TABLE_SHAPE")
        if len(self.values) != 1 << self.n:
            raise ValueError("BAD_RANK_TABLE_SHAPE")
        if self.values[0] != self.r_plus_1:
            raise ValueError("BAD_RANK_TABLE_SHAPE")

    @classmethod
    def from_mapping(
        cls, n: int, r_plus_1: int, mapping: Mapping[str, int], abstract: bool = True
    ) -> RankTable:
        values = [0] * (1 << n)
        values[0] = r_plus_1
        seen: set[int] = set()
        for key, d in mapping.items():
            mask = parse_subset_key(key, n)
            values[mask] = int(d)
            seen.add(mask)
        for mask in range(1, 1 << n):
            if mask not in seen:
                raise ValueError(f"MISSING_SUBSET: {subset_key(mask)}")
        return cls(n=n, r_plus_1=r_plus_1, values=tuple(values), abstract=abstract)

    @property
    def r(self) -> int:
        return self.r_plus_1 - 1

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def d(self, indices: Iterable[int]) -> int:
        return self.values[mask_of(indices)]

    def single(self, i: int) -> int:
        return self.values[1 << (i - 1)]

    def corank(self, mask: int) -> int:
        return self.r_plus_1 - self.values[mask]

    def block_sizes(self) -> tuple[int, ...]:
        """Number of coordinates of P(V/V_i): r+1-d_i."""
        return tuple(self.r_plus_1 - self.single(i) for i in range(1, self.n + 1))

    def as_mapping(self) -> dict[str, int]:
        return {subset_key(m): self.values[m] for m in range(1, 1 << self.n)}


@dataclass(frozen=True, slots=True)
class MultidegreeSupport:
    """Dimension p of the closure and the set M(p) where the multidegree is 1."""

    p: int
    support: frozenset[DegreeVector]

    def __post_init__(self) -> None:
        if not self.support:
            raise EmptySupport()
        if any(sum(m) != self.p for m in self.support):
            raise ValueError("SUPPORT_DEGREE_MISMATCH")

    def sorted_support(self) -> list[DegreeVector]:
        return sorted(self.support)


@dataclass(frozen=True, slots=True, order=True)
class BlockVar:
    block: int
    index: int

    def render(self) -> str:
        return f"x[{self.block},{self.index}]"


@dataclass(frozen=True, slots=True, order=True)
class BlockMonomial:
    """Squarefree monomial with at most one variable per block; ell_i = 0 means block absent."""

    ell: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.ell, start=1) if e)

    @property
    def length(self) -> int:
        return sum(1 for e in self.ell if e)

    def divides(self, other: BlockMonomial) -> bool:
        return all(e == 0 or other.ell[i] == e for i, e in enumerate(self.ell))

    def variables(self) -> frozenset[BlockVar]:
        return frozenset(BlockVar(i, e) for i, e in enumerate(self.ell, start=1) if e)

    def render(self) -> str:
        parts = [BlockVar(i, e).render() for i, e in enumerate(self.ell, start=1) if e]
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True, slots=True)
class BlockMonomialIdeal:
    """Minimal generating set of a monomial ideal in the block variables x_{i,j}."""

    block_sizes: tuple[int, ...]
    gens: frozenset[BlockMonomial] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for g in self.gens:
            if len(g.ell) != len(self.block_sizes):
                raise ValueError("BLOCK_COUNT_MISMATCH")
            if any(e < 0 or e > s for e, s in zip(g.ell, self.block_sizes)):
                raise ValueError("BLOCK_INDEX_OUT_OF_RANGE")

    @property
    def is_zero(self) -> bool:
        return not self.gens

    def sorted_gens(self) -> list[BlockMonomial]:
        return sorted(self.gens, key=lambda g: (g.length, g.ell))

    def render(self) -> list[str]:
        return [g.render() for g in self.sorted_gens()]


@dataclass(frozen=True, slots=True)
class BinomialTerm:
    """coeff * prod_i binom(u_i + ell_i, ell_i)."""

    coeff: int
    ell: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class MultiHilbertPoly:
    n: int
    terms: tuple[BinomialTerm, ...]

    @classmethod
    def from_counts(cls, n: int, counts: Mapping[tuple[int, ...], int]) -> MultiHilbertPoly:
        terms = tuple(BinomialTerm(c, ell) for ell, c in sorted(counts.items()) if c != 0)
        return cls(n=n, terms=terms)

    def as_counts(self) -> dict[tuple[int, ...], int]:
        return {t.ell: t.coeff for t in self.terms}

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for t in self.terms:
            factors = [f"binom(u{i}+{e},{e})" for i, e in enumerate(t.ell, start=1) if e]
            body = "*".join(factors) if factors else "1"
            mag = abs(t.coeff)
            sign = "-" if t.coeff < 0 else "+"
            pieces.append(f"{sign} {body}" if mag == 1 else f"{sign} {mag}*{body}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else text
