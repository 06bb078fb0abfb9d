"""Ground-set primitives, weights, and the batched independence-oracle session.

Subsets of the ground set are represented as int bitmasks over dense element
indices (bit i set means element i is in the subset).  Names exist only for
I/O.  All algorithms in this package drive an :class:`OracleSession`, whose
:class:`QueryLedger` counts adaptive rounds: one round per batch of
simultaneous queries, none of which may depend on answers from the same batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence


class MatroidOptError(Exception):
    """Base class for errors raised by this package."""


class MalformedQueryError(MatroidOptError):
    """A queried subset contains elements outside the session's ground set."""


class EmptyBatchError(MatroidOptError):
    """An empty batch was submitted; this signals an algorithm bug."""


class IncompleteWeightsError(MatroidOptError):
    """A weight map does not cover the whole ground set."""


class InvalidContractionError(MatroidOptError):
    """Attempted to contract by a dependent set."""


class ResourceGuardError(MatroidOptError):
    """A desk-scale enumeration was asked to run beyond its size guard."""


class FaultyOracleError(MatroidOptError):
    """A basis-search procedure returned something that is not a basis."""


class ElementId(NamedTuple):
    index: int
    name: str


class GroundSet:
    """A fixed, ordered ground set with dense indices and unique names."""

    def __init__(self, names: Sequence[str]):
        names = list(names)
        if len(set(names)) != len(names):
            raise ValueError("element names must be unique")
        self.names = names
        self.n = len(names)
        self._index = {name: i for i, name in enumerate(names)}
        self.full_mask = (1 << self.n) - 1

    @classmethod
    def of_size(cls, n: int, prefix: str = "e") -> "GroundSet":
        return cls([f"{prefix}{i + 1}" for i in range(n)])

    @classmethod
    def letters(cls, n: int) -> "GroundSet":
        if n > 26:
            raise ValueError("letter ground sets support at most 26 elements")
        return cls([chr(ord("a") + i) for i in range(n)])

    def element(self, index: int) -> ElementId:
        return ElementId(index, self.names[index])

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown element name {name!r}") from None

    def mask_of(self, it: Iterable[int | str]) -> int:
        mask = 0
        for x in it:
            i = x if isinstance(x, int) else self.index_of(x)
            if not 0 <= i < self.n:
                raise MalformedQueryError(f"element index {i} out of range")
            mask |= 1 << i
        return mask

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in iter_bits(mask)]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"GroundSet({self.names!r})"


def iter_bits(mask: int):
    """Yield set-bit positions of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class WeightMap:
    """Element weights with the deterministic total order (weight, index).

    The order is total even when weights collide, so every selection made
    through :meth:`argmin` is deterministic on any input.
    """

    def __init__(self, ground: GroundSet, weights: dict[str, float] | Sequence[float]):
        self.ground = ground
        if isinstance(weights, dict):
            missing = [name for name in ground.names if name not in weights]
            if missing:
                raise IncompleteWeightsError(f"missing weights for {missing}")
            self.values = [float(weights[name]) for name in ground.names]
        else:
            if len(weights) != ground.n:
                raise IncompleteWeightsError(
                    f"expected {ground.n} weights, got {len(weights)}"
                )
            self.values = [float(v) for v in weights]

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def key(self, index: int) -> tuple[float, int]:
        return (self.values[index], index)

    def argmin(self, subset: int | Iterable[int]) -> int:
        """Index of the minimum-weight element of a nonempty subset."""
        indices = iter_bits(subset) if isinstance(subset, int) else iter(subset)
        best = None
        for i in indices:
            if best is None or self.key(i) < self.key(best):
                best = i
        if best is None:
            raise ValueError("argmin of an empty subset")
        return best

    def total(self, mask: int) -> float:
        return sum(self.values[i] for i in iter_bits(mask))

    def sorted_indices(self) -> list[int]:
        return sorted(range(self.ground.n), key=self.key)


def argmin_weight(subset: int | Iterable[int], w: WeightMap) -> ElementId:
    """The unique element of `subset` minimizing (weight, index).

    Deterministic regardless of how the subset is presented; raises
    ValueError on an empty subset.
    """
    return w.ground.element(w.argmin(subset))


@dataclass
class WeightReport:
    ok: bool
    duplicates: list[tuple[str, str]] = field(default_factory=list)


def validate_weights(w: WeightMap, ground: GroundSet) -> WeightReport:
    """Check injectivity of a weight map; collisions are reported, not raised.

    Missing weights raise IncompleteWeightsError at WeightMap construction,
    so a constructed map only needs the duplicate scan.
    """
    seen: dict[float, int] = {}
    dups: list[tuple[str, str]] = []
    for i in range(ground.n):
        v = w.values[i]
        if v in seen:
            dups.append((ground.names[seen[v]], ground.names[i]))
        else:
            seen[v] = i
    return WeightReport(ok=not dups, duplicates=dups)


@dataclass
class QueryLedger:
    """Adaptive-round accounting shared by every algorithm on a session."""

    rounds: int = 0
    queries: int = 0
    basis_calls: int = 0
    per_round_sizes: list[int] = field(default_factory=list)

    def charge_round(self, size: int) -> None:
        self.rounds += 1
        self.queries += size
        self.per_round_sizes.append(size)

    def snapshot(self) -> tuple[int, int, int]:
        return (self.rounds, self.queries, self.basis_calls)


class OracleSession:
    """A batched independence oracle over a ground set.

    The backend is a pure predicate mask -> bool; equal subsets always get
    equal answers, so answers within one batch may be evaluated concurrently.
    Ledger updates happen once per round at the end of :meth:`submit_round`.

    ``raw_*`` methods bypass the ledger.  They exist for brute-force
    verification and debug assertions, which must not pollute the adaptive
    round counts of the algorithms under test.
    """

    def __init__(self, ground: GroundSet, backend: Callable[[int], bool]):
        self.ground = ground
        self.backend = backend
        self.ledger = QueryLedger()

    @property
    def universe(self) -> int:
        """Mask of elements addressable through this session."""
        return self.ground.full_mask

    def elements(self) -> list[int]:
        return list(iter_bits(self.universe))

    def _validate(self, batch: Sequence[int]) -> None:
        if len(batch) == 0:
            raise EmptyBatchError("empty query batch")
        universe = self.universe
        for mask in batch:
            if mask & ~universe:
                raise MalformedQueryError(
                    f"subset {bin(mask)} not inside session ground {bin(universe)}"
                )

    def submit_round(self, batch: Sequence[int]) -> list[bool]:
        """Answer one batch of simultaneous queries; charges exactly one round."""
        self._validate(batch)
        answers = [bool(self.backend(mask)) for mask in batch]
        self.ledger.charge_round(len(batch))
        return answers

    def query_one(self, mask: int) -> bool:
        """One-subset round; costs a full round like any other batch."""
        return self.submit_round([mask])[0]

    # unledgered access, for verification only

    def raw_query(self, mask: int) -> bool:
        if mask & ~self.universe:
            raise MalformedQueryError("subset outside session ground")
        return bool(self.backend(mask))

    def raw_rank(self, mask: int) -> int:
        rank_fn = getattr(self.backend, "rank", None)
        if rank_fn is not None:
            return rank_fn(mask & self.universe)
        kept = 0
        for i in iter_bits(mask):
            if self.raw_query(kept | (1 << i)):
                kept |= 1 << i
        return popcount(kept)

    def raw_full_rank(self) -> int:
        return self.raw_rank(self.universe)


def submit_round(session, batch: Sequence[int]) -> list[bool]:
    """Module-level alias for session.submit_round (works on oracle views too)."""
    return session.submit_round(batch)
