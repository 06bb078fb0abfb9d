"""Oracle-derived quantities: rank, closure, circuits, cocircuits, duality.

The rank/closure helpers issue sequential singleton rounds and make no round
guarantees; the round-bounded algorithms never call them on their hot paths.
Enumerations are desk-scale tools and bypass the ledger so acceptance bounds
measure only the algorithms under test.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import ResourceGuardError, iter_bits, popcount

CIRCUIT_GUARD_N = 14
LATTICE_GUARD_N = 12


def check_guard(n: int, limit: int, what: str, max_n: int | None = None) -> None:
    effective = max_n if max_n is not None else limit
    if n > effective:
        raise ResourceGuardError(
            f"{what} refuses n={n} > {effective}; pass max_n to override"
        )


@dataclass(frozen=True)
class Circuit:
    """An inclusion-minimal dependent set, stored as a mask."""

    elements: int

    def __iter__(self):
        return iter_bits(self.elements)


@dataclass(frozen=True)
class Cocircuit:
    """A circuit of the dual matroid, with its hyperplane witness."""

    elements: int
    hyperplane: int

    def __iter__(self):
        return iter_bits(self.elements)


def rank(session, subset: int) -> int:
    """Greedy rank scan; charges one round per element tested."""
    kept = 0
    for i in iter_bits(subset & session.universe):
        if session.submit_round([kept | (1 << i)])[0]:
            kept |= 1 << i
    return popcount(kept)


def closure(session, subset: int) -> int:
    """Elements whose addition leaves the rank of `subset` unchanged."""
    subset &= session.universe
    kept = 0
    for i in iter_bits(subset):
        if session.submit_round([kept | (1 << i)])[0]:
            kept |= 1 << i
    out = subset
    for i in iter_bits(session.universe & ~subset):
        if not session.submit_round([kept | (1 << i)])[0]:
            out |= 1 << i
    return out


def continuations(session, subset: int) -> int:
    """E minus the closure: the points that raise the rank when added."""
    return session.universe & ~closure(session, subset)


def fundamental_circuit(session, independent: int, y: int) -> Circuit:
    """The unique circuit inside independent+y, for y inside the span.

    Preconditions (checked): `independent` is independent and adding `y`
    keeps the rank, i.e. the union is dependent.
    """
    ybit = 1 << y
    if ybit & independent:
        raise ValueError("y already belongs to the independent set")
    checks = session.submit_round([independent, independent | ybit])
    if not checks[0]:
        raise ValueError("fundamental circuit requires an independent base set")
    if checks[1]:
        raise ValueError("y is a continuation, not a span member")
    members = ybit
    probes = [(independent & ~(1 << x)) | ybit for x in iter_bits(independent)]
    answers = session.submit_round(probes)
    for x, ok in zip(iter_bits(independent), answers):
        if not ok:
            # removing x leaves the circuit intact, so x is not on it
            continue
        members |= 1 << x
    circ = Circuit(members)
    _validate_circuit(session, circ)
    return circ


def _validate_circuit(session, circ: Circuit) -> None:
    mask = circ.elements
    if session.raw_query(mask):
        raise AssertionError("claimed circuit is independent")
    for x in iter_bits(mask):
        if not session.raw_query(mask & ~(1 << x)):
            raise AssertionError("claimed circuit is not minimal")


def enumerate_circuits(session, max_n: int | None = None) -> list[Circuit]:
    """All inclusion-minimal dependent subsets, ordered by (size, mask)."""
    elements = session.elements()
    n = len(elements)
    check_guard(n, CIRCUIT_GUARD_N, "circuit enumeration", max_n)
    full = session.raw_full_rank()
    circuits: list[Circuit] = []
    # no circuit can exceed rank+1 elements: dropping one must leave it independent
    for size in range(1, min(n, full + 1) + 1):
        for combo in combinations(elements, size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if session.raw_query(mask):
                continue
            if all(session.raw_query(mask & ~(1 << x)) for x in iter_bits(mask)):
                circuits.append(Circuit(mask))
    circuits.sort(key=lambda c: (popcount(c.elements), c.elements))
    return circuits


def enumerate_hyperplanes(session, max_n: int | None = None) -> list[int]:
    """All flats of rank one less than the matroid, as masks."""
    elements = session.elements()
    n = len(elements)
    check_guard(n, CIRCUIT_GUARD_N, "hyperplane enumeration", max_n)
    full = session.raw_full_rank()
    if full == 0:
        return []
    seen: set[int] = set()
    for combo in _independent_sets_of_size(session, full - 1):
        seen.add(_raw_closure(session, combo))
    return sorted(seen)


def enumerate_cocircuits(session, max_n: int | None = None) -> list[Cocircuit]:
    """One cocircuit per hyperplane H: its continuations, which equal E minus H."""
    universe = session.universe
    out = [
        Cocircuit(universe & ~h, h)
        for h in enumerate_hyperplanes(session, max_n)
    ]
    out.sort(key=lambda c: (popcount(c.elements), c.elements))
    return out


def modular_pair(session, x: int, y: int) -> bool:
    """Whether rank submodularity holds with equality for the pair."""
    return rank(session, x & y) + rank(session, x | y) == rank(session, x) + rank(session, y)


def dual_rank(session, subset: int) -> int:
    """rho*(X) = rho(E minus X) + |X| - rho(E)."""
    subset &= session.universe
    e = session.universe
    return rank(session, e & ~subset) + popcount(subset) - rank(session, e)


# raw (unledgered) counterparts used by enumerations and verification

def raw_closure(session, subset: int) -> int:
    return _raw_closure(session, subset & session.universe)


def _raw_closure(session, subset: int) -> int:
    kept = 0
    for i in iter_bits(subset):
        if session.raw_query(kept | (1 << i)):
            kept |= 1 << i
    out = subset
    for i in iter_bits(session.universe & ~subset):
        if not session.raw_query(kept | (1 << i)):
            out |= 1 << i
    return out


def _independent_sets_of_size(session, size: int):
    """Yield independent masks of exactly `size` elements (depth-first growth)."""
    elements = session.elements()

    def grow(mask: int, start: int, left: int):
        if left == 0:
            yield mask
            return
        for pos in range(start, len(elements)):
            cand = mask | (1 << elements[pos])
            if session.raw_query(cand):
                yield from grow(cand, pos + 1, left - 1)

    yield from grow(0, 0, size)


def independent_sets(session, max_n: int | None = None) -> list[int]:
    """All independent masks; hereditary growth keeps this near-minimal."""
    n = len(session.elements())
    check_guard(n, CIRCUIT_GUARD_N, "independent set enumeration", max_n)
    out = [0]
    frontier = [(0, -1)]
    elements = session.elements()
    while frontier:
        nxt = []
        for mask, last in frontier:
            for pos in range(last + 1, len(elements)):
                cand = mask | (1 << elements[pos])
                if session.raw_query(cand):
                    out.append(cand)
                    nxt.append((cand, pos))
        frontier = nxt
    return out
