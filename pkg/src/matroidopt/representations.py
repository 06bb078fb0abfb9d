"""Concrete matroid backends and oracle views (contraction, deletion, dual).

Backends are pure callables mask -> bool suitable for :class:`OracleSession`.
The GF(2) backend is the workhorse: columns are int bitmasks over matrix rows
and independence is decided by Gaussian elimination.  Desk-scale instances
(n <= 18) memoize reduced column bases per subset mask, which keeps the
exhaustive verification suite fast while preserving oracle purity (the cache
is keyed by the queried subset alone).
"""

from __future__ import annotations

from typing import Sequence

from .core import (
    EmptyBatchError,
    GroundSet,
    InvalidContractionError,
    MalformedQueryError,
    OracleSession,
    iter_bits,
    popcount,
)

_MEMO_LIMIT_N = 18


class BinaryRep:
    """A matrix over GF(2); element i is column i, stored as a row-index mask."""

    def __init__(self, rows: int, cols: Sequence[int], names: Sequence[str] | None = None):
        self.rows = rows
        self.cols = list(cols)
        self.n = len(self.cols)
        row_mask = (1 << rows) - 1
        for c in self.cols:
            if c & ~row_mask:
                raise ValueError("column has bits outside the declared row count")
        self.ground = GroundSet(list(names) if names else [f"e{i+1}" for i in range(self.n)])
        if self.ground.n != self.n:
            raise ValueError("name count does not match column count")
        self._memo: dict[int, tuple[int, tuple[int, ...]]] | None = (
            {0: (0, ())} if self.n <= _MEMO_LIMIT_N else None
        )

    @classmethod
    def from_bit_rows(cls, bit_rows: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> "BinaryRep":
        """Build from a row-major 0/1 matrix (the printed orientation)."""
        rows = len(bit_rows)
        ncols = len(bit_rows[0]) if rows else 0
        cols = [0] * ncols
        for r, row in enumerate(bit_rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for c, bit in enumerate(row):
                if bit:
                    cols[c] |= 1 << r
        return cls(rows, cols, names)

    def bit_rows(self) -> list[list[int]]:
        return [[(self.cols[c] >> r) & 1 for c in range(self.n)] for r in range(self.rows)]

    def _reduce(self, vec: int, basis: tuple[int, ...]) -> int:
        for b in basis:
            # basis vectors carry distinct leading bits; cancel when present
            lead = 1 << (b.bit_length() - 1)
            if vec & lead:
                vec ^= b
        return vec

    def _rank_basis(self, mask: int) -> tuple[int, tuple[int, ...]]:
        memo = self._memo
        if memo is not None:
            hit = memo.get(mask)
            if hit is not None:
                return hit
            low = mask & -mask
            rank, basis = self._rank_basis(mask ^ low)
            vec = self._reduce(self.cols[low.bit_length() - 1], basis)
            if vec:
                out = (rank + 1, basis + (vec,))
            else:
                out = (rank, basis)
            memo[mask] = out
            return out
        rank, basis = 0, ()
        for i in iter_bits(mask):
            vec = self._reduce(self.cols[i], basis)
            if vec:
                rank += 1
                basis = basis + (vec,)
        return rank, basis

    def rank(self, mask: int) -> int:
        return self._rank_basis(mask)[0]

    def __call__(self, mask: int) -> bool:
        size = popcount(mask)
        if size > self.rows:
            return False
        return self.rank(mask) == size


def binary_is_independent(rep: BinaryRep, subset: int) -> bool:
    """True iff the columns of `subset` are linearly independent over GF(2)."""
    return rep(subset)


class GraphRep:
    """An undirected multigraph; the matroid's independent sets are its forests."""

    def __init__(self, vertex_count: int, edges: Sequence[tuple[int, int, str]]):
        self.vertex_count = vertex_count
        self.edges = list(edges)
        for u, v, _name in self.edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError("edge endpoint out of range")
        self.ground = GroundSet([name for _u, _v, name in self.edges])
        self.n = len(self.edges)
        self._memo: dict[int, bool] | None = {} if self.n <= _MEMO_LIMIT_N else None

    def _acyclic(self, mask: int) -> bool:
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in iter_bits(mask):
            u, v, _ = self.edges[i]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def __call__(self, mask: int) -> bool:
        if self._memo is None:
            return self._acyclic(mask)
        hit = self._memo.get(mask)
        if hit is None:
            hit = self._memo[mask] = self._acyclic(mask)
        return hit

    def rank(self, mask: int) -> int:
        # rank of an edge set = touched vertices minus its component count
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rank = 0
        for i in iter_bits(mask):
            u, v, _ = self.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank


class UniformRep:
    """The uniform matroid: a subset is independent iff its size is at most r."""

    def __init__(self, n: int, r: int, names: Sequence[str] | None = None):
        if not 0 <= r <= n:
            raise ValueError("uniform matroid needs 0 <= r <= n")
        self.n = n
        self.r = r
        if names is None:
            self.ground = GroundSet.letters(n) if n <= 26 else GroundSet.of_size(n, "x")
        else:
            self.ground = GroundSet(list(names))

    def __call__(self, mask: int) -> bool:
        return popcount(mask) <= self.r

    def rank(self, mask: int) -> int:
        return min(popcount(mask), self.r)


def uniform_is_independent(rep: UniformRep, subset: int) -> bool:
    return rep(subset)


def graphic_to_binary(g: GraphRep) -> BinaryRep:
    """Vertex-edge incidence matrix over GF(2); self-loops become zero columns."""
    cols = []
    for u, v, _name in g.edges:
        cols.append(0 if u == v else (1 << u) | (1 << v))
    return BinaryRep(g.vertex_count, cols, g.ground.names)


def session_for(rep: BinaryRep | GraphRep | UniformRep) -> OracleSession:
    return OracleSession(rep.ground, rep)


class OracleView:
    """A minor or dual view over a session, sharing its ledger.

    Contraction keeps every non-pinned element addressable: elements inside
    the span of the pinned set simply answer dependent as singletons, which
    keeps indices stable across rounds.
    """

    def __init__(self, base, kind: str, pinned: int = 0):
        self.base = base
        self.kind = kind
        self.pinned = pinned
        if kind == "contraction":
            self._universe = base.universe & ~pinned
        elif kind == "deletion":
            self._universe = base.universe & ~pinned
        elif kind == "dual":
            self._universe = base.universe
        else:
            raise ValueError(f"unknown view kind {kind!r}")

    @property
    def ground(self) -> GroundSet:
        return self.base.ground

    @property
    def ledger(self):
        return self.base.ledger

    @property
    def universe(self) -> int:
        return self._universe

    def elements(self) -> list[int]:
        return list(iter_bits(self._universe))

    def _validate(self, batch: Sequence[int]) -> None:
        if len(batch) == 0:
            raise EmptyBatchError("empty query batch")
        for mask in batch:
            if mask & ~self._universe:
                raise MalformedQueryError("subset outside view ground")

    def submit_round(self, batch: Sequence[int]) -> list[bool]:
        self._validate(batch)
        if self.kind == "contraction":
            return self.base.submit_round([self.pinned | m for m in batch])
        if self.kind == "deletion":
            return self.base.submit_round(list(batch))
        # dual: each answer needs base ranks; charged through the shared
        # ledger by sequential scans (verification tool, not round-optimal)
        full = self._ledgered_base_rank(self.base.universe)
        return [self._ledgered_base_rank(self.base.universe & ~m) == full for m in batch]

    def _ledgered_base_rank(self, mask: int) -> int:
        kept = 0
        for i in iter_bits(mask):
            if self.base.submit_round([kept | (1 << i)])[0]:
                kept |= 1 << i
        return popcount(kept)

    def query_one(self, mask: int) -> bool:
        return self.submit_round([mask])[0]

    def raw_query(self, mask: int) -> bool:
        if mask & ~self._universe:
            raise MalformedQueryError("subset outside view ground")
        if self.kind == "contraction":
            return self.base.raw_query(self.pinned | mask)
        if self.kind == "deletion":
            return self.base.raw_query(mask)
        return self.raw_rank(mask) == popcount(mask)

    def raw_rank(self, mask: int) -> int:
        mask &= self._universe
        if self.kind == "contraction":
            return self.base.raw_rank(self.pinned | mask) - self.base.raw_rank(self.pinned)
        if self.kind == "deletion":
            return self.base.raw_rank(mask)
        # dual rank: rho*(X) = rho(E \ X) + |X| - rho(E)
        e = self.base.universe
        return self.base.raw_rank(e & ~mask) + popcount(mask) - self.base.raw_rank(e)

    def raw_full_rank(self) -> int:
        return self.raw_rank(self._universe)


def contract_view(base, pinned: int, *, checked: bool = True) -> OracleView:
    """View of the matroid contracted by an independent set.

    The independence precondition is checked with one charged round unless
    the caller vouches for it (`checked=False`, used by algorithms whose
    invariants already guarantee independence).  Contracting by the empty
    set is the identity and is never charged.
    """
    if pinned & ~base.universe:
        raise MalformedQueryError("contraction set outside ground")
    if pinned and checked:
        if not base.submit_round([pinned])[0]:
            raise InvalidContractionError("contraction by a dependent set")
    elif pinned and not base.raw_query(pinned):
        raise InvalidContractionError("contraction by a dependent set")
    return OracleView(base, "contraction", pinned)


def delete_view(base, removed: int) -> OracleView:
    if removed & ~base.universe:
        raise MalformedQueryError("deletion set outside ground")
    return OracleView(base, "deletion", removed)


def dual_view(base) -> OracleView:
    return OracleView(base, "dual")


# instance file formats (UTF-8 text)

def dump_binary(rep: BinaryRep) -> str:
    lines = ["# names: " + " ".join(rep.ground.names)]
    lines.append(f"{rep.rows} {rep.n}")
    for row in rep.bit_rows():
        lines.append(" ".join(str(b) for b in row))
    return "\n".join(lines) + "\n"


def load_binary(text: str) -> BinaryRep:
    names = None
    data_lines = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("names:"):
                names = body[len("names:"):].split()
            continue
        data_lines.append(line)
    if not data_lines:
        raise ValueError("empty binary matroid file")
    try:
        rows, cols = (int(t) for t in data_lines[0].split())
    except Exception as exc:
        raise ValueError("bad header line, expected 'r n'") from exc
    if len(data_lines) != rows + 1:
        raise ValueError(f"expected {rows} matrix rows, got {len(data_lines) - 1}")
    matrix = []
    for line in data_lines[1:]:
        bits = [int(t) for t in line.split()]
        if len(bits) != cols or any(b not in (0, 1) for b in bits):
            raise ValueError("bad matrix row")
        matrix.append(bits)
    return BinaryRep.from_bit_rows(matrix, names)


def dump_graph(g: GraphRep) -> str:
    lines = [f"{g.vertex_count} {len(g.edges)}"]
    for u, v, name in g.edges:
        lines.append(f"{u} {v} {name}")
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> GraphRep:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    try:
        nv, ne = (int(t) for t in lines[0].split())
    except Exception as exc:
        raise ValueError("bad header line, expected 'V E'") from exc
    if len(lines) != ne + 1:
        raise ValueError(f"expected {ne} edges, got {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError("bad edge line, expected 'u v name'")
        edges.append((int(parts[0]), int(parts[1]), parts[2]))
    return GraphRep(nv, edges)


def dump_uniform(rep: UniformRep) -> str:
    return "# names: " + " ".join(rep.ground.names) + f"\n{rep.n} {rep.r}\n"


def load_uniform(text: str) -> UniformRep:
    names = None
    data = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("names:"):
                names = body[len("names:"):].split()
            continue
        if data is None:
            data = line
    if data is None:
        raise ValueError("empty uniform matroid file")
    n, r = (int(t) for t in data.split())
    return UniformRep(n, r, names)


def load_weights(text: str, ground: GroundSet):
    """Parse 'name weight' lines; '#' comments ignored."""
    from .core import WeightMap

    table: dict[str, float] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad weights line {line!r}")
        table[parts[0]] = float(parts[1])
    return WeightMap(ground, table)


def dump_weights(w) -> str:
    return "\n".join(f"{name} {w.values[i]}" for i, name in enumerate(w.ground.names)) + "\n"
