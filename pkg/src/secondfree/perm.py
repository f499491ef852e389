"""Permutations, set partitions and partitioned permutations on {1..n}.

Everything here is 1-based, immutable and hashable.  The composition
convention is fixed once and for all as ``(p * q)(i) = p(q(i))``; all
Kreweras-style formulas elsewhere in the package are written under this
convention.

Text notation round-trips through :func:`Permutation.parse` /
``str(Permutation)`` (cycle notation ``(1,2)(3,4)``, fixed points
included), :func:`SetPartition.parse` (block notation ``{1,2|3,4}``) and
:func:`PartitionedPermutation.parse` (``[{1,2|3,4} ; (1,2)(3)(4)]``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class NotationError(ValueError):
    """Raised when a textual permutation/partition cannot be parsed."""


@dataclass(frozen=True, slots=True)
class Permutation:
    """A bijection of {1..n}, stored as the tuple of images.

    ``image[i-1]`` is the image of ``i``.  Equality and hashing go
    through the image mapping, never through a notation.
    """

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.image)
        if n == 0:
            raise ValueError("permutations here act on at least one point")
        if sorted(self.image) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {self.image}")

    # -- construction ------------------------------------------------

    @staticmethod
    def identity(n: int) -> Permutation:
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        """Build from disjoint cycles; unmentioned points are fixed."""
        image = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = tuple(cyc)
            for idx, a in enumerate(cyc):
                b = cyc[(idx + 1) % len(cyc)]
                if not (1 <= a <= n):
                    raise ValueError(f"point {a} outside 1..{n}")
                if a in seen:
                    raise ValueError(f"point {a} appears in two cycles")
                seen.add(a)
                image[a - 1] = b
        return Permutation(tuple(image))

    @staticmethod
    def transposition(n: int, i: int, j: int) -> Permutation:
        image = list(range(1, n + 1))
        image[i - 1], image[j - 1] = j, i
        return Permutation(tuple(image))

    @staticmethod
    def full_cycle(n: int) -> Permutation:
        """The rotation (1,2,...,n)."""
        return Permutation(tuple(range(2, n + 1)) + (1,))

    @staticmethod
    def parse(text: str, size: int | None = None) -> Permutation:
        """Parse cycle notation like ``(1,5)(2,6)(3,4,7,8)``.

        The size defaults to the largest point mentioned.
        """
        text = text.strip()
        if not re.fullmatch(r"(\(\s*\d+(\s*,\s*\d+)*\s*\))+", text):
            raise NotationError(f"bad cycle notation: {text!r}")
        cycles = [
            [int(x) for x in grp.split(",")]
            for grp in re.findall(r"\(([^()]*)\)", text)
        ]
        points = [p for cyc in cycles for p in cyc]
        if len(set(points)) != len(points):
            raise NotationError(f"repeated point in {text!r}")
        n = size if size is not None else max(points)
        if max(points) > n:
            raise NotationError(f"point {max(points)} exceeds size {n}")
        return Permutation.from_cycles(n, cycles)

    # -- basic structure ----------------------------------------------

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        """Composition (self * other)(i) = self(other(i))."""
        if self.size != other.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        return Permutation(tuple(self.image[j - 1] for j in other.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for i, j in enumerate(self.image, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def power(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse().power(-k)
        result = Permutation.identity(self.size)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Canonical cycle decomposition.

        Each cycle starts at its minimal element; cycles are sorted by
        minimal element.  Fixed points appear as 1-cycles.
        """
        seen = [False] * self.size
        out: list[tuple[int, ...]] = []
        for start in range(1, self.size + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            j = self(start)
            while j != start:
                cyc.append(j)
                seen[j - 1] = True
                j = self(j)
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_of(self, i: int) -> tuple[int, ...]:
        cyc = [i]
        j = self(i)
        while j != i:
            cyc.append(j)
            j = self(j)
        return tuple(cyc)

    def num_cycles(self) -> int:
        return len(self.cycles())

    @property
    def length(self) -> int:
        """The geodesic length |p| = n - #cycles."""
        return self.size - self.num_cycles()

    def is_identity(self) -> bool:
        return all(self.image[i] == i + 1 for i in range(self.size))

    def as_partition(self) -> SetPartition:
        """The partition whose blocks are the cycles (written 0_pi)."""
        return SetPartition.from_blocks(self.size, self.cycles())

    def restricted_to(self, points: Iterable[int]) -> dict[int, int]:
        """Induced permutation on ``points``: first return of the orbit.

        Maps k to self^r(k) for the least r >= 1 with self^r(k) in
        ``points``.  The result is a bijection of ``points``.
        """
        pts = set(points)
        if not pts or not pts <= set(range(1, self.size + 1)):
            raise ValueError("points must be a nonempty subset of 1..n")
        out = {}
        for k in pts:
            j = self(k)
            while j not in pts:
                j = self(j)
            out[k] = j
        return out

    def separates(self, points: Iterable[int]) -> bool:
        """True iff no two of ``points`` share a cycle."""
        pts = set(points)
        hit: set[int] = set()
        for cyc in self.cycles():
            members = pts.intersection(cyc)
            if len(members) > 1:
                return False
            hit |= members
        return True

    def __str__(self) -> str:
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())

    def __repr__(self) -> str:
        return f"Permutation.parse({str(self)!r}, size={self.size})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(i) = p(q(i))."""
    return p * q


def length_metric(p: Permutation) -> int:
    """|p| = n - #cycles, the Cayley-graph distance to the identity."""
    return p.length


@dataclass(frozen=True, slots=True)
class SetPartition:
    """A partition of {1..n} into disjoint nonempty blocks.

    Blocks are stored canonically: each block sorted, blocks ordered by
    minimum.
    """

    size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        flat = sorted(p for b in self.blocks for p in b)
        if flat != list(range(1, self.size + 1)):
            raise ValueError(f"blocks do not partition 1..{self.size}: {self.blocks}")

    @staticmethod
    def from_blocks(n: int, blocks: Iterable[Iterable[int]]) -> SetPartition:
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        return SetPartition(n, canon)

    @staticmethod
    def singletons(n: int) -> SetPartition:
        return SetPartition(n, tuple((i,) for i in range(1, n + 1)))

    @staticmethod
    def one_block(n: int) -> SetPartition:
        """The maximum 1_n of the partition lattice."""
        return SetPartition(n, (tuple(range(1, n + 1)),))

    @staticmethod
    def parse(text: str, size: int | None = None) -> SetPartition:
        """Parse block notation like ``{1,2|3,4}``."""
        text = text.strip()
        m = re.fullmatch(r"\{(.*)\}", text)
        if not m:
            raise NotationError(f"bad block notation: {text!r}")
        blocks = [
            [int(x) for x in part.split(",")]
            for part in m.group(1).split("|")
            if part.strip()
        ]
        points = [p for b in blocks for p in b]
        if not points or len(set(points)) != len(points):
            raise NotationError(f"bad block contents in {text!r}")
        n = size if size is not None else max(points)
        return SetPartition.from_blocks(n, blocks)

    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def length(self) -> int:
        """|U| = n - #blocks."""
        return self.size - self.num_blocks()

    def block_index(self) -> dict[int, int]:
        return {p: i for i, b in enumerate(self.blocks) for p in b}

    def block_of(self, i: int) -> tuple[int, ...]:
        for b in self.blocks:
            if i in b:
                return b
        raise KeyError(i)

    def leq(self, other: SetPartition) -> bool:
        """True iff every block of self lies inside a block of other."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        idx = other.block_index()
        return all(len({idx[p] for p in b}) == 1 for b in self.blocks)

    def as_permutation(self) -> Permutation:
        """The permutation whose cycles are the blocks in increasing order.

        The inverse coercion to :meth:`Permutation.as_partition`; the two
        are kept explicit because they only invert each other on
        partitions/permutations whose blocks are cycles in block order.
        """
        return Permutation.from_cycles(self.size, self.blocks)

    def join(self, other: SetPartition) -> SetPartition:
        """Least upper bound in the partition lattice (union-find closure)."""
        if self.size != other.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        parent = list(range(self.size + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

        for part in (self, other):
            for block in part.blocks:
                for p in block[1:]:
                    union(block[0], p)
        groups: dict[int, list[int]] = {}
        for i in range(1, self.size + 1):
            groups.setdefault(find(i), []).append(i)
        return SetPartition.from_blocks(self.size, groups.values())

    def __str__(self) -> str:
        return "{" + "|".join(",".join(map(str, b)) for b in self.blocks) + "}"

    def __repr__(self) -> str:
        return f"SetPartition.parse({str(self)!r}, size={self.size})"


def partition_join(u: SetPartition, v: SetPartition) -> SetPartition:
    return u.join(v)


@dataclass(frozen=True, slots=True)
class PartitionedPermutation:
    """A pair (U, pi) with every cycle of pi inside a block of U."""

    partition: SetPartition
    permutation: Permutation

    def __post_init__(self) -> None:
        if self.partition.size != self.permutation.size:
            raise ValueError("partition and permutation sizes differ")
        if not self.permutation.as_partition().leq(self.partition):
            raise ValueError(
                f"cycles of {self.permutation} not contained in blocks of {self.partition}"
            )

    @staticmethod
    def from_permutation(p: Permutation) -> PartitionedPermutation:
        """(0_pi, pi): the partition is the cycle partition."""
        return PartitionedPermutation(p.as_partition(), p)

    @staticmethod
    def top(p: Permutation) -> PartitionedPermutation:
        """(1_n, pi)."""
        return PartitionedPermutation(SetPartition.one_block(p.size), p)

    @staticmethod
    def parse(text: str) -> PartitionedPermutation:
        m = re.fullmatch(r"\[\s*(\{.*\})\s*;\s*(\(.*\))\s*\]", text.strip())
        if not m:
            raise NotationError(f"bad partitioned-permutation notation: {text!r}")
        part = SetPartition.parse(m.group(1))
        perm = Permutation.parse(m.group(2), size=part.size)
        return PartitionedPermutation(part, perm)

    @property
    def size(self) -> int:
        return self.permutation.size

    @property
    def length(self) -> int:
        """|(U, pi)| = 2|U| - |pi|."""
        return 2 * self.partition.length - self.permutation.length

    def __mul__(self, other: PartitionedPermutation) -> PartitionedPermutation:
        """(U, pi)(V, sigma) = (U v V, pi sigma)."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        return PartitionedPermutation(
            self.partition.join(other.partition),
            self.permutation * other.permutation,
        )

    def __str__(self) -> str:
        return f"[{self.partition} ; {self.permutation}]"

    def __repr__(self) -> str:
        return f"PartitionedPermutation.parse({str(self)!r})"


def pp_length(x: PartitionedPermutation) -> int:
    return x.length


def pp_product(x: PartitionedPermutation, y: PartitionedPermutation) -> PartitionedPermutation:
    return x * y


def is_exact_factorization(
    x: PartitionedPermutation,
    y: PartitionedPermutation,
    target: PartitionedPermutation,
) -> bool:
    """True iff x*y == target with additive lengths."""
    return x * y == target and target.length == x.length + y.length


@dataclass(frozen=True, slots=True)
class AnnulusShape:
    """An (m, n)-annulus: m points on the outer circle, n on the inner."""

    outer: int
    inner: int

    def __post_init__(self) -> None:
        if self.outer < 1 or self.inner < 1:
            raise ValueError("both circles need at least one point")

    @property
    def size(self) -> int:
        return self.outer + self.inner

    def rotation(self) -> Permutation:
        """The boundary rotation with cycles (1..m)(m+1..m+n)."""
        m, n = self.outer, self.inner
        image = list(range(2, m + 1)) + [1] + list(range(m + 2, m + n + 1)) + [m + 1]
        return Permutation(tuple(image))

    def circle_of(self, i: int) -> int:
        """0 for the outer circle, 1 for the inner."""
        if not 1 <= i <= self.size:
            raise ValueError(f"point {i} outside the annulus")
        return 0 if i <= self.outer else 1

    def outer_points(self) -> range:
        return range(1, self.outer + 1)

    def inner_points(self) -> range:
        return range(self.outer + 1, self.size + 1)

    def __str__(self) -> str:
        return f"({self.outer},{self.inner})"


def gamma_annulus(shape: AnnulusShape) -> Permutation:
    """The two-cycle rotation (1,...,m)(m+1,...,m+n) of the annulus."""
    return shape.rotation()


def separates_points(s: Permutation, points: Iterable[int]) -> bool:
    return s.separates(points)


def induced_permutation(s: Permutation, points: Iterable[int]) -> dict[int, int]:
    return s.restricted_to(points)


def all_permutations(n: int) -> Iterator[Permutation]:
    """Every permutation of {1..n}; brute-force test helper."""
    for image in itertools.permutations(range(1, n + 1)):
        yield Permutation(image)
