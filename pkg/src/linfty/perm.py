"""
Permutations of {1, ..., n} in one-line notation, and the unshuffle families
used by every summation in the package.

Conventions
-----------
- A permutation sigma is stored as the tuple of its images: ``images[k-1] =
  sigma(k)``.  Positions and values are 1-indexed, matching the usual S_n
  notation; the 0-indexed storage is internal.
- The tuple action is ``apply(sigma, xs)[k] = xs[sigma(k)]`` (both sides
  1-indexed).  In tensor language this is the map sending x_1 (x) ... (x) x_n
  to x_{sigma(1)} (x) ... (x) x_{sigma(n)}.
- ``compose(sigma, tau)`` is the unique permutation rho with
  ``apply(rho, xs) == apply(tau, apply(sigma, xs))`` for all xs, i.e.
  ``rho(k) = sigma(tau(k))``.  Chained tuple actions therefore compose
  left-to-right: act by sigma first, then by tau.

An (i_1, ..., i_r)-unshuffle is a permutation that is increasing within each
consecutive block of the given sizes.  The primed family additionally requires
the block sizes to be nondecreasing and the first elements of consecutive
equal-size blocks to be increasing; its members are in bijection with the ways
of placing {1..n} into an *unordered* collection of boxes of those sizes.

The empty permutation ``Perm(())`` is allowed (it is the unique element of
S_0 and shows up as the vacuous inner sum of arity-1 relations), but
``identity(0)`` is rejected.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple, TypeVar

T = TypeVar("T")

__all__ = [
    "Perm",
    "BlockSpec",
    "identity",
    "apply",
    "compose",
    "inverse",
    "unshuffles",
    "primed_unshuffles",
    "filtered_unshuffles",
    "slot_rotation",
    "ordered_partitions",
    "one_line",
    "parse_one_line",
]


@dataclass(frozen=True)
class Perm:
    """A permutation of {1, ..., n}, stored as its image tuple.

    >>> s = Perm((2, 3, 1))
    >>> s(1), s(2), s(3)
    (2, 3, 1)
    """

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        """The image sigma(k), 1-indexed."""
        return self.images[k - 1]

    def __repr__(self) -> str:
        return f"Perm({self.images})"

    def __str__(self) -> str:
        return one_line(self)


@dataclass(frozen=True)
class BlockSpec:
    """A composition (i_1, ..., i_r) of n = sum(sizes) into positive parts.

    An empty spec (no blocks, n = 0) is permitted; it indexes the vacuous
    unshuffle family {Perm(())}.
    """

    sizes: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"block sizes must be >= 1: {self.sizes}")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def is_sorted(self) -> bool:
        return all(a <= b for a, b in zip(self.sizes, self.sizes[1:]))

    def __repr__(self) -> str:
        return f"BlockSpec({self.sizes})"

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.sizes) + ")"


def identity(n: int) -> Perm:
    """The identity of S_n, n >= 1.

    >>> identity(3)
    Perm((1, 2, 3))
    """
    if n < 1:
        raise ValueError("identity requires n >= 1")
    return Perm(tuple(range(1, n + 1)))


def apply(sigma: Perm, xs: Sequence[T]) -> Tuple[T, ...]:
    """Rearrange a tuple: result[k] = xs[sigma(k)].

    >>> apply(Perm((2, 1)), ("a", "b"))
    ('b', 'a')
    """
    if len(xs) != sigma.n:
        raise ValueError(f"length mismatch: permutation of {sigma.n}, tuple of {len(xs)}")
    return tuple(xs[i - 1] for i in sigma.images)


def compose(sigma: Perm, tau: Perm) -> Perm:
    """The permutation acting as sigma first, then tau, on tuples.

    apply(compose(sigma, tau), xs) == apply(tau, apply(sigma, xs)).

    >>> compose(Perm((2, 1, 3)), Perm((1, 3, 2)))
    Perm((2, 3, 1))
    """
    if sigma.n != tau.n:
        raise ValueError(f"size mismatch: {sigma.n} vs {tau.n}")
    return Perm(tuple(sigma.images[t - 1] for t in tau.images))


def inverse(sigma: Perm) -> Perm:
    """The inverse permutation: compose(sigma, inverse(sigma)) == identity.

    >>> inverse(Perm((2, 3, 1)))
    Perm((3, 1, 2))
    """
    inv = [0] * sigma.n
    for pos, val in enumerate(sigma.images, start=1):
        inv[val - 1] = pos
    return Perm(tuple(inv))


def _block_starts(sizes: Tuple[int, ...]) -> Tuple[int, ...]:
    starts = []
    off = 0
    for s in sizes:
        starts.append(off)
        off += s
    return tuple(starts)


@functools.lru_cache(maxsize=None)
def unshuffles(spec: BlockSpec) -> Tuple[Perm, ...]:
    """All (i_1, ..., i_r)-unshuffles of S_n, lexicographic on the images.

    The count is the multinomial n! / (i_1! ... i_r!).

    >>> [one_line(p) for p in unshuffles(BlockSpec((1, 3)))]
    ['1234', '2134', '3124', '4123']
    """
    n = spec.n
    out: list[Perm] = []

    def extend(prefix: list[int], remaining: Tuple[int, ...], blocks: Tuple[int, ...]) -> None:
        if not blocks:
            out.append(Perm(tuple(prefix)))
            return
        # combinations of a sorted pool are emitted sorted and in lex order,
        # so the final image sequences come out lexicographically sorted.
        for chosen in itertools.combinations(remaining, blocks[0]):
            rest = tuple(v for v in remaining if v not in chosen)
            extend(prefix + list(chosen), rest, blocks[1:])

    extend([], tuple(range(1, n + 1)), spec.sizes)
    return tuple(out)


def _primed_ok(p: Perm, spec: BlockSpec) -> bool:
    # first elements of consecutive equal-size blocks must be increasing
    starts = _block_starts(spec.sizes)
    for l in range(len(spec.sizes) - 1):
        if spec.sizes[l] == spec.sizes[l + 1]:
            if p.images[starts[l]] > p.images[starts[l + 1]]:
                return False
    return True


@functools.lru_cache(maxsize=None)
def primed_unshuffles(spec: BlockSpec) -> Tuple[Perm, ...]:
    """The S' family: unshuffles for nondecreasing sizes, with ties between
    equal-size blocks broken by the order of their first elements.

    >>> [one_line(p) for p in primed_unshuffles(BlockSpec((1, 1)))]
    ['12']
    """
    if not spec.is_sorted():
        raise ValueError(f"primed unshuffles need nondecreasing sizes: {spec.sizes}")
    return tuple(p for p in unshuffles(spec) if _primed_ok(p, spec))


def filtered_unshuffles(spec: BlockSpec, position: int, value: int) -> Tuple[Perm, ...]:
    """Unshuffles of the given block sizes with the extra anchor sigma(position) == value."""
    n = spec.n
    if not (1 <= position <= n and 1 <= value <= n):
        raise ValueError(f"anchor ({position}, {value}) out of range for n={n}")
    return tuple(p for p in unshuffles(spec) if p(position) == value)


def slot_rotation(n: int, p: int) -> Perm:
    """The cycle on q = n - p + 1 slots moving slot 1 to the end.

    Applied to (y, x_1, ..., x_{q-1}) it yields (x_1, ..., x_{q-1}, y); this
    is the rotation that moves a freshly produced module element past the
    remaining inputs into the final slot.

    >>> slot_rotation(3, 1)
    Perm((2, 3, 1))
    """
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    q = n - p + 1
    return Perm(tuple(range(2, q + 1)) + (1,))


@functools.lru_cache(maxsize=None)
def ordered_partitions(n: int) -> Tuple[BlockSpec, ...]:
    """All partitions of n written in nondecreasing order, lexicographically.

    >>> [s.sizes for s in ordered_partitions(3)]
    [(1, 1, 1), (1, 2), (3,)]
    """
    if n < 1:
        raise ValueError("ordered_partitions requires n >= 1")
    return tuple(BlockSpec(sizes) for sizes in _nondecreasing_compositions(n, 1))


def _nondecreasing_compositions(n: int, least: int) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(least, n + 1):
        for rest in _nondecreasing_compositions(n - first, first):
            yield (first,) + rest


def one_line(p: Perm) -> str:
    """One-line notation, e.g. "2413"; comma-separated once n > 9."""
    if p.n > 9:
        return ",".join(str(i) for i in p.images)
    return "".join(str(i) for i in p.images)


def parse_one_line(text: str) -> Perm:
    """Inverse of one_line.

    >>> parse_one_line("2413")
    Perm((2, 4, 1, 3))
    """
    text = text.strip()
    if "," in text:
        return Perm(tuple(int(t) for t in text.split(",")))
    return Perm(tuple(int(c) for c in text))
