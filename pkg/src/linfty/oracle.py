"""
Independent brute-force verifiers.

Two things live here, both deliberately unoptimized:

1. A combinatorial oracle for the two-presentation unshuffle identity: both
   displayed sums are expanded into multisets of *labeled operators* (the
   slot rearrangement each summand performs, before any multilinear map is
   substituted), and compared as multisets.  Working at the operator level is
   strictly stronger than value-level equality, where F2 cancellations could
   mask a mismatch.

2. A naive reference evaluator for every defining relation: all sums expanded
   term by term with no shared subexpressions, evaluated on every ordered
   basis tuple directly, then folded onto canonical tuples (raising if two
   orderings of the same tuple ever disagree).  Used for differential testing
   against the optimized residuals.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from .gfa import Basis, Elem, SymMultiMap
from .perm import BlockSpec, Perm, apply, primed_unshuffles, slot_rotation, unshuffles
from .structures import LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism

__all__ = [
    "LabeledOperator",
    "lemma4_lhs",
    "lemma4_rhs",
    "lemma4_equal",
    "naive_residual",
]

_MODULE = "m"  # marker for the module slot inside layered sequences


@dataclass(frozen=True)
class LabeledOperator:
    """A slot rearrangement: original input positions grouped into an ordered
    sequence of boxes with the module element between boxes module_index and
    module_index + 1.  Two composites of permutation layers are equal as
    tensor-slot rearrangements exactly when these data agree.
    """

    blocks: Tuple[Tuple[int, ...], ...]
    module_index: int

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if any(a >= b for a, b in zip(block, block[1:])):
                raise ValueError(f"block contents not increasing: {block}")
            if seen & set(block):
                raise ValueError("blocks are not disjoint")
            seen.update(block)
        if not 0 <= self.module_index <= len(self.blocks):
            raise ValueError("module slot out of range")

    def slot_sequence(self) -> Tuple[object, ...]:
        """The output slots in order, with the module slot marked."""
        items = list(self.blocks)
        items.insert(self.module_index, _MODULE)
        return tuple(items)


def _split(values: Sequence[int], sizes: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    out, off = [], 0
    for s in sizes:
        out.append(tuple(values[off:off + s]))
        off += s
    return tuple(out)


def _compositions0(k: int) -> Tuple[Tuple[int, ...], ...]:
    """Nondecreasing compositions of k, including the empty one for k = 0."""
    if k == 0:
        return ((),)
    def rec(n: int, least: int):
        if n == 0:
            yield ()
            return
        for first in range(least, n + 1):
            for rest in rec(n - first, first):
                yield (first,) + rest
    return tuple(rec(k, 1))


def _primed0(sizes: Tuple[int, ...]) -> Tuple[Perm, ...]:
    return primed_unshuffles(BlockSpec(sizes))


def lemma4_lhs(n: int) -> Counter:
    """Summands of the first presentation: anchor a p-unshuffle at
    sigma(p) = n, then unshuffle the two sides into primed families of boxes
    with the module element in between.  One of the two box groups may be
    empty, but not both."""
    if n < 2:
        raise ValueError("needs n >= 2")
    ops: Counter = Counter()
    for p in range(1, n + 1):
        sizes = tuple(s for s in (p, n - p) if s > 0)
        for sigma in unshuffles(BlockSpec(sizes)):
            if sigma(p) != n:
                continue
            seq = apply(sigma, tuple(range(1, n + 1)))
            left, right = seq[:p - 1], seq[p:]
            for comp_l in _compositions0(p - 1):
                for phi in _primed0(comp_l):
                    blocks_l = _split(apply(phi, left), comp_l)
                    for comp_r in _compositions0(n - p):
                        if not comp_l and not comp_r:
                            continue  # r = s = 0 disallowed
                        for psi in _primed0(comp_r):
                            blocks_r = _split(apply(psi, right), comp_r)
                            ops[LabeledOperator(blocks_l + blocks_r, len(blocks_l))] += 1
    return ops


def lemma4_rhs(n: int) -> Counter:
    """Summands of the second presentation: a primed unshuffle of the n-1
    non-module inputs into alpha boxes, then a two-block unshuffle of the
    alpha + 1 slots placing the module slot right after the first group."""
    if n < 2:
        raise ValueError("needs n >= 2")
    ops: Counter = Counter()
    for comp in _compositions0(n - 1):
        alpha = len(comp)
        for tau in _primed0(comp):
            blocks0 = _split(apply(tau, tuple(range(1, n))), comp)
            slots = blocks0 + (_MODULE,)
            for r in range(alpha + 1):
                sizes = tuple(s for s in (r + 1, alpha - r) if s > 0)
                for theta in unshuffles(BlockSpec(sizes)):
                    if theta(r + 1) != alpha + 1:
                        continue
                    final = apply(theta, slots)
                    blocks = tuple(b for b in final if b is not _MODULE)
                    ops[LabeledOperator(blocks, r)] += 1
    return ops


def lemma4_equal(n: int) -> bool:
    return lemma4_lhs(n) == lemma4_rhs(n)


# ---------------------------------------------------------------------------
# naive reference evaluation
# ---------------------------------------------------------------------------

def _naive_eval(m: SymMultiMap, args: Sequence[Elem]) -> Elem:
    """Direct multilinear expansion with its own canonicalization and lookup."""
    table = dict(m.entries())
    n_sym = m.arity - 1 if m.last_space is not None else m.arity
    out_deg = sum(a.degree for a in args) + m.shift
    acc = 0
    pools = [[(a.degree, i) for i in a.indices()] for a in args]
    for combo in itertools.product(*pools):
        key = tuple(sorted(combo[:n_sym])) + tuple(combo[n_sym:])
        acc ^= table.get(key, 0)
    return Elem(out_deg, acc)


def _u(b: Basis) -> Elem:
    return Elem(b[0], 1 << b[1])


def _us(bs: Sequence[Basis]) -> Tuple[Elem, ...]:
    return tuple(_u(b) for b in bs)


def _two_block_all(n: int, p: int) -> Tuple[Perm, ...]:
    return unshuffles(BlockSpec(tuple(s for s in (p, n - p) if s > 0)))


def _naive_jacobi(alg: LinfAlgebra, n: int, bs: Tuple[Basis, ...]) -> int:
    bits = 0
    for i in range(1, n + 1):
        j = n + 1 - i
        for sigma in _two_block_all(n, i):
            ys = apply(sigma, bs)
            inner = _naive_eval(alg.op(i), _us(ys[:i]))
            bits ^= _naive_eval(alg.op(j), (inner,) + _us(ys[i:])).bits
    return bits


def _naive_morphism(mor: LinfMorphism, n: int, bs: Tuple[Basis, ...]) -> int:
    bits = 0
    for k in range(1, n + 1):
        j = n + 1 - k
        for sigma in _two_block_all(n, k):
            ys = apply(sigma, bs)
            inner = _naive_eval(mor.source.op(k), _us(ys[:k]))
            bits ^= _naive_eval(mor.comp(j), (inner,) + _us(ys[k:])).bits
    for comp in _compositions0(n):
        r = len(comp)
        for tau in _primed0(comp):
            ys = apply(tau, bs)
            zs, off = [], 0
            for size in comp:
                zs.append(_naive_eval(mor.comp(size), _us(ys[off:off + size])))
                off += size
            bits ^= _naive_eval(mor.target.op(r), tuple(zs)).bits
    return bits


def _naive_module(mod: LinfModule, n: int, key: Tuple[Basis, ...]) -> int:
    bits = 0
    for p in range(1, n):
        q = n + 1 - p
        for sigma in _two_block_all(n, p):
            if sigma(n) != n:
                continue
            ys = apply(sigma, key)
            inner = _naive_eval(mod.algebra.op(p), _us(ys[:p]))
            bits ^= _naive_eval(mod.op(q), (inner,) + _us(ys[p:])).bits
    for p in range(1, n + 1):
        q = n + 1 - p
        for sigma in _two_block_all(n, p):
            if sigma(p) != n:
                continue
            ys = apply(sigma, key)
            inner = _naive_eval(mod.op(p), _us(ys[:p]))
            rot = apply(slot_rotation(n, p), (inner,) + _us(ys[p:]))
            bits ^= _naive_eval(mod.op(q), rot).bits
    return bits


def _naive_modhom(h: ModuleMorphism, n: int, key: Tuple[Basis, ...]) -> int:
    xs, mb = key[:-1], key[-1]
    alg = h.source.algebra
    bits = 0
    for i in range(1, n):
        j = n + 1 - i
        for sigma in _two_block_all(n, i):
            if sigma(n) != n:
                continue
            ys = apply(sigma, key)
            inner = _naive_eval(alg.op(i), _us(ys[:i]))
            bits ^= _naive_eval(h.comp(j), (inner,) + _us(ys[i:])).bits
    for i in range(1, n + 1):
        j = n + 1 - i
        for sigma in _two_block_all(n, i):
            if sigma(i) != n:
                continue
            ys = apply(sigma, key)
            inner = _naive_eval(h.source.op(i), _us(ys[:i]))
            rot = apply(slot_rotation(n, i), (inner,) + _us(ys[i:]))
            bits ^= _naive_eval(h.comp(j), rot).bits
    for s in range(1, n + 1):
        r = n + 1 - s
        sizes = tuple(sz for sz in (n - s, s - 1) if sz > 0)
        for tau in unshuffles(BlockSpec(sizes)):
            ys = apply(tau, xs)
            inner = _naive_eval(h.comp(s), _us(ys[n - s:]) + (_u(mb),))
            bits ^= _naive_eval(h.target.op(r), _us(ys[:n - s]) + (inner,)).bits
    return bits


_KINDS = {
    "jacobi": (LinfAlgebra, _naive_jacobi),
    "morphism": (LinfMorphism, _naive_morphism),
    "module": (LinfModule, _naive_module),
    "module_morphism": (ModuleMorphism, _naive_modhom),
}


def naive_residual(structure, kind: str, n: int) -> SymMultiMap:
    """The relation residual computed the slow straight-line way, on every
    ordered basis tuple.  Bit-identical to the optimized residual by design;
    any disagreement between orderings of one tuple raises."""
    try:
        expected_type, term = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown relation kind {kind!r}") from None
    if not isinstance(structure, expected_type):
        raise TypeError(f"{kind} relation needs a {expected_type.__name__}")

    if kind == "jacobi":
        space, cod, last = structure.space, structure.space, None
        sym_n, shift = n, n - 3
        tuples = itertools.product(structure.space.basis(), repeat=n)
    elif kind == "morphism":
        space, cod, last = structure.source.space, structure.target.space, None
        sym_n, shift = n, n - 2
        tuples = itertools.product(space.basis(), repeat=n)
    elif kind == "module":
        space, cod, last = structure.algebra.space, structure.space, structure.space
        sym_n, shift = n - 1, n - 3
        tuples = (xs + (mb,)
                  for xs in itertools.product(space.basis(), repeat=n - 1)
                  for mb in structure.space.basis())
    else:
        space = structure.source.algebra.space
        cod, last = structure.target.space, structure.source.space
        sym_n, shift = n - 1, n - 2
        tuples = (xs + (mb,)
                  for xs in itertools.product(space.basis(), repeat=n - 1)
                  for mb in structure.source.space.basis())

    seen: Dict[tuple, int] = {}
    for tup in tuples:
        bits = term(structure, n, tup)
        ckey = tuple(sorted(tup[:sym_n])) + tuple(tup[sym_n:])
        if ckey in seen:
            if seen[ckey] != bits:
                raise AssertionError(
                    f"naive evaluation not symmetric at {tup}: {bits} vs {seen[ckey]}"
                )
        else:
            seen[ckey] = bits
    entries = [(k, v) for k, v in seen.items() if v]
    return SymMultiMap(n, shift, space, cod, entries, last_space=last)
