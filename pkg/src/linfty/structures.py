"""
The four structure kinds over F2 and their defining relations as executable
checkers.

An algebra on a graded space V is a family of symmetric multilinear brackets
l_k of arity k and degree k-2 (k <= a truncation arity N) subject to the
generalized Jacobi identity; a morphism is a family f_n: source -> target of
degree n-1 intertwining the brackets; a module over an algebra L is a family
k_n on n-1 algebra slots plus one module slot, degree n-2; a module morphism
is a family h_n of degree n-1.  Each relation is computed as a *residual*:
the arity-n multilinear map equal to the (F2) sum of both sides, which is the
zero map exactly when the relation holds at arity n.  Residuals are returned
as maps rather than booleans so that failures carry a witness basis tuple.

All sums are truncated at the structures' max_arity; operations above it are
identically zero, so the truncation is exact for structures that vanish in
high arities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from .gfa import Basis, Elem, GradedSpace, SymMultiMap, unit, zero_map
from .perm import BlockSpec, Perm, apply, slot_rotation, ordered_partitions, primed_unshuffles, unshuffles

__all__ = [
    "LinfAlgebra",
    "LinfMorphism",
    "LinfModule",
    "ModuleMorphism",
    "jacobi_residual",
    "morphism_residual",
    "module_residual",
    "modhom_residual",
    "residual",
    "first_failure",
    "identity_morphism",
    "compose",
]


def _check_map(m: SymMultiMap, arity: int, shift: int, sym: GradedSpace,
               last: Optional[GradedSpace], cod: GradedSpace, what: str) -> None:
    if (m.arity, m.shift, m.sym_space, m.last_space, m.codomain) != (arity, shift, sym, last, cod):
        raise ValueError(
            f"{what}: expected arity {arity}, shift {shift} on the declared spaces, got {m!r}"
        )


def _fill(ops: Mapping[int, SymMultiMap], max_arity: int, arity_of, shift_of,
          sym: GradedSpace, last: Optional[GradedSpace], cod: GradedSpace, what: str
          ) -> Tuple[SymMultiMap, ...]:
    filled = []
    for k in range(1, max_arity + 1):
        m = ops.get(k)
        if m is None:
            m = zero_map(arity_of(k), shift_of(k), sym, cod, last_space=last)
        else:
            _check_map(m, arity_of(k), shift_of(k), sym, last, cod, f"{what}[{k}]")
        filled.append(m)
    for k in ops:
        if not 1 <= k <= max_arity:
            raise ValueError(f"{what}[{k}] outside 1..{max_arity}")
    return tuple(filled)


@dataclass(frozen=True)
class LinfAlgebra:
    """Brackets l_k (arity k, degree k-2) on one graded space, k <= max_arity."""

    space: GradedSpace
    max_arity: int
    ops: Tuple[SymMultiMap, ...]

    @staticmethod
    def build(space: GradedSpace, max_arity: int, ops: Mapping[int, SymMultiMap]) -> "LinfAlgebra":
        return LinfAlgebra(space, max_arity,
                           _fill(ops, max_arity, lambda k: k, lambda k: k - 2,
                                 space, None, space, "l"))

    def op(self, k: int) -> SymMultiMap:
        if 1 <= k <= self.max_arity:
            return self.ops[k - 1]
        return zero_map(k, k - 2, self.space, self.space)


@dataclass(frozen=True)
class LinfMorphism:
    """Components f_n: source^(x)n -> target (arity n, degree n-1)."""

    source: LinfAlgebra
    target: LinfAlgebra
    max_arity: int
    comps: Tuple[SymMultiMap, ...]

    @staticmethod
    def build(source: LinfAlgebra, target: LinfAlgebra, max_arity: int,
              comps: Mapping[int, SymMultiMap]) -> "LinfMorphism":
        return LinfMorphism(source, target, max_arity,
                            _fill(comps, max_arity, lambda k: k, lambda k: k - 1,
                                  source.space, None, target.space, "f"))

    def comp(self, k: int) -> SymMultiMap:
        if 1 <= k <= self.max_arity:
            return self.comps[k - 1]
        return zero_map(k, k - 1, self.source.space, self.target.space)


@dataclass(frozen=True)
class LinfModule:
    """Operations k_n on n-1 algebra slots plus one module slot, degree n-2."""

    algebra: LinfAlgebra
    space: GradedSpace
    max_arity: int
    ops: Tuple[SymMultiMap, ...]

    @staticmethod
    def build(algebra: LinfAlgebra, space: GradedSpace, max_arity: int,
              ops: Mapping[int, SymMultiMap]) -> "LinfModule":
        return LinfModule(algebra, space, max_arity,
                          _fill(ops, max_arity, lambda k: k, lambda k: k - 2,
                                algebra.space, space, space, "k"))

    def op(self, k: int) -> SymMultiMap:
        if 1 <= k <= self.max_arity:
            return self.ops[k - 1]
        return zero_map(k, k - 2, self.algebra.space, self.space, last_space=self.space)


@dataclass(frozen=True)
class ModuleMorphism:
    """Components h_n (n-1 algebra slots plus module slot, degree n-1)."""

    source: LinfModule
    target: LinfModule
    max_arity: int
    comps: Tuple[SymMultiMap, ...]

    @staticmethod
    def build(source: LinfModule, target: LinfModule, max_arity: int,
              comps: Mapping[int, SymMultiMap]) -> "ModuleMorphism":
        if source.algebra != target.algebra:
            raise ValueError("module morphism requires modules over the same algebra")
        return ModuleMorphism(source, target, max_arity,
                              _fill(comps, max_arity, lambda k: k, lambda k: k - 1,
                                    source.algebra.space, source.space, target.space, "h"))

    def comp(self, k: int) -> SymMultiMap:
        if 1 <= k <= self.max_arity:
            return self.comps[k - 1]
        return zero_map(k, k - 1, self.source.algebra.space, self.target.space,
                        last_space=self.source.space)


# ---------------------------------------------------------------------------
# unshuffle helpers (two-block families with possibly empty blocks)
# ---------------------------------------------------------------------------

def _two_block(n: int, p: int) -> Tuple[Perm, ...]:
    """S(p, n-p) in S_n; empty blocks are dropped, S_0 = {empty perm}."""
    sizes = tuple(s for s in (p, n - p) if s > 0)
    return unshuffles(BlockSpec(sizes))


def _two_block_anchored(n: int, p: int, position: int, value: int) -> Tuple[Perm, ...]:
    return tuple(s for s in _two_block(n, p) if s(position) == value)


def _units(bs: Sequence[Basis]) -> Tuple[Elem, ...]:
    return tuple(unit(b) for b in bs)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

class _Memo:
    """Cache of inner-map evaluations on sorted basis blocks, shared across
    the unshuffle loop of one residual computation."""

    def __init__(self) -> None:
        self._cache: Dict[tuple, Elem] = {}

    def eval(self, m: SymMultiMap, block: Tuple[Basis, ...]) -> Elem:
        key = (id(m), block)
        v = self._cache.get(key)
        if v is None:
            v = m.eval(_units(block))
            self._cache[key] = v
        return v


def _collect(arity: int, shift: int, sym: GradedSpace, cod: GradedSpace,
             last: Optional[GradedSpace], keys: Iterator[Tuple[Basis, ...]],
             term_bits) -> SymMultiMap:
    entries = []
    for key in keys:
        bits = term_bits(key)
        if bits:
            entries.append((key, bits))
    return SymMultiMap(arity, shift, sym, cod, entries, last_space=last)


def _algebra_keys(space: GradedSpace, n: int) -> Iterator[Tuple[Basis, ...]]:
    return itertools.combinations_with_replacement(space.basis(), n)


def _module_keys(alg: GradedSpace, mod: GradedSpace, n: int) -> Iterator[Tuple[Basis, ...]]:
    for xs in itertools.combinations_with_replacement(alg.basis(), n - 1):
        for mb in mod.basis():
            yield xs + (mb,)


def jacobi_residual(algebra: LinfAlgebra, n: int) -> SymMultiMap:
    """The arity-n Jacobi sum  sum_{i+j=n+1} sum_{sigma in S(i,n-i)}
    l_j(l_i(x_{sigma(1)}..x_{sigma(i)}), x_{sigma(i+1)}, ..)  as one map."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    memo = _Memo()

    def term(bs: Tuple[Basis, ...]) -> int:
        bits = 0
        for i in range(1, n + 1):
            j = n + 1 - i
            li, lj = algebra.op(i), algebra.op(j)
            if li.is_zero or lj.is_zero:
                continue
            for sigma in _two_block(n, i):
                ys = apply(sigma, bs)
                inner = memo.eval(li, ys[:i])
                if inner.is_zero:
                    continue
                bits ^= lj.eval((inner,) + _units(ys[i:])).bits
        return bits

    return _collect(n, n - 3, algebra.space, algebra.space, None,
                    _algebra_keys(algebra.space, n), term)


def morphism_residual(mor: LinfMorphism, n: int) -> SymMultiMap:
    """Left side sum f_j(l_k ..) xor right side sum l'_r(f_{i_1} .. f_{i_r})
    of the morphism relation, as one arity-n map source^(x)n -> target."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    src, tgt = mor.source, mor.target
    memo = _Memo()

    def term(bs: Tuple[Basis, ...]) -> int:
        bits = 0
        for k in range(1, n + 1):
            j = n + 1 - k
            lk, fj = src.op(k), mor.comp(j)
            if lk.is_zero or fj.is_zero:
                continue
            for sigma in _two_block(n, k):
                ys = apply(sigma, bs)
                inner = memo.eval(lk, ys[:k])
                if inner.is_zero:
                    continue
                bits ^= fj.eval((inner,) + _units(ys[k:])).bits
        for spec in ordered_partitions(n):
            r = len(spec.sizes)
            lr = tgt.op(r)
            fs = [mor.comp(i) for i in spec.sizes]
            if lr.is_zero or any(f.is_zero for f in fs):
                continue
            for tau in primed_unshuffles(spec):
                ys = apply(tau, bs)
                zs, off = [], 0
                for size, f in zip(spec.sizes, fs):
                    zs.append(memo.eval(f, ys[off:off + size]))
                    off += size
                if any(z.is_zero for z in zs):
                    continue
                bits ^= lr.eval(tuple(zs)).bits
        return bits

    return _collect(n, n - 2, src.space, tgt.space, None,
                    _algebra_keys(src.space, n), term)


def module_residual(module: LinfModule, n: int) -> SymMultiMap:
    """The module relation at arity n: the anchored sums
    sum_{p<n, sigma(n)=n} k_q(l_p .. ) + sum_{sigma(p)=n} k_q(delta(k_p ..))
    as one arity-n map (module slot last)."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    alg = module.algebra
    memo = _Memo()

    def term(key: Tuple[Basis, ...]) -> int:
        bits = 0
        for p in range(1, n):  # p < n
            q = n + 1 - p
            lp, kq = alg.op(p), module.op(q)
            if lp.is_zero or kq.is_zero:
                continue
            for sigma in _two_block_anchored(n, p, n, n):
                ys = apply(sigma, key)
                inner = memo.eval(lp, ys[:p])
                if inner.is_zero:
                    continue
                bits ^= kq.eval((inner,) + _units(ys[p:])).bits
        for p in range(1, n + 1):
            q = n + 1 - p
            kp, kq = module.op(p), module.op(q)
            if kp.is_zero or kq.is_zero:
                continue
            delta = slot_rotation(n, p)
            for sigma in _two_block_anchored(n, p, p, n):
                ys = apply(sigma, key)
                inner = memo.eval(kp, ys[:p])  # ys[p-1] is the module element
                if inner.is_zero:
                    continue
                bits ^= kq.eval(apply(delta, (inner,) + _units(ys[p:]))).bits
        return bits

    return _collect(n, n - 3, alg.space, module.space, module.space,
                    _module_keys(alg.space, module.space, n), term)


def modhom_residual(h: ModuleMorphism, n: int) -> SymMultiMap:
    """The module morphism relation at arity n (module slot last):
    sum h_j(l_i ..) + sum h_j(delta(k_i ..)) + sum k'_r(.., h_s(..))."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    src, tgt = h.source, h.target
    alg = src.algebra
    memo = _Memo()

    def term(key: Tuple[Basis, ...]) -> int:
        xs, mb = key[:-1], key[-1]
        bits = 0
        for i in range(1, n):  # i < n
            j = n + 1 - i
            li, hj = alg.op(i), h.comp(j)
            if li.is_zero or hj.is_zero:
                continue
            for sigma in _two_block_anchored(n, i, n, n):
                ys = apply(sigma, key)
                inner = memo.eval(li, ys[:i])
                if inner.is_zero:
                    continue
                bits ^= hj.eval((inner,) + _units(ys[i:])).bits
        for i in range(1, n + 1):
            j = n + 1 - i
            ki, hj = src.op(i), h.comp(j)
            if ki.is_zero or hj.is_zero:
                continue
            delta = slot_rotation(n, i)
            for sigma in _two_block_anchored(n, i, i, n):
                ys = apply(sigma, key)
                inner = memo.eval(ki, ys[:i])
                if inner.is_zero:
                    continue
                bits ^= hj.eval(apply(delta, (inner,) + _units(ys[i:]))).bits
        for s in range(1, n + 1):
            r = n + 1 - s
            hs, kr = h.comp(s), tgt.op(r)
            if hs.is_zero or kr.is_zero:
                continue
            # tau unshuffles the n-1 algebra inputs into (n-s, s-1); the
            # trailing block and the module element feed h_s, the leading
            # block and h_s's output feed k'_r.
            sizes = tuple(sz for sz in (n - s, s - 1) if sz > 0)
            for tau in unshuffles(BlockSpec(sizes)):
                ys = apply(tau, xs)
                inner = memo.eval(hs, ys[n - s:] + (mb,))
                if inner.is_zero:
                    continue
                bits ^= kr.eval(_units(ys[:n - s]) + (inner,)).bits
        return bits

    return _collect(n, n - 2, alg.space, tgt.space, src.space,
                    _module_keys(alg.space, src.space, n), term)


def residual(structure, n: int) -> SymMultiMap:
    """Dispatch to the defining relation of the structure's kind."""
    if isinstance(structure, LinfAlgebra):
        return jacobi_residual(structure, n)
    if isinstance(structure, LinfMorphism):
        return morphism_residual(structure, n)
    if isinstance(structure, LinfModule):
        return module_residual(structure, n)
    if isinstance(structure, ModuleMorphism):
        return modhom_residual(structure, n)
    raise TypeError(f"no defining relation for {type(structure).__name__}")


def first_failure(structure, up_to: int) -> Optional[Tuple[int, tuple, Elem]]:
    """The first (n, basis tuple, nonzero value) with a nonzero residual for
    n <= up_to, or None when every relation holds."""
    for n in range(1, up_to + 1):
        w = residual(structure, n).witness()
        if w is not None:
            key, elem = w
            return n, key, elem
    return None


# ---------------------------------------------------------------------------
# identity and composition of module morphisms
# ---------------------------------------------------------------------------

def identity_morphism(module: LinfModule) -> ModuleMorphism:
    """h_1 = identity on the module space, h_r = 0 for r >= 2."""
    ident = SymMultiMap(
        1, 0, module.algebra.space, module.space,
        [((b,), 1 << b[1]) for b in module.space.basis()],
        last_space=module.space,
    )
    return ModuleMorphism.build(module, module, module.max_arity, {1: ident})


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """(g o f)_n = sum_{i+j=n+1} sum_{sigma(i)=n} g_j(delta(f_i .. )).

    Component n has degree n-1, since (i-1) + (j-1) = n-1.
    """
    if f.target != g.source:
        raise ValueError("compose(g, f) requires target(f) == source(g)")
    alg = f.source.algebra
    if alg != g.source.algebra:
        raise ValueError("compose requires morphisms over the same algebra")
    N = min(f.max_arity, g.max_arity)
    memo = _Memo()
    comps: dict[int, SymMultiMap] = {}
    for n in range(1, N + 1):

        def term(key: Tuple[Basis, ...], n: int = n) -> int:
            bits = 0
            for i in range(1, n + 1):
                j = n + 1 - i
                fi, gj = f.comp(i), g.comp(j)
                if fi.is_zero or gj.is_zero:
                    continue
                delta = slot_rotation(n, i)
                for sigma in _two_block_anchored(n, i, i, n):
                    ys = apply(sigma, key)
                    inner = memo.eval(fi, ys[:i])
                    if inner.is_zero:
                        continue
                    bits ^= gj.eval(apply(delta, (inner,) + _units(ys[i:]))).bits
            return bits

        comps[n] = _collect(n, n - 1, alg.space, g.target.space, f.source.space,
                            _module_keys(alg.space, f.source.space, n), term)
    return ModuleMorphism.build(f.source, g.target, N, comps)
