"""
Restriction of scalars along an algebra morphism I: L' -> L.

An L-module pulls back to an L'-module by feeding primed-unshuffled groups of
inputs through the components of I before acting:

    k'_1 = k_1
    k'_n = sum over nondecreasing compositions i_1 + ... + i_r = n-1
           and tau in S'(i_1, ..., i_r) of
           k_{r+1} o (I_{i_1} (x) ... (x) I_{i_r} (x) Id) o (tau (x) Id)

and a module morphism f pulls back by the same formula with f_{r+1} in place
of k_{r+1} (so (I*f)_1 = f_1 on the nose).  Both constructions produce
structures satisfying their defining relations; ``restrict_module`` and
``restrict_morphism`` re-verify this by default, since a failure there for
verified inputs can only mean an implementation bug.

The restricted structures share the source algebra object of I by reference,
so later compositions can check algebra identity cheaply.
"""

from __future__ import annotations

import itertools
import warnings as _warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .gfa import Elem, SymMultiMap, unit
from .perm import apply, ordered_partitions, primed_unshuffles
from .structures import (
    LinfAlgebra,
    LinfModule,
    LinfMorphism,
    ModuleMorphism,
    first_failure,
    modhom_residual,
    module_residual,
    morphism_residual,
)

__all__ = [
    "RestrictionContext",
    "RestrictionError",
    "UnverifiedInputWarning",
    "context",
    "restrict_module",
    "restrict_morphism",
    "check_functoriality",
    "FunctorialityReport",
    "classical_restriction",
]


class RestrictionError(RuntimeError):
    """Output of a restriction failed verification despite verified inputs."""


class UnverifiedInputWarning(UserWarning):
    """A restriction was computed from inputs that fail their relations."""


@dataclass(frozen=True)
class RestrictionContext:
    """An algebra morphism I: L' -> L together with the truncation arity
    shared by every structure passing through it."""

    morphism: LinfMorphism
    max_arity: int
    morphism_verified: bool

    @property
    def source(self) -> LinfAlgebra:
        return self.morphism.source

    @property
    def target(self) -> LinfAlgebra:
        return self.morphism.target


def context(morphism: LinfMorphism, max_arity: Optional[int] = None) -> RestrictionContext:
    """Verify the morphism up to the truncation arity and wrap it.

    A morphism with nonzero residuals is still usable (handy when debugging
    one's own I), but the fact is recorded and every restriction through the
    context warns and skips its output check.
    """
    N = morphism.max_arity if max_arity is None else max_arity
    ok = all(morphism_residual(morphism, n).is_zero for n in range(1, N + 1))
    if not ok:
        _warnings.warn("algebra morphism fails its relation; restrictions will be unverified",
                       UnverifiedInputWarning, stacklevel=2)
    return RestrictionContext(morphism, N, ok)


def _pullback_tables(ctx: RestrictionContext, comp_of, module_space, n: int) -> SymMultiMap:
    """The arity-n pullback component: comp_of(r+1) applied after grouped I's.

    comp_of(k) supplies either the module operations or the morphism
    components being restricted; both have n-1 symmetric slots over L and a
    final module slot at arity n.
    """
    I = ctx.morphism
    src_basis = ctx.source.space.basis()
    entries = []
    template = comp_of(n)  # fixes shift and codomain conventions
    for xs in itertools.combinations_with_replacement(src_basis, n - 1):
        for mb in module_space.basis():
            bits = 0
            for spec in ordered_partitions(n - 1):
                r = len(spec.sizes)
                outer = comp_of(r + 1)
                comps = [I.comp(i) for i in spec.sizes]
                if outer.is_zero or any(c.is_zero for c in comps):
                    continue
                for tau in primed_unshuffles(spec):
                    ys = apply(tau, xs)
                    zs: List[Elem] = []
                    off = 0
                    for size, c in zip(spec.sizes, comps):
                        zs.append(c.eval(tuple(unit(b) for b in ys[off:off + size])))
                        off += size
                    if any(z.is_zero for z in zs):
                        continue
                    bits ^= outer.eval(tuple(zs) + (unit(mb),)).bits
            if bits:
                entries.append((xs + (mb,), bits))
    return SymMultiMap(n, template.shift, ctx.source.space, template.codomain,
                       entries, last_space=module_space)


def _rebuild_arity_one(m: SymMultiMap, new_sym) -> SymMultiMap:
    # an arity-1 module map has no symmetric slots; only the slot space label changes
    return SymMultiMap(1, m.shift, new_sym, m.codomain, m.entries(), last_space=m.last_space)


def _check_inputs(ctx: RestrictionContext, verified: bool) -> bool:
    if not (ctx.morphism_verified and verified):
        _warnings.warn("restriction computed from unverified inputs; output not checked",
                       UnverifiedInputWarning, stacklevel=3)
        return False
    return True


def restrict_module(ctx: RestrictionContext, module: LinfModule, *, verify: bool = True) -> LinfModule:
    """The pullback module over the source algebra of the context.

    The module differential is unchanged (the composition sum is empty at
    n = 1); higher operations are the grouped-unshuffle sums.  With
    ``verify`` the input relations are checked first and the output relations
    afterwards; an output failure for verified inputs raises.
    """
    if module.algebra != ctx.target:
        raise ValueError("module is not over the target algebra of the context")
    if module.max_arity != ctx.max_arity:
        raise ValueError(
            f"truncation mismatch: module at {module.max_arity}, context at {ctx.max_arity}")
    N = ctx.max_arity
    inputs_ok = True
    if verify:
        inputs_ok = all(module_residual(module, n).is_zero for n in range(1, N + 1))
        inputs_ok = _check_inputs(ctx, inputs_ok)

    ops = {1: _rebuild_arity_one(module.op(1), ctx.source.space)}
    for n in range(2, N + 1):
        ops[n] = _pullback_tables(ctx, module.op, module.space, n)
    result = LinfModule.build(ctx.source, module.space, N, ops)

    if verify and inputs_ok:
        failure = first_failure(result, N)
        if failure is not None:
            raise RestrictionError(
                "restricted module fails its relation at arity "
                f"{failure[0]} on {failure[1]}; inputs were verified, so this "
                "indicates an implementation bug")
    return result


def restrict_morphism(ctx: RestrictionContext, f: ModuleMorphism, *, verify: bool = True) -> ModuleMorphism:
    """The pullback of a module morphism; its first component is f_1 verbatim."""
    if f.source.algebra != ctx.target:
        raise ValueError("morphism is not between modules over the target algebra")
    if f.max_arity != ctx.max_arity:
        raise ValueError(
            f"truncation mismatch: morphism at {f.max_arity}, context at {ctx.max_arity}")
    N = ctx.max_arity
    inputs_ok = True
    if verify:
        inputs_ok = all(modhom_residual(f, n).is_zero for n in range(1, N + 1))
        inputs_ok = _check_inputs(ctx, inputs_ok)

    src = restrict_module(ctx, f.source, verify=False)
    tgt = restrict_module(ctx, f.target, verify=False)
    comps = {1: _rebuild_arity_one(f.comp(1), ctx.source.space)}
    for n in range(2, N + 1):
        comps[n] = _pullback_tables(ctx, f.comp, f.source.space, n)
    result = ModuleMorphism.build(src, tgt, N, comps)

    if verify and inputs_ok:
        failure = first_failure(result, N)
        if failure is not None:
            raise RestrictionError(
                "restricted morphism fails its relation at arity "
                f"{failure[0]} on {failure[1]}; inputs were verified, so this "
                "indicates an implementation bug")
    return result


@dataclass(frozen=True)
class FunctorialityReport:
    """Componentwise comparison of restricting a composite against composing
    the restrictions."""

    max_arity: int
    mismatches: Tuple[Tuple[int, tuple, Elem], ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_functoriality(ctx: RestrictionContext, f: ModuleMorphism, g: ModuleMorphism) -> FunctorialityReport:
    """Compare restrict(g o f) with restrict(g) o restrict(f), component by
    component up to the context arity."""
    from .structures import compose  # local to keep the import graph flat

    lhs = restrict_morphism(ctx, compose(g, f), verify=False)
    rhs = compose(restrict_morphism(ctx, g, verify=False),
                  restrict_morphism(ctx, f, verify=False))
    mismatches = []
    for n in range(1, ctx.max_arity + 1):
        diff = lhs.comp(n) + rhs.comp(n)
        w = diff.witness()
        if w is not None:
            mismatches.append((n, w[0], w[1]))
    return FunctorialityReport(ctx.max_arity, tuple(mismatches))


def _lie_shaped_ops(ops, what: str) -> None:
    for k, m in enumerate(ops, start=1):
        if k != 2 and k != 1 and not m.is_zero:
            raise ValueError(f"{what}: operation of arity {k} is nonzero; not Lie-shaped")


def classical_restriction(phi: LinfMorphism, module: LinfModule) -> LinfModule:
    """The textbook restriction for Lie-algebra representations: the pulled
    back action (y, m) -> k_2(phi_1(y), m), everything in degree 0, phi
    strict.  Agrees bit for bit with restrict_module on such inputs."""
    spaces = (phi.source.space, phi.target.space, module.space)
    if any(sp.degrees() not in ((), (0,)) for sp in spaces):
        raise ValueError("classical restriction needs everything in degree 0")
    for k in range(2, phi.max_arity + 1):
        if not phi.comp(k).is_zero:
            raise ValueError("classical restriction needs a strict morphism")
    _lie_shaped_ops(phi.source.ops, "source algebra")
    _lie_shaped_ops(phi.target.ops, "target algebra")
    _lie_shaped_ops(module.ops, "module")
    if module.algebra != phi.target:
        raise ValueError("module is not over the target algebra of the morphism")

    phi1 = phi.comp(1)
    k2 = module.op(2)
    entries = []
    for y in phi.source.space.basis():
        for mb in module.space.basis():
            bits = k2.eval((phi1.eval((unit(y),)), unit(mb))).bits
            if bits:
                entries.append(((y, mb), bits))
    pulled = SymMultiMap(2, 0, phi.source.space, module.space, entries,
                         last_space=module.space)
    ops = {1: _rebuild_arity_one(module.op(1), phi.source.space), 2: pulled}
    return LinfModule.build(phi.source, module.space, module.max_arity, ops)
