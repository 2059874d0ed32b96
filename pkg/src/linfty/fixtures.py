"""
Named fixture bundles.

Every bundle verifies cleanly at max_arity 6; the test suite re-derives that
by brute force.  The shapes are chosen so the interesting sums are exercised:

- heisenberg-adjoint: the three-dimensional nonabelian nilpotent algebra in
  degree 0, its adjoint module, and the inclusion of the abelian subalgebra
  spanned by the first and third basis vectors.
- truncated-l3: one nonzero triple bracket from degree 0 to degree 1; every
  composite bracket hits the missing degrees, so the Jacobi sum vanishes for
  degree reasons.
- abelian-i2: two abelian algebras bridged by a morphism with a nonzero
  quadratic part, and a target module whose differential and action are
  coupled (each stored bit is load-bearing for the module relation).
- lie-corollary: the same data as heisenberg-adjoint; named separately as the
  degree-0 specialization used to compare against the classical pulled-back
  representation.
- functoriality-chain: a chain A -> B -> C of module morphisms with nonzero
  quadratic components over a morphism with nonzero quadratic part, plus a
  self-morphism of C so three-fold compositions can be tested.
"""

from __future__ import annotations

from typing import Callable, Dict

from .gfa import GradedSpace, SymMultiMap
from .jsonio import Bundle
from .structures import LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism

__all__ = ["FIXTURES", "build", "heisenberg_adjoint", "truncated_l3", "abelian_i2",
           "lie_corollary", "functoriality_chain"]

N = 6  # truncation arity shared by all fixtures


def _m(arity, shift, sym, cod, entries, last=None) -> SymMultiMap:
    return SymMultiMap(arity, shift, sym, cod, entries, last_space=last)


def heisenberg_adjoint() -> Bundle:
    L = GradedSpace({0: 3})        # basis e=(0,0), f=(0,1), h=(0,2)
    S = GradedSpace({0: 2})        # basis u=(0,0) -> e, w=(0,1) -> h
    e, f, h = (0, 0), (0, 1), (0, 2)
    u, w = (0, 0), (0, 1)

    heis = LinfAlgebra.build(L, N, {2: _m(2, 0, L, L, [((e, f), 0b100)])})
    sub = LinfAlgebra.build(S, N, {})
    incl = LinfMorphism.build(sub, heis, N, {
        1: _m(1, 0, S, L, [((u,), 0b001), ((w,), 0b100)]),
    })
    # adjoint action: the bracket with the module slot in the second argument
    adjoint = LinfModule.build(heis, L, N, {
        2: _m(2, 0, L, L, [((e, f), 0b100), ((f, e), 0b100)], last=L),
    })

    b = Bundle()
    b.spaces = {"L": L, "sub": S}
    b.structures = {"heisenberg": heis, "subalgebra": sub, "inclusion": incl,
                    "adjoint": adjoint}
    return b


def truncated_l3() -> Bundle:
    V = GradedSpace({0: 2, 1: 1})  # a=(0,0), b=(0,1), w=(1,0)
    a, bb = (0, 0), (0, 1)
    alg = LinfAlgebra.build(V, N, {3: _m(3, 1, V, V, [((a, a, bb), 0b1)])})
    b = Bundle()
    b.spaces = {"V": V}
    b.structures = {"truncated": alg}
    return b


def abelian_i2() -> Bundle:
    Lp = GradedSpace({0: 2})           # p=(0,0), q=(0,1)
    Lz = GradedSpace({1: 1})           # z=(1,0)
    M = GradedSpace({0: 1, 1: 2, 2: 1})  # m0=(0,0), m1=(1,0), m1p=(1,1), m2=(2,0)
    p, q, z = (0, 0), (0, 1), (1, 0)
    m0, m1, m2 = (0, 0), (1, 0), (2, 0)

    src = LinfAlgebra.build(Lp, N, {})
    tgt = LinfAlgebra.build(Lz, N, {})
    # the morphism relation between abelian algebras is vacuous, so any table works;
    # the quadratic part is what restriction is sensitive to
    I = LinfMorphism.build(src, tgt, N, {2: _m(2, 1, Lp, Lz, [((p, q), 0b1)])})
    # differential m1 -> m0, m2 -> m1'; action of z: m0 -> m1', m1 -> m2.
    # The module relation ties each bit to the others: flipping any one of
    # them makes some arity <= 2 residual nonzero.
    mod = LinfModule.build(tgt, M, N, {
        1: _m(1, -1, Lz, M, [((m1,), 0b01), ((m2,), 0b10)], last=M),
        2: _m(2, 0, Lz, M, [((z, m0), 0b10), ((z, m1), 0b01)], last=M),
    })

    b = Bundle()
    b.spaces = {"i2_src_space": Lp, "i2_tgt_space": Lz, "i2_mod_space": M}
    b.structures = {"i2_source": src, "i2_target": tgt, "I2": I, "M2": mod}
    return b


def lie_corollary() -> Bundle:
    return heisenberg_adjoint()


def functoriality_chain() -> Bundle:
    Lp = GradedSpace({-1: 2})      # p=(-1,0), q=(-1,1)
    Lz = GradedSpace({-1: 1})      # z=(-1,0)
    p, q, z = (-1, 0), (-1, 1), (-1, 0)

    src = LinfAlgebra.build(Lp, N, {})
    tgt = LinfAlgebra.build(Lz, N, {})
    I = LinfMorphism.build(src, tgt, N, {
        1: _m(1, 0, Lp, Lz, [((p,), 0b1)]),
        2: _m(2, 1, Lp, Lz, [((p, q), 0b1)]),
    })

    def two_step_module(dims) -> LinfModule:
        # differential x1 -> x0 and action z.x1 = x0 on the index-0 vectors;
        # any extra basis vectors are inert.  The three modules get distinct
        # space shapes so name resolution between them is unambiguous.
        Msp = GradedSpace(dims)
        x0, x1 = (0, 0), (1, 0)
        return LinfModule.build(tgt, Msp, N, {
            1: _m(1, -1, Lz, Msp, [((x1,), 0b1)], last=Msp),
            2: _m(2, 0, Lz, Msp, [((z, x1), 0b1)], last=Msp),
        })

    A = two_step_module({0: 1, 1: 1})
    B = two_step_module({0: 2, 1: 1})
    C = two_step_module({0: 1, 1: 2})
    x0, x1 = (0, 0), (1, 0)

    def level_morphism(source: LinfModule, target: LinfModule) -> ModuleMorphism:
        # h1 carrying the index-0 vectors across with the matching h2; every
        # bit of the module operations of source and target appears in its
        # arity-2 relation
        return ModuleMorphism.build(source, target, N, {
            1: _m(1, 0, Lz, target.space, [((x0,), 0b1), ((x1,), 0b1)], last=source.space),
            2: _m(2, 1, Lz, target.space, [((z, x0), 0b1), ((z, x1), 0b1)], last=source.space),
        })

    f = level_morphism(A, B)
    g = level_morphism(B, C)
    t = level_morphism(C, C)

    b = Bundle()
    b.spaces = {"chain_src_space": Lp, "chain_tgt_space": Lz,
                "A_space": A.space, "B_space": B.space, "C_space": C.space}
    b.structures = {"chain_source": src, "chain_target": tgt, "I_chain": I,
                    "A": A, "B": B, "C": C, "f": f, "g": g, "t": t}
    return b


FIXTURES: Dict[str, Callable[[], Bundle]] = {
    "heisenberg-adjoint": heisenberg_adjoint,
    "truncated-l3": truncated_l3,
    "abelian-i2": abelian_i2,
    "lie-corollary": lie_corollary,
    "functoriality-chain": functoriality_chain,
}


def build(name: str) -> Bundle:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
