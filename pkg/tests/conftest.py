"""Shared generators for the test suite.

The random-formula generator is deliberately plain (seeded random.Random,
no hypothesis shrinking) so the bulk acceptance runs are reproducible and
fast; hypothesis is used in the per-module tests where shrinking helps.
"""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from ltledge.formula import (
    Always,
    And,
    AnyEdge,
    Atom,
    ConstFalse,
    ConstTrue,
    Eventually,
    FallEdge,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    RiseEdge,
    Until,
)
from ltledge.semantics import LassoTrace

BINARY_OPS = (And, Or, Implies, Iff, Until)
UNARY_CORE = (Not, Always, Eventually)


def gen_formula(rng: random.Random, max_depth: int,
                atoms: tuple[str, ...] = ("p", "q"),
                next_free: bool = False,
                edge_free: bool = False) -> Formula:
    """Random formula; ``next_free`` also excludes edges (sugared nexts)."""
    unary = list(UNARY_CORE)
    if not next_free:
        unary.append(Next)
    if not (next_free or edge_free):
        unary.extend((RiseEdge, FallEdge, AnyEdge))
    if max_depth == 0:
        roll = rng.randrange(6)
        if roll == 0:
            return ConstTrue()
        if roll == 1:
            return ConstFalse()
        return Atom(rng.choice(atoms))
    roll = rng.randrange(14)
    if roll < 4:
        return Atom(rng.choice(atoms))
    if roll < 9:
        op = rng.choice(BINARY_OPS)
        return op(gen_formula(rng, max_depth - 1, atoms, next_free, edge_free),
                  gen_formula(rng, max_depth - 1, atoms, next_free, edge_free))
    op = rng.choice(unary)
    return op(gen_formula(rng, max_depth - 1, atoms, next_free, edge_free))


def formula_strategy(atoms: tuple[str, ...] = ("p", "q"),
                     max_leaves: int = 12) -> st.SearchStrategy[Formula]:
    leaf = st.one_of(
        st.sampled_from([Atom(a) for a in atoms]),
        st.just(ConstTrue()),
        st.just(ConstFalse()),
    )

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(BINARY_OPS), children, children).map(
                lambda t: t[0](t[1], t[2])
            ),
            st.tuples(
                st.sampled_from(
                    UNARY_CORE + (Next, RiseEdge, FallEdge, AnyEdge)
                ),
                children,
            ).map(lambda t: t[0](t[1])),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)


def all_lassos(atoms: tuple[str, ...], max_stem: int, max_loop: int):
    """Every lasso with the given atoms and size bounds, smallest first."""
    states = list(itertools.product((False, True), repeat=len(atoms)))
    for stem_len in range(max_stem + 1):
        for loop_len in range(1, max_loop + 1):
            for stem in itertools.product(states, repeat=stem_len):
                for loop in itertools.product(states, repeat=loop_len):
                    yield LassoTrace(atoms, stem, loop)
