"""Vectorized evaluation of one formula over many same-shape lassos.

Internal helper for the falsifier and the bulk cross-check tests; not
part of the public API.  Both routes label every distinct subformula
bottom-up with a boolean matrix of shape (traces, positions), but they
mirror the two per-trace algorithms in ``semantics``:

* :func:`window_block` mirrors ``eval_formula``: every label lives at a
  canonical position, and ``G``/``F``/``U`` scan forward over a
  loop-doubled copy of the child row — the witness bound
  ``stem + 2*loop`` — with no fixpoint reasoning.
* :func:`label_block` mirrors ``eval_oracle``: positions run over
  ``stem + loop`` with the successor of the last position wrapping to
  the loop start, and ``G``/``F``/``U`` are resolved on the loop
  (``F``/``G`` are constant across a loop, ``U`` needs two backward
  passes) before propagating back through the stem.

Keeping the two routes separate preserves the eval/eval_oracle
cross-check at bulk scale.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .formula import (
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
    subformulas,
)


@lru_cache(maxsize=64)
def enumerate_states(num_atoms: int, length: int) -> np.ndarray:
    """All state sequences of ``length`` over ``num_atoms`` atoms.

    Shape (count, length, num_atoms) with count = (2**num_atoms)**length,
    ordered lexicographically: earlier positions vary slowest, and within
    a state the first atom is the most significant bit.  The returned
    array is cached and read-only.
    """
    states = 1 << num_atoms
    count = states**length
    out = np.zeros((count, length, num_atoms), dtype=bool)
    codes = np.arange(count)
    for pos in range(length):
        code = (codes // states ** (length - 1 - pos)) % states
        for j in range(num_atoms):
            out[:, pos, j] = (code >> (num_atoms - 1 - j)) & 1
    out.flags.writeable = False
    return out


def _positions_label(stems: np.ndarray, loops: np.ndarray) -> np.ndarray:
    return np.concatenate([stems, loops], axis=1)


def _shifted(arr: np.ndarray, wrap_to: int) -> np.ndarray:
    """Successor view: column p becomes column p+1, last wraps to ``wrap_to``."""
    out = np.empty_like(arr)
    out[:, :-1] = arr[:, 1:]
    out[:, -1] = arr[:, wrap_to]
    return out


def _boolean_row(g: Formula, label: dict, cells: np.ndarray, index: dict,
                 wrap_to: int) -> np.ndarray | None:
    """Rows shared by both routes: atoms, constants, connectives, steps."""
    n, cols = cells.shape[0], cells.shape[1]
    if isinstance(g, Atom):
        return cells[:, :, index[g.name]]
    if isinstance(g, ConstTrue):
        return np.ones((n, cols), dtype=bool)
    if isinstance(g, ConstFalse):
        return np.zeros((n, cols), dtype=bool)
    if isinstance(g, Not):
        return ~label[g.child]
    if isinstance(g, And):
        return label[g.left] & label[g.right]
    if isinstance(g, Or):
        return label[g.left] | label[g.right]
    if isinstance(g, Implies):
        return ~label[g.left] | label[g.right]
    if isinstance(g, Iff):
        return label[g.left] == label[g.right]
    if isinstance(g, Next):
        return _shifted(label[g.child], wrap_to)
    if isinstance(g, RiseEdge):
        child = label[g.child]
        return ~child & _shifted(child, wrap_to)
    if isinstance(g, FallEdge):
        child = label[g.child]
        return child & ~_shifted(child, wrap_to)
    if isinstance(g, AnyEdge):
        child = label[g.child]
        return child != _shifted(child, wrap_to)
    return None


def window_block(f: Formula, atoms: tuple[str, ...], stems: np.ndarray,
                 loops: np.ndarray) -> np.ndarray:
    """Truth of ``f`` at position 0 for each lasso, scan route.

    ``stems`` has shape (n, stem_len, len(atoms)); ``loops`` likewise
    with a nonempty loop.  Returns a boolean vector of length n.
    """
    n, stem_len = stems.shape[0], stems.shape[1]
    loop_len = loops.shape[1]
    if n == 0:
        return np.zeros(0, dtype=bool)
    cells = _positions_label(stems, loops)
    index = {name: j for j, name in enumerate(atoms)}

    def doubled(row: np.ndarray) -> np.ndarray:
        # Canonical row extended by a second loop copy: a forward scan
        # over it visits every position reachable from any start, and a
        # minimal until witness repeats a canonical position otherwise.
        return np.concatenate([row, row[:, stem_len:]], axis=1)

    label: dict[Formula, np.ndarray] = {}
    for g in subformulas(f):
        row = _boolean_row(g, label, cells, index, stem_len)
        if row is not None:
            label[g] = row
            continue
        if isinstance(g, Eventually):
            ext = doubled(label[g.child])
            acc = np.logical_or.accumulate(ext[:, ::-1], axis=1)[:, ::-1]
            row = acc[:, : stem_len + loop_len].copy()
        elif isinstance(g, Always):
            ext = doubled(label[g.child])
            acc = np.logical_and.accumulate(ext[:, ::-1], axis=1)[:, ::-1]
            row = acc[:, : stem_len + loop_len].copy()
        elif isinstance(g, Until):
            left, right = doubled(label[g.left]), doubled(label[g.right])
            u = right.copy()
            for p in range(u.shape[1] - 2, -1, -1):
                u[:, p] = right[:, p] | (left[:, p] & u[:, p + 1])
            row = u[:, : stem_len + loop_len]
        else:
            raise TypeError(f"not a formula: {g!r}")
        label[g] = row
    return label[f][:, 0].copy()


def label_block(f: Formula, atoms: tuple[str, ...], stems: np.ndarray,
                loops: np.ndarray) -> np.ndarray:
    """Truth of ``f`` at position 0 for each lasso, labeling route."""
    n, stem_len = stems.shape[0], stems.shape[1]
    loop_len = loops.shape[1]
    if n == 0:
        return np.zeros(0, dtype=bool)
    cells = _positions_label(stems, loops)
    index = {name: j for j, name in enumerate(atoms)}
    label: dict[Formula, np.ndarray] = {}
    for g in subformulas(f):
        row = _boolean_row(g, label, cells, index, stem_len)
        if row is not None:
            label[g] = row
            continue
        if isinstance(g, Eventually):
            child = label[g.child]
            row = np.empty_like(child)
            # From inside the loop every loop position is in the future.
            loop_any = child[:, stem_len:].any(axis=1)
            row[:, stem_len:] = loop_any[:, None]
            if stem_len:
                stem_suffix = np.logical_or.accumulate(
                    child[:, stem_len - 1 :: -1], axis=1
                )[:, ::-1]
                row[:, :stem_len] = stem_suffix | loop_any[:, None]
        elif isinstance(g, Always):
            child = label[g.child]
            row = np.empty_like(child)
            loop_all = child[:, stem_len:].all(axis=1)
            row[:, stem_len:] = loop_all[:, None]
            if stem_len:
                stem_suffix = np.logical_and.accumulate(
                    child[:, stem_len - 1 :: -1], axis=1
                )[:, ::-1]
                row[:, :stem_len] = stem_suffix & loop_all[:, None]
        elif isinstance(g, Until):
            left, right = label[g.left], label[g.right]
            row = right.copy()
            last = stem_len + loop_len - 1
            for _ in range(2):
                row[:, last] = right[:, last] | (
                    left[:, last] & row[:, stem_len]
                )
                for p in range(last - 1, stem_len - 1, -1):
                    row[:, p] = right[:, p] | (left[:, p] & row[:, p + 1])
            for p in range(stem_len - 1, -1, -1):
                row[:, p] = right[:, p] | (left[:, p] & row[:, p + 1])
        else:
            raise TypeError(f"not a formula: {g!r}")
        label[g] = row
    return label[f][:, 0].copy()
