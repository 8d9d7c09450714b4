"""Greedy pairwise contraction of labelled tensor networks.

``numpy.einsum`` caps the number of distinct index labels, so networks are
contracted pair by pair, each pair through a small einsum with its own
relabelling.  Labels are arbitrary hashables.
"""

from __future__ import annotations

import string
from typing import Hashable, Sequence

import numpy as np

_LETTERS = string.ascii_letters


def _einsum(ops: Sequence[np.ndarray], labels: Sequence[Sequence[Hashable]], out: Sequence[Hashable]) -> np.ndarray:
    table: dict = {}
    for lab in list(labels) + [out]:
        for x in lab:
            if x not in table:
                table[x] = _LETTERS[len(table)]
    expr = ",".join("".join(table[x] for x in lab) for lab in labels) + "->" + "".join(table[x] for x in out)
    return np.einsum(expr, *ops, optimize=len(ops) > 2)


def contract(tensors: Sequence[np.ndarray], labels: Sequence[Sequence[Hashable]], output: Sequence[Hashable]) -> np.ndarray:
    """Sum over every label not in ``output``; each label may appear any number of times.

    Shared labels between more than two tensors act as hyperedges (diagonal
    constraints), which is how a batch axis is threaded through a network.
    """
    items = [(np.asarray(t), list(lab)) for t, lab in zip(tensors, labels)]
    output = list(output)
    if not items:
        return np.ones(())

    def needed(skip: set) -> set:
        s = set(output)
        for j, (_, lab) in enumerate(items):
            if j not in skip:
                s.update(lab)
        return s

    # single-tensor reductions first
    for j in range(len(items)):
        t, lab = items[j]
        items[j] = _reduce_self(t, lab, needed({j}))

    while len(items) > 1:
        best = None
        for a in range(len(items)):
            la = set(items[a][1])
            for b in range(a + 1, len(items)):
                shared = la & set(items[b][1])
                if not shared:
                    continue
                keep = needed({a, b})
                res = [x for x in dict.fromkeys(items[a][1] + items[b][1]) if x in keep]
                size = 1
                for x in res:
                    size *= _dim_of(items, x)
                key = (size, a, b)
                if best is None or key < best[0]:
                    best = (key, a, b, res)
        if best is None:
            # disconnected pieces: outer product of the two smallest
            order = sorted(range(len(items)), key=lambda j: items[j][0].size)
            a, b = sorted(order[:2])
            keep = needed({a, b})
            res = [x for x in dict.fromkeys(items[a][1] + items[b][1]) if x in keep]
        else:
            _, a, b, res = best
        (ta, la), (tb, lb) = items[a], items[b]
        new = (_einsum([ta, tb], [la, lb], res), res)
        items = [it for j, it in enumerate(items) if j not in (a, b)] + [new]

    t, lab = items[0]
    return _einsum([t], [lab], output)


def _reduce_self(t: np.ndarray, lab: list, keep: set) -> tuple[np.ndarray, list]:
    """Collapse repeated labels to diagonals and sum labels needed nowhere else."""
    out = [x for x in dict.fromkeys(lab) if x in keep]
    if out == lab:
        return t, lab
    return _einsum([t], [lab], out), out


def _dim_of(items, x) -> int:
    for t, lab in items:
        if x in lab:
            return t.shape[lab.index(x)]
    raise KeyError(x)
