"""Tensor-analogue subsets of the base group, by exhaustive table scans.

Everything here returns subgroups of the base group; closure is verified,
never assumed, and a closure failure carries an explicit witness.
"""

from __future__ import annotations

import numpy as np

from .errors import NotClosed
from .groups import FiniteGroup, Subgroup
from .tensor import TensorSquare


def _closure_witness(g: FiniteGroup, elements) -> dict | None:
    elems = sorted(int(e) for e in elements)
    inside = np.zeros(g.order, dtype=bool)
    inside[elems] = True
    if not inside[0]:
        return {"missing_identity": True}
    sub = g.cayley[np.ix_(elems, elems)]
    bad = np.argwhere(~inside[sub])
    if bad.size:
        i, j = bad[0]
        return {
            "x": int(elems[i]),
            "y": int(elems[j]),
            "product": int(sub[i, j]),
        }
    if not inside[g.inverses[elems]].all():
        x = next(e for e in elems if not inside[g.inverses[e]])
        return {"x": int(x), "inverse": int(g.inverses[x])}
    return None


def _checked_subgroup(g: FiniteGroup, elements, what: str) -> Subgroup:
    witness = _closure_witness(g, elements)
    if witness is not None:
        raise NotClosed(f"{what} is not a subgroup", witness=witness)
    return g.subgroup(elements)


def tensor_center(ts: TensorSquare) -> Subgroup:
    """Elements pairing trivially with everything."""
    mask = (ts.pairing == 0).all(axis=1)
    return _checked_subgroup(ts.base, np.nonzero(mask)[0].tolist(), "tensor center")


def tensor_annihilator(ts: TensorSquare, xs) -> Subgroup:
    """Elements pairing trivially with every member of ``xs``."""
    xs = sorted({int(x) for x in xs})
    if not xs:
        return ts.base.subgroup(range(ts.base.order))
    mask = (ts.pairing[:, xs] == 0).all(axis=1)
    return _checked_subgroup(
        ts.base, np.nonzero(mask)[0].tolist(), f"tensor annihilator of {xs}"
    )


def _iterated_commutator_values(g: FiniteGroup, a: int, depth: int) -> np.ndarray:
    """All values of left-normed commutators [a, g₁, …, g_depth]."""
    comm = g.commutator_table()
    vals = np.array([a], dtype=np.int64)
    for _ in range(depth):
        vals = np.unique(comm[vals, :])
    return vals


def nth_tensor_center(ts: TensorSquare, n: int) -> Subgroup:
    """Elements whose depth-(n-1) left-normed commutators all lie in the
    tensor center; n = 1 is the tensor center itself."""
    if n < 1:
        raise ValueError("n must be at least 1")
    in_tz = (ts.pairing == 0).all(axis=1)
    keep = [
        a
        for a in range(ts.base.order)
        if bool(in_tz[_iterated_commutator_values(ts.base, a, n - 1)].all())
    ]
    return _checked_subgroup(ts.base, keep, f"tensor center of weight {n}")


def nth_center_by_scan(g: FiniteGroup, n: int) -> Subgroup:
    """Oracle counterpart of the lifted upper central series: elements whose
    depth-n left-normed commutators are all trivial."""
    keep = [
        a
        for a in range(g.order)
        if bool((_iterated_commutator_values(g, a, n) == 0).all())
    ]
    return g.subgroup(keep)


def right_2_tensor_engel(ts: TensorSquare) -> Subgroup:
    """Elements g with [g, x] pairing trivially against x for every x."""
    g = ts.base
    comm = g.commutator_table()
    vals = ts.pairing[comm, np.arange(g.order)[None, :]]
    mask = (vals == 0).all(axis=1)
    return _checked_subgroup(
        g, np.nonzero(mask)[0].tolist(), "right tensor Engel set"
    )


def right_2_engel(g: FiniteGroup) -> Subgroup:
    """Classical right 2-Engel set: [[g, x], x] trivial for every x."""
    comm = g.commutator_table()
    vals = comm[comm, np.arange(g.order)[None, :]]
    mask = (vals == 0).all(axis=1)
    return _checked_subgroup(g, np.nonzero(mask)[0].tolist(), "right 2-Engel set")


def centralizer_of_tensor_square(ts: TensorSquare) -> Subgroup:
    """Kernel of the action homomorphism: elements acting trivially on the
    whole tensor square."""
    idx = np.arange(ts.order, dtype=np.int32)
    mask = (ts.action == idx[:, None]).all(axis=0)
    return _checked_subgroup(
        ts.base, np.nonzero(mask)[0].tolist(), "action centralizer"
    )


def is_characteristic(sub: Subgroup, images_matrix: np.ndarray) -> bool:
    """Whether every automorphism (rows of ``images_matrix``) fixes the
    subgroup setwise."""
    elems = np.array(sub.elements, dtype=np.int64)
    target = np.sort(elems)
    mapped = np.sort(images_matrix[:, elems], axis=1)
    return bool((mapped == target[None, :]).all())
