"""Automorphism groups of small finite groups and their classification into
commuting / central automorphisms and the tensor analogues of both.

Composition is "apply left operand first", which makes g ↦ (conjugation by g)
a homomorphism onto the inner automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundExceeded, StructureError, SubgroupViolation
from .groups import FiniteGroup, Subgroup, find_homomorphism_images
from .perms import inverse_perm, perm_order
from .tensor import TensorSquare

AUT_ORDER_BOUND = 24
AUT_ORDER_BOUND_SLOW = 60
AUT_COUNT_BOUND = 50_000


@dataclass
class Automorphism:
    """One automorphism as a permutation of element indices, with
    classification flags (None until classified)."""

    group: FiniteGroup
    images: np.ndarray
    inner_inducer: int | None = None
    commuting: bool | None = None
    tensor_commuting: bool | None = None
    central: bool | None = None
    tensor_central: bool | None = None

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def order(self) -> int:
        return perm_order(self.images)

    @property
    def is_inner(self) -> bool:
        return self.inner_inducer is not None


class AutomorphismGroup:
    """All automorphisms in canonical order (sorted by image tuple), with
    composition resolved through an index."""

    def __init__(self, group: FiniteGroup, images_matrix: np.ndarray):
        self.group = group
        self.images = np.ascontiguousarray(images_matrix, dtype=np.int32)
        if self.images.ndim != 2 or self.images.shape[1] != group.order:
            raise StructureError("bad automorphism matrix shape")
        self._index = {row.tobytes(): i for i, row in enumerate(self.images)}
        if len(self._index) != len(self.images):
            raise StructureError("duplicate automorphisms in list")
        ident = np.arange(group.order, dtype=np.int32)
        if not np.array_equal(self.images[0], ident):
            raise StructureError("identity automorphism must sit at index 0")
        self.all = [Automorphism(group, self.images[i]) for i in range(len(self.images))]
        self._mark_inner()

    def _mark_inner(self):
        conj = self.group.conjugation_table()
        for g in range(self.group.order):
            i = self.index_of(conj[:, g])
            if self.all[i].inner_inducer is None:
                self.all[i].inner_inducer = g

    def __len__(self) -> int:
        return len(self.all)

    def index_of(self, images) -> int:
        key = np.ascontiguousarray(images, dtype=np.int32).tobytes()
        i = self._index.get(key)
        if i is None:
            raise StructureError("map is not in the automorphism group")
        return i

    def compose(self, i: int, j: int) -> int:
        """Index of "apply i, then j"."""
        return self.index_of(self.images[j][self.images[i]])

    def inverse(self, i: int) -> int:
        return self.index_of(inverse_perm(self.images[i]))

    def power(self, i: int, k: int) -> int:
        cur = 0
        base = i
        if k < 0:
            base = self.inverse(i)
            k = -k
        for _ in range(k):
            cur = self.compose(cur, base)
        return cur

    def conjugate(self, i: int, by: int) -> int:
        """by⁻¹ ∘ i ∘ by in apply-left-first order."""
        return self.compose(self.compose(self.inverse(by), i), by)

    def commutator(self, i: int, j: int) -> int:
        return self.compose(
            self.compose(self.compose(self.inverse(i), self.inverse(j)), i), j
        )

    def order_of(self, i: int) -> int:
        return perm_order(self.images[i])

    def inner_indices(self) -> list[int]:
        return [i for i, a in enumerate(self.all) if a.is_inner]

    def inner_index_of_element(self, g: int) -> int:
        return self.index_of(self.group.conjugation_table()[:, g])


def automorphism_group(
    g: FiniteGroup,
    slow: bool = False,
    max_count: int = AUT_COUNT_BOUND,
) -> AutomorphismGroup:
    """Full automorphism group by backtracking over generator images."""
    bound = AUT_ORDER_BOUND_SLOW if slow else AUT_ORDER_BOUND
    if g.order > bound:
        raise BoundExceeded(
            f"automorphism search limited to order ≤ {bound}; got {g.order}"
        )
    found = find_homomorphism_images(g, g, find_all=True, max_results=max_count)
    mat = np.array(sorted(found, key=lambda a: tuple(a.tolist())), dtype=np.int32)
    return AutomorphismGroup(g, mat)


def inner(g: FiniteGroup, element: int) -> Automorphism:
    """The inner automorphism x ↦ element⁻¹·x·element."""
    images = g.conjugation_table()[:, element].copy()
    return Automorphism(g, images, inner_inducer=int(element))


def bracket(g: FiniteGroup, x: int, alpha_images) -> int:
    """x⁻¹·α(x)."""
    return int(g.cayley[g.inverses[x], np.asarray(alpha_images)[x]])


def bracket_vector(g: FiniteGroup, alpha_images) -> np.ndarray:
    return g.cayley[g.inverses, np.asarray(alpha_images)]


def is_commuting(g: FiniteGroup, alpha_images) -> bool:
    """x·α(x) = α(x)·x for every x."""
    a = np.asarray(alpha_images)
    idx = np.arange(g.order)
    return bool(np.array_equal(g.cayley[idx, a], g.cayley[a, idx]))


def is_tensor_commuting(ts: TensorSquare, alpha_images) -> bool:
    """x ⊗ α(x) trivial for every x."""
    a = np.asarray(alpha_images)
    return bool((ts.pairing[np.arange(ts.base.order), a] == 0).all())


def is_central(g: FiniteGroup, alpha_images, center: Subgroup | None = None) -> bool:
    """x⁻¹·α(x) always lies in the center."""
    center = center or g.center()
    mask = np.zeros(g.order, dtype=bool)
    mask[list(center.elements)] = True
    return bool(mask[bracket_vector(g, alpha_images)].all())


def is_tensor_central(ts: TensorSquare, alpha_images, tcenter=None) -> bool:
    """x⁻¹·α(x) always lies in the tensor center."""
    if tcenter is None:
        mask = (ts.pairing == 0).all(axis=1)
    else:
        mask = np.zeros(ts.base.order, dtype=bool)
        mask[list(tcenter.elements)] = True
    return bool(mask[bracket_vector(ts.base, alpha_images)].all())


@dataclass
class Classification:
    """Index sets into an AutomorphismGroup for each automorphism class."""

    auts: AutomorphismGroup
    commuting: tuple[int, ...]
    tensor_commuting: tuple[int, ...]
    central: tuple[int, ...]
    tensor_central: tuple[int, ...]
    inner: tuple[int, ...]

    def counts(self) -> dict[str, int]:
        inn = set(self.inner)
        return {
            "aut": len(self.auts),
            "inn": len(self.inner),
            "commuting": len(self.commuting),
            "tensor_commuting": len(self.tensor_commuting),
            "central": len(self.central),
            "tensor_central": len(self.tensor_central),
            "tensor_commuting_inner": len(set(self.tensor_commuting) & inn),
            "tensor_central_inner": len(set(self.tensor_central) & inn),
        }


def classify_all(ts: TensorSquare, auts: AutomorphismGroup) -> Classification:
    """Set every flag; verify the two central classes really are subgroups
    of the automorphism group (the commuting classes are kept as bare sets)."""
    g = ts.base
    n = g.order
    idx = np.arange(n)
    center_mask = (g.cayley == g.cayley.T).all(axis=1)
    tz_mask = (ts.pairing == 0).all(axis=1)
    mat = auts.images
    brackets = g.cayley[g.inverses[None, :], mat]
    commuting = np.nonzero(
        (g.cayley[idx[None, :], mat] == g.cayley[mat, idx[None, :]]).all(axis=1)
    )[0]
    tensor_commuting = np.nonzero(
        (ts.pairing[idx[None, :], mat] == 0).all(axis=1)
    )[0]
    central = np.nonzero(center_mask[brackets].all(axis=1))[0]
    tensor_central = np.nonzero(tz_mask[brackets].all(axis=1))[0]
    for i, a in enumerate(auts.all):
        a.commuting = bool(i in set(commuting.tolist()))
        a.tensor_commuting = bool(i in set(tensor_commuting.tolist()))
        a.central = bool(i in set(central.tolist()))
        a.tensor_central = bool(i in set(tensor_central.tolist()))
    cls = Classification(
        auts=auts,
        commuting=tuple(int(i) for i in commuting),
        tensor_commuting=tuple(int(i) for i in tensor_commuting),
        central=tuple(int(i) for i in central),
        tensor_central=tuple(int(i) for i in tensor_central),
        inner=tuple(auts.inner_indices()),
    )
    for name, subset in (("central", cls.central), ("tensor_central", cls.tensor_central)):
        _verify_subgroup_of_aut(auts, subset, name)
    return cls


def _verify_subgroup_of_aut(auts: AutomorphismGroup, subset, name: str) -> None:
    members = set(subset)
    if 0 not in members:
        raise SubgroupViolation(f"{name} automorphisms do not contain the identity")
    for i in subset:
        if auts.inverse(i) not in members:
            raise SubgroupViolation(f"{name} automorphisms not closed under inverse")
        for j in subset:
            if auts.compose(i, j) not in members:
                raise SubgroupViolation(
                    f"{name} automorphisms not closed under composition"
                )
