"""Permutation-group helpers: composition, inversion, Schreier–Sims order.

Permutations are numpy int32 arrays ``p`` with ``p[i]`` the image of point
``i``; composition is "apply left operand first": ``(a*b)[i] = b[a[i]]``.
"""

from __future__ import annotations

import numpy as np


def identity_perm(degree: int) -> np.ndarray:
    return np.arange(degree, dtype=np.int32)


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Apply ``a`` first, then ``b``."""
    return b[a]


def inverse_perm(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(len(a), dtype=a.dtype)
    return inv


def is_identity(a: np.ndarray) -> bool:
    return bool(np.array_equal(a, np.arange(len(a), dtype=a.dtype)))


def perm_order(a: np.ndarray) -> int:
    """Order of a permutation via lcm of cycle lengths."""
    n = len(a)
    seen = np.zeros(n, dtype=bool)
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(a[j])
            length += 1
        order = int(np.lcm(order, length))
    return order


def subgroup_order(generators: list[np.ndarray]) -> int:
    """Order of ⟨generators⟩ by a deterministic Schreier–Sims chain."""
    gens = [np.asarray(g, dtype=np.int32) for g in generators]
    gens = [g for g in gens if not is_identity(g)]
    if not gens:
        return 1
    degree = len(gens[0])
    idp = identity_perm(degree)

    base: list[int] = []
    added: list[list[np.ndarray]] = []  # strong generators added per level
    orbits: list[dict[int, np.ndarray]] = []  # point -> transversal perm

    def level_gens(i: int) -> list[np.ndarray]:
        out = []
        for j in range(i, len(base)):
            out.extend(added[j])
        return out

    def new_level(pt: int) -> None:
        base.append(pt)
        added.append([])
        orbits.append({pt: idp})

    def rebuild_orbit(i: int) -> list[int]:
        orb = {base[i]: idp}
        points = [base[i]]
        gens_i = level_gens(i)
        head = 0
        while head < len(points):
            pt = points[head]
            head += 1
            u = orb[pt]
            for g in gens_i:
                img = int(g[pt])
                if img not in orb:
                    orb[img] = compose(u, g)
                    points.append(img)
        orbits[i] = orb
        return points

    def strip(h: np.ndarray) -> tuple[np.ndarray, int]:
        for i in range(len(base)):
            img = int(h[base[i]])
            u = orbits[i].get(img)
            if u is None:
                return h, i
            h = compose(h, inverse_perm(u))
        return h, len(base)

    first_moved = int(np.nonzero(gens[0] != idp)[0][0])
    new_level(first_moved)
    added[0].extend(gens)
    rebuild_orbit(0)

    i = 0
    while i >= 0:
        points = rebuild_orbit(i)
        gens_i = level_gens(i)
        restart = False
        for pt in points:
            u = orbits[i][pt]
            for g in gens_i:
                img = int(g[pt])
                u2 = orbits[i][img]
                schreier = compose(compose(u, g), inverse_perm(u2))
                if is_identity(schreier):
                    continue
                h, lev = strip(schreier)
                if is_identity(h):
                    continue
                if lev == len(base):
                    moved = int(np.nonzero(h != idp)[0][0])
                    new_level(moved)
                added[lev].append(h)
                for j in range(i + 1, lev + 1):
                    rebuild_orbit(j)
                i = lev
                restart = True
                break
            if restart:
                break
        if restart:
            continue
        i -= 1

    order = 1
    for i in range(len(base)):
        order *= len(rebuild_orbit(i))
    return order
