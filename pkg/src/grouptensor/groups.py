"""Concrete finite groups as Cayley tables with dense 0-based element indices.

Index 0 is always the identity.  Multiplication composes left-to-right
(``mul(x, y)`` is "x then y"); permutations act on points accordingly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .coset import CosetTable, EnumerationLimits, coset_word, table_bfs_tree, todd_coxeter
from .errors import BoundExceeded, NotNormal, StructureError
from .words import Presentation, Word, commutator_word, gen_word

_ASSOC_FULL_BOUND = 64
_ASSOC_SAMPLES = 10_000
_ISO_DEFAULT_BOUND = 256


class FiniteGroup:
    """A finite group given by its full multiplication table."""

    def __init__(
        self,
        cayley: np.ndarray,
        name: str = "",
        generators=None,
        presentation: Presentation | None = None,
        presentation_generators=None,
        validate: bool = True,
    ):
        cayley = np.ascontiguousarray(cayley, dtype=np.int32)
        if cayley.ndim != 2 or cayley.shape[0] != cayley.shape[1]:
            raise StructureError("cayley table must be square")
        self.order = int(cayley.shape[0])
        self.cayley = cayley
        self.name = name or f"group-of-order-{self.order}"
        inv = np.full(self.order, -1, dtype=np.int32)
        rows, cols = np.nonzero(cayley == 0)
        inv[rows] = cols
        self.inverses = inv
        if generators is None:
            generators = self._reduce_generators(list(range(1, self.order)))
        self.generators = tuple(int(g) for g in generators)
        self.presentation = presentation
        self.presentation_generators = (
            tuple(int(g) for g in presentation_generators)
            if presentation_generators is not None
            else (self.generators if presentation is not None else None)
        )
        self._element_words: list[Word] | None = None
        self._element_orders: np.ndarray | None = None
        if validate:
            self._validate()
        self.cayley.setflags(write=False)
        self.inverses.setflags(write=False)

    # -- construction checks ------------------------------------------------

    def _validate(self) -> None:
        n = self.order
        idx = np.arange(n, dtype=np.int32)
        if self.cayley.min() < 0 or self.cayley.max() >= n:
            raise StructureError("cayley entries out of range")
        if not np.array_equal(self.cayley[0], idx) or not np.array_equal(
            self.cayley[:, 0], idx
        ):
            raise StructureError("element 0 is not an identity")
        if (self.inverses < 0).any():
            raise StructureError("some element has no inverse")
        if not np.array_equal(self.cayley[idx, self.inverses], np.zeros(n)):
            raise StructureError("inverse table inconsistent")
        if n <= _ASSOC_FULL_BOUND:
            lhs = self.cayley[self.cayley, :]
            rhs = self.cayley[:, self.cayley]
            if not np.array_equal(lhs, rhs):
                raise StructureError("multiplication is not associative")
        else:
            rng = np.random.default_rng(0)
            xs, ys, zs = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
            if not np.array_equal(
                self.cayley[self.cayley[xs, ys], zs],
                self.cayley[xs, self.cayley[ys, zs]],
            ):
                raise StructureError("multiplication is not associative (sampled)")
        if len(self.closure(self.generators)) != n:
            raise StructureError("stored generators do not generate the group")

    def _reduce_generators(self, candidates) -> list[int]:
        """Greedy irredundant generating subsequence of ``candidates``."""
        chosen: list[int] = []
        have = {0}
        for c in candidates:
            c = int(c)
            if c in have:
                continue
            chosen.append(c)
            have = set(self.closure(chosen))
            if len(have) == self.order:
                break
        if len(have) != self.order:
            raise StructureError("candidate generators do not generate the group")
        # drop members made redundant by later picks
        i = 0
        while i < len(chosen):
            trial = chosen[:i] + chosen[i + 1 :]
            if len(self.closure(trial)) == self.order:
                chosen = trial
            else:
                i += 1
        return chosen

    # -- elementary operations ----------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return int(self.cayley[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverses[x])

    def conjugate(self, x: int, y: int) -> int:
        """x**y = y⁻¹·x·y."""
        return int(self.cayley[self.cayley[self.inverses[y], x], y])

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x⁻¹·y⁻¹·x·y."""
        xi = self.inverses[x]
        yi = self.inverses[y]
        return int(self.cayley[self.cayley[self.cayley[xi, yi], x], y])

    def commutator_table(self) -> np.ndarray:
        c = self.cayley
        inv = self.inverses
        return c[c[c[inv[:, None], inv[None, :]], np.arange(self.order)[:, None]],
                 np.arange(self.order)[None, :]]

    def conjugation_table(self) -> np.ndarray:
        """t[x, y] = y⁻¹·x·y."""
        c = self.cayley
        return c[c[self.inverses[None, :], np.arange(self.order)[:, None]],
                 np.arange(self.order)[None, :]]

    def elements(self) -> range:
        return range(self.order)

    def mul_vec(self, xs: np.ndarray, y: int) -> np.ndarray:
        """Right-multiply a vector of elements by one element."""
        return self.cayley[xs, y]

    def mul_pointwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self.cayley[xs, ys]

    def row(self, x: int) -> np.ndarray:
        """Left-translation row: row(x)[t] = x·t."""
        return self.cayley[x]

    def element_orders(self) -> np.ndarray:
        if self._element_orders is None:
            n = self.order
            out = np.zeros(n, dtype=np.int64)
            out[0] = 1
            power = np.arange(n, dtype=np.int32)
            k = 1
            while (out == 0).any():
                k += 1
                power = self.cayley[power, np.arange(n)]
                newly = (out == 0) & (power == 0)
                out[newly] = k
            self._element_orders = out
        return self._element_orders

    def element_order(self, x: int) -> int:
        return int(self.element_orders()[x])

    def exponent(self) -> int:
        e = 1
        for o in set(self.element_orders().tolist()):
            e = int(np.lcm(e, o))
        return e

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        r = 0
        for _ in range(k):
            r = self.mul(r, x)
        return r

    # -- words over generators ----------------------------------------------

    def element_words(self) -> list[Word]:
        """Minimal-length word over the stored generators for every element
        (breadth-first, ties broken by generator-then-inverse letter order)."""
        if self._element_words is None:
            self._element_words = self._bfs_words(self.generators)
        return self._element_words

    def _bfs_words(self, gens) -> list[Word]:
        n = self.order
        parent = np.full(n, -2, dtype=np.int64)
        edge = np.full(n, 0, dtype=np.int64)  # signed letter over gens list
        parent[0] = -1
        queue = [0]
        head = 0
        steps = []
        for i, g in enumerate(gens):
            steps.append((i + 1, int(g)))
            steps.append((-(i + 1), self.inv(int(g))))
        while head < len(queue):
            x = queue[head]
            head += 1
            for letter, g in steps:
                y = int(self.cayley[x, g])
                if parent[y] == -2:
                    parent[y] = x
                    edge[y] = letter
                    queue.append(y)
        if len(queue) != n:
            raise StructureError("generators do not generate the group")
        words = []
        for x in range(n):
            letters = []
            c = x
            while parent[c] != -1:
                letters.append(int(edge[c]))
                c = int(parent[c])
            words.append(Word(tuple(reversed(letters))))
        return words

    def evaluate_word(self, word: Word, gens=None) -> int:
        gens = self.generators if gens is None else gens
        x = 0
        for l in word.letters:
            g = gens[abs(l) - 1]
            x = self.mul(x, g if l > 0 else self.inv(g))
        return x

    def word_of(self, x: int) -> str:
        return self.element_words()[x].render()

    # -- subgroup machinery ---------------------------------------------------

    def closure(self, seed) -> tuple[int, ...]:
        """Smallest subgroup containing ``seed`` (sorted element tuple)."""
        members = {0}
        gens = []
        for s in seed:
            s = int(s)
            if s >= self.order or s < 0:
                raise StructureError(f"element {s} out of range")
            gens.append(s)
            gens.append(self.inv(s))
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.cayley[x, g])
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(members))

    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, tuple(sorted(int(e) for e in elements)))

    def generated_subgroup(self, seed) -> "Subgroup":
        return Subgroup(self, self.closure(seed))

    def center(self) -> "Subgroup":
        mask = (self.cayley == self.cayley.T).all(axis=1)
        return Subgroup(self, tuple(np.nonzero(mask)[0].tolist()))

    def derived_subgroup(self) -> "Subgroup":
        comms = np.unique(self.commutator_table())
        return Subgroup(self, self.closure(comms.tolist()))

    def nth_center(self, n: int) -> "Subgroup":
        """Upper central series member Z_n, by lifting centers of quotients."""
        if n < 0:
            raise StructureError("n must be non-negative")
        current = self.subgroup((0,))
        for _ in range(n):
            if current.order() == self.order:
                break
            q, proj = self.quotient(current)
            zq = set(q.center().elements)
            lifted = [x for x in range(self.order) if int(proj.images[x]) in zq]
            current = self.subgroup(lifted)
        return current

    def centralizer_of(self, elements) -> "Subgroup":
        mask = np.ones(self.order, dtype=bool)
        for e in elements:
            mask &= self.cayley[:, e] == self.cayley[e, :]
        return Subgroup(self, tuple(np.nonzero(mask)[0].tolist()))

    def is_normal(self, sub: "Subgroup") -> bool:
        members = set(sub.elements)
        conj = self.conjugation_table()
        return all(
            int(conj[x, g]) in members for x in sub.elements for g in range(self.order)
        )

    def quotient(self, sub: "Subgroup") -> tuple["FiniteGroup", "GroupHom"]:
        """Quotient by a normal subgroup, with the projection homomorphism.

        Coset representatives are the minimal element index per coset.
        """
        if sub.parent is not self:
            raise StructureError("subgroup belongs to a different group")
        if not self.is_normal(sub):
            raise NotNormal(f"subgroup of order {sub.order()} is not normal")
        n = self.order
        members = np.array(sub.elements, dtype=np.int32)
        rep = np.full(n, -1, dtype=np.int32)
        reps = []
        for x in range(n):
            if rep[x] >= 0:
                continue
            coset = self.cayley[members, x]  # N·x = x·N for normal N
            m = int(coset.min())
            rep[coset] = m
            reps.append(m)
        reps = sorted(reps)
        index_of = {m: i for i, m in enumerate(reps)}
        proj = np.array([index_of[int(rep[x])] for x in range(n)], dtype=np.int32)
        k = len(reps)
        cay = np.empty((k, k), dtype=np.int32)
        for i, a in enumerate(reps):
            cay[i] = proj[self.cayley[a, reps]]
        gens = [int(proj[g]) for g in self.generators]
        q = FiniteGroup(cay, name=f"{self.name}/N{sub.order()}")
        q.generators = tuple(q._reduce_generators(gens))
        hom = GroupHom(self, q, proj)
        return q, hom

    def fingerprint(self) -> tuple:
        """Cheap isomorphism invariant: order, element-order histogram,
        |center|, |derived subgroup|, abelianization invariant factors."""
        orders = self.element_orders()
        vals, counts = np.unique(orders, return_counts=True)
        hist = tuple((int(v), int(c)) for v, c in zip(vals, counts))
        dsub = self.derived_subgroup()
        ab, _ = self.quotient(dsub)
        return (
            self.order,
            hist,
            self.center().order(),
            dsub.order(),
            abelian_invariants(ab),
        )

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A verified subgroup: sorted element indices of a parent group."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = set(self.elements)
        if 0 not in elems:
            raise StructureError("subgroup must contain the identity")
        for x in self.elements:
            if int(self.parent.inverses[x]) not in elems:
                raise StructureError(f"subgroup not closed under inverse of {x}")
        sub = self.parent.cayley[np.ix_(self.elements, self.elements)]
        if not set(np.unique(sub).tolist()) <= elems:
            raise StructureError("subgroup not closed under multiplication")

    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return int(x) in set(self.elements)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return set(other.elements) <= set(self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((id(self.parent), self.elements))


class GroupHom:
    """A verified homomorphism stored as a full image table."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, validate=True):
        self.source = source
        self.target = target
        self.images = np.ascontiguousarray(images, dtype=np.int32)
        if self.images.shape != (source.order,):
            raise StructureError("image table has wrong length")
        if validate:
            im = self.images
            if im[0] != 0:
                raise StructureError("homomorphism must fix the identity")
            lhs = im[source.cayley]
            rhs = target.cayley[im[:, None], im[None, :]]
            if not np.array_equal(lhs, rhs):
                raise StructureError("images do not define a homomorphism")
        self.images.setflags(write=False)

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def kernel(self) -> Subgroup:
        return self.source.subgroup(np.nonzero(self.images == 0)[0].tolist())

    def image(self) -> Subgroup:
        return self.target.subgroup(np.unique(self.images).tolist())

    def is_surjective(self) -> bool:
        return self.image().order() == self.target.order

    def is_injective(self) -> bool:
        return len(np.unique(self.images)) == self.source.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.source.order == self.target.order

    def compose(self, then: "GroupHom") -> "GroupHom":
        if then.source is not self.target:
            raise StructureError("homomorphisms do not compose")
        return GroupHom(self.source, then.target, then.images[self.images])


def abelian_invariants(g: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors d₁ | d₂ | … of an abelian group, from the
    element-order statistics (which determine the type uniquely)."""
    if not g.is_abelian():
        raise StructureError("abelian_invariants requires an abelian group")
    n = g.order
    if n == 1:
        return ()
    orders = g.element_orders()
    partitions: dict[int, list[int]] = {}
    for p in _prime_factors(n):
        # m_k = #elements of order dividing p^k;  conjugate partition reads off
        counts = []
        k = 0
        while True:
            k += 1
            m = int(np.count_nonzero((p**k) % orders == 0))
            counts.append(round(np.log(m) / np.log(p)))
            if m == n or (len(counts) > 1 and counts[-1] == counts[-2]):
                break
        conj = [counts[0]] + [counts[i] - counts[i - 1] for i in range(1, len(counts))]
        conj = [c for c in conj if c > 0]
        parts = []
        j = 1
        while True:
            lam = sum(1 for c in conj if c >= j)
            if lam == 0:
                break
            parts.append(lam)
            j += 1
        # parts is the partition sorted descending: exponent of p in d_{last-i}
        partitions[p] = sorted(parts, reverse=True)
    width = max(len(v) for v in partitions.values())
    factors = []
    for i in range(width):
        d = 1
        for p, parts in partitions.items():
            if i < len(parts):
                d *= p ** parts[i]
        factors.append(d)
    factors = tuple(sorted(factors))
    total = 1
    for d in factors:
        total *= d
    if total != n:
        raise StructureError("abelian invariant computation failed")
    return factors


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# standard families
# ---------------------------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise StructureError("cyclic order must be positive")
    idx = np.arange(n, dtype=np.int32)
    cay = (idx[:, None] + idx[None, :]) % n
    pres = Presentation(1, (Word((1,) * n),))
    gens = (1,) if n > 1 else ()
    return FiniteGroup(
        cay, name=f"cyclic:{n}", generators=gens,
        presentation=pres, presentation_generators=(1 % n,),
    )


def abelian(*factors: int) -> FiniteGroup:
    factors = tuple(int(d) for d in factors if int(d) != 1)
    for d in factors:
        if d < 1:
            raise StructureError("abelian factors must be positive")
    if not factors:
        return cyclic(1)
    n = 1
    for d in factors:
        n *= d
    radix = np.array(factors, dtype=np.int64)
    digits = np.zeros((n, len(factors)), dtype=np.int64)
    x = np.arange(n)
    for i in range(len(factors) - 1, -1, -1):
        digits[:, i] = x % radix[i]
        x //= radix[i]
    weights = np.ones(len(factors), dtype=np.int64)
    for i in range(len(factors) - 2, -1, -1):
        weights[i] = weights[i + 1] * radix[i + 1]
    summed = (digits[:, None, :] + digits[None, :, :]) % radix
    cay = (summed * weights).sum(axis=2).astype(np.int32)
    gens = tuple(int(w) for w in weights)
    k = len(factors)
    rels = [Word((i + 1,) * factors[i]) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            rels.append(commutator_word(gen_word(i), gen_word(j)))
    pres = Presentation(k, tuple(rels))
    label = ",".join(str(d) for d in factors)
    return FiniteGroup(
        cay, name=f"abelian:{label}", generators=gens,
        presentation=pres, presentation_generators=gens,
    )


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given (even) order; symmetries of an n-gon for
    order 2n.  Generators: rotation then reflection."""
    if order < 2 or order % 2:
        raise StructureError("dihedral order must be even and at least 2")
    n = order // 2
    idx = np.arange(order)
    eps1, i1 = idx[:, None] // n, idx[:, None] % n
    eps2, i2 = idx[None, :] // n, idx[None, :] % n
    # element r^i s^eps;  s r s = r⁻¹
    i = (i1 + np.where(eps1 == 1, -1, 1) * i2) % n
    cay = ((eps1 ^ eps2) * n + i).astype(np.int32)
    if n == 1:
        gens = (1,)
        pres = Presentation(1, (Word((1, 1)),))
        pgens = (1,)
        return FiniteGroup(cay, name=f"dihedral:{order}", generators=gens,
                           presentation=pres, presentation_generators=pgens)
    rels = (Word((1,) * n), Word((2, 2)), Word((1, 2, 1, 2)))
    pres = Presentation(2, rels)
    return FiniteGroup(
        cay, name=f"dihedral:{order}", generators=(1, n),
        presentation=pres, presentation_generators=(1, n),
    )


def quaternion(order: int = 8) -> FiniteGroup:
    """Dicyclic group of order 4m (order 8 is the quaternion group)."""
    if order < 8 or order % 4:
        raise StructureError("quaternion/dicyclic order must be a multiple of 4, ≥ 8")
    m = order // 4
    two_m = 2 * m
    idx = np.arange(order)
    e1, i1 = idx[:, None] // two_m, idx[:, None] % two_m
    e2, i2 = idx[None, :] // two_m, idx[None, :] % two_m
    # element a^i b^eps;  b a = a⁻¹ b,  b² = a^m
    i = (i1 + np.where(e1 == 1, -1, 1) * i2 + (e1 & e2) * m) % two_m
    cay = ((e1 ^ e2) * two_m + i).astype(np.int32)
    rels = (
        Word((1,) * two_m),
        Word((2, 2) + (-1,) * m),
        Word((-2, 1, 2, 1)),
    )
    pres = Presentation(2, rels)
    return FiniteGroup(
        cay, name=f"quaternion:{order}", generators=(1, two_m),
        presentation=pres, presentation_generators=(1, two_m),
    )


def _perm_group(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    cay = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            cay[i, j] = index[tuple(q[x] for x in p)]  # apply p then q
    return FiniteGroup(cay, name=name, validate=True)


def symmetric(n: int) -> FiniteGroup:
    if n < 1 or n > 5:
        raise StructureError("symmetric(n) supported for 1 ≤ n ≤ 5")
    perms = sorted(itertools.permutations(range(n)))
    g = _perm_group(perms, f"symmetric:{n}")
    if n == 1:
        return g
    index = {p: i for i, p in enumerate(perms)}
    gens = []
    for i in range(n - 1):
        t = list(range(n))
        t[i], t[i + 1] = t[i + 1], t[i]
        gens.append(index[tuple(t)])
    k = n - 1
    rels = [Word((i + 1,) * 2) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            pair = (i + 1, j + 1)
            rels.append(Word(pair * (3 if j == i + 1 else 2)))
    g.generators = tuple(gens)
    g.presentation = Presentation(k, tuple(rels))
    g.presentation_generators = tuple(gens)
    g._element_words = None
    return g


def alternating(n: int) -> FiniteGroup:
    if n < 1 or n > 5:
        raise StructureError("alternating(n) supported for 1 ≤ n ≤ 5")
    perms = sorted(p for p in itertools.permutations(range(n)) if _is_even(p))
    g = _perm_group(perms, f"alternating:{n}")
    if n <= 2:
        return g
    index = {p: i for i, p in enumerate(perms)}
    if n == 3:
        a = index[(1, 2, 0)]
        g.generators = (a,)
        g.presentation = Presentation(1, (Word((1, 1, 1)),))
        g.presentation_generators = (a,)
    elif n == 4:
        a = index[(1, 2, 0, 3)]  # 3-cycle on first three points
        b = index[(0, 2, 3, 1)]  # 3-cycle on last three points
        g.generators = (a, b)
        g.presentation = Presentation(
            2, (Word((1,) * 3), Word((2,) * 3), Word((1, 2) * 2))
        )
        g.presentation_generators = (a, b)
    else:
        a = index[(1, 0, 3, 2, 4)]  # double transposition
        b = index[(2, 1, 4, 3, 0)]  # 3-cycle; a·b is a 5-cycle
        g.generators = (a, b)
        g.presentation = Presentation(
            2, (Word((1, 1)), Word((2,) * 3), Word((1, 2) * 5))
        )
        g.presentation_generators = (a, b)
    g._element_words = None
    return g


def _is_even(p) -> bool:
    inv = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                inv += 1
    return inv % 2 == 0


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    ng, nh = g.order, h.order
    gi = np.arange(ng * nh) // nh
    hi = np.arange(ng * nh) % nh
    cay = (
        g.cayley[gi[:, None], gi[None, :]].astype(np.int64) * nh
        + h.cayley[hi[:, None], hi[None, :]]
    ).astype(np.int32)
    gens = tuple(int(a) * nh for a in g.generators) + tuple(
        int(b) for b in h.generators
    )
    pres = None
    pgens = None
    if g.presentation is not None and h.presentation is not None:
        kg = g.presentation.ngens
        kh = h.presentation.ngens
        rels = list(g.presentation.relators)
        for r in h.presentation.relators:
            rels.append(Word(tuple(l + kg if l > 0 else l - kg for l in r.letters)))
        for i in range(kg):
            for j in range(kh):
                rels.append(commutator_word(gen_word(i), gen_word(kg + j)))
        pres = Presentation(kg + kh, tuple(rels))
        pgens = tuple(int(a) * nh for a in g.presentation_generators) + tuple(
            int(b) for b in h.presentation_generators
        )
    return FiniteGroup(
        cay, name=f"product:({g.name})x({h.name})", generators=gens,
        presentation=pres, presentation_generators=pgens,
    )


def from_permutations(degree: int, perms, name: str = "") -> FiniteGroup:
    """Group generated by permutations of 0..degree-1, elements ordered by
    breadth-first discovery from the identity."""
    gens = [tuple(int(x) for x in p) for p in perms]
    for p in gens:
        if sorted(p) != list(range(degree)):
            raise StructureError(f"{p} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for p in gens:
            nxt = tuple(p[x] for x in cur)
            if nxt not in index:
                index[nxt] = len(elems)
                elems.append(nxt)
    n = len(elems)
    cay = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            cay[i, j] = index[tuple(b[x] for x in a)]
    g = FiniteGroup(cay, name=name or f"perm-group-deg{degree}")
    g.generators = tuple(g._reduce_generators([index[p] for p in gens]))
    g._element_words = None
    return g


def group_from_coset_table(
    ct: CosetTable,
    pres: Presentation | None = None,
    name: str = "",
) -> FiniteGroup:
    """Regular-representation group of a complete coset table over the
    trivial subgroup: cosets are the elements, coset 1 the identity."""
    if not ct.complete:
        raise StructureError("coset table must be complete")
    n = ct.ncosets
    if ct.ngens == 0:
        return FiniteGroup(np.zeros((1, 1), dtype=np.int32), name=name or "trivial")
    parent, edge, order = table_bfs_tree(ct.table)
    cay = np.empty((n, n), dtype=np.int32)
    cay[:, 0] = np.arange(n, dtype=np.int32)
    for y in order[1:]:
        cay[:, y] = ct.table[cay[:, parent[y]], edge[y]]
    gen_elements = [int(ct.table[0, 2 * k]) for k in range(ct.ngens)]
    g = FiniteGroup(cay, name=name or f"fp-group-order{n}")
    g.generators = tuple(g._reduce_generators(gen_elements))
    g._element_words = None
    if pres is not None:
        g.presentation = pres
        g.presentation_generators = tuple(gen_elements)
    return g


def from_presentation(
    pres: Presentation,
    limits: EnumerationLimits | None = None,
    name: str = "",
) -> FiniteGroup:
    """Concrete group presented by ``pres`` via coset enumeration over the
    trivial subgroup."""
    ct = todd_coxeter(pres, [], limits)
    return group_from_coset_table(ct, pres, name)


def derive_presentation(g: FiniteGroup) -> tuple[Presentation, tuple[int, ...]]:
    """A presentation of ``g``: the stored one if available, otherwise the
    Cayley-graph presentation on the stored generators (one relator per
    non-tree edge, written with minimal coset words)."""
    if g.presentation is not None:
        return g.presentation, g.presentation_generators
    gens = g.generators
    if not gens:
        return Presentation(1, (Word((1,)),)), (0,)
    words = g.element_words()
    rels = []
    seen = set()
    for x in range(g.order):
        wx = words[x]
        for i, gen in enumerate(gens):
            y = g.mul(x, gen)
            r = wx * gen_word(i) * words[y].inverse()
            if len(r) and r.letters not in seen:
                seen.add(r.letters)
                rels.append(r)
    return Presentation(len(gens), tuple(rels)), tuple(int(x) for x in gens)


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------


def find_homomorphism_images(
    g: FiniteGroup,
    h: FiniteGroup,
    find_all: bool = False,
    require_bijective: bool = True,
    max_results: int | None = None,
) -> list[np.ndarray]:
    """Backtracking over images of g's generators, pruning on element order
    and multiplicative consistency; each survivor is verified in full."""
    if require_bijective and g.order != h.order:
        return []
    gens = list(g.generators)
    if not gens:
        return [np.zeros(g.order, dtype=np.int32)]
    g_orders = g.element_orders()
    h_orders = h.element_orders()
    results: list[np.ndarray] = []

    gmap = np.full(g.order, -1, dtype=np.int32)
    hused = np.full(h.order, -1, dtype=np.int32)
    gmap[0] = 0
    hused[0] = 0
    assigned: list[tuple[int, int]] = []  # (generator element, image)
    mapped: list[int] = [0]  # in discovery order

    def propagate(trail: list) -> bool:
        head = 0
        while head < len(mapped):
            x = mapped[head]
            head += 1
            for s, t in assigned:
                y = int(g.cayley[x, s])
                img = int(h.cayley[gmap[x], t])
                cur = int(gmap[y])
                if cur == -1:
                    if hused[img] != -1:
                        return False
                    gmap[y] = img
                    hused[img] = y
                    mapped.append(y)
                    trail.append(y)
                elif cur != img:
                    return False
        return True

    def undo(trail: list, mapped_len: int) -> None:
        for y in trail:
            hused[gmap[y]] = -1
            gmap[y] = -1
        del mapped[mapped_len:]

    def dfs(depth: int) -> bool:
        if depth == len(gens):
            if len(mapped) != g.order:
                return False
            imgs = gmap.copy()
            if require_bijective and len(np.unique(imgs)) != g.order:
                return False
            lhs = imgs[g.cayley]
            rhs = h.cayley[imgs[:, None], imgs[None, :]]
            if not np.array_equal(lhs, rhs):
                return False
            results.append(imgs)
            if max_results is not None and len(results) > max_results:
                raise BoundExceeded(
                    f"more than {max_results} homomorphisms found"
                )
            return not find_all
        gen = gens[depth]
        want = int(g_orders[gen])
        pre = int(gmap[gen])
        candidates = [pre] if pre != -1 else [
            c for c in range(h.order) if int(h_orders[c]) == want
        ]
        for cand in candidates:
            if pre == -1 and hused[cand] != -1:
                continue
            trail: list[int] = []
            mapped_len = len(mapped)
            if pre == -1:
                gmap[gen] = cand
                hused[cand] = gen
                mapped.append(gen)
                trail.append(gen)
            assigned.append((gen, cand))
            ok = propagate(trail)
            if ok and dfs(depth + 1):
                return True
            assigned.pop()
            undo(trail, mapped_len)
        return False

    dfs(0)
    return results


def isomorphic_small(
    g: FiniteGroup, h: FiniteGroup, bound: int = _ISO_DEFAULT_BOUND
) -> bool:
    """Isomorphism test for small groups: fingerprint pre-filter, then
    generator-image backtracking for an explicit isomorphism."""
    if g.order > bound or h.order > bound:
        raise BoundExceeded(
            f"isomorphic_small limited to order ≤ {bound}, got {g.order}, {h.order}"
        )
    if g.order != h.order:
        return False
    if g.fingerprint() != h.fingerprint():
        return False
    return bool(find_homomorphism_images(g, h, find_all=False))


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> GroupHom | None:
    found = find_homomorphism_images(g, h, find_all=False)
    if not found:
        return None
    return GroupHom(g, h, found[0])
