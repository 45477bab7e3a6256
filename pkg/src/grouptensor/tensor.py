"""Non-abelian tensor squares of small finite groups, two independent ways.

The direct route presents the tensor square on one abstract generator per
element pair, imposing every instance of the two defining relations, and
enumerates it.  The second route enumerates the auxiliary group on two copies
of the base group's generators in which commutators of the two copies realise
the tensor square, and extracts that subgroup from the permutation action.
Cross-validating the two is the package's main correctness oracle.
"""

from __future__ import annotations

import itertools

import numpy as np

from .coset import CosetTable, EnumerationLimits, table_bfs_tree, todd_coxeter
from .errors import (
    ActionInconsistent,
    BoundExceeded,
    ExtensionFailed,
    StructureError,
)
from .groups import FiniteGroup, derive_presentation, group_from_coset_table
from .words import Presentation, Word, commutator_word, gen_word

MATERIALIZE_BOUND = 4096
DIRECT_ORDER_BOUND = 16
NU_ORDER_BOUND = 24
SLOW_ORDER_BOUND = 60


class CosetGroup:
    """Group whose elements are the cosets of a complete table over the
    trivial subgroup; multiplication traces minimal column words.

    Used for tensor squares too large to hold as a full Cayley table."""

    def __init__(self, ct: CosetTable, name: str = ""):
        self.order = ct.ncosets
        self.name = name or f"coset-group-order{self.order}"
        self.table = ct.table
        parent, edge, order_arr = table_bfs_tree(ct.table)
        self._parent = parent
        self._edge = edge
        self._bfs_order = order_arr
        n = self.order
        # flattened column word per element
        depth = np.zeros(n, dtype=np.int32)
        for t in order_arr[1:]:
            depth[t] = depth[parent[t]] + 1
        off = np.zeros(n + 1, dtype=np.int64)
        off[1:] = np.cumsum(depth[np.arange(n)])
        cols = np.empty(off[-1], dtype=np.int32)
        for t in range(n):
            c = t
            pos = off[t + 1]
            while parent[c] != -1:
                pos -= 1
                cols[pos] = edge[c]
                c = parent[c]
        self._word_off = off
        self._word_cols = cols
        inv = np.empty(n, dtype=np.int32)
        for t in range(n):
            c = 0
            for x in self._word_cols[off[t] : off[t + 1]][::-1]:
                c = self.table[c, x ^ 1]
            inv[t] = c
        self.inverses = inv
        # level/column grouped BFS schedule for vectorised row construction
        sched = []
        bylevel: dict[int, dict[int, list[int]]] = {}
        for t in order_arr[1:]:
            bylevel.setdefault(int(depth[t]), {}).setdefault(int(edge[t]), []).append(t)
        for d in sorted(bylevel):
            for x in sorted(bylevel[d]):
                tgts = np.array(bylevel[d][x], dtype=np.int64)
                sched.append((tgts, parent[tgts], x))
        self._row_schedule = sched
        self._row_cache: dict[int, np.ndarray] = {}

    def word_cols(self, t: int) -> np.ndarray:
        return self._word_cols[self._word_off[t] : self._word_off[t + 1]]

    def mul(self, x: int, y: int) -> int:
        c = int(x)
        for col in self.word_cols(y):
            c = int(self.table[c, col])
        return c

    def inv(self, x: int) -> int:
        return int(self.inverses[x])

    def mul_vec(self, xs: np.ndarray, y: int) -> np.ndarray:
        out = np.asarray(xs)
        for col in self.word_cols(y):
            out = self.table[out, col]
        return out

    def mul_pointwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs)
        ys = np.asarray(ys)
        out = np.empty(xs.shape, dtype=np.int32)
        for y in np.unique(ys):
            mask = ys == y
            out[mask] = self.mul_vec(xs[mask], int(y))
        return out

    def row(self, x: int) -> np.ndarray:
        """Left-translation row: row(x)[t] = x·t."""
        x = int(x)
        cached = self._row_cache.get(x)
        if cached is not None:
            return cached
        out = np.empty(self.order, dtype=np.int32)
        out[0] = x
        for tgts, pars, col in self._row_schedule:
            out[tgts] = self.table[out[pars], col]
        if len(self._row_cache) > 768:
            self._row_cache.clear()
        self._row_cache[x] = out
        return out

    def to_finite_group(self, name: str = "") -> FiniteGroup:
        ct = CosetTable(self.order, self.table.shape[1] // 2, self.table)
        return group_from_coset_table(ct, name=name)

    def __repr__(self):
        return f"CosetGroup(order={self.order})"


# ---------------------------------------------------------------------------
# direct presentation route
# ---------------------------------------------------------------------------


def direct_tensor_presentation(g: FiniteGroup) -> tuple[Presentation, np.ndarray]:
    """One abstract generator per element pair, with every instance of both
    defining relations.  Also returns the relator triples as flat pair
    indices (i1, i2, i3) meaning e_{i1}·e_{i2}·e_{i3}⁻¹."""
    n = g.order
    conj = g.conjugation_table()
    cay = g.cayley
    triples = np.empty((2 * n * n * n, 3), dtype=np.int64)
    k = 0
    for a in range(n):
        for b in range(n):
            ca = conj[:, b][a]  # a^b
            for h in range(n):
                # (a·b) ⊗ h  =  (a^b ⊗ h^b) · (b ⊗ h)
                triples[k, 0] = ca * n + conj[h, b]
                triples[k, 1] = b * n + h
                triples[k, 2] = cay[a, b] * n + h
                k += 1
                # a ⊗ (h·b)  =  (a ⊗ b) · (a^b ⊗ h^b)
                triples[k, 0] = a * n + b
                triples[k, 1] = ca * n + conj[h, b]
                triples[k, 2] = a * n + cay[h, b]
                k += 1
    words = tuple(
        Word((int(t[0]) + 1, int(t[1]) + 1, -(int(t[2]) + 1))) for t in triples
    )
    return Presentation(n * n, words), triples


def tensor_square_direct(
    g: FiniteGroup,
    limits: EnumerationLimits | None = None,
    materialize_bound: int = MATERIALIZE_BOUND,
) -> "TensorSquare":
    """Tensor square by enumerating the defining presentation over the
    trivial subgroup; pair (x, y) maps to the image of its abstract symbol."""
    n = g.order
    pres, triples = direct_tensor_presentation(g)
    ct = todd_coxeter(pres, [], limits)
    nt = ct.ncosets
    pairing = ct.table[0, 2 * np.arange(n * n, dtype=np.int64)].reshape(n, n).copy()
    if nt <= materialize_bound:
        tsq = group_from_coset_table(ct, name=f"tensor-square({g.name})")
    else:
        tsq = CosetGroup(ct, name=f"tensor-square({g.name})")
    action = _direct_action(g, ct, tsq, pairing)
    kappa = _direct_kappa(g, ct)
    ts = TensorSquare(
        base=g, tsq=tsq, pairing=pairing, action=action, kappa_images=kappa,
        construction="direct", _direct_table=ct.table, _direct_triples=triples,
    )
    _validate_tensor_square(ts)
    return ts


def _bfs_edge_schedule(ct_table: np.ndarray):
    parent, edge, order_arr = table_bfs_tree(ct_table)
    depth = np.zeros(ct_table.shape[0], dtype=np.int32)
    for t in order_arr[1:]:
        depth[t] = depth[parent[t]] + 1
    bylevel: dict[int, dict[int, list[int]]] = {}
    for t in order_arr[1:]:
        bylevel.setdefault(int(depth[t]), {}).setdefault(int(edge[t]), []).append(t)
    sched = []
    for d in sorted(bylevel):
        for x in sorted(bylevel[d]):
            tgts = np.array(bylevel[d][x], dtype=np.int64)
            sched.append((tgts, parent[tgts], x))
    return sched


def _direct_action(g: FiniteGroup, ct: CosetTable, tsq, pairing) -> np.ndarray:
    """Action table for the direct route: the base group acts by relabelling
    each pair generator through conjugation, extended along the tree."""
    n = g.order
    nt = ct.ncosets
    conj = g.conjugation_table()
    sched = _bfs_edge_schedule(ct.table)
    action = np.empty((nt, n), dtype=np.int32)
    for b in range(n):
        # column of the relabelled letter: pair (x, y) -> (x^b, y^b)
        relabel = (conj[:, b][:, None] * np.int64(n) + conj[:, b][None, :]).ravel()
        out = action[:, b]
        out[0] = 0
        for tgts, pars, col in sched:
            newcol = 2 * relabel[col // 2] + (col & 1)
            out[tgts] = ct.table[out[pars], newcol]
    return action


def _direct_kappa(g: FiniteGroup, ct: CosetTable) -> np.ndarray:
    """κ sends the symbol for (x, y) to the commutator [x, y]."""
    n = g.order
    comm = g.commutator_table().ravel()
    sched = _bfs_edge_schedule(ct.table)
    kappa = np.empty(ct.ncosets, dtype=np.int32)
    kappa[0] = 0
    ginv = g.inverses
    for tgts, pars, col in sched:
        val = int(comm[col // 2])
        if col & 1:
            val = int(ginv[val])
        kappa[tgts] = g.cayley[kappa[pars], val]
    return kappa


# ---------------------------------------------------------------------------
# route through the two-copy auxiliary group
# ---------------------------------------------------------------------------


def nu_presentation(pres: Presentation) -> Presentation:
    """Presentation on two disjoint copies of the generators, adding for all
    generator triples the relations making commutators between the copies
    compatible with conjugation (expanded symbolically)."""
    k = pres.ngens

    def yshift(w: Word) -> Word:
        return Word(tuple(l + k if l > 0 else l - k for l in w.letters))

    rels: list[Word] = list(pres.relators)
    rels.extend(yshift(r) for r in pres.relators)
    for i in range(k):
        x = gen_word(i)
        for j in range(k):
            y = gen_word(k + j)
            base = commutator_word(x, y)
            for l in range(k):
                xl = gen_word(l)
                yl = gen_word(k + l)
                rhs = commutator_word(x.conjugate_by(xl), y.conjugate_by(yl))
                for lhs in (base.conjugate_by(xl), base.conjugate_by(yl)):
                    w = lhs * rhs.inverse()
                    if len(w):
                        rels.append(w)
    return Presentation(2 * k, tuple(rels))


def tensor_square_via_nu(
    g: FiniteGroup,
    limits: EnumerationLimits | None = None,
    materialize_bound: int = 8192,
) -> "TensorSquare":
    """Tensor square as the commutator subgroup between the two copies inside
    the auxiliary group, computed from the permutation action on the cosets
    of the second copy (on which that subgroup acts faithfully and freely)."""
    n = g.order
    pres, pgens = derive_presentation(g)
    k = pres.ngens
    nu = nu_presentation(pres)
    ysub = [gen_word(k + i) for i in range(k)]
    ct = todd_coxeter(nu, ysub, limits)
    degree = ct.ncosets

    if tuple(pgens) == tuple(g.generators):
        words = g.element_words()
    else:
        words = g._bfs_words(pgens)

    def yshift(w: Word) -> Word:
        return Word(tuple(l + k if l > 0 else l - k for l in w.letters))

    comm_words = {}
    pair_ids = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        wx = words[a]
        for b in range(n):
            w = commutator_word(wx, yshift(words[b]))
            comm_words[(a, b)] = w
            pair_ids[a, b] = ct.trace(0, w)

    # adopt an irredundant generating subset of the pairing permutations
    gen_perms: list[np.ndarray] = []
    gen_pairs: list[int] = []
    orbit = np.zeros(degree, dtype=bool)
    orbit[0] = True
    members = [0]

    def close_orbit():
        head = 0
        while head < len(members):
            pt = members[head]
            head += 1
            for perm in gen_perms:
                img = int(perm[pt])
                if not orbit[img]:
                    orbit[img] = True
                    members.append(img)

    for flat in range(n * n):
        a, b = divmod(flat, n)
        if not orbit[pair_ids[a, b]]:
            gen_perms.append(ct.word_permutation(comm_words[(a, b)]))
            gen_pairs.append(flat)
            close_orbit()

    # breadth-first element enumeration over point-0 images
    nt_expected, rem = divmod(degree, n)
    if rem:
        raise StructureError("auxiliary enumeration degree not divisible by |G|")
    ids = [0]
    idx_of = np.full(degree, -1, dtype=np.int32)
    idx_of[0] = 0
    parent = [0]
    edge_gen = [-1]
    head = 0
    while head < len(ids):
        cur = ids[head]
        for gi, perm in enumerate(gen_perms):
            img = int(perm[cur])
            if idx_of[img] == -1:
                idx_of[img] = len(ids)
                ids.append(img)
                parent.append(head)
                edge_gen.append(gi)
        head += 1
    nt = len(ids)
    if nt != nt_expected:
        raise StructureError(
            f"tensor subgroup has order {nt}, expected {nt_expected} from the index"
        )
    ids_arr = np.array(ids, dtype=np.int64)

    # Cayley table by column recursion over the element tree
    cay = np.empty((nt, nt), dtype=np.int32)
    cay[:, 0] = np.arange(nt, dtype=np.int32)
    for t in range(1, nt):
        pcol = cay[:, parent[t]]
        cay[:, t] = idx_of[gen_perms[edge_gen[t]][ids_arr[pcol]]]
        if (cay[:, t] < 0).any():
            raise StructureError("tensor subgroup is not closed in the action")
    tsq = FiniteGroup(cay, name=f"tensor-square({g.name})")
    tsq.generators = tuple(
        tsq._reduce_generators([int(idx_of[p[0]]) for p in gen_perms])
    )
    tsq._element_words = None

    pairing = idx_of[pair_ids].astype(np.int32)
    if (pairing < 0).any():
        raise StructureError("pairing value escaped the generated subgroup")

    # the base group acts by conjugation with one copy of each element: the
    # compatibility relations make both copies act identically on the
    # commutator subgroup, so conjugating by the product would square the
    # action
    action = np.empty((nt, n), dtype=np.int32)
    for b in range(n):
        cw = words[b]
        cperm = ct.word_permutation(cw)
        q = int(np.nonzero(cperm == 0)[0][0])
        v = np.empty(nt, dtype=np.int64)
        v[0] = q
        for t in range(1, nt):
            v[t] = gen_perms[edge_gen[t]][v[parent[t]]]
        action[:, b] = idx_of[cperm[v]]
        if (action[:, b] < 0).any():
            raise ActionInconsistent("conjugation action left the subgroup")

    # κ: evaluate each element's word in the base group
    kappa = np.empty(nt, dtype=np.int32)
    kappa[0] = 0
    kgen = [g.commutator(*divmod(p, n)) for p in gen_pairs]
    for t in range(1, nt):
        kappa[t] = g.cayley[kappa[parent[t]], kgen[edge_gen[t]]]

    ts = TensorSquare(
        base=g, tsq=tsq, pairing=pairing, action=action, kappa_images=kappa,
        construction="nu",
    )
    _validate_tensor_square(ts)
    return ts


def tensor_square(
    g: FiniteGroup,
    limits: EnumerationLimits | None = None,
    slow: bool = False,
    route: str | None = None,
) -> "TensorSquare":
    """Route policy: direct presentation for small orders, the two-copy
    construction above that, larger orders only behind ``slow``."""
    if route is None:
        if g.order <= DIRECT_ORDER_BOUND:
            route = "direct"
        elif g.order <= NU_ORDER_BOUND or (slow and g.order <= SLOW_ORDER_BOUND):
            route = "nu"
        else:
            raise BoundExceeded(
                f"tensor square of order-{g.order} group needs slow mode (≤ {SLOW_ORDER_BOUND})"
            )
    if route == "direct":
        return tensor_square_direct(g, limits)
    if route == "nu":
        return tensor_square_via_nu(g, limits)
    raise StructureError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# the assembled tensor square
# ---------------------------------------------------------------------------


class TensorSquare:
    """The tensor square of a finite group with its pairing table, the base
    group's action on it, and the commutator map back to the base group."""

    def __init__(self, base, tsq, pairing, action, kappa_images, construction,
                 _direct_table=None, _direct_triples=None):
        self.base = base
        self.tsq = tsq
        self.pairing = np.ascontiguousarray(pairing, dtype=np.int32)
        self.action = np.ascontiguousarray(action, dtype=np.int32)
        self.kappa_images = np.ascontiguousarray(kappa_images, dtype=np.int32)
        self.construction = construction
        self._direct_table = _direct_table
        self._direct_triples = _direct_triples
        self._pairing_schedule = None
        self._diagonal = None
        self._theta = None
        self.pairing.setflags(write=False)
        self.action.setflags(write=False)
        self.kappa_images.setflags(write=False)

    # -- tensor-group primitives -------------------------------------------

    @property
    def order(self) -> int:
        return self.tsq.order

    @property
    def t_inverses(self) -> np.ndarray:
        return self.tsq.inverses

    def t_mul(self, x: int, y: int) -> int:
        return int(self.tsq.mul(x, y))

    def t_inv(self, x: int) -> int:
        return int(self.tsq.inverses[x])

    def t_mul_vec(self, xs, y: int) -> np.ndarray:
        return self.tsq.mul_vec(np.asarray(xs), int(y))

    def t_mul_pointwise(self, xs, ys) -> np.ndarray:
        return self.tsq.mul_pointwise(np.asarray(xs), np.asarray(ys))

    def t_row(self, x: int) -> np.ndarray:
        return self.tsq.row(int(x))

    def t_conj(self, ts, u: int) -> np.ndarray:
        """u⁻¹·t·u elementwise over an array of tensor elements."""
        ts = np.asarray(ts)
        left = self.t_row(self.t_inv(u))[ts]
        return self.t_mul_vec(left, u)

    def t_commutator_with(self, ts, u: int) -> np.ndarray:
        """[t, u] = t⁻¹·u⁻¹·t·u elementwise over an array ``ts``."""
        ts = np.asarray(ts)
        return self.t_mul_pointwise(self.t_inverses[ts], self.t_conj(ts, u))

    # -- subgroup closure inside the tensor group ----------------------------

    def closure(self, seed) -> tuple[int, ...]:
        members = np.zeros(self.order, dtype=bool)
        members[0] = True
        seed = sorted({int(s) for s in seed})
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            new = []
            for s in seed:
                tgt = self.t_mul_vec(frontier, s)
                fresh = tgt[~members[tgt]]
                if fresh.size:
                    fresh = np.unique(fresh)
                    members[fresh] = True
                    new.append(fresh)
            frontier = np.concatenate(new) if new else np.empty(0, dtype=np.int64)
        return tuple(np.nonzero(members)[0].tolist())

    def diagonal_elements(self) -> tuple[int, ...]:
        """The subgroup generated by all pairing values (x, x)."""
        if self._diagonal is None:
            diag = np.unique(self.pairing[np.arange(self.base.order),
                                          np.arange(self.base.order)])
            self._diagonal = self.closure(diag.tolist())
        return self._diagonal

    def hypothesis_diag_trivial(self) -> bool:
        return self.diagonal_elements() == (0,)

    def diagonal_witness(self) -> int | None:
        """Some x with (x, x) pairing nontrivially, if any."""
        diag = self.pairing[np.arange(self.base.order), np.arange(self.base.order)]
        nz = np.nonzero(diag != 0)[0]
        return int(nz[0]) if nz.size else None

    # -- extension of maps defined on pairing generators ----------------------

    def _schedule(self):
        """BFS over tensor elements using one representative pair per distinct
        pairing value; groups of (targets, parents, representative pair)."""
        if self._pairing_schedule is not None:
            return self._pairing_schedule
        n = self.base.order
        flat = self.pairing.ravel()
        _, first = np.unique(flat, return_index=True)
        reps = np.sort(first)  # row-major first occurrences, one per value
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        sched = []
        covered = 1
        while frontier.size:
            nxt = []
            for rep in reps:
                elt = int(flat[rep])
                tgt = self.t_mul_vec(frontier, elt)
                mask = ~seen[tgt]
                if not mask.any():
                    continue
                tsel = tgt[mask]
                psel = frontier[mask]
                uniq, upos = np.unique(tsel, return_index=True)
                seen[uniq] = True
                covered += uniq.size
                sched.append((uniq.astype(np.int64), psel[upos].astype(np.int64),
                              int(rep)))
                nxt.append(uniq)
            frontier = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.int64)
        if covered != self.order:
            raise StructureError("pairing values do not generate the tensor square")
        self._pairing_schedule = sched
        return sched

    def extend_pairing_hom(self, target, pairing_images: np.ndarray) -> np.ndarray:
        """Extend ``pairing value (x, y) ↦ pairing_images[x, y]`` (elements of
        ``target``) to a homomorphism on the whole tensor square; raises
        ExtensionFailed if it is not well defined."""
        n = self.base.order
        flat = self.pairing.ravel()
        img = np.ascontiguousarray(pairing_images, dtype=np.int32).ravel()
        vals, first, invidx = np.unique(flat, return_index=True, return_inverse=True)
        if not np.array_equal(img, img[first][invidx]):
            bad = int(np.nonzero(img != img[first][invidx])[0][0])
            raise ExtensionFailed(
                f"pair {divmod(bad, n)} disagrees with an equal pairing value"
            )
        out = np.full(self.order, -1, dtype=np.int32)
        out[0] = 0
        for tgts, pars, rep in self._schedule():
            out[tgts] = target.mul_vec(out[pars], int(img[rep]))
        # homomorphism check against every generator
        idx = np.arange(self.order, dtype=np.int64)
        for rep in np.sort(np.unique(flat, return_index=True)[1]):
            elt = int(flat[rep])
            lhs = out[self.t_mul_vec(idx, elt)]
            rhs = target.mul_vec(out[idx], int(img[rep]))
            if not np.array_equal(lhs, rhs):
                t = int(np.nonzero(lhs != rhs)[0][0])
                raise ExtensionFailed(
                    f"map fails at element {t} against pair {divmod(int(rep), n)}"
                )
        return out

    def theta_swap(self) -> np.ndarray:
        """The swap-and-invert automorphism: pairing (x, y) ↦ pairing (y, x)⁻¹."""
        if self._theta is None:
            target_images = self.t_inverses[self.pairing.T]
            theta = self.extend_pairing_hom(self.tsq, target_images)
            if len(np.unique(theta)) != self.order:
                raise ExtensionFailed("swap map is not bijective")
            if not np.array_equal(theta[theta], np.arange(self.order)):
                raise ExtensionFailed("swap map is not an involution")
            self._theta = theta
        return self._theta

    def induced_endomorphism(self, alpha_images: np.ndarray) -> np.ndarray:
        """α⊗α for an automorphism of the base group: pairing (x, y) ↦
        pairing (α x, α y), extended to the whole tensor square."""
        a = np.asarray(alpha_images)
        images = self.extend_pairing_hom(self.tsq, self.pairing[np.ix_(a, a)])
        if len(np.unique(images)) != self.order:
            raise ExtensionFailed("induced map of an automorphism is not bijective")
        return images

    def check_endomorphism_on_relators(self, alpha_images: np.ndarray) -> bool:
        """Cheap verification that α⊗α respects every defining relator
        (direct route only: evaluates relator images in the coset table)."""
        if self._direct_table is None or self._direct_triples is None:
            raise StructureError("relator check available on the direct route only")
        n = self.base.order
        a = np.asarray(alpha_images, dtype=np.int64)
        apair = (a[:, None] * n + a[None, :]).ravel()
        t = self._direct_triples
        tab = self._direct_table
        v = tab[0, 2 * apair[t[:, 0]]]
        v = tab[v, 2 * apair[t[:, 1]]]
        v = tab[v, 2 * apair[t[:, 2]] + 1]
        return bool((v == 0).all())

    def kappa(self, t: int) -> int:
        return int(self.kappa_images[t])

    def kappa_image_subgroup(self):
        return self.base.subgroup(np.unique(self.kappa_images).tolist())

    def kappa_kernel_size(self) -> int:
        return int(np.count_nonzero(self.kappa_images == 0))

    def __repr__(self):
        return (
            f"TensorSquare(base={self.base.name!r}, order={self.order}, "
            f"construction={self.construction!r})"
        )


def _validate_tensor_square(ts: TensorSquare) -> None:
    """Defining relations, action axioms, and κ compatibility on the built
    tables.  Any failure is an engine bug, not a mathematical possibility."""
    g = ts.base
    n = g.order
    p = ts.pairing
    conj = g.conjugation_table()
    idx = np.arange(n)
    # κ(x ⊗ y) = [x, y]
    if not np.array_equal(ts.kappa_images[p], g.commutator_table()):
        raise StructureError("κ does not send pairing values to commutators")
    # action columns are bijections and form a right action
    nt = ts.order
    for b in range(n):
        col = ts.action[:, b]
        if len(np.unique(col)) != nt:
            raise ActionInconsistent(f"action of element {b} is not a bijection")
    rng = np.random.default_rng(0)
    pairs = (
        itertools.product(range(n), range(n))
        if n <= 24
        else zip(rng.integers(0, n, 512).tolist(), rng.integers(0, n, 512).tolist())
    )
    for b1, b2 in pairs:
        if not np.array_equal(
            ts.action[ts.action[:, b1], b2], ts.action[:, g.mul(b1, b2)]
        ):
            raise ActionInconsistent(f"action axiom fails at ({b1}, {b2})")
    # action on pairing values is coordinatewise conjugation
    for b in range(n):
        if not np.array_equal(
            ts.action[p, b], p[np.ix_(conj[:, b], conj[:, b])]
        ):
            raise ActionInconsistent(f"action of {b} disagrees with conjugation")
    # the two defining relations over all triples
    for b in range(n):
        cb = conj[:, b]
        lhs1 = p[g.cayley[:, b], :]
        rhs1 = ts.t_mul_pointwise(
            p[np.ix_(cb, cb)], np.broadcast_to(p[b, :], (n, n))
        )
        if not np.array_equal(lhs1, rhs1):
            raise StructureError(f"first defining relation fails with middle {b}")
        lhs2 = p[:, g.cayley[:, b].astype(np.int64)]
        rhs2 = ts.t_mul_pointwise(
            np.broadcast_to(p[:, b][:, None], (n, n)), p[np.ix_(cb, cb)]
        )
        if not np.array_equal(lhs2, rhs2):
            raise StructureError(f"second defining relation fails with middle {b}")
    if (ts.action[0] != 0).any():
        raise ActionInconsistent("action does not fix the identity")
    # each action map is multiplicative: φ_b(t·p) = φ_b(t)·φ_b(p) against
    # every generating pairing value
    reps = np.sort(np.unique(p.ravel(), return_index=True)[1])
    flat = p.ravel()
    tidx = np.arange(nt, dtype=np.int64)
    for b in range(n):
        col = ts.action[:, b]
        for rep in reps:
            elt = int(flat[rep])
            lhs = col[ts.t_mul_vec(tidx, elt)]
            rhs = ts.t_mul_vec(col, int(col[elt]))
            if not np.array_equal(lhs, rhs):
                raise ActionInconsistent(
                    f"action of {b} is not an endomorphism at pair {divmod(int(rep), n)}"
                )
