"""Todd–Coxeter coset enumeration for finitely presented groups.

Letters of words are encoded as table columns: generator ``k`` acts through
column ``2k`` and its inverse through column ``2k+1``, so the inverse of a
column ``c`` is ``c ^ 1``.  Undefined entries are ``-1``.

Two strategies are provided: HLT with lookahead (default) and Felsch.  The
hot loops are numba-compiled; set the environment variable
``GROUPTENSOR_NO_JIT=1`` to run them as plain Python (slow, for debugging).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import IncompleteTable, LimitExceeded, StructureError
from .words import Presentation, Word, cyclic_reduce

UNDEF = -1

if os.environ.get("GROUPTENSOR_NO_JIT"):
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
else:
    from numba import njit


def letters_to_cols(letters) -> np.ndarray:
    """Signed letters to column codes."""
    out = np.empty(len(letters), dtype=np.int32)
    for i, l in enumerate(letters):
        out[i] = 2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1
    return out


def _flatten(words_cols: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    off = np.zeros(len(words_cols) + 1, dtype=np.int64)
    for i, w in enumerate(words_cols):
        off[i + 1] = off[i] + len(w)
    flat = np.empty(off[-1], dtype=np.int32)
    for i, w in enumerate(words_cols):
        flat[off[i] : off[i + 1]] = w
    return flat, off


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------
# state layout: [0]=nalloc  [1]=nlive  [2]=nded  [3]=ded overflow flag
#               [4]=defines since last lookahead

STATUS_DONE = 0
STATUS_NEED_SPACE = 1
STATUS_LIMIT = 2


@njit(cache=True)
def _rep(p, k):
    r = k
    while p[r] != r:
        r = p[r]
    while p[k] != r:
        nxt = p[k]
        p[k] = r
        k = nxt
    return r


@njit(cache=True)
def _push_ded(ded, state, coset, col, ncols):
    if state[2] >= ded.shape[0]:
        state[3] = 1
    else:
        ded[state[2]] = np.int64(coset) * ncols + col
        state[2] += 1


@njit(cache=True)
def _coincidence(table, p, queue, state, ded, use_ded, a, b):
    ncols = table.shape[1]
    qh = 0
    qt = 0
    ra = _rep(p, a)
    rb = _rep(p, b)
    if ra == rb:
        return
    if ra > rb:
        ra, rb = rb, ra
    p[rb] = ra
    queue[qt] = rb
    qt += 1
    state[1] -= 1
    while qh < qt:
        y = queue[qh]
        qh += 1
        for x in range(ncols):
            d = table[y, x]
            if d == UNDEF:
                continue
            xi = x ^ 1
            table[d, xi] = UNDEF
            mu = _rep(p, y)
            nu = _rep(p, d)
            t = table[mu, x]
            if t != UNDEF:
                u = _rep(p, nu)
                v = _rep(p, t)
                if u != v:
                    if u > v:
                        u, v = v, u
                    p[v] = u
                    queue[qt] = v
                    qt += 1
                    state[1] -= 1
            else:
                t = table[nu, xi]
                if t != UNDEF:
                    u = _rep(p, mu)
                    v = _rep(p, t)
                    if u != v:
                        if u > v:
                            u, v = v, u
                        p[v] = u
                        queue[qt] = v
                        qt += 1
                        state[1] -= 1
                else:
                    table[mu, x] = nu
                    table[nu, xi] = mu
                    if use_ded:
                        _push_ded(ded, state, mu, x, ncols)
                        _push_ded(ded, state, nu, xi, ncols)


@njit(cache=True)
def _define(table, p, state, f, x):
    b = state[0]
    if b >= table.shape[0]:
        return -1
    state[0] = b + 1
    state[1] += 1
    state[4] += 1
    p[b] = b
    table[f, x] = b
    table[b, x ^ 1] = f
    return b


@njit(cache=True)
def _scan_and_fill(table, p, queue, state, ded, use_ded, alpha, word):
    """Scan ``word`` at ``alpha``, defining new cosets to complete it.

    Returns STATUS_DONE or STATUS_NEED_SPACE.
    """
    f = alpha
    b = alpha
    i = 0
    j = word.shape[0] - 1
    while True:
        while i <= j:
            t = table[f, word[i]]
            if t == UNDEF:
                break
            f = t
            i += 1
        if i > j:
            if f != b:
                _coincidence(table, p, queue, state, ded, use_ded, f, b)
            return STATUS_DONE
        while j >= i:
            t = table[b, word[j] ^ 1]
            if t == UNDEF:
                break
            b = t
            j -= 1
        if j < i:
            _coincidence(table, p, queue, state, ded, use_ded, f, b)
            return STATUS_DONE
        elif j == i:
            table[f, word[i]] = b
            table[b, word[i] ^ 1] = f
            if use_ded:
                _push_ded(ded, state, f, word[i], table.shape[1])
                _push_ded(ded, state, b, word[i] ^ 1, table.shape[1])
            return STATUS_DONE
        else:
            nb = _define(table, p, state, f, word[i])
            if nb < 0:
                return STATUS_NEED_SPACE
            if use_ded:
                _push_ded(ded, state, f, word[i], table.shape[1])
                _push_ded(ded, state, nb, word[i] ^ 1, table.shape[1])


@njit(cache=True)
def _scan_deduce(table, p, queue, state, ded, use_ded, alpha, word):
    """Scan without defining; fill a single gap, or process a coincidence."""
    f = alpha
    b = alpha
    i = 0
    j = word.shape[0] - 1
    while i <= j:
        t = table[f, word[i]]
        if t == UNDEF:
            break
        f = t
        i += 1
    if i > j:
        if f != b:
            _coincidence(table, p, queue, state, ded, use_ded, f, b)
        return
    while j >= i:
        t = table[b, word[j] ^ 1]
        if t == UNDEF:
            break
        b = t
        j -= 1
    if j < i:
        _coincidence(table, p, queue, state, ded, use_ded, f, b)
    elif j == i:
        table[f, word[i]] = b
        table[b, word[i] ^ 1] = f
        if use_ded:
            _push_ded(ded, state, f, word[i], table.shape[1])
            _push_ded(ded, state, b, word[i] ^ 1, table.shape[1])


@njit(cache=True)
def _lookahead(table, p, queue, state, ded, use_ded, rel_flat, rel_off):
    """Scan every relator at every live coset, without defining."""
    nrels = rel_off.shape[0] - 1
    for beta in range(state[0]):
        if p[beta] != beta:
            continue
        for r in range(nrels):
            if p[beta] != beta:
                break
            _scan_deduce(
                table, p, queue, state, ded, use_ded, beta,
                rel_flat[rel_off[r] : rel_off[r + 1]],
            )


@njit(cache=True)
def _compact(table, p, state, alpha):
    """Renumber live cosets by first-use order; return the remapped alpha."""
    nalloc = state[0]
    ncols = table.shape[1]
    newidx = np.full(nalloc, -1, dtype=np.int32)
    cnt = 0
    new_alpha = 0
    for i in range(nalloc):
        if p[i] == i:
            if i < alpha:
                new_alpha += 1
            newidx[i] = cnt
            cnt += 1
    for i in range(nalloc):
        if p[i] != i:
            continue
        ni = newidx[i]
        for x in range(ncols):
            v = table[i, x]
            if v != UNDEF:
                table[ni, x] = newidx[_rep(p, v)]
            else:
                table[ni, x] = UNDEF
    for i in range(cnt, nalloc):
        for x in range(ncols):
            table[i, x] = UNDEF
    for i in range(nalloc):
        p[i] = i
    state[0] = cnt
    state[1] = cnt
    return new_alpha


@njit(cache=True)
def _grow(table, p, queue, newcap):
    ncols = table.shape[1]
    nt = np.full((newcap, ncols), UNDEF, dtype=np.int32)
    nt[: table.shape[0]] = table
    npp = np.empty(newcap, dtype=np.int32)
    npp[: p.shape[0]] = p
    nq = np.empty(newcap + 1, dtype=np.int32)
    return nt, npp, nq


_PROBE_LANES = 32


@njit(cache=True)
def _run_hlt(table, p, queue, state, rel_flat, rel_off, sub_flat, sub_off, max_cosets):
    """HLT with lookahead.  Returns (table, p, queue, status).

    Relators are first probed read-only in interleaved lanes so independent
    table loads overlap in the memory system; only relators that do not
    already scan to completion take the sequential fill path.
    """
    ded = np.empty(0, dtype=np.int64)
    nrels = rel_off.shape[0] - 1
    nsubs = sub_off.shape[0] - 1
    fbuf = np.empty(_PROBE_LANES, dtype=np.int32)
    posbuf = np.empty(_PROBE_LANES, dtype=np.int64)
    need = np.empty(_PROBE_LANES, dtype=np.int64)
    s = 0
    while s < nsubs:
        w = sub_flat[sub_off[s] : sub_off[s + 1]]
        if w.shape[0] == 0:
            s += 1
            continue
        st = _scan_and_fill(table, p, queue, state, ded, False, _rep(p, 0), w)
        if st == STATUS_NEED_SPACE:
            if table.shape[0] < max_cosets:
                newcap = min(max(2 * table.shape[0], 1024), max_cosets)
                table, p, queue = _grow(table, p, queue, newcap)
                continue
            return table, p, queue, STATUS_LIMIT
        s += 1
    alpha = 0
    while alpha < state[0]:
        if p[alpha] == alpha:
            r = 0
            while r < nrels:
                if p[alpha] != alpha:
                    break
                # read-only probe of the next block of relators
                nb = min(_PROBE_LANES, nrels - r)
                nneed = 0
                for l in range(nb):
                    fbuf[l] = alpha
                    posbuf[l] = rel_off[r + l]
                active = nb
                while active > 0:
                    active = 0
                    for l in range(nb):
                        pos = posbuf[l]
                        if pos < 0:
                            continue
                        if pos >= rel_off[r + l + 1]:
                            # walk complete: satisfied iff back at alpha
                            if fbuf[l] != alpha:
                                need[nneed] = r + l
                                nneed += 1
                            posbuf[l] = -1
                            continue
                        t = table[fbuf[l], rel_flat[pos]]
                        if t == UNDEF:
                            need[nneed] = r + l
                            nneed += 1
                            posbuf[l] = -1
                            continue
                        fbuf[l] = t
                        posbuf[l] = pos + 1
                        active += 1
                # sequential fill for relators the probe could not settle
                k = 0
                while k < nneed:
                    if p[alpha] != alpha:
                        break
                    ri = need[k]
                    w = rel_flat[rel_off[ri] : rel_off[ri + 1]]
                    st = _scan_and_fill(table, p, queue, state, ded, False, alpha, w)
                    if st == STATUS_NEED_SPACE:
                        if table.shape[0] < max_cosets:
                            newcap = min(max(2 * table.shape[0], 1024), max_cosets)
                            table, p, queue = _grow(table, p, queue, newcap)
                            continue
                        if state[4] == 0:
                            return table, p, queue, STATUS_LIMIT
                        state[4] = 0
                        _lookahead(table, p, queue, state, ded, False,
                                   rel_flat, rel_off)
                        before = state[0]
                        alpha = _compact(table, p, state, alpha)
                        if state[0] >= before:
                            return table, p, queue, STATUS_LIMIT
                        continue
                    k += 1
                if p[alpha] != alpha:
                    break
                r += nb
            if p[alpha] == alpha:
                x = 0
                while x < table.shape[1]:
                    if table[alpha, x] == UNDEF:
                        nb2 = _define(table, p, state, alpha, x)
                        if nb2 < 0:
                            if table.shape[0] < max_cosets:
                                newcap = min(max(2 * table.shape[0], 1024), max_cosets)
                                table, p, queue = _grow(table, p, queue, newcap)
                                continue
                            if state[4] == 0:
                                return table, p, queue, STATUS_LIMIT
                            state[4] = 0
                            _lookahead(
                                table, p, queue, state, ded, False, rel_flat, rel_off
                            )
                            before = state[0]
                            alpha = _compact(table, p, state, alpha)
                            if state[0] >= before:
                                return table, p, queue, STATUS_LIMIT
                            if p[alpha] != alpha:
                                break
                            continue
                    x += 1
        alpha += 1
    _compact(table, p, state, 0)
    return table, p, queue, STATUS_DONE


@njit(cache=True)
def _drain_deductions(table, p, queue, state, ded, conj_flat, conj_off, colptr,
                      rel_flat, rel_off):
    while True:
        while state[2] > 0:
            state[2] -= 1
            packed = ded[state[2]]
            ncols = table.shape[1]
            c = np.int32(packed // ncols)
            x = np.int32(packed % ncols)
            if p[c] != c:
                continue
            for k in range(colptr[x], colptr[x + 1]):
                if p[c] != c:
                    break
                _scan_deduce(
                    table, p, queue, state, ded, True, c,
                    conj_flat[conj_off[k] : conj_off[k + 1]],
                )
        if state[3] == 0:
            return
        # deduction stack overflowed: recover with a full deduction pass
        state[3] = 0
        state[2] = 0
        _lookahead(table, p, queue, state, ded, True, rel_flat, rel_off)


@njit(cache=True)
def _run_felsch(table, p, queue, state, rel_flat, rel_off, sub_flat, sub_off,
                conj_flat, conj_off, colptr, ded, max_cosets):
    """Felsch strategy.  Returns (table, p, queue, status)."""
    nsubs = sub_off.shape[0] - 1
    s = 0
    while s < nsubs:
        w = sub_flat[sub_off[s] : sub_off[s + 1]]
        if w.shape[0] == 0:
            s += 1
            continue
        st = _scan_and_fill(table, p, queue, state, ded, True, _rep(p, 0), w)
        if st == STATUS_NEED_SPACE:
            if table.shape[0] < max_cosets:
                newcap = min(max(2 * table.shape[0], 1024), max_cosets)
                table, p, queue = _grow(table, p, queue, newcap)
                continue
            return table, p, queue, STATUS_LIMIT
        _drain_deductions(table, p, queue, state, ded, conj_flat, conj_off,
                          colptr, rel_flat, rel_off)
        s += 1
    alpha = 0
    while alpha < state[0]:
        if p[alpha] == alpha:
            x = 0
            while x < table.shape[1]:
                if p[alpha] != alpha:
                    break
                if table[alpha, x] == UNDEF:
                    nb = _define(table, p, state, alpha, x)
                    if nb < 0:
                        if table.shape[0] < max_cosets:
                            newcap = min(max(2 * table.shape[0], 1024), max_cosets)
                            table, p, queue = _grow(table, p, queue, newcap)
                            continue
                        if state[4] == 0:
                            return table, p, queue, STATUS_LIMIT
                        state[4] = 0
                        _lookahead(table, p, queue, state, ded, True,
                                   rel_flat, rel_off)
                        _drain_deductions(table, p, queue, state, ded, conj_flat,
                                          conj_off, colptr, rel_flat, rel_off)
                        before = state[0]
                        alpha = _compact(table, p, state, alpha)
                        state[2] = 0
                        if state[0] >= before:
                            return table, p, queue, STATUS_LIMIT
                        continue
                    _push_ded(ded, state, alpha, x, table.shape[1])
                    _push_ded(ded, state, nb, x ^ 1, table.shape[1])
                    _drain_deductions(table, p, queue, state, ded, conj_flat,
                                      conj_off, colptr, rel_flat, rel_off)
                x += 1
        alpha += 1
    _compact(table, p, state, 0)
    return table, p, queue, STATUS_DONE


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationLimits:
    """Resource limits and strategy for one enumeration."""

    max_cosets: int = 2**22
    strategy: str = "hlt"

    def __post_init__(self):
        if self.max_cosets < 1:
            raise StructureError("max_cosets must be at least 1")
        if self.strategy not in ("hlt", "felsch"):
            raise StructureError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class CosetTable:
    """A complete coset table: ``ncosets`` rows by ``2*ngens`` columns."""

    ncosets: int
    ngens: int
    table: np.ndarray
    complete: bool = True

    def __post_init__(self):
        self.table.setflags(write=False)

    def column(self, col: int) -> np.ndarray:
        """The permutation of cosets induced by one column."""
        if self.ngens == 0:
            return np.zeros(self.ncosets, dtype=np.int32)
        return self.table[:, col]

    def word_permutation(self, word: Word) -> np.ndarray:
        """Permutation of cosets induced by a word (right action)."""
        perm = np.arange(self.ncosets, dtype=np.int32)
        for c in letters_to_cols(word.letters):
            perm = self.table[perm, c]
        return perm

    def trace(self, coset: int, word: Word) -> int:
        c = coset
        for col in letters_to_cols(word.letters):
            c = int(self.table[c, col])
        return c


def _prepare_relators(pres: Presentation) -> list[tuple[int, ...]]:
    seen = set()
    rels = []
    for r in pres.relators:
        t = cyclic_reduce(r.letters)
        if not t or t in seen:
            continue
        seen.add(t)
        rels.append(t)
    # short relators first: collapsing consequences early keeps tables tight
    rels.sort(key=lambda t: (len(t), t))
    return rels


def _conjugate_tables(rels: list[tuple[int, ...]], ncols: int):
    """Deduped cyclic conjugates of relators and inverses, grouped by first
    column, for Felsch deduction processing."""
    conj = set()
    for t in rels:
        for w in (t, tuple(-l for l in reversed(t))):
            for i in range(len(w)):
                conj.add(w[i:] + w[:i])
    cols = sorted(
        (tuple(letters_to_cols(w).tolist()) for w in conj),
        key=lambda c: (c[0], c),
    )
    colptr = np.zeros(ncols + 1, dtype=np.int64)
    for c in cols:
        colptr[c[0] + 1] += 1
    colptr = np.cumsum(colptr).astype(np.int64)
    flat, off = _flatten([np.array(c, dtype=np.int32) for c in cols])
    return flat, off, colptr


def todd_coxeter(
    pres: Presentation,
    subgroup: list[Word] | None = None,
    limits: EnumerationLimits | None = None,
) -> CosetTable:
    """Enumerate cosets of ``⟨subgroup⟩`` in the group presented by ``pres``.

    Deterministic for a fixed strategy; raises LimitExceeded if ``max_cosets``
    is reached before the table closes.
    """
    subgroup = list(subgroup or [])
    limits = limits or EnumerationLimits()
    pres.check_words(subgroup)
    if pres.ngens == 0:
        return CosetTable(1, 0, np.zeros((1, 0), dtype=np.int32))

    ncols = 2 * pres.ngens
    rels = _prepare_relators(pres)
    rel_flat, rel_off = _flatten([letters_to_cols(t) for t in rels])
    sub_words = [letters_to_cols(w.letters) for w in subgroup if len(w) > 0]
    sub_flat, sub_off = _flatten(sub_words)

    cap = int(min(max(1024, 2 * ncols), limits.max_cosets))
    table = np.full((cap, ncols), UNDEF, dtype=np.int32)
    p = np.zeros(cap, dtype=np.int32)
    queue = np.empty(cap + 1, dtype=np.int32)
    state = np.zeros(8, dtype=np.int64)
    state[0] = 1  # coset 0 exists
    state[1] = 1

    if limits.strategy == "hlt":
        table, p, queue, status = _run_hlt(
            table, p, queue, state, rel_flat, rel_off, sub_flat, sub_off,
            limits.max_cosets,
        )
    else:
        conj_flat, conj_off, colptr = _conjugate_tables(rels, ncols)
        ded = np.empty(max(4 * ncols, 65536), dtype=np.int64)
        table, p, queue, status = _run_felsch(
            table, p, queue, state, rel_flat, rel_off, sub_flat, sub_off,
            conj_flat, conj_off, colptr, ded, limits.max_cosets,
        )

    if status == STATUS_LIMIT:
        raise LimitExceeded(
            f"coset enumeration exceeded max_cosets={limits.max_cosets}"
        )
    n = int(state[0])
    result = table[:n].copy()
    ct = CosetTable(n, pres.ngens, result)
    validate_table(ct, pres, subgroup)
    return ct


def validate_table(ct: CosetTable, pres: Presentation, subgroup: list[Word]) -> None:
    """Post-hoc invariants: columns are permutations, relators act trivially,
    subgroup generators fix coset 0.  Failure means an engine bug."""
    n = ct.ncosets
    idp = np.arange(n, dtype=np.int32)
    if ct.ngens and (ct.table < 0).any():
        raise IncompleteTable("enumeration produced an incomplete table")
    for c in range(2 * ct.ngens):
        col = ct.table[:, c]
        if not np.array_equal(np.sort(col), idp):
            raise StructureError(f"column {c} is not a permutation of cosets")
        if not np.array_equal(ct.table[col, c ^ 1], idp):
            raise StructureError(f"columns {c},{c ^ 1} are not mutually inverse")
    for r in pres.relators:
        if not np.array_equal(ct.word_permutation(r), idp):
            raise StructureError(f"relator {r.render()} does not fix all cosets")
    for w in subgroup:
        if ct.trace(0, w) != 0:
            raise StructureError(f"subgroup word {w.render()} moves coset 0")


def table_bfs_tree(table: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Breadth-first tree over a complete table from coset 0.

    Expanding cosets in discovery order and columns in index order yields the
    minimal-length, lexicographically-least word for every coset.  Returns
    (parent, edge column, discovery order).
    """
    n, ncols = table.shape
    parent = np.full(n, -2, dtype=np.int32)
    edge = np.full(n, -1, dtype=np.int32)
    order = np.empty(n, dtype=np.int32)
    parent[0] = -1
    order[0] = 0
    head, tail = 0, 1
    while head < tail:
        c = order[head]
        head += 1
        for x in range(ncols):
            t = table[c, x]
            if parent[t] == -2:
                parent[t] = c
                edge[t] = x
                order[tail] = t
                tail += 1
    if tail != n:
        raise StructureError("coset table is not transitive")
    return parent, edge, order


def coset_word(parent: np.ndarray, edge: np.ndarray, c: int) -> Word:
    """Minimal word carrying coset 0 to coset ``c`` along the BFS tree."""
    cols = []
    while parent[c] != -1:
        cols.append(int(edge[c]))
        c = int(parent[c])
    letters = [
        (x // 2 + 1) if x % 2 == 0 else -(x // 2 + 1) for x in reversed(cols)
    ]
    return Word(letters)
