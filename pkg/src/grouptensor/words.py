"""Words over abstract generators and finite presentations.

A letter is a nonzero int: ``+(k+1)`` is generator ``k``, ``-(k+1)`` its
inverse.  Words are stored freely reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import StructureError

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def free_reduce(letters) -> tuple[int, ...]:
    """Cancel adjacent x·x⁻¹ pairs until none remain."""
    out: list[int] = []
    for l in letters:
        if l == 0:
            raise StructureError("word letters must be nonzero")
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(int(l))
    return tuple(out)


def cyclic_reduce(letters: tuple[int, ...]) -> tuple[int, ...]:
    """Strip inverse pairs straddling the ends (relators only)."""
    letters = free_reduce(letters)
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    return letters[i:j]


@dataclass(frozen=True)
class Word:
    """A freely reduced word in abstract generators."""

    letters: tuple[int, ...]

    def __init__(self, letters=()):
        object.__setattr__(self, "letters", free_reduce(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-l for l in reversed(self.letters)))

    def conjugate_by(self, w: "Word") -> "Word":
        """self**w = w⁻¹ · self · w."""
        return w.inverse() * self * w

    def max_generator(self) -> int:
        """Largest 0-based generator index used, or -1 for the empty word."""
        return max((abs(l) - 1 for l in self.letters), default=-1)

    def render(self) -> str:
        """Human-readable form such as ``a^2*b^-1``; ``1`` for empty."""
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            l = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == l:
                j += 1
            gen = abs(l) - 1
            name = _LETTERS[gen] if gen < len(_LETTERS) else f"g{gen}"
            exp = (j - i) * (1 if l > 0 else -1)
            parts.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        return "*".join(parts)


def commutator_word(u: Word, v: Word) -> Word:
    """[u, v] = u⁻¹·v⁻¹·u·v."""
    return u.inverse() * v.inverse() * u * v


def gen_word(k: int) -> Word:
    return Word((k + 1,))


@dataclass(frozen=True)
class Presentation:
    """Abstract generators plus relator words; input to coset enumeration."""

    ngens: int
    relators: tuple[Word, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.ngens < 0:
            raise StructureError("ngens must be non-negative")
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            if not isinstance(r, Word):
                raise StructureError("relators must be Word instances")
            if len(r) == 0:
                raise StructureError("relator freely reduces to the empty word")
            if r.max_generator() >= self.ngens:
                raise StructureError(
                    f"relator {r.render()} uses a generator out of range"
                )

    def check_words(self, words) -> None:
        for w in words:
            if w.max_generator() >= self.ngens:
                raise StructureError(f"word {w.render()} uses a generator out of range")


_TOKEN_RE = re.compile(r"[a-z]|\^-?\d+|\*|\(|\)")


def parse_word(text: str, ngens: int) -> Word:
    """Parse relator syntax: letters a..z, ``*`` concatenation, ``^n`` powers,
    parentheses.  Case-insensitive, whitespace-tolerant."""
    s = re.sub(r"\s+", "", text).lower()
    if not s:
        raise StructureError("empty word")
    pos = 0
    tokens = []
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m:
            raise StructureError(f"cannot parse word {text!r} at {s[pos:]!r}")
        tokens.append(m.group())
        pos = m.end()

    def parse_seq(i: int, depth: int) -> tuple[list[int], int]:
        letters: list[int] = []
        expect_factor = True
        while i < len(tokens):
            t = tokens[i]
            if t == ")":
                if depth == 0:
                    raise StructureError(f"unbalanced ')' in {text!r}")
                return letters, i
            if t == "*":
                i += 1
                expect_factor = True
                continue
            if not expect_factor and not t.startswith("^"):
                # implicit concatenation such as "ab" is accepted
                pass
            if t == "(":
                inner, i = parse_seq(i + 1, depth + 1)
                if i >= len(tokens) or tokens[i] != ")":
                    raise StructureError(f"unbalanced '(' in {text!r}")
                i += 1
                factor = inner
            elif len(t) == 1 and t.isalpha():
                k = ord(t) - ord("a")
                if k >= ngens:
                    raise StructureError(
                        f"generator {t!r} out of range for {ngens} generators"
                    )
                factor = [k + 1]
                i += 1
            else:
                raise StructureError(f"unexpected token {t!r} in {text!r}")
            if i < len(tokens) and tokens[i].startswith("^"):
                exp = int(tokens[i][1:])
                i += 1
                if exp < 0:
                    factor = [-l for l in reversed(factor)]
                    exp = -exp
                factor = factor * exp
            letters.extend(factor)
            expect_factor = False
        return letters, i

    letters, i = parse_seq(0, 0)
    if i != len(tokens):
        raise StructureError(f"trailing tokens in {text!r}")
    return Word(letters)
