"""Exact symmetric-group arithmetic and direct Jucys-Murphy traces.

Permutations act on {1, ..., n}.  Composition convention, fixed once for the
whole package: ``compose(p, q)`` applies ``q`` first and then ``p``, i.e.
``compose(p, q)(x) == p(q(x))``.  Transposition words are evaluated left to
right by composing each new letter on the right, so the running product after
letters F1 F2 ... Fj is F1∘F2∘...∘Fj.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Iterable, Sequence

_MAX_COUNT = 2**63 - 1  # word counts must fit in 64 bits at desk scale


def check_exponent_vector(k: Sequence[int] | int) -> tuple[int, ...]:
    """Validate an exponent vector (k_1, ..., k_s), all k_i >= 1."""
    if isinstance(k, int):
        k = (k,)
    k = tuple(int(x) for x in k)
    if len(k) < 1 or any(x < 1 for x in k):
        raise ValueError(f"exponent vector must have s >= 1 positive entries, got {k}")
    return k


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1, ..., n}; images[i - 1] is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n: int, a: int, b: int) -> "Permutation":
        images = list(range(1, n + 1))
        images[a - 1], images[b - 1] = b, a
        return Permutation(tuple(images))

    @staticmethod
    def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)([cyc[0]])):
                images[a - 1] = b
        return Permutation(tuple(images))

    def inverse(self) -> "Permutation":
        images = [0] * self.n
        for i, y in enumerate(self.images, start=1):
            images[y - 1] = i
        return Permutation(tuple(images))

    def is_identity(self) -> bool:
        return all(y == i for i, y in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition including fixed points, smallest element first."""
        seen = [False] * self.n
        out = []
        for i in range(1, self.n + 1):
            if seen[i - 1]:
                continue
            cyc = [i]
            seen[i - 1] = True
            j = self(i)
            while j != i:
                cyc.append(j)
                seen[j - 1] = True
                j = self(j)
            out.append(tuple(cyc))
        return out


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p after q: compose(p, q)(x) = p(q(x)).  Degrees must match."""
    if p.n != q.n:
        raise ValueError(f"degree mismatch: {p.n} != {q.n}")
    return Permutation(tuple(p.images[y - 1] for y in q.images))


# ---------------------------------------------------------------------------
# Word enumeration for Jucys-Murphy traces.
#
# (1/n!) tr prod_r X_r^{k_r} in the regular representation counts the words
# tau whose transposition product is the identity: block r contributes k_r
# letters, each letter t standing for the transposition (r t).  Unmodified
# JM elements draw block-r letters from {r+1, ..., n}; the modified variant
# draws every letter from {s+1, ..., n}.
# ---------------------------------------------------------------------------


def _letter_ranges(n: int, k: tuple[int, ...], modified: bool) -> list[range]:
    s = len(k)
    ranges = []
    for r, kr in enumerate(k, start=1):
        lo = s + 1 if modified else r + 1
        ranges.extend([range(lo, n + 1)] * kr)
    return ranges


def _block_of_position(k: tuple[int, ...]) -> list[int]:
    blocks = []
    for r, kr in enumerate(k, start=1):
        blocks.extend([r] * kr)
    return blocks


def jm_trace_direct(n: int, k: Sequence[int], modified: bool = False) -> int:
    """Count solutions of the transposition-word equation by pruned DFS.

    Depth-first search over letter choices; the running product is kept as a
    mutable image array and each letter is an O(1) right-swap.  Prune when the
    Cayley distance to the identity (n minus the number of cycles) exceeds the
    number of letters still to place, and at every block boundary, where the
    running product must already fix the block's special indices.
    """
    k = check_exponent_vector(k)
    s = len(k)
    if n <= s:
        raise ValueError(f"need n > s, got n={n}, s={s}")
    total = sum(k)
    if total % 2 == 1:
        return 0  # sign parity

    ranges = _letter_ranges(n, k, modified)
    blocks = _block_of_position(k)
    block_end = [blocks[i] != blocks[i + 1] if i + 1 < total else True for i in range(total)]

    images = list(range(n + 1))  # images[0] unused
    count = 0

    def cycles_of_current() -> int:
        seen = [False] * (n + 1)
        c = 0
        for i in range(1, n + 1):
            if not seen[i]:
                c += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = images[j]
        return c

    def rec(pos: int, dist: int) -> None:
        nonlocal count
        if pos == total:
            if dist == 0:
                count += 1
                if count > _MAX_COUNT:  # pragma: no cover - desk scale
                    raise OverflowError("word count exceeds 64-bit range")
            return
        remaining = total - pos
        r = blocks[pos]
        for t in ranges[pos]:
            # right-compose with (r t): swap preimages at r and t
            same_cycle = _in_same_cycle(images, r, t)
            images[r], images[t] = images[t], images[r]
            ndist = dist - 1 if same_cycle else dist + 1
            ok = ndist <= remaining - 1
            if ok and block_end[pos]:
                ok = all(images[i] == i for i in range(1, r + 1))
            if ok:
                rec(pos + 1, ndist)
            images[r], images[t] = images[t], images[r]

    def _in_same_cycle(img: list[int], a: int, b: int) -> bool:
        j = img[a]
        while j != a:
            if j == b:
                return True
            j = img[j]
        return False

    rec(0, 0)
    assert cycles_of_current() == n  # undo discipline
    return count


def jm_trace_bruteforce(n: int, k: Sequence[int], modified: bool = False) -> int:
    """Independent oracle: materialize every word.  Tiny sizes only."""
    k = check_exponent_vector(k)
    total = sum(k)
    blocks = _block_of_position(k)
    count = 0
    for word in _iproduct(*_letter_ranges(n, k, modified)):
        p = Permutation.identity(n)
        for r, t in zip(blocks, word):
            p = compose(p, Permutation.transposition(n, r, t))
        if p.is_identity():
            count += 1
    return count


def verify_solution(s: int, k: Sequence[int], tau: Sequence[int]) -> bool:
    """True iff the transposition product of the word equals the identity.

    tau supplies the nonspecial symbols (all >= s+1); block r of the word
    contributes the transpositions (r tau_j) for its k_r positions.
    """
    k = check_exponent_vector(k)
    if len(k) != s:
        raise ValueError(f"k has {len(k)} blocks but s={s}")
    tau = tuple(int(t) for t in tau)
    if len(tau) != sum(k):
        raise ValueError(f"tau must have |k|={sum(k)} symbols, got {len(tau)}")
    if any(t <= s for t in tau):
        raise ValueError(f"tau symbols must be >= s+1={s + 1}, got {tau}")

    n = max(tau)
    images = list(range(n + 1))
    for r, t in zip(_block_of_position(k), tau):
        images[r], images[t] = images[t], images[r]
    return all(images[i] == i for i in range(1, n + 1))
