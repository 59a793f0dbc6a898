"""Young-diagram arithmetic: dimensions, Plancherel measure, corner rates,
samplers, the limit shape, and the partition-side Jucys-Murphy trace.

Measure-theoretic identities are computed in exact rational arithmetic
(Fraction); floats enter only through the samplers and profile evaluation.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

import numpy as np

from .symgroup import check_exponent_vector

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive parts; the empty partition is allowed."""

    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"not a partition: {p}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        """Row length, 1-indexed; 0 beyond the last row."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        cols = [0] * self.parts[0]
        for row in self.parts:
            for j in range(row):
                cols[j] += 1
        return Partition(tuple(cols))

    def corners(self) -> list[int]:
        """Rows i whose last box is removable (lambda_i > lambda_{i+1})."""
        p = self.parts
        return [i + 1 for i in range(len(p)) if i + 1 == len(p) or p[i] > p[i + 1]]

    def addable(self) -> list[int]:
        """Rows i where a box can be appended (including row len+1)."""
        p = self.parts
        return [i + 1 for i in range(len(p)) if i == 0 or p[i - 1] > p[i]] + [len(p) + 1]

    def remove(self, i: int) -> "Partition":
        p = list(self.parts)
        p[i - 1] -= 1
        return Partition(tuple(x for x in p if x > 0))

    def add(self, i: int) -> "Partition":
        p = list(self.parts)
        if i == len(p) + 1:
            p.append(1)
        else:
            p[i - 1] += 1
        return Partition(tuple(p))

    def content(self, i: int) -> int:
        """Content (column - row) of the last box in row i."""
        return self.parts[i - 1] - i


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of n in reverse-lexicographic order."""

    def gen(rest: int, cap: int, prefix: list[int]):
        if rest == 0:
            yield Partition(tuple(prefix))
            return
        for first in range(min(rest, cap), 0, -1):
            prefix.append(first)
            yield from gen(rest - first, first, prefix)
            prefix.pop()

    yield from gen(n, n, [])


def dim_hook(lam: Partition) -> int:
    """Dimension by the hook length formula."""
    if lam.n == 0:
        return 1
    conj = lam.conjugate().parts
    num = factorial(lam.n)
    for i, row in enumerate(lam.parts):
        for j in range(row):
            num //= row - j + conj[j] - i - 1
    return num


def dim_product(lam: Partition) -> int:
    """Dimension by the length-l product formula (Vandermonde over factorials)."""
    if lam.n == 0:
        return 1
    p = lam.parts
    ell = len(p)
    num = factorial(lam.n)
    for i in range(ell):
        for j in range(i + 1, ell):
            num *= p[i] - p[j] + j - i
    den = 1
    for i in range(ell):
        den *= factorial(p[i] + ell - i - 1)
    q, r = divmod(num, den)
    assert r == 0
    return q


def dim(lam: Partition) -> int:
    """Irreducible S(n) dimension; both classical formulas, compared."""
    d = dim_hook(lam)
    assert d == dim_product(lam)
    return d


def plancherel_mass(lam: Partition) -> Fraction:
    """(dim lambda)^2 / n! as an exact rational."""
    return Fraction(dim_hook(lam) ** 2, factorial(lam.n))


def decay_rate_product(lam: Partition, i: int, exact: bool = True):
    """delta_i by the product formula; 0 automatically at non-corners."""
    p = lam.parts
    ell = len(p)
    one = Fraction(1) if exact else 1.0
    val = one * (p[i - 1] + ell - i) / lam.n
    for j in range(1, ell + 1):
        if j != i:
            val *= 1 - one / (p[i - 1] - p[j - 1] + j - i)
    return val


def decay_rates(lam: Partition, exact: bool = True) -> list[tuple[int, Fraction]]:
    """Corner-removal probabilities delta_i(lambda), one per corner row."""
    if lam.n == 0:
        raise ValueError("decay_rates needs a nonempty partition")
    return [(i, decay_rate_product(lam, i, exact)) for i in lam.corners()]


def decay_rates_dimension_ratio(lam: Partition) -> list[tuple[int, Fraction]]:
    """The defining ratio dim(lambda - box_i)/dim(lambda); cross-check route."""
    d = dim_hook(lam)
    return [(i, Fraction(dim_hook(lam.remove(i)), d)) for i in lam.corners()]


def growth_rates(lam: Partition, exact: bool = True) -> list[tuple[int, Fraction]]:
    """Box-addition probabilities delta*_i(lambda) = dim(lambda+box)/((n+1) dim).

    Computed as 1/((n+1) delta_i(lambda+box_i)) so only the product formula
    on the grown diagram is needed.
    """
    n1 = lam.n + 1
    out = []
    for i in lam.addable():
        grown = lam.add(i)
        out.append((i, 1 / (n1 * decay_rate_product(grown, i, exact))))
    return out


def sample_growth(n: int, seed) -> Partition:
    """Plancherel sample by n steps of the growth Markov chain.

    O(n * l(lambda) * #corners) per sample; intended for n <= 10^3, use
    sample_rsk at larger sizes.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    lam = Partition(())
    for _ in range(n):
        rows = lam.addable()
        probs = [rate for _, rate in growth_rates(lam, exact=False)]
        u = rng.random()
        acc = 0.0
        chosen = rows[-1]
        for row, pr in zip(rows, probs):
            acc += pr
            if u < acc:
                chosen = row
                break
        lam = lam.add(chosen)
    return lam


# ---------------------------------------------------------------------------
# RSK shape of a uniform random permutation (independent Plancherel sampler).
# Row-insertion keeps only the rows; the jitted kernel makes n = 10^4 draws
# cheap enough for the concentration experiments.
# ---------------------------------------------------------------------------


def _rsk_shape_py(values: np.ndarray) -> list[int]:
    rows: list[list[int]] = []
    for x in values:
        x = int(x)
        for row in rows:
            j = bisect.bisect_right(row, x)
            if j == len(row):
                row.append(x)
                break
            row[j], x = x, row[j]
        else:
            rows.append([x])
    return [len(r) for r in rows]


if _HAVE_NUMBA:

    @njit(cache=True)
    def _rsk_shape_kernel(values, rows, row_len):  # pragma: no cover - jitted
        nrows = 0
        for idx in range(values.shape[0]):
            x = values[idx]
            r = 0
            while True:
                if r == nrows:
                    rows[r, 0] = x
                    row_len[r] = 1
                    nrows += 1
                    break
                L = row_len[r]
                if rows[r, L - 1] <= x:
                    rows[r, L] = x
                    row_len[r] = L + 1
                    break
                lo, hi = 0, L - 1
                while lo < hi:
                    mid = (lo + hi) // 2
                    if rows[r, mid] <= x:
                        lo = mid + 1
                    else:
                        hi = mid
                rows[r, lo], x = x, rows[r, lo]
                r += 1
        return nrows


def rsk_shape(values: np.ndarray) -> Partition:
    """Shape of the RSK insertion tableau of the given sequence."""
    n = len(values)
    if n == 0:
        return Partition(())
    if _HAVE_NUMBA and n >= 256:
        cap = int(3.5 * n**0.5) + 16
        rows = np.empty((cap, cap), dtype=np.int64)
        row_len = np.zeros(cap, dtype=np.int64)
        nrows = _rsk_shape_kernel(np.asarray(values, dtype=np.int64), rows, row_len)
        assert nrows < cap and row_len[0] < cap, "RSK capacity exceeded"
        lengths = [int(x) for x in row_len[:nrows]]
    else:
        lengths = _rsk_shape_py(np.asarray(values))
    return Partition(tuple(lengths))


def sample_rsk(n: int, seed) -> Partition:
    """Plancherel sample via the RSK shape of a uniform random permutation."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return rsk_shape(rng.permutation(n))


# ---------------------------------------------------------------------------
# Partition-side trace: sum over diagrams and corner-removal chains.
# ---------------------------------------------------------------------------


def jm_trace_via_partitions(n: int, k: Sequence[int]) -> int:
    """(1/n!) tr prod_r X_r^{k_r} from contents of corner-removal chains.

    Sum over lambda |- n and chains lambda = mu^0 > mu^1 > ... > mu^s, step r
    removing one corner of content c_r, of dim(lambda) dim(mu^s) prod c_r^{k_r},
    divided by n!.  Exact; integrality of the result is asserted.
    """
    k = check_exponent_vector(k)
    s = len(k)
    if n <= s:
        raise ValueError(f"need n > s, got n={n}, s={s}")

    def chain_sum(mu: Partition, r: int) -> int:
        if r == s:
            return dim_hook(mu)
        total = 0
        for i in mu.corners():
            c = mu.content(i)
            total += c ** k[r] * chain_sum(mu.remove(i), r + 1)
        return total

    acc = 0
    for lam in partitions_of(n):
        acc += dim_hook(lam) * chain_sum(lam, 0)
    val = Fraction(acc, factorial(n))
    assert val.denominator == 1, f"trace not integral: {val}"
    return int(val)


# ---------------------------------------------------------------------------
# Limit shape and scaled profiles.
# ---------------------------------------------------------------------------


def limit_shape(x: float) -> float:
    """The Logan-Shepp/Vershik-Kerov curve Omega(x)."""
    x = float(x)
    if abs(x) >= 2.0:
        return abs(x)
    return (2.0 / np.pi) * (x * np.arcsin(x / 2.0) + np.sqrt(4.0 - x * x))


def profile_breakpoints(lam: Partition) -> tuple[np.ndarray, np.ndarray]:
    """Unscaled rotated profile at integer abscissae u in [-l-1, lambda_1+1].

    f(u) = u + 2 #{i >= 1 : lambda_i - i >= u}; piecewise linear with slope
    +-1 between integers and f(u) = |u| outside [-l(lambda), lambda_1].
    """
    if lam.n == 0:
        raise ValueError("profile needs a nonempty partition")
    ell = len(lam)
    lo, hi = -ell - 1, lam.parts[0] + 1
    us = np.arange(lo, hi + 1)
    desc = sorted((lam.parts[i] - (i + 1) for i in range(ell)), reverse=True)
    vals = []
    for u in us:
        cnt = sum(1 for c in desc if c >= u)  # rows 1..l
        cnt += max(0, -int(u) - ell)  # empty rows i > l have content -i
        vals.append(u + 2 * cnt)
    return us.astype(float), np.array(vals, dtype=float)


@dataclass(frozen=True)
class RotatedProfile:
    """n^{-1/2}-scaled rotated diagram boundary, callable on the real line."""

    xs: np.ndarray
    ys: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.interp(x, self.xs, self.ys)
        return np.where((x < self.xs[0]) | (x > self.xs[-1]), np.abs(x), inside)


def rotated_profile(lam: Partition) -> RotatedProfile:
    us, vals = profile_breakpoints(lam)
    scale = 1.0 / np.sqrt(lam.n)
    return RotatedProfile(us * scale, vals * scale)


def profile_area_above_abs(lam: Partition) -> Fraction:
    """Exact area between the unscaled profile and |u|; equals 2n."""
    us, vals = profile_breakpoints(lam)
    area = Fraction(0)
    for i in range(len(us) - 1):
        # trapezoid of (f - |u|) on a unit interval, exact for PL functions
        a = Fraction(int(vals[i])) - abs(int(us[i]))
        b = Fraction(int(vals[i + 1])) - abs(int(us[i + 1]))
        area += Fraction(a + b, 2)
    return area


def scaled_rows(lam: Partition) -> np.ndarray:
    """x_i = n^{1/3} (lambda_i / (2 sqrt n) - 1) for i = 1..l(lambda)."""
    if lam.n == 0:
        raise ValueError("scaled_rows needs a nonempty partition")
    n = lam.n
    rows = np.array(lam.parts, dtype=float)
    return n ** (1.0 / 3.0) * (rows / (2.0 * np.sqrt(n)) - 1.0)


def laplace_statistic(lam: Partition, xi: float) -> float:
    """x_hat(xi) = sum_i exp(xi x_i), finite and positive."""
    if xi <= 0:
        raise ValueError("xi must be positive")
    x = scaled_rows(lam)
    with np.errstate(under="ignore"):
        return float(np.sum(np.exp(np.clip(xi * x, -745.0, None))))
