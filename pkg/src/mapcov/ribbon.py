"""Ribbon graphs, the contraction of low-valence vertices, trivalent
enumeration, the Laplace-domain trivalent-graph sum, and the tree/walk
combinatorics used for level-set counting.

A ribbon graph is a pair of permutations on darts: sigma rotates darts at
each vertex, alpha is the fixed-point-free edge involution.  Cells (boundary
components) are the orbits of face = sigma∘alpha and carry marks 0..s-1.
Each dart is one boundary segment; a metric assigns it a length, the two
sides of edge e being ell[d] and ell[alpha[d]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .maps import PolygonGluing, catalan, polygon_of_slots, rho_of


@dataclass(frozen=True)
class Degenerate:
    """Outcome of contracting a map with (g, s) in {(0,1), (0,2)}."""

    kind: str  # "point" or "circle"

    def __post_init__(self):
        if self.kind not in ("point", "circle"):
            raise ValueError(self.kind)


@dataclass(frozen=True)
class RibbonGraph:
    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    cell_of: tuple[int, ...]  # mark of the face orbit containing each dart

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(n)):
            raise ValueError("sigma is not a permutation of the darts")
        if len(self.alpha) != n or any(
            self.alpha[self.alpha[d]] != d or self.alpha[d] == d for d in range(n)
        ):
            raise ValueError("alpha must be a fixed-point-free involution")
        if len(self.cell_of) != n:
            raise ValueError("cell_of must label every dart")
        face = self.face_perm
        for d in range(n):
            if self.cell_of[face[d]] != self.cell_of[d]:
                raise ValueError("cell marks must be constant on face orbits")

    @property
    def num_darts(self) -> int:
        return len(self.sigma)

    @property
    def num_edges(self) -> int:
        return len(self.sigma) // 2

    @property
    def face_perm(self) -> tuple[int, ...]:
        return tuple(self.sigma[self.alpha[d]] for d in range(self.num_darts))

    def _orbits(self, perm: tuple[int, ...]) -> list[tuple[int, ...]]:
        seen = [False] * self.num_darts
        out = []
        for d in range(self.num_darts):
            if seen[d]:
                continue
            cyc = [d]
            seen[d] = True
            e = perm[d]
            while e != d:
                cyc.append(e)
                seen[e] = True
                e = perm[e]
            out.append(tuple(cyc))
        return out

    def vertices(self) -> list[tuple[int, ...]]:
        return self._orbits(self.sigma)

    def faces(self) -> list[tuple[int, ...]]:
        return self._orbits(self.face_perm)

    @property
    def num_cells(self) -> int:
        return max(self.cell_of) + 1

    def valences(self) -> list[int]:
        return sorted(len(v) for v in self.vertices())

    @property
    def genus(self) -> int:
        chi = len(self.vertices()) - self.num_edges + self.num_cells
        assert chi % 2 == 0
        return (2 - chi) // 2

    def is_connected(self) -> bool:
        n = self.num_darts
        seen = [False] * n
        stack = [0]
        seen[0] = True
        cnt = 1
        while stack:
            d = stack.pop()
            for e in (self.sigma[d], self.alpha[d]):
                if not seen[e]:
                    seen[e] = True
                    cnt += 1
                    stack.append(e)
        return cnt == n

    # -- canonical labeling --------------------------------------------------

    def _encoding_from(self, start: int, ell: tuple | None) -> tuple:
        """Deterministic BFS relabeling from a start dart; connected graphs."""
        n = self.num_darts
        label = [-1] * n
        order = [start]
        label[start] = 0
        head = 0
        while head < len(order):
            d = order[head]
            head += 1
            for e in (self.sigma[d], self.alpha[d]):
                if label[e] < 0:
                    label[e] = len(order)
                    order.append(e)
        sig = tuple(label[self.sigma[d]] for d in order)
        alp = tuple(label[self.alpha[d]] for d in order)
        cel = tuple(self.cell_of[d] for d in order)
        if ell is None:
            return (sig, alp, cel)
        return (sig, alp, cel, tuple(ell[d] for d in order))

    def canonical_key(self, ell: tuple | None = None) -> tuple:
        return min(self._encoding_from(d, ell) for d in range(self.num_darts))

    def automorphism_order(self, ell: tuple | None = None) -> int:
        encs = [self._encoding_from(d, ell) for d in range(self.num_darts)]
        best = min(encs)
        return sum(1 for e in encs if e == best)

    def to_json_dict(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "alpha": list(self.alpha),
            "cell_marks": list(self.cell_of),
        }


@dataclass(frozen=True)
class BoundaryMetric:
    """Length per dart (boundary segment); integer in lattice mode."""

    lengths: tuple

    def side_lengths(self, graph: RibbonGraph) -> list[tuple[int, int]]:
        """(ell_1, ell_2) per edge, darts in increasing order."""
        return [
            (self.lengths[d], self.lengths[graph.alpha[d]])
            for d in range(graph.num_darts)
            if d < graph.alpha[d]
        ]

    def cell_perimeters(self, graph: RibbonGraph) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in range(graph.num_darts):
            out[graph.cell_of[d]] = out.get(graph.cell_of[d], 0) + self.lengths[d]
        return out


def contract_phi(m: PolygonGluing) -> tuple[RibbonGraph, BoundaryMetric] | Degenerate:
    """Collapse all vertices of valence <= 2, tracking boundary lengths.

    Univalent vertices are collapsed first (iteratively, lowest dart first):
    the two segments of the disappearing edge are added to the segment that
    follows them in the face walk.  Then 2-valent vertices are smoothed: the
    two edges merge and each surviving side absorbs the removed segment that
    preceded it in the face walk.  Both moves preserve cell perimeters and
    the Euler characteristic.  Returns Degenerate for (g, s) = (0,1)/(0,2).
    """
    if not m.is_connected:
        raise ValueError("contract_phi requires a connected gluing")
    nmax = m.num_sides
    pairing = list(m.pairing)
    rho = rho_of(m.k)
    sigma = [rho[pairing[d]] for d in range(nmax)]
    alpha = pairing
    ell = [1] * nmax
    cell = list(polygon_of_slots(m.k))
    alive = [True] * nmax

    def vertex_size(d: int) -> int:
        c, e = 1, sigma[d]
        while e != d:
            c += 1
            e = sigma[e]
        return c

    # phase 1: collapse leaves until none remain
    changed = True
    while changed:
        changed = False
        for d in range(nmax):
            if alive[d] and sigma[d] == d:  # univalent vertex {d}
                dp = alpha[d]
                if sigma[dp] == dp:
                    # the final bare edge: the whole map was a plane tree
                    alive[d] = alive[dp] = False
                    assert not any(alive)
                    return Degenerate("point")
                t = sigma[dp]
                ell[t] += ell[d] + ell[dp]
                p = dp
                while sigma[p] != dp:
                    p = sigma[p]
                sigma[p] = sigma[dp]
                alive[d] = alive[dp] = False
                changed = True

    # phase 2: smooth 2-valent vertices
    changed = True
    while changed:
        changed = False
        for d1 in range(nmax):
            if not alive[d1]:
                continue
            d2 = sigma[d1]
            if d2 == d1 or sigma[d2] != d1:
                continue  # valence != 2
            if alpha[d1] == d2:
                # loop filling the whole vertex: a bare circle remains
                alive[d1] = alive[d2] = False
                assert not any(alive)
                return Degenerate("circle")
            d1p, d2p = alpha[d1], alpha[d2]
            ell[d1p] += ell[d2]
            ell[d2p] += ell[d1]
            alpha[d1p], alpha[d2p] = d2p, d1p
            alive[d1] = alive[d2] = False
            changed = True

    darts = [d for d in range(nmax) if alive[d]]
    assert darts, "connected non-degenerate contraction cannot be empty"
    index = {d: i for i, d in enumerate(darts)}
    graph = RibbonGraph(
        sigma=tuple(index[sigma[d]] for d in darts),
        alpha=tuple(index[alpha[d]] for d in darts),
        cell_of=tuple(cell[d] for d in darts),
    )
    metric = BoundaryMetric(tuple(ell[d] for d in darts))
    assert all(len(v) >= 3 for v in graph.vertices())
    return graph, metric


def valence_sum_check(graph: RibbonGraph) -> bool:
    """Euler-characteristic identity sum_v (val(v) - 2) = 4g - 4 + 2s."""
    total = sum(len(v) - 2 for v in graph.vertices())
    return total == 4 * graph.genus - 4 + 2 * graph.num_cells


def met_dimension(graph: RibbonGraph) -> int:
    """Dimension 2|e| - s of the metric polytope of the graph."""
    if any(len(v) < 3 for v in graph.vertices()):
        raise ValueError("met_dimension is defined on graphs with valences >= 3")
    return 2 * graph.num_edges - graph.num_cells


# ---------------------------------------------------------------------------
# Trivalent enumeration.
# ---------------------------------------------------------------------------


def _trivalent_unicellular(g: int) -> list[RibbonGraph]:
    """All labeled trivalent one-cell graphs with face permutation (0 1 ... m-1).

    Every isomorphism class appears exactly m/|Aut| times.  DFS over the edge
    involution; sigma(x) = face(alpha(x)) is forced arc by arc and pruned so
    its pieces stay paths of <= 2 arcs or closed 3-cycles.
    """
    E = 6 * g - 3
    if E <= 0:
        return []
    m = 2 * E
    nxt = [-1] * m  # partial sigma
    prv = [-1] * m
    partner = [-1] * m
    out: list[RibbonGraph] = []

    def path_ok(u: int) -> bool:
        # walk to the start of u's piece; a closed piece must be a 3-cycle,
        # an open piece must have at most 2 arcs (else it can never close)
        start, back = u, 0
        while prv[start] >= 0:
            start = prv[start]
            back += 1
            if start == u:
                return back == 3
        length, v = 0, start
        while nxt[v] >= 0:
            v = nxt[v]
            length += 1
        return length <= 2

    def add_arc(u: int, v: int) -> None:
        nxt[u] = v
        prv[v] = u

    def del_arc(u: int, v: int) -> None:
        nxt[u] = -1
        prv[v] = -1

    def rec():
        a = -1
        for d in range(m):
            if partner[d] == -1:
                a = d
                break
        if a == -1:
            sigma = tuple(nxt)
            out.append(RibbonGraph(sigma=sigma, alpha=tuple(partner), cell_of=(0,) * m))
            return
        for b in range(a + 1, m):
            if partner[b] != -1:
                continue
            partner[a], partner[b] = b, a
            u1, v1 = a, (b + 1) % m
            u2, v2 = b, (a + 1) % m
            add_arc(u1, v1)
            add_arc(u2, v2)
            if path_ok(v1) and path_ok(v2):
                rec()
            del_arc(u2, v2)
            del_arc(u1, v1)
            partner[a] = partner[b] = -1

    rec()
    return out


def _all_three_cycle_perms(m: int):
    """All permutations of 0..m-1 whose cycles all have length 3."""
    sigma = [-1] * m
    used = [False] * m

    def rec(count):
        if count == m:
            yield tuple(sigma)
            return
        a = used.index(False)
        used[a] = True
        rest = [x for x in range(a + 1, m) if not used[x]]
        for i, x in enumerate(rest):
            used[x] = True
            for y in rest[:i] + rest[i + 1:]:
                used[y] = True
                sigma[a], sigma[x], sigma[y] = x, y, a
                yield from rec(count + 3)
                used[y] = False
            used[x] = False
        used[a] = False
        sigma[a] = -1

    yield from rec(0)


def _trivalent_generic(g: int, s: int) -> list[RibbonGraph]:
    """Brute force over sigma with alpha standard; face marks appended."""
    E = 6 * g - 6 + 3 * s
    if E <= 0:
        return []
    m = 2 * E
    alpha = tuple(d + 1 if d % 2 == 0 else d - 1 for d in range(m))
    out = []
    for sigma in _all_three_cycle_perms(m):
        face = tuple(sigma[alpha[d]] for d in range(m))
        # face orbits
        seen = [False] * m
        orbits = []
        for d in range(m):
            if not seen[d]:
                orb = [d]
                seen[d] = True
                e = face[d]
                while e != d:
                    orb.append(e)
                    seen[e] = True
                    e = face[e]
                orbits.append(orb)
        if len(orbits) != s:
            continue
        V = m // 3
        if (2 - (V - E + s)) // 2 != g:
            continue
        probe = RibbonGraph(sigma=sigma, alpha=alpha, cell_of=(0,) * m)
        if not probe.is_connected():
            continue
        for marks in permutations(range(s)):
            cell_of = [0] * m
            for orb, mk in zip(orbits, marks):
                for d in orb:
                    cell_of[d] = mk
            out.append(RibbonGraph(sigma=sigma, alpha=alpha, cell_of=tuple(cell_of)))
    return out


@lru_cache(maxsize=None)
def enumerate_trivalent(g: int, s: int) -> tuple[tuple[RibbonGraph, int], ...]:
    """Isomorphism classes of trivalent genus-g graphs with s marked cells,
    with automorphism group orders (automorphisms preserve cell marks)."""
    if 6 * g - 6 + 3 * s < 0:
        return ()
    labeled = _trivalent_unicellular(g) if s == 1 else _trivalent_generic(g, s)
    by_key: dict[tuple, tuple[RibbonGraph, int]] = {}
    counts: dict[tuple, int] = {}
    for graph in labeled:
        key = graph.canonical_key()
        counts[key] = counts.get(key, 0) + 1
        if key not in by_key:
            by_key[key] = (graph, graph.automorphism_order())
    if s == 1 and by_key:
        m = next(iter(by_key.values()))[0].num_darts
        for key, (_, aut) in by_key.items():
            assert counts[key] * aut == m, "unicellular multiplicity inconsistent with Aut"
    return tuple(by_key[key] for key in sorted(by_key))


def kontsevich_sum(g: int, s: int, z: Sequence[float]) -> float:
    """2 sum_{trivalent Gamma} (1/|Aut|) prod_edges 2^{-1/2}/(sqrt z_1 + sqrt z_2)."""
    z = [float(x) for x in z]
    if len(z) != s or any(x <= 0 for x in z):
        raise ValueError("need s positive Laplace variables")
    total = 0.0
    for graph, aut in enumerate_trivalent(g, s):
        prod = 1.0
        for d in range(graph.num_darts):
            if d < graph.alpha[d]:
                z1 = z[graph.cell_of[d]]
                z2 = z[graph.cell_of[graph.alpha[d]]]
                prod *= (0.5**0.5) / (math.sqrt(z1) + math.sqrt(z2))
        total += prod / aut
    return 2.0 * total


def trivalent_aut_weighted_count(g: int, s: int) -> Fraction:
    """sum over classes of 1/|Aut|."""
    return sum((Fraction(1, aut) for _, aut in enumerate_trivalent(g, s)), Fraction(0))


# ---------------------------------------------------------------------------
# First-passage walks and edge fibers.
# ---------------------------------------------------------------------------


def first_passage_count(p: int, r: int) -> int:
    """Walks of +-1 steps from 0 first hitting r >= 1 at step p (hitting-time
    theorem: (r/p) binom(p, (p+r)/2)); t_{0,0} = 1 by convention."""
    if p < 0 or r < 0:
        raise ValueError("need p, r >= 0")
    if r == 0:
        return 1 if p == 0 else 0
    if p < r or (p - r) % 2 == 1:
        return 0
    val = Fraction(r, p) * math.comb(p, (p + r) // 2)
    assert val.denominator == 1
    return int(val)


def first_passage_bruteforce(p: int, r: int) -> int:
    """Oracle: enumerate all 2^p walks.  Tiny p only."""
    if r == 0:
        return 1 if p == 0 else 0
    count = 0
    for bits in range(2**p):
        pos, hit = 0, -1
        for i in range(p):
            pos += 1 if (bits >> i) & 1 else -1
            if pos == r:
                hit = i + 1
                break
        if hit == p:
            count += 1
    return count


def edge_collapse_count(p: int, q: int) -> int:
    """c_{p,q} = C_{(p+q-2)/2} when p + q is even and >= 2, else 0."""
    if p < 0 or q < 0:
        raise ValueError("need p, q >= 0")
    t = p + q
    if t < 2 or t % 2 == 1:
        return 0
    return catalan((t - 2) // 2)


def phi_fiber_count(graph: RibbonGraph, metric: BoundaryMetric) -> Fraction:
    """Exact number of maps contracting to (graph, metric).

    prod_i k_i * prod_e c_{l1,l2} / |Aut(graph, metric)|; exact because the
    automorphism group of a connected marked ribbon graph acts freely on the
    dressings-with-marked-vertices.
    """
    perim = metric.cell_perimeters(graph)
    val = Fraction(1)
    for c in range(graph.num_cells):
        val *= perim[c]
    for l1, l2 in metric.side_lengths(graph):
        val *= edge_collapse_count(l1, l2)
    return val / graph.automorphism_order(metric.lengths)
