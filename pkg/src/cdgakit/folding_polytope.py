"""Folding polytopes as labeled cubical gluings.

The n-th folding polytope is built from n+1 n-cubes, where cube k carries
the product structure simplex^k x I^(n-k) (the simplex factor realized on
the first k cube coordinates, the first remaining coordinate being the
"path" direction).  Three facets of cube k get names:

* ``B_k^0`` and ``B_k^1`` (for k >= 1): the facets lying over the 0th and
  1st faces of the simplex factor.  Under the corner identification the
  j-th simplex face corresponds to the cube facet {t_(j+1) = 0}, so
  B_k^0 = {t_1 = 0} and B_k^1 = {t_2 = 0} once k >= 2; for k = 1 the
  affine interval/simplex identification gives B_1^0 = {t_1 = 1} and
  B_1^1 = {t_1 = 0}.
* ``C^k`` (for k < n): the zero-face in the path direction,
  {t_(k+1) = 0}.

The polytope glues B_k^1 to C^(k-1) for k = 1..n, leaving a chain of
cubes whose dual graph is a path and whose unglued facets form the
boundary.  Everything here is facet-level combinatorics; no geometric
coordinates are realized beyond the axis/side bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Facet:
    """One facet {t_axis = side} of a specific cube."""

    cube: int
    axis: int        # 1..n
    side: int        # 0 or 1

    def __str__(self):
        return "cube %d: {t%d = %d}" % (self.cube, self.axis, self.side)


def _opposite(f, g):
    return f.cube == g.cube and f.axis == g.axis and f.side != g.side


def _adjacent(f, g):
    return f.cube == g.cube and f.axis != g.axis


@dataclass(frozen=True)
class LabeledCube:
    """Cube k of the n-chain: simplex factor dim k, cube factor dim n-k."""

    ambient_dim: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index <= self.ambient_dim:
            raise ValueError("cube index %d outside 0..%d"
                             % (self.index, self.ambient_dim))

    @property
    def simplex_dim(self):
        return self.index

    @property
    def cube_dim(self):
        return self.ambient_dim - self.index

    def facets(self):
        n = self.ambient_dim
        return tuple(Facet(self.index, i, s)
                     for i in range(1, n + 1) for s in (0, 1))

    def facet_type(self, f):
        """Product type (simplex factor dim, cube factor dim) of a facet."""
        k = self.index
        if f.axis <= k:
            return (k - 1, self.ambient_dim - k)
        return (k, self.ambient_dim - k - 1)

    @property
    def b0(self):
        if self.index < 1:
            return None
        if self.index == 1:
            return Facet(self.index, 1, 1)
        return Facet(self.index, 1, 0)

    @property
    def b1(self):
        if self.index < 1:
            return None
        if self.index == 1:
            return Facet(self.index, 1, 0)
        return Facet(self.index, 2, 0)

    @property
    def c(self):
        if self.index >= self.ambient_dim:
            return None
        return Facet(self.index, self.index + 1, 0)

    def label_of(self, f):
        if f == self.b0:
            return "B_%d^0" % self.index
        if f == self.b1:
            return "B_%d^1" % self.index
        if f == self.c:
            return "C^%d" % self.index
        return None


@dataclass(frozen=True)
class Gluing:
    """An identification of two facets from neighboring cubes."""

    upper: Facet      # B_k^1 on cube k in the standard build
    lower: Facet      # C^(k-1) on cube k-1


@dataclass(frozen=True)
class CubicalGluing:
    """The glued chain: cubes indexed 0..n plus their facet identifications."""

    dim: int
    cubes: tuple
    gluings: tuple

    def cube(self, k):
        return self.cubes[k]

    def glued_facets(self):
        out = []
        for g in self.gluings:
            out.append(g.upper)
            out.append(g.lower)
        return out


def build_folding_polytope(n):
    """The standard chain of n+1 n-cubes with B_k^1 glued to C^(k-1)."""
    if n < 1:
        raise ValueError("folding polytope needs dimension n >= 1")
    cubes = tuple(LabeledCube(n, k) for k in range(n + 1))
    gluings = tuple(Gluing(cubes[k].b1, cubes[k - 1].c) for k in range(1, n + 1))
    return CubicalGluing(n, cubes, gluings)


def facet_census(P):
    """(number of interior facet pairs, number of boundary facets)."""
    glued = P.glued_facets()
    if len(set(glued)) != len(glued):
        raise ValueError("a facet appears in more than one gluing")
    total = 2 * P.dim * len(P.cubes)
    return (len(P.gluings), total - len(glued))


@dataclass
class StructureCheck:
    name: str
    ok: bool
    detail: str


@dataclass
class StructureReport:
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail):
        self.checks.append(StructureCheck(name, bool(ok), detail))

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __str__(self):
        return "\n".join("%-22s %s  %s" % (c.name, "ok" if c.ok else "FAIL",
                                           c.detail) for c in self.checks)


def check_structure(P):
    """Verify the chain-of-balls structure of a cubical gluing.

    Checks: glued facets share a product type and are used once; the dual
    graph is the simple path 0-1-...-n; the nerve Euler count
    (#cubes - #gluings) is 1; and the labeled-facet adjacency facts hold
    (B_1^0 opposite B_1^1, B_k^0 adjacent B_k^1 for k >= 2, C^k adjacent
    to both where all three labels exist).
    """
    rep = StructureReport()
    n = P.dim

    bad_types = []
    for g in P.gluings:
        tu = P.cube(g.upper.cube).facet_type(g.upper)
        tl = P.cube(g.lower.cube).facet_type(g.lower)
        if tu != tl:
            bad_types.append("%s type %s vs %s type %s" % (g.upper, tu, g.lower, tl))
    rep.add("gluing-product-types", not bad_types,
            "; ".join(bad_types) or "all %d gluings type-matched" % len(P.gluings))

    glued = P.glued_facets()
    rep.add("gluing-disjointness", len(set(glued)) == len(glued),
            "%d facets in gluings" % len(glued))

    edges = [(g.lower.cube, g.upper.cube) for g in P.gluings]
    degree = {k: 0 for k in range(len(P.cubes))}
    simple = True
    seen = set()
    for a, b in edges:
        if a == b or (a, b) in seen or (b, a) in seen:
            simple = False
        seen.add((a, b))
        degree[a] += 1
        degree[b] += 1
    ends = [k for k, d in degree.items() if d == 1]
    middles = [k for k, d in degree.items() if d == 2]
    path_ok = (simple and len(edges) == len(P.cubes) - 1
               and len(ends) == 2 and len(ends) + len(middles) == len(P.cubes)
               and _connected(edges, len(P.cubes)))
    order = _path_order(edges, len(P.cubes)) if path_ok else None
    rep.add("dual-graph-path", path_ok,
            "path %s" % "-".join(map(str, order)) if order else
            "edges %s do not form a simple spanning path" % sorted(edges))

    rep.add("nerve-euler", len(P.cubes) - len(P.gluings) == 1,
            "#cubes - #gluings = %d" % (len(P.cubes) - len(P.gluings)))

    adj_bad = []
    for cube in P.cubes:
        k = cube.index
        b0, b1, c = cube.b0, cube.b1, cube.c
        if b0 is not None and b1 is not None:
            if k == 1 and not _opposite(b0, b1):
                adj_bad.append("B_1^0 not opposite B_1^1")
            if k >= 2 and not _adjacent(b0, b1):
                adj_bad.append("B_%d^0 not adjacent B_%d^1" % (k, k))
        if c is not None and b0 is not None and b1 is not None:
            if not (_adjacent(c, b0) and _adjacent(c, b1)):
                adj_bad.append("C^%d not adjacent to both B_%d facets" % (k, k))
    rep.add("labeled-adjacency", not adj_bad, "; ".join(adj_bad) or "facts hold")
    return rep


def _connected(edges, ncubes):
    reach = {0}
    frontier = [0]
    adj = {k: [] for k in range(ncubes)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    while frontier:
        cur = frontier.pop()
        for nxt in adj[cur]:
            if nxt not in reach:
                reach.add(nxt)
                frontier.append(nxt)
    return len(reach) == ncubes


def _path_order(edges, ncubes):
    adj = {k: [] for k in range(ncubes)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = min(k for k in adj if len(adj[k]) == 1)
    order = [start]
    prev = None
    while len(order) < ncubes:
        nxt = [m for m in adj[order[-1]] if m != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order
