"""Cut polytopes of graphs and the compressed-cut-polytope classifier.

Cut vectors are 0/1 edge indicators of vertex bipartitions; their hull is the
cut polytope.  For graphs with no K5 minor the polytope is cut out by box
inequalities together with one inequality per (induced cycle, odd edge
subset), and whether the polytope is compressed reduces to two combinatorial
graph conditions: no K5 minor and no induced cycle longer than four.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .linalg import matrix_rank, standard_lattice, vsub
from .polytope import FacetIneq, LatticePolytope

DEFAULT_CUT_VERTEX_CAP = 7

_MINOR_ORDER = {"K4": 4, "K5": 5}


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n with lexicographic edge order."""

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError("loops are not allowed")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {e} leaves the vertex range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"multi-edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    def adjacency(self):
        adj = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def edge_index(self):
        return {e: k for k, e in enumerate(self.edges)}


def complete_graph(n):
    return Graph(n, tuple(combinations(range(1, n + 1), 2)))

def cycle_graph(n):
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return Graph(n, tuple(edges))

def path_graph(n):
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


@dataclass(frozen=True)
class CutVector:
    """The 0/1 edge vector of a vertex subset: 1 on edges leaving the subset."""

    subset: frozenset
    coords: tuple


def cut_semimetric(graph, subset):
    s = frozenset(subset)
    for v in s:
        if not 1 <= v <= graph.n:
            raise ValueError(f"vertex {v} outside 1..{graph.n}")
    coords = tuple(1 if (i in s) != (j in s) else 0 for i, j in graph.edges)
    return CutVector(subset=s, coords=coords)


def cut_vectors(graph):
    """All distinct cut vectors, lex sorted (S and its complement coincide)."""
    seen = {}
    for mask in range(2 ** graph.n):
        s = frozenset(v for v in range(1, graph.n + 1) if mask >> (v - 1) & 1)
        cv = cut_semimetric(graph, s)
        if cv.coords not in seen:
            seen[cv.coords] = cv
    return [seen[c] for c in sorted(seen)]


def cut_polytope(graph, cap=DEFAULT_CUT_VERTEX_CAP):
    """Convex hull of the cut vectors, in the ambient edge lattice Z^E."""
    if graph.n > cap:
        raise ValueError(f"{graph.n} vertices exceed the cut enumeration cap {cap}")
    pts = [cv.coords for cv in cut_vectors(graph)]
    return LatticePolytope(pts, lattice=standard_lattice(len(graph.edges)))


def has_minor(graph, minor):
    """Whether the graph contains the given complete graph as a minor.

    Exhaustive branch-set search: every vertex is assigned to one of k
    candidate branch sets or left unused; an assignment witnesses the minor
    when each set is nonempty and connected and all pairs of sets are joined
    by an edge.  Sets open in vertex order, which kills the labeling symmetry.
    """
    k = _MINOR_ORDER[minor] if isinstance(minor, str) else int(minor)
    n = graph.n
    if n < k or len(graph.edges) < k * (k - 1) // 2:
        return False
    adj = graph.adjacency()
    assignment = {}

    def connected(group):
        stack = [next(iter(group))]
        seen = {stack[0]}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in group and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(group)

    def complete_assignment():
        groups = [[] for _ in range(k)]
        for v, g in assignment.items():
            groups[g].append(v)
        if any(not grp for grp in groups):
            return False
        for grp in groups:
            if not connected(grp):
                return False
        for a, b in combinations(range(k), 2):
            if not any(w in adj[v] for v in groups[a] for w in groups[b]):
                return False
        return True

    def place(v, opened):
        if k - opened > n - v + 1:
            return False
        if v > n:
            return opened == k and complete_assignment()
        limit = min(opened + 1, k)
        for g in range(limit):
            assignment[v] = g
            if place(v + 1, max(opened, g + 1)):
                return True
            del assignment[v]
        return place(v + 1, opened)

    return place(1, 0)


def chordless_cycles(graph):
    """All induced cycles, each as a vertex tuple starting at its minimum.

    DFS over chordless paths: a path may only be extended by a vertex whose
    single adjacency into the path is its endpoint, and it closes the moment
    the start vertex becomes adjacent.
    """
    adj = graph.adjacency()
    found = {}

    def extend(path, members):
        a = path[0]
        last = path[-1]
        internal = path[1:-1]
        for w in sorted(adj[last]):
            if w == a or w < a or w in members:
                continue
            if any(w in adj[u] for u in internal):
                continue
            if a in adj[w]:
                if len(path) >= 2:
                    cycle = path + (w,)
                    key = frozenset(
                        (min(x, y), max(x, y))
                        for x, y in zip(cycle, cycle[1:] + cycle[:1])
                    )
                    found.setdefault(key, cycle)
            else:
                extend(path + (w,), members | {w})

    for a, b in graph.edges:
        extend((a, b), {a, b})
    return sorted(found.values(), key=lambda c: (len(c), c))


def max_induced_cycle(graph):
    """Length of the longest induced cycle, or 0 for a forest."""
    cycles = chordless_cycles(graph)
    return max((len(c) for c in cycles), default=0)


def cut_compressed(graph):
    """Graph-level criterion for the cut polytope being compressed."""
    return not has_minor(graph, "K5") and max_induced_cycle(graph) <= 4


def cycle_inequality(graph, cycle_edges, odd_subset):
    """Ambient form of sum_F x - sum_{C-F} x <= |F| - 1 as (normal, offset >=)."""
    index = graph.edge_index()
    normal = [0] * len(graph.edges)
    for e in cycle_edges:
        normal[index[e]] = 1 if e in odd_subset else -1
    # rewrite lhs <= |F|-1 as (-lhs) >= 1-|F|
    return tuple(-x for x in normal), 1 - len(odd_subset)


def k5free_facets(graph):
    """Complete facet list of the cut polytope of a K5-minor-free graph.

    Box inequalities 0 <= x_e <= 1 plus one inequality per induced cycle and
    odd subset of its edges; everything is filtered down to the inequalities
    that are actually facet defining on the cut vectors, so the result is
    irredundant and comparable to a generic facet enumeration.
    """
    if has_minor(graph, "K5"):
        raise ValueError("the facet description requires a K5-minor-free graph")
    m = len(graph.edges)
    pts = [cv.coords for cv in cut_vectors(graph)]
    dim = matrix_rank([vsub(p, pts[0]) for p in pts[1:]])

    candidates = []
    for k in range(m):
        lo = [0] * m
        lo[k] = 1
        candidates.append((tuple(lo), 0))
        hi = [0] * m
        hi[k] = -1
        candidates.append((tuple(hi), -1))
    for cycle in chordless_cycles(graph):
        edges = [
            (min(x, y), max(x, y)) for x, y in zip(cycle, cycle[1:] + cycle[:1])
        ]
        for r in range(1, len(edges) + 1, 2):
            for odd in combinations(edges, r):
                candidates.append(cycle_inequality(graph, edges, set(odd)))

    facets = []
    seen = set()
    for normal, offset in candidates:
        if (normal, offset) in seen:
            continue
        seen.add((normal, offset))
        slacks = [sum(a * x for a, x in zip(normal, p)) - offset for p in pts]
        if any(s < 0 for s in slacks):
            continue
        tight = [i for i, s in enumerate(slacks) if s == 0]
        if not tight:
            continue
        base = pts[tight[0]]
        if matrix_rank([vsub(pts[i], base) for i in tight[1:]]) == dim - 1:
            facets.append(
                FacetIneq(
                    normal=normal,
                    offset=offset,
                    lattice_normal=normal,
                    lattice_offset=offset,
                    tight=frozenset(tight),
                )
            )
    facets.sort(key=lambda f: (f.normal, f.offset))
    return facets


@dataclass(frozen=True)
class CycleLevelReport:
    """Observed positive slack levels of one cycle inequality over all cuts."""

    cycle_length: int
    odd_subset: tuple
    levels: tuple
    stated_count: int  # floor(c/2) - 1
    matches_stated_count: bool


def cycle_facet_levels(cycle_length, odd_subset):
    """Distinct positive slacks of a cycle inequality over all cuts of the cycle.

    For even cycles the count is floor(c/2) - 1; direct enumeration shows odd
    cycles of length >= 5 attain ceil(c/2) - 1 values, and the report flags
    the mismatch rather than hiding it.
    """
    c = cycle_length
    graph = cycle_graph(c)
    odd = {(min(i, j), max(i, j)) for i, j in odd_subset}
    cycle_edges = set(graph.edges)
    if not odd <= cycle_edges:
        raise ValueError("odd subset must consist of edges of the cycle")
    if len(odd) % 2 != 1:
        raise ValueError("the edge subset must have odd size")
    normal, offset = cycle_inequality(graph, graph.edges, odd)
    levels = set()
    for cv in cut_vectors(graph):
        s = sum(a * x for a, x in zip(normal, cv.coords)) - offset
        if s > 0:
            levels.add(s)
    stated = c // 2 - 1
    return CycleLevelReport(
        cycle_length=c,
        odd_subset=tuple(sorted(odd)),
        levels=tuple(sorted(levels)),
        stated_count=stated,
        matches_stated_count=len(levels) == stated,
    )


def edge_contract(graph, edge):
    """Contract an edge: merge its endpoints, drop loops and parallel edges."""
    i, j = min(edge), max(edge)
    if (i, j) not in graph.edges:
        raise ValueError(f"{edge} is not an edge")

    def relabel(v):
        if v == j:
            v = i
        return v - 1 if v > j else v

    new_edges = set()
    for a, b in graph.edges:
        x, y = relabel(a), relabel(b)
        if x != y:
            new_edges.add((min(x, y), max(x, y)))
    return Graph(graph.n - 1, tuple(sorted(new_edges)))


def induced_subgraph(graph, vertices):
    """Subgraph induced on the given vertices, relabeled to 1..|W| in order."""
    keep = sorted(set(vertices))
    if any(not 1 <= v <= graph.n for v in keep):
        raise ValueError("vertices outside range")
    relabel = {v: k + 1 for k, v in enumerate(keep)}
    new_edges = [
        (relabel[a], relabel[b]) for a, b in graph.edges if a in relabel and b in relabel
    ]
    return Graph(len(keep), tuple(new_edges))
