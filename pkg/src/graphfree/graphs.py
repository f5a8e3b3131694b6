"""Finite weighted bipartite multigraphs and their path spaces.

A graph here is a finite vertex set split into even and odd vertices,
a set of directed edges closed under a fixed-point-free reversal
involution (each undirected edge contributes a reversal pair), and a
positive vertex weighting ``mu2`` with total mass 1.  Paths alternate
parities; the length-n paths form the basis of the degree-n piece of
the path algebras built on top of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EVEN = 0
ODD = 1

DEFAULT_TOL = 1e-9

# Power iteration settings for the Perron-Frobenius weighting.
PF_CONVERGENCE = 1e-12
PF_MAX_ITER = 10 ** 5


class GraphError(ValueError):
    """Malformed graph data or an invalid graph query."""


def _parity_code(p) -> int:
    if p in (EVEN, ODD):
        return p
    if isinstance(p, str):
        s = p.strip().lower()
        if s == "even":
            return EVEN
        if s == "odd":
            return ODD
    raise GraphError(f"unknown parity {p!r}")


@dataclass(frozen=True)
class Path:
    """A path: vertex indices v_0..v_n and the edge ids joining them.

    ``vertices`` always has one more entry than ``edges``; a length-0
    path is a bare vertex.  Instances are plain data and hashable; the
    operations that need weights or reversals take the graph as an
    argument.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise GraphError("path vertex/edge count mismatch")

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def finish(self) -> int:
        return self.vertices[-1]

    def reversed_in(self, graph: "Graph") -> "Path":
        return Path(tuple(reversed(self.vertices)),
                    tuple(graph.erev[e] for e in reversed(self.edges)))

    def concat(self, other: "Path") -> "Path | None":
        """Concatenation, or None when finish and start do not match."""
        if self.finish != other.start:
            return None
        return Path(self.vertices + other.vertices[1:], self.edges + other.edges)

    def segment(self, i: int, j: int) -> "Path":
        """Subpath between vertex indices i and j (inclusive)."""
        if not 0 <= i <= j <= self.length:
            raise GraphError(f"bad segment [{i},{j}] of length-{self.length} path")
        return Path(self.vertices[i:j + 1], self.edges[i:j])

    def drop_edge_pair(self, i: int) -> "Path":
        """Remove edges i and i+1 (1-based); valid when v_{i-1} = v_{i+1}."""
        return Path(self.vertices[:i] + self.vertices[i + 2:],
                    self.edges[:i - 1] + self.edges[i + 1:])


def vertex_path(v: int) -> Path:
    return Path((v,), ())


class Graph:
    """Finite weighted bipartite multigraph with edge-reversal involution.

    Immutable after construction.  Directed edges are stored as parallel
    tuples ``estart``/``efinish``/``erev``; undirected input edges are
    canonicalized into reversal pairs with the even-to-odd direction
    first, so edge ids (and hence path enumeration order) are stable.
    """

    __slots__ = ("ids", "parity", "mu2", "star",
                 "estart", "efinish", "erev",
                 "_index", "_out", "_cache")

    def __init__(self, ids, parity, mu2, estart, efinish, erev,
                 star=None, tol: float = DEFAULT_TOL):
        self.ids = tuple(ids)
        self.parity = tuple(parity)
        self.mu2 = tuple(float(x) for x in mu2)
        self.estart = tuple(estart)
        self.efinish = tuple(efinish)
        self.erev = tuple(erev)
        self.star = star
        self._index = {vid: i for i, vid in enumerate(self.ids)}
        self._cache = {}
        self._validate(tol)
        out = [[] for _ in self.ids]
        for e, u in enumerate(self.estart):
            out[u].append(e)
        self._out = tuple(tuple(es) for es in out)

    # -- validation -----------------------------------------------------

    def _validate(self, tol):
        if len(self._index) != len(self.ids):
            raise GraphError("duplicate vertex id")
        if len(self.parity) != len(self.ids) or len(self.mu2) != len(self.ids):
            raise GraphError("vertex data length mismatch")
        for p in self.parity:
            if p not in (EVEN, ODD):
                raise GraphError("parity must be even or odd")
        for w in self.mu2:
            if not w > 0:
                raise GraphError("vertex weights must be positive")
        if abs(sum(self.mu2) - 1.0) > tol:
            raise GraphError(f"vertex weights must sum to 1, got {sum(self.mu2)}")
        ne = len(self.estart)
        if len(self.efinish) != ne or len(self.erev) != ne:
            raise GraphError("edge data length mismatch")
        for e in range(ne):
            u, x = self.estart[e], self.efinish[e]
            if self.parity[u] == self.parity[x]:
                raise GraphError(
                    f"edge {self.ids[u]}--{self.ids[x]} joins vertices of equal parity")
            r = self.erev[e]
            if r == e:
                raise GraphError("reversal involution has a fixed point")
            if self.erev[r] != e:
                raise GraphError("reversal is not an involution")
            if self.estart[r] != x or self.efinish[r] != u:
                raise GraphError("reversal does not exchange start and finish")
        if self.star is not None:
            if not 0 <= self.star < len(self.ids):
                raise GraphError("star vertex out of range")
            if self.parity[self.star] != EVEN:
                raise GraphError("star vertex must be even")

    # -- basic queries ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.ids)

    @property
    def n_directed_edges(self) -> int:
        return len(self.estart)

    @property
    def n_edges(self) -> int:
        """Number of undirected edges (reversal pairs)."""
        return len(self.estart) // 2

    def index(self, v) -> int:
        """Vertex index from id (ints pass through)."""
        if isinstance(v, int) and not isinstance(v, bool):
            if 0 <= v < len(self.ids):
                return v
            raise GraphError(f"vertex index {v} out of range")
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def mu(self, v: int) -> float:
        return math.sqrt(self.mu2[v])

    def out_edges(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def vertices_of_parity(self, parity: int) -> tuple[int, ...]:
        return tuple(v for v in range(len(self.ids)) if self.parity[v] == parity)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((len(self.ids), len(self.ids)))
        for e in range(len(self.estart)):
            a[self.estart[e], self.efinish[e]] += 1.0
        return a

    def path(self, start, edge_ids=()) -> Path:
        """Build and check a path from a start vertex and edge ids."""
        v = self.index(start)
        verts = [v]
        for e in edge_ids:
            if not 0 <= e < len(self.estart):
                raise GraphError(f"unknown edge id {e}")
            if self.estart[e] != verts[-1]:
                raise GraphError("edges do not compose")
            verts.append(self.efinish[e])
        return Path(tuple(verts), tuple(edge_ids))

    def path_from_vertices(self, names) -> Path:
        """Path through the given vertex ids; edges must be unambiguous."""
        idx = [self.index(x) for x in names]
        edges = []
        for u, x in zip(idx, idx[1:]):
            cands = [e for e in self._out[u] if self.efinish[e] == x]
            if not cands:
                raise GraphError(f"no edge {self.ids[u]} -> {self.ids[x]}")
            if len(cands) > 1:
                raise GraphError(
                    f"multiple edges {self.ids[u]} -> {self.ids[x]}; give edge ids")
            edges.append(cands[0])
        return Path(tuple(idx), tuple(edges))

    def with_mu2(self, mu2, tol: float = DEFAULT_TOL) -> "Graph":
        return Graph(self.ids, self.parity, mu2,
                     self.estart, self.efinish, self.erev, self.star, tol)

    def __repr__(self):
        return (f"Graph({len(self.ids)} vertices, {self.n_edges} edges"
                + (f", star={self.ids[self.star]}" if self.star is not None else "")
                + ")")


# ---------------------------------------------------------------------------
# construction


def build_graph(vertices, edges, star=None, tol: float = DEFAULT_TOL) -> Graph:
    """Build a graph from an undirected edge list.

    vertices: iterable of (id, parity) or (id, parity, weight2) or dicts
        with keys id/parity/weight2.
    edges: iterable of (u, v, multiplicity) or dicts with keys u/v/mult.

    If any weight is supplied all weights must be; they are normalized
    to total mass 1.  Without weights a uniform placeholder weighting is
    installed (use :func:`pf_weighting` for the Perron-Frobenius one).
    """
    ids, parity, weights = [], [], []
    for spec in vertices:
        if isinstance(spec, dict):
            vid, p, w2 = spec["id"], spec["parity"], spec.get("weight2")
        else:
            vid, p = spec[0], spec[1]
            w2 = spec[2] if len(spec) > 2 else None
        ids.append(vid)
        parity.append(_parity_code(p))
        weights.append(w2)
    given = [w is not None for w in weights]
    if any(given) and not all(given):
        raise GraphError("either all vertex weights or none must be given")
    if all(given) and weights:
        for w in weights:
            if not w > 0:
                raise GraphError("vertex weights must be positive")
        total = sum(weights)
        mu2 = [w / total for w in weights]
    else:
        n = max(len(ids), 1)
        mu2 = [1.0 / n] * len(ids)

    index = {}
    for i, vid in enumerate(ids):
        if vid in index:
            raise GraphError(f"duplicate vertex id {vid!r}")
        index[vid] = i

    estart, efinish, erev = [], [], []
    for spec in edges:
        if isinstance(spec, dict):
            u, v, mult = spec["u"], spec["v"], spec.get("mult", 1)
        else:
            u, v = spec[0], spec[1]
            mult = spec[2] if len(spec) > 2 else 1
        if mult < 1:
            raise GraphError("edge multiplicity must be >= 1")
        iu, iv = index.get(u), index.get(v)
        if iu is None or iv is None:
            raise GraphError(f"edge endpoint {u!r} or {v!r} unknown")
        if parity[iu] == parity[iv]:
            raise GraphError(f"edge {u!r}--{v!r} violates bipartiteness")
        if parity[iu] == ODD:
            iu, iv = iv, iu  # even endpoint first
        for _ in range(int(mult)):
            f = len(estart)
            estart.extend([iu, iv])
            efinish.extend([iv, iu])
            erev.extend([f + 1, f])

    star_idx = index[star] if star is not None else None
    return Graph(ids, parity, mu2, estart, efinish, erev, star_idx, tol)


_SPEC_VERTEX_FIELDS = {"id", "parity", "weight2"}
_SPEC_EDGE_FIELDS = {"u", "v", "mult"}


def graph_from_spec(record: dict, tol: float = DEFAULT_TOL):
    """Parse the external graph-spec record.

    The record has exactly the fields ``vertices: [{id, parity, weight2?}]``
    and ``edges: [{u, v, mult}]``.  Unknown fields are rejected.  Returns
    ``(graph, pf_requested)``; the weighting is the Perron-Frobenius one
    when ``weight2`` is absent.
    """
    if not isinstance(record, dict):
        raise GraphError("graph spec must be a mapping")
    extra = set(record) - {"vertices", "edges"}
    if extra:
        raise GraphError(f"unknown fields in graph spec: {sorted(extra)}")
    if "vertices" not in record or "edges" not in record:
        raise GraphError("graph spec needs 'vertices' and 'edges'")
    vs = record["vertices"]
    es = record["edges"]
    if not isinstance(vs, list) or not isinstance(es, list):
        raise GraphError("'vertices' and 'edges' must be lists")
    for v in vs:
        if not isinstance(v, dict):
            raise GraphError("vertex entries must be mappings")
        extra = set(v) - _SPEC_VERTEX_FIELDS
        if extra:
            raise GraphError(f"unknown vertex fields: {sorted(extra)}")
        if "id" not in v or "parity" not in v:
            raise GraphError("vertex entries need 'id' and 'parity'")
    for e in es:
        if not isinstance(e, dict):
            raise GraphError("edge entries must be mappings")
        extra = set(e) - _SPEC_EDGE_FIELDS
        if extra:
            raise GraphError(f"unknown edge fields: {sorted(extra)}")
        if "u" not in e or "v" not in e:
            raise GraphError("edge entries need 'u' and 'v'")
    weighted = [v for v in vs if v.get("weight2") is not None]
    if weighted and len(weighted) != len(vs):
        raise GraphError("either every vertex or none carries weight2")
    pf_requested = not weighted
    graph = build_graph(vs, es, tol=tol)
    if pf_requested and vs:
        graph, _ = pf_weighting(graph)
    return graph, pf_requested


# ---------------------------------------------------------------------------
# weightings and local data


def connected_components(graph: Graph) -> list[list[int]]:
    seen = [False] * graph.n_vertices
    comps = []
    for v0 in range(graph.n_vertices):
        if seen[v0]:
            continue
        comp, stack = [], [v0]
        seen[v0] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for e in graph.out_edges(u):
                x = graph.efinish[e]
                if not seen[x]:
                    seen[x] = True
                    stack.append(x)
        comps.append(sorted(comp))
    return comps


def is_connected(graph: Graph) -> bool:
    return len(connected_components(graph)) <= 1


def pf_weighting(graph: Graph,
                 convergence: float = PF_CONVERGENCE,
                 max_iter: int = PF_MAX_ITER):
    """Perron-Frobenius weighting: mu2 is the positive eigenvector of the
    adjacency matrix (with multiplicities), normalized to total mass 1.

    Returns (reweighted graph, PF eigenvalue).  Power iteration runs on
    A + I so the bipartite +/- eigenvalue pair cannot make it oscillate;
    convergence is tested on the Rayleigh quotient of A.
    """
    if graph.n_vertices == 0:
        raise GraphError("empty graph")
    if not is_connected(graph):
        raise GraphError("PF weighting needs a connected graph")
    a = graph.adjacency()
    m = a + np.eye(graph.n_vertices)
    x = np.ones(graph.n_vertices) / graph.n_vertices
    rayleigh = float(x @ a @ x) / float(x @ x)
    for _ in range(max_iter):
        x = m @ x
        x /= np.linalg.norm(x)
        new = float(x @ a @ x)
        # Rayleigh settles quadratically; also demand a small eigen-residual
        # so the vector itself is converged, not just the quotient.
        residual = float(np.max(np.abs(a @ x - new * x))) / float(np.min(np.abs(x)))
        if abs(new - rayleigh) <= convergence and residual <= convergence:
            rayleigh = new
            break
        rayleigh = new
    else:
        raise GraphError("PF power iteration did not converge")
    if graph.n_edges > 0 and rayleigh <= 0:
        raise GraphError("PF eigenvalue not positive")
    mu2 = np.abs(x) / np.abs(x).sum()
    return graph.with_mu2(mu2.tolist()), rayleigh


def delta_v(graph: Graph, v) -> float:
    """Local index delta(v) = sum over edges v->w of (mu(w)/mu(v))^2.

    Under the PF weighting this equals the PF eigenvalue at every vertex.
    """
    i = graph.index(v)
    return sum(graph.mu2[graph.efinish[e]] for e in graph.out_edges(i)) / graph.mu2[i]


def delta_max(graph: Graph) -> float:
    return max(delta_v(graph, v) for v in range(graph.n_vertices))


# ---------------------------------------------------------------------------
# path enumeration


def enumerate_paths(graph: Graph, start=None, length: int = 0, finish=None) -> list[Path]:
    """All paths of the given length, optionally with fixed endpoints.

    Exhaustive, duplicate-free and deterministic: starts ascend by vertex
    index and edges are explored in edge-id order.
    """
    if length < 0:
        raise GraphError("path length must be >= 0")
    s = None if start is None else graph.index(start)
    f = None if finish is None else graph.index(finish)
    key = ("paths", s, length, f)
    cached = graph._cache.get(key)
    if cached is not None:
        return cached

    starts = [s] if s is not None else list(range(graph.n_vertices))
    out: list[Path] = []

    def extend(verts, edges):
        if len(edges) == length:
            if f is None or verts[-1] == f:
                out.append(Path(tuple(verts), tuple(edges)))
            return
        for e in graph.out_edges(verts[-1]):
            verts.append(graph.efinish[e])
            edges.append(e)
            extend(verts, edges)
            verts.pop()
            edges.pop()

    for v0 in starts:
        extend([v0], [])
    graph._cache[key] = out
    return out


def count_paths(graph: Graph, start, length: int, finish) -> int:
    return len(enumerate_paths(graph, start, length, finish))


# ---------------------------------------------------------------------------
# derived subgraphs


def _induced(graph: Graph, keep: list[int], star=None, tol: float = DEFAULT_TOL):
    keep_set = set(keep)
    old_to_new = {v: i for i, v in enumerate(keep)}
    gamma = sum(graph.mu2[v] for v in keep)
    mu2 = [graph.mu2[v] / gamma for v in keep]
    estart, efinish, erev = [], [], []
    old_edges = [e for e in range(graph.n_directed_edges)
                 if graph.estart[e] in keep_set and graph.efinish[e] in keep_set]
    emap = {e: i for i, e in enumerate(old_edges)}
    for e in old_edges:
        estart.append(old_to_new[graph.estart[e]])
        efinish.append(old_to_new[graph.efinish[e]])
        erev.append(emap[graph.erev[e]])
    new_star = old_to_new.get(star) if star is not None else None
    sub = Graph([graph.ids[v] for v in keep], [graph.parity[v] for v in keep],
                mu2, estart, efinish, erev, new_star, tol)
    return sub, gamma


def subgraph_star(graph: Graph, w) -> tuple[Graph, float]:
    """Induced subgraph on the opposite-parity vertices plus w.

    The weighting is the renormalized restriction; the renormalization
    constant gamma (mass kept) is returned alongside.
    """
    i = graph.index(w)
    other = 1 - graph.parity[i]
    keep = sorted(set(graph.vertices_of_parity(other)) | {i})
    return _induced(graph, keep)


def connected_component(graph: Graph, v) -> tuple[Graph, float]:
    """Connected component of v with renormalized weights, plus gamma."""
    i = graph.index(v)
    for comp in connected_components(graph):
        if i in comp:
            star = graph.star if graph.star in comp else None
            return _induced(graph, comp, star=star)
    raise GraphError(f"unknown vertex {v!r}")


# ---------------------------------------------------------------------------
# stock graphs used throughout the examples and tests


def line_graph(n_vertices: int, pf: bool = True, star_first: bool = False) -> Graph:
    """The A_n graph: a path on n vertices, alternating parity from even."""
    ids = [f"v{i}" for i in range(n_vertices)]
    vertices = [(ids[i], EVEN if i % 2 == 0 else ODD) for i in range(n_vertices)]
    edges = [(ids[i], ids[i + 1], 1) for i in range(n_vertices - 1)]
    g = build_graph(vertices, edges, star=ids[0] if star_first else None)
    if pf:
        g, _ = pf_weighting(g)
    return g


def star_graph(n_leaves: int, center_parity=ODD, pf: bool = True) -> Graph:
    """K(1, n): a center joined to n leaves by single edges."""
    cp = _parity_code(center_parity)
    vertices = [("c", cp)] + [(f"l{i}", 1 - cp) for i in range(n_leaves)]
    edges = [("c", f"l{i}", 1) for i in range(n_leaves)]
    g = build_graph(vertices, edges)
    if pf:
        g, _ = pf_weighting(g)
    return g


def two_vertex_graph(q: int, alpha: float | None = None,
                     beta: float | None = None) -> Graph:
    """One even and one odd vertex joined by q parallel edges.

    With alpha/beta omitted the PF weighting (1/2, 1/2) is used.
    """
    if alpha is None or beta is None:
        alpha = beta = 0.5
    return build_graph([("v", EVEN, alpha), ("w", ODD, beta)], [("v", "w", q)])


def named_graph(name: str) -> Graph:
    """Small stock graphs by name (PF-weighted where applicable)."""
    name = name.lower()
    if name == "a2":
        return line_graph(2)
    if name == "a3":
        return line_graph(3)
    if name == "a4":
        return line_graph(4)
    if name in ("k1_2", "k12"):
        return star_graph(2)
    if name in ("k1_3", "k13"):
        return star_graph(3)
    if name in ("k1_4", "k14"):
        return star_graph(4)
    if name in ("dbl", "omega2"):
        return two_vertex_graph(2)
    if name == "fork":
        # two odd vertices sharing an even neighbor, plus one more even leaf
        return build_graph(
            [("w1", ODD), ("v", EVEN), ("w2", ODD), ("v2", EVEN)],
            [("v", "w1", 1), ("v", "w2", 1), ("v2", "w1", 1)])
    raise GraphError(f"unknown named graph {name!r}")
