"""The filtered picture of the path algebra.

Same underlying space as the graded picture, but the product of two
paths contracts k pairs of edges at the junction for every feasible k
(a chain of cap generators applied to the concatenation).  The state t
reads off degree zero; it induces the inner product in which rescaled
paths are orthonormal.  The transforms phi (sum over all cap diagrams)
and psi (signed sum over non-nested ones) are mutually inverse
*-isomorphisms between the two pictures carrying tau to t.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph, Path, delta_max, enumerate_paths
from .gralg import GradedElement
from . import epitl


def sharp_mul(x: GradedElement, y: GradedElement) -> GradedElement:
    """The filtered product.

    For paths of lengths m and n, the degree m+n-2k component is the
    chain of k cap generators at the junction applied to the
    concatenation; endpoint mismatches vanish with the concatenation.
    """
    x._same_graph(y)
    g = x.graph
    out: dict[Path, float] = {}
    for p, a in x.terms.items():
        for q, b in y.terms.items():
            pq = p.concat(q)
            if pq is None:
                continue
            m, n = p.length, q.length
            coeff, cur = a * b, pq
            out[cur] = out.get(cur, 0.0) + coeff
            for k in range(1, min(m, n) + 1):
                hit = epitl._gen_apply(g, m - k + 1, cur)
                if hit is None:
                    break
                c, cur = hit
                coeff *= c
                out[cur] = out.get(cur, 0.0) + coeff
    return GradedElement(g, out)


def t_functional(x: GradedElement) -> float:
    """The filtered state: weight of degree zero, mu^2 per vertex."""
    return sum(c * x.graph.mu2[p.start]
               for p, c in x.terms.items() if p.length == 0)


def inner(x: GradedElement, y: GradedElement) -> float:
    """<x, y> = t(y* # x); paths are orthogonal with norm^2 mu(s)mu(f)."""
    from .gralg import star
    return t_functional(sharp_mul(star(y), x))


def braced(graph: Graph, path: Path) -> GradedElement:
    """The unit-normalized path mu(s)^{-1/2} mu(f)^{-1/2} [path]."""
    scale = (graph.mu(path.start) * graph.mu(path.finish)) ** -0.5
    return GradedElement.basis(graph, path, scale)


# ---------------------------------------------------------------------------
# the graded <-> filtered transforms


def _transform_block(graph: Graph, n: int, m: int, inverse: bool) -> np.ndarray:
    """Degree block of phi (all diagrams) or psi (signed non-nested)."""
    key = ("psiblk" if inverse else "phiblk", n, m)
    cached = graph._cache.get(key)
    if cached is not None:
        return cached
    rows = enumerate_paths(graph, None, m, None)
    cols = enumerate_paths(graph, None, n, None)
    row_index = {p: i for i, p in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)))
    sign = (-1.0) ** ((n - m) // 2) if inverse else 1.0
    for f in epitl.enumerate_hom(n, m, nonnested_only=inverse):
        for j, p in enumerate(cols):
            img = epitl.act(f, GradedElement.basis(graph, p))
            for q, c in img.terms.items():
                mat[row_index[q], j] += sign * c
    graph._cache[key] = mat
    return mat


def _apply_transform(x: GradedElement, inverse: bool) -> GradedElement:
    g = x.graph
    out = GradedElement(g)
    for n in x.degrees():
        comp = x.component(n)
        cols = enumerate_paths(g, None, n, None)
        vec = np.array([comp.coeff(p) for p in cols])
        for m in range(n % 2, n + 1, 2):
            rows = enumerate_paths(g, None, m, None)
            img = _transform_block(g, n, m, inverse) @ vec
            for i, q in enumerate(rows):
                if img[i] != 0:
                    out.terms[q] = out.terms.get(q, 0.0) + img[i]
    out._prune()
    return out


def phi(x: GradedElement) -> GradedElement:
    """Graded-to-filtered isomorphism: sum of all cap diagrams per degree."""
    return _apply_transform(x, inverse=False)


def psi(x: GradedElement) -> GradedElement:
    """Filtered-to-graded inverse: signed sum of non-nested cap diagrams."""
    return _apply_transform(x, inverse=True)


# ---------------------------------------------------------------------------
# truncated left multiplication and the norm bound


def truncated_basis(graph: Graph, max_degree: int) -> list[Path]:
    basis: list[Path] = []
    for n in range(max_degree + 1):
        basis.extend(enumerate_paths(graph, None, n, None))
    return basis


def truncated_left_mult(a: GradedElement, max_degree: int):
    """Matrix of sharp-multiplication by a on paths of degree <= max_degree.

    Expressed in the orthonormal rescaled-path basis; components pushed
    past the cap are compressed away, which can only shrink singular
    values.  Returns (matrix, basis).
    """
    g = a.graph
    basis = truncated_basis(g, max_degree)
    index = {p: i for i, p in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)))
    for j, p in enumerate(basis):
        scale_p = (g.mu(p.start) * g.mu(p.finish)) ** 0.5
        img = sharp_mul(a, GradedElement.basis(g, p))
        for q, c in img.terms.items():
            i = index.get(q)
            if i is not None:
                scale_q = (g.mu(q.start) * g.mu(q.finish)) ** 0.5
                mat[i, j] = c * scale_q / scale_p
    return mat, basis


def left_mult_norm_bound(graph: Graph, path: Path) -> float:
    """Explicit bound (2m+1) max(1, delta^(m/2)) / mu(f) for a unit path."""
    m = path.length
    d = delta_max(graph)
    return (2 * m + 1) * max(1.0, d ** (m / 2)) / graph.mu(path.finish)


def operator_norm(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 0.0
    return float(np.linalg.norm(mat, 2))
