import pytest

from graphfree import noncross as ncx
from graphfree.gralg import (GradedElement, bullet_mul, corner, corner_trace,
                             e_parity, e_vertex, star, tau, tau_pairing, unit)
from graphfree.graphs import GraphError, enumerate_paths
from graphfree.verification import random_element


def test_bullet_examples(a2):
    vw = GradedElement.basis(a2, a2.path_from_vertices(["v0", "v1"]))
    wv = GradedElement.basis(a2, a2.path_from_vertices(["v1", "v0"]))
    loop = bullet_mul(vw, wv)
    assert list(loop.terms) == [a2.path_from_vertices(["v0", "v1", "v0"])]
    assert bullet_mul(vw, vw).is_zero()
    l2 = GradedElement.basis(a2, a2.path_from_vertices(["v0", "v1", "v0"]))
    assert bullet_mul(e_vertex(a2, "v0"), l2).norm_inf_diff(l2) == 0


def test_unit_and_idempotents(a2):
    one = unit(a2)
    x = GradedElement.basis(a2, a2.path_from_vertices(["v0", "v1"]), 2.5)
    assert bullet_mul(one, x).norm_inf_diff(x) == 0
    assert bullet_mul(x, one).norm_inf_diff(x) == 0
    ev = e_vertex(a2, "v0")
    assert bullet_mul(ev, ev).norm_inf_diff(ev) == 0


def test_star_involution_and_antimultiplicativity(a3, rng):
    for _ in range(30):
        x = random_element(a3, rng)
        y = random_element(a3, rng)
        assert star(star(x)).norm_inf_diff(x) < 1e-12
        lhs = star(bullet_mul(x, y))
        rhs = bullet_mul(star(y), star(x))
        assert lhs.norm_inf_diff(rhs) < 1e-12


def test_star_scales_conjugate(a2):
    p = a2.path_from_vertices(["v0", "v1"])
    out = star(GradedElement.basis(a2, p, 2.0))
    assert out.coeff(p.reversed_in(a2)) == 2.0


def test_tau_values_a2(a2):
    l2 = GradedElement.basis(a2, a2.path_from_vertices(["v0", "v1", "v0"]))
    assert tau(l2) == pytest.approx(0.5)
    l4 = GradedElement.basis(
        a2, a2.path_from_vertices(["v0", "v1", "v0", "v1", "v0"]))
    assert tau(l4) == pytest.approx(1.0)
    assert tau(e_vertex(a2, "v1")) == pytest.approx(0.5)
    assert tau(unit(a2)) == pytest.approx(1.0)


def test_tau_odd_degree_vanishes(a3):
    for p in enumerate_paths(a3, None, 3, None):
        assert tau(GradedElement.basis(a3, p)) == 0.0


def test_tau_single_pairing_terms(a2):
    loop = a2.path_from_vertices(["v0", "v1", "v0", "v1", "v0"])
    t1 = ncx.nc(4, [(1, 2), (3, 4)])
    t2 = ncx.nc(4, [(1, 4), (2, 3)])
    assert tau_pairing(a2, t1, loop) == pytest.approx(a2.mu2[1])
    assert tau_pairing(a2, t2, loop) == pytest.approx(a2.mu2[0])


def test_tau_traciality(battery, rng):
    for g in battery.values():
        for _ in range(40):
            x, y = random_element(g, rng), random_element(g, rng)
            assert abs(tau(bullet_mul(x, y)) - tau(bullet_mul(y, x))) < 1e-9


def test_degree_cap_guard(a2):
    long_loop = a2.path_from_vertices(["v0", "v1"] * 9 + ["v0"])
    with pytest.raises(GraphError):
        tau(GradedElement.basis(a2, long_loop))


def test_corner_examples(a2):
    vw = a2.path_from_vertices(["v0", "v1"])
    loop = a2.path_from_vertices(["v0", "v1", "v0"])
    x = GradedElement.basis(a2, vw) + GradedElement.basis(a2, loop)
    got = corner(x, "v0")
    assert list(got.terms) == [loop]
    assert corner_trace(e_vertex(a2, "v0"), "v0") == pytest.approx(1.0)
    assert corner(unit(a2), "even").norm_inf_diff(e_parity(a2, 0)) == 0


def test_matrix_view_partition(a3, rng):
    x = random_element(a3, rng, max_len=3, n_terms=6)
    total = GradedElement(a3)
    for v in range(a3.n_vertices):
        for w in range(a3.n_vertices):
            piece = GradedElement(
                a3, {p: c for p, c in x.terms.items()
                     if p.start == v and p.finish == w})
            total = total + piece
    assert total.norm_inf_diff(x) == 0


def test_graph_mismatch_rejected(a2, a3):
    with pytest.raises(GraphError):
        bullet_mul(unit(a2), unit(a3))
