import pytest

from concrete_sheaves.constructions import (Diagram, as_colimit_of_representables, colimit,
                                            concretize, limit, mediating_counts_colimit,
                                            mediating_counts_limit, named_shape, plus,
                                            sheafify, small_category)
from concrete_sheaves.generators import (constants_presheaf, random_concrete_presheaf,
                                         random_presheaf, random_sheaf, rng_for)
from concrete_sheaves.presheaf import (Presheaf, check_presheaf, empty_presheaf, is_concrete,
                                       is_iso, is_sheaf, map_from_point_function, representable,
                                       terminal_presheaf)
from concrete_sheaves.quasitopos import terminal_sheaf
from concrete_sheaves.simplicial import sheaf_to_complex, point_complex


def doubled_constant(site, e):
    """E with a second plot over 2 whose underlying function is the constant at a."""
    plots = {d: list(ps) for d, ps in e.plots.items()}
    plots["2"].append("(a,a)'")
    restrict = {f: dict(t) for f, t in e.restrict.items()}
    for f, t in restrict.items():
        if site.category.cod(f) == "2":
            t["(a,a)'"] = "(a,a)'" if f in ("2>2:01", "2>2:10") else t["(a,a)"]
    return Presheaf.build(site, plots, restrict, "Ea")


def empty_diagram():
    return Diagram(small_category([], {}), {}, {})


@pytest.mark.parametrize("seed", range(10))
def test_plus_is_identity_on_F2(F2, seed):
    x = random_presheaf(F2, rng_for(seed))
    out, unit = plus(F2, x)
    assert is_iso(unit) and out.counts() == x.counts()


def test_plus_of_constants_on_F2sep(F2sep):
    x = constants_presheaf(F2sep, "pq")
    out, unit = plus(F2sep, x)
    assert out.size("2") == len(x.underlying_set) ** 2 == 4
    assert is_sheaf(F2sep, out).ok and is_concrete(out).ok


def test_plus_of_empty_presheaf(F2sep):
    out, _ = plus(F2sep, empty_presheaf(F2sep))
    assert out.counts() == {"1": 0, "2": 0}


def test_sheafify_examples(F2sep, F2, E):
    res = sheafify(F2sep, constants_presheaf(F2sep, "pq"))
    assert res.applications == 1 and res.sheaf.size("2") == 4
    s = sheafify(F2, E)
    assert is_iso(s.unit)
    for d in F2sep.category.objects:
        y = representable(F2sep, d)
        r = sheafify(F2sep, y)
        assert is_iso(r.unit) and r.sheaf.counts() == y.counts()


def test_sheafify_non_separated_takes_two_steps(F2sep, E):
    from helpers import doubled_edge

    x = doubled_edge(F2sep, E)
    res = sheafify(F2sep, x)
    assert res.applications == 2
    assert is_sheaf(F2sep, res.sheaf).ok
    assert res.sheaf.counts() == E.counts()


def test_concretize_examples(F2, E):
    x = doubled_constant(F2, E)
    assert check_presheaf(x).ok and not is_concrete(x).ok
    lx = concretize(x).presheaf
    assert lx.size("2") == x.size("2") - 1
    assert concretize(lx).presheaf.counts() == lx.counts()
    assert is_iso(concretize(E).quotient)


def test_empty_diagram_gives_terminal_and_initial(F2):
    lim = limit(F2, empty_diagram()).sheaf
    assert lim.counts() == {"1": 1, "2": 1} and lim.plots["2"] == ("()",)
    col = colimit(F2, empty_diagram()).sheaf
    assert col.counts() == {"1": 0, "2": 0}


def test_product_of_edge_with_itself(F2, E):
    res = named_shape(F2, "product", E, E)
    assert res.cross_check
    assert len(res.sheaf.underlying_set) == len(E.underlying_set) ** 2 == 4
    assert res.sheaf.size("2") == E.size("2") ** 2 == 16


def test_equalizer_of_identity_and_swap_is_empty(F2, E):
    ident = map_from_point_function(E, E, {"a": "a", "b": "b"})
    swap = map_from_point_function(E, E, {"a": "b", "b": "a"})
    res = named_shape(F2, "equalizer", ident, swap)
    assert res.sheaf.counts() == {"1": 0, "2": 0}


def test_coproduct_of_points(F2, pt):
    res = named_shape(F2, "coproduct", pt, pt)
    assert res.sheaf.size("2") == 2
    k = sheaf_to_complex(res.sheaf)
    assert len(k.vertices) == 2 and all(len(s) == 1 for s in k.simplices)


def test_coequalizer_collapses_edge(F2, E):
    ident = map_from_point_function(E, E, {"a": "a", "b": "b"})
    swap = map_from_point_function(E, E, {"a": "b", "b": "a"})
    res = named_shape(F2, "coequalizer", ident, swap)
    assert res.sheaf.counts() == {"1": 1, "2": 1}
    (v,) = res.sheaf.underlying_set
    assert sheaf_to_complex(res.sheaf) == point_complex(v)


def test_pullback_over_terminal_is_product(F2, E):
    one = terminal_sheaf(F2)
    to_one = map_from_point_function(E, one, {"a": "*", "b": "*"})
    pb = named_shape(F2, "pullback", to_one, to_one)
    prod = named_shape(F2, "product", E, E)
    assert pb.sheaf.counts() == prod.sheaf.counts()


def test_pushout_of_identities_on_a_point(F2, pt):
    ident = map_from_point_function(pt, pt, {"a": "a"})
    res = named_shape(F2, "pushout", ident, ident)
    assert res.sheaf.counts() == {"1": 1, "2": 1}


def test_pullback_of_distinct_vertices_is_empty(F2, pt, E):
    ia = map_from_point_function(pt, E, {"a": "a"})
    other = pt.with_name("pt2")
    ib = map_from_point_function(other, E, {"a": "b"})
    res = named_shape(F2, "pullback", ia, ib)
    assert res.sheaf.counts() == {"1": 0, "2": 0}


@pytest.mark.parametrize("seed", range(5))
def test_universal_properties_on_random_sheaves(F2sep, seed):
    rng = rng_for(seed)
    a, b = random_sheaf(F2sep, rng, 2, name="A"), random_sheaf(F2sep, rng, 2, name="B")
    t = random_sheaf(F2sep, rng, 2, name="T")
    prod = named_shape(F2sep, "product", a, b)
    assert set(mediating_counts_limit(prod.result, t)) <= {1}
    co = named_shape(F2sep, "coproduct", a, b)
    assert set(mediating_counts_colimit(co.result, t)) <= {1}


def test_cone_count_matches_map_count_for_products(F2, E, P2):
    # oracle: cones with apex P2 over (E, E) are pairs of maps
    from concrete_sheaves.presheaf import count_maps

    prod = named_shape(F2, "product", E, E)
    counts = mediating_counts_limit(prod.result, P2)
    assert len(counts) == count_maps(P2, E) ** 2 and set(counts) == {1}


def test_colimit_of_representables(F2, E):
    y = representable(F2, "2")
    from concrete_sheaves.presheaf import ConcreteSheaf

    res = as_colimit_of_representables(F2, ConcreteSheaf.certify(F2, y))
    assert is_iso(res.iso)
    res = as_colimit_of_representables(F2, E)
    assert len(res.diagram.shape.objects) == E.size("1") + E.size("2") == 6
    assert is_iso(res.iso)
    res = as_colimit_of_representables(F2, terminal_sheaf(F2))
    assert is_iso(res.iso)


@pytest.mark.parametrize("seed", range(5))
def test_sheafified_random_concrete_presheaves_are_concrete(F2sep, seed):
    x = random_concrete_presheaf(F2sep, rng_for(seed))
    res = sheafify(F2sep, x)
    assert res.applications == 1
    assert is_concrete(res.sheaf).ok and is_sheaf(F2sep, res.sheaf).ok


def test_terminal_presheaf_is_limit_of_nothing(F2):
    assert limit(F2, empty_diagram()).sheaf.counts() == terminal_presheaf(F2).counts()
