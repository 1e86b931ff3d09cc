import pytest

from concrete_sheaves.constructions import named_shape
from concrete_sheaves.errors import NotMono, NotStrongMono
from concrete_sheaves.generators import random_sheaf, random_triple, rng_for
from concrete_sheaves.presheaf import (compose_maps, count_maps, enumerate_maps, identity_map,
                                       is_iso, is_sheaf, map_from_point_function)
from concrete_sheaves.quasitopos import (SpaceOverBase, characteristic_map, curry,
                                         exponential_over_base, fiber, fiber_product,
                                         is_strong_epi, is_strong_mono, map_over_base, omega,
                                         over_terminal, quotient_structure, subspace_structure,
                                         uncurry)
from concrete_sheaves.simplicial import sheaf_to_complex, point_complex


def test_omega_counts(F2, F2sep, F3):
    assert omega(F2).sheaf.counts() == {"1": 2, "2": 4}
    # oracle: 2 ** |u(D)| with |u(m)| = m
    assert omega(F3).sheaf.counts() == {str(m): 2 ** m for m in (1, 2, 3)}
    for site in (F2, F3):
        assert len(omega(site).sheaf.underlying_set) == 2
    assert is_sheaf(F2sep, omega(F2sep).sheaf).ok


def test_subspace_examples(F2, E):
    whole = subspace_structure(F2, E, ["a", "b"])
    assert is_iso(whole.inclusion)
    assert subspace_structure(F2, E, []).sheaf.counts() == {"1": 0, "2": 0}
    a = subspace_structure(F2, E, ["a"])
    assert a.sheaf.size("2") == 1 and sheaf_to_complex(a.sheaf) == point_complex("a")


def test_quotient_examples(F2, E, T2):
    same = quotient_structure(F2, E, [])
    assert is_iso(same.projection)
    collapsed = quotient_structure(F2, E, [["a", "b"]])
    assert collapsed.sheaf.counts() == {"1": 1, "2": 1}
    ident = identity_map(E)
    swap = map_from_point_function(E, E, {"a": "b", "b": "a"})
    coeq = named_shape(F2, "coequalizer", ident, swap)
    assert coeq.sheaf.counts() == collapsed.sheaf.counts()
    total = quotient_structure(F2, T2, [list(T2.underlying_set)])
    # one point; every point-function into it is a plot
    assert total.sheaf.counts() == {"1": 1, "2": 1}


def test_strong_mono_examples(F2, E, P2):
    sub = subspace_structure(F2, E, ["b"])
    assert is_strong_mono(F2, sub.inclusion).ok
    assert is_strong_mono(F2, identity_map(E)).ok
    comp = map_from_point_function(P2, E, {"a": "a", "b": "b"})
    v = is_strong_mono(F2, comp)
    assert not v.ok and v.code == "no-lift"
    d, plot = v.witness
    assert d == "2" and plot in ("(a,b)", "(b,a)")
    # the witness really is a plot of E not hit by P2
    assert plot in E.plots["2"] and plot not in comp.components["2"].values()


def test_strong_epi_examples(F2, E, P2):
    q = quotient_structure(F2, E, [["a", "b"]])
    assert is_strong_epi(F2, q.projection).ok
    assert is_strong_epi(F2, identity_map(E)).ok
    comp = map_from_point_function(P2, E, {"a": "a", "b": "b"})
    v = is_strong_epi(F2, comp)
    assert not v.ok and v.code == "no-local-lift" and v.witness[0] == "2"


def test_strong_mono_needs_a_mono(F2, E, pt):
    const = map_from_point_function(E, pt, {"a": "a", "b": "a"})
    with pytest.raises(NotMono):
        is_strong_mono(F2, const)


def test_characteristic_map_examples(F2, E, P2):
    om = omega(F2)
    top = characteristic_map(F2, identity_map(E), om)
    assert set(top.chi.point_function.values()) == {om.true_point}
    bottom = characteristic_map(F2, subspace_structure(F2, E, []).inclusion, om)
    assert set(bottom.chi.point_function.values()) == {om.false_point}
    a = characteristic_map(F2, subspace_structure(F2, E, ["a"]).inclusion, om)
    assert a.chi.point_function == {"a": om.true_point, "b": om.false_point}
    assert a.qualifying_count == 1


def test_characteristic_map_rejects_plain_monos(F2, E, P2):
    comp = map_from_point_function(P2, E, {"a": "a", "b": "b"})
    with pytest.raises(NotStrongMono):
        characteristic_map(F2, comp)


def test_fiber_examples(F2, E, P2, T2):
    space = over_terminal(F2, E)
    (b,) = space.base.underlying_set
    assert fiber(F2, space, b).sheaf.counts() == E.counts()
    ident = SpaceOverBase(T2, T2, identity_map(T2))
    for p in T2.underlying_set:
        assert fiber(F2, ident, p).sheaf.underlying_set == (p,)
    # the vertex identity E -> P2 is not a map (the edge has nowhere to go), so the
    # edge-free space is fibred over E instead
    assert map_from_point_function(E, P2, {"a": "a", "b": "b"}) is None
    bundle = SpaceOverBase(P2, E, map_from_point_function(P2, E, {"a": "a", "b": "b"}))
    for v in "ab":
        assert sheaf_to_complex(fiber(F2, bundle, v).sheaf) == point_complex(v)


def test_exponential_over_terminal(F2, E, pt):
    one = exponential_over_base(F2, over_terminal(F2, pt), over_terminal(F2, pt))
    assert one.space.total.counts() == {"1": 1, "2": 1}
    ee = exponential_over_base(F2, over_terminal(F2, E), over_terminal(F2, E))
    assert len(ee.space.total.underlying_set) == count_maps(E, E) == 4


@pytest.mark.parametrize("seed", range(6))
def test_exponential_points_are_maps(F2sep, seed):
    rng = rng_for(seed)
    x = random_sheaf(F2sep, rng, 2, name="X")
    y = random_sheaf(F2sep, rng, 3, name="Y")
    exp = exponential_over_base(F2sep, over_terminal(F2sep, x), over_terminal(F2sep, y))
    assert len(exp.space.total.underlying_set) == count_maps(x, y)


def test_curry_bijection_on_edge(F2, E):
    e = over_terminal(F2, E)
    exp = exponential_over_base(F2, e, e)
    zx = fiber_product(F2, e, e)
    maps = enumerate_maps(zx.sheaf, E)
    assert len(maps) == 16 == count_maps(E, exp.space.total)
    curried = [curry(F2, e, e, e, f, exp) for f in maps]
    assert len({g.key() for g in curried}) == 16
    for f, g in zip(maps, curried):
        assert uncurry(F2, e, e, e, g, exp, zx).key() == f.key()


def test_empty_fiber_curries_to_empty_map(F2sep):
    z, x, y = random_triple(F2sep, rng_for(3), empty_fiber=True)
    missing = [b for b in x.base.underlying_set
               if b not in x.projection.point_function.values()]
    assert missing
    assert any(z.projection.point_function[p] in missing for p in z.total.underlying_set)
    exp = exponential_over_base(F2sep, x, y)
    zx = fiber_product(F2sep, z, x)
    zx_space = SpaceOverBase(zx.sheaf, z.base, compose_maps(z.projection, zx.maps["x"]))
    over = [f for f in enumerate_maps(zx.sheaf, y.total) if map_over_base(f, zx_space, y)]
    assert over
    for f in over:
        g = curry(F2sep, z, x, y, f, exp)
        for zp, pid in g.point_function.items():
            b, pairs = exp.point_maps[pid]
            if b in missing:
                assert pairs == ()
        assert uncurry(F2sep, z, x, y, g, exp, zx).key() == f.key()
