"""Seeded random presheaves, concrete presheaves, sheaves and diagrams."""

from __future__ import annotations

import random

from . import kernels
from .constructions import Diagram, sheafify, small_category
from .presheaf import ConcreteSheaf, Presheaf, enumerate_maps, representable


def rng_for(seed):
    return random.Random(seed)


def _coproduct_of_representables(site, gens):
    cat = site.category
    reps = [representable(site, d) for d in gens]
    plots = {d: [(i, f) for i, r in enumerate(reps) for f in r.plots[d]] for d in cat.objects}
    return reps, plots


def random_presheaf(site, rng, max_generators=3, max_identifications=2, name="R"):
    """A quotient of a coproduct of representables by a random congruence."""
    cat = site.category
    gens = [rng.choice(cat.objects) for _ in range(rng.randint(1, max_generators))]
    reps, plots = _coproduct_of_representables(site, gens)
    index = {d: {t: k for k, t in enumerate(ts)} for d, ts in plots.items()}
    pairs = {d: [] for d in cat.objects}
    for _ in range(rng.randint(0, max_identifications)):
        d = rng.choice(cat.objects)
        if len(plots[d]) >= 2:
            a, b = rng.sample(plots[d], 2)
            pairs[d].append((index[d][a], index[d][b]))
    # close under restriction until stable
    while True:
        labels = {d: kernels.partition(len(plots[d]), pairs[d]) for d in cat.objects}
        added = False
        for f, mor in cat.morphisms.items():
            c, d = mor.dom, mor.cod
            lab_c = labels[c]
            for k, (i, g) in enumerate(plots[d]):
                root = labels[d][k]
                if root == k:
                    continue
                i2, g2 = plots[d][root]
                a = index[c][(i, cat.compose(g, f))]
                b = index[c][(i2, cat.compose(g2, f))]
                if lab_c[a] != lab_c[b]:
                    pairs[c].append((a, b))
                    added = True
        if not added:
            break
    names = {d: [f"g{plots[d][labels[d][k]][0]}.{plots[d][labels[d][k]][1]}"
                 for k in range(len(plots[d]))] for d in cat.objects}
    restrict = {}
    for f, mor in cat.morphisms.items():
        c, d = mor.dom, mor.cod
        restrict[f] = {names[d][k]: names[c][index[c][(i, cat.compose(g, f))]]
                       for k, (i, g) in enumerate(plots[d])}
    return Presheaf.build(site, {d: sorted(set(ns)) for d, ns in names.items()}, restrict, name)


def random_concrete_presheaf(site, rng, max_points=3, max_generators=3, name="C"):
    """Functions ``u(D) -> P`` generated under precomposition by random plot images."""
    cat = site.category
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions
    points = [chr(ord("p") + i) for i in range(rng.randint(1, max_points))]
    gens = [rng.choice(cat.objects) for _ in range(rng.randint(1, max_generators))]
    # a generator over D is a random function u(D) -> P; close under precomposition
    found = {d: set() for d in cat.objects}
    for d in gens:
        found[d].add(tuple(rng.choice(points) for _ in upts[d]))
    for p in points:
        if rng.random() < 0.5:
            found[site.terminal].add((p,))
    changed = True
    while changed:
        changed = False
        for f, mor in cat.morphisms.items():
            c, d = mor.dom, mor.cod
            for t in list(found[d]):
                val = dict(zip(upts[d], t))
                r = tuple(val[funcs[f][q]] for q in upts[c])
                if r not in found[c]:
                    found[c].add(r)
                    changed = True
    return from_functions(site, found, name)


def from_functions(site, found, name="C"):
    """Build the concrete presheaf whose plots over D are the given tuples of points."""
    cat = site.category
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions

    def plot_name(d, t):
        return t[0] if d == site.terminal else "(" + ",".join(t) + ")"

    plots = {d: [plot_name(d, t) for t in sorted(ts)] for d, ts in found.items()}
    restrict = {}
    for f, mor in cat.morphisms.items():
        c, d = mor.dom, mor.cod
        tab = {}
        for t in found[d]:
            val = dict(zip(upts[d], t))
            tab[plot_name(d, t)] = plot_name(c, tuple(val[funcs[f][q]] for q in upts[c]))
        restrict[f] = tab
    return Presheaf.build(site, plots, restrict, name)


def constants_presheaf(site, points, name="K"):
    """Only the constant functions into ``points`` are plots."""
    upts = site.points.underlying_sets
    found = {d: {tuple(p for _ in upts[d]) for p in points} for d in site.category.objects}
    return from_functions(site, found, name)


def indiscrete_presheaf(site, points, name="I"):
    """Every function into ``points`` is a plot."""
    from itertools import product

    upts = site.points.underlying_sets
    found = {d: set(product(points, repeat=len(upts[d]))) for d in site.category.objects}
    return from_functions(site, found, name)


def random_sheaf(site, rng, max_points=3, max_generators=3, name="S"):
    x = random_concrete_presheaf(site, rng, max_points, max_generators, name)
    out = sheafify(site, x).sheaf
    return ConcreteSheaf.certify(site, out, name)


def random_map(x, y, rng):
    maps = enumerate_maps(x, y)
    return rng.choice(maps) if maps else None


def random_diagram(site, rng, max_points=3):
    """A random small diagram of concrete sheaves: discrete, parallel pair, cospan or span."""
    kind = rng.choice(["discrete", "parallel", "cospan", "span"])
    sheaf = lambda n: random_sheaf(site, rng, max_points=max_points, max_generators=2, name=n)
    if kind == "discrete":
        k = rng.randint(0, 3)
        names = [str(i) for i in range(k)]
        return Diagram(small_category(names, {}), {a: sheaf(f"N{a}") for a in names}, {})
    for _ in range(20):
        if kind == "parallel":
            x, y = sheaf("X"), sheaf("Y")
            ms = enumerate_maps(x, y)
            if not ms:
                continue
            shape = small_category(["s", "t"], {"f": ("s", "t"), "g": ("s", "t")})
            return Diagram(shape, {"s": x, "t": y}, {"f": rng.choice(ms), "g": rng.choice(ms)})
        x, y, z = sheaf("X"), sheaf("Y"), sheaf("Z")
        if kind == "cospan":
            fs, gs = enumerate_maps(x, z), enumerate_maps(y, z)
            if fs and gs:
                shape = small_category(["x", "y", "z"], {"f": ("x", "z"), "g": ("y", "z")})
                return Diagram(shape, {"x": x, "y": y, "z": z},
                               {"f": rng.choice(fs), "g": rng.choice(gs)})
        else:
            fs, gs = enumerate_maps(z, x), enumerate_maps(z, y)
            if fs and gs:
                shape = small_category(["x", "y", "z"], {"f": ("z", "x"), "g": ("z", "y")})
                return Diagram(shape, {"x": x, "y": y, "z": z},
                               {"f": rng.choice(fs), "g": rng.choice(gs)})
    return Diagram(small_category([], {}), {}, {})


def random_space_over(site, rng, base, max_points=2, avoid=None, name="S"):
    """A random sheaf with a projection to ``base``; ``avoid`` is a base point left with an empty fiber."""
    from .quasitopos import SpaceOverBase

    for _ in range(50):
        x = random_sheaf(site, rng, max_points=max_points, max_generators=2, name=name)
        maps = [m for m in enumerate_maps(x, base)
                if avoid is None or avoid not in m.point_function.values()]
        if maps:
            return SpaceOverBase(x, base, rng.choice(maps))
    raise RuntimeError("could not find a space over the base")


def random_triple(site, rng, empty_fiber=False, max_points=2):
    """Seeded ``(Z, X, Y)`` over a common base; with ``empty_fiber`` X misses a base point."""
    from .quasitopos import over_terminal

    if rng.random() < 0.3 and not empty_fiber:
        spaces = [random_sheaf(site, rng, max_points=max_points, max_generators=2, name=n)
                  for n in "ZXY"]
        return tuple(over_terminal(site, s) for s in spaces)
    while True:
        base = random_sheaf(site, rng, max_points=2, max_generators=2, name="B")
        if not empty_fiber or len(base.underlying_set) >= 2:
            break
    avoid = base.underlying_set[-1] if empty_fiber else None
    z = random_space_over(site, rng, base, max_points, name="Z")
    x = random_space_over(site, rng, base, max_points, avoid=avoid, name="X")
    y = random_space_over(site, rng, base, max_points, name="Y")
    return z, x, y
