"""Small hand-built presheaves and brute-force oracles shared by the tests."""

import itertools

from concrete_sheaves.presheaf import Presheaf

BIJECTIONS = ("(a,b)", "(b,a)")


def doubled_edge(site, e):
    """The edge sheaf with a second copy of each bijective plot over 2."""
    plots = {d: list(ps) for d, ps in e.plots.items()}
    plots["2"] += [p + "'" for p in BIJECTIONS]
    restrict = {}
    for f, table in e.restrict.items():
        t = dict(table)
        if site.category.cod(f) == "2":
            for p in BIJECTIONS:
                q = table[p]
                t[p + "'"] = q + "'" if q in BIJECTIONS and site.category.dom(f) == "2" else q
        restrict[f] = t
    return Presheaf.build(site, plots, restrict, "E2")


def maps_by_brute_force(x, y):
    """Point functions u(x) -> u(y) carrying every plot of x to a plot of y."""
    site = x.site
    xs, ys = x.underlying_set, y.underlying_set
    out = []
    for vals in itertools.product(ys, repeat=len(xs)):
        f = dict(zip(xs, vals))
        if all(tuple(f[v] for v in t) in y.plot_by_function[d]
               for d, table in x.underlying_table.items() for t in table.values()):
            out.append(f)
    assert site is y.site or site.name == y.site.name
    return out
