"""Weak subobject classifier, subspaces, quotients and exponentials over a base."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from . import kernels
from .constructions import named_shape, sheafify, tuple_name
from .errors import NotEpi, NotMono, NotStrongMono, ShapeMismatch, SoundnessError, UnknownPoint
from .presheaf import (
    ConcreteSheaf,
    Presheaf,
    SheafMap,
    Verdict,
    check_map,
    compose_maps,
    enumerate_maps,
    map_from_point_function,
    terminal_presheaf,
)


def subset_name(points):
    return "{" + ",".join(sorted(points)) + "}"


def terminal_sheaf(site):
    return ConcreteSheaf.certify(site, terminal_presheaf(site, "1"))


@dataclass(frozen=True, eq=False)
class SpaceOverBase:
    total: ConcreteSheaf
    base: ConcreteSheaf
    projection: SheafMap

    def __post_init__(self):
        if not check_map(self.projection).natural:
            raise ShapeMismatch("projection is not natural")


def over_terminal(site, x, base=None):
    base = base or terminal_sheaf(site)
    (b,) = base.underlying_set
    proj = map_from_point_function(x, base, {p: b for p in x.underlying_set})
    return SpaceOverBase(x, base, proj)


# the classifier ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OmegaSheaf:
    sheaf: ConcreteSheaf
    top: SheafMap
    true_point: str
    false_point: str


def omega(site):
    """Plots over D are the subsets of u(D); restriction is preimage."""
    cat = site.category
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions
    subsets = {}
    for d in cat.objects:
        pts = upts[d]
        subsets[d] = {subset_name(s): frozenset(s)
                      for r in range(len(pts) + 1) for s in combinations(pts, r)}
    restrict = {}
    for f, mor in cat.morphisms.items():
        restrict[f] = {name: subset_name([c for c in upts[mor.dom] if funcs[f][c] in s])
                       for name, s in subsets[mor.cod].items()}
    om = ConcreteSheaf.certify(site, Presheaf.build(site, subsets, restrict, "Omega"))
    one = terminal_sheaf(site)
    top = SheafMap(one, om, {d: {"*": subset_name(upts[d])} for d in cat.objects})
    if not check_map(top).natural:
        raise SoundnessError("top is not natural")
    t = site.terminal
    return OmegaSheaf(om, top, subset_name(upts[t]), subset_name([]))


# subspaces and quotients --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubspaceResult:
    sheaf: ConcreteSheaf
    inclusion: SheafMap


def subspace_structure(site, x, subset, name=None):
    """Plots of ``x`` whose underlying function lands in ``subset``."""
    keep = set(subset)
    unknown = keep - set(x.underlying_set)
    if unknown:
        raise UnknownPoint(f"points {sorted(unknown)} are not points of {x.name}")
    plots = {d: [p for p, t in table.items() if set(t) <= keep]
             for d, table in x.underlying_table.items()}
    kept = {d: set(ps) for d, ps in plots.items()}
    restrict = {f: {p: q for p, q in table.items() if p in kept[x.category.cod(f)]}
                for f, table in x.restrict.items()}
    sub = ConcreteSheaf.certify(site, Presheaf.build(site, plots, restrict,
                                                     name or f"{x.name}|sub"))
    inc = SheafMap(sub, x, {d: {p: p for p in ps} for d, ps in sub.plots.items()})
    if not is_strong_mono(site, inc).ok:
        raise SoundnessError("subspace inclusion is not a strong mono")
    return SubspaceResult(sub, inc)


@dataclass(frozen=True, eq=False)
class QuotientResult:
    sheaf: ConcreteSheaf
    projection: SheafMap
    classes: dict  # point -> class representative


def _classes_from_relation(points, relation):
    idx = {p: i for i, p in enumerate(points)}
    pairs = []
    for item in relation:
        item = list(item)
        for a, b in zip(item, item[1:]):
            if a not in idx or b not in idx:
                raise UnknownPoint(f"relation mentions unknown point {a if a not in idx else b}")
            pairs.append((idx[a], idx[b]))
    labels = kernels.partition(len(points), pairs)
    return {p: points[labels[i]] for p, i in idx.items()}


def quotient_structure(site, x, relation, name=None):
    """Sheafify the image presheaf of ``x`` under the quotient of its points.

    ``relation`` is an iterable of blocks (pairs or longer lists) whose
    members are identified; the generated equivalence is used.
    """
    cls = _classes_from_relation(list(x.underlying_set), relation)
    cat = x.category
    image, proj = {}, {}
    for d in cat.objects:
        table = x.underlying_table[d]
        first = {}
        for p in x.plots[d]:
            first.setdefault(tuple(cls[v] for v in table[p]), p)
        image[d] = first
        proj[d] = {p: first[tuple(cls[v] for v in table[p])] for p in x.plots[d]}
    restrict = {}
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions
    for f, mor in cat.morphisms.items():
        tab = {}
        for func, p in image[mor.cod].items():
            val = dict(zip(upts[mor.cod], func))
            tab[p] = image[mor.dom][tuple(val[funcs[f][c]] for c in upts[mor.dom])]
        restrict[f] = tab
    pre = Presheaf.build(site, {d: list(v.values()) for d, v in image.items()}, restrict,
                         name or f"{x.name}/~")
    sh = sheafify(site, pre)
    q = sh.sheaf.with_name(name or f"{x.name}/~")
    projection = SheafMap(x, q, {d: {p: sh.unit.components[d][proj[d][p]] for p in x.plots[d]}
                                 for d in cat.objects})
    if not check_map(projection).natural or not is_strong_epi(site, projection).ok:
        raise SoundnessError("quotient projection is not a strong epi")
    return QuotientResult(q, projection, cls)


def is_strong_mono(site, i):
    """Every plot of the target landing in the image lifts to the source."""
    chk = check_map(i)
    if not chk.mono:
        raise NotMono(f"map is not injective on points: {chk.witnesses.get('mono')}")
    image = set(i.point_function.values())
    for d in i.source.category.objects:
        hit = set(i.components[d].values())
        for psi, t in i.target.underlying_table[d].items():
            if set(t) <= image and psi not in hit:
                return Verdict(False, "no-lift", (d, psi))
    return Verdict(True)


def is_strong_epi(site, p):
    """Every plot of the target comes locally, over a covering sieve, from the source."""
    chk = check_map(p)
    if not chk.epi:
        raise NotEpi(f"map is not surjective on points: {chk.witnesses.get('epi')}")
    cat = p.source.category
    image = {d: set(p.components[d].values()) for d in cat.objects}
    for d in cat.objects:
        covering = {r.members for r in site.topology[d]}
        for phi in p.target.plots[d]:
            agree = frozenset(f for f in cat.incoming(d)
                              if p.target.restrict[f][phi] in image[cat.dom(f)])
            if agree not in covering:
                return Verdict(False, "no-local-lift", (d, phi))
    return Verdict(True)


# characteristic maps ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharacteristicResult:
    chi: SheafMap
    pullback: object          # ShapeResult for chi and top
    qualifying_count: int     # maps X -> Omega whose pullback of top is the subobject


def _same_subobject(i, j):
    """Monos into the same object with the same image at every stage are isomorphic over it."""
    return all(set(i.components[d].values()) == set(j.components[d].values())
               for d in i.target.category.objects)


def _classifies(site, om, chi, i):
    pb = named_shape(site, "pullback", chi, om.top)
    return _same_subobject(pb.maps["x"], i), pb


def characteristic_map(site, i, om=None, count=True):
    """The map ``χ: X -> Ω`` sending a plot to the preimage of the image of ``i``."""
    if not is_strong_mono(site, i).ok:
        raise NotStrongMono("characteristic maps exist only for strong monos")
    om = om or omega(site)
    x = i.target
    image = set(i.point_function.values())
    comps = {d: {phi: subset_name([q for q, v in zip(site.points.underlying_sets[d], t)
                                   if v in image])
                 for phi, t in x.underlying_table[d].items()}
             for d in x.category.objects}
    chi = SheafMap(x, om.sheaf, comps)
    if not check_map(chi).natural:
        raise SoundnessError("characteristic map is not natural")
    ok, pb = _classifies(site, om, chi, i)
    if not ok:
        raise SoundnessError("pullback of top along chi is not the subobject")
    n = -1
    if count:
        n = sum(1 for cand in enumerate_maps(x, om.sheaf) if _classifies(site, om, cand, i)[0])
    return CharacteristicResult(chi, pb, n)


# fibers and exponentials ---------------------------------------------------------

def fiber(site, space, b):
    if b not in space.base.underlying_set:
        raise UnknownPoint(f"{b!r} is not a point of the base")
    pts = [x for x in space.total.underlying_set if space.projection.point_function[x] == b]
    return subspace_structure(site, space.total, pts, name=f"{space.total.name}_{b}")


def map_point_name(b, pairs):
    return f"{b}[" + ",".join(f"{x}>{y}" for x, y in pairs) + "]"


@dataclass(frozen=True, eq=False)
class Exponential:
    space: SpaceOverBase
    point_maps: dict   # point id -> (base point, tuple of (x, y) pairs)
    point_ids: dict    # (base point, pairs) -> point id
    x: SpaceOverBase
    y: SpaceOverBase


def exponential_over_base(site, x, y):
    """The parametrised mapping space of ``x`` and ``y`` over their common base."""
    if x.base is not y.base and x.base.plots != y.base.plots:
        raise ShapeMismatch("X and Y live over different bases")
    base = x.base
    cat = site.category
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions

    point_maps, point_ids = {}, {}
    for b in base.underlying_set:
        xb = fiber(site, x, b).sheaf
        yb = fiber(site, y, b).sheaf
        for m in enumerate_maps(xb, yb):
            pairs = tuple(sorted(m.point_function.items()))
            pid = map_point_name(b, pairs)
            point_maps[pid] = (b, pairs)
            point_ids[(b, pairs)] = pid
    points = sorted(point_maps)
    evals = {pid: dict(pairs) for pid, (b, pairs) in point_maps.items()}

    plots, by_func = {}, {}
    for c in cat.objects:
        good = {}
        for func in product(points, repeat=len(upts[c])):
            beta_f = tuple(point_maps[v][0] for v in func)
            beta = base.plot_by_function[c].get(beta_f)
            if beta is None:
                continue
            if not _evaluation_is_map(site, c, beta, func, x, y, evals):
                continue
            name = func[0] if c == site.terminal else tuple_name(func)
            good[func] = name
        by_func[c] = good
        plots[c] = list(good.values())
    restrict = {}
    for f, mor in cat.morphisms.items():
        tab = {}
        for func, name in by_func[mor.cod].items():
            val = dict(zip(upts[mor.cod], func))
            tab[name] = by_func[mor.dom][tuple(val[funcs[f][q]] for q in upts[mor.dom])]
        restrict[f] = tab
    exp = ConcreteSheaf.certify(site, Presheaf.build(site, plots, restrict,
                                                     f"[{x.total.name},{y.total.name}]"))
    proj = map_from_point_function(exp, base, {pid: point_maps[pid][0] for pid in points})
    if proj is None:
        raise SoundnessError("exponential does not project onto the base")
    return Exponential(SpaceOverBase(exp, base, proj), point_maps, point_ids, x, y)


def _evaluation_is_map(site, c, beta, func, x, y, evals):
    """Does ``(d, x) ↦ φ(d)(x)`` underlie a map ``y(C) ×_B X -> Y``?"""
    cat = site.category
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions
    base = x.base
    phi = dict(zip(upts[c], func))
    for d in cat.objects:
        yplots = y.total.plot_by_function[d]
        proj = x.projection.components[d]
        for g in cat.hom(d, c):
            bg = base.restrict[g][beta]
            for xp in x.total.plots[d]:
                if proj[xp] != bg:
                    continue
                xt = x.total.underlying_table[d][xp]
                vals = []
                for e, xv in zip(upts[d], xt):
                    m = evals[phi[funcs[g][e]]]
                    if xv not in m:
                        return False
                    vals.append(m[xv])
                if tuple(vals) not in yplots:
                    return False
    return True


def fiber_product(site, z, x):
    """``Z ×_B X`` with points named ``(z,x)``."""
    return named_shape(site, "pullback", z.projection, x.projection)


def curry(site, z, x, y, f, exp=None):
    """Transpose ``f: Z ×_B X -> Y`` to ``Z -> [X, Y]_B``.

    Over a base point whose fiber in X is empty the transpose is the empty map.
    """
    exp = exp or exponential_over_base(site, x, y)
    src = f.source
    pair_of = {}
    zx = fiber_product(site, z, x)
    if zx.sheaf.plots != src.plots:
        raise ShapeMismatch("f must be defined on the fiber product Z ×_B X")
    for p in src.underlying_set:
        pair_of[(zx.maps["x"].point_function[p], zx.maps["y"].point_function[p])] = p
    base_of = z.projection.point_function
    px = x.projection.point_function
    func = {}
    for zp in z.total.underlying_set:
        b = base_of[zp]
        pairs = tuple((xp, f.point_function[pair_of[(zp, xp)]])
                      for xp in x.total.underlying_set if px[xp] == b)
        pid = exp.point_ids.get((b, pairs))
        if pid is None:
            raise ShapeMismatch(f"f restricted to the fiber over {b} is not a map")
        func[zp] = pid
    out = map_from_point_function(z.total, exp.space.total, func)
    if out is None:
        raise ShapeMismatch("the transpose of f is not a map")
    return out


def uncurry(site, z, x, y, g, exp, zx=None):
    """Inverse of :func:`curry`: ``(z, x) ↦ g(z)(x)``."""
    zx = zx or fiber_product(site, z, x)
    src = zx.sheaf
    pz, px = zx.maps["x"].point_function, zx.maps["y"].point_function
    func = {}
    for p in src.underlying_set:
        _, pairs = exp.point_maps[g.point_function[pz[p]]]
        func[p] = dict(pairs)[px[p]]
    out = map_from_point_function(src, y.total, func)
    if out is None:
        raise ShapeMismatch("uncurried map is not a map")
    return out


def map_over_base(f, source, target):
    """Does ``f`` commute with the projections to the base?"""
    return compose_maps(target.projection, f).key() == source.projection.key()
