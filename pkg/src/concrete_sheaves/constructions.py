"""Plus construction, sheafification, concretization, limits and colimits."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import kernels
from .errors import ShapeMismatch, SoundnessError, StructuralError, ValidationError
from .fincat import FinCategory, Morphism, validate_category
from .presheaf import (
    ConcreteSheaf,
    Presheaf,
    SheafMap,
    _sieve_solutions,
    check_map,
    check_presheaf,
    compose_maps,
    enumerate_maps,
    identity_map,
    is_concrete,
    is_sheaf,
    representable,
    same_presheaf,
    Verdict,
)
from .site import maximal_sieve, pullback_sieve


def tuple_name(parts):
    return "(" + ",".join(parts) + ")"


# plus construction -----------------------------------------------------------

def plus(site, x):
    """``X⁺(C)`` = colimit over covering sieves on C of compatible families.

    Returns ``(X⁺, η)`` with ``η: X -> X⁺`` the canonical map.  A class
    containing the family generated by a plot ``p`` is named ``p`` (least
    such plot); other classes get a name built from their least
    representative.
    """
    pre = check_presheaf(x)
    if not pre.ok:
        raise ValidationError(f"{x.name} is not a presheaf", pre)
    cat = x.category
    top = site.topology
    elements = {}   # object -> list of (sieve, members, values)
    lookup = {}     # object -> {(sieve members, values): element index}
    names = {}      # object -> list of class names per element
    for c in cat.objects:
        elems, index = [], {}
        for r in top[c]:
            members, sols = _sieve_solutions(x, r)
            for s in sols:
                index[(r.members, s)] = len(elems)
                elems.append((r, members, s))
        pairs = []
        for i, (r, members, s) in enumerate(elems):
            pos = {f: k for k, f in enumerate(members)}
            for r2 in top[c]:
                if r2.members < r.members:
                    s2 = tuple(s[pos[f]] for f in sorted(r2.members))
                    pairs.append((i, index[(r2.members, s2)]))
        labels = kernels.partition(len(elems), pairs)

        full = maximal_sieve(cat, c).members
        ident = cat.identity(c)
        classes = {}
        for i, lab in enumerate(labels):
            classes.setdefault(lab, []).append(i)
        label_name = {}
        for lab, idxs in classes.items():
            from_plots = []
            for i in idxs:
                r, members, s = elems[i]
                if r.members == full:
                    from_plots.append(s[members.index(ident)])
            if from_plots:
                label_name[lab] = min(from_plots)
            else:
                r, members, s = min((elems[i] for i in idxs),
                                    key=lambda e: (len(e[1]), e[1], e[2]))
                label_name[lab] = "glue(" + ";".join(f"{f}={v}" for f, v in zip(members, s)) + ")"
        if len(set(label_name.values())) != len(label_name):
            raise SoundnessError(f"plus construction minted colliding plot names over {c}")
        elements[c], lookup[c] = elems, index
        names[c] = [label_name[lab] for lab in labels]

    plots = {c: sorted(set(names[c])) for c in cat.objects}
    restrict = {}
    for g, m in cat.morphisms.items():
        c2, c = m.dom, m.cod
        table = {}
        for i, (r, members, s) in enumerate(elements[c]):
            pos = {f: k for k, f in enumerate(members)}
            r2 = pullback_sieve(cat, g, r)
            s2 = tuple(s[pos[cat.compose(g, h)]] for h in sorted(r2.members))
            target = names[c2][lookup[c2][(r2.members, s2)]]
            prev = table.setdefault(names[c][i], target)
            if prev != target:
                raise SoundnessError(f"plus restriction along {g} is not well defined")
        restrict[g] = table
    xp = Presheaf.build(site, plots, restrict, f"{x.name}+")

    unit = {}
    for c in cat.objects:
        full = maximal_sieve(cat, c).members
        members = sorted(full)
        comp = {}
        for p in x.plots[c]:
            s = tuple(x.restrict[f][p] for f in members)
            comp[p] = names[c][lookup[c][(full, s)]]
        unit[c] = comp
    return xp, SheafMap(x, xp, unit)


def is_separated(site, x):
    """Gluings are unique whenever they exist, over every covering sieve of the topology."""
    cat = x.category
    for d in cat.objects:
        for r in site.topology[d]:
            members = sorted(r.members)
            seen = {}
            for p in x.plots[d]:
                key = tuple(x.restrict[f][p] for f in members)
                if key in seen:
                    return Verdict(False, "non-unique-gluing", (d, tuple(members), (seen[key], p)))
                seen[key] = p
    return Verdict(True)


@dataclass(frozen=True, eq=False)
class SheafifyResult:
    sheaf: Presheaf           # ConcreteSheaf when the input was concrete
    unit: SheafMap            # canonical map X -> sheafify(X)
    applications: int         # number of plus steps used


def sheafify(site, x):
    """``X⁺`` for separated ``X``, otherwise ``X⁺⁺``; the result is certified a sheaf."""
    was_concrete = is_concrete(x).ok
    if is_separated(site, x).ok:
        out, unit = plus(site, x)
        steps = 1
    else:
        once, u1 = plus(site, x)
        out, u2 = plus(site, once)
        unit = compose_maps(u2, u1)
        steps = 2
    out = out.with_name(f"a({x.name})")
    unit = SheafMap(x, out, unit.components)
    if not is_sheaf(site, out).ok:
        raise SoundnessError("sheafification produced a presheaf that is not a sheaf")
    if was_concrete:
        try:
            out = ConcreteSheaf.certify(site, out)
        except ValidationError as exc:
            raise SoundnessError("plus of a concrete presheaf is not a concrete sheaf") from exc
        unit = SheafMap(x, out, unit.components)
    return SheafifyResult(out, unit, steps)


@dataclass(frozen=True, eq=False)
class ConcretizeResult:
    presheaf: Presheaf
    quotient: SheafMap


def concretize(x):
    """Identify plots with equal underlying functions; classes are named by their least plot."""
    cat = x.category
    rep = {}
    for d in cat.objects:
        table = x.underlying_table[d]
        first = {}
        for p in x.plots[d]:
            first.setdefault(table[p], p)
        rep[d] = {p: first[table[p]] for p in x.plots[d]}
    plots = {d: sorted(set(rep[d].values())) for d in cat.objects}
    restrict = {}
    for f, m in cat.morphisms.items():
        restrict[f] = {rep[m.cod][p]: rep[m.dom][x.restrict[f][p]] for p in x.plots[m.cod]}
    lx = Presheaf.build(x.site, plots, restrict, f"L({x.name})")
    if not is_concrete(lx).ok:
        raise SoundnessError("concretization is not concrete")
    return ConcretizeResult(lx, SheafMap(x, lx, rep))


# diagrams ----------------------------------------------------------------------

def small_category(objects, arrows):
    """A category whose only composites involve identities.

    ``arrows`` maps an arrow name to ``(dom, cod)``; non-identity arrows
    must not be composable with each other.
    """
    ids = {o: f"id_{o}" for o in objects}
    morphs = [Morphism(ids[o], o, o) for o in objects]
    morphs += [Morphism(a, d, c) for a, (d, c) in arrows.items()]
    comp = {}
    for m in morphs:
        comp[(ids[m.cod], m.id)] = m.id
        comp[(m.id, ids[m.dom])] = m.id
    for a, (d, c) in arrows.items():
        for b, (d2, c2) in arrows.items():
            if c == d2:
                raise StructuralError("small_category does not handle composable arrows")
    cat = FinCategory.build(objects, morphs, comp, ids)
    return cat


@dataclass(frozen=True, eq=False)
class Diagram:
    shape: FinCategory
    nodes: dict   # shape object -> Presheaf
    edges: dict   # shape morphism -> SheafMap (identities may be omitted)

    def edge(self, m):
        if m in self.edges:
            return self.edges[m]
        if m == self.shape.identity(self.shape.dom(m)):
            return identity_map(self.nodes[self.shape.dom(m)])
        raise ShapeMismatch(f"diagram has no map for shape morphism {m!r}")


def validate_diagram(diagram):
    shape = diagram.shape
    rep = validate_category(shape)
    if not rep.ok:
        raise ShapeMismatch("diagram shape is not a category")
    for a in shape.objects:
        if a not in diagram.nodes:
            raise ShapeMismatch(f"diagram has no node for shape object {a!r}")
    for m, mor in shape.morphisms.items():
        e = diagram.edge(m)
        if not (same_presheaf(e.source, diagram.nodes[mor.dom])
                and same_presheaf(e.target, diagram.nodes[mor.cod])):
            raise ShapeMismatch(f"map for {m!r} has the wrong source or target")
        if not check_map(e).natural:
            raise ShapeMismatch(f"map for {m!r} is not natural")
    for (g, f), h in shape.composition.items():
        if compose_maps(diagram.edge(g), diagram.edge(f)).key() != diagram.edge(h).key():
            raise ShapeMismatch(f"diagram does not preserve the composite {g}∘{f}")


def _require_sheaves(site, diagram):
    nodes = {}
    for a, x in diagram.nodes.items():
        if not isinstance(x, ConcreteSheaf):
            x = ConcreteSheaf.certify(site, x)
        nodes[a] = x
    return nodes


@dataclass(frozen=True, eq=False)
class LimitResult:
    sheaf: ConcreteSheaf
    projections: dict  # shape object -> SheafMap
    diagram: Diagram


def limit(site, diagram):
    """Pointwise limit: compatible tuples of plots, one per shape object."""
    validate_diagram(diagram)
    _require_sheaves(site, diagram)
    shape = diagram.shape
    cat = site.category
    order = list(shape.objects)
    pos = {a: i for i, a in enumerate(order)}
    plots, tuples = {}, {}
    for d in cat.objects:
        sizes = [diagram.nodes[a].size(d) for a in order]
        constraints = []
        for m, mor in shape.morphisms.items():
            if m == shape.identity(mor.dom):
                continue
            e = diagram.edge(m)
            tgt = diagram.nodes[mor.cod]
            table = [tgt.index[d][e.components[d][p]] for p in diagram.nodes[mor.dom].plots[d]]
            constraints.append((pos[mor.dom], pos[mor.cod], table))
        sols = kernels.solve_functional(sizes, constraints)
        tups = [tuple(diagram.nodes[a].plots[d][s[i]] for i, a in enumerate(order)) for s in sols]
        tuples[d] = {tuple_name(t): t for t in tups}
        plots[d] = list(tuples[d])
    restrict = {}
    for f, mor in cat.morphisms.items():
        restrict[f] = {name: tuple_name(tuple(diagram.nodes[a].restrict[f][t[i]]
                                              for i, a in enumerate(order)))
                       for name, t in tuples[mor.cod].items()}
    lim = Presheaf.build(site, plots, restrict, "lim")
    try:
        lim = ConcreteSheaf.certify(site, lim)
    except ValidationError as exc:
        raise SoundnessError("pointwise limit of concrete sheaves failed certification") from exc
    projections = {a: SheafMap(lim, diagram.nodes[a],
                               {d: {name: t[i] for name, t in tuples[d].items()}
                                for d in cat.objects})
                   for i, a in enumerate(order)}
    return LimitResult(lim, projections, diagram)


@dataclass(frozen=True, eq=False)
class ColimitResult:
    sheaf: ConcreteSheaf
    injections: dict  # shape object -> SheafMap
    diagram: Diagram
    presheaf_colimit: Presheaf = None


def colimit(site, diagram):
    """Pointwise colimit, then concretize, then sheafify."""
    validate_diagram(diagram)
    _require_sheaves(site, diagram)
    shape = diagram.shape
    cat = site.category
    tag = {}
    plots, cls = {}, {}
    for d in cat.objects:
        tokens = [(a, p) for a in shape.objects for p in diagram.nodes[a].plots[d]]
        idx = {t: i for i, t in enumerate(tokens)}
        pairs = []
        for m, mor in shape.morphisms.items():
            e = diagram.edge(m)
            for p in diagram.nodes[mor.dom].plots[d]:
                pairs.append((idx[(mor.dom, p)], idx[(mor.cod, e.components[d][p])]))
        labels = kernels.partition(len(tokens), pairs)
        names = [f"{a}:{p}" for a, p in tokens]
        groups = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(names[i])
        label_name = {lab: min(ns) for lab, ns in groups.items()}
        cls[d] = {t: label_name[labels[i]] for t, i in idx.items()}
        plots[d] = sorted(set(label_name.values()))
        tag[d] = tokens
    restrict = {}
    for f, mor in cat.morphisms.items():
        restrict[f] = {cls[mor.cod][(a, p)]: cls[mor.dom][(a, diagram.nodes[a].restrict[f][p])]
                       for a, p in tag[mor.cod]}
    pc = Presheaf.build(site, plots, restrict, "colim_pre")
    lc = concretize(pc)
    sh = sheafify(site, lc.presheaf)
    out = sh.sheaf.with_name("colim")
    if not isinstance(out, ConcreteSheaf):
        raise SoundnessError("colimit did not certify as a concrete sheaf")
    to_out = compose_maps(sh.unit, lc.quotient)
    injections = {}
    for a in shape.objects:
        comps = {d: {p: to_out.components[d][cls[d][(a, p)]] for p in diagram.nodes[a].plots[d]}
                 for d in cat.objects}
        injections[a] = SheafMap(diagram.nodes[a], out, comps)
    return ColimitResult(out, injections, diagram, pc)


# universal properties -------------------------------------------------------------

def _families_of_maps(diagram, apex, into_apex):
    """All cones (or cocones) with the given apex, as dicts shape object -> SheafMap."""
    shape = diagram.shape
    order = list(shape.objects)
    pos = {a: i for i, a in enumerate(order)}
    options = {}
    for a in order:
        node = diagram.nodes[a]
        options[a] = enumerate_maps(node, apex) if into_apex else enumerate_maps(apex, node)
    keys = {a: {m.key(): i for i, m in enumerate(options[a])} for a in order}
    constraints = []
    for m, mor in shape.morphisms.items():
        if m == shape.identity(mor.dom):
            continue
        e = diagram.edge(m)
        if into_apex:
            # cocone: c_dom = c_cod ∘ e, so c_cod determines c_dom
            table = [keys[mor.dom].get(compose_maps(c, e).key(), -1) for c in options[mor.cod]]
            constraints.append((pos[mor.cod], pos[mor.dom], table))
        else:
            table = [keys[mor.cod].get(compose_maps(e, c).key(), -1) for c in options[mor.dom]]
            constraints.append((pos[mor.dom], pos[mor.cod], table))
    sizes = [len(options[a]) for a in order]
    return [{a: options[a][s[i]] for i, a in enumerate(order)}
            for s in kernels.solve_functional(sizes, constraints)]


def mediating_counts_limit(result, apex):
    """For each cone over the diagram with vertex ``apex``, the number of mediating maps."""
    cones = _families_of_maps(result.diagram, apex, into_apex=False)
    induced = {}
    for u in enumerate_maps(apex, result.sheaf):
        key = tuple(compose_maps(result.projections[a], u).key()
                    for a in result.diagram.shape.objects)
        induced[key] = induced.get(key, 0) + 1
    counts = []
    for cone in cones:
        key = tuple(cone[a].key() for a in result.diagram.shape.objects)
        counts.append(induced.get(key, 0))
    if sum(counts) != sum(induced.values()):
        raise SoundnessError("a map into the limit induced something that is not a cone")
    return counts


def mediating_counts_colimit(result, target):
    """For each cocone from the diagram to ``target``, the number of mediating maps."""
    cocones = _families_of_maps(result.diagram, target, into_apex=True)
    induced = {}
    for u in enumerate_maps(result.sheaf, target):
        key = tuple(compose_maps(u, result.injections[a]).key()
                    for a in result.diagram.shape.objects)
        induced[key] = induced.get(key, 0) + 1
    counts = []
    for cocone in cocones:
        key = tuple(cocone[a].key() for a in result.diagram.shape.objects)
        counts.append(induced.get(key, 0))
    if sum(counts) != sum(induced.values()):
        raise SoundnessError("a map out of the colimit induced something that is not a cocone")
    return counts


# named shapes and their direct descriptions ---------------------------------------

SHAPES = ("product", "coproduct", "equalizer", "coequalizer", "pullback", "pushout",
          "terminal", "initial")


@dataclass(frozen=True, eq=False)
class ShapeResult:
    kind: str
    sheaf: ConcreteSheaf
    maps: dict
    cross_check: bool
    result: object = field(default=None, repr=False)


def _index_names(k):
    width = len(str(max(k - 1, 0)))
    return [str(i).zfill(width) for i in range(k)]


def shape_diagram(kind, *args):
    if kind in ("product", "coproduct"):
        names = _index_names(len(args))
        return Diagram(small_category(names, {}), dict(zip(names, args)), {})
    if kind in ("terminal", "initial"):
        return Diagram(small_category([], {}), {}, {})
    if kind in ("equalizer", "coequalizer"):
        f, g = args
        shape = small_category(["s", "t"], {"f": ("s", "t"), "g": ("s", "t")})
        return Diagram(shape, {"s": f.source, "t": f.target}, {"f": f, "g": g})
    if kind == "pullback":
        f, g = args
        shape = small_category(["x", "y", "z"], {"f": ("x", "z"), "g": ("y", "z")})
        return Diagram(shape, {"x": f.source, "y": g.source, "z": f.target}, {"f": f, "g": g})
    if kind == "pushout":
        f, g = args
        shape = small_category(["x", "y", "z"], {"f": ("z", "x"), "g": ("z", "y")})
        return Diagram(shape, {"x": f.target, "y": g.target, "z": f.source}, {"f": f, "g": g})
    raise ValueError(f"unknown shape {kind!r}")


def named_shape(site, kind, *args):
    """A named limit or colimit, delegated to :func:`limit`/:func:`colimit` and cross-checked."""
    diagram = shape_diagram(kind, *args)
    if kind in ("product", "equalizer", "pullback", "terminal"):
        res = limit(site, diagram)
        maps = res.projections
    else:
        res = colimit(site, diagram)
        maps = res.injections
    ok = cross_check(site, kind, res, args)
    if not ok:
        raise SoundnessError(f"{kind} disagrees with its direct description")
    return ShapeResult(kind, res.sheaf, maps, ok, res)


def _functions(domain_size, codomain):
    return product(codomain, repeat=domain_size)


def _limit_direct(site, kind, args):
    """Plots as functions into the product of point sets whose components are plots."""
    cat = site.category
    pts = site.points.underlying_sets
    if kind == "terminal":
        factors = []
    elif kind == "product":
        factors = list(args)
    elif kind == "pullback":
        factors = [args[0].source, args[1].source]
    else:  # equalizer
        factors = [args[0].source]
    points = list(product(*[x.underlying_set for x in factors]))
    if kind == "pullback":
        f, g = args
        points = [p for p in points if f.point_function[p[0]] == g.point_function[p[1]]]
    elif kind == "equalizer":
        f, g = args
        points = [p for p in points if f.point_function[p[0]] == g.point_function[p[0]]]
    out = {}
    for d in cat.objects:
        allowed = [set(x.underlying_table[d].values()) for x in factors]
        good = set()
        for func in _functions(len(pts[d]), points):
            if all(tuple(p[i] for p in func) in allowed[i] for i in range(len(factors))):
                good.add(func)
        out[d] = good
    return points, out


def _local_lift_structure(site, points, pieces):
    """Plots are functions u(D) -> points that, over a covering sieve, come from some piece.

    ``pieces`` is a list of (concrete presheaf, point function into ``points``).
    """
    cat = site.category
    upts = site.points.underlying_sets
    funcs = site.points.underlying_functions
    lifted = {}
    for d in cat.objects:
        s = set()
        for x, pf in pieces:
            for t in x.underlying_table[d].values():
                s.add(tuple(pf[v] for v in t))
        lifted[d] = s
    out = {}
    for d in cat.objects:
        good = set()
        covering = {r.members for r in site.topology[d]}
        for func in _functions(len(upts[d]), points):
            val = dict(zip(upts[d], func))
            agree = frozenset(
                f for f in cat.incoming(d)
                if tuple(val[funcs[f][q]] for q in upts[cat.dom(f)]) in lifted[cat.dom(f)])
            if agree in covering:
                good.add(func)
        out[d] = good
    return out


def _point_classes(tokens, pairs):
    idx = {t: i for i, t in enumerate(tokens)}
    labels = {}
    parent = list(range(len(tokens)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(idx[a]), find(idx[b])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    for t, i in idx.items():
        labels[t] = tokens[find(i)]
    return labels


def _colimit_direct(site, kind, args):
    if kind == "initial":
        return [], _local_lift_structure(site, [], []), {}
    if kind == "coproduct":
        summands = list(zip(_index_names(len(args)), args))
        pairs = []
    elif kind == "coequalizer":
        f, g = args
        summands = [("t", f.target)]
        pairs = [(("t", f.point_function[p]), ("t", g.point_function[p]))
                 for p in f.source.underlying_set]
    else:  # pushout
        f, g = args
        summands = [("x", f.target), ("y", g.target)]
        pairs = [(("x", f.point_function[p]), ("y", g.point_function[p]))
                 for p in f.source.underlying_set]
    tokens = [(a, p) for a, x in summands for p in x.underlying_set]
    cls = _point_classes(tokens, pairs)
    points = sorted(set(cls.values()))
    pieces = [(x, {p: cls[(a, p)] for p in x.underlying_set}) for a, x in summands]
    return points, _local_lift_structure(site, points, pieces), dict(summands)


def cross_check(site, kind, res, args):
    """Compare a computed (co)limit plot-for-plot with the direct description of its shape."""
    cat = site.category
    sheaf = res.sheaf
    if kind in ("product", "equalizer", "pullback", "terminal"):
        points, direct = _limit_direct(site, kind, args)
        if kind in ("product", "terminal"):
            order = list(res.diagram.shape.objects)
        elif kind == "pullback":
            order = ["x", "y"]
        else:
            order = ["s"]
        to_direct = {p: tuple(res.projections[a].point_function[p] for a in order)
                     for p in sheaf.underlying_set}
    else:
        points, direct, summands = _colimit_direct(site, kind, args)
        if kind == "coequalizer":
            summand_nodes = {"t": "t"}
        elif kind == "pushout":
            summand_nodes = {"x": "x", "y": "y"}
        else:
            summand_nodes = {a: a for a in summands}
        tokens = [(a, p) for a in summands for p in summands[a].underlying_set]
        if kind == "coequalizer":
            pairs = [(("t", args[0].point_function[p]), ("t", args[1].point_function[p]))
                     for p in args[0].source.underlying_set]
        elif kind == "pushout":
            pairs = [(("x", args[0].point_function[p]), ("y", args[1].point_function[p]))
                     for p in args[0].source.underlying_set]
        else:
            pairs = []
        cls = _point_classes(tokens, pairs)
        to_direct = {}
        for a, p in tokens:
            q = res.injections[summand_nodes[a]].point_function[p]
            if to_direct.setdefault(q, cls[(a, p)]) != cls[(a, p)]:
                return False
        if set(to_direct) != set(sheaf.underlying_set):
            return False
    if len(set(to_direct.values())) != len(to_direct) or set(to_direct.values()) != set(points):
        return False
    for d in cat.objects:
        mine = {tuple(to_direct[v] for v in t) for t in sheaf.underlying_table[d].values()}
        if mine != direct[d]:
            return False
    return True


# colimit of representables ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RepresentableColimit:
    diagram: Diagram
    colimit: ColimitResult
    iso: SheafMap  # colimit -> X


def elements_diagram(site, x):
    """The category of elements of ``x`` sent to representables."""
    cat = site.category
    objs = [f"{d}|{p}" for d in cat.objects for p in x.plots[d]]
    morphs, comp = [], {}
    ids = {}
    arrows = {}
    for f, mor in cat.morphisms.items():
        for p in x.plots[mor.cod]:
            q = x.restrict[f][p]
            aid = f"{f}|{p}"
            arrows[aid] = (f, mor.dom, q, mor.cod, p)
            morphs.append(Morphism(aid, f"{mor.dom}|{q}", f"{mor.cod}|{p}"))
    for d in cat.objects:
        for p in x.plots[d]:
            ids[f"{d}|{p}"] = f"{cat.identity(d)}|{p}"
    for a1, (f, c, q, d, p) in arrows.items():
        for a2, (g, d2, p2, e, r) in arrows.items():
            if d2 == d and p2 == p:
                comp[(a2, a1)] = f"{cat.compose(g, f)}|{r}"
    shape = FinCategory.build(objs, morphs, comp, ids)
    reps = {d: representable(site, d) for d in cat.objects}
    nodes = {o: reps[o.split("|", 1)[0]] for o in objs}
    edges = {}
    for aid, (f, c, q, d, p) in arrows.items():
        edges[aid] = SheafMap(reps[c], reps[d],
                              {e: {h: cat.compose(f, h) for h in reps[c].plots[e]}
                               for e in cat.objects})
    return Diagram(shape, nodes, edges)


def as_colimit_of_representables(site, x):
    """Rebuild ``x`` as the colimit of its category of elements and exhibit the isomorphism."""
    if not isinstance(x, ConcreteSheaf):
        x = ConcreteSheaf.certify(site, x)
    diagram = elements_diagram(site, x)
    res = colimit(site, diagram)
    # the cocone y(D) -> X sending h to X(h)(p) induces the comparison map on points
    func = {}
    for o, inj in res.injections.items():
        d, p = o.split("|", 1)
        for h in inj.source.underlying_set:
            q = inj.point_function[h]
            v = x.restrict[h][p]
            if func.setdefault(q, v) != v:
                raise SoundnessError("cocone into X is inconsistent on points")
    from .presheaf import is_iso, map_from_point_function

    iso = map_from_point_function(res.sheaf, x, func)
    if iso is None or not is_iso(iso):
        raise SoundnessError("colimit of representables is not isomorphic to the input")
    return RepresentableColimit(diagram, res, iso)
