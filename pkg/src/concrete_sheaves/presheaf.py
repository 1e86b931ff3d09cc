"""Presheaves, concrete sheaves and maps between them, as finite tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import kernels
from .errors import ShapeMismatch, StructuralError, ValidationError
from .fincat import ValidationReport
from .site import ConcreteSite, CoveringFamily, Sieve, generated_sieve


def category_of(site):
    return site.category if isinstance(site, ConcreteSite) else site


@dataclass(frozen=True)
class Verdict:
    """Outcome of a yes/no check together with the least failing witness."""

    ok: bool
    code: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class Presheaf:
    site: object
    plots: dict     # object -> sorted tuple of plot ids
    restrict: dict  # morphism f: C -> D -> {plot in X(D): plot in X(C)}
    name: str = "X"

    @classmethod
    def build(cls, site, plots, restrict, name="X"):
        cat = category_of(site)
        ps = {d: tuple(sorted(set(plots.get(d, ())))) for d in cat.objects}
        for d, xs in plots.items():
            if d not in cat.objects:
                raise StructuralError(f"plots given for unknown object {d!r}")
            if len(set(xs)) != len(xs):
                raise StructuralError(f"duplicate plot ids over object {d!r}")
        rs = {}
        for f in cat.morphisms:
            rs[f] = dict(sorted(restrict.get(f, {}).items()))
        for f in restrict:
            if f not in cat.morphisms:
                raise StructuralError(f"restriction given for unknown morphism {f!r}")
        return cls(site, ps, rs, name)

    @property
    def category(self):
        return category_of(self.site)

    def act(self, f, x):
        """X(f)(x)."""
        return self.restrict[f][x]

    @cached_property
    def index(self):
        return {d: {x: i for i, x in enumerate(xs)} for d, xs in self.plots.items()}

    def size(self, d):
        return len(self.plots[d])

    def counts(self):
        return {d: len(xs) for d, xs in self.plots.items()}

    @property
    def underlying_set(self):
        return self.plots[self.site.terminal]

    @cached_property
    def underlying_table(self):
        """object -> {plot: tuple of points}, aligned with the site's underlying set of the object."""
        pts = self.site.points
        out = {}
        for d, xs in self.plots.items():
            ds = pts.underlying_sets[d]
            out[d] = {x: tuple(self.restrict[p][x] for p in ds) for x in xs}
        return out

    @cached_property
    def plot_by_function(self):
        """object -> {underlying tuple: plot}; the least plot wins on ties."""
        out = {}
        for d, table in self.underlying_table.items():
            inv = {}
            for x in self.plots[d]:
                inv.setdefault(table[x], x)
            out[d] = inv
        return out

    def with_name(self, name):
        return Presheaf(self.site, self.plots, self.restrict, name)


@dataclass(frozen=True, eq=False)
class ConcreteSheaf(Presheaf):
    certificates: dict = field(default_factory=dict)

    @classmethod
    def certify(cls, site, x, name=None):
        report = ValidationReport()
        pre = check_presheaf(x)
        report.extend(pre)
        certs = {}
        if pre.ok:
            sh = is_sheaf(site, x)
            co = is_concrete(x)
            certs = {"sheaf": {"ok": sh.ok, "code": sh.code, "witness": list(sh.witness)},
                     "concrete": {"ok": co.ok, "code": co.code, "witness": list(co.witness)}}
            if not sh.ok:
                report.add("law", sh.code, "sheaf condition fails", *sh.witness)
            if not co.ok:
                report.add("law", co.code, "presheaf is not concrete", *co.witness)
        if not report.ok:
            raise ValidationError(f"{x.name} is not a concrete sheaf", report)
        return cls(site, x.plots, x.restrict, name or x.name, certs)

    def with_name(self, name):
        return ConcreteSheaf(self.site, self.plots, self.restrict, name, self.certificates)


def same_presheaf(x, y):
    return x.plots == y.plots and x.restrict == y.restrict


def check_presheaf(x):
    """Exhaustively check totality and both functoriality laws."""
    cat = x.category
    report = ValidationReport()
    for f, m in cat.morphisms.items():
        table = x.restrict.get(f)
        if table is None:
            report.add("structural", "missing-restriction", f"no restriction for {f}", f)
            continue
        src, dst = set(x.plots[m.cod]), set(x.plots[m.dom])
        for p in x.plots[m.cod]:
            if p not in table:
                report.add("structural", "missing-restriction",
                           f"X({f}) undefined on {p}", f, p)
            elif table[p] not in dst:
                report.add("structural", "dangling-plot",
                           f"X({f})({p}) = {table[p]} is not a plot over {m.dom}", f, p, table[p])
        for p in table:
            if p not in src:
                report.add("structural", "dangling-plot",
                           f"X({f}) defined on unknown plot {p}", f, p)
    if not report.ok:
        return report
    for d in cat.objects:
        i = cat.identity(d)
        for p in x.plots[d]:
            if x.restrict[i][p] != p:
                report.add("law", "identity", f"X(id_{d})({p}) != {p}", d, p)
    for (g, f), h in sorted(cat.composition.items()):
        # X(g∘f) = X(f)∘X(g)
        rg, rf, rh = x.restrict[g], x.restrict[f], x.restrict[h]
        for p in x.plots[cat.cod(g)]:
            if rh[p] != rf[rg[p]]:
                report.add("law", "composition",
                           f"X({g}∘{f})({p}) != X({f})(X({g})({p}))", g, f, p)
    return report


def representable(site, d, name=None):
    """The presheaf hom(-, d) acting by precomposition."""
    cat = category_of(site)
    if d not in cat.objects:
        raise StructuralError(f"unknown object {d!r}")
    plots = {c: cat.hom(c, d) for c in cat.objects}
    restrict = {}
    for f, m in cat.morphisms.items():
        restrict[f] = {g: cat.compose(g, f) for g in plots[m.cod]}
    return Presheaf.build(site, plots, restrict, name or f"y({d})")


def terminal_presheaf(site, name="1", plot="*"):
    cat = category_of(site)
    return Presheaf.build(site, {d: (plot,) for d in cat.objects},
                          {f: {plot: plot} for f in cat.morphisms}, name)


def empty_presheaf(site, name="0"):
    cat = category_of(site)
    return Presheaf.build(site, {d: () for d in cat.objects},
                          {f: {} for f in cat.morphisms}, name)


def plot_underlying(x, d, phi):
    """The function u(D) -> u(X), ``p ↦ X(p)(φ)``."""
    if phi not in x.index.get(d, {}):
        raise StructuralError(f"{phi!r} is not a plot of {x.name} over {d!r}")
    pts = x.site.points.underlying_sets[d]
    return {p: x.restrict[p][phi] for p in pts}


def is_concrete(x):
    for d in x.category.objects:
        seen = {}
        table = x.underlying_table[d]
        for p in x.plots[d]:
            key = table[p]
            if key in seen:
                return Verdict(False, "not-concrete", (d, seen[key], p))
            seen[key] = p
    return Verdict(True)


# compatible families -------------------------------------------------------

@dataclass(frozen=True)
class CompatibleFamily:
    family: object  # Sieve or CoveringFamily
    assignment: tuple  # sorted ((member, plot), ...)

    def as_dict(self):
        return dict(self.assignment)


def _sieve_solutions(x, sieve):
    """Compatible families on a sieve as tuples aligned with its sorted members."""
    cat = x.category
    members = sorted(sieve.members)
    pos = {f: i for i, f in enumerate(members)}
    sizes = [x.size(cat.dom(f)) for f in members]
    constraints = []
    for f in members:
        c = cat.dom(f)
        for g in cat.incoming(c):
            if g == cat.identity(c):
                continue
            fg = cat.compose(f, g)
            idx = x.index[cat.dom(g)]
            table = [idx[x.restrict[g][p]] for p in x.plots[c]]
            constraints.append((pos[f], pos[fg], table))
    sols = kernels.solve_functional(sizes, constraints)
    return members, [tuple(x.plots[cat.dom(members[i])][v] for i, v in enumerate(s))
                     for s in sols]


def compatible_families(site, x, family):
    """All compatible families of plots of ``x`` over a sieve or covering family."""
    cat = x.category
    if isinstance(family, CoveringFamily):
        sieve = generated_sieve(cat, family.codomain, family.members)
        members, sols = _sieve_solutions(x, sieve)
        keep = [i for i, f in enumerate(members) if f in family.members]
        out = {tuple((members[i], s[i]) for i in keep) for s in sols}
        return [CompatibleFamily(family, a) for a in sorted(out)]
    if isinstance(family, Sieve):
        members, sols = _sieve_solutions(x, family)
        return [CompatibleFamily(family, tuple(zip(members, s))) for s in sols]
    raise TypeError("expected a Sieve or a CoveringFamily")


def _gluing_check(site, x, uniqueness_only):
    cat = x.category
    for d in cat.objects:
        for fam in site.families(d):
            sieve = generated_sieve(cat, d, fam.members)
            members, sols = _sieve_solutions(x, sieve)
            glue = {}
            for p in x.plots[d]:
                key = tuple(x.restrict[f][p] for f in members)
                glue.setdefault(key, []).append(p)
            keep = [i for i, f in enumerate(members) if f in fam.members]
            for s in sols:
                found = glue.get(s, [])
                restricted = tuple((members[i], s[i]) for i in keep)
                if len(found) > 1:
                    return Verdict(False, "non-unique-gluing",
                                   (d, fam.sorted_members(), restricted, tuple(found[:2])))
                if not found and not uniqueness_only:
                    return Verdict(False, "no-gluing", (d, fam.sorted_members(), restricted))
    return Verdict(True)


def is_sheaf(site, x):
    """Every compatible family over every covering family glues uniquely."""
    return _gluing_check(site, x, uniqueness_only=False)


def is_separated(site, x):
    """Gluings, where they exist, are unique."""
    return _gluing_check(site, x, uniqueness_only=True)


# maps ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SheafMap:
    source: Presheaf
    target: Presheaf
    components: dict  # object -> {plot: plot}

    def __call__(self, d, p):
        return self.components[d][p]

    @property
    def point_function(self):
        return self.components[self.source.site.terminal]

    def key(self):
        cat = self.source.category
        return tuple(tuple(self.components[d][p] for p in self.source.plots[d])
                     for d in cat.objects)

    def __eq__(self, other):
        return (isinstance(other, SheafMap)
                and (self.source is other.source or same_presheaf(self.source, other.source))
                and (self.target is other.target or same_presheaf(self.target, other.target))
                and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())


@dataclass(frozen=True)
class MapCheck:
    natural: bool
    mono: bool
    epi: bool
    witnesses: dict

    def to_dict(self):
        return {"natural": self.natural, "mono": self.mono, "epi": self.epi,
                "witnesses": {k: list(v) for k, v in self.witnesses.items()}}


def identity_map(x):
    return SheafMap(x, x, {d: {p: p for p in xs} for d, xs in x.plots.items()})


def compose_maps(g, f):
    """``g∘f`` for ``f: X -> Y`` and ``g: Y -> Z``."""
    comps = {d: {p: g.components[d][q] for p, q in f.components[d].items()}
             for d in f.source.plots}
    return SheafMap(f.source, g.target, comps)


def check_map(f):
    cat = f.source.category
    for d in cat.objects:
        comp = f.components.get(d)
        if comp is None or set(comp) != set(f.source.plots[d]):
            raise ShapeMismatch(f"component at {d!r} is missing or partial")
        for p, q in comp.items():
            if q not in f.target.index[d]:
                raise ShapeMismatch(f"component at {d!r} sends {p} to non-plot {q}")
    witnesses = {}
    natural = True
    for m, mor in cat.morphisms.items():
        c, d = mor.dom, mor.cod
        for p in f.source.plots[d]:
            if f.components[c][f.source.restrict[m][p]] != f.target.restrict[m][f.components[d][p]]:
                natural = False
                witnesses["natural"] = (m, p)
                break
        if not natural:
            break
    pf = f.point_function
    seen = {}
    mono = True
    for p in f.source.underlying_set:
        q = pf[p]
        if q in seen:
            mono = False
            witnesses["mono"] = (seen[q], p)
            break
        seen[q] = p
    image = set(pf.values())
    missing = [q for q in f.target.underlying_set if q not in image]
    epi = not missing
    if missing:
        witnesses["epi"] = (missing[0],)
    return MapCheck(natural, mono, epi, witnesses)


def is_natural(f):
    try:
        return check_map(f).natural
    except ShapeMismatch:
        return False


def _map_problem(x, y):
    cat = x.category
    terminal = getattr(x.site, "terminal", None)
    order = sorted(cat.objects, key=lambda d: (d != terminal, len(x.plots[d]), d))
    var = {}
    sizes = []
    for d in order:
        for p in x.plots[d]:
            var[(d, p)] = len(sizes)
            sizes.append(len(y.plots[d]))
    constraints = []
    for m, mor in cat.morphisms.items():
        c, d = mor.dom, mor.cod
        if m == cat.identity(d):
            continue
        yidx = y.index[c]
        table = [yidx[y.restrict[m][q]] for q in y.plots[d]]
        for p in x.plots[d]:
            constraints.append((var[(d, p)], var[(c, x.restrict[m][p])], table))
    return var, sizes, constraints


def enumerate_maps(x, y, limit=-1):
    """All natural transformations ``x -> y`` in a deterministic order."""
    var, sizes, constraints = _map_problem(x, y)
    out = []
    for sol in kernels.solve_functional(sizes, constraints, limit):
        comps = {d: {} for d in x.plots}
        for (d, p), i in var.items():
            comps[d][p] = y.plots[d][sol[i]]
        out.append(SheafMap(x, y, comps))
    return out


def count_maps(x, y):
    var, sizes, constraints = _map_problem(x, y)
    return len(kernels.solve_functional(sizes, constraints))


def map_from_point_function(x, y, func):
    """The unique map with point function ``func`` into a concrete ``y``, or None."""
    comps = {}
    for d in x.category.objects:
        inv = y.plot_by_function[d]
        table = x.underlying_table[d]
        comp = {}
        for p in x.plots[d]:
            try:
                target = tuple(func[q] for q in table[p])
            except KeyError:
                return None
            q = inv.get(target)
            if q is None:
                return None
            comp[p] = q
        comps[d] = comp
    f = SheafMap(x, y, comps)
    return f if check_map(f).natural else None


def is_iso(f):
    return all(len(set(comp.values())) == len(comp) == len(f.target.plots[d])
               for d, comp in f.components.items())


def inverse_map(f):
    return SheafMap(f.target, f.source,
                    {d: {q: p for p, q in comp.items()} for d, comp in f.components.items()})
