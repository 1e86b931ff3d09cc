"""The finite-sets site and simplicial complexes as concrete sheaves on it.

Objects of ``F_n`` are ``"1", ..., "n"``; the object ``"m"`` stands for the
set ``{0, ..., m-1}``.  The function ``f: m -> k`` with values
``v_0 ... v_{m-1}`` has id ``"m>k:v_0...v_{m-1}"``, so hom(1, k) is
``"1>k:0", ..., "1>k:(k-1)"`` and points sort the same way as their values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import SizeLimitExceeded, StructuralError
from .fincat import FinCategory, Morphism, ValidationReport
from .presheaf import ConcreteSheaf, Presheaf, is_iso, map_from_point_function
from .site import make_site

MAX_N = 4


def morphism_id(m, k, values):
    return f"{m}>{k}:" + "".join(str(v) for v in values)


def _parse_morphism(mid):
    head, vals = mid.split(":")
    m, k = head.split(">")
    return int(m), int(k), tuple(int(c) for c in vals)


def inclusions(m, k):
    """Order-preserving injections m -> k, one per m-element subset of k."""
    return [morphism_id(m, k, s) for s in combinations(range(k), m)]


def build_site_F(n, *, max_n=MAX_N, extra_covers=None, name=None):
    """Nonempty sets of size 1..n with all functions; each object covered by its inclusions."""
    if n < 1:
        raise StructuralError("n must be at least 1")
    if n > max_n:
        raise SizeLimitExceeded(f"F_{n} exceeds the configured maximum n = {max_n}")
    objects = [str(m) for m in range(1, n + 1)]
    funcs = {}
    for m in range(1, n + 1):
        for k in range(1, n + 1):
            for vals in product(range(k), repeat=m):
                funcs[morphism_id(m, k, vals)] = (m, k, vals)
    morphisms = [Morphism(fid, str(m), str(k)) for fid, (m, k, _) in funcs.items()]
    composition = {}
    for f, (m, k, fv) in funcs.items():
        for g, (k2, j, gv) in funcs.items():
            if k2 == k:
                composition[(g, f)] = morphism_id(m, j, tuple(gv[v] for v in fv))
    identities = {str(m): morphism_id(m, m, range(m)) for m in range(1, n + 1)}
    cat = FinCategory.build(objects, morphisms, composition, identities)
    covers = {str(k): [[f for m in range(1, k + 1) for f in inclusions(m, k)]]
              for k in range(1, n + 1)}
    for d, fams in (extra_covers or {}).items():
        covers.setdefault(d, []).extend(fams)
    return make_site(cat, covers, terminal="1", name=name or f"F{n}")


def build_site_F2_sep():
    """F_2 with an extra cover of 2 by its two points."""
    return build_site_F(2, extra_covers={"2": [["1>2:0", "1>2:1"]]}, name="F2sep")


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    simplices: frozenset  # of frozensets

    @classmethod
    def build(cls, vertices, simplices):
        return cls(tuple(sorted(set(vertices))), frozenset(frozenset(s) for s in simplices))

    def sorted_simplices(self):
        return sorted((tuple(sorted(s)) for s in self.simplices), key=lambda s: (len(s), s))

    def dimension_bound(self):
        return max((len(s) for s in self.simplices), default=0)


def validate_complex(k):
    report = ValidationReport()
    verts = set(k.vertices)
    for s in sorted(k.sorted_simplices()):
        if not s:
            report.add("law", "empty-simplex", "the empty set is not a simplex")
        for v in s:
            if v not in verts:
                report.add("structural", "unknown-vertex", f"simplex {s} uses unknown vertex {v}",
                           s, v)
    if not report.ok:
        return report
    for v in k.vertices:
        if frozenset([v]) not in k.simplices:
            report.add("law", "missing-singleton", f"singleton {{{v}}} is not a simplex",
                       (v,))
    # missing vertices were reported above; only larger faces are checked here
    for s in k.sorted_simplices():
        for r in range(2, len(s)):
            for t in combinations(s, r):
                if frozenset(t) not in k.simplices:
                    report.add("law", "not-downward-closed",
                               f"face {t} of {s} is not a simplex", t, s)
    return report


def plot_name(values):
    return values[0] if len(values) == 1 else "(" + ",".join(values) + ")"


def complex_to_sheaf(k, n=None, site=None, name=None):
    """Plots over ``m`` are the functions ``m -> vertices`` whose image is a simplex."""
    if n is None:
        n = site.category.objects[-1] if site is not None else max(k.dimension_bound(), 1)
    n = int(n)
    if k.dimension_bound() > n:
        raise SizeLimitExceeded(f"a simplex has {k.dimension_bound()} vertices but n = {n}")
    site = site or build_site_F(n)
    cat = site.category
    plots, funcs = {}, {}
    for d in cat.objects:
        m = int(d)
        good = [vals for vals in product(k.vertices, repeat=m)
                if frozenset(vals) in k.simplices]
        names = {vals: plot_name(vals) for vals in good}
        funcs[d] = names
        plots[d] = list(names.values())
    restrict = {}
    for f in cat.morphisms:
        m, kk, fv = _parse_morphism(f)
        restrict[f] = {funcs[str(kk)][vals]: funcs[str(m)][tuple(vals[i] for i in fv)]
                       for vals in funcs[str(kk)]}
    x = Presheaf.build(site, plots, restrict, name or "K")
    return ConcreteSheaf.certify(site, x)


def sheaf_to_complex(x):
    """Vertices are the points; simplices are the images of plots."""
    simplices = set()
    for d, table in x.underlying_table.items():
        for vals in table.values():
            simplices.add(frozenset(vals))
    return SimplicialComplex.build(x.underlying_set, simplices)


def complex_maps(k, l):
    """Vertex functions sending simplices to simplices, as sorted tuples of pairs."""
    out = []
    for vals in product(l.vertices, repeat=len(k.vertices)):
        f = dict(zip(k.vertices, vals))
        if all(frozenset(f[v] for v in s) in l.simplices for s in k.simplices):
            out.append(tuple(zip(k.vertices, vals)))
    return out


def map_to_complex_map(f):
    return tuple(sorted(f.point_function.items()))


def complex_map_to_map(x, y, cmap):
    return map_from_point_function(x, y, dict(cmap))


@dataclass(frozen=True)
class RoundTrip:
    ok: bool
    detail: dict


def equivalence_roundtrip(obj, n=None, site=None):
    """Complex -> sheaf -> complex is an equality; sheaf -> complex -> sheaf an isomorphism."""
    if isinstance(obj, SimplicialComplex):
        x = complex_to_sheaf(obj, n=n, site=site)
        back = sheaf_to_complex(x)
        return RoundTrip(back == obj, {"direction": "complex", "plot_counts": x.counts(),
                                       "complex": back})
    k = sheaf_to_complex(obj)
    y = complex_to_sheaf(k, site=obj.site)
    iso = map_from_point_function(obj, y, {p: p for p in obj.underlying_set})
    ok = iso is not None and is_iso(iso)
    return RoundTrip(ok, {"direction": "sheaf", "complex": k, "iso": iso})


# fixtures used across tests, the CLI and the laws suite

def edge_complex():
    return SimplicialComplex.build("ab", [{"a"}, {"b"}, {"a", "b"}])


def point_complex(v="a"):
    return SimplicialComplex.build([v], [{v}])


def two_points_complex():
    return SimplicialComplex.build("ab", [{"a"}, {"b"}])


def triangle_boundary():
    return SimplicialComplex.build("abc", [{"a"}, {"b"}, {"c"},
                                           {"a", "b"}, {"b", "c"}, {"a", "c"}])
