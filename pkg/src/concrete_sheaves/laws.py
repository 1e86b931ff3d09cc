"""The invariant suite run by ``concrete-sheaves laws``.

Each law takes a site and a seed and returns a :class:`LawResult`.  Laws are
independent, so :func:`run_suite` may evaluate them in worker processes;
results are always reported in the order of :data:`LAWS`.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .constructions import (as_colimit_of_representables, colimit, concretize, limit,
                            mediating_counts_colimit, mediating_counts_limit, named_shape,
                            plus, sheafify)
from .errors import SheafError
from .generators import (random_concrete_presheaf, random_diagram, random_presheaf,
                         random_sheaf, random_triple, rng_for)
from .presheaf import (check_presheaf, compose_maps, enumerate_maps, is_concrete, is_iso,
                       is_sheaf, representable)
from .quasitopos import (SpaceOverBase, characteristic_map, curry, exponential_over_base,
                         fiber_product, is_strong_epi, is_strong_mono, map_over_base, omega,
                         quotient_structure, subspace_structure, uncurry)
from .site import covering_sieves, maximal_sieve, pullback_sieve


@dataclass
class LawResult:
    name: str
    ok: bool
    checked: int = 0
    witness: list = field(default_factory=list)

    def to_dict(self):
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "witness": self.witness}


def _fail(name, checked, *witness):
    return LawResult(name, False, checked, [str(w) for w in witness])


def law_site(site, seed):
    certs = site.certificates
    bad = sorted(k for k, v in certs.items() if not v["ok"])
    if bad:
        return _fail("site-certificates", len(certs), *bad)
    return LawResult("site-certificates", True, len(certs))


def law_topology(site, seed):
    """Maximal sieves cover; covering sieves are stable under pullback and intersection."""
    cat = site.category
    n = 0
    for d in cat.objects:
        covs = covering_sieves(site, d)
        members = {s.members for s in covs}
        n += 1
        if maximal_sieve(cat, d).members not in members:
            return _fail("topology", n, "maximal-not-covering", d)
        for s in covs:
            for f in cat.incoming(d):
                n += 1
                if pullback_sieve(site, f, s).members not in {
                        t.members for t in covering_sieves(site, cat.dom(f))}:
                    return _fail("topology", n, "pullback-not-covering", d, f)
            for t in covs:
                n += 1
                if (s.members & t.members) not in members:
                    return _fail("topology", n, "meet-not-covering", d)
    return LawResult("topology", True, n)


def law_representables(site, seed):
    cat = site.category
    for i, d in enumerate(cat.objects):
        y = representable(site, d)
        if not is_sheaf(site, y).ok or not is_concrete(y).ok:
            return _fail("representables", i + 1, d)
        if set(y.underlying_set) != set(site.points.underlying_sets[d]):
            return _fail("representables", i + 1, "points", d)
    return LawResult("representables", True, len(cat.objects))


def law_concretization(site, seed, n=25):
    """L X is concrete, L is idempotent, and maps LX -> Y match maps X -> Y for concrete Y."""
    rng = rng_for(f"concretize:{seed}")
    for i in range(n):
        x = random_presheaf(site, rng)
        y = random_concrete_presheaf(site, rng)
        if not check_presheaf(x).ok:
            return _fail("concretization", i, "presheaf-laws", i)
        res = concretize(x)
        lx = res.presheaf
        if not is_concrete(lx).ok or concretize(lx).presheaf.counts() != lx.counts():
            return _fail("concretization", i, "not-concrete", i)
        pulled = {compose_maps(g, res.quotient).key() for g in enumerate_maps(lx, y)}
        direct = {h.key() for h in enumerate_maps(x, y)}
        if pulled != direct:
            return _fail("concretization", i, "adjunction", i, len(pulled), len(direct))
    return LawResult("concretization", True, n)


def law_sheafification(site, seed, n=25):
    """Sheafification certifies, uses one plus step on separated input, fixes sheaves
    and is left adjoint to the inclusion."""
    rng = rng_for(f"sheafify:{seed}")
    for i in range(n):
        x = random_concrete_presheaf(site, rng)
        res = sheafify(site, x)
        if not is_sheaf(site, res.sheaf).ok or not is_concrete(res.sheaf).ok:
            return _fail("sheafification", i, "not-concrete-sheaf", i)
        once, _ = plus(site, x)
        if not is_sheaf(site, once).ok:
            return _fail("sheafification", i, "plus-once", i)
        s = random_sheaf(site, rng, max_points=2)
        pulled = {compose_maps(g, res.unit).key() for g in enumerate_maps(res.sheaf, s)}
        direct = {h.key() for h in enumerate_maps(x, s)}
        if pulled != direct:
            return _fail("sheafification", i, "adjunction", i)
        fixed = sheafify(site, s)
        if not is_iso(fixed.unit):
            return _fail("sheafification", i, "sheaf-not-fixed", i)
    return LawResult("sheafification", True, n)


def law_limits(site, seed, n=10):
    rng = rng_for(f"limits:{seed}")
    for i in range(n):
        d = random_diagram(site, rng, max_points=2)
        res = limit(site, d)
        if not is_sheaf(site, res.sheaf).ok or not is_concrete(res.sheaf).ok:
            return _fail("limits", i, "not-concrete-sheaf", i)
        apex = random_sheaf(site, rng, max_points=2)
        if any(c != 1 for c in mediating_counts_limit(res, apex)):
            return _fail("limits", i, "mediating", i)
        a, b = (random_sheaf(site, rng, max_points=2, name=k) for k in "AB")
        named_shape(site, "product", a, b)
        fs = enumerate_maps(a, b)
        if fs:
            named_shape(site, "equalizer", rng.choice(fs), rng.choice(fs))
    return LawResult("limits", True, n)


def law_colimits(site, seed, n=10):
    rng = rng_for(f"colimits:{seed}")
    for i in range(n):
        d = random_diagram(site, rng, max_points=2)
        res = colimit(site, d)
        if not is_sheaf(site, res.sheaf).ok or not is_concrete(res.sheaf).ok:
            return _fail("colimits", i, "not-concrete-sheaf", i)
        target = random_sheaf(site, rng, max_points=2)
        if any(c != 1 for c in mediating_counts_colimit(res, target)):
            return _fail("colimits", i, "mediating", i)
        a, b = (random_sheaf(site, rng, max_points=2, name=k) for k in "AB")
        named_shape(site, "coproduct", a, b)
        fs = enumerate_maps(a, b)
        if fs:
            named_shape(site, "coequalizer", rng.choice(fs), rng.choice(fs))
    return LawResult("colimits", True, n)


def law_omega(site, seed):
    om = omega(site)
    for d, k in om.sheaf.counts().items():
        if k != 2 ** len(site.points.underlying_sets[d]):
            return _fail("omega", 1, d, k)
    return LawResult("omega", True, len(site.category.objects))


def law_classifier(site, seed, n=5):
    rng = rng_for(f"classifier:{seed}")
    om = omega(site)
    checked = 0
    for i in range(n):
        x = random_sheaf(site, rng, max_points=3)
        pts = x.underlying_set
        for mask in range(2 ** len(pts)):
            subset = [p for k, p in enumerate(pts) if mask >> k & 1]
            sub = subspace_structure(site, x, subset)
            res = characteristic_map(site, sub.inclusion, om)
            checked += 1
            if res.qualifying_count != 1:
                return _fail("classifier", checked, x.name, subset, res.qualifying_count)
    return LawResult("classifier", True, checked)


def law_strong(site, seed, n=10):
    rng = rng_for(f"strong:{seed}")
    for i in range(n):
        x = random_sheaf(site, rng, max_points=3)
        pts = list(x.underlying_set)
        subset = rng.sample(pts, rng.randint(0, len(pts)))
        if not is_strong_mono(site, subspace_structure(site, x, subset).inclusion).ok:
            return _fail("strong", i, "subspace", subset)
        block = rng.sample(pts, min(2, len(pts)))
        q = quotient_structure(site, x, [block])
        if not is_strong_epi(site, q.projection).ok:
            return _fail("strong", i, "quotient", block)
    return LawResult("strong", True, n)


def law_exponentials(site, seed, n=5):
    """Currying is a bijection between maps over the base, in both directions."""
    rng = rng_for(f"exp:{seed}")
    for i in range(n):
        z, x, y = random_triple(site, rng, empty_fiber=(i == 0))
        exp = exponential_over_base(site, x, y)
        zx = fiber_product(site, z, x)
        zx_space = SpaceOverBase(zx.sheaf, z.base,
                                 compose_maps(z.projection, zx.maps["x"]))
        over = [f for f in enumerate_maps(zx.sheaf, y.total) if map_over_base(f, zx_space, y)]
        transposes = [g for g in enumerate_maps(z.total, exp.space.total)
                      if map_over_base(g, z, exp.space)]
        if len(over) != len(transposes):
            return _fail("exponentials", i, "counts", len(over), len(transposes))
        for f in over:
            g = curry(site, z, x, y, f, exp)
            if uncurry(site, z, x, y, g, exp, zx).key() != f.key():
                return _fail("exponentials", i, "round-trip", i)
    return LawResult("exponentials", True, n)


def law_representable_colimits(site, seed, n=5):
    rng = rng_for(f"elements:{seed}")
    for i in range(n):
        x = random_sheaf(site, rng, max_points=2)
        as_colimit_of_representables(site, x)
    return LawResult("representable-colimits", True, n)


LAWS = {
    "site-certificates": law_site,
    "topology": law_topology,
    "representables": law_representables,
    "concretization": law_concretization,
    "sheafification": law_sheafification,
    "limits": law_limits,
    "colimits": law_colimits,
    "omega": law_omega,
    "classifier": law_classifier,
    "strong": law_strong,
    "exponentials": law_exponentials,
    "representable-colimits": law_representable_colimits,
}


def run_law(site, name, seed):
    try:
        return LAWS[name](site, seed)
    except SheafError as exc:
        return _fail(name, 0, type(exc).__name__, exc)


def _worker(args):
    site_doc, site_name, name, seed = args
    from .workspace import site_from_dict

    site, _ = site_from_dict(site_doc, site_name)
    return run_law(site, name, seed)


def run_suite(site, seed=0, jobs=1, only=None):
    """Run the laws in ``only`` (default: all), in parallel when ``jobs > 1``."""
    names = [n for n in LAWS if only is None or n in only]
    if jobs <= 1:
        return [run_law(site, n, seed) for n in names]
    from .workspace import site_to_dict

    doc = site_to_dict(site)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_worker, [(doc, site.name, n, seed) for n in names]))
