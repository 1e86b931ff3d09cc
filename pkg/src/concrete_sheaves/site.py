"""Coverages, sieves, the generated Grothendieck topology and concrete-site checks."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property

from .errors import SieveExplosion, StructuralError, SubcanonicityViolation, ValidationError
from .fincat import ValidationReport, find_terminal, points, validate_category

MAX_SIEVES = 2 ** 16


@dataclass(frozen=True)
class CoveringFamily:
    codomain: str
    members: frozenset

    def sorted_members(self):
        return tuple(sorted(self.members))


@dataclass(frozen=True)
class Sieve:
    codomain: str
    members: frozenset

    def sort_key(self):
        return (len(self.members), tuple(sorted(self.members)))

    def __contains__(self, f):
        return f in self.members

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True, eq=False)
class ConcreteSite:
    """A finite category with a coverage and a designated terminal object.

    Construction does not validate; call :func:`validate_concrete_site` or
    :meth:`require_valid`.
    """

    category: object
    coverage: dict
    terminal: str
    name: str = "site"
    max_sieves: int = MAX_SIEVES

    @cached_property
    def points(self):
        return points(self.category, self.terminal)

    def families(self, d):
        return self.coverage.get(d, ())

    @cached_property
    def report(self):
        return validate_concrete_site(self)

    @cached_property
    def certificates(self):
        return _certificates(self.report)

    def require_valid(self):
        if not self.report.ok:
            raise ValidationError(f"site {self.name!r} is not a valid concrete site",
                                  self.report)
        return self

    # sieve machinery, memoised per site

    @cached_property
    def _lock(self):
        return threading.Lock()

    @cached_property
    def _sieve_cache(self):
        return {}

    def all_sieves(self, d):
        with self._lock:
            cached = self._sieve_cache.get(d)
        if cached is None:
            cached = _enumerate_sieves(self, d)
            with self._lock:
                cached = self._sieve_cache.setdefault(d, cached)
        return cached

    @cached_property
    def topology(self):
        return _saturate(self)


def make_site(category, covers, terminal=None, name="site", max_sieves=MAX_SIEVES):
    """Build a site from ``covers``: object -> iterable of iterables of morphism ids."""
    if terminal is None:
        terminal = find_terminal(category)
    coverage = {}
    for d, fams in covers.items():
        seen = []
        for fam in fams:
            cf = CoveringFamily(d, frozenset(fam))
            if cf not in seen:
                seen.append(cf)
        coverage[d] = tuple(sorted(seen, key=lambda c: (len(c.members), c.sorted_members())))
    return ConcreteSite(category, dict(sorted(coverage.items())), terminal, name, max_sieves)


def principal_sieve(cat, f):
    return frozenset(cat.compose(f, g) for g in cat.incoming(cat.dom(f)))


def generated_sieve(cat, d, members):
    out = set()
    for f in members:
        if cat.cod(f) != d:
            raise StructuralError(f"morphism {f} does not have codomain {d}")
        out |= principal_sieve(cat, f)
    return Sieve(d, frozenset(out))


def maximal_sieve(cat, d):
    return Sieve(d, frozenset(cat.incoming(d)))


def is_sieve(cat, d, members):
    for f in members:
        if cat.cod(f) != d:
            return False
        for g in cat.incoming(cat.dom(f)):
            if cat.compose(f, g) not in members:
                return False
    return True


def pullback_sieve(site, f, sieve):
    """``f*R = {g : f∘g ∈ R}`` for ``f: C -> D`` and a sieve ``R`` on ``D``."""
    cat = site.category if isinstance(site, ConcreteSite) else site
    if cat.cod(f) != sieve.codomain:
        raise StructuralError(
            f"cannot pull back a sieve on {sieve.codomain} along {f}: {cat.dom(f)}->{cat.cod(f)}")
    c = cat.dom(f)
    out = Sieve(c, frozenset(g for g in cat.incoming(c) if cat.compose(f, g) in sieve.members))
    assert is_sieve(cat, c, out.members)
    return out


def _enumerate_sieves(site, d):
    # every sieve is a union of principal sieves
    cat = site.category
    principals = sorted({principal_sieve(cat, f) for f in cat.incoming(d)},
                        key=lambda s: (len(s), sorted(s)))
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for s in frontier:
            for p in principals:
                if p <= s:
                    continue
                u = s | p
                if u not in found:
                    found.add(u)
                    nxt.append(u)
                    if len(found) > site.max_sieves:
                        raise SieveExplosion(
                            f"more than {site.max_sieves} sieves on object {d}")
        frontier = nxt
    return tuple(sorted((Sieve(d, s) for s in found), key=Sieve.sort_key))


def _saturate(site):
    cat = site.category
    covering = {d: set() for d in cat.objects}
    for d in cat.objects:
        covering[d].add(frozenset(cat.incoming(d)))
        for fam in site.families(d):
            gen = generated_sieve(cat, d, fam.members).members
            for s in site.all_sieves(d):
                if gen <= s.members:
                    covering[d].add(s.members)
    changed = True
    while changed:
        changed = False
        for d in cat.objects:
            for r in list(covering[d]):
                rs = Sieve(d, r)
                for f in cat.incoming(d):
                    pb = pullback_sieve(cat, f, rs).members
                    c = cat.dom(f)
                    if pb not in covering[c]:
                        covering[c].add(pb)
                        changed = True
        for d in cat.objects:
            for s in site.all_sieves(d):
                if s.members in covering[d]:
                    continue
                for r in sorted(covering[d], key=lambda m: (len(m), sorted(m))):
                    if all(pullback_sieve(cat, f, s).members in covering[cat.dom(f)]
                           for f in r):
                        covering[d].add(s.members)
                        changed = True
                        break
    return {d: tuple(sorted((Sieve(d, m) for m in covering[d]), key=Sieve.sort_key))
            for d in cat.objects}


def covering_sieves(site, d):
    """Covering sieves on ``d`` in the Grothendieck topology generated by the coverage."""
    if d not in site.category.objects:
        raise StructuralError(f"unknown object {d!r}")
    return site.topology[d]


def is_covering(site, sieve):
    return sieve.members in {s.members for s in site.topology[sieve.codomain]}


def topologies_equal(site_a, site_b):
    """True when two coverages on the same category generate the same topology."""
    if site_a.category.objects != site_b.category.objects:
        return False
    ta, tb = site_a.topology, site_b.topology
    return all({s.members for s in ta[d]} == {s.members for s in tb[d]} for d in ta)


def validate_concrete_site(site):
    """Check the category laws and the four concrete-site certificates."""
    cat = site.category
    report = validate_category(cat)
    if not report.ok:
        return report
    if site.terminal not in cat.objects or any(
            len(cat.hom(c, site.terminal)) != 1 for c in cat.objects):
        report.add("law", "terminal", f"{site.terminal} is not terminal", site.terminal)
        return report
    for d, fams in site.coverage.items():
        if d not in cat.objects:
            report.add("structural", "unknown-object", f"cover on unknown object {d}", d)
            continue
        for fam in fams:
            if not fam.members:
                report.add("structural", "empty-family", f"empty covering family on {d}", d)
            for f in fam.sorted_members():
                if f not in cat.morphisms:
                    report.add("structural", "unknown-morphism",
                               f"covering family on {d} uses unknown morphism {f}", d, f)
                elif cat.cod(f) != d:
                    report.add("structural", "family-codomain",
                               f"member {f} of a family on {d} has codomain {cat.cod(f)}", d, f)
    if not report.ok:
        return report

    # coverage axiom
    for d, fams in site.coverage.items():
        for fam in fams:
            gen = generated_sieve(cat, d, fam.members).members
            for g in cat.incoming(d):
                c = cat.dom(g)
                if not any(all(cat.compose(g, h) in gen for h in fam2.members)
                           for fam2 in site.families(c)):
                    report.add("law", "coverage-axiom",
                               f"pulling back the family {fam.sorted_members()} on {d} "
                               f"along {g} has no covering family on {c}",
                               d, fam.sorted_members(), g)
                    break

    pts = site.points
    for d, fams in site.coverage.items():
        for fam in fams:
            hit = set()
            for f in fam.members:
                hit.update(pts.underlying_functions[f].values())
            missing = [p for p in pts.underlying_sets[d] if p not in hit]
            if missing:
                report.add("law", "jointly-surjective",
                           f"family {fam.sorted_members()} on {d} misses point {missing[0]}",
                           d, fam.sorted_members(), missing[0])

    if not pts.faithful:
        f, g = pts.faithful_witness
        report.add("law", "faithful",
                   f"morphisms {f} and {g} have the same underlying function", f, g)

    from .presheaf import is_sheaf, representable

    for d in cat.objects:
        res = is_sheaf(site, representable(site, d))
        if not res.ok:
            report.add("law", "subcanonical",
                       f"representable at {d} is not a sheaf", d, *res.witness)
    return report


_CERT_CODES = {
    "coverage_axiom": ("coverage-axiom",),
    "jointly_surjective": ("jointly-surjective",),
    "faithful": ("faithful",),
    "subcanonical": ("subcanonical",),
}


def _certificates(report):
    blocked = any(i.kind == "structural" or i.code in (
        "terminal", "identity-type", "missing-composite", "composite-type", "spurious-composite",
        "left-identity", "right-identity", "associativity", "missing-identity")
        for i in report.issues)
    out = {}
    for name, codes in _CERT_CODES.items():
        hits = [i for i in report.issues if i.code in codes]
        if blocked:
            out[name] = {"ok": False, "witness": ["site failed basic validation"]}
        else:
            out[name] = {"ok": not hits,
                         "witness": list(hits[0].to_dict()["witness"]) if hits else []}
    return out


def representable_sheaf(site, d):
    """hom(-, d) certified as a concrete sheaf."""
    from .presheaf import ConcreteSheaf, representable

    x = representable(site, d)
    try:
        return ConcreteSheaf.certify(site, x)
    except ValidationError as exc:
        raise SubcanonicityViolation(f"representable at {d} is not a concrete sheaf") from exc
