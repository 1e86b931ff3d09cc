"""Finite categories given by explicit composition tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import NoTerminal, NotTerminal, SizeLimitExceeded, StructuralError

MAX_OBJECTS = 64
MAX_MORPHISMS = 4096


@dataclass(frozen=True)
class Issue:
    kind: str  # "structural" or "law"
    code: str
    message: str
    witness: tuple = ()

    def to_dict(self):
        return {"kind": self.kind, "code": self.code, "message": self.message,
                "witness": [list(w) if isinstance(w, (tuple, frozenset)) else w
                            for w in self.witness]}


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.issues

    def add(self, kind, code, message, *witness):
        self.issues.append(Issue(kind, code, message, tuple(witness)))

    def codes(self):
        return [i.code for i in self.issues]

    def extend(self, other):
        self.issues.extend(other.issues)

    def to_dict(self):
        return {"ok": self.ok, "issues": [i.to_dict() for i in self.issues]}

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Morphism:
    id: str
    dom: str
    cod: str


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category with every composite tabulated.

    ``composition[(g, f)]`` is ``g∘f`` and is present exactly when
    ``cod(f) == dom(g)``.  Use :meth:`build` to construct one; it checks
    identifiers and the size limits but not the category laws (see
    :func:`validate_category`).
    """

    objects: tuple
    morphisms: dict
    composition: dict
    identities: dict

    @classmethod
    def build(cls, objects, morphisms, composition, identities, *,
              max_objects=MAX_OBJECTS, max_morphisms=MAX_MORPHISMS):
        objects = tuple(sorted(set(objects)))
        if len(objects) > max_objects:
            raise SizeLimitExceeded(
                f"{len(objects)} objects exceeds the limit of {max_objects}")
        morphs = {}
        for m in morphisms:
            if not isinstance(m, Morphism):
                m = Morphism(*m) if isinstance(m, (tuple, list)) else Morphism(**m)
            if m.id in morphs:
                raise StructuralError(f"duplicate morphism id {m.id!r}")
            morphs[m.id] = m
        if len(morphs) > max_morphisms:
            raise SizeLimitExceeded(
                f"{len(morphs)} morphisms exceeds the limit of {max_morphisms}")
        if isinstance(composition, dict):
            comp = dict(composition)
        else:
            comp = {}
            for g, f, h in composition:
                if (g, f) in comp and comp[(g, f)] != h:
                    raise StructuralError(f"conflicting composites for ({g}, {f})")
                comp[(g, f)] = h
        return cls(objects, dict(sorted(morphs.items())), comp, dict(identities))

    def dom(self, f):
        return self.morphisms[f].dom

    def cod(self, f):
        return self.morphisms[f].cod

    def compose(self, g, f):
        """Return ``g∘f``."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise StructuralError(f"composite {g}∘{f} is not defined") from None

    def identity(self, obj):
        return self.identities[obj]

    @cached_property
    def _homs(self):
        homs = {(c, d): [] for c in self.objects for d in self.objects}
        for m in self.morphisms.values():
            homs.setdefault((m.dom, m.cod), []).append(m.id)
        return {k: tuple(v) for k, v in homs.items()}

    @cached_property
    def _incoming(self):
        inc = {d: [] for d in self.objects}
        for m in self.morphisms.values():
            inc.setdefault(m.cod, []).append(m.id)
        return {k: tuple(v) for k, v in inc.items()}

    def hom(self, c, d):
        return self._homs.get((c, d), ())

    def incoming(self, d):
        """All morphisms with codomain ``d``, sorted."""
        return self._incoming.get(d, ())


def hom_set(cat, c, d):
    for obj in (c, d):
        if obj not in cat.objects:
            raise StructuralError(f"unknown object {obj!r}")
    return frozenset(cat.hom(c, d))


def validate_category(cat):
    """Check references, identities, totality and associativity exhaustively."""
    report = ValidationReport()
    objs = set(cat.objects)
    for m in cat.morphisms.values():
        for end in (m.dom, m.cod):
            if end not in objs:
                report.add("structural", "unknown-object",
                           f"morphism {m.id} refers to unknown object {end}", m.id, end)
    for obj in cat.objects:
        if obj not in cat.identities:
            report.add("structural", "missing-identity",
                       f"object {obj} has no identity", obj)
    for obj, i in sorted(cat.identities.items()):
        if obj not in objs:
            report.add("structural", "unknown-object",
                       f"identity assigned to unknown object {obj}", obj)
        elif i not in cat.morphisms:
            report.add("structural", "unknown-morphism",
                       f"identity of {obj} is unknown morphism {i}", obj, i)
    for (g, f), h in sorted(cat.composition.items()):
        for x in (g, f, h):
            if x not in cat.morphisms:
                report.add("structural", "unknown-morphism",
                           f"composition entry ({g}, {f}) -> {h} uses unknown {x}",
                           g, f, h)
    if not report.ok:
        return report

    for obj, i in sorted(cat.identities.items()):
        m = cat.morphisms[i]
        if m.dom != obj or m.cod != obj:
            report.add("law", "identity-type",
                       f"identity {i} of {obj} is {m.dom}->{m.cod}", obj, i)

    morphs = list(cat.morphisms.values())
    for g, f in product(morphs, morphs):
        key = (g.id, f.id)
        if f.cod == g.dom:
            if key not in cat.composition:
                report.add("law", "missing-composite",
                           f"composite {g.id}∘{f.id} is missing", g.id, f.id)
            else:
                h = cat.morphisms[cat.composition[key]]
                if h.dom != f.dom or h.cod != g.cod:
                    report.add("law", "composite-type",
                               f"{g.id}∘{f.id} = {h.id} has the wrong type",
                               g.id, f.id, h.id)
        elif key in cat.composition:
            report.add("law", "spurious-composite",
                       f"composite {g.id}∘{f.id} given for a non-composable pair",
                       g.id, f.id)
    if not report.ok:
        return report

    for f in morphs:
        if cat.composition[(cat.identities[f.cod], f.id)] != f.id:
            report.add("law", "left-identity",
                       f"id∘{f.id} != {f.id}", cat.identities[f.cod], f.id)
        if cat.composition[(f.id, cat.identities[f.dom])] != f.id:
            report.add("law", "right-identity",
                       f"{f.id}∘id != {f.id}", f.id, cat.identities[f.dom])
    comp = cat.composition
    for f in morphs:
        for g in cat.morphisms.values():
            if g.dom != f.cod:
                continue
            gf = comp[(g.id, f.id)]
            for h in morphs:
                if h.dom != g.cod:
                    continue
                if comp[(h.id, gf)] != comp[(comp[(h.id, g.id)], f.id)]:
                    report.add("law", "associativity",
                               f"({h.id}∘{g.id})∘{f.id} != {h.id}∘({g.id}∘{f.id})",
                               h.id, g.id, f.id)
    return report


def is_terminal(cat, t):
    return all(len(cat.hom(c, t)) == 1 for c in cat.objects)


def find_terminal(cat):
    """The least object (in canonical order) receiving exactly one morphism from each object."""
    for t in cat.objects:
        if is_terminal(cat, t):
            return t
    raise NoTerminal("category has no terminal object")


@dataclass(frozen=True, eq=False)
class PointsData:
    terminal: str
    underlying_sets: dict      # object -> tuple of points (morphisms 1 -> D)
    underlying_functions: dict  # morphism -> {point: point}
    faithful: bool
    faithful_witness: tuple = ()


def points(cat, terminal):
    """Tabulate the points functor hom(1, -) and test its faithfulness."""
    if terminal not in cat.objects or not is_terminal(cat, terminal):
        raise NotTerminal(f"{terminal!r} is not a terminal object")
    sets = {d: cat.hom(terminal, d) for d in cat.objects}
    funcs = {}
    for f, m in cat.morphisms.items():
        funcs[f] = {p: cat.compose(f, p) for p in sets[m.dom]}
    witness = ()
    for c in cat.objects:
        for d in cat.objects:
            seen = {}
            for f in cat.hom(c, d):
                key = tuple(funcs[f][p] for p in sets[c])
                if key in seen:
                    witness = (seen[key], f)
                    break
                seen[key] = f
            if witness:
                break
        if witness:
            break
    return PointsData(terminal, sets, funcs, not witness, witness)
