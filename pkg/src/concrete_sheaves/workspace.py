"""JSON file formats and the artifact registry used by the command line.

Every file is a JSON object with a ``kind`` and a ``version`` field.  Files
written here are canonical: keys sorted, lists sorted, two-space indent,
UTF-8, trailing newline.  Loading a canonical file and saving it again
reproduces it byte for byte.

References between files are by name.  A name resolves to, in order: an
artifact already in the registry, a built-in site (``F1``..``F4``,
``F2sep``), or a sibling file ``<name>.json`` next to the referring file.
An artifact's name is the stem of its file.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

from .constructions import Diagram, validate_diagram
from .errors import (ParseError, SchemaError, SheafError, StructuralError,
                     ValidationError)
from .fincat import FinCategory, Morphism, ValidationReport, find_terminal, validate_category
from .presheaf import Presheaf, SheafMap, check_map, check_presheaf
from .quasitopos import SpaceOverBase
from .simplicial import MAX_N, SimplicialComplex, build_site_F, build_site_F2_sep, validate_complex
from .site import ConcreteSite, make_site

VERSION = 1
KINDS = ("site", "presheaf", "map", "complex", "diagram", "bundle")


def builtin_site(name):
    if name == "F2sep":
        return build_site_F2_sep()
    if len(name) == 2 and name[0] == "F" and name[1].isdigit() and 1 <= int(name[1]) <= MAX_N:
        return build_site_F(int(name[1]))
    return None


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sha256(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------- to JSON


def category_to_dict(cat):
    return {
        "objects": sorted(cat.objects),
        "morphisms": [{"id": m.id, "dom": m.dom, "cod": m.cod}
                      for _, m in sorted(cat.morphisms.items())],
        "identities": dict(sorted(cat.identities.items())),
        "compose": sorted([g, f, h] for (g, f), h in cat.composition.items()),
    }


def site_to_dict(site):
    if isinstance(site, FinCategory):
        out = category_to_dict(site)
        out["covers"] = {}
    else:
        out = category_to_dict(site.category)
        out["terminal"] = site.terminal
        out["covers"] = {d: sorted(sorted(fam.members) for fam in fams)
                         for d, fams in site.coverage.items()}
    out.update(kind="site", version=VERSION)
    return out


def presheaf_to_dict(x, site_name=None):
    return {
        "kind": "presheaf", "version": VERSION,
        "site": site_name or x.site.name,
        "plots": {d: sorted(xs) for d, xs in x.plots.items()},
        "restrict": [{"morphism": f, "map": dict(sorted(t.items()))}
                     for f, t in sorted(x.restrict.items())],
    }


def map_to_dict(f, source=None, target=None):
    return {
        "kind": "map", "version": VERSION,
        "source": source or f.source.name,
        "target": target or f.target.name,
        "components": {d: dict(sorted(c.items())) for d, c in sorted(f.components.items())},
    }


def complex_to_dict(k):
    return {"kind": "complex", "version": VERSION, "vertices": sorted(k.vertices),
            "simplices": sorted(sorted(s) for s in k.simplices)}


def diagram_to_dict(shape_name, nodes, edges):
    return {"kind": "diagram", "version": VERSION, "shape": shape_name,
            "nodes": dict(sorted(nodes.items())), "edges": dict(sorted(edges.items()))}


def bundle_to_dict(total, base, projection):
    return {"kind": "bundle", "version": VERSION, "total": total, "base": base,
            "projection": projection}


# ---------------------------------------------------------------- schema checks


def _expect(cond, where, what):
    if not cond:
        raise SchemaError(f"{where}: expected {what}")


def _is_str_list(v):
    return isinstance(v, list) and all(isinstance(s, str) for s in v)


def _is_str_map(v):
    return isinstance(v, dict) and all(isinstance(s, str) for s in v.values())


def check_schema(doc, kind=None):
    _expect(isinstance(doc, dict), "document", "a JSON object")
    _expect(doc.get("kind") in KINDS, "kind", f"one of {', '.join(KINDS)}")
    if kind is not None and doc["kind"] != kind:
        raise SchemaError(f"kind: expected {kind!r}, found {doc['kind']!r}")
    _expect(doc.get("version") == VERSION, "version", f"{VERSION}")
    k = doc["kind"]
    if k == "site":
        _expect(_is_str_list(doc.get("objects")), "objects", "a list of strings")
        ms = doc.get("morphisms")
        _expect(isinstance(ms, list), "morphisms", "a list")
        for i, m in enumerate(ms):
            _expect(isinstance(m, dict) and all(isinstance(m.get(x), str)
                                                for x in ("id", "dom", "cod")),
                    f"morphisms[{i}]", "an object with string id, dom, cod")
        _expect(_is_str_map(doc.get("identities")), "identities", "an object of strings")
        comp = doc.get("compose")
        _expect(isinstance(comp, list), "compose", "a list")
        for i, t in enumerate(comp):
            _expect(_is_str_list(t) and len(t) == 3, f"compose[{i}]", "a triple [g, f, gf]")
        _expect("terminal" not in doc or isinstance(doc["terminal"], str), "terminal", "a string")
        covers = doc.get("covers", {})
        _expect(isinstance(covers, dict), "covers", "an object")
        for d, fams in covers.items():
            _expect(isinstance(fams, list) and all(_is_str_list(f) for f in fams),
                    f"covers.{d}", "a list of lists of morphism ids")
    elif k == "presheaf":
        _expect(isinstance(doc.get("site"), str), "site", "a site name")
        plots = doc.get("plots")
        _expect(isinstance(plots, dict) and all(_is_str_list(v) for v in plots.values()),
                "plots", "an object of string lists")
        rs = doc.get("restrict")
        _expect(isinstance(rs, list), "restrict", "a list")
        for i, r in enumerate(rs):
            _expect(isinstance(r, dict) and isinstance(r.get("morphism"), str)
                    and _is_str_map(r.get("map")),
                    f"restrict[{i}]", "an object with morphism and map")
    elif k == "map":
        for key in ("source", "target"):
            _expect(isinstance(doc.get(key), str), key, "a presheaf name")
        comps = doc.get("components")
        _expect(isinstance(comps, dict) and all(_is_str_map(v) for v in comps.values()),
                "components", "an object of plot tables")
    elif k == "complex":
        _expect(_is_str_list(doc.get("vertices")), "vertices", "a list of strings")
        ss = doc.get("simplices")
        _expect(isinstance(ss, list) and all(_is_str_list(s) for s in ss),
                "simplices", "a list of vertex lists")
    elif k == "diagram":
        _expect(isinstance(doc.get("shape"), str), "shape", "a site name")
        _expect(_is_str_map(doc.get("nodes")), "nodes", "an object of presheaf names")
        _expect(_is_str_map(doc.get("edges", {})), "edges", "an object of map names")
    elif k == "bundle":
        for key in ("total", "base", "projection"):
            _expect(isinstance(doc.get(key), str), key, "an artifact name")
    return doc


def parse(text, where="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# ---------------------------------------------------------------- registry


@dataclass
class Artifact:
    name: str
    kind: str
    value: object
    path: str = None
    sha256: str = None
    report: ValidationReport = field(default_factory=ValidationReport)

    def provenance(self):
        return {"name": self.name, "kind": self.kind, "sha256": self.sha256}


class Workspace:
    """Named registry of loaded artifacts."""

    def __init__(self):
        self.artifacts = {}

    def __contains__(self, name):
        return name in self.artifacts

    def get(self, name, kind=None):
        art = self.artifacts[name]
        if kind is not None and art.kind != kind:
            raise SchemaError(f"{name!r} is a {art.kind}, not a {kind}")
        return art

    def _register(self, art):
        old = self.artifacts.get(art.name)
        if old is not None:
            if old.sha256 == art.sha256 and old.kind == art.kind:
                return old
            raise SchemaError(f"artifact name {art.name!r} is already registered")
        self.artifacts[art.name] = art
        return art

    def add(self, name, kind, value, report=None):
        """Register an in-memory artifact, hashed by its canonical serialization."""
        art = Artifact(name, kind, value, None, None, report or ValidationReport())
        return self._register(art)

    def load(self, path, kind=None):
        """Parse, check and register the file at ``path``; returns the artifact name."""
        return self._load(path, kind, strict=True).name

    def _load(self, path, kind, strict):
        name = os.path.splitext(os.path.basename(path))[0]
        if name in self.artifacts and self.artifacts[name].path == os.path.abspath(path):
            return self.artifacts[name]
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ParseError(f"{path}: {exc.strerror}") from None
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None
        doc = check_schema(parse(text, path), kind)
        base = os.path.dirname(os.path.abspath(path))
        value, report = self._build(doc, name, base, strict)
        art = Artifact(name, doc["kind"], value, os.path.abspath(path), sha256(raw), report)
        return self._register(art)

    def resolve(self, ref, kind, base_dir, strict=True):
        """Artifact for a reference found in a file under ``base_dir``."""
        if ref in self.artifacts:
            return self.get(ref, kind)
        if kind == "site":
            site = builtin_site(ref)
            if site is not None:
                art = Artifact(ref, "site", site, None, sha256(dumps(site_to_dict(site))),
                               site.report)
                return self._register(art)
        candidates = [ref] if ref.endswith(".json") else [ref + ".json"]
        for cand in candidates:
            path = cand if os.path.isabs(cand) else os.path.join(base_dir, cand)
            if os.path.exists(path):
                return self._load(path, kind, strict)
        raise SchemaError(f"unresolved reference {ref!r} (expected a {kind or 'file'})")

    # building values from checked documents

    def _build(self, doc, name, base, strict):
        k = doc["kind"]
        if k == "site":
            return self._build_site(doc, name, strict)
        if k == "presheaf":
            site = self.site(doc["site"], base)
            restrict = {}
            for r in doc["restrict"]:
                if r["morphism"] in restrict:
                    raise SchemaError(f"restrict: duplicate entry for {r['morphism']!r}")
                restrict[r["morphism"]] = r["map"]
            try:
                x = Presheaf.build(site, doc["plots"], restrict, name)
            except StructuralError as exc:
                raise SchemaError(str(exc)) from None
            report = check_presheaf(x)
            if not report.ok:
                raise ValidationError(f"{name}: presheaf laws fail", report)
            return x, report
        if k == "map":
            src = self.resolve(doc["source"], "presheaf", base).value
            tgt = self.resolve(doc["target"], "presheaf", base).value
            f = SheafMap(src, tgt, {d: dict(c) for d, c in doc["components"].items()})
            try:
                chk = check_map(f)
            except SheafError as exc:
                raise SchemaError(f"{name}: {exc}") from None
            report = ValidationReport()
            if not chk.natural:
                report.add("law", "not-natural", "map is not natural",
                           *chk.witnesses.get("natural", ()))
                raise ValidationError(f"{name}: map is not natural", report)
            return f, report
        if k == "complex":
            k_ = SimplicialComplex.build(doc["vertices"], doc["simplices"])
            report = validate_complex(k_)
            if not report.ok:
                raise ValidationError(f"{name}: not a simplicial complex", report)
            return k_, report
        if k == "diagram":
            shape = self.shape(doc["shape"], base)
            nodes = {o: self.resolve(r, "presheaf", base).value for o, r in doc["nodes"].items()}
            edges = {m: self.resolve(r, "map", base).value
                     for m, r in doc.get("edges", {}).items()}
            d = Diagram(shape, nodes, edges)
            try:
                validate_diagram(d)
            except SheafError as exc:
                report = ValidationReport()
                report.add("law", "not-a-functor", str(exc))
                raise ValidationError(f"{name}: {exc}", report) from None
            return d, ValidationReport()
        # bundle
        total = self.resolve(doc["total"], "presheaf", base).value
        b = self.resolve(doc["base"], "presheaf", base).value
        proj = self.resolve(doc["projection"], "map", base).value
        try:
            return SpaceOverBase(total, b, proj), ValidationReport()
        except SheafError as exc:
            raise ValidationError(f"{name}: {exc}", getattr(exc, "report", None)) from None

    def _build_site(self, doc, name, strict):
        return site_from_dict(doc, name, strict)

    def site(self, ref, base_dir="."):
        art = self.resolve(ref, "site", base_dir)
        if not isinstance(art.value, ConcreteSite) or not art.report.ok:
            raise ValidationError(f"{ref}: not a concrete site", art.report)
        return art.value

    def shape(self, ref, base_dir="."):
        art = self.resolve(ref, "site", base_dir, strict=False)
        return art.value.category if isinstance(art.value, ConcreteSite) else art.value

    def provenance(self):
        return [a.provenance() for _, a in sorted(self.artifacts.items())]


def save(doc, path):
    """Write ``doc`` canonically; returns the bytes written."""
    data = dumps(doc).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def site_from_dict(doc, name="site", strict=True):
    """Build a site from checked file contents; returns ``(value, report)``.

    ``value`` is a bare category when the file names no terminal object and
    none exists; such files serve as diagram shapes.  With ``strict`` any
    other law failure raises.
    """
    try:
        cat = FinCategory.build(doc["objects"], [Morphism(**m) for m in doc["morphisms"]],
                                doc["compose"], doc["identities"])
    except StructuralError as exc:
        raise SchemaError(f"{name}: {exc}") from None
    report = validate_category(cat)
    if not report.ok:
        raise ValidationError(f"{name}: category laws fail", report)
    terminal = doc.get("terminal")
    if terminal is None:
        try:
            terminal = find_terminal(cat)
        except SheafError:
            terminal = None
    if terminal is None:
        return cat, report
    try:
        site = make_site(cat, doc.get("covers", {}), terminal=terminal, name=name)
    except StructuralError as exc:
        raise SchemaError(f"{name}: {exc}") from None
    if strict:
        site.require_valid()
    return site, site.report
