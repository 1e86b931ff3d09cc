"""Command line front end.

Every command prints one JSON report on standard output and exits with 0 on
success, 1 when a law or checked property fails (the report carries the
witness) and 2 on usage, parse or schema errors.  Logs go to standard error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import kernels
from .constructions import (SHAPES, colimit, concretize, is_separated, limit, named_shape, plus,
                            sheafify)
from .errors import ParseError, SchemaError, SheafError, UnknownPoint, ValidationError
from .laws import LAWS, run_suite
from .presheaf import (ConcreteSheaf, SheafMap, check_map, compose_maps, enumerate_maps,
                       is_concrete, is_sheaf)
from .quasitopos import (SpaceOverBase, characteristic_map, curry, exponential_over_base,
                         fiber_product, is_strong_epi, is_strong_mono, map_over_base, omega,
                         over_terminal, quotient_structure, subspace_structure, terminal_sheaf,
                         uncurry)
from .simplicial import (build_site_F, build_site_F2_sep, complex_to_sheaf, equivalence_roundtrip,
                         sheaf_to_complex)
from .workspace import (Workspace, complex_to_dict, dumps, map_to_dict, presheaf_to_dict, save,
                        site_from_dict, site_to_dict)

log = logging.getLogger("concrete_sheaves")


def _verdict(v):
    return {"ok": v.ok, "code": v.code, "witness": [str(w) for w in v.witness]}


def _counts(x):
    objs = list(x.category.objects)
    return {"objects": objs, "plots": [x.size(d) for d in objs],
            "points": len(x.underlying_set)}


def _certs(x):
    return dict(getattr(x, "certificates", {}) or {})


class Runner:
    def __init__(self, args):
        self.args = args
        self.ws = Workspace()
        self.cwd = os.getcwd()

    # references on the command line are paths, or names resolved like in-file references
    def ref(self, text, kind):
        if os.path.exists(text):
            return self.ws.get(self.ws.load(text, kind)).value
        return self.ws.resolve(text, kind, self.cwd).value

    def site(self, text):
        if os.path.exists(text):
            self.ws.load(text, "site")
            text = os.path.splitext(os.path.basename(text))[0]
        return self.ws.site(text, self.cwd)

    def sheaf(self, text):
        """A concrete sheaf from a presheaf file, or from a complex file via F_n."""
        art = self.ws.get(self.ws.load(text)) if os.path.exists(text) else \
            self.ws.resolve(text, None, self.cwd)
        if art.kind == "complex":
            return complex_to_sheaf(art.value, n=getattr(self.args, "n", None), name=art.name)
        if art.kind != "presheaf":
            raise SchemaError(f"{text!r} is a {art.kind}, not a presheaf or complex")
        x = art.value
        return x if isinstance(x, ConcreteSheaf) else ConcreteSheaf.certify(x.site, x)

    def report(self, ok=True, result=None, **extra):
        out = {"command": self.args.command, "inputs": self.ws.provenance(), "ok": ok,
               "result": result}
        out.setdefault("certificates", {})
        out.setdefault("witnesses", [])
        out.setdefault("counts", {})
        out.update(extra)
        if result is not None and getattr(self.args, "output", None):
            save(result, self.args.output)
            log.info("wrote %s", self.args.output)
        return out

    def presheaf_report(self, x, ok=True, **extra):
        extra.setdefault("counts", _counts(x))
        extra.setdefault("certificates", _certs(x))
        return self.report(ok, presheaf_to_dict(x), **extra)

    # commands --------------------------------------------------------------

    def cmd_validate_site(self):
        a = self.args
        if os.path.exists(a.site):
            from .workspace import check_schema, parse

            with open(a.site, encoding="utf-8") as fh:
                doc = check_schema(parse(fh.read(), a.site), "site")
            name = os.path.splitext(os.path.basename(a.site))[0]
            try:
                site, rep = site_from_dict(doc, name, strict=False)
            except ValidationError as exc:
                return self.report(False, None, witnesses=exc.report.to_dict()["issues"])
            self.ws.add(name, "site", site, rep)
        else:
            site = self.ws.resolve(a.site, "site", self.cwd, strict=False).value
        if not hasattr(site, "certificates"):
            return self.report(False, None, witnesses=[{"code": "no-terminal"}])
        rep = site.report
        counts = {"objects": len(site.category.objects),
                  "morphisms": len(site.category.morphisms),
                  "covering_sieves": {d: len(site.topology[d]) for d in site.category.objects}
                  if rep.ok else {}}
        return self.report(rep.ok, site_to_dict(site), certificates=site.certificates,
                           witnesses=rep.to_dict()["issues"], counts=counts)

    def cmd_check_sheaf(self):
        x = self.ref(self.args.presheaf, "presheaf")
        site = x.site
        sh, sep, con = is_sheaf(site, x), is_separated(site, x), is_concrete(x)
        return self.report(sh.ok, None,
                           certificates={"sheaf": _verdict(sh), "separated": _verdict(sep),
                                         "concrete": _verdict(con)},
                           witnesses=[_verdict(v) for v in (sh, sep, con) if not v.ok],
                           counts=_counts(x))

    def cmd_sheafify(self):
        x = self.ref(self.args.presheaf, "presheaf")
        res = sheafify(x.site, x)
        return self.presheaf_report(res.sheaf, applications=res.applications,
                                    unit=map_to_dict(res.unit)["components"])

    def cmd_concretize(self):
        x = self.ref(self.args.presheaf, "presheaf")
        res = concretize(x)
        return self.presheaf_report(res.presheaf, quotient=map_to_dict(res.quotient)["components"])

    def cmd_plus(self):
        x = self.ref(self.args.presheaf, "presheaf")
        out, unit = plus(x.site, x)
        sh = is_sheaf(x.site, out)
        return self.presheaf_report(out, certificates={"sheaf": _verdict(sh),
                                                       "concrete": _verdict(is_concrete(out))},
                                    unit=map_to_dict(unit)["components"])

    def _diagram(self):
        d = self.ref(self.args.diagram, "diagram")
        nodes = {a: (x if isinstance(x, ConcreteSheaf) else ConcreteSheaf.certify(x.site, x))
                 for a, x in d.nodes.items()}
        sites = {x.site.name for x in nodes.values()}
        if len(sites) > 1:
            raise SchemaError(f"diagram nodes live on different sites: {sorted(sites)}")
        if not nodes:
            if not self.args.site:
                raise SchemaError("an empty diagram needs --site")
            return d, self.site(self.args.site)
        return d, next(iter(nodes.values())).site

    def cmd_limit(self):
        d, site = self._diagram()
        res = limit(site, d)
        return self.presheaf_report(res.sheaf, maps={a: map_to_dict(m)["components"]
                                                     for a, m in res.projections.items()})

    def cmd_colimit(self):
        d, site = self._diagram()
        res = colimit(site, d)
        return self.presheaf_report(res.sheaf, maps={a: map_to_dict(m)["components"]
                                                     for a, m in res.injections.items()})

    def cmd_shape(self):
        a = self.args
        if a.kind in ("terminal", "initial"):
            if not a.site:
                raise SchemaError(f"{a.kind} needs --site")
            site, args = self.site(a.site), ()
        elif a.kind in ("product", "coproduct"):
            args = tuple(self.sheaf(r) for r in a.args)
            if not args:
                raise SchemaError(f"{a.kind} of nothing: use {'terminal' if a.kind == 'product' else 'initial'}")
            site = args[0].site
        else:
            if len(a.args) != 2:
                raise SchemaError(f"{a.kind} takes exactly two maps")
            args = tuple(self.ref(r, "map") for r in a.args)
            site = args[0].source.site
        res = named_shape(site, a.kind, *args)
        return self.presheaf_report(res.sheaf, cross_check=res.cross_check,
                                    maps={k: map_to_dict(m)["components"]
                                          for k, m in res.maps.items()})

    def cmd_omega(self):
        om = omega(self.site(self.args.site))
        return self.presheaf_report(om.sheaf, top=map_to_dict(om.top)["components"],
                                    true_point=om.true_point, false_point=om.false_point)

    def cmd_subspace(self):
        x = self.sheaf(self.args.space)
        res = subspace_structure(x.site, x, self.args.points)
        return self.presheaf_report(res.sheaf,
                                    inclusion=map_to_dict(res.inclusion)["components"])

    def cmd_quotient(self):
        x = self.sheaf(self.args.space)
        res = quotient_structure(x.site, x, self.args.identify or [])
        return self.presheaf_report(res.sheaf, classes=dict(sorted(res.classes.items())),
                                    projection=map_to_dict(res.projection)["components"])

    def cmd_classify(self):
        f = self.ref(self.args.map, "map")
        chk = check_map(f)
        site = f.source.site
        out = {"natural": chk.natural, "mono": chk.mono, "epi": chk.epi,
               "strong_mono": None, "strong_epi": None}
        witnesses = {k: [str(w) for w in v] for k, v in chk.witnesses.items()}
        if chk.natural and chk.mono:
            v = is_strong_mono(site, f)
            out["strong_mono"] = v.ok
            if not v.ok:
                witnesses["strong_mono"] = _verdict(v)
        if chk.natural and chk.epi:
            v = is_strong_epi(site, f)
            out["strong_epi"] = v.ok
            if not v.ok:
                witnesses["strong_epi"] = _verdict(v)
        return self.report(chk.natural, None, certificates=out, witnesses=witnesses)

    def cmd_chi(self):
        i = self.ref(self.args.map, "map")
        site = i.source.site
        res = characteristic_map(site, i)
        ok = res.qualifying_count == 1
        return self.report(ok, map_to_dict(res.chi, target="Omega"),
                           counts={"qualifying_maps": res.qualifying_count},
                           certificates={"pullback_is_subobject": True,
                                         "unique": ok})

    def _spaces(self, names):
        """Spaces over the chosen base from ``NAME=ref`` arguments."""
        a = self.args
        given = {}
        for item in a.spaces:
            key, sep, val = item.partition("=")
            if not sep:
                raise SchemaError(f"expected NAME=file, got {item!r}")
            given[key.upper()] = val
        missing = [n for n in names if n not in given]
        if missing:
            raise SchemaError(f"missing argument(s): {', '.join(n + '=...' for n in missing)}")
        out = {}
        if a.base == "terminal":
            for n in names:
                if n == "F":
                    continue
                x = self.sheaf(given[n])
                out[n] = over_terminal(x.site, x)
            if out:
                base = terminal_sheaf(next(iter(out.values())).total.site)
                out = {n: over_terminal(s.total.site, s.total, base) for n, s in out.items()}
        else:
            base = self.sheaf(a.base)
            for n in names:
                if n == "F":
                    continue
                b = self.ref(given[n], "bundle")
                if b.base.plots != base.plots or b.base.restrict != base.restrict:
                    raise SchemaError(f"{n} does not live over {a.base}")
                total = ConcreteSheaf.certify(b.total.site, b.total)
                out[n] = SpaceOverBase(total, base,
                                       SheafMap(total, base, b.projection.components))
        return out, given

    def cmd_exp(self):
        sp, _ = self._spaces(["X", "Y"])
        x, y = sp["X"], sp["Y"]
        exp = exponential_over_base(x.total.site, x, y)
        return self.presheaf_report(exp.space.total,
                                    projection=map_to_dict(exp.space.projection)["components"],
                                    point_maps={p: {"base": b, "map": dict(pairs)}
                                                for p, (b, pairs) in sorted(exp.point_maps.items())})

    def cmd_curry(self):
        sp, given = self._spaces(["Z", "X", "Y"])
        z, x, y = sp["Z"], sp["X"], sp["Y"]
        site = z.total.site
        exp = exponential_over_base(site, x, y)
        zx = fiber_product(site, z, x)
        if "F" in given:
            f = self.ref(given["F"], "map")
            f = SheafMap(zx.sheaf, y.total, f.components)
            g = curry(site, z, x, y, f, exp)
            back = uncurry(site, z, x, y, g, exp, zx)
            ok = back.key() == f.key()
            return self.report(ok, map_to_dict(g, source=z.total.name, target="Exp"),
                               certificates={"round_trip": ok})
        zx_space = SpaceOverBase(zx.sheaf, z.base, compose_maps(z.projection, zx.maps["x"]))
        over = [f for f in enumerate_maps(zx.sheaf, y.total) if map_over_base(f, zx_space, y)]
        transposes = [g for g in enumerate_maps(z.total, exp.space.total)
                      if map_over_base(g, z, exp.space)]
        bad = [i for i, f in enumerate(over)
               if uncurry(site, z, x, y, curry(site, z, x, y, f, exp), exp, zx).key() != f.key()]
        ok = not bad and len(over) == len(transposes)
        return self.report(ok, None,
                           counts={"maps_from_fiber_product": len(over),
                                   "maps_to_exponential": len(transposes),
                                   "exponential_points": len(exp.space.total.underlying_set)},
                           certificates={"round_trip": not bad,
                                         "bijection": len(over) == len(transposes)},
                           witnesses=[str(i) for i in bad])

    def cmd_fsite(self):
        a = self.args
        if a.sep:
            if a.n != 2:
                raise SchemaError("--sep is only defined for n = 2")
            site = build_site_F2_sep()
        else:
            site = build_site_F(a.n)
        counts = {"objects": len(site.category.objects), "morphisms": len(site.category.morphisms)}
        return self.report(site.report.ok, site_to_dict(site), certificates=site.certificates,
                           counts=counts)

    def cmd_from_complex(self):
        k = self.ref(self.args.complex, "complex")
        name = os.path.splitext(os.path.basename(self.args.complex))[0]
        site = self.site(self.args.site) if self.args.site else None
        x = complex_to_sheaf(k, n=self.args.n, site=site, name=name)
        return self.presheaf_report(x)

    def cmd_to_complex(self):
        x = self.sheaf(self.args.sheaf)
        k = sheaf_to_complex(x)
        return self.report(True, complex_to_dict(k),
                           counts={"vertices": len(k.vertices), "simplices": len(k.simplices)})

    def cmd_roundtrip(self):
        a = self.args
        from .workspace import check_schema, parse

        with open(a.file, encoding="utf-8") as fh:
            kind = check_schema(parse(fh.read(), a.file))["kind"]
        obj = self.sheaf(a.file) if kind == "presheaf" else self.ref(a.file, "complex")
        rt = equivalence_roundtrip(obj, n=a.n)
        detail = {"direction": rt.detail["direction"],
                  "complex": complex_to_dict(rt.detail["complex"])}
        if "plot_counts" in rt.detail:
            detail["plot_counts"] = rt.detail["plot_counts"]
        return self.report(rt.ok, None, certificates={"round_trip": rt.ok}, detail=detail)

    def cmd_laws(self):
        a = self.args
        site = self.site(a.site)
        results = run_suite(site, seed=a.seed, jobs=a.jobs, only=a.only)
        items = [r.to_dict() for r in results]
        ok = all(r.ok for r in results)
        return self.report(ok, None, certificates={r.name: r.ok for r in results},
                           witnesses=[i for i in items if not i["ok"]],
                           counts={"laws": len(items), "passed": sum(r.ok for r in results)},
                           laws=items, seed=a.seed)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result artifact to this file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (laws)")
    common.add_argument("-v", "--verbose", action="store_true", help="log to stderr")

    p = argparse.ArgumentParser(prog="concrete-sheaves",
                                description="Concrete sheaves on finite concrete sites.")
    p.add_argument("--backend", action="store_true", help="print the kernel backend and exit")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("validate-site", "check a site file against the concrete-site axioms").add_argument("site")
    add("check-sheaf", "is a presheaf a sheaf (and separated, concrete)?").add_argument("presheaf")
    add("sheafify", "sheafify a presheaf").add_argument("presheaf")
    add("concretize", "identify plots with equal underlying functions").add_argument("presheaf")
    add("plus", "one plus construction").add_argument("presheaf")
    for name in ("limit", "colimit"):
        c = add(name, f"pointwise {name} of a diagram file")
        c.add_argument("diagram")
        c.add_argument("--site", help="site for an empty diagram")
    c = add("shape", "a named limit or colimit")
    c.add_argument("kind", choices=SHAPES)
    c.add_argument("args", nargs="*", help="sheaves (product/coproduct) or two maps")
    c.add_argument("--site", help="site for terminal/initial")
    add("omega", "the weak subobject classifier").add_argument("--site", required=True)
    c = add("subspace", "subspace structure on a set of points")
    c.add_argument("space")
    c.add_argument("--points", nargs="*", default=[])
    c = add("quotient", "quotient structure; each --identify lists points made equal")
    c.add_argument("space")
    c.add_argument("--identify", nargs="+", action="append")
    add("classify", "mono / epi / strong mono / strong epi").add_argument("map")
    add("chi", "characteristic map of a strong mono").add_argument("map")
    for name, names in (("exp", "X=... Y=..."), ("curry", "Z=... X=... Y=... [F=map]")):
        c = add(name, f"{'exponential' if name == 'exp' else 'currying'} over a base")
        c.add_argument("--base", default="terminal",
                       help="'terminal' (spaces are sheaf files) or a base sheaf "
                            "(spaces are bundle files)")
        c.add_argument("spaces", nargs="+", metavar=names)
        c.add_argument("--n", type=int, help="F_n for spaces given as complex files")
    c = add("fsite", "the finite-sets site F_n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--sep", action="store_true", help="F_2 with the two-point cover of 2")
    c = add("from-complex", "simplicial complex to concrete sheaf on F_n")
    c.add_argument("complex")
    c.add_argument("--n", type=int)
    c.add_argument("--site")
    add("to-complex", "concrete sheaf on F_n to simplicial complex").add_argument("sheaf")
    c = add("roundtrip", "check the complex/sheaf round trip")
    c.add_argument("file")
    c.add_argument("--n", type=int)
    c = add("laws", "run the invariant suite on a site")
    c.add_argument("--site", required=True)
    c.add_argument("--only", nargs="+", choices=list(LAWS))
    return p


def _issue_list(exc):
    rep = getattr(exc, "report", None)
    return rep.to_dict()["issues"] if rep is not None else []


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        print(kernels.BACKEND)
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(message)s",
                        level=logging.INFO if args.verbose else logging.WARNING)
    runner = Runner(args)
    handler = getattr(runner, "cmd_" + args.command.replace("-", "_"))
    try:
        report = handler()
        code = 0 if report["ok"] else 1
    except (ParseError, SchemaError, UnknownPoint) as exc:
        log.error("%s", exc)
        report = {"command": args.command, "ok": False,
                  "error": {"type": type(exc).__name__, "message": str(exc)}}
        code = 2
    except SheafError as exc:
        log.error("%s", exc)
        report = {"command": args.command, "inputs": runner.ws.provenance(), "ok": False,
                  "error": {"type": type(exc).__name__, "message": str(exc)},
                  "witnesses": _issue_list(exc)}
        code = 1
    sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
