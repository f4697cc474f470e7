"""Command line interface.

Exit codes: 0 success, 1 a mathematical violation was found, 2 usage or input
error.  ``--json`` prints the full run report; otherwise a summary derived from
it is printed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import catalog, forms, hauptsatz, marshall, poly, quadext
from .core import (KINDS, Report, StructureError, characteristic, check_axioms, classify_ideal,
                   ideal_generate, quotient_by_ideal)
from .serialize import LoadViolation, digest, dumps, load_structure, to_dict

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class Outcome:
    def __init__(self, result: dict, violations=(), subject: str = ""):
        self.result = result
        self.violations = list(violations)
        self.subject = subject


def _violations(rep: Report) -> list:
    return rep.to_dict()["violations"]


def _names(S, elements) -> list:
    return [S.names[x] for x in sorted(elements)]


def _split(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------- verbs

def cmd_check(args, S):
    kind = args.kind or S.kind
    rep = check_axioms(S, kind)
    return Outcome({"structure": S.name, "kind": kind, "size": S.size, "passed": rep.passed},
                   _violations(rep), f"{S.name} as {kind}")


def cmd_characteristic(args, S):
    return Outcome({"structure": S.name, "characteristic": characteristic(S)}, subject=S.name)


def cmd_quotient(args, S):
    gens = [S.index(x) for x in _split(args.ideal)]
    I = ideal_generate(S, gens)
    flags = classify_ideal(S, I)
    Q, pi = quotient_by_ideal(S, I)
    return Outcome({"structure": S.name, "ideal": _names(S, I), "flags": flags,
                    "classes": {S.names[a]: Q.names[int(pi.map[a])] for a in range(S.size)},
                    "quotient": to_dict(Q)}, subject=f"{S.name}/<{args.ideal}>")


def cmd_marshall(args, S):
    M = marshall.resolve_subset(S, args.subset)
    coh = marshall.is_coherent(S, M)
    agree = marshall.sim_criteria_agree(S, M)
    result = {"structure": S.name, "subset": _names(S, M), "coherence": coh.to_dict()}
    violations = _violations(coh) + _violations(agree)
    if S.zero in M or S.one not in M:
        return Outcome(result, violations or [{"axiom": "subset", "witness": []}], S.name)
    Q, pi = marshall.marshall_quotient(S, M)
    result.update(
        classes={S.names[a]: Q.names[int(pi.map[a])] for a in range(S.size)},
        quotient=to_dict(Q),
        diagnostics=[{**d, "cell": list(d["cell"])} for d in Q.diagnostics],
        non_singleton_products=[list(c) for c in marshall.singleton_products(Q)],
    )
    return Outcome(result, violations, f"{S.name}/m {args.subset}")


def cmd_poly(args, S):
    if args.op == "divide":
        f, g = poly.parse_poly(S, args.f), poly.parse_poly(S, args.g)
        q, r = poly.euclid_divide(S, f, g)
        ok = poly.division_holds(S, f, q, g, r)
        res = {"f": poly.format_poly(S, f), "g": poly.format_poly(S, g),
               "q": poly.format_poly(S, q), "r": poly.format_poly(S, r), "verified": ok}
        viol = [] if ok else [{"axiom": "division", "witness": [res["q"], res["r"]]}]
        return Outcome(res, viol, f"{res['f']} / {res['g']}")
    f = poly.parse_poly(S, args.f)
    if args.op == "roots":
        return Outcome({"f": poly.format_poly(S, f), "roots": [S.names[x] for x in poly.roots(S, f)]},
                       subject=poly.format_poly(S, f))
    if args.op == "irreducible":
        fac = poly.factorization(S, f)
        return Outcome({"f": poly.format_poly(S, f), "irreducible": poly.is_irreducible(S, f),
                        "factorization": None if fac is None else [poly.format_poly(S, p) for p in fac]},
                       subject=poly.format_poly(S, f))
    # extension
    Q, _ = poly.quotient_superfield(S, f)
    rep = check_axioms(Q, "superfield")
    return Outcome({"f": poly.format_poly(S, f), "size": Q.size, "quotient": to_dict(Q)},
                   _violations(rep), f"{S.name}[X]/<{poly.format_poly(S, f)}>")


def cmd_forms(args, S):
    if args.op == "classify":
        flags = forms.classify_hyperfield(S)
        flags = {k: ([list(v) for v in val] if k == "sg_violations" else val) for k, val in flags.items()}
        return Outcome({"structure": S.name, **flags}, subject=S.name)
    if args.op == "isometric":
        phi, psi = forms.parse_form(S, args.lhs), forms.parse_form(S, args.rhs)
        return Outcome({"lhs": forms.format_form(S, phi), "rhs": forms.format_form(S, psi),
                        "isometric": forms.isometric(S, phi, psi)}, subject=S.name)
    phi = forms.parse_form(S, args.form)
    if args.op == "isotropic":
        return Outcome({"form": forms.format_form(S, phi), "isotropic": forms.is_isotropic(S, phi),
                        "values": _names(S, forms.value_set(S, phi))}, subject=S.name)
    wd = forms.witt_decompose(S, phi, cross_check=args.cross_check)
    return Outcome({"form": forms.format_form(S, phi),
                    "anisotropic": forms.format_form(S, wd.anisotropic),
                    "hyperbolic_planes": wd.hyperbolic_count, "dim_w": wd.dim_w,
                    "certificate": forms.format_form(S, wd.certificate)}, subject=S.name)


def cmd_extend(args, S):
    alphas = _split(args.alphas)
    if not alphas:
        raise StructureError("--alphas needs at least one element")
    if len(alphas) == 1 or args.mode == "carrier":
        E = quadext.extend(S, alphas[0])
        Q, base_map, _ = quadext.s_quotient(E, reduced=args.reduced, mode=args.mode)
        if len(alphas) > 1:
            raise StructureError("carrier mode supports a single scalar")
        classes = {S.names[a]: Q.names[int(base_map.map[a])] for a in range(S.size)}
        warnings = list(Q.warnings)
    else:
        T = quadext.iterate_tower(S, alphas)
        Q = T.top
        m = T.to_top()
        classes = {S.names[a]: Q.names[int(m[a])] for a in range(S.size)}
        warnings = []
    data = to_dict(Q)
    data["classes"] = classes
    flags = forms.classify_hyperfield(Q)
    return Outcome({"base": S.name, "alphas": alphas, "structure": data, "warnings": warnings,
                    "formally_real": flags["formally_real"], "special": flags["special"],
                    "size": Q.size},
                   subject=f"{S.name}({','.join('sqrt ' + a for a in alphas)})")


def cmd_tower(args, S):
    alphas = _split(args.alphas)
    T = quadext.iterate_tower(S, alphas)
    viol = []
    eq = {}
    for a in S.nonzero():
        for b in S.nonzero():
            r = quadext.tower_class_eq(T, a, b)
            eq[f"{S.names[a]}|{S.names[b]}"] = r["quotient"]
            if len({r["closed_form"], r["witnesses"], r["quotient"]}) > 1:
                viol.append({"axiom": "class_equality", "witness": [S.names[a], S.names[b]]})
    fr = quadext.tower_formally_real(T)
    if fr["closed_form"] != fr["quotient"]:
        viol.append({"axiom": "formally_real", "witness": alphas})
    return Outcome({"base": S.name, "alphas": alphas,
                    "stages": [{"name": st.field.name, "size": st.field.size} for st in T.stages],
                    "class_equal": eq, "formally_real": fr["quotient"]}, viol,
                   f"{S.name} tower [{','.join(alphas)}]")


def cmd_hauptsatz(args, S):
    rep = hauptsatz.check_hauptsatz(S, args.n, args.terms, mode=args.mode, seed=args.seed,
                                    samples=args.samples)
    result = {"base": S.name, "n": args.n, "terms": args.terms, "seed": args.seed, **rep.info}
    viol = _violations(rep)
    if args.trace:
        traces = []
        for t in range(1, args.terms + 1):
            for _, r in hauptsatz.gen_In(S, args.n, t, scaled=False):
                if forms.is_isotropic(S, r[0].form(S)):
                    continue
                tr = hauptsatz.trace_proof(S, r)
                traces.append({"rep": hauptsatz.describe(S, r), **tr.to_dict()})
                if not tr.monotone:
                    viol.append({"axiom": "trace_monotone", "witness": [hauptsatz.describe(S, r)]})
        result["traces"] = traces
    return Outcome(result, viol, f"{S.name} n={args.n} terms<={args.terms}")


def cmd_catalog_list(args, S):
    rows = []
    for name in catalog.LISTED:
        T = catalog.by_name(name)
        rows.append({"name": name, "size": T.size, "kind": T.kind})
    return Outcome({"structures": rows}, subject="catalog")


VERBS = {
    "check": cmd_check, "characteristic": cmd_characteristic, "quotient": cmd_quotient,
    "marshall": cmd_marshall, "poly": cmd_poly, "forms": cmd_forms, "extend": cmd_extend,
    "tower": cmd_tower, "hauptsatz": cmd_hauptsatz, "catalog-list": cmd_catalog_list,
}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-verify", action="store_true", help="skip the axiom check on load")
    common.add_argument("--timing", action="store_true", help="print wall time to stderr")

    p = argparse.ArgumentParser(prog="hyperforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, ref="--structure", **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        if ref:
            sp.add_argument(ref, required=True, dest="ref", help="catalog:<name> or a JSON file")
        return sp

    sp = verb("check", help="check the axioms of a kind")
    sp.add_argument("--kind", choices=KINDS)
    verb("characteristic")
    sp = verb("quotient", help="quotient by the ideal generated by elements")
    sp.add_argument("--ideal", required=True)
    sp = verb("marshall", help="Marshall quotient by a multiplicative subset")
    sp.add_argument("--subset", default="squares")
    sp = verb("poly", help="polynomial division, roots, irreducibility, extensions")
    sp.add_argument("op", choices=["divide", "roots", "irreducible", "extension"])
    sp.add_argument("--f", required=True)
    sp.add_argument("--g")
    sp = verb("forms", help="quadratic forms")
    sp.add_argument("op", choices=["isometric", "witt", "isotropic", "classify"])
    sp.add_argument("--lhs")
    sp.add_argument("--rhs")
    sp.add_argument("--form")
    sp.add_argument("--cross-check", action="store_true")
    sp = verb("extend", ref="--base", help="square-class quotient of a quadratic extension")
    sp.add_argument("--alphas", required=True)
    sp.add_argument("--emit", choices=["json", "summary"], default="summary")
    sp.add_argument("--mode", choices=["base", "carrier"], default="base")
    sp.add_argument("--reduced", action="store_true")
    sp = verb("tower", ref="--base", help="closed-form checks along a tower")
    sp.add_argument("--alphas", required=True)
    sp = verb("hauptsatz", ref="--base", help="exhaustive Hauptsatz check")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--terms", type=int, required=True)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--trace", action="store_true")
    verb("catalog-list", ref=None)
    return p


def _summary(verb: str, out: Outcome) -> str:
    lines = [f"{verb} {out.subject}: {len(out.violations)} violations"]
    for v in out.violations:
        lines.append(f"  {v['axiom']}: {', '.join(map(str, v['witness']))}")
    for key, val in out.result.items():
        if key in ("quotient", "structure", "traces", "class_equal"):
            continue
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True, ensure_ascii=False)
        lines.append(f"  {key}: {val}")
    struct = out.result.get("structure") if isinstance(out.result.get("structure"), dict) else None
    if struct is not None:
        lines.append("  elements: " + " ".join(struct["elements"]))
        if "classes" in struct:
            lines.append("  classes: " + ", ".join(f"{k}->{v}" for k, v in struct["classes"].items()))
        for label in ("add", "mul"):
            lines.append(f"  {label}:")
            for key, cell in struct[label].items():
                a, b = key.split("|")
                lines.append(f"    {a} {'+' if label == 'add' else '*'} {b} = {{{', '.join(cell)}}}")
    return "\n".join(lines)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    verb = args.verb
    ref = getattr(args, "ref", None)
    try:
        S = load_structure(ref, verify=not args.no_verify) if ref else None
        out = VERBS[verb](args, S)
    except LoadViolation as exc:
        report = {"verb": verb, "error": str(exc), "violations": exc.report.to_dict()["violations"]}
        print(dumps(report) if args.json else f"{verb}: {exc}")
        return EXIT_VIOLATION
    except (StructureError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        if args.json:
            print(dumps({"verb": verb, "error": str(msg)}))
        else:
            print(f"{verb}: error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    options = {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "timing")}
    report = {
        "verb": verb,
        "input_digest": digest(options, to_dict(S) if S is not None else None),
        "seed": args.seed,
        "result": out.result,
        "violations": out.violations,
    }
    if args.json or (verb == "extend" and args.emit == "json"):
        print(dumps(report))
    else:
        print(_summary(verb, out))
    if args.timing:
        print(f"wall time: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return EXIT_VIOLATION if out.violations else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
