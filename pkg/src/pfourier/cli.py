"""Command-line interface: ``pfourier <verb> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import coeffs, diagnostics, norms, weights
from .coeffs import CoefficientBundle, DualFunctional
from .diagnostics import fmt
from .duals import parse_group
from .errors import DescriptorError, DomainError, PFourierError
from .matnorm import SchattenIndex


def _index(text: str, flag: str) -> SchattenIndex:
    try:
        return SchattenIndex.of(text)
    except DomainError as exc:
        raise DescriptorError(f"bad value for {flag}: {exc}") from None


def _grid(text: str, flag: str) -> list[str]:
    items = [x.strip() for x in text.split(",") if x.strip()]
    if not items:
        raise DescriptorError(f"{flag} grid is empty")
    return items


def _number(text: str, flag: str):
    from ._numeric import as_fraction

    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DescriptorError(f"bad value for {flag}: {text!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read input file {path!r}: {exc.strerror}") from None


def _load_bundle(path: str, group=None) -> CoefficientBundle:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"{path}: not valid JSON ({exc})") from None
    if group is not None and "group" in data and parse_group(data["group"]) != group:
        raise DomainError(f"{path}: bundle group {data['group']} differs from --group {group.descriptor}")
    return CoefficientBundle.from_json(data, group)


_RELEVANT = {
    "dual": ("group", "N"),
    "norm": ("group", "p", "q", "weight", "kind"),
    "dualnorm": ("group", "p", "weight", "N"),
    "multiply": ("group",),
    "check": ("group", "weight", "N"),
    "diagonal": ("group", "p", "q"),
    "restrict": ("group", "subgroup", "p", "weight", "N"),
    "scan": ("kind", "p", "q", "alpha", "N"),
    "arens": ("group", "weight", "N"),
    "wallach": ("r", "alpha", "p", "N"),
    "table": ("group", "p", "alpha", "N"),
}


def _header(args) -> list[str]:
    parts = [f"seed={args.seed}", f"command={args.verb}"]
    for key in _RELEVANT[args.verb]:
        val = getattr(args, key, None)
        if val is not None:
            parts.append(f"{key}={val}")
    return parts


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ----- verbs ----------------------------------------------------------------


def cmd_dual(args) -> str:
    from .duals import enumerate_dual

    g = parse_group(args.group)
    labs = enumerate_dual(g, args.N)
    if args.format == "json":
        return _json({"group": g.descriptor, "truncated": g.truncated,
                      "labels": [{"label": l.name, "dim": l.dim, "conjugate": l.conj_name} for l in labs]})
    lines = [f"# {h}" for h in _header(args)] + ["label,dim,conjugate"]
    lines += [f"{l.name},{l.dim},{l.conj_name}" for l in labs]
    return "\n".join(lines)


def _weight(args, g):
    return weights.parse_weight(args.weight, g)


def cmd_norm(args) -> str:
    if not args.inp:
        raise DomainError("norm needs --in bundle.json")
    g = parse_group(args.group) if args.group else None
    u = _load_bundle(args.inp[0], g)
    g = u.group
    w = _weight(args, g)
    p = _index(args.p, "--p")
    if args.kind == "ap":
        val = norms.ap_norm(u, norms.NormParams(p, w))
    elif args.kind == "delta":
        val = norms.delta_norm(u, p, w, "ap")
    elif args.kind == "delta-rq":
        q = _index(args.q or args.p, "--q")
        val = norms.delta_norm(u, q, w, "rq")
    else:
        val = norms.central_norm(u, p, w)
    if args.format == "json":
        return _json({"value": fmt(val), "kind": args.kind, "seed": args.seed})
    return "\n".join([f"# {h}" for h in _header(args)] + [fmt(val)])


def cmd_dualnorm(args) -> str:
    if not args.inp:
        raise DomainError("dualnorm needs --in functional.json")
    g = parse_group(args.group) if args.group else None
    b = _load_bundle(args.inp[0], g)
    T = DualFunctional(b.group, dict(b.entries))
    res = norms.ap_dual_norm(T, norms.NormParams(_index(args.p, "--p"), _weight(args, b.group)), args.N)
    if args.format == "json":
        return _json({"value": fmt(res.value), "increasing": res.increasing, "horizon": res.horizon, "seed": args.seed})
    return "\n".join([f"# {h}" for h in _header(args)]
                     + [fmt(res.value), f"# increasing={res.increasing} horizon={res.horizon}"])


def cmd_multiply(args) -> str:
    if not args.inp or len(args.inp) != 2:
        raise DomainError("multiply needs exactly two --in bundles")
    g = parse_group(args.group) if args.group else None
    u = _load_bundle(args.inp[0], g)
    v = _load_bundle(args.inp[1], g)
    return json.dumps(coeffs.multiply(u, v).to_json(), indent=2)


def cmd_check(args) -> str:
    g = parse_group(args.group)
    rep = weights.check_weight(g, _weight(args, g), args.N)
    if args.format == "json":
        return _json({"ok": rep.ok, "violations": len(rep.violations), "inf_value": fmt(rep.inf_value),
                      "checked": rep.checked, "seed": args.seed})
    lines = [f"# {h}" for h in _header(args)] + ["ok,violations,inf_value,checked",
                                                 f"{rep.ok},{len(rep.violations)},{fmt(rep.inf_value)},{rep.checked}"]
    for a, b, c, wc, bound in rep.violations[:20]:
        lines.append(f"# violation {c.name} in {a.name}x{b.name}: {fmt(wc)} > {fmt(bound)}")
    return "\n".join(lines)


def cmd_diagonal(args) -> str:
    g = parse_group(args.group)
    if args.q is not None:
        val = norms.diagonal_norm_finite(g, _index(args.q, "--q"), "rq")
    else:
        val = norms.diagonal_norm_finite(g, _index(args.p, "--p"), "ap")
    if args.format == "json":
        return _json({"value": fmt(val), "seed": args.seed})
    return "\n".join([f"# {h}" for h in _header(args)] + [fmt(val)])


def cmd_restrict(args) -> str:
    g = parse_group(args.group)
    sub = g.subgroup(args.subgroup)
    w = _weight(args, g)
    lines = [f"# {h}" for h in _header(args)]
    if args.inp:
        b = _load_bundle(args.inp[0], sub.model)
        T = DualFunctional(sub.model, dict(b.entries), lambda lab: np.zeros((lab.dim, lab.dim)))
        res = norms.restriction_dual_norm(T, g, sub, _index(args.p, "--p"), w, args.N)
        if args.format == "json":
            return _json({"value": fmt(res.value), "increasing": res.increasing, "horizon": res.horizon})
        return "\n".join(lines + [fmt(res.value), f"# increasing={res.increasing} horizon={res.horizon}"])
    rw = weights.restrict_weight(w, g, sub, args.N)
    labs = sub.model.dual()
    vals = []
    for lab in labs:
        try:
            vals.append((lab.name, fmt(rw(lab))))
        except DomainError:
            vals.append((lab.name, "nan"))
    if args.format == "json":
        return _json({"certified": rw.certified, "horizon": rw.horizon, "values": dict(vals)})
    lines += ["label,weight"] + [f"{a},{b}" for a, b in vals]
    lines.append(f"# certified={rw.certified} horizon={rw.horizon}")
    return "\n".join(lines)


def cmd_scan(args) -> str:
    alpha = _number(args.alpha, "--alpha")
    N = args.N if args.N is not None else 2000
    if args.kind == "derivation":
        rep = diagnostics.derivation_scan_su2(_index(args.p, "--p"), alpha, N)
    elif args.kind == "owa":
        rep = diagnostics.owa_scan_su2(_index(args.p, "--p"), alpha, N)
    elif args.kind == "torus-ap":
        rep = diagnostics.torus_owa_scan("ap", _index(args.p, "--p"), alpha, N)
    else:
        rep = diagnostics.torus_owa_scan("rq", _index(args.q or args.p, "--q"), alpha, N)
    if args.format == "json":
        return json.dumps(rep.to_json(), indent=2, sort_keys=True)
    return rep.to_csv(_header(args))


def cmd_arens(args) -> str:
    g = parse_group(args.group)
    table = diagnostics.arens_ratio_scan(g, _weight(args, g), None, args.N)
    if args.format == "json":
        return _json({"rows": [[m, fmt(v)] for m, v in table.rows], "horizon": table.horizon,
                      "decaying": table.decaying})
    return table.to_csv(_header(args))


def cmd_wallach(args) -> str:
    N = args.N if args.N is not None else 100000
    lie = diagnostics.SU2_DATA
    if args.r is None:
        # the operator-algebra index r = 2 + 2/p' when only p is given
        args.r = str(2 + 2 * _index(args.p, "--p").inv_conj) if args.p is not None else "2"
    r = _number(args.r, "--r")
    rep = diagnostics.wallach_partial_sums(lie, r, _number(args.alpha, "--alpha"), N)
    extra = [f"wallach_threshold={diagnostics.wallach_threshold(lie, r)}"]
    if args.p is not None:
        extra.append(f"opalg_threshold={diagnostics.opalg_threshold(_index(args.p, '--p'), lie)}")
    if args.format == "json":
        out = rep.to_json()
        out.update(dict(e.split("=", 1) for e in extra))
        return json.dumps(out, indent=2, sort_keys=True)
    return rep.to_csv(_header(args) + extra)


def cmd_table(args) -> str:
    g = parse_group(args.group)
    ps = [_index(x, "--p") for x in _grid(args.p, "--p")]
    alphas = [_number(x, "--alpha") for x in _grid(args.alpha, "--alpha")]
    rows = diagnostics.table_summary(ps, alphas, g, args.N if args.N is not None else 400)
    if args.format == "json":
        return _json(rows)
    return diagnostics.table_csv(rows, _header(args))


VERBS = {
    "dual": cmd_dual, "norm": cmd_norm, "dualnorm": cmd_dualnorm, "multiply": cmd_multiply,
    "check": cmd_check, "diagonal": cmd_diagonal, "restrict": cmd_restrict, "scan": cmd_scan,
    "arens": cmd_arens, "wallach": cmd_wallach, "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfourier", description="p-Fourier algebras on compact groups")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, help_, group_required=False, **defaults):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--group", required=group_required, default=defaults.get("group"))
        sp.add_argument("--p", default=defaults.get("p", "1"))
        sp.add_argument("--q", default=None)
        sp.add_argument("--alpha", default=defaults.get("alpha", "0"))
        sp.add_argument("--weight", default=defaults.get("weight", "one"))
        sp.add_argument("--in", dest="inp", action="append", default=[])
        sp.add_argument("--out", default=None)
        sp.add_argument("--N", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        return sp

    add("dual", "list the dual object", group_required=True)
    sp = add("norm", "A^p norm of a bundle")
    sp.add_argument("--kind", choices=["ap", "delta", "delta-rq", "central"], default="ap")
    add("dualnorm", "dual norm of a functional")
    add("multiply", "product of two bundles")
    add("check", "check the weight axiom", group_required=True)
    add("diagonal", "diagonal norm of a finite group", group_required=True)
    sp = add("restrict", "restricted weight or restriction dual norm", group_required=True)
    sp.add_argument("--subgroup", required=True)
    sp = add("scan", "derivation / OWA scans on SU(2)", group="SU2")
    sp.add_argument("--kind", choices=["derivation", "owa", "torus-ap", "torus-rq"], default="derivation")
    add("arens", "Arens weight-ratio tail suprema", group_required=True, weight="dim:1")
    sp = add("wallach", "Wallach partial sums for SU(2)", group="SU2")
    sp.add_argument("--r", default=None)
    sub.choices["wallach"].set_defaults(p=None)
    add("table", "summary table over (p, alpha) grids", group_required=True, p="1,4/3,2", alpha="0,1")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = VERBS[args.verb](args)
        _emit(args, text)
    except DescriptorError as exc:
        print(f"pfourier: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"pfourier: error: {exc}", file=sys.stderr)
        return 1
    except PFourierError as exc:
        print(f"pfourier: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
