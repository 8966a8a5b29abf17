"""Command-line interface.

Subcommands: check, chain, classify, export, presets.  Exit codes follow a
fixed contract: 0 = holds / expected outcome, 1 = mathematically negative
result (a witness is printed), 2 = inconclusive (truncation too shallow).
Blocked or finite chain outcomes are data, not failures: exit 0.

A run is reproducible from its config: the same --config file (or flags)
produces byte-identical machine output.  The config format is a flat
key = value file, one per line, # comments; unknown keys are rejected
(grammar in docs/config_grammar.ebnf).
"""

from __future__ import annotations

import argparse
import json
import sys

from .brackets import check_compatible, check_jacobi, check_skewadjoint
from .chains import extend_left, extend_right
from .errors import (InsufficientTruncation, LenardError, NothingToExport,
                     ParseError, Proportional, UnknownPreset)
from .field import Context
from .grammar import fun_latex, fun_text, parse_function, parse_operator
from .jacobi import AtomStructure
from .liouville import (EMPIRICAL_PATTERNS, classification_table, classify,
                        empirical_class)
from .operators import RationalOpPair, default_floor
from .presets import (kn_spaces, liouville_spaces, load_preset, nls_k_solver,
                      nls_h_solver, nls_spaces, preset_ids)
from .report import (chain_record, classification_record, to_json,
                     verdict_record)
from .solve import AnsatzSpace

_CONFIG_KEYS = {
    "preset", "command", "what", "op", "direction", "steps", "floor",
    "ansatz", "params", "format", "seed", "generators", "pattern",
    "verify_only", "empirical",
}


def read_config(path):
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", lineno, 0)
            key, val = [s.strip() for s in line.split("=", 1)]
            if key not in _CONFIG_KEYS:
                raise ParseError("unknown config key %r" % key, lineno, 0)
            out[key] = val
    return out


def _parse_pattern(text):
    # "b=(0,1,1),a=(1,0,0)"
    parts = dict(p.split("=", 1) for p in text.replace(" ", "").split("),") if p)
    clean = {}
    for k, v in parts.items():
        v = v.strip("()")
        clean[k] = tuple(int(t) for t in v.split(","))
    return clean.get("a"), clean.get("b")


def _structure_from_args(args, ctx=None):
    if args.preset:
        pre = load_preset(args.preset)
        return pre, pre.extras.get("H_sum"), pre.extras.get("K_sum")
    if args.op:
        ctx = ctx or Context(tuple((args.generators or "u").split(",")))
        op = parse_operator(ctx, args.op)
        return None, op, None
    raise LenardError("need --preset or --op")


def cmd_check(args):
    floor = args.floor if args.floor is not None else -8
    pre, H, K = _structure_from_args(args)
    what = args.what or "skew"
    out = []
    code = 0
    structures = []
    if what == "compat":
        if pre is not None and K is not None:
            structures = [("H", H), ("K", K)]
        else:
            raise LenardError("compat needs a preset with two structures")
    else:
        structures = [("H", H)] + ([("K", K)] if K is not None and pre else [])
    try:
        if what == "skew":
            for name, S in structures:
                v = check_skewadjoint(S, floor)
                out.append(verdict_record(v, name))
                code = max(code, 0 if v.holds else 1)
        elif what == "jacobi":
            for name, S in structures:
                v = check_skewadjoint(S, floor)
                out.append(verdict_record(v, name))
                if not v.holds:
                    code = 1
                    continue
                v = check_jacobi(S, (floor, floor))
                out.append(verdict_record(v, name))
                code = max(code, 0 if v.holds else 1)
        elif what == "compat":
            for name, S in structures:
                v = check_jacobi(S, (floor, floor))
                out.append(verdict_record(v, name))
                code = max(code, 0 if v.holds else 1)
            v = check_compatible(H, K, (floor, floor))
            out.append(verdict_record(v, "H+K"))
            code = max(code, 0 if v.holds else 1)
        else:
            raise LenardError("unknown check %r" % what)
    except InsufficientTruncation as e:
        out.append({"error": "inconclusive", "detail": str(e)})
        code = 2
    _emit(args, {"check": what, "floor": floor, "results": out})
    return code


def _preset_tooling(pre):
    """(spaceF, spaceG, k_solver, h_solver, den_kernel, space_factory)."""
    pid = pre.id
    ctx = pre.ctx
    if pid.startswith("liouville"):
        b = pre.extras["b"]
        spF, spG = liouville_spaces(ctx, b[1], b[2])
        return spF, spG, None, None, None, None
    if pid == "kn":
        ker = [[f] for f in pre.extras["kernel_B"]]
        return None, None, None, None, ker, None
    if pid == "kn0":
        return None, None, None, None, None, None
    if pid == "nls":
        spF, spG = nls_spaces(ctx)
        return (spF, spG, nls_k_solver(pre), nls_h_solver(pre), None, None)
    return None, None, None, None, None, None


def _parse_params(text):
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        k, v = piece.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _load_with_bindings(args):
    kwargs = {}
    params = _parse_params(getattr(args, "params", None))
    if args.preset == "kn" and "a" in params:
        kwargs["a_value"] = int(params["a"])
    return load_preset(args.preset, **kwargs)


def _ansatz_override(args, ctx):
    if not getattr(args, "ansatz", None):
        return None
    parts = [int(t) for t in args.ansatz.split(",")]
    while len(parts) < 3:
        parts.append(0)
    return AnsatzSpace(ctx, parts[0], parts[1], parts[2])


def cmd_chain(args):
    pre = _load_with_bindings(args)
    steps = args.steps if args.steps is not None else 1
    spF, spG, ks, hs, ker, fac = _preset_tooling(pre)
    override = _ansatz_override(args, pre.ctx)
    if override is not None:
        spF = spG = override
        fac = None
    if args.verify_only:
        ok = pre.chain.verify()
        _emit(args, {"preset": pre.id, "verified": ok,
                     "chain": chain_record(pre.chain, latex=args.format == "latex")})
        return 0 if ok else 1
    if args.direction == "left":
        ctx = pre.ctx
        left_P = None
        if pre.id.startswith("liouville"):
            left_P = [ctx.u(1)]
        elif pre.id == "kn0":
            left_P = [ctx.one()]
        elif pre.id == "kn":
            u = ctx.u(0)
            left_P = [ctx.one() + u + u * u]
        spG_l = spG or AnsatzSpace(ctx, 1, 2, x_power=1)
        u1 = ctx.u(1)
        spF_l = spF or AnsatzSpace(ctx, max_dord=3, max_degree=5,
                                   denominators=[(u1, 3)], weight_max=3)
        extend_left(pre.chain, spG_l, spF_l, steps=steps, left_P=left_P)
    else:
        extend_right(pre.chain, spF, spG, steps=steps, k_solver=ks,
                     h_solver=hs, den_kernel=ker, space_factory=fac,
                     keep_constants=args.keep_constants)
    rec = chain_record(pre.chain, latex=args.format == "latex")
    _emit(args, {"preset": pre.id, "chain": rec})
    return 0


def cmd_classify(args):
    if args.pattern:
        a, b = _parse_pattern(args.pattern)
        try:
            cls = classify(tuple(bool(x) for x in a), tuple(bool(x) for x in b))
        except Proportional as e:
            _emit(args, {"error": "Proportional", "detail": str(e)})
            return 1
        rec = {"a": list(a), "b": list(b), "class": cls}
        if args.empirical:
            rec["empirical"] = empirical_class(a, b)
            if rec["empirical"] != cls:
                _emit(args, rec)
                return 1
        _emit(args, rec)
        return 0
    table = classification_record(classification_table())
    out = {"table": table}
    code = 0
    if args.empirical:
        emp = []
        for (a, b), (expected, strategy) in EMPIRICAL_PATTERNS.items():
            got = empirical_class(a, b)
            emp.append({"a": list(a), "b": list(b), "strategy": strategy,
                        "expected": expected, "empirical": got,
                        "agrees": got == expected})
            if got != expected:
                code = 1
        out["empirical"] = emp
    _emit(args, out)
    return code


def cmd_export(args):
    try:
        with open(args.session) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise NothingToExport("no session file %r" % args.session)
    if not data:
        raise NothingToExport("session is empty")
    if args.target == "json":
        text = to_json(data)
    else:
        text = _latex_of(data)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _latex_of(data):
    lines = ["% generated report"]

    def walk(obj, indent=0):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk_entry(k, obj[k], indent)
        elif isinstance(obj, list):
            for item in obj:
                walk(item, indent)
        else:
            lines.append("  " * indent + str(obj))

    def walk_entry(k, v, indent):
        if k.endswith("_latex"):
            if isinstance(v, list):
                for piece in v:
                    lines.append("$" + piece + "$")
            else:
                lines.append("$" + str(v) + "$")
        elif isinstance(v, (dict, list)):
            lines.append("  " * indent + "%% " + k)
            walk(v, indent + 1)
        else:
            lines.append("  " * indent + "%% %s: %s" % (k, v))

    walk(data)
    return "\n".join(lines)


def _emit(args, payload):
    text = to_json(payload)
    if getattr(args, "session", None) and getattr(args, "command", "") != "export":
        with open(args.session, "w") as fh:
            fh.write(text + "\n")
    if args.format == "text":
        _print_text(payload)
    else:
        print(text)


def _print_text(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for k in sorted(payload):
            v = payload[k]
            if isinstance(v, (dict, list)):
                print(pad + k + ":")
                _print_text(v, indent + 1)
            else:
                print(pad + "%s: %s" % (k, v))
    elif isinstance(payload, list):
        for item in payload:
            _print_text(item, indent)
            if isinstance(item, dict):
                print(pad + "-")
    else:
        print(pad + str(payload))


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lenard",
        description="Exact checks and Lenard-Magri recursion for non-local "
                    "Poisson structures.")
    ap.add_argument("--config", help="key = value config file")
    sub = ap.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--preset")
        p.add_argument("--format", choices=("text", "latex", "json"),
                       default="json")
        p.add_argument("--floor", type=int)
        p.add_argument("--ansatz", help="N,d,p bounds for the solver")
        p.add_argument("--params", help="comma-separated k=v bindings")
        p.add_argument("--seed", type=int, default=0,
                       help="determinism seed for randomized property runs")
        p.add_argument("--session", help="write the machine result here")

    pc = sub.add_parser("check", help="skewadjointness / Jacobi / compatibility")
    common(pc)
    pc.add_argument("--what", choices=("skew", "jacobi", "compat"))
    pc.add_argument("--op", help="operator expression to check")
    pc.add_argument("--generators", help="comma-separated generator names")

    pch = sub.add_parser("chain", help="run the Lenard-Magri recursion")
    common(pch)
    pch.add_argument("--direction", choices=("right", "left"), default="right")
    pch.add_argument("--steps", type=int)
    pch.add_argument("--verify-only", dest="verify_only", action="store_true")
    pch.add_argument("--keep-constants", dest="keep_constants",
                     action="store_true")

    pcl = sub.add_parser("classify", help="zero-pattern classification sweep")
    common(pcl)
    pcl.add_argument("--empirical", action="store_true")
    pcl.add_argument("--pattern", help='e.g. "b=(0,1,1),a=(1,0,0)"')

    pe = sub.add_parser("export", help="export a saved session")
    pe.add_argument("--session", required=True)
    pe.add_argument("--target", choices=("latex", "json"), default="json")
    pe.add_argument("--out")
    pe.add_argument("--format", default="json")

    pp = sub.add_parser("presets", help="list presets / show expected equations")
    pp.add_argument("action", nargs="?", default="list",
                    choices=("list", "equations"))
    pp.add_argument("target", nargs="?", help="preset id for `equations`")
    pp.add_argument("--format", default="text")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.config:
            cfg = read_config(args.config)
            merged = [cfg.pop("command", args.command or "check")]
            for k, v in cfg.items():
                flag = "--" + k.replace("_", "-")
                if v in ("true", "yes"):
                    merged.append(flag)
                else:
                    merged.extend([flag, v])
            args = ap.parse_args(merged)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "chain":
            return cmd_chain(args)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "export":
            return cmd_export(args)
        if args.command == "presets":
            if args.action == "equations":
                from .presets import expected_equations
                for line in expected_equations(args.target or ""):
                    print(line)
                return 0
            for pid in preset_ids():
                print(pid)
            return 0
        ap.print_help()
        return 0
    except ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 2
    except InsufficientTruncation as e:
        print("inconclusive: %s" % e, file=sys.stderr)
        return 2
    except NothingToExport as e:
        print("nothing to export: %s" % e, file=sys.stderr)
        return 1
    except UnknownPreset as e:
        print("unknown preset: %s" % e, file=sys.stderr)
        return 2
    except LenardError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
