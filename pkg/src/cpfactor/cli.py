"""Command-line driver: ``cpfactor <command> [options]``.

Exit codes: 0 verified, 1 other library error, 2 parse error, 3 size cap or
bound exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import acceptance
from .affine import affine_factorization, datum_from_affine_group
from .bn import build_datum, rank1_criterion, verify_unipotent
from .carter import carter_factorization
from .errors import (BoundExceeded, CapExceeded, CpFactorError, NotRankOne, SpecParseError,
                     VerificationFailed)
from .factorize import (CACHE_ENV, gamma_cp_exact, gamma_cp_n_exact, gamma_cp_oracle,
                        gamma_cp_s_exact, gamma_cp_ss_upper, jsonable, set_cache_enabled,
                        socle_sum_bound)
from .perms import Permutation
from .specs import build_group, spec_hash
from .structure import carter_subgroup, check_m_bound, socle_series
from .subgroups import (center, enumerate_subgroups, normalizer, subgroup_closure,
                        sylow_subgroup, whole_group)
from .sylow2 import alternating_sylow2, symmetric_sylow2

SCHEMA_VERSION = 1
log = logging.getLogger("cpfactor")


class CommandFailed(Exception):
    """A command finished but its result did not verify."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def parse_base(g, text, seed=None):
    """Subgroup selector: ``whole``, ``center``, ``carter``, ``sylow:p``,
    ``sylow-normalizer:p``, ``index:i,j,...`` or ``perm:(0 1);(1 2 3)``."""
    kind, _, arg = text.partition(":")
    if kind == "whole":
        return whole_group(g)
    if kind == "center":
        return center(g)
    if kind == "carter":
        return carter_subgroup(g, seed).subgroup
    if kind == "sylow":
        return sylow_subgroup(g, int(arg))
    if kind == "sylow-normalizer":
        return normalizer(sylow_subgroup(g, int(arg)))
    if kind == "index":
        return subgroup_closure(g, [int(x) for x in arg.split(",") if x])
    if kind == "perm":
        n = g.domain.degree
        idx = [g.index_of(Permutation.parse(p, n)) for p in arg.split(";") if p.strip()]
        if any(i is None for i in idx):
            raise SpecParseError(text, 0, "permutation is not in the group")
        return subgroup_closure(g, idx)
    raise SpecParseError(text, 0, f"unknown base selector {kind!r}")


def _witness_json(w, trace=False):
    out = w.to_json()
    if trace and "trace" in w.notes:
        out["trace"] = w.notes["trace"]
    if "bound" in w.notes:
        out["bound"] = round(float(w.notes["bound"]), 6)
    return out


def _require(w, out):
    if not w.verified:
        raise CommandFailed("witness did not verify", out)


def cmd_enumerate(args):
    g = build_group(args.group)
    subs = enumerate_subgroups(g, args.filter, up_to_conjugacy=args.classes)
    rows = [{"order": s.order, "generators": [g.encode(x) for x in s.generators],
             "hash": s.key().hex()} for s in subs]
    return {"group": g.spec, "order": g.order, "filter": args.filter,
            "up_to_conjugacy": args.classes, "count": len(rows), "subgroups": rows}


def cmd_gamma(args):
    g = build_group(args.group)
    if args.base in ("nilpotent", "solvable"):
        fn = gamma_cp_n_exact if args.base == "nilpotent" else gamma_cp_s_exact
        value, base = fn(g)
        return {"group": g.spec, "quantity": f"gamma_{args.base}", "k": jsonable(value),
                "base_order": base.order if base is not None else None}
    if args.base == "special":
        rep = gamma_cp_ss_upper(g)
        out = {"group": g.spec, "quantity": "gamma_special_upper", **rep.to_json()}
        if rep.witness is not None:
            out["witness"] = _witness_json(rep.witness)
        return out
    a = parse_base(g, args.base, args.seed)
    res = gamma_cp_exact(g, a)
    out = {"group": g.spec, "base": args.base, "base_order": a.order, "k": jsonable(res.value),
           "states": res.states}
    if res.witness is not None:
        out.update(witness=_witness_json(res.witness), verified=res.witness.verified)
        _require(res.witness, out)
    return out


def cmd_oracle(args):
    g = build_group(args.group)
    a = parse_base(g, args.base, args.seed)
    return {"group": g.spec, "base": args.base, "base_order": a.order,
            "k": jsonable(gamma_cp_oracle(g, a, k_max=args.k_max))}


def cmd_bn_verify(args):
    d = build_datum(args.group)
    rep = verify_unipotent(d, exact=not args.no_exact)
    out = {**d.summary(), **rep.to_json()}
    try:
        out["rank1"] = rank1_criterion(d).to_json()
    except NotRankOne as exc:
        out["rank1"] = {"applicable": False, "reason": str(exc)}
    if not (rep.four and rep.h_cap_trivial):
        raise CommandFailed("unipotent factorization checks failed", out)
    return out


def _sylow2(fn, args):
    w, fac = fn(args.n, verify=None if args.verify is None else args.verify)
    out = {"n": args.n, "k": fac.length, "layouts": fac.layouts, "trace": fac.trace}
    if w is not None:
        out["witness"] = _witness_json(w)
        out["verified"] = w.verified
        _require(w, out)
    return out


def cmd_sn_sylow2(args):
    return _sylow2(symmetric_sylow2, args)


def cmd_an_sylow2(args):
    return _sylow2(alternating_sylow2, args)


def cmd_affine(args):
    g = build_group(args.group)
    d = datum_from_affine_group(g)
    w = affine_factorization(d)
    out = {"group": g.spec, "p": d.p, "n": d.n, "H_order": d.H.order,
           "witness": _witness_json(w)}
    _require(w, out)
    return out


def cmd_carter(args):
    g = build_group(args.group)
    c = carter_subgroup(g, args.seed)
    out = {"group": g.spec, "order": g.order, "carter_order": c.subgroup.order,
           "carter_generators": [g.encode(x) for x in c.subgroup.generators],
           "nilpotent": c.nilpotent, "self_normalizing": c.self_normalizing,
           "route": c.route}
    if not c.certified:
        raise CommandFailed("Carter subgroup failed certification", out)
    if args.factorize:
        w = carter_factorization(g, c.subgroup)
        out["witness"] = _witness_json(w, trace=True)
        _require(w, out)
    return out


def cmd_socle(args):
    g = build_group(args.group)
    rep = socle_series(g)
    return {**rep.to_json(), "group": g.spec, "m_bound": check_m_bound(rep).to_json()}


def cmd_bounds(args):
    g = build_group(args.group)
    ss = gamma_cp_ss_upper(g)
    out = {"group": g.spec, "gamma_special": ss.to_json()}
    out["socle_sum"] = {k: jsonable(v) for k, v in socle_sum_bound(g).items()}
    return out


def cmd_suite(args):
    if args.workers > 1:
        nums = [c[0] for c in acceptance.CRITERIA]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(acceptance.run_criterion, nums, [args.name] * len(nums)))
    else:
        results = acceptance.run_suite(args.name)
    for r in results:
        log.info(r.line())
    out = {"suite": args.name, "criteria": [r.to_json() for r in results]}
    if not all(r.passed for r in results):
        raise CommandFailed("acceptance suite has failures", out)
    return out


COMMANDS = {
    "enumerate": cmd_enumerate, "gamma": cmd_gamma, "oracle": cmd_oracle,
    "bn-verify": cmd_bn_verify, "sn-sylow2": cmd_sn_sylow2, "an-sylow2": cmd_an_sylow2,
    "affine-factorize": cmd_affine, "carter": cmd_carter, "socle": cmd_socle,
    "bounds": cmd_bounds, "suite": cmd_suite,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--no-cache", action="store_true",
                        help=f"ignore the double-coset cache (${CACHE_ENV})")
    common.add_argument("--output", "-o", default=None, help="write the report here")
    common.add_argument("--verbose", "-v", action="store_true")

    p = argparse.ArgumentParser(prog="cpfactor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("enumerate", "nilpotent or solvable subgroups")
    s.add_argument("--group", required=True)
    s.add_argument("--filter", choices=("nilpotent", "solvable"), default="nilpotent")
    s.add_argument("--classes", action="store_true", help="one per conjugacy class")

    s = add("gamma", "shortest conjugate factorization by a base subgroup")
    s.add_argument("--group", required=True)
    s.add_argument("--base", required=True,
                   help="selector (see parse_base) or nilpotent|solvable|special")

    s = add("oracle", "brute-force check of the shortest length")
    s.add_argument("--group", required=True)
    s.add_argument("--base", required=True)
    s.add_argument("--k-max", type=int, default=12)

    s = add("bn-verify", "unipotent factorizations of sl:2,q / su:3,3 / sl:3,2")
    s.add_argument("--group", required=True)
    s.add_argument("--no-exact", action="store_true", help="skip the exact length cross-check")

    for name, help_ in (("sn-sylow2", "S_n from Sylow 2-subgroups"),
                        ("an-sylow2", "A_n from Sylow 2-subgroups")):
        s = add(name, help_)
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--verify", dest="verify", action="store_true", default=None)
        s.add_argument("--no-verify", dest="verify", action="store_false")

    s = add("affine-factorize", "affine primitive group from conjugates of H")
    s.add_argument("--group", required=True)

    s = add("carter", "Carter subgroup, optionally with a factorization")
    s.add_argument("--group", required=True)
    s.add_argument("--factorize", action="store_true")

    s = add("socle", "non-abelian socle series")
    s.add_argument("--group", required=True)

    s = add("bounds", "special solvable bound and the socle-sum check")
    s.add_argument("--group", required=True)

    s = add("suite", "acceptance battery")
    s.add_argument("name", choices=acceptance.MODES)
    s.add_argument("--workers", type=int, default=1, help="criteria run in parallel processes")
    return p


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, obj if not isinstance(obj, list) else json.dumps(obj)


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, default=jsonable) + "\n"
    rows = list(_flatten(report))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", "key", "value"])
        for k, v in rows:
            w.writerow([report["command"], k, v])
        return buf.getvalue()
    lines = []
    for k, v in rows:
        if k.startswith("result.trace") or k.endswith(".trace"):
            continue
        lines.append(f"{k}: {v}")
    trace = report["result"].get("trace") or report["result"].get("witness", {}).get("trace")
    if trace:
        lines.append("trace:")
        lines.extend("  " + t for t in trace)
    return "\n".join(lines) + "\n"


def run(args):
    """Execute a parsed command; returns ``(report, exit_code)``."""
    set_cache_enabled(not args.no_cache)
    report = {"schema": SCHEMA_VERSION, "command": args.command, "seed": args.seed}
    spec = getattr(args, "group", None)
    code = 0
    try:
        if spec is not None:
            report["spec_hash"] = spec_hash(spec)
        report["result"] = COMMANDS[args.command](args)
        report["status"] = "ok"
    except SpecParseError as exc:
        report.update(status="parse-error", error=str(exc))
        code = 2
    except (CapExceeded, BoundExceeded) as exc:
        report.update(status="bound-exceeded", error=str(exc))
        code = 3
    except (VerificationFailed, CommandFailed) as exc:
        report.update(status="verification-failed", error=str(exc))
        if getattr(exc, "result", None) is not None:
            report["result"] = exc.result
        code = 4
    except CpFactorError as exc:
        report.update(status="error", error=f"{type(exc).__name__}: {exc}")
        code = 1
    report.setdefault("result", {})
    return report, code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose or args.command == "suite"
                        else logging.WARNING, format="%(message)s", stream=sys.stderr)
    report, code = run(args)
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        log.error(report.get("error", "failed"))
    return code


if __name__ == "__main__":
    sys.exit(main())
