"""Command-line front end.

Subcommands: check | mld | lc | lct | find | verify | oracle-mld | gamma,
plus gen for the seeded instance generator.  Exit codes: 0 ok,
1 verification failure or negative result, 2 invalid input.  All values
print as exact rationals "p/q"; --json switches to machine output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .generator import random_instance
from .instances import (
    InstanceError,
    dumps_canonical,
    frac_str,
    instance_to_obj,
    load_certificate,
    load_instance,
    save_certificate,
)
from .pairs import PairError, analyze, is_glc, lct_pullback, mld_over_fiber, oracle_mld
from .search import find_hyperplane, gamma, gamma_closed, verify_certificate


def _emit(args, payload, text):
    if getattr(args, "json", False):
        print(json.dumps(payload))
    else:
        for line in text:
            print(line)


def _fail(args, code, message):
    if getattr(args, "json", False):
        print(json.dumps({"error": message}))
    else:
        print("error: %s" % message, file=sys.stderr)
    return code


def cmd_check(args):
    try:
        tc, pair, _obj = load_instance(args.instance)
        analyze(tc, pair)
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    _emit(args, {"valid": True, "rank": tc.rank, "base_rank": tc.base_rank},
          ["valid: rank %d germ over a rank-%d base" % (tc.rank, tc.base_rank)])
    return 0


def cmd_mld(args):
    try:
        tc, pair, _obj = load_instance(args.instance)
        _folded, _psi, bd = analyze(tc, pair)
        if not is_glc(bd):
            return _fail(args, 1, "pair is not g-lc")
        val = mld_over_fiber(tc, bd)
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    if val is None:
        _emit(args, {"mld": None}, ["not positive"])
        return 1
    _emit(args, {"mld": frac_str(val)}, [frac_str(val)])
    return 0


def cmd_lc(args):
    try:
        tc, pair, _obj = load_instance(args.instance)
        _folded, _psi, bd = analyze(tc, pair)
        glc = is_glc(bd)
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    _emit(args, {"glc": glc}, ["g-lc: %s" % ("yes" if glc else "no")])
    return 0 if glc else 1


def _parse_phibar(s):
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise InstanceError("--phibar expects a comma-separated integer vector")


def cmd_lct(args):
    try:
        phibar = _parse_phibar(args.phibar)
        tc, pair, _obj = load_instance(args.instance)
        _folded, _psi, bd = analyze(tc, pair)
        val = lct_pullback(tc, bd, phibar)
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    _emit(args, {"lct": frac_str(val)}, [frac_str(val)])
    return 0


def cmd_find(args):
    try:
        tc, pair, _obj = load_instance(args.instance)
        cert = find_hyperplane(tc, pair)
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    out = args.out or _default_cert_path(args.instance)
    save_certificate(out, cert)
    _emit(args,
          {"phi_bar": list(cert.phi_bar), "gamma": frac_str(cert.gamma),
           "mld": frac_str(cert.mld), "certificate": out},
          ["phi_bar = (%s)" % ", ".join(str(x) for x in cert.phi_bar),
           "gamma = %s" % frac_str(cert.gamma),
           "mld = %s" % frac_str(cert.mld),
           "certificate written to %s" % out])
    return 0


def _default_cert_path(instance_path):
    base = instance_path[:-5] if instance_path.endswith(".json") else instance_path
    return base + ".cert.json"


def cmd_verify(args):
    try:
        tc, pair, _obj = load_instance(args.instance)
        cert = load_certificate(args.certificate)
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    ok, reasons = verify_certificate(tc, pair, cert)
    if ok:
        _emit(args, {"verified": True}, ["certificate OK"])
        return 0
    _emit(args, {"verified": False, "reasons": reasons},
          ["certificate REJECTED"] + ["  - %s" % r for r in reasons])
    return 1


def cmd_oracle_mld(args):
    try:
        tc, pair, _obj = load_instance(args.instance)
        _folded, _psi, bd = analyze(tc, pair)
        found = oracle_mld(tc, bd, args.box)
        algo = mld_over_fiber(tc, bd) if is_glc(bd) else None
    except (InstanceError, PairError) as exc:
        return _fail(args, 2, str(exc))
    if found is None:
        _emit(args, {"oracle_mld": None, "box": args.box},
              ["no interior lattice point within box radius %d" % args.box])
        return 1
    val, witness = found
    agrees = algo is not None and algo == val
    _emit(args,
          {"oracle_mld": frac_str(val), "witness": list(witness),
           "box": args.box, "algorithm_mld": None if algo is None else frac_str(algo),
           "agrees": agrees},
          ["%s at (%s)" % (frac_str(val), ", ".join(str(x) for x in witness)),
           "upper bound for the mld; exact once the box holds a minimizer",
           "algorithm agrees" if agrees else
           "algorithm differs: %s" % ("not positive" if algo is None else frac_str(algo))])
    return 0


def cmd_gamma(args):
    try:
        d = int(args.dim)
        a = Fraction(args.mld)
        rec = gamma(d, a)
        closed = gamma_closed(d, a)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(args, 2, str(exc))
    assert rec == closed
    _emit(args, {"gamma": frac_str(rec), "closed_form": frac_str(closed)},
          ["recursion:   %s" % frac_str(rec),
           "closed form: %s" % frac_str(closed),
           "agree: yes"])
    return 0


def cmd_gen(args):
    import os

    written = []
    for i in range(args.count):
        seed = args.seed + i
        tc, pair, meta = random_instance(seed)
        name = "gen_%06d.json" % seed
        path = os.path.join(args.out_dir, name)
        os.makedirs(args.out_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            comment = "generated instance, seed %d" % seed
            fh.write(dumps_canonical(instance_to_obj(tc, pair, comment)))
        written.append(path)
    _emit(args, {"written": written},
          ["wrote %d instance(s) to %s" % (len(written), args.out_dir)])
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="toricmld",
        description="Exact mld/lct computations and certified invariant "
                    "hyperplane sections for germs of toric Fano contractions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("check", help="validate an instance file")
    sp.add_argument("instance")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("mld", help="minimal log discrepancy over the fiber")
    sp.add_argument("instance")
    common(sp)
    sp.set_defaults(func=cmd_mld)

    sp = sub.add_parser("lc", help="generalized log canonical test")
    sp.add_argument("instance")
    common(sp)
    sp.set_defaults(func=cmd_lc)

    sp = sub.add_parser("lct", help="lct of a pulled-back invariant hyperplane")
    sp.add_argument("instance")
    sp.add_argument("--phibar", required=True,
                    help="functional on the base, e.g. 1,0")
    common(sp)
    sp.set_defaults(func=cmd_lct)

    sp = sub.add_parser("find", help="search a certified hyperplane section")
    sp.add_argument("instance")
    sp.add_argument("--out", help="certificate path (default: <instance>.cert.json)")
    common(sp)
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("verify", help="re-check a certificate independently")
    sp.add_argument("instance")
    sp.add_argument("certificate")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle-mld", help="brute-force mld scan in a box")
    sp.add_argument("instance")
    sp.add_argument("--box", type=int, required=True, help="box radius")
    common(sp)
    sp.set_defaults(func=cmd_oracle_mld)

    sp = sub.add_parser("gamma", help="the bound function gamma(d, a)")
    sp.add_argument("--dim", required=True, help="dimension d >= 1")
    sp.add_argument("--mld", required=True, help="positive rational a, e.g. 2/3")
    common(sp)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("gen", help="write seeded random valid instances")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--out-dir", default=".")
    common(sp)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
