"""Instance and certificate files, with a canonical JSON serializer.

Rationals travel as strings "p/q" (never floats).  The canonical
serializer fixes field order and formatting, so serializing a parsed
corpus file reproduces it byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .pairs import (
    PairError,
    make_contraction,
    make_fan,
    make_pair,
    validate_contraction,
)
from .search import HyperplaneCertificate


class InstanceError(ValueError):
    """Bad instance or certificate file; the message carries the field."""


def parse_fraction(s, where="value"):
    if isinstance(s, bool) or isinstance(s, float):
        raise InstanceError("%s: rationals must be strings, not %r" % (where, s))
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InstanceError("%s: expected a rational string, got %r" % (where, s))
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InstanceError("%s: cannot parse rational %r" % (where, s))


def frac_str(f):
    return str(Fraction(f))


def _int_vector(v, where):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InstanceError("%s: expected a list of integers, got %r" % (where, v))
    return tuple(v)


def _int_matrix(m, where):
    if not isinstance(m, list):
        raise InstanceError("%s: expected a list of integer vectors" % where)
    return tuple(_int_vector(row, where) for row in m)


# ---------------------------------------------------------------------------
# instances


def instance_from_obj(obj):
    """Parse a JSON object into (ToricContraction, GPair), fully validated."""
    if not isinstance(obj, dict):
        raise InstanceError("instance: expected a JSON object")
    known = {"comment", "rank_N", "rays", "max_cones", "pi", "sigma_bar",
             "B", "bdiv_A", "general"}
    for k in obj:
        if k not in known:
            raise InstanceError("instance: unknown field %r" % k)
    try:
        rank = int(obj["rank_N"])
    except (KeyError, TypeError, ValueError):
        raise InstanceError("rank_N: missing or not an integer")
    rays = _int_matrix(obj.get("rays", None), "rays")
    if any(len(r) != rank for r in rays):
        raise InstanceError("rays: vector length differs from rank_N")
    mc = obj.get("max_cones", None)
    if not isinstance(mc, list):
        raise InstanceError("max_cones: expected a list of index lists")
    max_cones = tuple(_int_vector(c, "max_cones") for c in mc)
    pi = _int_matrix(obj.get("pi", None), "pi")
    if any(len(row) != rank for row in pi):
        raise InstanceError("pi: row length differs from rank_N")
    sb = obj.get("sigma_bar")
    sb_gens = None
    if sb is not None:
        sb_gens = _int_matrix(sb, "sigma_bar")
        if any(len(g) != len(pi) for g in sb_gens):
            raise InstanceError("sigma_bar: vector length differs from the base rank")
    b_map = obj.get("B", {})
    if not isinstance(b_map, dict):
        raise InstanceError("B: expected an object mapping ray index to rational")
    b = [Fraction(0)] * len(rays)
    for k, v in b_map.items():
        try:
            i = int(k)
        except ValueError:
            raise InstanceError("B: bad ray index %r" % k)
        if not 0 <= i < len(rays):
            raise InstanceError("B: ray index %d out of range" % i)
        b[i] = parse_fraction(v, "B[%s]" % k)
        if not 0 <= b[i] <= 1:
            raise InstanceError("B[%s]: coefficient %s outside [0,1]" % (k, v))
    a_raw = obj.get("bdiv_A", [[0] * rank])
    if not isinstance(a_raw, list) or not a_raw:
        raise InstanceError("bdiv_A: expected a nonempty list of rational vectors")
    a_pts = []
    for j, p in enumerate(a_raw):
        if not isinstance(p, list) or len(p) != rank:
            raise InstanceError("bdiv_A[%d]: expected a vector of length %d" % (j, rank))
        a_pts.append(tuple(parse_fraction(x, "bdiv_A[%d]" % j) for x in p))
    general = []
    for j, g in enumerate(obj.get("general", [])):
        if not isinstance(g, dict) or set(g) - {"b", "A"}:
            raise InstanceError("general[%d]: expected {b, A}" % j)
        bj = parse_fraction(g.get("b"), "general[%d].b" % j)
        if bj < 0:
            raise InstanceError("general[%d].b: must be nonnegative" % j)
        aj = _int_matrix(g.get("A", None), "general[%d].A" % j)
        if not aj or any(len(p) != rank for p in aj):
            raise InstanceError("general[%d].A: expected integer vectors of length %d"
                                % (j, rank))
        general.append((bj, aj))
    try:
        fan = make_fan(rank, rays, max_cones)
        tc = make_contraction(fan, pi, sb_gens)
        validate_contraction(tc)
        pair = make_pair(fan, b, a_pts, general)
    except PairError as exc:
        raise InstanceError(str(exc))
    return tc, pair


def instance_to_obj(tc, pair, comment=None):
    obj = {}
    if comment is not None:
        obj["comment"] = comment
    obj["rank_N"] = tc.rank
    obj["rays"] = [list(r) for r in tc.fan.rays]
    obj["max_cones"] = [list(c) for c in tc.fan.max_cones]
    obj["pi"] = [list(row) for row in tc.pi]
    obj["sigma_bar"] = [list(g) for g in tc.sigma_bar.generators]
    obj["B"] = {str(i): frac_str(x) for i, x in enumerate(pair.b_inv)}
    obj["bdiv_A"] = [[frac_str(x) for x in p] for p in pair.bdiv_a.points]
    obj["general"] = [{"b": frac_str(bj), "A": [[int(x) for x in p] for p in aj.points]}
                      for bj, aj in pair.general]
    return obj


def dumps_canonical(obj):
    return json.dumps(obj, indent=2) + "\n"


def load_instance(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InstanceError("cannot read %s: %s" % (path, exc))
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InstanceError("%s: not valid JSON (%s)" % (path, exc))
    tc, pair = instance_from_obj(obj)
    return tc, pair, obj


def save_instance(path, tc, pair, comment=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(instance_to_obj(tc, pair, comment)))


# ---------------------------------------------------------------------------
# certificates

_TRANSCRIPT_KEYS = ("depth", "l", "case", "t", "phi", "interval", "w",
                    "w_minus", "w_plus", "lam", "new_rays",
                    "max_ray_discrepancy", "slice_mld", "width_gt_one",
                    "slice_u_ok", "invariant_point_ok", "q", "branch",
                    "descent_scale", "gamma", "phibar")


def _encode(x):
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, tuple):
        return [_encode(v) for v in x]
    if isinstance(x, list):
        return [_encode(v) for v in x]
    if isinstance(x, dict):
        return {k: _encode(x[k]) for k in x}
    return x


def certificate_to_obj(cert):
    records = []
    for rec in cert.transcript:
        out = {k: _encode(rec[k]) for k in _TRANSCRIPT_KEYS if k in rec}
        records.append(out)
    return {
        "phi_bar": list(cert.phi_bar),
        "gamma": frac_str(cert.gamma),
        "mld": frac_str(cert.mld),
        "d": cert.d,
        "transcript": records,
    }


def certificate_from_obj(obj):
    if not isinstance(obj, dict):
        raise InstanceError("certificate: expected a JSON object")
    for k in ("phi_bar", "gamma", "mld", "d"):
        if k not in obj:
            raise InstanceError("certificate: missing field %r" % k)
    phibar = _int_vector(obj["phi_bar"], "phi_bar")
    gamma = parse_fraction(obj["gamma"], "gamma")
    mld = parse_fraction(obj["mld"], "mld")
    try:
        d = int(obj["d"])
    except (TypeError, ValueError):
        raise InstanceError("d: expected an integer")
    transcript = obj.get("transcript", [])
    if not isinstance(transcript, list):
        raise InstanceError("transcript: expected a list")
    return HyperplaneCertificate(phibar, gamma, mld, d, tuple(transcript))


def load_certificate(path):
    try:
        with open(path, "rb") as fh:
            obj = json.loads(fh.read().decode("utf-8"))
    except OSError as exc:
        raise InstanceError("cannot read %s: %s" % (path, exc))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InstanceError("%s: not valid JSON (%s)" % (path, exc))
    return certificate_from_obj(obj)


def save_certificate(path, cert):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(certificate_to_obj(cert)))


# ---------------------------------------------------------------------------
# bundled corpus

CORPUS = ("a1_family", "a1_family_1_3", "a1_family_1_2", "a2_identity",
          "a3_identity", "halfplane", "cax4", "wedge25")


def corpus_bytes(name):
    if name not in CORPUS:
        raise InstanceError("unknown corpus instance %r" % name)
    return resources.files("toricmld").joinpath("data/%s.json" % name).read_bytes()


def load_corpus(name):
    obj = json.loads(corpus_bytes(name).decode("utf-8"))
    tc, pair = instance_from_obj(obj)
    return tc, pair, obj
