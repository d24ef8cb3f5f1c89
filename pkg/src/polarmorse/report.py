"""Serialization of Morse reports: canonical JSON and readable text.

Attractor orbits are expanded to individual attractors for output.
Algebraic numbers serialize as an exact minimal polynomial over Q plus a
floating approximation and a deterministic root index (roots of the
minimal polynomial sorted lexicographically by (re, im)); rationals
serialize as exact "p/q" strings.  JSON output is canonical (sorted
keys, fixed float formatting), so identical runs are byte-identical.
"""

from __future__ import annotations

import json

import mpmath

from .fields import RationalField, _poly_roots
from .poly import Poly, minpoly_over, poly_str
from .puiseux import INFINITE

QQ = RationalField()

_DPS = 17


def _f(x):
    """Deterministic float rendering."""
    v = float(x)
    if v == 0:
        v = 0.0  # normalize -0.0
    return v


def _rat_str(q):
    return str(q)


def _minpoly_str(mp):
    return poly_str(mp, ("T",))


def _root_index(mp, approx):
    """Index of ``approx`` among the sorted roots of a rational minpoly."""
    with mpmath.workdps(40):
        coeffs = [mpmath.mpf(int(c.numerator)) / mpmath.mpf(int(c.denominator))
                  for c in reversed(mp.coeffs_in(0))]
        roots = _poly_roots(coeffs)
        best, bestd = 0, None
        for k, r in enumerate(roots):
            d = abs(r - approx)
            if bestd is None or d < bestd:
                best, bestd = k, d
        return best


def _algebraic_json(field, elem, approx):
    """Encode one embedded value of a tower element."""
    if field is QQ:
        return {"rational": _rat_str(elem)}
    mp = minpoly_over(field, elem, QQ)
    if mp.degree_in(0) == 1:
        c1 = mp.terms[(1,)]
        c0 = mp.constant_term()
        return {"rational": _rat_str(QQ.neg(QQ.div(c0, c1)))}
    return {"min_poly": _minpoly_str(mp),
            "approx": [_f(approx.real), _f(approx.imag)],
            "root_index": _root_index(mp, approx)}


def _location_json(ind):
    a = ind.parent
    if a.kind == "affine":
        return {"type": "affine",
                "point": [_algebraic_json(a.point.field, a.point.x, ind.location[0]),
                          _algebraic_json(a.point.field, a.point.y, ind.location[1])],
                "chart": None}
    if ind.location == ("x-point",):
        point = [{"rational": "1"}, {"rational": "0"}, {"rational": "0"}]
    else:
        point = [_algebraic_json(a.point.field, a.point.u, ind.location[0]),
                 {"rational": "1"}, {"rational": "0"}]
    return {"type": "infinity", "point": point, "chart": a.chart}


def _alpha_json(ind):
    a = ind.parent
    if ind.alpha is INFINITE:
        return {"type": "infinite"}
    if a.kind == "affine":
        return {"type": "finite",
                "value": _algebraic_json(a.alpha_field, a.alpha_value, ind.alpha)}
    if a.alpha_field is QQ:
        return {"type": "finite",
                "value": {"rational": _rat_str(a.alpha_value)}}
    return {"type": "finite",
            "value": _algebraic_json(a.alpha_field, a.alpha_value, ind.alpha)}


def _branch_json(c):
    return {"ord_f": c.ord_f, "ord_ell": c.ord_ell,
            "mult_fbar": c.mult_fbar, "mult_hinf": c.mult_hinf,
            "contribution": c.contribution,
            "conj_multiplicity": c.conj_multiplicity}


def report_to_doc(report, variables=("x", "y")):
    """MorseReport -> plain JSON-ready dictionary."""
    from .morse import expand_individuals
    individuals = expand_individuals(report.attractors)
    gen = report.genericity
    doc = {
        "input": {
            "f": poly_str(report.f, variables),
            "ell": "(%s)*%s + (%s)*%s" % (report.ell.a, variables[0],
                                          report.ell.b, variables[1]),
            "degree": report.degree,
        },
        "genericity": {
            "polar_squarefree": gen.polar_squarefree,
            "ell_avoids_infinity_points": gen.ell_avoids_infinity_points,
            "no_degenerate_compositions": gen.no_degenerate_compositions,
            "redraws": gen.redraws,
            "seed": gen.seed,
        },
        "attractors": [
            {"location": _location_json(ind),
             "alpha": _alpha_json(ind),
             "index": ind.index,
             "branches": [_branch_json(c) for c in ind.parent.contributions]}
            for ind in individuals
        ],
        "morse_number": report.morse_number,
        "verification": None,
    }
    if report.verification is not None:
        v = report.verification
        doc["verification"] = {
            "matched": v.matched,
            "clusters": {str(k): n for k, n in sorted(v.observed.items())},
            "t_schedule": [_rat_str(t) for t in v.t_schedule],
            "mismatches": list(v.mismatches),
        }
    return doc


def to_json(report, variables=("x", "y")):
    return json.dumps(report_to_doc(report, variables), sort_keys=True,
                      indent=2, ensure_ascii=True)


def from_json(text):
    """Inverse of to_json up to document identity."""
    return json.loads(text)


def doc_to_json(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True)


def _coord_text(entry):
    if "rational" in entry:
        return entry["rational"]
    return "root #%d of %s (~%.6g%+.6gi)" % (
        entry["root_index"], entry["min_poly"],
        entry["approx"][0], entry["approx"][1])


def to_text(report, variables=("x", "y")):
    doc = report_to_doc(report, variables)
    lines = []
    lines.append("f      = %s" % doc["input"]["f"])
    lines.append("ell    = %s" % doc["input"]["ell"])
    lines.append("degree = %d" % doc["input"]["degree"])
    g = doc["genericity"]
    lines.append("genericity: squarefree=%s avoids-infinity=%s "
                 "non-degenerate=%s redraws=%s seed=%s"
                 % (g["polar_squarefree"], g["ell_avoids_infinity_points"],
                    g["no_degenerate_compositions"], g["redraws"], g["seed"]))
    lines.append("")
    lines.append("attractors:")
    for a in doc["attractors"]:
        loc = a["location"]
        if loc["type"] == "affine":
            where = "(%s, %s)" % tuple(_coord_text(p) for p in loc["point"])
        else:
            where = "[%s : %s : %s]" % tuple(_coord_text(p) for p in loc["point"])
        al = "infinity" if a["alpha"]["type"] == "infinite" \
            else _coord_text(a["alpha"]["value"])
        lines.append("  %-8s %-40s alpha=%-20s index=%d"
                     % (loc["type"], where, al, a["index"]))
        for b in a["branches"]:
            lines.append("      branch: ord_f=%s ord_ell=%s mult_fbar=%s "
                         "mult_hinf=%s contribution=%s conj=%s"
                         % (b["ord_f"], b["ord_ell"], b["mult_fbar"],
                            b["mult_hinf"], b["contribution"],
                            b["conj_multiplicity"]))
    lines.append("")
    lines.append("morse_number = %d" % doc["morse_number"])
    if doc["verification"] is not None:
        v = doc["verification"]
        lines.append("verification: matched=%s schedule=%s"
                     % (v["matched"], ",".join(v["t_schedule"])))
        for m in v["mismatches"]:
            lines.append("  mismatch: %s" % m)
    return "\n".join(lines) + "\n"
