"""Batch command-line front end.

Every subcommand prints a single JSON document (sorted keys, stable layout),
or a CSV table where noted, so identical invocations produce byte-identical
output.  Exit codes: 0 success, 2 invalid configuration, 3 work guard
exceeded, 4 structural invariant violated.
"""

import argparse
import csv
import io
import json
import sys

from . import __version__
from .errors import GuardExceeded, InvariantViolation
from .fields import FieldCtx, make_field, frobenius, solve_p_plus_1_root
from .lattices import (
    GramLattice,
    artin_invariant_from_disc,
    disc_kernel_space,
    discriminant,
    find_hyperbolic_pair,
)
from .quadratic_spaces import (
    BilinearSpace,
    Subspace,
    enumerate_totally_isotropic,
    is_neutral,
    standard_N0,
    witt_index,
)
from .crystals import (
    CharacteristicSubspace,
    enumerate_characteristic,
    is_characteristic,
    is_strictly_characteristic,
)
from .moduli import (
    build_plus_space,
    corollary_step,
    count_points,
    fiber_enumerate,
    fiber_formula,
    gamma_plus,
    isogeny_height,
    kummer_height,
    sigma_section,
    tower_prediction,
)
from .formal_groups import (
    fgl_additive,
    fgl_lubin_tate,
    fgl_multiplicative,
    height,
    n_series,
    torsion_analysis,
    verify_axioms,
)

SCHEMA = "ssk3/1"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_GUARD = 3
EXIT_INVARIANT = 4


# -- serialization helpers -----------------------------------------------------


def field_doc(ctx: FieldCtx):
    return {"p": ctx.p, "m": ctx.m, "modulus_coeffs": list(ctx.modulus)}


def element_doc(e):
    return list(e.coeffs)


def subspace_doc(K: Subspace):
    return {
        "field": field_doc(K.field),
        "basis_rows": [[element_doc(e) for e in row] for row in K.basis],
    }


def char_doc(K: CharacteristicSubspace):
    doc = subspace_doc(K.subspace)
    doc["characteristic"] = True
    doc["strict"] = K.strict
    return doc


def space_doc(V: BilinearSpace):
    return {"p": V.base.p, "dim": V.dim, "gram": [list(r) for r in V.gram]}


def emit(doc, args):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _write(text, args)


def emit_csv(rows, header, args):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write(buf.getvalue(), args)


def emit_jsonl(docs, args):
    text = "".join(json.dumps(d, sort_keys=True) + "\n" for d in docs)
    _write(text, args)


def _write(text, args):
    out = getattr(args, "output", None)
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def read_gram(path):
    """Gram matrix from a JSON file {rank, rows: [[...]]} or a bare CSV matrix."""
    if path.endswith(".csv"):
        with open(path) as f:
            rows = [[int(x) for x in row] for row in csv.reader(f) if row]
        return GramLattice(tuple(tuple(r) for r in rows))
    with open(path) as f:
        doc = json.load(f)
    rows = doc["rows"]
    if "rank" in doc and doc["rank"] != len(rows):
        raise ValueError("rank field does not match the number of rows")
    return GramLattice(tuple(tuple(int(x) for x in r) for r in rows))


def _parse_basis(args, space, fld):
    """Basis rows from --basis (inline JSON) or --basis-file; entries are
    coefficient arrays (or bare ints for prime-field scalars)."""
    if getattr(args, "basis", None):
        rows = json.loads(args.basis)
    elif getattr(args, "basis_file", None):
        with open(args.basis_file) as f:
            doc = json.load(f)
        rows = doc["basis_rows"] if isinstance(doc, dict) else doc
    else:
        return None
    built = []
    for row in rows:
        built.append(tuple(fld.element(c if isinstance(c, list) else [c]) for c in row))
    return Subspace.span(space, fld, built)


def _base_point(args, space, fld, sigma0):
    """Pick a base point by --index into the deterministic enumeration or --basis."""
    sub = _parse_basis(args, space, fld)
    if sub is not None:
        return CharacteristicSubspace(sub, sigma0)
    pts = enumerate_characteristic(space, fld, sigma0, args.cap)
    if not pts:
        raise ValueError("no characteristic subspaces over this field")
    if not 0 <= args.index < len(pts):
        raise ValueError("--index %d out of range [0, %d)" % (args.index, len(pts)))
    return pts[args.index]


# -- command handlers ------------------------------------------------------------


def cmd_field_make(args):
    ctx = make_field(args.p, args.m)
    emit({"schema": SCHEMA, "field": field_doc(ctx)}, args)


def cmd_lattice_info(args):
    L = read_gram(args.gram)
    d = discriminant(L)
    doc = {"schema": SCHEMA, "rank": L.rank, "discriminant": d}
    if args.p:
        try:
            doc["artin_invariant"] = artin_invariant_from_disc(d, args.p)
        except ValueError as exc:
            doc["artin_invariant"] = None
            doc["artin_invariant_error"] = str(exc)
    emit(doc, args)


def cmd_lattice_embed(args):
    L = read_gram(args.gram)
    pair = find_hyperbolic_pair(L, args.bound, args.cap)
    if pair is None:
        emit({"schema": SCHEMA, "found": False, "bound": args.bound}, args)
    else:
        e, z = pair
        emit({"schema": SCHEMA, "found": True, "bound": args.bound,
              "E": list(e), "Z": list(z)}, args)


def cmd_lattice_disckernel(args):
    L = read_gram(args.gram)
    V = disc_kernel_space(L, args.p)
    emit({"schema": SCHEMA, "space": space_doc(V)}, args)


def cmd_space_n0(args):
    V = standard_N0(args.p, args.sigma0)
    emit({"schema": SCHEMA, "space": space_doc(V)}, args)


def cmd_space_witt(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    w = witt_index(V, fld, args.cap)
    emit({"schema": SCHEMA, "p": args.p, "sigma0": args.sigma0, "n": args.n,
          "witt_index": w, "neutral": is_neutral(V, fld, args.cap)}, args)


def cmd_space_enumerate(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    subs = enumerate_totally_isotropic(V, fld, args.r, args.cap)
    docs = [subspace_doc(K) for K in subs]
    if args.format == "jsonl":
        emit_jsonl(docs, args)
    else:
        emit({"schema": SCHEMA, "count": len(docs), "subspaces": docs}, args)


def cmd_crystal_enumerate(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    pts = enumerate_characteristic(V, fld, args.sigma0, args.cap)
    docs = [char_doc(K) for K in pts]
    if args.format == "jsonl":
        emit_jsonl(docs, args)
    else:
        emit({"schema": SCHEMA, "count": len(docs), "points": docs}, args)


def cmd_crystal_check(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    sub = _parse_basis(args, V, fld)
    if sub is None:
        raise ValueError("provide the subspace via --basis or --basis-file")
    ok = is_characteristic(sub, args.sigma0)
    doc = {"schema": SCHEMA, "characteristic": ok}
    if ok:
        doc["strict"] = is_strictly_characteristic(sub, args.sigma0)
    emit(doc, args)


def cmd_moduli_plus(args):
    P = build_plus_space(standard_N0(args.p, args.sigma0))
    emit({"schema": SCHEMA, "base": space_doc(P.base_space), "full": space_doc(P.full_space),
          "D_index": P.D_index, "E_index": P.E_index}, args)


def cmd_moduli_section(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    P = build_plus_space(V)
    K = _base_point(args, V, fld, args.sigma0)
    emit({"schema": SCHEMA, "base_point": char_doc(K),
          "section": char_doc(sigma_section(K, P))}, args)


def cmd_moduli_project(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    P = build_plus_space(V)
    sub = _parse_basis(args, P.full_space, fld)
    if sub is None:
        raise ValueError("provide the plus-space subspace via --basis or --basis-file")
    Kp = CharacteristicSubspace(sub, args.sigma0 + 1)
    emit({"schema": SCHEMA, "projection": char_doc(gamma_plus(Kp, P))}, args)


def cmd_moduli_fiber(args):
    V = standard_N0(args.p, args.sigma0)
    fld = make_field(args.p, args.n)
    P = build_plus_space(V)
    K0 = _base_point(args, V, fld, args.sigma0)
    if args.bruteforce:
        pts = fiber_enumerate(K0, P, fld, args.cap)
        rows = [("bruteforce", "", json.dumps(subspace_doc(K.subspace), sort_keys=True)) for K in pts]
        doc = {"schema": SCHEMA, "mode": "bruteforce", "count": len(pts),
               "points": [char_doc(K) for K in pts]}
    else:
        desc = fiber_formula(K0, P, fld, args.cap)
        rows = [(pt.kind, "" if pt.lam is None else json.dumps(element_doc(pt.lam)),
                 json.dumps(subspace_doc(pt.subspace.subspace), sort_keys=True))
                for pt in desc.points]
        doc = {"schema": SCHEMA, "mode": "formula", "count": len(desc.points),
               "field": field_doc(desc.field), "extended": desc.extended,
               "points": [{"kind": pt.kind,
                           "lambda": None if pt.lam is None else element_doc(pt.lam),
                           "subspace": char_doc(pt.subspace)} for pt in desc.points]}
    if args.format == "csv":
        emit_csv(rows, ("kind", "lambda", "subspace"), args)
    else:
        emit(doc, args)


def cmd_moduli_count(args):
    c = count_points(args.p, args.sigma0, args.n, args.cap)
    t = tower_prediction(args.p, args.sigma0, args.n)
    fld = "GF(%d^%d)" % (args.p, args.n)
    doc = {"schema": SCHEMA, "p": args.p, "sigma0": args.sigma0, "n": args.n,
           "field": fld, "count": c, "prediction": t, "match": c == t}
    if args.format == "csv":
        emit_csv([(args.p, args.sigma0, fld, c, t, c == t)],
                 ("p", "sigma0", "field", "count", "prediction", "match"), args)
    else:
        emit(doc, args)


def cmd_moduli_tower(args):
    t = tower_prediction(args.p, args.sigma0, args.n)
    emit({"schema": SCHEMA, "p": args.p, "sigma0": args.sigma0, "n": args.n,
          "prediction": t}, args)


def _make_law(args):
    if args.law == "additive":
        return fgl_additive(args.p, args.prec if args.prec is not None else 12)
    if args.law == "multiplicative":
        return fgl_multiplicative(args.p, args.prec if args.prec is not None else 12)
    if args.law == "lubin-tate":
        if args.height is None:
            raise ValueError("lubin-tate needs --height")
        prec = args.prec if args.prec is not None else args.p ** args.height + 1
        return fgl_lubin_tate(args.p, args.height, prec)
    raise ValueError("unknown law %r" % (args.law,))


def _law_doc(F):
    return {"p": F.p, "prec": F.prec,
            "coeffs": {("%d,%d" % k): v for k, v in sorted(F.coeffs.items())}}


def cmd_fgl_make(args):
    F = _make_law(args)
    verify_axioms(F)
    emit({"schema": SCHEMA, "law": _law_doc(F)}, args)


def cmd_fgl_nseries(args):
    F = _make_law(args)
    s = n_series(F, args.n)
    emit({"schema": SCHEMA, "n": args.n,
          "series": {str(k): v for k, v in sorted(s.items())}}, args)


def cmd_fgl_height(args):
    F = _make_law(args)
    emit({"schema": SCHEMA, "height": height(F)}, args)


def cmd_fgl_torsion(args):
    F = _make_law(args)
    fld = make_field(args.p, args.ring_ext)
    rep = torsion_analysis(F, fld, args.trunc, args.n, args.cap)
    emit({"schema": SCHEMA, "report": {
        "n": rep.n, "num_points": rep.num_points,
        "n_coprime_to_p": rep.n_coprime_to_p, "bijective": rep.bijective,
        "kernel_size": rep.kernel_size, "p_kernel_size": rep.p_kernel_size,
        "height": rep.height, "valuation_checked": rep.valuation_checked,
        "valuation_ok": rep.valuation_ok}}, args)


def cmd_isogeny_height(args):
    emit({"schema": SCHEMA, "height": isogeny_height(args.s0, args.s0p)}, args)


def cmd_isogeny_kummer(args):
    emit({"schema": SCHEMA, "height": kummer_height(args.s0)}, args)


def cmd_isogeny_step(args):
    s, h = corollary_step(args.s0)
    emit({"schema": SCHEMA, "sigma0": s, "height": h}, args)


# -- parser ----------------------------------------------------------------------


def _add_common(sp, *, p=True, sigma0=False, n=False, cap=True, fmt=None):
    if p:
        sp.add_argument("-p", type=int, required=True, help="odd prime characteristic")
    if sigma0:
        sp.add_argument("-s", "--sigma0", type=int, required=True, help="Artin invariant")
    if n:
        sp.add_argument("-n", type=int, default=1, help="extension degree (field GF(p^n))")
    if cap:
        sp.add_argument("--cap", type=int, default=None, help="enumeration work cap override")
    if fmt:
        sp.add_argument("--format", choices=fmt, default="json")
    sp.add_argument("-o", "--output", default=None, help="write output to a file")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ssk3",
        description="Exact lattice, characteristic-subspace, and formal-group computations "
                    "for supersingular K3 moduli at desk scale.",
    )
    ap.add_argument("--version", action="version", version="ssk3 " + __version__)
    top = ap.add_subparsers(dest="command", required=True)

    g = top.add_parser("field", help="finite field constructors").add_subparsers(dest="sub", required=True)
    s = g.add_parser("make", help="deterministic GF(p^m)")
    _add_common(s, cap=False)
    s.add_argument("-m", type=int, default=1, help="extension degree")
    s.set_defaults(func=cmd_field_make)

    g = top.add_parser("lattice", help="Gram-matrix lattices").add_subparsers(dest="sub", required=True)
    s = g.add_parser("info", help="discriminant and Artin invariant")
    s.add_argument("--gram", required=True, help="JSON {rank, rows} or CSV matrix file")
    s.add_argument("-p", type=int, default=None)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_lattice_info)
    s = g.add_parser("embed", help="bounded search for a hyperbolic pair (E, Z)")
    s.add_argument("--gram", required=True)
    s.add_argument("--bound", type=int, default=3)
    s.add_argument("--cap", type=int, default=None)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_lattice_embed)
    s = g.add_parser("disckernel", help="the GF(p)-space p*dual/p*lattice")
    s.add_argument("--gram", required=True)
    _add_common(s, cap=False)
    s.set_defaults(func=cmd_lattice_disckernel)

    g = top.add_parser("space", help="bilinear spaces over GF(p)").add_subparsers(dest="sub", required=True)
    s = g.add_parser("n0", help="standard 2*sigma0-dimensional non-neutral space")
    _add_common(s, sigma0=True, cap=False)
    s.set_defaults(func=cmd_space_n0)
    s = g.add_parser("witt", help="Witt index over GF(p^n) by brute force")
    _add_common(s, sigma0=True, n=True)
    s.set_defaults(func=cmd_space_witt)
    s = g.add_parser("enumerate", help="totally isotropic r-subspaces")
    _add_common(s, sigma0=True, n=True, fmt=("json", "jsonl"))
    s.add_argument("-r", type=int, required=True)
    s.set_defaults(func=cmd_space_enumerate)

    g = top.add_parser("crystal", help="characteristic subspaces").add_subparsers(dest="sub", required=True)
    s = g.add_parser("enumerate", help="all characteristic subspaces over GF(p^n)")
    _add_common(s, sigma0=True, n=True, fmt=("json", "jsonl"))
    s.set_defaults(func=cmd_crystal_enumerate)
    s = g.add_parser("check", help="characteristic / strictly characteristic predicates")
    _add_common(s, sigma0=True, n=True)
    s.add_argument("--basis", default=None, help="JSON rows of coefficient arrays")
    s.add_argument("--basis-file", default=None)
    s.set_defaults(func=cmd_crystal_check)

    g = top.add_parser("moduli", help="bundle structure and point counts").add_subparsers(dest="sub", required=True)
    s = g.add_parser("plus", help="append the hyperbolic (D, E)-plane")
    _add_common(s, sigma0=True, cap=False)
    s.set_defaults(func=cmd_moduli_plus)
    s = g.add_parser("section", help="K maps to K + <D>")
    _add_common(s, sigma0=True, n=True)
    s.add_argument("--index", type=int, default=0, help="base point index in enumeration order")
    s.add_argument("--basis", default=None)
    s.add_argument("--basis-file", default=None)
    s.set_defaults(func=cmd_moduli_section)
    s = g.add_parser("project", help="gamma_plus of a plus-space point")
    _add_common(s, sigma0=True, n=True)
    s.add_argument("--basis", default=None)
    s.add_argument("--basis-file", default=None)
    s.set_defaults(func=cmd_moduli_project)
    s = g.add_parser("fiber", help="fiber over a base point")
    _add_common(s, sigma0=True, n=True, fmt=("json", "csv"))
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--basis", default=None)
    s.add_argument("--basis-file", default=None)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--formula", action="store_true", default=True)
    mode.add_argument("--bruteforce", action="store_true", default=False)
    s.set_defaults(func=cmd_moduli_fiber)
    s = g.add_parser("count", help="brute-force point count vs tower prediction")
    _add_common(s, sigma0=True, n=True, fmt=("json", "csv"))
    s.set_defaults(func=cmd_moduli_count)
    s = g.add_parser("tower", help="iterated-bundle point-count prediction")
    _add_common(s, sigma0=True, n=True, cap=False)
    s.set_defaults(func=cmd_moduli_tower)

    g = top.add_parser("fgl", help="formal group laws").add_subparsers(dest="sub", required=True)

    def fgl_common(s, needs_n=False):
        s.add_argument("--law", choices=("additive", "multiplicative", "lubin-tate"), required=True)
        s.add_argument("-p", type=int, required=True)
        s.add_argument("--height", type=int, default=None, help="height for lubin-tate")
        s.add_argument("--prec", type=int, default=None,
                       help="truncation degree (default 12, or p^height + 1 for lubin-tate)")
        s.add_argument("--cap", type=int, default=None)
        if needs_n:
            s.add_argument("-n", type=int, required=True)
        s.add_argument("-o", "--output", default=None)

    s = g.add_parser("make", help="construct and fully verify a law")
    fgl_common(s)
    s.set_defaults(func=cmd_fgl_make)
    s = g.add_parser("nseries", help="the [n]-series")
    fgl_common(s, needs_n=True)
    s.set_defaults(func=cmd_fgl_nseries)
    s = g.add_parser("height", help="height from the p-series")
    fgl_common(s)
    s.set_defaults(func=cmd_fgl_height)
    s = g.add_parser("torsion", help="exhaustive torsion analysis on t*F_q[t]/(t^m)")
    fgl_common(s, needs_n=True)
    s.add_argument("--ring-ext", type=int, default=1, help="field extension degree of the ring")
    s.add_argument("--trunc", type=int, default=4, help="truncation order m")
    s.set_defaults(func=cmd_fgl_torsion)

    g = top.add_parser("isogeny", help="height bookkeeping in the Artin invariants").add_subparsers(dest="sub", required=True)
    s = g.add_parser("height", help="2*s0 + 2*s0' - 4")
    s.add_argument("--s0", type=int, required=True)
    s.add_argument("--s0p", type=int, required=True)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_isogeny_height)
    s = g.add_parser("kummer", help="2*s0 - 2")
    s.add_argument("--s0", type=int, required=True)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_isogeny_kummer)
    s = g.add_parser("step", help="(s0 - 1, height 2)")
    s.add_argument("--s0", type=int, required=True)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_isogeny_step)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except GuardExceeded as exc:
        _error("guard_exceeded", exc)
        return EXIT_GUARD
    except InvariantViolation as exc:
        _error("invariant_violation", exc)
        return EXIT_INVARIANT
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        _error("invalid_config", exc)
        return EXIT_INVALID
    return EXIT_OK


def _error(kind, exc):
    sys.stderr.write(json.dumps(
        {"schema": SCHEMA, "error": {"type": kind, "reason": str(exc)}}, sort_keys=True) + "\n")


def run():  # console entry point
    raise SystemExit(main())


if __name__ == "__main__":
    run()
