"""Command line interface.

Six subcommands cover the pipelines end to end:

  decide-moment      algebra descriptor -> Holds / Fails / Unknown plus rule
  fibres             descriptor + parameter file -> affine fibre and dimension
  sos                polynomial -> sum-of-squares certificate, multiplier search
  cylinder-sos       polynomial in x, y, z -> certificate modulo 1 - x^2 - y^2
  semigroup-certify  semigroup element certification or truncated psd check
  verify             re-expand a certificate file and report PASS / FAIL

Exit codes: 0 decided or certified, 2 refuted with a witness, 3 undecided
under the given caps (unknown, exhausted, indeterminate), 1 bad input.
Reports embed the seed and the caps in force; ``--format structured``
prints a JSON record with every rational as a string, byte-identical
across runs with equal inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .polycore import (
    GaussianRational,
    ParseError,
    PolynomialError,
    RealPolynomial,
    format_real,
    parse_real,
)
from .fracalg import FracAlgError, parse_descriptor
from .fibres import (
    FibreError,
    decide_moment_property,
    fibre_constraints,
    fibre_dimension,
    parse_parameter_list,
)
from .sos import (
    Exhausted,
    GramProblem,
    GramSolution,
    Indeterminate,
    Infeasible,
    NotPSD,
    NotPSDWitness,
    SOSCertificate,
    SOSError,
    cylinder_sos,
    gram_solve,
    multiplier_search,
    newton_basis,
    norm_polynomial,
    plane_witness_points,
    univariate_sos,
)
from .semigroups import (
    KINDS,
    SemigroupElement,
    SemigroupError,
    StarSemigroup,
    TruncatedFunctional,
    box_window,
    element_value,
    hermitean_square_certify,
    truncated_psd_check,
)
from .certificates import (
    CertificateError,
    format_certificate,
    parse_element_terms,
    read_certificate,
    verify_certificate,
)


class UsageError(ValueError):
    pass


class InputError(ValueError):
    """Any rejected input file or option value; mapped to exit code 1."""


_CYLINDER_RING = ("x", "y", "z")
_PLAIN_NAMES = ("x", "y", "z", "t", "u", "v", "w")


# -- input helpers ----------------------------------------------------------

def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _blank_comments(text):
    """Replace comment lines by spaces so parse offsets stay valid."""
    out = []
    for line in text.split("\n"):
        out.append(" " * len(line) if line.lstrip().startswith("#") else line)
    return "\n".join(out)


def _line_col(text, pos):
    pos = min(pos, len(text))
    line = text.count("\n", 0, pos) + 1
    col = pos - text.rfind("\n", 0, pos)
    return line, col


def _parse_poly_file(path, variables):
    text = _blank_comments(_read(path))
    if not text.strip():
        raise InputError(f"{path}: no polynomial found")
    try:
        return parse_real(text, variables)
    except ParseError as err:
        if err.position is None:
            raise InputError(f"{path}: {err}") from None
        line, col = _line_col(text, err.position)
        raise InputError(
            f"{path}: line {line}, column {col}: {err.message}") from None


def _infer_variables(text):
    """Variable names appearing in the text, in canonical ring order."""
    keyed = []
    for name in set(re.findall(r"[A-Za-z][A-Za-z0-9]*", text)):
        if name == "i":
            continue
        if name in _PLAIN_NAMES:
            keyed.append(((0, _PLAIN_NAMES.index(name), 0), name))
        elif name[0] in "xy" and name[1:].isdigit():
            keyed.append(((1, int(name[1:]), "xy".index(name[0])), name))
        else:
            raise InputError(
                f"unknown variable {name!r}; accepted names are "
                "x, y, z, t, u, v, w and the indexed pairs x1, y1, ..")
    if not keyed:
        return ("x",)
    return tuple(name for _, name in sorted(keyed))


def _parse_fractions(text, count, what):
    tokens = text.split()
    if len(tokens) != count:
        raise InputError(f"expected {count} numbers for {what}, got {text!r}")
    try:
        return tuple(Fraction(tok) for tok in tokens)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected rationals for {what}, got {text!r}") from None


def _read_element_file(semigroup, path):
    """Element from "k n re im" lines; repeated keys accumulate."""
    total = SemigroupElement(semigroup, {})
    seen = False
    for line_no, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            total = total + parse_element_terms(semigroup, line)
        except (CertificateError, SemigroupError) as err:
            raise InputError(f"{path}: line {line_no}: {err}") from None
        seen = True
    if not seen:
        raise InputError(f"{path}: no element terms found")
    return total


def _read_functional_file(semigroup, path):
    values = {}
    for line_no, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 4:
            raise InputError(f"{path}: line {line_no}: expected 'k n re im'")
        try:
            key = (int(tokens[0]), int(tokens[1]))
            value = GaussianRational(Fraction(tokens[2]), Fraction(tokens[3]))
        except (ValueError, ZeroDivisionError):
            raise InputError(
                f"{path}: line {line_no}: expected integers and rationals") from None
        if key in values:
            raise InputError(f"{path}: line {line_no}: duplicate value for {key}")
        values[key] = value
    if not values:
        raise InputError(f"{path}: no functional values found")
    return values


# -- report helpers ---------------------------------------------------------

def _emit(args, record, lines):
    if args.format == "structured":
        print(json.dumps(record, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _point_text(point):
    return " ".join(str(c) for c in point)


def _mon_text(variables, mon):
    return format_real(RealPolynomial.monomial(variables, mon))


def _certificate_output(args, cert, record, lines):
    text = format_certificate(cert)
    record["certificate"] = text
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        record["certificate_file"] = args.output
        lines.append(f"certificate file: {args.output}")
    lines.append("certificate:")
    lines.extend("  " + line for line in text.splitlines())


def _refuted(record, lines, point, value, note):
    record.update({"verdict": "refuted", "reason": note,
                   "witness": {"point": [str(c) for c in point],
                               "value": str(value)}})
    lines.append("verdict: refuted")
    lines.append(f"reason: {note}")
    lines.append(f"witness point: {_point_text(point)}")
    lines.append(f"witness value: {value}")


def _exhausted(record, lines, res):
    record.update({"verdict": "exhausted", "cap": res.cap,
                   "trail": [{"level": m, "note": note} for m, note in res.trail]})
    if res.note:
        record["note"] = res.note
    lines.append("verdict: exhausted")
    lines.append(f"cap: {res.cap}")
    for m, note in res.trail:
        lines.append(f"level {m}: {note}")
    if res.note:
        lines.append(f"note: {res.note}")
    return 3


def _indeterminate(record, lines, res):
    record.update({"verdict": "indeterminate", "note": res.note})
    lines.append("verdict: indeterminate")
    if res.note:
        lines.append(f"note: {res.note}")
    return 3


def _infeasible(record, lines, res, variables):
    functional = {_mon_text(variables, mon): str(v)
                  for mon, v in sorted(res.functional.items())}
    record.update({"verdict": "refuted", "reason": "infeasible",
                   "dual_value": str(res.value), "dual_functional": functional})
    if res.note:
        record["note"] = res.note
    lines.append("verdict: refuted")
    lines.append("reason: infeasible (separating functional)")
    lines.append(f"dual value: {res.value}")
    lines.append("dual functional:")
    for mon in sorted(res.functional):
        lines.append(f"  {_mon_text(variables, mon)}: {res.functional[mon]}")
    return 2


# -- decide-moment ----------------------------------------------------------

def _cmd_decide_moment(args):
    alg = parse_descriptor(_read(args.descriptor))
    decision = decide_moment_property(alg)
    record = {"command": "decide-moment", "seed": args.seed,
              "verdict": decision.verdict, "reason": decision.reason,
              "d": alg.d, "denominators": [str(f) for f in alg.f_list]}
    lines = [f"verdict: {decision.verdict}", f"reason: {decision.reason}"]
    if decision.evidence:
        grid = []
        for ev in decision.evidence:
            thetas = [[str(t.re), str(t.im)] for t in ev.thetas]
            grid.append({"thetas": thetas, "dimension": ev.dimension})
            label = ", ".join(f"({t.re} {t.im})" for t in ev.thetas)
            dim = "empty" if ev.dimension is None else str(ev.dimension)
            lines.append(f"fibre at theta {label}: {dim}")
        record["evidence"] = grid
    _emit(args, record, lines)
    return {"Holds": 0, "Fails": 2, "Unknown": 3}[decision.verdict]


# -- fibres -----------------------------------------------------------------

def _cmd_fibres(args):
    alg = parse_descriptor(_read(args.descriptor))
    param = parse_parameter_list(_read(args.parameters))
    constraints, affine = fibre_constraints(alg, param)
    record = {"command": "fibres", "seed": args.seed,
              "constraints": [str(c) for c in constraints]}
    lines = [f"constraint {j}: {c}" for j, c in enumerate(constraints, start=1)]
    if affine is None:
        record["affine"] = None
        lines.append("no affine reduction: a denominator is nonlinear")
    else:
        dim = fibre_dimension(affine)
        record["affine"] = {
            "variables": list(affine.variables),
            "matrix": [[str(a) for a in row] for row in affine.matrix],
            "rhs": [str(b) for b in affine.rhs],
            "dimension": dim,
        }
        lines.append("variables: " + " ".join(affine.variables))
        for row, b in zip(affine.matrix, affine.rhs):
            lines.append("row: " + " ".join(str(a) for a in row) + f" | {b}")
        lines.append("dimension: " + ("empty" if dim is None else str(dim)))
    _emit(args, record, lines)
    return 0


# -- sos --------------------------------------------------------------------

def _negative_plane_point(p, w):
    """Integer point with p < 0 and w > 0, if one sits on the small grid."""
    for pt in plane_witness_points(radius=4):
        point = [Fraction(pt[0]), Fraction(pt[1])]
        if p.eval(point) < 0 and w.eval(point) > 0:
            return pt
    return None


def _cmd_sos(args):
    raw = _blank_comments(_read(args.polynomial))
    variables = _infer_variables(raw)
    p = _parse_poly_file(args.polynomial, variables)
    record = {"command": "sos", "seed": args.seed,
              "tolerance": repr(args.tolerance), "m_max": args.m_max,
              "target": format_real(p), "variables": list(variables)}
    lines = []

    if args.multiplier is None and len(variables) == 1:
        record["mode"] = "univariate"
        try:
            cert = univariate_sos(p, tolerance=args.tolerance)
        except NotPSD as err:
            _refuted(record, lines, err.point, err.value, "negative-value-witness")
            _emit(args, record, lines)
            return 2
        record["verdict"] = "certified"
        lines.append("verdict: certified")
        _certificate_output(args, cert, record, lines)
        _emit(args, record, lines)
        return 0

    w = None
    if args.multiplier is not None:
        try:
            w = parse_real(args.multiplier, variables)
        except ParseError as err:
            raise InputError(f"--multiplier: {err}") from None
        if w.is_zero():
            raise InputError("--multiplier: the zero polynomial is not usable")
    elif len(variables) == 2:
        w = norm_polynomial(variables)

    if w is not None and len(variables) == 2:
        pt = _negative_plane_point(p, w)
        if pt is not None:
            point = [Fraction(pt[0]), Fraction(pt[1])]
            _refuted(record, lines, pt, p.eval(point), "negative-value-witness")
            _emit(args, record, lines)
            return 2

    if w is None or args.m_max == 0:
        record["mode"] = "gram"
        res = gram_solve(GramProblem(p, newton_basis(p)), tolerance=args.tolerance)
        if isinstance(res, GramSolution):
            cert = SOSCertificate(target=p, squares=res.squares())
            record["verdict"] = "certified"
            lines.append("verdict: certified")
            _certificate_output(args, cert, record, lines)
            _emit(args, record, lines)
            return 0
        if isinstance(res, Infeasible):
            code = _infeasible(record, lines, res, variables)
        else:
            code = _indeterminate(record, lines, res)
        _emit(args, record, lines)
        return code

    record["mode"] = "multiplier-search"
    record["multiplier"] = format_real(w)
    res = multiplier_search(p, w, m_max=args.m_max, tolerance=args.tolerance)
    if isinstance(res, Exhausted):
        code = _exhausted(record, lines, res)
        _emit(args, record, lines)
        return code
    record["verdict"] = "certified"
    record["multiplier_exponent"] = res.multiplier_exponent
    lines.append("verdict: certified")
    lines.append(f"multiplier: {format_real(w)}")
    lines.append(f"multiplier exponent: {res.multiplier_exponent}")
    _certificate_output(args, res, record, lines)
    _emit(args, record, lines)
    return 0


# -- cylinder-sos -----------------------------------------------------------

def _cmd_cylinder_sos(args):
    p = _parse_poly_file(args.polynomial, _CYLINDER_RING)
    degree_cap = args.degree_cap
    if degree_cap is None:
        degree_cap = max(p.degree(), 0) + 4
    record = {"command": "cylinder-sos", "seed": args.seed,
              "tolerance": repr(args.tolerance), "degree_cap": degree_cap,
              "target": format_real(p), "variables": list(_CYLINDER_RING)}
    lines = []
    res = cylinder_sos(p, degree_cap=degree_cap, tolerance=args.tolerance)
    if isinstance(res, NotPSDWitness):
        _refuted(record, lines, res.point, res.value, "negative-value-witness")
        _emit(args, record, lines)
        return 2
    if isinstance(res, Exhausted):
        code = _exhausted(record, lines, res)
        _emit(args, record, lines)
        return code
    record["verdict"] = "certified"
    lines.append("verdict: certified")
    _certificate_output(args, res, record, lines)
    _emit(args, record, lines)
    return 0


# -- semigroup-certify ------------------------------------------------------

def _parse_character_point(semigroup, text):
    if semigroup.kind == "N0xZ":
        return _parse_fractions(text, 3, "a cylinder point 'x y t'")
    return _parse_fractions(text, 2, "a plane point 'x y'")


def _cmd_semigroup_certify(args):
    if (args.element is None) == (args.functional is None):
        raise UsageError("exactly one of --element and --functional is required")
    semigroup = StarSemigroup(args.semigroup)
    if args.functional is not None:
        if args.window is None:
            raise UsageError("--functional needs --window")
        if args.point:
            raise UsageError("--point only applies to --element")
        return _functional_check(args, semigroup)

    element = _read_element_file(semigroup, args.element)
    record = {"command": "semigroup-certify", "seed": args.seed,
              "semigroup": semigroup.kind, "tolerance": repr(args.tolerance),
              "m_max": args.m_max, "degree_cap": args.degree_cap,
              "element": str(element)}
    lines = [f"semigroup: {semigroup.kind}", f"element: {element}"]
    if not element.is_hermitean():
        raise InputError("only hermitean elements can be certified")

    for text in args.point or ():
        point = _parse_character_point(semigroup, text)
        value = element_value(element, point)
        if value.im != 0:
            raise InputError(f"non-real value {value} at point {text!r}")
        if value.re < 0:
            _refuted(record, lines, point, value.re, "user-supplied-point")
            _emit(args, record, lines)
            return 2

    res = hermitean_square_certify(element, m_max=args.m_max,
                                   degree_cap=args.degree_cap,
                                   tolerance=args.tolerance)
    if isinstance(res, NotPSDWitness):
        _refuted(record, lines, res.point, res.value, "negative-value-witness")
        _emit(args, record, lines)
        return 2
    if isinstance(res, Exhausted):
        code = _exhausted(record, lines, res)
        _emit(args, record, lines)
        return code
    record["verdict"] = "certified"
    lines.append("verdict: certified")
    _certificate_output(args, res, record, lines)
    _emit(args, record, lines)
    return 0


def _functional_check(args, semigroup):
    window = box_window(semigroup, args.window)
    if not window:
        raise InputError(f"empty window at radius {args.window}")
    values = _read_functional_file(semigroup, args.functional)
    try:
        functional = TruncatedFunctional(semigroup, window, values)
        result = truncated_psd_check(functional)
    except SemigroupError as err:
        raise InputError(str(err)) from None
    record = {"command": "semigroup-certify", "seed": args.seed,
              "semigroup": semigroup.kind, "window": args.window,
              "window_size": len(window)}
    lines = [f"semigroup: {semigroup.kind}",
             f"window: box radius {args.window}, {len(window)} elements"]
    if result.psd:
        record["verdict"] = "psd"
        lines.append("verdict: psd")
        _emit(args, record, lines)
        return 0
    record["verdict"] = "not-psd"
    record["witness_value"] = str(result.witness_value)
    witness = []
    lines.append("verdict: not-psd")
    lines.append(f"witness value: {result.witness_value}")
    lines.append("witness vector:")
    for key, c in zip(window, result.witness):
        if not c.is_zero():
            witness.append({"k": key[0], "n": key[1],
                            "re": str(c.re), "im": str(c.im)})
            lines.append(f"  {key[0]} {key[1]}: {c.re} {c.im}")
    record["witness"] = witness
    _emit(args, record, lines)
    return 2


# -- verify -----------------------------------------------------------------

def _cmd_verify(args):
    cert = read_certificate(args.certificate)
    result = verify_certificate(cert)
    record = {"command": "verify", "seed": args.seed, "kind": cert.kind,
              "verdict": "PASS" if result.ok else "FAIL",
              "residual": "0" if result.ok else str(result.residual)}
    lines = [f"verdict: {record['verdict']}", f"residual: {record['residual']}"]
    _emit(args, record, lines)
    return 0 if result.ok else 2


# -- parser -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub):
    sub.add_argument("--format", choices=("text", "structured"), default="text",
                     help="report style; structured is a stable JSON record")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed recorded in reports (default 0)")


def _add_tolerance(sub):
    sub.add_argument("--tolerance", type=float, default=1e-9,
                     help="numeric acceptance band before exact rounding")


def _add_output(sub):
    sub.add_argument("--output", metavar="PATH",
                     help="also write the certificate to this file")


def build_parser():
    parser = _Parser(prog="momentsos",
                     description="moment-property decisions and exact "
                                 "sum-of-squares certificates")
    commands = parser.add_subparsers(dest="command", required=True,
                                     metavar="command")

    sub = commands.add_parser("decide-moment",
                              help="decide the moment property of a fraction algebra")
    sub.add_argument("descriptor", help="file: line d=<count>, then one "
                                        "denominator polynomial per line")
    _add_common(sub)
    sub.set_defaults(func=_cmd_decide_moment)

    sub = commands.add_parser("fibres",
                              help="affine fibre of a parameter tuple")
    sub.add_argument("descriptor")
    sub.add_argument("parameters", help="file: one 'phi p/q' or 'theta re im' "
                                        "line per denominator")
    _add_common(sub)
    sub.set_defaults(func=_cmd_fibres)

    sub = commands.add_parser("sos",
                              help="sum-of-squares certificate for a polynomial")
    sub.add_argument("polynomial", help="file with one polynomial")
    sub.add_argument("--multiplier", metavar="POLY",
                     help="multiplier for the w^m search; default x^2+y^2 "
                          "on two variables, none otherwise")
    sub.add_argument("--m-max", type=int, default=6,
                     help="largest multiplier exponent tried (default 6); "
                          "0 forces a plain Gram solve")
    _add_tolerance(sub)
    _add_output(sub)
    _add_common(sub)
    sub.set_defaults(func=_cmd_sos)

    sub = commands.add_parser("cylinder-sos",
                              help="certificate modulo 1 - x^2 - y^2")
    sub.add_argument("polynomial", help="file with one polynomial in x, y, z")
    sub.add_argument("--degree-cap", type=int, default=None,
                     help="degree cap for the square search (default deg+4)")
    _add_tolerance(sub)
    _add_output(sub)
    _add_common(sub)
    sub.set_defaults(func=_cmd_cylinder_sos)

    sub = commands.add_parser("semigroup-certify",
                              help="hermitean-square certificate or psd check")
    sub.add_argument("--semigroup", choices=KINDS, required=True)
    sub.add_argument("--element", metavar="PATH",
                     help="element file, one 'k n re im' term per line")
    sub.add_argument("--functional", metavar="PATH",
                     help="functional file, one 'k n re im' value per line")
    sub.add_argument("--window", type=int, metavar="R",
                     help="box radius |k|, |n| <= R for the psd check")
    sub.add_argument("--point", action="append", metavar="NUMS",
                     help="extra character point to test before certifying; "
                          "'x y' on the plane kinds, 'x y t' on the cylinder")
    sub.add_argument("--m-max", type=int, default=6)
    sub.add_argument("--degree-cap", type=int, default=None)
    _add_tolerance(sub)
    _add_output(sub)
    _add_common(sub)
    sub.set_defaults(func=_cmd_semigroup_certify)

    sub = commands.add_parser("verify",
                              help="re-expand a certificate and check the residual")
    sub.add_argument("certificate", help="certificate file")
    _add_common(sub)
    sub.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except (InputError, PolynomialError, FracAlgError, FibreError, SOSError,
            SemigroupError, CertificateError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
