"""Certificate files: one text format shared by every certification pipeline.

A certificate is a list of "field: value" lines.  The first field names the
kind and the rest carry the data of the defining identity:

    polynomial   multiplier^m * target = sum of squares^2 (+ cofactor*ideal)
    fraction     target = sum of squares^2 over powers of x^2 + y^2
    cylinder     target = sum of squares^2 + cofactor*(1 - x^2 - y^2)
    semigroup    target = sum over squares of star(square) convolve square

Bodies reuse the polynomial text grammar.  A fraction element prints as
"numerator | exponent".  A semigroup element prints as "k n re im" terms
joined by semicolons, one element per line, so the line-per-term element
files accepted by the command line embed verbatim.  Blank lines and lines
starting with "#" are skipped.

Verification re-expands the identity with exact arithmetic and returns the
residual, so a tampered file fails with the actual nonzero difference
rather than a formatting complaint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polycore import (
    GaussianRational,
    ParseError,
    RealPolynomial,
    format_real,
    parse_real,
)
from .fracalg import FractionElement, single_norm_basis
from .sos import SOSCertificate, certificate_residual
from .semigroups import (
    KINDS,
    InvalidIndex,
    SemigroupElement,
    StarSemigroup,
    semigroup_residual,
)


class CertificateError(ValueError):
    """Malformed certificate text; messages point at the offending line."""


CERTIFICATE_KINDS = ("polynomial", "fraction", "cylinder", "semigroup")

_NORM_VARIABLES = ("x", "y")


# -- bodies -----------------------------------------------------------------

def format_fraction_body(elem):
    return f"{format_real(elem.numerator)} | {elem.exponents[0]}"


def format_element_terms(elem):
    """Semigroup element as "k n re im" terms joined by "; ", key-sorted."""
    if elem.is_zero():
        return "0"
    parts = []
    for key in elem.sorted_support():
        c = elem.support[key]
        parts.append(f"{key[0]} {key[1]} {c.re} {c.im}")
    return "; ".join(parts)


def parse_element_terms(semigroup, text):
    """Inverse of format_element_terms; also accepts the lone term "0"."""
    text = text.strip()
    if text == "0":
        return SemigroupElement(semigroup, {})
    support = {}
    for chunk in text.split(";"):
        tokens = chunk.split()
        if len(tokens) != 4:
            raise CertificateError(
                f"expected 'k n re im', got {chunk.strip()!r}")
        try:
            key = (int(tokens[0]), int(tokens[1]))
        except ValueError:
            raise CertificateError(
                f"expected integer indices, got {chunk.strip()!r}") from None
        try:
            c = GaussianRational(Fraction(tokens[2]), Fraction(tokens[3]))
        except (ValueError, ZeroDivisionError):
            raise CertificateError(
                f"expected rational coefficients, got {chunk.strip()!r}") from None
        if not semigroup.valid(key):
            raise InvalidIndex(f"{key} is not an element of {semigroup.kind}")
        support[key] = support.get(key, GaussianRational()) + c
    return SemigroupElement(semigroup, support)


def _format_body(value):
    if isinstance(value, RealPolynomial):
        return format_real(value)
    if isinstance(value, FractionElement):
        return format_fraction_body(value)
    if isinstance(value, SemigroupElement):
        return format_element_terms(value)
    raise CertificateError(f"cannot serialize {type(value).__name__}")


def _parse_fraction_body(text):
    head, bar, tail = text.partition("|")
    if not bar:
        raise CertificateError("expected 'numerator | exponent'")
    tail = tail.strip()
    if not tail.isdigit():
        raise CertificateError(f"expected a nonnegative exponent, got {tail!r}")
    numerator = parse_real(head.strip(), _NORM_VARIABLES)
    return FractionElement(single_norm_basis(), numerator, (int(tail),))


# -- writing ----------------------------------------------------------------

def format_certificate(cert):
    """Canonical text; field order is fixed so equal inputs give equal bytes."""
    if cert.kind not in CERTIFICATE_KINDS:
        raise CertificateError(f"unknown certificate kind {cert.kind!r}")
    lines = [f"kind: {cert.kind}"]
    if cert.kind == "semigroup":
        lines.append(f"semigroup: {cert.semigroup.kind}")
    elif cert.kind == "fraction":
        lines.append("variables: x y")
    else:
        lines.append("variables: " + " ".join(cert.target.variables))
    lines.append("target: " + _format_body(cert.target))
    if cert.multiplier is not None:
        # search multipliers are plain polynomials in every pipeline
        lines.append("multiplier: " + format_real(cert.multiplier))
        lines.append(f"multiplier_exponent: {cert.multiplier_exponent}")
    if cert.ideal is not None:
        lines.append("ideal: " + format_real(cert.ideal))
        lines.append("ideal_cofactor: " + format_real(cert.ideal_cofactor))
    for q in cert.squares:
        lines.append("square: " + _format_body(q))
    return "\n".join(lines) + "\n"


def write_certificate(cert, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_certificate(cert))


# -- reading ----------------------------------------------------------------

_SCALAR_FIELDS = ("kind", "semigroup", "variables", "target", "multiplier",
                  "multiplier_exponent", "ideal", "ideal_cofactor")


def _collect_fields(text):
    fields = {}
    squares = []
    order = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        name, colon, value = stripped.partition(":")
        name = name.strip()
        if not colon or name not in _SCALAR_FIELDS + ("square",):
            raise CertificateError(f"line {line_no}: expected a known 'field: value' line")
        value = value.strip()
        if name == "square":
            squares.append((value, line_no))
            continue
        if name in fields:
            raise CertificateError(f"line {line_no}: duplicate field {name!r}")
        fields[name] = (value, line_no)
        order.append(name)
    if not order or order[0] != "kind":
        raise CertificateError("line 1: certificate must start with 'kind:'")
    return fields, squares


def _fail(line_no, err):
    raise CertificateError(f"line {line_no}: {err}") from None


def _parse_poly(text, variables, line_no):
    try:
        return parse_real(text, variables)
    except ParseError as err:
        _fail(line_no, err)


def parse_certificate(text):
    fields, squares = _collect_fields(text)
    kind, kind_line = fields.pop("kind")
    if kind not in CERTIFICATE_KINDS:
        _fail(kind_line, f"unknown certificate kind {kind!r}")
    if "target" not in fields:
        raise CertificateError("missing field 'target'")

    multiplier = None
    exponent = 0
    if "multiplier_exponent" in fields and "multiplier" not in fields:
        _fail(fields["multiplier_exponent"][1],
              "multiplier_exponent without a multiplier")
    if "multiplier" in fields:
        text_m, line_m = fields.pop("multiplier")
        mult_vars = _NORM_VARIABLES
        if kind in ("polynomial", "cylinder"):
            mult_vars = _variables_field(fields, required=True)
        multiplier = _parse_poly(text_m, mult_vars, line_m)
        if "multiplier_exponent" in fields:
            text_e, line_e = fields.pop("multiplier_exponent")
            if not text_e.isdigit():
                _fail(line_e, f"expected a nonnegative integer, got {text_e!r}")
            exponent = int(text_e)

    if kind == "semigroup":
        cert = _parse_semigroup_fields(fields, squares)
    elif kind == "fraction":
        cert = _parse_fraction_fields(fields, squares)
    else:
        cert = _parse_polynomial_fields(kind, fields, squares)

    return SOSCertificate(target=cert.target, squares=cert.squares,
                          multiplier=multiplier, multiplier_exponent=exponent,
                          ideal=cert.ideal, ideal_cofactor=cert.ideal_cofactor,
                          kind=kind, semigroup=cert.semigroup)


def _variables_field(fields, required):
    if "variables" not in fields:
        if required:
            raise CertificateError("missing field 'variables'")
        return _NORM_VARIABLES
    text, line_no = fields["variables"]
    names = tuple(text.split())
    if not names or len(set(names)) != len(names):
        _fail(line_no, f"expected distinct variable names, got {text!r}")
    return names


def _parse_polynomial_fields(kind, fields, squares):
    if "semigroup" in fields:
        _fail(fields["semigroup"][1],
              f"field 'semigroup' does not belong in a {kind} certificate")
    variables = _variables_field(fields, required=True)
    text_t, line_t = fields["target"]
    target = _parse_poly(text_t, variables, line_t)
    ideal = cofactor = None
    if ("ideal" in fields) != ("ideal_cofactor" in fields):
        raise CertificateError("fields 'ideal' and 'ideal_cofactor' go together")
    if kind == "cylinder" and "ideal" not in fields:
        raise CertificateError("a cylinder certificate needs 'ideal' and 'ideal_cofactor'")
    if "ideal" in fields:
        ideal = _parse_poly(fields["ideal"][0], variables, fields["ideal"][1])
        cofactor = _parse_poly(fields["ideal_cofactor"][0], variables,
                               fields["ideal_cofactor"][1])
    qs = tuple(_parse_poly(text, variables, line_no) for text, line_no in squares)
    return SOSCertificate(target=target, squares=qs, ideal=ideal,
                          ideal_cofactor=cofactor, kind=kind)


def _parse_fraction_fields(fields, squares):
    variables = _variables_field(fields, required=False)
    if variables != _NORM_VARIABLES:
        _fail(fields["variables"][1], "fraction certificates live over x and y")
    for name in ("ideal", "ideal_cofactor", "semigroup"):
        if name in fields:
            _fail(fields[name][1], f"field {name!r} does not belong in a fraction certificate")

    def body(text, line_no):
        try:
            return _parse_fraction_body(text)
        except (CertificateError, ParseError) as err:
            _fail(line_no, err)

    target = body(*fields["target"])
    qs = tuple(body(text, line_no) for text, line_no in squares)
    return SOSCertificate(target=target, squares=qs, kind="fraction")


def _parse_semigroup_fields(fields, squares):
    if "semigroup" not in fields:
        raise CertificateError("missing field 'semigroup'")
    text_s, line_s = fields["semigroup"]
    if text_s not in KINDS:
        _fail(line_s, f"unknown semigroup {text_s!r}")
    sg = StarSemigroup(text_s)
    for name in ("variables", "ideal", "ideal_cofactor"):
        if name in fields:
            _fail(fields[name][1], f"field {name!r} does not belong in a semigroup certificate")

    def body(text, line_no):
        try:
            return parse_element_terms(sg, text)
        except (CertificateError, InvalidIndex) as err:
            _fail(line_no, err)

    target = body(*fields["target"])
    qs = tuple(body(text, line_no) for text, line_no in squares)
    return SOSCertificate(target=target, squares=qs, kind="semigroup", semigroup=sg)


def read_certificate(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_certificate(fh.read())


# -- verification -----------------------------------------------------------

@dataclass
class VerifyResult:
    ok: bool
    residual: object


def verify_certificate(cert):
    """Re-expand the defining identity exactly; ok iff the residual is zero."""
    if cert.kind == "semigroup":
        residual = semigroup_residual(cert)
    else:
        residual = certificate_residual(cert)
    return VerifyResult(residual.is_zero(), residual)
