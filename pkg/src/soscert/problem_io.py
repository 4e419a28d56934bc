"""Text formats for problem instances and certificates.

Problem file::

    variables x y
    f: x + y + 3
    g: y
    h: x^2 - 1
    h: y^2 - x - 2
    radical: true
    option mode strict

Certificate file::

    mode strict
    variables x y
    gamma 2
    block 0
    weight 1/5 square x - 3/5*y
    block 1
    weight 1 square 1
    cofactor 1 -1/2*x^2 - 2/5*y^2 - 1/10*y - 7/10
    witness 1 1

Blocks are numbered 0..r (block 0 is the free sum of squares, block i
multiplies g_i); `cofactor j` multiplies the j-th equality generator; the
optional `gamma` and `witness` lines carry the nonnegative-mode data.
Rationals are printed in lowest terms.
"""

from __future__ import annotations

from fractions import Fraction

from .certifier import Certificate, ProblemInstance
from .errors import ParseError
from .polyring import format_polynomial, parse_polynomial


_OPTION_TYPES = {"mode": str, "engine": str, "order": int, "seed": int,
                 "precision_start": int}


def parse_problem(text):
    var_names = None
    f = None
    g = []
    h = []
    radical = None
    options = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("variables"):
                var_names = line.split()[1:]
                if not var_names:
                    raise ParseError("empty variable list")
            elif line.startswith("f:"):
                f = parse_polynomial(line[2:], _need_vars(var_names))
            elif line.startswith("g:"):
                g.append(parse_polynomial(line[2:], _need_vars(var_names)))
            elif line.startswith("h:"):
                h.append(parse_polynomial(line[2:], _need_vars(var_names)))
            elif line.startswith("radical:"):
                radical = line.split(":", 1)[1].strip().lower() == "true"
            elif line.startswith("option"):
                _, key, value = line.split(None, 2)
                if key not in _OPTION_TYPES:
                    raise ParseError(f"unknown option {key!r}")
                options[key] = _OPTION_TYPES[key](value)
            else:
                raise ParseError(f"unrecognized line {line!r}")
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), lineno) from None
    if var_names is None:
        raise ParseError("missing `variables` line")
    if f is None:
        raise ParseError("missing `f:` line")
    try:
        return ProblemInstance(var_names, f, g, h, radical=radical,
                               options=options)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _need_vars(var_names):
    if var_names is None:
        raise ParseError("`variables` line must precede polynomial lines")
    return var_names


def format_problem(inst):
    lines = ["variables " + " ".join(inst.var_names)]
    lines.append("f: " + format_polynomial(inst.f, inst.var_names))
    for p in inst.g:
        lines.append("g: " + format_polynomial(p, inst.var_names))
    for p in inst.h:
        lines.append("h: " + format_polynomial(p, inst.var_names))
    if inst.radical is not None:
        lines.append(f"radical: {str(inst.radical).lower()}")
    for key in sorted(inst.options):
        lines.append(f"option {key} {inst.options[key]}")
    return "\n".join(lines) + "\n"


def parse_certificate(text, expected_vars=None):
    mode = None
    var_names = None
    gamma = None
    blocks = []
    cofactors = {}
    witnesses = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("mode"):
                mode = line.split()[1]
            elif line.startswith("variables"):
                var_names = line.split()[1:]
                if expected_vars is not None and var_names != list(expected_vars):
                    raise ParseError(
                        f"variable mismatch: certificate has {var_names}, "
                        f"instance has {list(expected_vars)}")
            elif line.startswith("gamma"):
                gamma = Fraction(line.split()[1])
            elif line.startswith("block"):
                idx = int(line.split()[1])
                if idx != len(blocks):
                    raise ParseError(f"blocks must appear in order; got {idx}")
                blocks.append([])
                current = blocks[-1]
            elif line.startswith("weight"):
                if current is None:
                    raise ParseError("`weight` line before any `block` line")
                _, w, kw, poly_text = line.split(None, 3)
                if kw != "square":
                    raise ParseError("expected `weight <rational> square <poly>`")
                current.append((Fraction(w),
                                parse_polynomial(poly_text, _need_vars(var_names))))
            elif line.startswith("cofactor"):
                _, j, poly_text = line.split(None, 2)
                cofactors[int(j)] = parse_polynomial(poly_text, _need_vars(var_names))
            elif line.startswith("witness"):
                _, k, poly_text = line.split(None, 2)
                if int(k) != len(witnesses) + 1:
                    raise ParseError("witness lines must appear in order")
                witnesses.append(parse_polynomial(poly_text, _need_vars(var_names)))
            else:
                raise ParseError(f"unrecognized line {line!r}")
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), lineno) from None
    if mode is None:
        raise ParseError("missing `mode` line")
    if var_names is None:
        raise ParseError("missing `variables` line")
    if not blocks:
        raise ParseError("certificate contains no blocks")
    cof_list = [cofactors[j] for j in sorted(cofactors)]
    if sorted(cofactors) != list(range(1, len(cof_list) + 1)):
        raise ParseError("cofactor indices must be 1..s")
    return Certificate(mode, blocks, cof_list,
                       witnesses=witnesses or None, gamma=gamma), var_names


def format_certificate(cert, var_names):
    lines = [f"mode {cert.mode}", "variables " + " ".join(var_names)]
    if cert.gamma is not None:
        lines.append(f"gamma {cert.gamma}")
    for i, block in enumerate(cert.blocks):
        lines.append(f"block {i}")
        for w, q in block:
            lines.append(f"weight {w} square {format_polynomial(q, var_names)}")
    for j, p in enumerate(cert.cofactors, start=1):
        lines.append(f"cofactor {j} {format_polynomial(p, var_names)}")
    for k, r in enumerate(cert.witnesses or [], start=1):
        lines.append(f"witness {k} {format_polynomial(r, var_names)}")
    return "\n".join(lines) + "\n"
