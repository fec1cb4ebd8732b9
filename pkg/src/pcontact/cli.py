"""Command-line front end.

Every verb builds a report dictionary with the keys ``command``, ``inputs``,
``status``, ``certificates``, ``dims``, ``series`` and ``failures``.  Scalars
are canonical strings.  Exit status is 0 when everything passes, 1 on a
verification failure and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .algebra import AlgebraError
from .cohomology import check_d1_nonzero, page_report
from .deformation import essential_horizontal_space, run_recursion, verify_maurer_cartan
from .dsl import DSLError, Document, FibrationDecl, parse_document, parse_form, parse_vector, serialize_document
from .geometry import (
    check_p_contact,
    check_s_symplectic,
    directional_properties,
    g_integrability,
    kernel_F,
    kernel_G,
    no_invariant_contact,
    no_invariant_symplectic,
    splitting_checks,
)
from .linalg import InfeasibleSystem
from .scalars import parse_scalar
from .structure import EXAMPLES, FibrationSpec, make_example, verify_structure_theorem

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# Above this dimension `froelicher` restricts itself to total degree <= 2;
# the full table at n = 11 has spaces of dimension C(11,5)^2.
FULL_PAGE_LIMIT = 7


class InputError(Exception):
    """Bad or missing command-line input (exit status 2)."""


# -- input resolution -----------------------------------------------------------


def _read_document(args, stdin) -> tuple:
    spec = args.algebra
    if spec is None:
        text = stdin.read()
        if not text.strip():
            raise InputError("no --algebra given and nothing on standard input")
        return parse_document(text), "<stdin>"
    path = Path(spec)
    if path.is_file():
        return parse_document(path.read_text(encoding="utf-8")), spec
    if spec in corpus.names():
        return corpus.load(spec), f"corpus:{spec}"
    raise InputError(f"no file or corpus entry named {spec!r}")


def _pick_form(doc: Document, spec: str | None):
    if spec is None:
        if not doc.forms:
            raise InputError("the document declares no form; pass --form")
        name = next(iter(doc.forms))
        return doc.algebra(doc.form_owner.get(name)), doc.forms[name], name
    if spec in doc.forms:
        return doc.algebra(doc.form_owner.get(spec)), doc.forms[spec], spec
    a = doc.algebra()
    return a, parse_form(spec, a), spec


def _pick_vector(doc: Document, a, spec: str | None):
    if spec is None:
        if not doc.vectors:
            raise InputError("the document declares no vector form; pass --vector")
        spec = next(iter(doc.vectors))
    if spec in doc.vectors:
        return doc.vectors[spec], spec
    return parse_vector(spec, a), spec


def _read_matrix(spec: str):
    if spec in ("identity", "ones"):
        return spec
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"--matrix must be identity, ones or a file; {spec!r} is none of these")
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([parse_scalar(tok) for tok in line.replace(",", " ").split()])
    return rows


def _report(command: str, inputs: dict) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "status": "pass",
        "certificates": [],
        "dims": {},
        "series": [],
        "failures": [],
    }


def _fail(report: dict, *reasons: str):
    report["status"] = "fail"
    report["failures"].extend(reasons)


# -- verbs -------------------------------------------------------------------------


def cmd_verify(args, stdin):
    doc, source = _read_document(args, stdin)
    a, form, form_name = _pick_form(doc, args.form)
    report = _report(f"verify {args.kind}", {"algebra": a.name, "source": source, "form": form_name})
    cert = check_p_contact(a, form) if args.kind == "p-contact" else check_s_symplectic(a, form)
    report["certificates"].append(cert.to_dict())
    if not cert.valid:
        _fail(report, *cert.failures)
    lines = [f"{args.kind} certificate for {form_name} on {a.name}: {'valid' if cert.valid else 'INVALID'}",
             f"  c = {cert.top_coefficient}"]
    lines += [f"  failure: {f}" for f in cert.failures]
    return report, lines


def cmd_kernels(args, stdin):
    doc, source = _read_document(args, stdin)
    a, g, form_name = _pick_form(doc, args.form)
    report = _report("kernels", {"algebra": a.name, "source": source, "form": form_name})
    cert = check_p_contact(a, g)
    if not cert.valid:
        raise InputError("kernels needs a p-contact form: " + ", ".join(cert.failures))
    F, G = kernel_F(g), kernel_G(g)
    split = splitting_checks(g)
    integ = g_integrability(g) if a.parallelisable else None
    directional = directional_properties(g)
    report["dims"] = {"rank_F": F.rank, "rank_G": G.rank}
    report["certificates"] += [
        {"kind": "kernel F", **F.to_dict()},
        {"kind": "kernel G", **G.to_dict()},
        {"kind": "splitting", **split.to_dict()},
        {"kind": "directional", **directional.to_dict()},
    ]
    if integ is not None:
        report["certificates"].append({"kind": "G integrability", **integ.to_dict()})
    if not split.ok:
        _fail(report, "F + G is not a direct complementary splitting")
    if integ is not None and not integ.holds:
        _fail(report, "G is not closed under brackets")
    lines = [
        f"kernels of {form_name} on {a.name}",
        f"  rank F = {F.rank}: {', '.join(map(str, F.basis)) or '0'}",
        f"  rank G = {G.rank}: {', '.join(map(str, G.basis)) or '0'}",
        f"  F + G = T direct: {split.ok}",
    ]
    if integ is not None:
        lines.append(f"  G closed under brackets: {integ.holds}")
    for name, entry in sorted(directional.entries.items()):
        lines.append(f"  {name}: {entry['holds']}")
    lines.append(f"  ({directional.label})")
    return report, lines


def cmd_froelicher(args, stdin):
    doc, source = _read_document(args, stdin)
    a = doc.algebra()
    bidegrees = None
    if a.n > FULL_PAGE_LIMIT:
        bidegrees = [(p, q) for p in range(a.n + 1) for q in range(a.n + 1) if p + q <= 2]
    pages = page_report(a, bidegrees)
    report = _report("froelicher", {"algebra": a.name, "source": source, "partial": bidegrees is not None})
    report["dims"] = pages.to_dict()
    bad = sorted(k for k, ok in pages.flags.items() if not ok)
    if bad:
        _fail(report, *(f"E2 > E1 at ({p},{q})" for p, q in bad))
    lines = [pages.text()]
    if bidegrees is not None:
        lines.append(f"(total degree <= 2 only; full tables are computed for n <= {FULL_PAGE_LIMIT})")
    if doc.forms:
        _, g, form_name = _pick_form(doc, args.form)
        cert = check_p_contact(a, g) if a.n % 2 and g.bidegree and g.bidegree[1] == 0 else None
        if cert is not None and cert.valid:
            obs = check_d1_nonzero(a, g)
            report["certificates"].append({"kind": "d1 class of Gamma", **obs.to_dict()})
            if not obs.holds:
                _fail(report, "d1[Gamma] vanishes in E1")
            lines.append(f"d1[{form_name}] != 0 in E1^({obs.p + 1},0): {obs.holds}")
    return report, lines


def cmd_deform(args, stdin):
    doc, source = _read_document(args, stdin)
    a, g, form_name = _pick_form(doc, args.form)
    psi1, vec_name = _pick_vector(doc, a, args.vector)
    report = _report(
        "deform", {"algebra": a.name, "source": source, "form": form_name, "vector": vec_name, "order": args.order}
    )
    cert = check_p_contact(a, g)
    if not cert.valid:
        raise InputError("deform needs a p-contact form: " + ", ".join(cert.failures))
    if psi1.q != 1:
        raise InputError("the first-order term must be a (0,1) vector form")
    series = run_recursion(psi1, args.order, g)
    mc = verify_maurer_cartan(series)
    space = essential_horizontal_space(g)
    report["dims"] = {"essential_horizontal": space.dim}
    report["series"] = [f"psi{k} = {t}" for k, t in enumerate(series.psi, start=1)]
    report["certificates"] += [
        {"kind": "series", **series.to_dict()},
        {"kind": "maurer-cartan", **mc.to_dict()},
        {"kind": "essential horizontal space", **space.to_dict()},
    ]
    if series.obstructed:
        _fail(report, f"obstructed at order {len(series.psi) + 1}")
    if not series.matches_expected_pattern:
        _fail(report, "a step certificate departs from the expected odd/even pattern")
    if not mc.holds:
        _fail(report, "Maurer-Cartan residual is nonzero")
    lines = [f"deformation of {form_name} on {a.name} from {vec_name}"]
    lines += [f"  {s}" for s in report["series"]]
    state = "terminated" if series.terminated else ("obstructed" if series.obstructed else "truncated")
    lines.append(f"  {state} at order {series.order}; Maurer-Cartan {mc.label}: {mc.holds}")
    for step in series.steps:
        lines.append(f"  order {step.nu} ({step.parity}): {step.method}; matches expected pattern: {step.matches_expected_pattern}")
    return report, lines


def cmd_structure(args, stdin):
    doc, source = _read_document(args, stdin)
    if not doc.fibrations:
        raise InputError("the document declares no fibration block")
    decl = next(iter(doc.fibrations.values()))
    fib = FibrationSpec.from_decl(doc, decl)
    if args.form is None:
        owned = [n for n in doc.forms if doc.form_owner.get(n) == decl.algebra]
        if not owned:
            raise InputError("no form declared on the fibration's algebra; pass --form")
        form_name, g = owned[0], doc.forms[owned[0]]
    else:
        _, g, form_name = _pick_form(doc, args.form)
    report = _report("structure-theorem", {"algebra": decl.algebra, "source": source, "form": form_name, "fibration": decl.name})
    rep = verify_structure_theorem(fib, g)
    report["certificates"].append({"kind": "structure theorem", **rep.to_dict()})
    if not rep.valid:
        _fail(report, *rep.failures)
    lines = [f"structure theorem for {form_name} on {decl.algebra} ({decl.name})"]
    lines += [f"  [{'ok' if ok else 'FAIL'}] {name}" for name, ok in rep.checks.items()]
    if rep.omega is not None:
        lines.append(f"  Omega = {rep.omega}")
    lines.append(f"  ({rep.qualifier})")
    return report, lines


def example_document(result, form_name: str | None = None) -> Document:
    a = result.algebra
    name = form_name or ("Gamma" if result.kind == "p-contact" else "Omega")
    doc = Document(algebras={a.name: a}, forms={name: result.form}, form_owner={name: a.name})
    if result.fibration is not None:
        f = result.fibration
        doc.fibrations["fib"] = FibrationDecl("fib", a.name, f.base_indices, f.eta, f.psi3)
    return doc


def cmd_example(args, stdin):
    matrix = _read_matrix(args.matrix) if args.family == "class-I" else None
    result = make_example(args.family, args.l, matrix)
    doc = example_document(result)
    text = serialize_document(doc)
    report = _report("example", {"family": args.family, "l": args.l, "matrix": args.matrix})
    report["certificates"].append({"kind": "document", "algebra": result.algebra.name, "document": text})
    return report, [text.rstrip("\n")]


def cmd_no_structure(args, stdin):
    doc, source = _read_document(args, stdin)
    a = doc.algebra()
    rep = no_invariant_contact(a) if args.kind == "contact" else no_invariant_symplectic(a)
    report = _report(f"no-structure {args.kind}", {"algebra": a.name, "source": source})
    report["certificates"].append(rep.to_dict())
    if rep.verdict != "no structure":
        _fail(report, f"verdict: {rep.verdict}")
    lines = [f"invariant {args.kind} structures on {a.name}: {rep.verdict}"]
    lines += [f"  {label}: {value}" for label, value in rep.steps]
    if rep.note:
        lines.append(f"  {rep.note}")
    return report, lines


def cmd_selftest(args, stdin):
    from .selftest import run_selftest

    result = run_selftest(seed=args.seed, corpus_dir=args.corpus)
    report = _report("selftest", {"seed": args.seed, "corpus": args.corpus or "builtin"})
    report["certificates"] = [s.to_dict() for s in result.suites]
    report["dims"] = {s.name: s.samples for s in result.suites}
    for s in result.suites:
        if not s.ok:
            _fail(report, f"suite {s.name}: {s.failed} of {s.samples} failed")
    lines = [s.line() for s in result.suites]
    lines.append(f"{sum(s.ok for s in result.suites)}/{len(result.suites)} suites pass (seed {args.seed})")
    return report, lines


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="a .cnil file or corpus entry name (default: read standard input)")
    common.add_argument("--form", help="a form name from the document or an expression such as phi1^phi2")
    common.add_argument("--vector", help="a vector form name from the document or an expression")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--order", type=int, default=6, help="maximal order for deform")

    parser = argparse.ArgumentParser(prog="pcontact", description="Exact checks for invariant p-contact geometry.")
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    p = verbs.add_parser("verify", parents=[common], help="certify a p-contact or s-symplectic form")
    p.add_argument("kind", choices=("p-contact", "s-symplectic"))
    p.set_defaults(handler=cmd_verify)

    verbs.add_parser("kernels", parents=[common], help="kernel subspaces F and G").set_defaults(handler=cmd_kernels)
    verbs.add_parser("froelicher", parents=[common], help="E1 and E2 page dimensions").set_defaults(handler=cmd_froelicher)
    verbs.add_parser("deform", parents=[common], help="run the deformation recursion").set_defaults(handler=cmd_deform)
    verbs.add_parser("structure-theorem", parents=[common], help="check a fibration block").set_defaults(
        handler=cmd_structure
    )

    p = verbs.add_parser("example", parents=[common], help="emit an example as a .cnil document")
    p.add_argument("family", choices=sorted(EXAMPLES))
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--matrix", default="identity", help="identity, ones or a file of matrix rows")
    p.set_defaults(handler=cmd_example)

    p = verbs.add_parser("no-structure", parents=[common], help="symbolic non-existence argument")
    p.add_argument("kind", choices=("contact", "symplectic"))
    p.set_defaults(handler=cmd_no_structure)

    p = verbs.add_parser("selftest", parents=[common], help="run the seeded property suites")
    p.add_argument("--corpus", default=None, help="directory of .cnil files to use instead of the shipped corpus")
    p.set_defaults(handler=cmd_selftest)
    return parser


def emit(report: dict, lines: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if report["command"] == "example":
        return "\n".join(lines) + "\n"
    status = f"status: {report['status']}"
    return "\n".join([*lines, status]) + "\n"


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report, lines = args.handler(args, stdin)
    except (InputError, DSLError, AlgebraError, InfeasibleSystem, ValueError, TypeError, OSError) as exc:
        stderr.write(f"pcontact {args.verb}: error: {exc}\n")
        return EXIT_INPUT
    stdout.write(emit(report, lines, args.output))
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
