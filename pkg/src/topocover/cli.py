"""Command-line front end.

Commands: check, run, verify-cert, enumerate, positivity.  Every command
reads either a program source file or an explicit graph (``--graph``) and
writes one JSON document (or a short text summary with ``--format text``).

Exit codes: 0 covered / success, 1 uncovered / divergence / invalid
certificate, 2 unknown (budget exhausted), 3 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import cover, dsl
from .axioms import SingletonAxiomSet, axioms_from_json
from .elements import decode, encode
from .errors import InvalidCertificate, ParseError, TopocoverError
from .positivity import Positive, PositivityUnknown, positivity, positivity_to_json
from .recursion import (
    Divergence, OracleTable, enumerate_outcomes, eval_certified, eval_extracted, eval_relative,
)
from .subsets import EMPTY, UNIVERSAL, subset_from_json

DEFAULT_BUDGET = 100_000
EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _default_budget():
    raw = os.environ.get("TOPOCOVER_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"TOPOCOVER_BUDGET: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topocover", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, needs_input=True):
        p.add_argument("source", nargs="?", help="program source file")
        p.add_argument("--graph", help="explicit axiom set as JSON, inline or @file")
        p.add_argument("--fn", help="function to analyse (default: the only one)")
        p.add_argument("--input", required=needs_input, help="input element, e.g. (12)")
        p.add_argument("--budget", type=_positive_int, default=None)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="write the result document here instead of stdout")

    p = sub.add_parser("check", help="derive a cover certificate or a divergence witness")
    common(p, needs_input=False)
    p.add_argument("--u", help="subset U as JSON (default: empty)")
    p.add_argument("--range", dest="range_", metavar="A..B", help="check every natural in A..B")

    p = sub.add_parser("run", help="evaluate the function")
    common(p)
    p.add_argument("--mode", choices=("certified", "extracted", "relative"), default="extracted")
    p.add_argument("--fuel", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--oracle", help="oracle table JSON for relative mode, inline or @file")
    p.add_argument("--cert", help="certificate to use in certified mode instead of deriving one")

    p = sub.add_parser("verify-cert", help="check a certificate")
    common(p, needs_input=False)
    p.add_argument("--cert", required=True, help="certificate or check result JSON file")
    p.add_argument("--u", help="subset U as JSON (default: taken from the document, else empty)")

    p = sub.add_parser("enumerate", help="all outcomes of a nondeterministic function")
    common(p)
    p.add_argument("--fuel", type=_positive_int, default=DEFAULT_BUDGET)

    p = sub.add_parser("positivity", help="coinductive divergence within a subset F")
    common(p)
    p.add_argument("--f", dest="f", help="subset F as JSON (default: everything)")
    return parser


def _load_json(text, what):
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {what}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


@dataclass
class _Target:
    axioms: object
    program: Optional[dsl.Program] = None
    fname: Optional[str] = None

    def element(self, text):
        e = decode(text)
        if self.program is not None:
            e = dsl.input_element(self.program, self.fname, e)
        return e

    def require_program(self, command):
        if self.program is None:
            raise UsageError(f"{command} needs a program source, not a graph")


def _load_target(args, singleton=True) -> _Target:
    if (args.source is None) == (args.graph is None):
        raise UsageError("give exactly one of a source file or --graph")
    if args.graph is not None:
        return _Target(axioms_from_json(_load_json(args.graph, "--graph")))
    try:
        with open(args.source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.source}: {exc}") from None
    try:
        program = dsl.parse(text)
    except ParseError as exc:
        raise UsageError(f"{args.source}:{exc}") from None
    problems = dsl.errors(dsl.validate(program))
    if problems:
        raise UsageError("\n".join(f"{args.source}:{v}" for v in problems))
    fname = args.fn
    if fname is None:
        if len(program.functions) != 1:
            raise UsageError("the program defines several functions; pick one with --fn")
        fname = program.functions[0].name
    fd = program.function(fname)
    if fd is None:
        raise UsageError(f"no function named {fname!r}")
    if singleton and not dsl.function_has_choice(fd):
        axioms, _ = dsl.lower_singleton(program, fname)
    else:
        axioms, _ = dsl.lower(program, fname)
    return _Target(axioms, program, fname)


def _emit(args, doc, text):
    if args.format == "json":
        payload = json.dumps(doc) + "\n"
    else:
        payload = text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _budget(args):
    return args.budget if args.budget is not None else _default_budget()


_CHECK_EXIT = {"covered": EXIT_OK, "uncovered": EXIT_NEGATIVE, "unknown": EXIT_UNKNOWN}


def _check_text(doc):
    root = doc["query"]["root"]
    if doc["result"] == "covered":
        return f"covered: {root}"
    if doc["result"] == "uncovered":
        w = doc["witness"]
        if "lasso" in w:
            stem = " ".join(w["lasso"]["stem"])
            cycle = " ".join(w["lasso"]["cycle"])
            return f"uncovered: {root} (stem [{stem}] cycle [{cycle}])"
        return f"uncovered: {root} (set [{' '.join(w['uncoveredSet'])}])"
    return f"unknown: {root} (explored {doc['explored']}, budget {doc['budget']})"


def cmd_check(args) -> int:
    target = _load_target(args)
    u = subset_from_json(_load_json(args.u, "--u")) if args.u else EMPTY
    budget = _budget(args)
    if args.range_ is not None:
        if args.input is not None:
            raise UsageError("--range and --input are exclusive")
        lo, sep, hi = args.range_.partition("..")
        if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi):
            raise UsageError(f"--range expects A..B with A <= B, got {args.range_!r}")
        roots = [target.element(str(k)) for k in range(int(lo), int(hi) + 1)]
    elif args.input is None:
        raise UsageError("check needs --input or --range")
    else:
        roots = [target.element(args.input)]
    docs = [cover.result_to_json(cover.derive(target.axioms, u, a, budget), u, a) for a in roots]
    code = max(_CHECK_EXIT[d["result"]] for d in docs)
    if args.range_ is not None:
        _emit(args, {"results": docs}, "\n".join(_check_text(d) for d in docs))
    else:
        _emit(args, docs[0], _check_text(docs[0]))
    return code


def _divergence_doc(d: Divergence):
    return {"reason": d.reason, "element": encode(d.element), "calls": d.calls}


def cmd_run(args) -> int:
    target = _load_target(args)
    target.require_program("run")
    if not isinstance(target.axioms, SingletonAxiomSet):
        raise UsageError(f"{target.fname} is nondeterministic; use the enumerate command")
    _, h = dsl.lower_singleton(target.program, target.fname)
    a = target.element(args.input)
    query = {"fn": target.fname, "input": encode(a), "mode": args.mode}

    if args.mode == "certified":
        if args.cert:
            doc = _load_json("@" + args.cert, "--cert")
            proof = cover.proof_from_json(doc.get("certificate", doc))
        else:
            result = cover.derive(target.axioms, EMPTY, a, _budget(args))
            if not isinstance(result, cover.Covered):
                doc = cover.result_to_json(result, EMPTY, a)
                doc["error"] = "no termination certificate; refusing to run in certified mode"
                _emit(args, doc, _check_text(doc) + "\nrefusing to run without a certificate")
                return _CHECK_EXIT[doc["result"]]
            proof = result.proof
        try:
            # shared sub-certificates are evaluated once
            value = eval_certified(h, target.axioms, a, proof, memo=True)
        except InvalidCertificate as exc:
            doc = {"query": query, "error": f"invalid certificate: {exc}"}
            _emit(args, doc, doc["error"])
            return EXIT_NEGATIVE
    elif args.mode == "extracted":
        value = eval_extracted(h, target.axioms, a, args.fuel)
    else:
        if not args.oracle:
            raise UsageError("relative mode needs --oracle")
        table = OracleTable.from_json(_load_json(args.oracle, "--oracle"))
        value = eval_relative(h, target.axioms, a, table, args.fuel)

    if isinstance(value, Divergence):
        doc = {"query": query, "divergence": _divergence_doc(value)}
        _emit(args, doc, f"divergence ({value.reason}) at {encode(value.element)}")
        return EXIT_NEGATIVE
    _emit(args, {"query": query, "value": encode(value)}, encode(value))
    return EXIT_OK


def cmd_verify_cert(args) -> int:
    target = _load_target(args)
    doc = _load_json("@" + args.cert, "--cert")
    if not isinstance(doc, dict):
        raise UsageError("certificate document must be a JSON object")
    if "certificate" in doc:
        query, proof = doc.get("query", {}), cover.proof_from_json(doc["certificate"])
    elif "result" in doc:
        raise UsageError(f"the document carries no certificate (result: {doc['result']})")
    else:
        query, proof = {}, cover.proof_from_json(doc)
    if args.u:
        u = subset_from_json(_load_json(args.u, "--u"))
    elif "u" in query:
        u = subset_from_json(query["u"])
    else:
        u = EMPTY
    if args.input is not None:
        root = target.element(args.input)
    elif "root" in query:
        root = decode(query["root"])
    else:
        root = proof.element
    failure = cover.explain_proof(target.axioms, u, root, proof)
    if failure is None:
        _emit(args, {"valid": True, "root": encode(root)}, f"valid certificate for {encode(root)}")
        return EXIT_OK
    out = {"valid": False, "root": encode(root),
           "failure": {"path": [encode(e) for e in failure.path], "reason": failure.reason}}
    _emit(args, out, f"invalid certificate: {failure}")
    return EXIT_NEGATIVE


def cmd_enumerate(args) -> int:
    target = _load_target(args, singleton=False)
    target.require_program("enumerate")
    axioms, n = dsl.lower(target.program, target.fname)
    a = target.element(args.input)
    result = enumerate_outcomes(n, axioms, a, args.fuel)
    query = {"fn": target.fname, "input": encode(a)}
    if isinstance(result, Divergence):
        _emit(args, {"query": query, "divergence": _divergence_doc(result)},
              f"divergence ({result.reason}) at {encode(result.element)}")
        return EXIT_NEGATIVE
    values = [encode(v) for v in sorted(result)]
    _emit(args, {"query": query, "outcomes": values}, " ".join(values))
    return EXIT_OK


def cmd_positivity(args) -> int:
    target = _load_target(args)
    f = subset_from_json(_load_json(args.f, "--f")) if args.f else UNIVERSAL
    a = target.element(args.input)
    result = positivity(target.axioms, f, a, _budget(args))
    doc = positivity_to_json(result, f, a)
    if isinstance(result, Positive):
        text = f"positive: {encode(a)}"
        if result.lasso is not None:
            text += f" (cycle [{' '.join(encode(x) for x in result.lasso.cycle)}])"
    elif isinstance(result, PositivityUnknown):
        text = f"unknown: {encode(a)} (explored {result.explored}, budget {result.budget})"
    else:
        text = f"not positive: {encode(a)}"
    _emit(args, doc, text)
    return EXIT_UNKNOWN if isinstance(result, PositivityUnknown) else EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "verify-cert": cmd_verify_cert,
    "enumerate": cmd_enumerate,
    "positivity": cmd_positivity,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"topocover: {exc}", file=sys.stderr)
    except TopocoverError as exc:
        print(f"topocover: {exc}", file=sys.stderr)
    return EXIT_USAGE
