import argparse
import logging
import re
import sys

from pydantic import BaseModel

from .algebra import ToupieAlgebra, check_spec, format_rational, validate_and_build
from .cohomology import CohomologyClass, hh_basis
from .config import LOG_LEVEL, ensure_config
from .errors import HochschildError, OracleDisagreement, UnknownLabel
from .gerstenhaber import bracket
from .oracle import run_oracle
from .report import (
    InputDocument,
    build_report,
    default_max_degree,
    load_document,
    oracle_out,
    render_oracle_lines,
    render_text,
)

logger = logging.getLogger(__name__)

_FULL_ALIAS = re.compile(r"^a(\d+)‖(.+)$")
_FULL_WINDOW = re.compile(r"\b(?:sigma|amb)\((\d+),0,(\d+)\)‖")


class BracketOut(BaseModel):
    left: str
    right: str
    degree: int
    coordinates: dict[str, str]
    value: str


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="hochschild",
        description="Hochschild cohomology and Gerstenhaber structure of toupie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("path", help="TOML input document")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
        fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
        p.add_argument("--out", help="write the result to this file instead of stdout")
        p.set_defaults(fmt="text")

    p = sub.add_parser("validate", help="check an input document")
    p.add_argument("path", help="TOML input document")

    p = sub.add_parser("report", help="full cohomology report")
    common(p)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--oracle", action="store_true", help="attach the bar complex oracle block")
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("oracle", help="compare with the bar complex")
    common(p)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("bracket", help="Gerstenhaber bracket of two labeled classes")
    common(p)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--max-degree", type=int, default=None)
    return parser.parse_args(argv)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _load(path: str) -> tuple[InputDocument, ToupieAlgebra]:
    doc = load_document(path)
    return doc, validate_and_build(doc.to_spec())


def _max_degree(args: argparse.Namespace, doc: InputDocument, alg: ToupieAlgebra) -> int:
    if args.max_degree is not None:
        return args.max_degree
    if doc.options.max_degree is not None:
        return doc.options.max_degree
    return default_max_degree(alg)


def _budget(args: argparse.Namespace, doc: InputDocument) -> int | None:
    if getattr(args, "budget", None) is not None:
        return args.budget
    return doc.options.oracle_budget


def resolve_label(alg: ToupieAlgebra, label: str, max_degree: int) -> CohomologyClass:
    """A labeled class of HH^0..HH^max_degree; accepts ``||`` and the full-branch alias ``a{b}‖…``."""
    label = label.strip().replace("||", "‖")
    candidates = [label]
    match = _FULL_ALIAS.match(label)
    if match is not None:
        b, rest = int(match.group(1)), match.group(2)
        if 1 <= b <= alg.num_branches:
            length = alg.lengths[b - 1]
            candidates += [f"sigma({b},0,{length})‖{rest}", f"amb({b},0,{length})‖{rest}"]
    for degree in range(max_degree + 1):
        basis = hh_basis(alg, degree)
        for name in candidates:
            if name in basis.labels:
                return basis.element(basis.labels.index(name))
    raise UnknownLabel(f"no class {label!r} in HH^0..HH^{max_degree}", location=label)


def display_label(alg: ToupieAlgebra, text: str) -> str:
    """Shorten full-branch windows ``sigma(b,0,len)‖`` and ``amb(b,0,len)‖`` to ``a{b}‖``."""

    def shorten(match: re.Match) -> str:
        b, length = int(match.group(1)), int(match.group(2))
        if 1 <= b <= alg.num_branches and alg.lengths[b - 1] == length:
            return f"a{b}‖"
        return match.group(0)

    return _FULL_WINDOW.sub(shorten, text)


def _coordinates(cls: CohomologyClass) -> dict[str, str]:
    return {cls.labels[i]: format_rational(c) for i, c in sorted(cls.coordinates.items())}


def cmd_validate(args: argparse.Namespace) -> int:
    doc = load_document(args.path)
    problems = check_spec(doc.to_spec())
    for problem in problems:
        print(problem.diagnostic(), file=sys.stderr)
    if problems:
        return problems[0].exit_code
    alg = validate_and_build(doc.to_spec())
    print(f"ok: {alg.num_branches} branches, invariants {alg.invariants()}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    doc, alg = _load(args.path)
    report = build_report(alg, _max_degree(args, doc, alg))
    code = 0
    if args.oracle:
        result = run_oracle(alg, report.max_degree, _budget(args, doc))
        report.oracle = oracle_out(result)
        code = _oracle_exit(result)
    _emit(report.to_json() + "\n" if args.fmt == "json" else render_text(report), args.out)
    return code


def _oracle_exit(result) -> int:
    if result.budget_error is not None:
        print(result.budget_error.diagnostic(), file=sys.stderr)
        return result.budget_error.exit_code
    if not result.agrees:
        err = OracleDisagreement("the bar complex and the minimal complex disagree")
        print(err.diagnostic(), file=sys.stderr)
        return err.exit_code
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    doc, alg = _load(args.path)
    budget = _budget(args, doc)
    if budget is not None and budget < 1:
        raise HochschildError(f"budget must be positive, got {budget}", location="--budget")
    result = run_oracle(alg, _max_degree(args, doc, alg), budget)
    out = oracle_out(result)
    if args.fmt == "json":
        text = out.model_dump_json(indent=2, exclude_none=True) + "\n"
    else:
        text = "\n".join(render_oracle_lines(out)) + "\n"
    _emit(text, args.out)
    return _oracle_exit(result)


def cmd_bracket(args: argparse.Namespace) -> int:
    doc, alg = _load(args.path)
    top = _max_degree(args, doc, alg)
    f = resolve_label(alg, args.left, top)
    g = resolve_label(alg, args.right, top)
    result = bracket(alg, f, g)
    out = BracketOut(
        left=args.left, right=args.right, degree=result.degree,
        coordinates=_coordinates(result), value=display_label(alg, result.pretty()),
    )
    if args.fmt == "json":
        text = out.model_dump_json(indent=2) + "\n"
    else:
        text = f"[{out.left}, {out.right}] = {out.value}\n"
    _emit(text, args.out)
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "report": cmd_report,
    "oracle": cmd_oracle,
    "bracket": cmd_bracket,
}


def main(argv: list[str] | None = None) -> int:
    ensure_config()
    logging.basicConfig(level=LOG_LEVEL)
    args = _parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HochschildError as exc:
        print(exc.diagnostic(), file=sys.stderr)
        return exc.exit_code
    except Exception:
        logger.exception("internal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
