"""Command-line front end.

State files are line oriented, with ``#`` starting a comment::

    dims: 2 2
    roles: S R
    kind: pure
    0.7071067811865476 0
    0 0
    0 0
    0.7071067811865476 0

Every number after the header is one half of a ``re im`` pair. Pure files list
amplitudes in basis order, mixed files list matrix entries row by row.

Exit codes: 0 success, 1 input error, 2 validation failure, 3 verify failure.
Failures end with a line ``ERROR: <code> <message>``.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from . import statezoo
from .criteria import InvalidCut, classify
from .densecoding import capacity_report
from .states import (
    DensityState,
    PartyLayout,
    Role,
    ValidationFailed,
    from_matrix,
    from_pure,
    validate,
)
from .verify import run_all

INPUT_ERROR, VALIDATION_ERROR, VERIFY_ERROR = 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class StateFileSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _header(lines: list[tuple[int, str]], pos: int, key: str) -> tuple[int, list[str]]:
    if pos >= len(lines):
        raise StateFileSyntaxError(lines[-1][0] if lines else 0, f"missing '{key}:' header")
    lineno, text = lines[pos]
    name, sep, rest = text.partition(":")
    if not sep or name.strip().lower() != key:
        raise StateFileSyntaxError(lineno, f"expected '{key}:' header")
    return lineno, rest.split()


def parse_state_file(text: str) -> DensityState:
    """Parse and validate a state file."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))

    lineno, tokens = _header(lines, 0, "dims")
    try:
        dims = [int(t) for t in tokens]
    except ValueError:
        raise StateFileSyntaxError(lineno, "dims must be integers") from None
    if not dims or any(d < 2 for d in dims):
        raise StateFileSyntaxError(lineno, "each local dimension must be >= 2")

    lineno, roles = _header(lines, 1, "roles")
    if len(roles) != len(dims) or any(r.upper() not in ("S", "R") for r in roles):
        raise StateFileSyntaxError(lineno, f"roles must be {len(dims)} tokens of S or R")

    lineno, kind = _header(lines, 2, "kind")
    if kind not in (["pure"], ["mixed"]):
        raise StateFileSyntaxError(lineno, "kind must be 'pure' or 'mixed'")

    numbers = []
    for lineno, body in lines[3:]:
        for tok in body.replace("/", " ").split():
            try:
                numbers.append(float(tok))
            except ValueError:
                raise StateFileSyntaxError(lineno, f"not a number: {tok!r}") from None
    if len(numbers) % 2:
        raise StateFileSyntaxError(lines[-1][0], "numbers must come in 're im' pairs")
    values = np.array(numbers[0::2]) + 1j * np.array(numbers[1::2])

    layout = PartyLayout.build(dims, [Role.parse(r) for r in roles])
    d = layout.total_dim
    expected = d if kind == ["pure"] else d * d
    if values.size != expected:
        raise StateFileSyntaxError(
            lines[-1][0], f"{kind[0]} state on dimension {d} needs {expected} entries, got {values.size}"
        )
    if kind == ["pure"]:
        if not np.any(values):
            raise ValidationFailed(validate(DensityState(layout, np.zeros((d, d)))))
        return from_pure(values, layout).checked()
    return from_matrix(values.reshape(d, d), layout)


def format_state_file(s: DensityState, comment: str | None = None) -> str:
    """Serialize as a ``mixed`` state file; values use ``repr`` so they round-trip exactly."""
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append("dims: " + " ".join(str(d) for d in s.layout.dims))
    out.append("roles: " + " ".join(p.role.value for p in s.layout.parties))
    out.append("kind: mixed")
    for row in s.rho:
        out.append("  ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row))
    return "\n".join(out) + "\n"


def parse_assignment(text: str) -> dict[str, str]:
    pairs = {}
    for item in text.split(","):
        snd, sep, rcv = item.strip().partition(":")
        if not sep or not snd or not rcv:
            raise CliError(INPUT_ERROR, f"bad assignment item {item!r}; expected 'sender:receiver'")
        pairs[snd.strip()] = rcv.strip()
    return pairs


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _emit(rows, out) -> None:
    for key, value in rows:
        print(f"{key} = {_fmt(value)}", file=out)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(INPUT_ERROR, message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--tolerance", type=float, default=1e-9, help="DC threshold tolerance in bits")
    common.add_argument("--assignment", help="sender-to-receiver map, e.g. '1:3,2:4'")

    parser = _Parser(prog="densecode", description="Dense-coding capacities and classification")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (("analyze", "print all capacities and bounds"), ("classify", "print the shell verdict")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("file", nargs="?", help="state file")
        p.add_argument("--zoo", nargs="+", metavar="NAME", help="zoo state name followed by its parameters")
        if name == "classify":
            p.add_argument("--cut", help="comma-separated labels on the sender side of the cut")

    p = sub.add_parser("zoo", parents=[common], help="write a named state to a file")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output", help="output path (default stdout)")

    sub.add_parser("werner-threshold", parents=[common], help="print the Werner dense-coding threshold")
    sub.add_parser("verify", parents=[common], help="run the built-in property suites")
    return parser


def _load(args) -> tuple[DensityState, statezoo.ZooEntry | None]:
    if (args.file is None) == (args.zoo is None):
        raise CliError(INPUT_ERROR, "give exactly one of a state file or --zoo NAME")
    if args.zoo:
        name, *params = args.zoo
        s = statezoo.make(name, *params).checked()
        base = params[0] if name == "noisy" and params else name
        entry = statezoo.ZOO.get(base)
        return s, entry
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        raise CliError(INPUT_ERROR, f"cannot read {args.file}: {exc.strerror}") from None
    return parse_state_file(text), None


def _assignment_for(args, s: DensityState, entry) -> dict[str, str] | None:
    if args.assignment:
        return parse_assignment(args.assignment)
    if entry is not None and entry.assignment is not None:
        return dict(entry.assignment)
    return statezoo.default_assignment(s)


def _cmd_analyze(args, out) -> int:
    s, entry = _load(args)
    assignment = _assignment_for(args, s, entry)
    report = capacity_report(s, assignment, eps=args.tolerance)
    if assignment:
        print("assignment = " + ",".join(f"{k}:{v}" for k, v in assignment.items()), file=out)
    _emit(report.items(), out)
    for note in entry.notes if entry else ():
        print(f"note = {note}", file=out)
    return 0


def _cmd_classify(args, out) -> int:
    s, entry = _load(args)
    left = args.cut.split(",") if args.cut else None
    assignment = _assignment_for(args, s, entry) if len(s.layout.receivers) == 2 else None
    verdict = classify(
        s,
        left,
        assignment=assignment,
        known_entangled=entry.known_entangled if entry else None,
        eps=args.tolerance,
    )
    _emit(verdict.items(), out)
    return 0


def _cmd_zoo(args, out) -> int:
    s = statezoo.make(args.name, *args.params).checked()
    text = format_state_file(s, comment=" ".join([args.name, *args.params]))
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote = {args.output}", file=out)
    else:
        out.write(text)
    return 0


def _cmd_werner(args, out) -> int:
    xtol = 1e-6
    p = statezoo.werner_dc_threshold(xtol)
    print(f"p* = {p:.6f} ± {xtol:.1e}", file=out)
    return 0


def _cmd_verify(args, out) -> int:
    start = time.perf_counter()
    results = run_all(args.seed)
    for r in results:
        print(r.line(), file=out)
    print(f"seed = {args.seed}", file=out)
    print(f"elapsed = {time.perf_counter() - start:.2f} s", file=out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise CliError(VERIFY_ERROR, "failed suites: " + ", ".join(failed))
    return 0


COMMANDS = {
    "analyze": _cmd_analyze,
    "classify": _cmd_classify,
    "zoo": _cmd_zoo,
    "werner-threshold": _cmd_werner,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str], out=None) -> int:
    """Run one command; returns the exit code. Output goes to ``out`` (stdout by default)."""
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(list(argv))
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except ValidationFailed as exc:
        code, msg = VALIDATION_ERROR, f"validation failed: {exc}"
    except (StateFileSyntaxError, InvalidCut, statezoo.BadParameter, KeyError, ValueError) as exc:
        code, msg = INPUT_ERROR, str(exc).strip("'\"")
    print(f"ERROR: {code} {msg}", file=out)
    return code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
