"""Command-line interface.

Exit codes: 0 success, 1 invalid input or usage, 2 theorem violation or
internal-consistency failure. Diagnostics go to stderr; stdout only ever
carries complete JSON/CSV documents.
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass

import numpy as np

from . import _io
from .clifford import enumerate_cliffords
from .decomposition import decompose
from .exceptions import (
    CliffordThresholdError,
    InternalConsistencyError,
    InvalidArgumentError,
    SolverFailure,
    TheoremViolation,
    ZeroProbabilityBranch,
)
from .facets import enumerate_facets, polytope_membership
from .postselection import TwoQubitPauli, postselect_formula, postselect_oracle
from .so3 import (
    GateAngles,
    as_rotation,
    depolarize,
    rotation_from_unitary,
    unitary_from_angles,
    unitary_from_reals,
)
from .threshold import SurveyRow, threshold, threshold_survey
from .tightness import run_verification

EXIT_OK, EXIT_INPUT, EXIT_THEOREM = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError as exc:
        raise InvalidArgumentError(f"{what}: {exc}") from None
    if len(vals) != n:
        raise InvalidArgumentError(f"{what} expects {n} comma-separated numbers, got {len(vals)}")
    if not all(np.isfinite(vals)):
        raise InvalidArgumentError(f"{what} must be finite")
    return vals


@dataclass(frozen=True)
class GateSpec:
    """Exactly one of angles, unitary (8 reals) or matrix (9 reals)."""

    angles: GateAngles | None = None
    unitary: np.ndarray | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def from_args(cls, args) -> GateSpec:
        if args.angles is not None:
            return cls(angles=GateAngles(*_floats(args.angles, 3, "--angles")))
        if args.unitary is not None:
            return cls(unitary=unitary_from_reals(_floats(args.unitary, 8, "--unitary")))
        return cls(matrix=np.array(_floats(args.matrix, 9, "--matrix")).reshape(3, 3))

    def as_unitary(self) -> np.ndarray | None:
        if self.angles is not None:
            return unitary_from_angles(self.angles)
        return self.unitary

    def as_matrix(self) -> np.ndarray:
        u = self.as_unitary()
        return rotation_from_unitary(u) if u is not None else self.matrix


def _add_gate(p: argparse.ArgumentParser, noise: bool = False) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--angles", metavar="T,G,D", help="theta,gamma,delta in radians")
    g.add_argument("--unitary", metavar="8 REALS", help="row-major (re,im) pairs of a 2x2 unitary")
    g.add_argument("--matrix", metavar="9 REALS", help="row-major 3x3 matrix, taken as given")
    if noise:
        p.add_argument("--noise", type=float, default=0.0, help="depolarizing rate p in [0, 1]")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _grid(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like NxNxN")
    return tuple(_positive(p) for p in parts)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clifford-threshold", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("cliffords", help="the 24 Clifford rotations as JSON")
    sub.add_parser("facets", help="the 120 polytope facets as JSON")

    p = sub.add_parser("membership", help="facet test for a (noisy) gate or raw matrix")
    _add_gate(p, noise=True)

    p = sub.add_parser("decompose", help="convex weights over the Clifford vertices")
    _add_gate(p, noise=True)

    p = sub.add_parser("threshold", help="tight depolarizing threshold of a gate")
    _add_gate(p)

    p = sub.add_parser("survey", help="thresholds over a regular angle grid")
    p.add_argument("--grid", type=_grid, required=True, metavar="NxNxN")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=_positive, default=1)

    p = sub.add_parser("postselect", help="Bell-pair postselection on a weight-two Pauli")
    _add_gate(p, noise=True)
    p.add_argument("--meas", default="YX", help="two-qubit Pauli, e.g. YX")
    p.add_argument("--outcome", type=int, choices=(1, -1), default=1)

    p = sub.add_parser("verify", help="Monte Carlo check of the dominance theorem")
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--report", help="also write the JSON report here")
    p.add_argument("--no-stress", action="store_true", help="skip the structured stress rotations")
    p.add_argument("--norm-lemma-samples", type=int, default=0)
    return parser


def _noisy(spec: GateSpec, p: float) -> np.ndarray:
    return depolarize(spec.as_matrix(), p)


def cmd_cliffords(args, out) -> int:
    recs = [{"index": c.index, "matrix": [int(v) for v in c.matrix.ravel()]} for c in enumerate_cliffords()]
    out.write(_io.dumps(recs, indent=2) + "\n")
    return EXIT_OK


def cmd_facets(args, out) -> int:
    out.write(_io.dumps([f.to_dict() for f in enumerate_facets()], indent=2) + "\n")
    return EXIT_OK


def cmd_membership(args, out) -> int:
    m = _noisy(GateSpec.from_args(args), args.noise)
    out.write(_io.dumps(polytope_membership(m).to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    m = _noisy(GateSpec.from_args(args), args.noise)
    out.write(_io.dumps(decompose(m).to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_threshold(args, out) -> int:
    spec = GateSpec.from_args(args)
    rep = threshold(as_rotation(spec.as_matrix()))
    out.write(_io.dumps(rep.to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_survey(args, out) -> int:
    rows = (r.to_dict() for r in threshold_survey(args.grid, workers=args.workers))
    target = open(args.out, "w", encoding="utf-8", newline="\n") if args.out else out
    try:
        if args.format == "csv":
            _io.write_csv(target, list(SurveyRow.FIELDS), rows)
        else:
            target.write("[")
            for k, row in enumerate(rows):
                target.write(("," if k else "") + "\n  " + _io.dumps(row))
            target.write("\n]\n")
    finally:
        if target is not out:
            target.close()
    return EXIT_OK


def cmd_postselect(args, out) -> int:
    spec = GateSpec.from_args(args)
    meas = TwoQubitPauli.parse(args.meas)
    u = spec.as_unitary()
    if u is not None:
        res = postselect_oracle(u, meas, args.outcome, p=args.noise)
    else:
        res = postselect_formula(depolarize(spec.matrix, args.noise), meas, args.outcome)
    out.write(_io.dumps(res.to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    rep = run_verification(
        args.samples,
        seed=args.seed,
        workers=args.workers,
        stress=not args.no_stress,
        norm_lemma_samples=args.norm_lemma_samples,
    )
    text = _io.dumps(rep.to_dict(), indent=2) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    out.write(text)
    return EXIT_OK if rep.ok else EXIT_THEOREM


COMMANDS = {
    "cliffords": cmd_cliffords,
    "facets": cmd_facets,
    "membership": cmd_membership,
    "decompose": cmd_decompose,
    "threshold": cmd_threshold,
    "survey": cmd_survey,
    "postselect": cmd_postselect,
    "verify": cmd_verify,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, dispatch, and return the exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(str(exc))
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT

    buf = io.StringIO()
    streaming = args.command == "survey"
    try:
        code = COMMANDS[args.command](args, stdout if streaming else buf)
    except (TheoremViolation, InternalConsistencyError, SolverFailure) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_THEOREM
    except (InvalidArgumentError, ZeroProbabilityBranch, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except CliffordThresholdError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_THEOREM
    stdout.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
