"""Command-line client for the quatsim service layer.

Every subcommand parses flags and files into the same pydantic request
models the HTTP endpoints consume, calls the shared handlers in-process,
and writes canonical JSON (sorted keys, two-space indent), so identical
configuration always produces byte-identical output.

Exit codes: 0 all checks passed, 1 a mathematical invariant was violated,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import pydantic

from .errors import QuatsimError
from .qqt import State
from .service import api, models


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def dump_model(model) -> str:
    return canonical_json(model.model_dump(mode="json", by_alias=True))


def parse_dims(text: str) -> list[int]:
    """Dimension list syntax: '1..6', '2,3,5', or a mix ('1..3,5')."""
    dims: list[int] = []
    try:
        for token in text.split(","):
            token = token.strip()
            if ".." in token:
                lo, hi = token.split("..", 1)
                dims.extend(range(int(lo), int(hi) + 1))
            elif token:
                dims.append(int(token))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse dimension list {text!r}")
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"dimensions must be >= 1, got {text!r}")
    return dims


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def load_file(path: str, model_cls):
    data = json.loads(Path(path).read_text())
    return model_cls.model_validate(data)


def write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------

def cmd_verify(args) -> int:
    req = models.VerifyRequest(seed=args.seed, dims=args.dims, trials=args.trials,
                               mode=args.mode, tolerance=args.tol)
    report = api.run_verify(req)
    write_output(dump_model(report), args.out)
    status = "PASS" if report.passed else "FAIL"
    print(f"verify: {status} (max measurement dev {report.max_measurement_dev:.3e}, "
          f"max channel dev {report.max_channel_dev:.3e}, worst seed "
          f"{report.worst_seed})", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_simulate(args) -> int:
    state = load_file(args.state, models.StateFile)
    povm = load_file(args.povm, models.PovmFile)
    channel = load_file(args.channel, models.ChannelFile) if args.channel else None
    req = models.SimulateRequest(state=state, povm=povm, channel=channel,
                                 mode=args.mode)
    resp = api.run_simulate(req)
    lines = [f"{'r':>4} {'p(r)':>22} {'q(r)':>22} {'|p-q|':>12}"]
    for row in resp.outcomes:
        lines.append(f"{row.index:>4} {row.p:>22.16f} {row.q:>22.16f} "
                     f"{row.deviation:>12.3e}")
    lines.append(f"max deviation: {resp.max_deviation:.3e}")
    if resp.intermediate_residual is not None:
        lines.append(f"intermediate identity residual: "
                     f"{resp.intermediate_residual:.3e}")
    print("\n".join(lines))
    if args.out:
        write_output(dump_model(resp), args.out)
    return 0


def cmd_embed(args) -> int:
    if args.direction == "h2c":
        payload = load_file(args.input, models.QuatMatrixFile)
        req = models.EmbedToComplexRequest(direction="h2c", matrix=payload)
        resp = api.run_embed(req)
        out_file = models.ComplexMatrixFile(**resp.matrix.model_dump())
    else:
        payload = load_file(args.input, models.ComplexMatrixFile)
        req = models.EmbedToQuatRequest(direction="c2h", matrix=payload)
        resp = api.run_embed(req)
        out_file = models.QuatMatrixFile(**resp.matrix.model_dump())
    write_output(dump_model(out_file), args.out)
    return 0


def cmd_tomography(args) -> int:
    if args.values:
        recorded = load_file(args.values, models.FrameValuesFile)
        req = models.TomographyRequest(
            dim=recorded.dim, margin=recorded.margin,
            n_validation=recorded.n_validation, values=recorded.values)
    else:
        req = models.TomographyRequest(dim=args.dim, margin=args.margin,
                                       generate_seed=args.seed)
        if args.emit_values:
            state = State.random(args.seed, args.dim)
            values = api.frame_values_for_state(state, args.dim, margin=args.margin)
            write_output(dump_model(values), args.emit_values)
    resp = api.run_tomography(req)
    write_output(dump_model(resp), args.out)
    print(f"tomography: dim {resp.dim}, trace residual {resp.trace_residual:.3e}, "
          f"validation residual {resp.max_validation_residual:.3e}"
          + (f", round trip {resp.round_trip_residual:.3e}"
             if resp.round_trip_residual is not None else ""),
          file=sys.stderr)
    return 0


def cmd_basis(args) -> int:
    write_output(dump_model(api.make_basis(args.dim)), args.out)
    return 0


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatsim",
        description="Quaternionic quantum processes and their complex simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run randomized equivalence campaigns")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--dims", type=parse_dims, default=[1, 2, 3, 4, 5, 6],
                   help="dimension list, e.g. 1..6 or 2,3,5 (default 1..6)")
    p.add_argument("--trials", type=positive_int, default=100,
                   help="trials per campaign (default 100)")
    p.add_argument("--mode", choices=["default", "strict"], default="default",
                   help="Kraus normalization convention")
    p.add_argument("--tol", type=positive_float, default=1e-10,
                   help="max allowed equivalence deviation (default 1e-10)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate",
                       help="compare quaternionic and lifted outcome statistics")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--povm", required=True, help="POVM JSON file")
    p.add_argument("--channel", help="optional channel JSON file")
    p.add_argument("--mode", choices=["default", "strict"], default="default")
    p.add_argument("--out", help="also write the JSON comparison here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("embed", help="convert matrices through the embedding")
    p.add_argument("--input", required=True, help="matrix JSON file")
    p.add_argument("--direction", choices=["h2c", "c2h"], required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("tomography",
                       help="reconstruct a state from frame-function values")
    p.add_argument("--values", help="recorded values JSON file")
    p.add_argument("--dim", type=positive_int,
                   help="dimension (generator mode)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the generated test state (default 0)")
    p.add_argument("--margin", type=positive_float, default=0.1,
                   help="effect shift margin (generator mode, default 0.1)")
    p.add_argument("--emit-values", help="also record the generated oracle "
                                         "values to this file")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_tomography)

    p = sub.add_parser("basis",
                       help="emit the orthonormal self-adjoint basis as JSON")
    p.add_argument("--dim", type=positive_int, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_basis)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    if args.command == "tomography" and not args.values and args.dim is None:
        print("error: tomography needs either --values or --dim", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except QuatsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except pydantic.ValidationError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
