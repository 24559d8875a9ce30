"""Command-line interface.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 internal identity
failure or CPTP violation along a trajectory, 5 I/O error.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .channels import (
    KrausChannel,
    affine_from_kraus,
    is_coherence_breaking,
    is_incoherent_kraus,
    is_unital,
    singular_values_of_T,
)
from .measures import ConsistencyError, decomposition_check, qi_rec
from .physics import (
    CPTPViolation,
    PhaseCovariantParams,
    ad_channel,
    ad_coherence_closed_form,
    phase_covariant_trajectory,
)
from .qmat import DEFAULT_TOL, ValidationError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4
EXIT_IO = 5


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


# --------------------------------------------------------------------------
# channel documents
# --------------------------------------------------------------------------

def parse_channel_document(text: str):
    """Decode a channel JSON document into ``(operators, name, tol)``.

    Schema: ``{"dim": d, "kraus": [K_1, ...], "name": str?, "tol": float?}``
    where each ``K_i`` is a ``d x d`` nested list of ``[re, im]`` pairs.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, "channel document must be a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise CliError(EXIT_PARSE, "'dim' must be a positive integer")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise CliError(EXIT_PARSE, "'kraus' must be a non-empty list of matrices")
    try:
        arr = np.array(kraus, dtype=np.float64)
    except (TypeError, ValueError):
        raise CliError(EXIT_PARSE, "'kraus' entries must be numeric [re, im] pairs") from None
    if arr.shape != (len(kraus), dim, dim, 2):
        raise CliError(
            EXIT_PARSE, f"'kraus' must have shape (n, {dim}, {dim}, 2), got {arr.shape}"
        )
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise CliError(EXIT_PARSE, "'name' must be a string")
    tol = doc.get("tol")
    if tol is not None and (not isinstance(tol, (int, float)) or tol <= 0):
        raise CliError(EXIT_PARSE, "'tol' must be a positive number")
    return arr[..., 0] + 1j * arr[..., 1], name, tol


def channel_document(ch: KrausChannel, name: str = "") -> dict:
    ops = ch.operators
    doc = {
        "dim": ch.dim,
        "kraus": np.stack([ops.real, ops.imag], axis=-1).tolist(),
    }
    if name or ch.name:
        doc["name"] = name or ch.name
    return doc


def load_channel(path, tol=None) -> KrausChannel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    ops, name, file_tol = parse_channel_document(text)
    use_tol = tol if tol is not None else (file_tol if file_tol is not None else DEFAULT_TOL)
    try:
        return KrausChannel(ops, tol=use_tol, name=name)
    except ValidationError as exc:
        raise CliError(EXIT_VALIDATION, str(exc)) from None


def _dump(obj, stream):
    stream.write(json.dumps(obj, indent=2, sort_keys=False))
    stream.write("\n")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_report(args, out):
    ch = load_channel(args.file, args.tol)
    try:
        report = decomposition_check(ch)
    except ConsistencyError as exc:
        raise CliError(EXIT_INTERNAL, str(exc)) from None
    payload = {"name": ch.name, **report.as_dict()}
    _dump(payload, out)


def classify(ch: KrausChannel) -> dict:
    info = {
        "cptp": True,
        "unital": is_unital(ch),
        "incoherent_kraus": is_incoherent_kraus(ch),
        "coherence_breaking": is_coherence_breaking(ch),
    }
    if ch.dim == 2:
        q = affine_from_kraus(ch)
        info["tau"] = q.tau.tolist()
        info["T"] = q.T.tolist()
        info["singular_values"] = singular_values_of_T(q).tolist()
    return info


def cmd_classify(args, out):
    ch = load_channel(args.file, args.tol)
    _dump({"name": ch.name, **classify(ch)}, out)


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def ad_sweep_rows(steps):
    rows = []
    for p in np.linspace(0.0, 1.0, steps):
        numeric = qi_rec(ad_channel(float(p)))
        closed = ad_coherence_closed_form(float(p))
        rows.append([fmt(p), fmt(numeric), fmt(closed), fmt(abs(numeric - closed))])
    return rows


def cmd_ad_sweep(args, out):
    if args.steps < 2:
        raise CliError(EXIT_VALIDATION, "--steps must be >= 2")
    _write_csv(args.out, ["p", "qi_rec", "closed_form", "abs_diff"], ad_sweep_rows(args.steps))
    out.write(f"wrote {args.steps} rows to {args.out}\n")


PHASE_COV_COLUMNS = ["lambda_t", "Gamma", "Gamma_z", "kappa", "eta_par", "eta_perp", "coherence"]


def cmd_phase_cov(args, out):
    if args.steps < 1:
        raise CliError(EXIT_VALIDATION, "--steps must be >= 1")
    if args.tmax < 0:
        raise CliError(EXIT_VALIDATION, "--tmax must be >= 0")
    try:
        params = PhaseCovariantParams.on_uniform_grid(
            args.R, args.s, args.alpha, args.beta, args.tmax, args.steps
        )
        traj = phase_covariant_trajectory(params)
    except CPTPViolation as exc:
        raise CliError(EXIT_INTERNAL, str(exc)) from None
    except ConsistencyError as exc:
        raise CliError(EXIT_INTERNAL, str(exc)) from None
    except ValidationError as exc:
        raise CliError(EXIT_VALIDATION, str(exc)) from None
    rows = [[fmt(getattr(f, "t"))] + [fmt(getattr(f, c)) for c in PHASE_COV_COLUMNS[1:]]
            for f in traj.frames]
    _write_csv(args.out, PHASE_COV_COLUMNS, rows)
    times = traj.times
    spans = ", ".join(f"[{fmt(times[i])}, {fmt(times[j])}]" for i, j in traj.rising)
    out.write(f"rising intervals: {len(traj.rising)}\n")
    if traj.rising:
        out.write(f"rising at lambda_t: {spans}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qicoherence",
        description="Coherence measures of quantum channels via Choi states.",
    )
    parser.add_argument("--tol", type=float, default=None,
                        help="validation tolerance for channel files (default 1e-10)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="all coherence/discord measures of a channel file")
    p.add_argument("file")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("classify", help="classification flags of a channel file")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ad-sweep", help="amplitude-damping coherence versus p, as CSV")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ad_sweep)

    p = sub.add_parser("phase-cov", help="phase-covariant coherence trajectory, as CSV")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=400)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_phase_cov)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        args.func(args, stdout)
    except CliError as exc:
        stderr.write(f"error: {exc}\n")
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
