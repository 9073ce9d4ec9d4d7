"""Command-line front end.

Results go to stdout as one JSON object with sorted keys; diagnostics and
warnings go to stderr.  Exit codes: 0 success, 1 verification failure,
2 unparsable input, 3 precondition or size-budget violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings

import numpy as np

from . import cv, entanglement, magic, swap
from .errors import BudgetError, StateFileError
from .io import load_state
from .states import DensityMatrix, DimSpec, Partition, StateVector, random_state

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3

VERIFY_TOL = {
    "swap": 1e-10,
    "transpose": 1e-10,
    "normalization": 1e-9,
    "cross_fidelity": 1e-9,
}
NORMALIZATION_WARN = 1e-3


class UsageError(ValueError):
    """Bad flag value; reported with exit code 3."""


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def emit(record: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(_jsonable(record), sort_keys=True, indent=2) + "\n")


def _scale(args, value: float) -> float:
    return value / math.log(2) if args.log2 else value


def _partition(text: str) -> Partition:
    try:
        return Partition(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}: expected comma-separated qudit indices") from exc


def _dims(text: str) -> DimSpec:
    try:
        return DimSpec(tuple(int(t) for t in text.split(",") if t.strip()))
    except ValueError as exc:
        raise UsageError(f"bad dims {text!r}: {exc}") from exc


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"bad complex number {text!r}") from exc


def _pure_state(path) -> StateVector:
    obj = load_state(path)
    if not isinstance(obj, StateVector):
        raise UsageError("this command needs a pure state (an 'amplitudes' file)")
    obj.require_normalized()
    return obj


def cmd_magic(args) -> dict:
    state = _pure_state(args.state)
    alpha = args.alpha
    if alpha <= 0:
        raise UsageError(f"--alpha must be positive, got {alpha}")
    values = {}
    params = {"alpha": alpha, "state": args.state}
    if args.samples is not None:
        if alpha != 2:
            raise UsageError("Monte-Carlo estimation is only available for --alpha 2")
        est, err = magic.purity_estimator(state, args.samples, args.seed)
        values["purity_estimate"] = est
        values["purity_stderr"] = err
        lnD = math.log(state.dims.total_dim)
        values["M2_estimate"] = _scale(args, -math.log(est) - lnD) if est > 0 else None
        params.update(samples=args.samples, seed=args.seed)
    else:
        values["M"] = _scale(args, magic.stabilizer_renyi(state, alpha))
    return {"command": "magic", "values": values, "params": params}


def cmd_renyi2(args) -> dict:
    state = _pure_state(args.state)
    part = _partition(args.partition)
    s_disp = entanglement.renyi2_displacement(state, part)
    s_oracle = entanglement.renyi2_oracle(state, part)
    values = {
        "S2_displacement": _scale(args, s_disp),
        "S2_oracle": _scale(args, s_oracle),
        "difference": _scale(args, abs(s_disp - s_oracle)),
    }
    return {"command": "renyi2", "values": values,
            "params": {"partition": sorted(part.subsystem), "state": args.state}}


def cmd_negativity(args) -> dict:
    obj = load_state(args.state)
    rho = obj.density() if isinstance(obj, StateVector) else obj
    part = _partition(args.partition)
    neg, log_neg = swap.negativity(rho, part)
    pt = swap.partial_transpose(rho, part).entries
    oracle = swap.partial_transpose_direct(rho, part).entries
    return {
        "command": "negativity",
        "values": {"negativity": neg, "log_negativity": _scale(args, log_neg)},
        "diagnostics": {"pt_oracle_deviation": float(np.max(np.abs(pt - oracle)))},
        "params": {"partition": sorted(part.subsystem), "state": args.state},
    }


def _cv_state(spec: str, cutoff: int) -> tuple[StateVector, dict]:
    mode = cv.FockMode(cutoff)
    diag = {}
    if spec == "vacuum":
        return cv.vacuum(mode), diag
    if spec.startswith("coherent:"):
        w = _complex_arg(spec.split(":", 1)[1])
        diag["truncation_deficit"] = cv.truncation_deficit(mode, w)
        return cv.coherent_state(mode, w), diag
    if spec.startswith("fock:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad Fock label {spec!r}") from exc
        return cv.fock_state(mode, n), diag
    state = _pure_state(spec)
    if len(set(state.dims.dims)) != 1:
        raise UsageError(f"CV state files need one shared cutoff, got dims {list(state.dims.dims)}")
    return state, diag


def _cv_grid(args) -> cv.QuadratureGrid:
    try:
        return cv.QuadratureGrid(args.radius, args.spacing)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_cv(args) -> dict:
    params = {"cutoff": args.cutoff, "radius": args.radius, "spacing": args.spacing,
              "subcommand": args.sub, "state": args.state}
    if args.sub == "swapcheck":
        return _cv_swapcheck(args, params)
    if args.state is None:
        raise UsageError(f"cv {args.sub} needs a state (vacuum, coherent:RE+IMi, fock:n or a file)")
    state, diag = _cv_state(args.state, args.cutoff)
    if args.sub == "weyl":
        if args.csv:
            return _cv_weyl_csv(args, state, diag, params)
        zs = [_complex_arg(z) for z in (args.z or ["0"] * state.dims.n)]
        W = cv.weyl_function(state, zs)
        params["z"] = [[z.real, z.imag] for z in zs]
        values = {"W": W, "p": abs(W) ** 2 / math.pi ** state.dims.n}
        return {"command": "cv weyl", "values": values, "diagnostics": diag, "params": params}
    grid = _cv_grid(args)
    entropy, norm = cv.weyl_entropy(state, grid)
    diag["normalization_check"] = norm
    if abs(norm - 1) > NORMALIZATION_WARN:
        msg = f"quadrature normalization {norm:.6f} is far from 1; enlarge --radius or refine --spacing"
        diag["warnings"] = [msg]
        print(f"warning: {msg}", file=sys.stderr)
    return {"command": "cv entropy", "values": {"S_weyl": _scale(args, entropy)},
            "diagnostics": diag, "params": params}


def _cv_weyl_csv(args, state, diag, params) -> dict:
    if state.dims.n != 1:
        raise UsageError("grid CSV output is single-mode only")
    grid = _cv_grid(args)
    W = cv.weyl_on_grid(state, grid)
    p = np.abs(W) ** 2 / math.pi
    target = sys.stdout if args.csv == "-" else open(args.csv, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(target)
        writer.writerow(["re_z", "im_z", "re_W", "im_W", "p"])
        for z, w, pz in zip(grid.nodes, W, p):
            writer.writerow([repr(float(z.real)), repr(float(z.imag)),
                             repr(float(w.real)), repr(float(w.imag)), repr(float(pz))])
    finally:
        if target is not sys.stdout:
            target.close()
    params["csv"] = args.csv
    return {"command": "cv weyl", "values": {"nodes": len(grid)}, "diagnostics": diag,
            "params": params}


# fixed probe points with |u|, |w| <= 1 for the coherent matrix-element check
_SWAP_PROBES = [
    (0.0, 0.0, 0.0, 0.0),
    (0.5, -0.3j, 0.2 + 0.4j, 0.7),
    (1.0, 1j, -1.0, -1j),
    (0.6 + 0.6j, -0.5 + 0.2j, 0.1 - 0.9j, 0.3 + 0.3j),
]


def _cv_swapcheck(args, params) -> dict:
    mode = cv.FockMode(args.cutoff)
    grid = _cv_grid(args)
    fine = cv.QuadratureGrid(args.radius, args.spacing / 2)
    S = cv.cv_swap_quadrature(mode, grid)
    err = cv.swap_block_error(S, mode)
    err_fine = cv.swap_block_error(cv.cv_swap_quadrature(mode, fine), mode)
    coh = max(
        abs(cv.coherent_matrix_element(S, mode, u1, u2, w1, w2)
            - cv.coherent_overlap(u1, w2) * cv.coherent_overlap(u2, w1))
        for u1, u2, w1, w2 in _SWAP_PROBES
    )
    values = {
        "block_error": err,
        "block_error_half_spacing": err_fine,
        "relative_change": abs(err - err_fine) / err if err > 0 else 0.0,
        "coherent_element_deviation": coh,
    }
    return {"command": "cv swapcheck", "values": values,
            "params": {**params, "block": args.cutoff // 2}}


def cmd_verify(args) -> dict:
    dims = _dims(args.dims)
    if dims.total_dim > swap.SWAP_MAX_DIM:
        raise BudgetError(
            f"register dimension {dims.total_dim} exceeds the dense budget {swap.SWAP_MAX_DIM}")
    rng = np.random.default_rng(args.seed)
    D = dims.total_dim
    dev = {}
    dev["swap"] = float(np.max(np.abs(swap.swap_by_displacements(dims) - swap.exact_swap(dims))))
    M = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
    tr = swap.transpose_by_displacements(DensityMatrix(dims, M)).entries
    dev["transpose"] = float(np.max(np.abs(tr - M.T)))
    psi = random_state(dims, args.seed)
    phi = random_state(dims, args.seed + 1)
    dev["normalization"] = abs(magic.displacement_distribution(psi).total() - 1)
    cross = magic.cross_fidelity(psi, phi)
    dev["cross_fidelity"] = abs(cross - abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)
    passed = {k: v < VERIFY_TOL[k] for k, v in dev.items()}
    return {"command": "verify", "values": {"deviations": dev, "passed": passed},
            "params": {"dims": list(dims.dims), "seed": args.seed, "tolerances": VERIFY_TOL},
            "_exit": EXIT_OK if all(passed.values()) else EXIT_VERIFY}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log2", action="store_true", help="report entropies in bits")

    p = argparse.ArgumentParser(prog="weylswap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("magic", parents=[common], help="stabilizer Renyi entropy")
    m.add_argument("state")
    m.add_argument("--alpha", type=float, default=2.0)
    m.add_argument("--samples", type=int)
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_magic)

    r = sub.add_parser("renyi2", parents=[common], help="second Renyi entanglement entropy")
    r.add_argument("state")
    r.add_argument("--partition", default="0", help="qudits in subsystem A, e.g. 0,2")
    r.set_defaults(func=cmd_renyi2)

    n = sub.add_parser("negativity", parents=[common], help="negativity across a partition")
    n.add_argument("state")
    n.add_argument("--partition", default="0", help="qudits that are transposed")
    n.set_defaults(func=cmd_negativity)

    c = sub.add_parser("cv", parents=[common], help="continuous-variable Weyl tools")
    c.add_argument("sub", choices=["weyl", "entropy", "swapcheck"])
    c.add_argument("state", nargs="?", help="vacuum, coherent:RE+IMi, fock:n or a state file")
    c.add_argument("--cutoff", type=int, default=40)
    c.add_argument("--radius", type=float, default=6.0)
    c.add_argument("--spacing", type=float, default=0.1)
    c.add_argument("--z", action="append", help="displacement per mode (weyl); repeat per mode")
    c.add_argument("--csv", help="write the Weyl function on the grid to this CSV ('-' = stdout)")
    c.set_defaults(func=cmd_cv)

    v = sub.add_parser("verify", help="check the displacement identities numerically")
    v.add_argument("--dims", default="2")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify, log2=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse usage errors already use exit status 2
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            record = args.func(args)
        if caught:
            notes = [str(w.message) for w in caught]
            record.setdefault("diagnostics", {}).setdefault("warnings", []).extend(notes)
            for note in notes:
                print(f"warning: {note}", file=sys.stderr)
    except StateFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    code = record.pop("_exit", EXIT_OK)
    if not (args.command == "cv" and args.sub == "weyl" and args.csv == "-"):
        emit(record)
    return code


if __name__ == "__main__":
    sys.exit(main())
