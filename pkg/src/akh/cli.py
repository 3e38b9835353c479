"""Command-line front end.

Subcommands: ``verify`` (identity suites on a model, JSON/markdown report),
``harmonic`` (kernel-dimension tables), ``constants`` (isoperimetric pair),
``grid-converge`` (grades discretization orders across resolutions) and
``solve-d`` (minimum-norm preimage under the differential).

Only the standard library is imported at module level; the numerical modules
load inside the handlers, after ``_threads_setup`` has pinned the BLAS thread
environment, so AKH_THREADS reliably caps parallelism.

Exit codes: 0 success, 1 a run that completed but did not meet its target
(failed entries, unsolvable target, convergence order below the floor),
2 unusable input (unknown model or suite, malformed file, bad flag value).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

# grading floor for measured convergence orders of second-order stencils;
# discretely exact identities pass regardless
ORDER_FLOOR = 1.7

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")


def _threads_setup() -> None:
    cap = os.environ.get("AKH_THREADS")
    if not cap:
        return
    if not cap.isdigit() or int(cap) < 1:
        raise SystemExit(f"akh: AKH_THREADS must be a positive integer, got {cap!r}")
    for var in _THREAD_VARS:
        os.environ.setdefault(var, cap)


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------

def _read_toml(path: str) -> dict:
    from .errors import ModelValidationError
    try:
        import tomllib
    except ModuleNotFoundError:                         # Python < 3.11
        import tomli as tomllib
    if not os.path.exists(path):
        raise ModelValidationError("format", f"no such model file {path!r}")
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ModelValidationError("format", f"TOML parse error in {path}: {e}")


def _load_model(ref: str):
    """Catalog name, or a TOML file: a [grid] table selects the sampled kind."""
    from . import liemodel as lm
    if ref in lm.CATALOG:
        return lm.load_model(ref)
    data = _read_toml(ref)
    if "grid" in data:
        from . import grid as gr
        return gr.build_grid(data)
    return lm.model_from_dict(data)


def _parse_tols(pairs) -> dict:
    from .errors import ArgumentError
    out = {}
    for item in pairs or ():
        ident, sep, value = item.partition("=")
        if not sep or not ident:
            raise ArgumentError(
                f"--tol takes IDENT=VALUE, got {item!r}")
        try:
            out[ident] = float(value)
        except ValueError:
            raise ArgumentError(f"--tol value for {ident!r} is not a number: {value!r}")
    return out


def _parse_int_list(text: str, flag: str) -> list:
    from .errors import ArgumentError
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ArgumentError(f"{flag} takes a comma-separated integer list, got {text!r}")


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        from .report import write_text_atomic
        write_text_atomic(out, text)
    else:
        sys.stdout.write(text)


def _stderr_note(message: str) -> None:
    # timestamps stay on the side channel so artifacts are reproducible
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S")
    print(f"[{stamp}] {message}", file=sys.stderr)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    from . import report as rp
    from . import verification as vf
    model = _load_model(args.model)
    suites = list(args.suite) if args.suite else None
    t0 = time.perf_counter()
    report = vf.verify_model(model, suites=suites,
                             tol_overrides=_parse_tols(args.tol),
                             seed=args.seed)
    text = (rp.report_to_markdown(report) if args.format == "md"
            else rp.report_to_json(report))
    _emit(text, args.out)
    counts = ", ".join(f"{k}={v}" for k, v in sorted(report.counts().items()))
    _stderr_note(f"verify {report.model}: {counts} "
                 f"({time.perf_counter() - t0:.2f}s)")
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# harmonic
# ---------------------------------------------------------------------------

def _lie_harmonic_payload(model) -> dict:
    from . import operators as op
    f = model.frame
    n = model.n
    parts = model.split_differential()
    d = parts["mu"] + parts["del"] + parts["delbar"] + parts["mubar"]
    joint_ops = [parts["del"], parts["delbar"],
                 parts["del"].adjoint(f), parts["delbar"].adjoint(f)]

    blocks = []
    dims = {}
    for p, q in op.all_blocks(n):
        row = {
            "p": p, "q": q,
            "del": op.joint_kernel([parts["del"], parts["del"].adjoint(f)],
                                   f, block=(p, q)).dim,
            "delbar": op.joint_kernel([parts["delbar"],
                                       parts["delbar"].adjoint(f)],
                                      f, block=(p, q)).dim,
            "joint": op.joint_kernel(joint_ops, f, block=(p, q)).dim,
        }
        blocks.append(row)
        dims[(p, q)] = row
    degree_d = [op.harmonic_space(d, f, degree=k).dim for k in range(2 * n + 1)]

    def _sym(key_a, key_b, swap):
        return all(dims[(p, q)][key_a] == dims[swap(p, q)][key_b]
                   for p, q in dims)

    symmetries = {
        "joint-conjugation": _sym("joint", "joint", lambda p, q: (q, p)),
        "joint-star": _sym("joint", "joint", lambda p, q: (n - q, n - p)),
        "del-delbar-conjugation": _sym("del", "delbar", lambda p, q: (q, p)),
    }
    return {"model": model.name, "kind": "lie", "n": n, "blocks": blocks,
            "degree_d": degree_d, "symmetries": symmetries}


def _harmonic_markdown(payload: dict) -> str:
    lines = [f"# harmonic dimensions: {payload['model']}", ""]
    if payload["kind"] == "lie":
        lines += ["| p | q | del | delbar | joint |", "|---|---|---|---|---|"]
        for row in payload["blocks"]:
            lines.append("| %d | %d | %d | %d | %d |" % (
                row["p"], row["q"], row["del"], row["delbar"], row["joint"]))
        lines.append("")
        lines.append("ker(d-laplacian) by degree: "
                     + ", ".join(str(v) for v in payload["degree_d"]))
        for name, holds in sorted(payload["symmetries"].items()):
            lines.append(f"symmetry {name}: {'yes' if holds else 'NO'}")
    else:
        lines.append(f"N = {payload['N']}, band limit {payload['band']}")
        lines.append("joint (d, d*) kernel by degree: "
                     + ", ".join(str(v) for v in payload["degree_joint"]))
    return "\n".join(lines) + "\n"


def _cmd_harmonic(args) -> int:
    from . import grid as gr
    model = _load_model(args.model)
    if isinstance(model, gr.GridModel):
        payload = {"model": model.name, "kind": "grid", "N": model.N,
                   "band": model.N // 4,
                   "degree_joint": list(gr.harmonic_dims(model))}
    else:
        payload = _lie_harmonic_payload(model)
    text = (_harmonic_markdown(payload) if args.format == "md"
            else _json_text(payload))
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def _cmd_constants(args) -> int:
    from . import constants as ct
    ns = _parse_int_list(args.n, "--n")
    rows = [{"n": n, **ct.croke_constants(n)} for n in ns]
    if args.format == "md":
        lines = ["| n | C_tilde_n | C_n |", "|---|---|---|"]
        for row in rows:
            lines.append("| %d | %.12g | %.12g |"
                         % (row["n"], row["C_tilde_n"], row["C_n"]))
        text = "\n".join(lines) + "\n"
    else:
        text = _json_text(rows)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# grid-converge
# ---------------------------------------------------------------------------

def _cmd_grid_converge(args) -> int:
    from . import grid as gr
    recipe = None
    if args.model:
        recipe = _read_toml(args.model)
    idents = list(args.suite) if args.suite else sorted(gr.IDENTITIES)
    resolutions = _parse_int_list(args.resolutions, "--resolutions")
    t0 = time.perf_counter()
    summaries = gr.convergence_suite(idents, resolutions, recipe)
    for summary in summaries:
        order = summary["order"]
        summary["ok"] = (order == "exact"
                         or (isinstance(order, float) and order >= ORDER_FLOOR))
    payload = {"resolutions": resolutions,
               "identities": summaries,
               "ok": all(s["ok"] for s in summaries)}
    if args.format == "md":
        lines = ["| identity | " + " | ".join(f"N={N}" for N in resolutions)
                 + " | order | ok |",
                 "|---|" + "---|" * (len(resolutions) + 2)]
        for s in summaries:
            res = " | ".join("%.4e" % r for r in s["residuals"])
            order = s["order"] if isinstance(s["order"], str) else "%.3f" % s["order"]
            lines.append(f"| {s['identity']} | {res} | {order} | "
                         f"{'yes' if s['ok'] else 'NO'} |")
        text = "\n".join(lines) + "\n"
    else:
        text = _json_text(payload)
    _emit(text, args.out)
    _stderr_note(f"grid-converge: {len(summaries)} identities over "
                 f"{resolutions} ({time.perf_counter() - t0:.2f}s)")
    return 0 if payload["ok"] else 1


# ---------------------------------------------------------------------------
# solve-d
# ---------------------------------------------------------------------------

def _coefficient(raw):
    from .errors import ArgumentError
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(raw)
    if (isinstance(raw, list) and len(raw) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in raw)):
        return complex(raw[0], raw[1])
    raise ArgumentError(
        f"coefficients must be numbers or [re, im] pairs, got {raw!r}")


def _cmd_solve_d(args) -> int:
    import numpy as np

    from . import grid as gr
    from . import operators as op
    from .errors import ArgumentError
    model = _load_model(args.model)
    if isinstance(model, gr.GridModel):
        raise ArgumentError("solve-d works on the finite-dimensional models, "
                            "not sampled grids")
    try:
        with open(args.target) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ArgumentError(f"no such target file {args.target!r}")
    except json.JSONDecodeError as e:
        raise ArgumentError(f"target is not valid JSON: {e}")
    if not isinstance(data, dict) or set(data) != {"degree", "coefficients"}:
        raise ArgumentError(
            'target must be {"degree": k, "coefficients": [...]}')
    k = data["degree"]
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= 2 * model.n:
        raise ArgumentError(f"degree must be an integer in 1..{2 * model.n}")
    coeffs = [_coefficient(c) for c in data["coefficients"]]
    want = math.comb(2 * model.n, k)
    if len(coeffs) != want:
        raise ArgumentError(
            f"degree {k} needs {want} real-coframe coefficients, "
            f"got {len(coeffs)}")

    target = model.to_form(k, np.array(coeffs))
    parts = model.split_differential()
    d = parts["mu"] + parts["del"] + parts["delbar"] + parts["mubar"]
    beta, defect = op.solve_in_image(d, target, model.frame, tol=args.tol)
    flat = model.from_form(beta).get(k - 1)
    if flat is None:
        flat = np.zeros(math.comb(2 * model.n, k - 1), dtype=complex)
    payload = {"model": model.name, "degree": k - 1,
               "coefficients": [[float(c.real), float(c.imag)] for c in flat],
               "defect": float(defect)}
    _emit(_json_text(payload), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akh",
        description="identity verification and harmonic tables for bigraded "
                    "models on almost Kahler structures")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_required=True):
        if model_required:
            p.add_argument("--model", required=True,
                           help="catalog name or TOML model/recipe file")
        p.add_argument("--out", help="write output here (atomic replace); "
                                     "default stdout")
        p.add_argument("--format", choices=("json", "md"), default="json")

    p = sub.add_parser("verify", help="run identity suites on a model")
    common(p)
    p.add_argument("--suite", action="append",
                   help="suite name (repeatable); default: all applicable")
    p.add_argument("--tol", action="append", metavar="IDENT=VALUE",
                   help="per-identity tolerance override (repeatable)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for sampled checks (default 0)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("harmonic", help="kernel-dimension tables")
    common(p)
    p.set_defaults(func=_cmd_harmonic)

    p = sub.add_parser("constants", help="isoperimetric constant pair")
    common(p, model_required=False)
    p.add_argument("--n", default="2,3,4,5,6",
                   help="comma list of complex dimensions (default 2..6)")
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("grid-converge",
                       help="grade identity residual decay across resolutions")
    p.add_argument("--model", help="grid recipe TOML; default built-in recipe")
    p.add_argument("--suite", action="append",
                   help="identity id (repeatable); default: all")
    p.add_argument("--resolutions", default="8,16,32",
                   help="comma list, at least 3, strictly increasing")
    p.add_argument("--out", help="write output here; default stdout")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.set_defaults(func=_cmd_grid_converge)

    p = sub.add_parser("solve-d", help="minimum-norm beta with d beta = target")
    common(p)
    p.add_argument("target", help='JSON file {"degree": k, "coefficients": '
                                  '[...]} over the real coframe')
    p.add_argument("--tol", type=float, default=1e-8,
                   help="relative defect above which the target is declared "
                        "unsolvable (default 1e-8)")
    p.set_defaults(func=_cmd_solve_d)
    return parser


def main(argv=None) -> int:
    _threads_setup()
    args = _build_parser().parse_args(argv)
    from .errors import AkhError, ConsistencyError, SolvabilityError
    try:
        return args.func(args)
    except (SolvabilityError, ConsistencyError) as e:
        print(f"akh: {e}", file=sys.stderr)
        return 1
    except AkhError as e:
        print(f"akh: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
