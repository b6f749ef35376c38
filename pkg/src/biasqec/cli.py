"""Command-line entry point.

Subcommands:
  build     construct a code, print [[N,K,D]], write a bundle directory
  params    print code parameters and check weights
  distance  compute distance bounds for a code
  hashing   tabulate the hashing-bound probability over a bias grid
  simulate  run the sweep described by a JSON config file (resumable)
  sweep     run a bias sweep from flags alone

Exit codes: 0 success, 2 config or input error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .codes import (
    bias_tailored_lifted_product,
    hypergraph_product,
    lifted_product,
    quantum_distance,
    twisted_toric_css,
    xzzx_twisted_toric,
)
from .decoder import DecoderConfig
from .errors import (
    BiasQecError,
    DimensionError,
    DomainError,
    LiftSizeError,
    NoSolutionError,
    ParseError,
)
from .formats import read_alist, read_bundle, read_protograph, resolve_input_path, write_bundle
from .montecarlo import (
    CSV_COLUMNS,
    digest_of_configs,
    experiment_config,
    format_csv_rows,
    read_csv,
    result_row,
    run_experiment,
)
from .noise import BiasSpec, hashing_probability

_CONFIG_ERRORS = (ParseError, DomainError, DimensionError, LiftSizeError)

_TOP_KEYS = {
    "code",
    "axis",
    "eta_grid",
    "p_grid",
    "decoder",
    "trials",
    "seed",
    "update",
    "reverse",
    "min_failures",
    "chunk_size",
    "output",
}
_DECODER_KEYS = {"max_iterations", "osd_order", "llr_clip", "schedule"}
_CODE_KEYS = {"construction", "n1", "n2", "a1", "a2", "h1", "h2", "path", "name"}


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise DomainError(f"unknown {where} keys: {', '.join(unknown)}")


def build_code(recipe: dict):
    """Construct a code from a recipe mapping (also the config file shape)."""
    if not isinstance(recipe, dict):
        raise DomainError("code recipe must be a mapping")
    _reject_unknown(recipe, _CODE_KEYS, "code recipe")
    kind = recipe.get("construction")
    name = recipe.get("name", "")

    def lattice() -> tuple[int, int]:
        if "n1" not in recipe or "n2" not in recipe:
            raise DomainError(f"{kind} needs n1 and n2")
        return int(recipe["n1"]), int(recipe["n2"])

    if kind == "xzzx_twisted_toric":
        return xzzx_twisted_toric(*lattice())
    if kind == "twisted_toric_css":
        return twisted_toric_css(*lattice())
    if kind == "lifted_product" or kind == "bias_tailored_lifted_product":
        if "a1" not in recipe or "a2" not in recipe:
            raise DomainError(f"{kind} needs protograph files a1 and a2")
        a1 = read_protograph(resolve_input_path(recipe["a1"]))
        a2 = read_protograph(resolve_input_path(recipe["a2"]))
        fn = lifted_product if kind == "lifted_product" else bias_tailored_lifted_product
        return fn(a1, a2, name=name)
    if kind == "hypergraph_product":
        if "h1" not in recipe or "h2" not in recipe:
            raise DomainError("hypergraph_product needs alist files h1 and h2")
        h1 = read_alist(resolve_input_path(recipe["h1"]))
        h2 = read_alist(resolve_input_path(recipe["h2"]))
        return hypergraph_product(h1, h2, name=name)
    if kind == "bundle":
        if "path" not in recipe:
            raise DomainError("bundle recipe needs a path")
        return read_bundle(recipe["path"])
    raise DomainError(f"unknown construction: {kind!r}")


def _recipe_from_flags(args) -> dict:
    picks = [
        ("xzzx_toric", "xzzx_twisted_toric", ("n1", "n2")),
        ("toric_css", "twisted_toric_css", ("n1", "n2")),
        ("lifted_product", "lifted_product", ("a1", "a2")),
        ("bias_tailored", "bias_tailored_lifted_product", ("a1", "a2")),
        ("hgp", "hypergraph_product", ("h1", "h2")),
        ("bundle", "bundle", ("path",)),
    ]
    chosen = [(flag, kind, keys) for flag, kind, keys in picks if getattr(args, flag)]
    if len(chosen) != 1:
        raise DomainError("pick exactly one code construction flag")
    flag, kind, keys = chosen[0]
    values = getattr(args, flag)
    if len(keys) == 1:
        values = [values]
    return {"construction": kind, **dict(zip(keys, values))}


def _add_code_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("code construction")
    group.add_argument("--xzzx-toric", dest="xzzx_toric", nargs=2, metavar=("N1", "N2"))
    group.add_argument("--toric-css", dest="toric_css", nargs=2, metavar=("N1", "N2"))
    group.add_argument(
        "--lifted-product", dest="lifted_product", nargs=2, metavar=("A1", "A2")
    )
    group.add_argument(
        "--bias-tailored", dest="bias_tailored", nargs=2, metavar=("A1", "A2")
    )
    group.add_argument("--hgp", dest="hgp", nargs=2, metavar=("H1", "H2"))
    group.add_argument("--bundle", dest="bundle", metavar="DIR")


def _parse_eta(token) -> float:
    if isinstance(token, str) and token.strip().lower() in ("inf", "infinity"):
        return math.inf
    eta = float(token)
    if math.isnan(eta) or eta <= 0.0:
        raise DomainError(f"eta must be positive or inf, got {token!r}")
    return eta


def _eta_list(text: str) -> list[float]:
    return [_parse_eta(tok) for tok in text.split(",") if tok.strip()]


def cmd_build(args) -> int:
    code = build_code(_recipe_from_flags(args))
    report = quantum_distance(code)
    d = str(report.d.value) if report.d.exact else "·"
    print(f"[[{code.n},{code.k},{d}]]")
    out = Path(args.out) if args.out else Path(f"{code.name or 'code'}.bundle")
    write_bundle(code, out)
    print(f"bundle written to {out}")
    return 0


def cmd_params(args) -> int:
    code = build_code(_recipe_from_flags(args))
    rotated = sorted(getattr(code, "rotated", frozenset()))
    print(f"name: {code.name}")
    print(f"n: {code.n}")
    print(f"k: {code.k}")
    print(f"sector1_size: {code.sector1_size}")
    print(f"rotated_qubits: {len(rotated)}")
    print(f"hx: {code.hx.rows}x{code.hx.cols} max_row_weight {code.hx.max_row_weight()}")
    print(f"hz: {code.hz.rows}x{code.hz.cols} max_row_weight {code.hz.max_row_weight()}")
    return 0


def cmd_distance(args) -> int:
    code = build_code(_recipe_from_flags(args))
    report = quantum_distance(code, wmax=args.wmax, kernel_budget=args.budget)
    for label, side in (("D", report.d), ("dX", report.dx), ("dZ", report.dz)):
        if side.exact:
            print(f"{label}: {side.value} (exact, {side.method})")
        else:
            print(f"{label}: in [{side.lower}, {side.upper}] ({side.method})")
    return 0


def cmd_hashing(args) -> int:
    etas = _eta_list(args.etas)
    if not etas:
        raise DomainError("eta grid is empty")
    lines = ["eta,p_H"]
    for eta in etas:
        spec = BiasSpec(axis=args.axis, eta=eta)
        try:
            cell = repr(hashing_probability(args.rate, spec))
        except NoSolutionError:
            cell = ""
        lines.append(f"{repr(eta)},{cell}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def load_config(path: str | Path) -> dict:
    """Parse and validate a simulation config; raises before any trial runs."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise DomainError(f"config file not found: {path}") from None
    except json.JSONDecodeError as err:
        raise ParseError(f"config is not valid JSON: {err}", line=err.lineno) from None
    if not isinstance(raw, dict):
        raise DomainError("config must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "config")
    for key in ("code", "axis", "eta_grid", "p_grid", "trials", "seed", "output"):
        if key not in raw:
            raise DomainError(f"config is missing required key: {key}")
    decoder_raw = raw.get("decoder", {})
    if not isinstance(decoder_raw, dict):
        raise DomainError("decoder section must be a mapping")
    _reject_unknown(decoder_raw, _DECODER_KEYS, "decoder")

    cfg = {
        "code": raw["code"],
        "axis": raw["axis"],
        "eta_grid": [_parse_eta(v) for v in raw["eta_grid"]],
        "p_grid": [float(v) for v in raw["p_grid"]],
        "decoder": DecoderConfig(**decoder_raw),
        "trials": int(raw["trials"]),
        "seed": int(raw["seed"]),
        "update": bool(raw.get("update", False)),
        "reverse": bool(raw.get("reverse", False)),
        "min_failures": (
            int(raw["min_failures"]) if raw.get("min_failures") is not None else None
        ),
        "chunk_size": int(raw.get("chunk_size", 1024)),
        "output": str(raw["output"]),
    }
    if cfg["axis"] not in ("X", "Y", "Z"):
        raise DomainError(f"axis must be X, Y, or Z, got {cfg['axis']!r}")
    if not cfg["eta_grid"] or not cfg["p_grid"]:
        raise DomainError("eta_grid and p_grid must be non-empty")
    if cfg["trials"] < 1:
        raise DomainError(f"trials must be >= 1, got {cfg['trials']}")
    if cfg["seed"] < 0:
        raise DomainError(f"seed must be non-negative, got {cfg['seed']}")
    for p in cfg["p_grid"]:
        if not 0.0 <= p < 1.0:
            raise DomainError(f"p must lie in [0, 1), got {p}")
    return cfg


def _run_points(cfg: dict, code, workers: int, resume: bool, out_path: Path) -> int:
    points = [
        (stream, eta, p)
        for stream, (p, eta) in enumerate(
            (p, eta) for p in cfg["p_grid"] for eta in cfg["eta_grid"]
        )
    ]
    shared = dict(
        reverse=cfg["reverse"],
        min_failures=cfg["min_failures"],
        chunk_size=cfg["chunk_size"],
    )
    configs = [
        experiment_config(
            code,
            BiasSpec(axis=cfg["axis"], eta=eta, p=p),
            cfg["decoder"],
            cfg["update"],
            cfg["trials"],
            cfg["seed"],
            stream=stream,
            min_failures=cfg["min_failures"],
            reverse=cfg["reverse"],
            chunk_size=cfg["chunk_size"],
        )
        for stream, eta, p in points
    ]
    digest = digest_of_configs(configs)

    rows: list[str] = []
    if resume and out_path.is_file():
        try:
            meta, _ = read_csv(out_path)
        except Exception:
            meta = {}
        if meta.get("config_sha256") == digest:
            done = [
                ln
                for ln in out_path.read_text().splitlines()
                if ln and not ln.startswith("#") and ln != ",".join(CSV_COLUMNS)
            ]
            rows = done[: len(points)]
            if rows:
                print(f"resuming: {len(rows)} of {len(points)} points already done")

    for stream, eta, p in points[len(rows) :]:
        result = run_experiment(
            code,
            BiasSpec(axis=cfg["axis"], eta=eta, p=p),
            cfg["decoder"],
            cfg["update"],
            cfg["trials"],
            cfg["seed"],
            stream=stream,
            workers=workers,
            **shared,
        )
        rows.append(result_row(result))
        out_path.write_text(format_csv_rows(rows, digest))
        print(f"point {stream + 1}/{len(points)}: eta={eta:g} p={p:g} done")

    out_path.write_text(format_csv_rows(rows, digest))
    print(f"results written to {out_path}")
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    code = build_code(cfg["code"])
    return _run_points(
        cfg, code, workers=args.threads, resume=not args.no_resume,
        out_path=Path(cfg["output"]),
    )


def cmd_sweep(args) -> int:
    cfg = {
        "code": _recipe_from_flags(args),
        "axis": args.axis,
        "eta_grid": _eta_list(args.etas),
        "p_grid": [float(tok) for tok in args.p.split(",") if tok.strip()],
        "decoder": DecoderConfig(
            max_iterations=args.max_iterations,
            osd_order=args.osd_order,
            llr_clip=args.llr_clip,
        ),
        "trials": args.trials,
        "seed": args.seed,
        "update": args.update,
        "reverse": False,
        "min_failures": args.min_failures,
        "chunk_size": args.chunk_size,
        "output": args.out,
    }
    if not cfg["eta_grid"] or not cfg["p_grid"]:
        raise DomainError("eta and p grids must be non-empty")
    if cfg["trials"] < 1:
        raise DomainError(f"trials must be >= 1, got {cfg['trials']}")
    code = build_code(cfg["code"])
    return _run_points(
        cfg, code, workers=args.threads, resume=not args.no_resume,
        out_path=Path(args.out),
    )


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biasqec",
        description="Bias-tailored lifted-product codes: construction and simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a code and write its bundle")
    _add_code_flags(p_build)
    p_build.add_argument("--out", help="bundle directory (default <name>.bundle)")
    p_build.set_defaults(fn=cmd_build)

    p_params = sub.add_parser("params", help="print code parameters")
    _add_code_flags(p_params)
    p_params.set_defaults(fn=cmd_params)

    p_dist = sub.add_parser("distance", help="compute distance bounds")
    _add_code_flags(p_dist)
    p_dist.add_argument("--wmax", type=int, default=6)
    p_dist.add_argument("--budget", type=int, default=2**22)
    p_dist.set_defaults(fn=cmd_distance)

    p_hash = sub.add_parser("hashing", help="hashing-bound probabilities over a bias grid")
    p_hash.add_argument("--rate", type=float, default=0.0)
    p_hash.add_argument("--axis", default="X", choices=("X", "Y", "Z"))
    p_hash.add_argument("--etas", required=True, help="comma-separated, inf allowed")
    p_hash.add_argument("--out", help="write CSV here instead of stdout")
    p_hash.set_defaults(fn=cmd_hashing)

    p_sim = sub.add_parser("simulate", help="run the sweep in a JSON config file")
    p_sim.add_argument("config")
    p_sim.add_argument("--threads", type=int, default=1)
    p_sim.add_argument("--no-resume", action="store_true")
    p_sim.set_defaults(fn=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a bias sweep from flags")
    _add_code_flags(p_sweep)
    p_sweep.add_argument("--axis", default="X", choices=("X", "Y", "Z"))
    p_sweep.add_argument("--etas", required=True)
    p_sweep.add_argument("--p", required=True, help="comma-separated total error rates")
    p_sweep.add_argument("--trials", type=int, required=True)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--update", action="store_true")
    p_sweep.add_argument("--max-iterations", type=int, default=None)
    p_sweep.add_argument("--osd-order", type=int, default=0)
    p_sweep.add_argument("--llr-clip", type=float, default=30.0)
    p_sweep.add_argument("--min-failures", type=int, default=None)
    p_sweep.add_argument("--chunk-size", type=int, default=1024)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.add_argument("--no-resume", action="store_true")
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(fn=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CONFIG_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BiasQecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except Exception as err:  # noqa: BLE001
        print(f"unexpected error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
