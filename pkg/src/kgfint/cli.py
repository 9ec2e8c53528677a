"""Command-line front end for the algebra, field and reduction pipelines.

Exit codes: 0 success, 1 mathematical failure, 2 input error, 3 uncertified.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .cohomology import (
    NotACocycleError,
    TwoCocycle,
    UncertifiedIndexError,
    cohomological_index,
    cohomology,
    extend,
    integrability_verdict,
)
from .kgf import IdentityFailure
from .lie import StructureError, classical_index, load_algebra, validate
from .rational import parse_rational, to_fraction
from .symb import GrammarError

OUT_ENV = "KGFINT_OUT_DIR"

EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunManifest:
    command: str
    inputs: list[str] = field(default_factory=list)
    seed: int = 0
    params: dict = field(default_factory=dict)
    out_dir: str | None = None
    format: str = "json"

    def to_json(self) -> dict:
        return asdict(self)


def resolve_input(path: str) -> Path:
    """A path on disk, else a bundled fixture with the same file name."""
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.suffix else p.name + ".json"
    candidate = resources.files("kgfint") / "fixtures" / name
    if candidate.is_file():
        return Path(str(candidate))
    raise InputError(f"no such file or bundled fixture: {path}")


def read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational 'p/q', got {text!r}") from None


def real_arg(text: str) -> Fraction:
    """Rational or decimal float (converted exactly)."""
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return to_fraction(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None


def mu_arg(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--mu takes four comma-separated rationals")
    return tuple(rational_arg(p.strip()) for p in parts)


def list_arg(kind):
    def parse(text: str):
        return [kind(p.strip()) for p in text.split(",") if p.strip()]

    return parse


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def emit(args, manifest: RunManifest, report: dict, stem: str | None = None, csv_text: str | None = None) -> None:
    """Print the report (with --json) and write it under the output directory."""
    doc = {"manifest": manifest.to_json(), "report": report}
    text = dumps(doc)
    if args.json:
        sys.stdout.write(text)
    if manifest.out_dir:
        out = Path(manifest.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or manifest.command
        (out / f"{stem}.json").write_text(text, encoding="utf-8")
        if csv_text is not None:
            (out / f"{stem}.csv").write_text(csv_text, encoding="utf-8")


def _manifest(args, inputs=(), **params) -> RunManifest:
    return RunManifest(
        command=args.command,
        inputs=[str(p) for p in inputs],
        seed=args.seed,
        params={k: _jsonable(v) for k, v in params.items() if v is not None},
        out_dir=args.out,
        format=getattr(args, "format", "json"),
    )


def _load_cocycle(args, alg):
    if args.mu is not None and args.cocycle is not None:
        raise InputError("give either --mu or --cocycle, not both")
    if args.mu is not None:
        if alg.dim != 4:
            raise InputError("--mu parameterizes cocycles of a 4-dimensional algebra")
        m1, m2, m3, m4 = args.mu
        entries = [(1, 2, m1), (3, 4, m2), (1, 3, m3), (2, 3, m4)]
    elif args.cocycle is not None:
        data = read_json(resolve_input(args.cocycle))
        entries = data["entries"] if isinstance(data, dict) else data
    else:
        raise InputError("a cocycle is required (--mu or --cocycle)")
    F = TwoCocycle.from_entries(alg, entries, check=False)
    if not F.is_cocycle:
        raise NotACocycleError(f"cocycle identity fails at {[tuple(i + 1 for i in v) for v in F.violations()]}")
    return F


# -- commands ----------------------------------------------------------------


def cmd_validate(args) -> int:
    path = resolve_input(args.file)
    alg = load_algebra(read_json(path))
    rep = validate(alg)
    emit(args, _manifest(args, [args.file]), rep.to_json())
    if rep.valid:
        print("valid")
        return EXIT_OK
    for t in rep.to_json()["antisymmetry_violations"]:
        print(f"antisymmetry violated: C[{t[0]}][{t[1]}][{t[2]}]")
    for t in rep.to_json()["jacobi_violations"]:
        print(f"jacobi violated: ({t[0]}, {t[1]}, {t[2]}) component {t[3]}")
    return EXIT_MATH


def _valid_algebra(path_text):
    path = resolve_input(path_text)
    alg = load_algebra(read_json(path))
    rep = validate(alg)
    if not rep.valid:
        raise IdentityFailure("structure constants fail validation", rep.to_json())
    return alg


def cmd_cohomology(args) -> int:
    alg = _valid_algebra(args.file)
    rep = cohomology(alg).to_json()
    emit(args, _manifest(args, [args.file]), rep)
    print(f"z_dim={rep['z_dim']} b_dim={rep['b_dim']} h_dim={rep['h_dim']}")
    return EXIT_OK


def cmd_index(args) -> int:
    alg = _valid_algebra(args.file)
    F = _load_cocycle(args, alg)
    manifest = _manifest(args, [args.file] + ([args.cocycle] if args.cocycle else []), mu=args.mu)
    try:
        verdict = integrability_verdict(alg, F, seed=args.seed)
    except UncertifiedIndexError as exc:
        emit(args, manifest, {"certified": False, "index": exc.result.to_json()})
        print(f"warning: index not certified (sampling did not stabilize): {exc.result.index}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    report = verdict.to_json()
    report["classical_index"] = classical_index(alg, seed=args.seed)
    emit(args, manifest, report)
    print(verdict.line())
    return EXIT_OK


def cmd_extend(args) -> int:
    alg = _valid_algebra(args.file)
    F = _load_cocycle(args, alg)
    ext = extend(alg, F)
    idx = cohomological_index(ext.extended, TwoCocycle.zero(ext.extended), seed=args.seed)
    report = {"extended": ext.extended.to_json(), "cocycle": F.to_json(), "extended_classical_index": idx.index}
    emit(args, _manifest(args, [args.file], mu=args.mu), report)
    print(json.dumps(ext.extended.to_json(), sort_keys=True))
    return EXIT_OK


def _example_params(args) -> dict:
    return {"eps": args.eps, "vareps": args.vareps, "J1": args.J1, "J2": args.J2, "m": args.m}


def cmd_verify_example(args) -> int:
    from .e2r import E2RConfig, exact_identity_suite, periodicity_check, verify_dfunction

    cfg = E2RConfig(mu=args.mu, eps=args.eps, vareps=args.vareps, m=args.m)
    exact = exact_identity_suite(cfg)
    report = {"exact": exact}
    ok = exact["passed"]
    if cfg.canonical and cfg.eps != 0:
        d = verify_dfunction(args.n_points, args.tol, seed=args.seed, eps=cfg.eps, J1=args.J1, J2=args.J2)
        report["dfunction"] = d.to_json()
        report["periodicity"] = periodicity_check(args.J1, args.J2, cfg.eps, seed=args.seed)
        ok = ok and d.passed and report["periodicity"]
    emit(args, _manifest(args, **_example_params(args), mu=args.mu), report)
    for name, entry in exact["checks"].items():
        status = "ok" if entry.get("passed") else "FAIL"
        line = f"{status:4} {name}"
        if not entry.get("passed") and "residual" in entry:
            line += f": {entry['residual']}"
        print(line)
    if "dfunction" in report:
        print(f"{'ok' if report['dfunction']['passed'] else 'FAIL':4} dfunction max residual {report['dfunction']['max_relative_residual']:.3e}")
        print(f"{'ok' if report['periodicity'] else 'FAIL':4} x3 periodicity (J1 = {args.J1})")
    return EXIT_OK if ok else EXIT_MATH


def cmd_reduce(args) -> int:
    from .e2r import reduce_report

    report = reduce_report(args.eps, args.vareps, args.J1, args.J2, args.m)
    emit(args, _manifest(args, **_example_params(args)), report)
    print(f"derived: {report['ode']['d2']} | {report['ode']['d1']} | {report['ode']['d0']}")
    print(report["comparison"]["note"])
    if report["heun"]:
        h = report["heun"]
        print(f"gamma={h['gamma']} delta={h['delta']} eta={h['eta']} kappa={h['kappa']}")
    return EXIT_OK


def _solve_task(task: dict) -> tuple[dict, str]:
    from .e2r import solve_report

    params = {k: v for k, v in task.items() if k != "stem"}
    sol, rep = solve_report(**params)
    return rep, sol.to_csv()


def cmd_solve(args) -> int:
    from .e2r import solve_report

    sol, report = solve_report(args.eps, args.vareps, args.J1, args.J2, args.m, args.z0, args.z1, args.s, args.N, args.n_out)
    report["tolerance"] = args.tol
    report["passed"] = sol.max_residual < args.tol
    params = dict(_example_params(args), z0=args.z0, z1=args.z1, s=args.s, N=args.N)
    emit(args, _manifest(args, **params), report, csv_text=sol.to_csv())
    if not args.out:
        sys.stdout.write(sol.to_csv())
    print(f"max residual {sol.max_residual:.3e}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_MATH


def cmd_sweep(args) -> int:
    if not args.out:
        raise InputError("sweep writes one file per task; set --out or $" + OUT_ENV)
    tasks = []
    for J1, J2, m in itertools.product(args.J1s, args.J2s, args.ms):
        stem = f"solve_J1={J1}_J2={J2}_m={m}".replace("/", "_")
        tasks.append({"eps": args.eps, "vareps": args.vareps, "J1": J1, "J2": J2, "m": m, "z0": args.z0, "z1": args.z1, "stem": stem})
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(_solve_task, tasks))
    ok = True
    summary = {}
    for (rep, csv_text), task in zip(results, tasks):
        stem = task["stem"]
        manifest = _manifest(args, **{k: v for k, v in task.items() if k != "stem"})
        emit(argparse.Namespace(json=False), manifest, rep, stem=stem, csv_text=csv_text)
        summary[stem] = rep["max_residual"]
        ok = ok and rep["max_residual"] < args.tol
        print(f"{stem}: max residual {rep['max_residual']:.3e}")
    emit(args, _manifest(args, eps=args.eps, vareps=args.vareps), {"tasks": summary, "passed": ok}, stem="sweep")
    return EXIT_OK if ok else EXIT_MATH


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (recorded in reports)")
    common.add_argument("--out", default=os.environ.get(OUT_ENV), help=f"report directory (default ${OUT_ENV})")
    common.add_argument("--json", action="store_true", help="also print the JSON report on stdout")

    ap = argparse.ArgumentParser(prog="kgfint", description="Exact Lie-algebraic integration of the Klein-Gordon-Fock equation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check antisymmetry and Jacobi")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", parents=[common], help="Z^2, B^2, H^2 dimensions and bases")
    p.add_argument("file")
    p.set_defaults(func=cmd_cohomology)

    for name, func, helptext in (
        ("index", cmd_index, "cohomological index and integrability verdict"),
        ("extend", cmd_extend, "central extension by a 2-cocycle"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.add_argument("--mu", type=mu_arg, help="mu1,mu2,mu3,mu4 for mu1 e12 + mu2 e34 + mu3 e13 + mu4 e23")
        p.add_argument("--cocycle", help="JSON file with {'entries': [[a, b, value], ...]} (1-based)")
        p.set_defaults(func=func)

    example = argparse.ArgumentParser(add_help=False)
    example.add_argument("--eps", type=rational_arg, default=Fraction(1), help="charge")
    example.add_argument("--vareps", type=rational_arg, default=Fraction(2), help="metric parameter (> 1)")
    example.add_argument("--J1", type=rational_arg, default=Fraction(1))
    example.add_argument("--J2", type=real_arg, default=Fraction(1, 2))
    example.add_argument("--m", type=rational_arg, default=Fraction(1), help="mass")

    p = sub.add_parser("verify-example", parents=[common, example], help="exact identity suite and D-function checks")
    p.add_argument("--mu", type=mu_arg, default=(Fraction(1), Fraction(0), Fraction(0), Fraction(0)))
    p.add_argument("--n-points", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify_example)

    p = sub.add_parser("reduce", parents=[common, example], help="reduced ODE and Heun parameters")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", parents=[common, example], help="integrate the reduced equation, CSV output")
    p.add_argument("--z0", type=float, default=0.1)
    p.add_argument("--z1", type=float, default=0.9)
    p.add_argument("--s", type=rational_arg, default=Fraction(0), help="Frobenius exponent, 0 or 1/2")
    p.add_argument("--N", type=int, default=40, help="series truncation")
    p.add_argument("--n-out", type=int, default=81)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="solve over a parameter grid with a worker pool")
    p.add_argument("--eps", type=rational_arg, default=Fraction(1))
    p.add_argument("--vareps", type=rational_arg, default=Fraction(2))
    p.add_argument("--J1s", type=list_arg(rational_arg), default=[Fraction(0), Fraction(1)])
    p.add_argument("--J2s", type=list_arg(real_arg), default=[Fraction(1, 2)])
    p.add_argument("--ms", type=list_arg(rational_arg), default=[Fraction(1)])
    p.add_argument("--z0", type=float, default=0.1)
    p.add_argument("--z1", type=float, default=0.9)
    p.add_argument("--workers", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UncertifiedIndexError as exc:
        print(f"uncertified: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (IdentityFailure, NotACocycleError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (InputError, StructureError, GrammarError, KeyError, TypeError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        # integrator breakdown away from the requested endpoints
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
