"""Command-line entry point.

Exit codes: 0 when every selected check passes, 1 when some check fails,
2 on malformed input.  Reports go to standard output (or ``--output``);
progress messages go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .base import Arrangement, arrangement_from_json, example_arrangement
from .errors import DTangentError, NotNormal
from .suites import SUITE_ORDER, Settings, expected_hh_dims, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    arrangement: Arrangement
    suites: tuple = SUITE_ORDER
    window: int = 8
    depth: int = 4
    fmt: str = "text"
    output: Path | None = None
    seed: int = 0
    element: str | None = None
    progress: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def settings(self) -> Settings:
        return Settings(window=self.window, depth=self.depth, seed=self.seed,
                        progress=self.progress)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--arrangement", metavar="PATH",
                     help='JSON file {"forms": [[a, b], ...]} listing the lines a*x + b*y')
    src.add_argument("--r-example", type=int, choices=(3, 4, 5), default=None,
                     help="built-in arrangement x, y, x-y, ..., x-r*y (default 3)")
    common.add_argument("--window", type=int, default=8, metavar="N",
                        help="E-degree truncation window for cohomology (N >= 2)")
    common.add_argument("--depth", type=int, default=4, metavar="D",
                        help="exponent-sum cap for sampled PBW monomials (D >= 1)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised inputs")
    common.add_argument("--output", metavar="PATH", help="write the report here")
    common.add_argument("--quiet", action="store_true", help="no progress on stderr")

    p = argparse.ArgumentParser(prog="dtangent",
                                description="Exact verification of the algebra of "
                                            "differential operators tangent to a line "
                                            "arrangement and its Hochschild cohomology.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    sel = v.add_mutually_exclusive_group()
    sel.add_argument("--all", action="store_true", help="every suite (the default)")
    sel.add_argument("--suite", metavar="NAMES",
                     help="comma-separated subset of " + ",".join(SUITE_ORDER))
    sub.add_parser("hh-dims", parents=[common], help="Hochschild cohomology dimensions")
    sub.add_parser("verify-autos", parents=[common], help="automorphism checks")
    sub.add_parser("verify-calabi-yau", parents=[common],
                   help="modular automorphism and the Calabi-Yau chain map")
    n = sub.add_parser("normal-check", parents=[common],
                       help="decide whether an element is normal")
    n.add_argument("element", help='element such as "x^2*y*(x-y)" or "x + D"')
    return p


def _load_arrangement(args) -> Arrangement:
    if args.arrangement:
        try:
            text = Path(args.arrangement).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.arrangement}: {exc.strerror}") from exc
        return arrangement_from_json(text)
    return example_arrangement(args.r_example or 3)


def build_config(argv: list[str] | None) -> RunConfig:
    args = _parser().parse_args(argv)
    if args.window < 2:
        raise InputError("--window must be at least 2")
    if args.depth < 1:
        raise InputError("--depth must be at least 1")
    if args.seed < 0 or args.seed >= 2 ** 64:
        raise InputError("--seed must fit in an unsigned 64-bit integer")
    suites = SUITE_ORDER
    if args.command == "verify" and args.suite:
        names = tuple(s.strip() for s in args.suite.split(",") if s.strip())
        unknown = [s for s in names if s not in SUITE_ORDER]
        if unknown or not names:
            raise InputError(f"unknown suite(s): {', '.join(unknown) or '(none)'}")
        suites = tuple(s for s in SUITE_ORDER if s in names)
    return RunConfig(command=args.command, arrangement=_load_arrangement(args),
                     suites=suites, window=args.window, depth=args.depth, fmt=args.format,
                     output=Path(args.output) if args.output else None, seed=args.seed,
                     element=getattr(args, "element", None), progress=not args.quiet)


# commands ------------------------------------------------------------------------
def _suite_report(cfg: RunConfig, names) -> dict:
    suites = run_suites(cfg.arrangement, names, cfg.settings)
    return {"arrangement": cfg.arrangement.to_json(), "suites": suites,
            "pass": all(s["pass"] for s in suites)}


def _hh_dims(cfg: RunConfig) -> dict:
    from .hochschild import cohomology_dims

    arr = cfg.arrangement
    dims = cohomology_dims(arr, cfg.window)
    wider = cohomology_dims(arr, cfg.window + 2)
    expected = expected_hh_dims(arr.r)
    return {"r": arr.r, "window": cfg.window, "dims": dims, "stable": dims == wider,
            "expected": expected, "pass": dims == expected and dims == wider}


def _calabi_yau(cfg: RunConfig) -> dict:
    from .suites import _check
    from .resolution import verify_cy_chain_iso
    from .symmetry import normal_auto, normal_auto_series, verify_modular
    from .ore import AlgebraMorphism, OreAlgebra
    from .resolution import sigma_morphism

    arr = cfg.arrangement
    A = OreAlgebra(arr)
    mod = verify_modular(arr, min(cfg.depth, 6))
    cy = verify_cy_chain_iso(arr)
    sigma = sigma_morphism(A)
    ones = (1,) * arr.n_lines
    checks = [
        _check("sigma respects the relations", mod["relations"]),
        _check("a Q = Q sigma(a) on PBW monomials", mod["pass"],
               {"monomials": mod["monomials"], "holds": mod["holds"],
                "opposite_orientation_holds": mod["opposite_orientation_holds"]}),
        _check("psi squares commute and psi is triangular", all(r["pass"] for r in cy),
               [r["generator"] for r in cy if not r["pass"]]),
        _check("sigma = exp(+sum d_j)", normal_auto(arr, ones) == sigma),
        _check("exp(-sum d_j) = sigma^-1",
               normal_auto_series(arr, ones, -1).compose(sigma) == AlgebraMorphism.identity(A)),
    ]
    suite = {"name": "calabi-yau", "checks": checks, "pass": all(c["pass"] for c in checks)}
    return {"arrangement": arr.to_json(), "suites": [suite], "pass": suite["pass"]}


def _normal_check(cfg: RunConfig) -> dict:
    from .ore import OreAlgebra, parse
    from .symmetry import is_normal

    A = OreAlgebra(cfg.arrangement)
    u = parse(A, cfg.element)
    try:
        w = is_normal(cfg.arrangement, u)
        result = {"normal": True, "scalar": str(w.scalar), "exponents": list(w.exponents),
                  "lines": [str(f) for f in cfg.arrangement.forms]}
    except NotNormal as exc:
        result = {"normal": False, "reason": exc.reason}
    return {"arrangement": cfg.arrangement.to_json(), "element": cfg.element, **result,
            "pass": result["normal"]}


def run(cfg: RunConfig) -> int:
    if cfg.command == "verify":
        report = _suite_report(cfg, cfg.suites)
    elif cfg.command == "verify-autos":
        report = _suite_report(cfg, ("symmetry",))
    elif cfg.command == "hh-dims":
        report = _hh_dims(cfg)
    elif cfg.command == "verify-calabi-yau":
        report = _calabi_yau(cfg)
    else:
        report = _normal_check(cfg)
    text = json.dumps(report, indent=2) + "\n" if cfg.fmt == "json" else render_text(report)
    if cfg.output:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def render_text(report: dict) -> str:
    lines = []
    if "suites" in report:
        arr = report["arrangement"]
        lines.append(f"arrangement r={arr['r']}  F = {arr['F']}")
        for s in report["suites"]:
            lines.append(f"{'PASS' if s['pass'] else 'FAIL'}  suite {s['name']}")
            for c in s["checks"]:
                mark = "ok  " if c["pass"] else "FAIL"
                extra = ""
                if c["name"].startswith("HH dims"):
                    extra = f"  dims={c['detail']['dims']}"
                elif not c["pass"] and c["detail"]:
                    extra = f"  {c['detail']}"
                lines.append(f"  {mark} {c['name']}{extra}")
    elif "dims" in report:
        lines.append(f"r={report['r']} window={report['window']} dims={report['dims']} "
                     f"expected={report['expected']} stable={report['stable']}")
    else:
        if report["normal"]:
            lines.append(f"{report['element']}: normal, scalar {report['scalar']}, "
                         f"exponents {report['exponents']}")
        else:
            lines.append(f"{report['element']}: not normal ({report['reason']})")
    lines.append("PASS" if report["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = build_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    except (InputError, DTangentError) as exc:
        print(f"dtangent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return run(cfg)
    except DTangentError as exc:
        print(f"dtangent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
