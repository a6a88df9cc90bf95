"""Command-line front end: ``verify``, ``solve``, ``spectrum`` and ``report``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .report import (
    SUITES,
    ConfigError,
    VerificationReport,
    decode_complex,
    load_config,
    run_solve,
    run_verify,
    spectrum,
    summary_lines,
)
from .xxz import ParameterError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int)
    common.add_argument("--n", type=int, help="number of D22 sites")
    common.add_argument("--class", dest="cls", choices=("I", "II"))
    common.add_argument("--out", help="write the JSON result here")

    p = argparse.ArgumentParser(prog="d22chain", description="D22 open chain verification and Bethe roots")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", action="append", choices=SUITES, help="repeatable; default all")
    sub.add_parser("solve", parents=[common], help="solve the Bethe equations and certify eigenvalues")
    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues of t(u)")
    s.add_argument("--u", default="0.3+0.2j", help="spectral parameter, Python complex literal")
    r = sub.add_parser("report", help="validate and summarize a saved report")
    r.add_argument("path")
    return p


def _overrides(args) -> dict:
    ov = {"seed": args.seed, "n": args.n, "class": args.cls, "out": args.out}
    if getattr(args, "suite", None):
        ov["suites"] = args.suite
    return ov


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "report":
            try:
                with open(args.path, encoding="utf-8") as fh:
                    rep = VerificationReport.from_dict(json.load(fh))
            except Exception as exc:  # unreadable or schema-invalid
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            print("\n".join(summary_lines(rep)))
            return EXIT_OK if rep.passed else EXIT_FAIL

        cfg = load_config(args.config, _overrides(args))
        if args.command == "spectrum":
            _emit(json.dumps(spectrum(cfg, decode_complex(args.u)), indent=2), cfg.out)
            return EXIT_OK
        rep = run_verify(cfg) if args.command == "verify" else run_solve(cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print("\n".join(summary_lines(rep)), file=sys.stderr if cfg.out is None else sys.stdout)
    if cfg.out:
        _emit(rep.to_json(), cfg.out)
    else:
        print(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
