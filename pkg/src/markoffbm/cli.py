"""Command-line front end: ``markoffbm {analyze,family,cohomology,lines,search,selftest}``.

Exit codes: 0 success, 1 usage error (including failed family hypotheses),
2 degenerate input (m = 0 or m = 4a), 3 a failed check (selftest criterion
or a family member that does not show the expected obstruction).
"""
from __future__ import annotations

import argparse
import sys

from . import report
from .acceptance import FAIL, INCONCLUSIVE, SuiteOptions, mutated_hilbert, run_suite
from .errors import DegenerateParameters, HypothesisViolation

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_CHECK = 0, 1, 2, 3

# config keys and how to parse them; command-line flags override the file
CONFIG_KEYS = {"a": int, "m": int, "prec_cap": int, "box": int, "seed": int,
               "json": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
               "prop": str, "case": str, "params": str, "orbit_depth": int}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{n}: unknown key {key!r}")
            try:
                out[key] = CONFIG_KEYS[key](value)
            except ValueError as exc:
                raise UsageError(f"{path}:{n}: bad value for {key}: {value!r}") from exc
    return out


def _parse_params(text: str):
    """'3,1' or 'a=3,d=1' -> (3, 1); named values keep their given order."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        out.append(int(item.split("=", 1)[-1]))
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=None, help="emit the JSON report")
    common.add_argument("--config", help="key=value file; flags override its values")
    common.add_argument("--seed", type=int, help="random seed (selftest sampling)")

    am = argparse.ArgumentParser(add_help=False)
    am.add_argument("--a", type=int, help="coefficient of x^2")
    am.add_argument("--m", type=int, help="right-hand side")

    p = _Parser(prog="markoffbm", description=(
        "Local solubility, Brauer-Manin invariants and integral points on "
        "a x^2 + y^2 + z^2 - x y z = m."))
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("analyze", parents=[common, am], help="full analysis of one (a, m)")
    s.add_argument("--prec-cap", type=int, dest="prec_cap", help="cap on the p-adic precision of profiles")
    s.add_argument("--box", type=int, help="box bound for the integral point search (default 100)")

    s = sub.add_parser("family", parents=[common], help="analyze a member of an obstructed family")
    s.add_argument("--prop", help="family key: " + ", ".join(report.FAMILIES))
    s.add_argument("--params", help="family parameters, e.g. '3,1' or 'a=3,d=1'")
    s.add_argument("--prec-cap", type=int, dest="prec_cap")
    s.add_argument("--box", type=int)

    s = sub.add_parser("cohomology", parents=[common], help="H^1 of a catalogued Picard action")
    s.add_argument("--case", help="prop2.2-case1..4, prop2.3 or lemma5.1")

    sub.add_parser("lines", parents=[common, am], help="the 27 lines and their incidences")

    s = sub.add_parser("search", parents=[common, am], description=(
        "Box search for integral points, optionally followed by the orbit of the "
        "smallest point under the moves y -> xz - y, z -> xy - z and y <-> z. "
        "The move on x is left out: its image yz/a - x need not be an integer."),
        help="integral points in a box")
    s.add_argument("--box", type=int, help="box bound (default 100)")
    s.add_argument("--orbit-depth", type=int, dest="orbit_depth")

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--prec-cap", type=int, dest="prec_cap")
    s.add_argument("--only", help="comma separated criterion numbers")
    s.add_argument("--inject-fault", choices=["hilbert"], dest="inject_fault",
                   help="run with a deliberately wrong 2-adic Hilbert symbol")
    return p


def _settings(args) -> dict:
    merged = read_config(args.config) if getattr(args, "config", None) else {}
    for key, value in vars(args).items():
        if value is not None and key != "config":
            merged[key] = value
    return merged


def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _emit(rep, as_json: bool):
    print(report.to_json(rep) if as_json else report.render_text(rep))


def _selftest(cfg) -> int:
    opts = SuiteOptions()
    if cfg.get("seed") is not None:
        opts.seed = cfg["seed"]
    opts.prec_cap = cfg.get("prec_cap")
    if cfg.get("inject_fault") == "hilbert":
        opts.symbol = mutated_hilbert
    only = {int(s) for s in cfg["only"].split(",")} if cfg.get("only") else None
    as_json = cfg.get("json")
    results = run_suite(opts, only, echo=None if as_json else (lambda r: print(r.line(), flush=True)))
    failed = [r.number for r in results if r.status == FAIL]
    inconclusive = [r.number for r in results if r.status == INCONCLUSIVE]
    if as_json:
        print(report.to_json({"schema": report.SCHEMA, "command": "selftest",
                              "results": [r.to_json() for r in results],
                              "failed": failed, "inconclusive": inconclusive}))
    else:
        print(f"{len(results) - len(failed) - len(inconclusive)} passed, {len(failed)} failed, "
              f"{len(inconclusive)} inconclusive")
    return EXIT_CHECK if failed else EXIT_OK


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _settings(args)
        as_json = bool(cfg.get("json"))
        cmd = args.command
        if cmd == "analyze":
            _need(cfg, "a", "m")
            rep = report.analyze(cfg["a"], cfg["m"], cfg.get("prec_cap"), cfg.get("box", 100))
            for w in rep["warnings"]:
                print(f"warning: {w}", file=sys.stderr)
            _emit(rep, as_json)
        elif cmd == "family":
            _need(cfg, "prop", "params")
            rep = report.family(cfg["prop"], _parse_params(cfg["params"]),
                                cfg.get("prec_cap"), cfg.get("box", 100))
            _emit(rep, as_json)
            if not rep["matches_expected"]:
                return EXIT_CHECK
        elif cmd == "cohomology":
            _need(cfg, "case")
            _emit(report.cohomology(cfg["case"]), as_json)
        elif cmd == "lines":
            _need(cfg, "a", "m")
            _emit(report.lines(cfg["a"], cfg["m"]), as_json)
        elif cmd == "search":
            _need(cfg, "a", "m")
            _emit(report.search(cfg["a"], cfg["m"], cfg.get("box", 100), cfg.get("orbit_depth")), as_json)
        elif cmd == "selftest":
            return _selftest(cfg)
    except DegenerateParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except HypothesisViolation as exc:
        print("error: hypotheses fail: " + "; ".join(exc.failed), file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, TypeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
