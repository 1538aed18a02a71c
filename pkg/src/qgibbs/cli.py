"""Command-line entry point: ``qgibbs <subcommand> [--config FILE] [overrides]``.

Every flag overrides a configuration key.  ``--set a.b=value`` reaches any
key; the value is parsed as YAML, so numbers and lists keep their types.
Exit status: 0 pass, 1 fail, 2 usage or configuration error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .errors import ConfigError, QGibbsError, ResourceError
from .harness import COMMANDS, jsonable, load_config, run_suite

EXIT_USAGE = 2

# flag name -> (config key, parser)
_SHORTCUTS = {
    "preset": ("model.preset", str),
    "beta": ("beta", float),
    "boxes": ("boxes", lambda s: [int(x) for x in s.split(",") if x]),
    "buffer": ("buffer", int),
    "boundary": ("boundary", str),
    "method": ("method", str),
    "max_dim": ("max_dim", int),
    "seed": ("seed", int),
    "output_dir": ("output.directory", str),
    "prefix": ("output.prefix", str),
}


def _parse_set(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            out[key.strip()] = yaml.safe_load(raw)
        except yaml.YAMLError as err:
            raise ConfigError(f"cannot parse value {raw!r}: {err}", key.split(".")) from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgibbs", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS), help="computation to run")
    p.add_argument("--config", "-c", help="YAML configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    p.add_argument("--preset", help="model preset (classical_ising, tfi, xy, heisenberg)")
    p.add_argument("--beta", help="inverse temperature")
    p.add_argument("--boxes", help="comma-separated box sides, e.g. 4,6,8,10")
    p.add_argument("--buffer", help="buffer width around each box")
    p.add_argument("--boundary", help="open or periodic")
    p.add_argument("--method", help="auto, dense or gaussian")
    p.add_argument("--max-dim", dest="max_dim", help="largest dense dimension")
    p.add_argument("--seed", help="seed for randomized suites")
    p.add_argument("--output-dir", dest="output_dir", help="directory for CSV and JSON files")
    p.add_argument("--prefix", help="file name prefix")
    p.add_argument("--no-write", action="store_true", help="skip writing files")
    p.add_argument("--json", action="store_true", help="print the result as JSON")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        overrides = {}
        for flag, (key, conv) in _SHORTCUTS.items():
            val = getattr(args, flag)
            if val is not None:
                try:
                    overrides[key] = conv(val)
                except ValueError:
                    raise ConfigError(f"invalid value {val!r}", key.split(".")) from None
        overrides.update(_parse_set(args.set))
        if args.no_write:
            overrides["output.write"] = False
        cfg = load_config(args.config, overrides)
        code, results = run_suite(cfg, args.command)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as err:
        print(f"resource error: {err}", file=sys.stderr)
        return 1
    except QGibbsError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    for res in results:
        if args.json:
            print(json.dumps(jsonable({"command": res.command, "status": res.status,
                                       "results": res.results, "messages": res.messages}), indent=2))
        else:
            _print_summary(res)
    return code


def _print_summary(res) -> None:
    print(f"{res.command}: {res.status}")
    for name, s in res.series.items():
        pts = ", ".join(f"{v}:{y:.6g}" for v, y in s.points)
        print(f"  {name}: limit {s.limit_estimate:.8g} (residual {s.fit_residual:.2e}) [{pts}]")
    for msg in res.messages:
        print(f"  note: {msg}")
    for path in res.results.get("files", []):
        print(f"  wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
