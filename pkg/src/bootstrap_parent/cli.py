"""``verify <scenario> --config <path>`` and ``verify list``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .scenarios import SCENARIOS, ConfigError, dumps, run

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def list_scenarios(as_json: bool = False) -> str:
    if as_json:
        rows = [{"name": s.name, "description": s.summary, "keys": list(s.keys)} for s in SCENARIOS.values()]
        return json.dumps(rows, indent=2) + "\n"
    width = max(len(n) for n in SCENARIOS)
    lines = [f"{s.name:<{width}}  {s.summary}  [keys: {', '.join(s.keys)}]" for s in SCENARIOS.values()]
    return "\n".join(lines) + "\n"


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv[:1] == ["list"]:
        p = _Parser(prog="verify list", description="List the verification scenarios.")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        args = p.parse_args(argv[1:])
        sys.stdout.write(list_scenarios(args.json))
        return EXIT_OK
    p = _Parser(prog="verify", description="Run a named verification scenario and write a JSON report.")
    p.add_argument("scenario", help="scenario name, or 'list'")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="seed (default 0)")
    p.add_argument("--out", help="report path (default: config 'out', else stdout)")
    p.add_argument("--tol-cmi", type=float, dest="tol_cmi", help="CMI tolerance override")
    args = p.parse_args(argv)
    try:
        config = _load_config(args.config)
        name = config.get("scenario", args.scenario)
        if name != args.scenario:
            raise ConfigError(f"config is for scenario {name!r}, not {args.scenario!r}")
        seed = args.seed if args.seed is not None else int(config.get("seed", 0))
        tol = args.tol_cmi if args.tol_cmi is not None else config.get("tolerances", {}).get("cmi")
        base = Path(args.config).resolve().parent if args.config else Path.cwd()
        body = {k: v for k, v in config.items() if k not in ("scenario", "seed", "out", "tolerances")}
        report = run(args.scenario, body, seed, tol, base)
        text = dumps(report)
        out = args.out or config.get("out")
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
    except ConfigError as e:
        print(f"verify: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"verify: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    status = "pass" if report["pass"] else "FAIL"
    print(f"{args.scenario}: {status} ({report['summary']['failed']} of {report['summary']['gated']} gated checks failed)", file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_FAIL
