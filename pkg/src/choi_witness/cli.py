"""Command line entry point: ``choi-witness {scan,measures,verify}``.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 invariant failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import report, verify
from .dephasing import DephasingParams
from .witnesses import measure_ne, measure_ns, witness_scan

log = logging.getLogger("choi_witness")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    gamma0: float = 1.0
    lam: float = 1.0
    epsilon: float = 1e-4
    t_max: float = 10.0
    grid_step: float = 0.01
    renyi_orders: tuple[int, ...] = (2, 5, 10)
    pole_exclusion: float = 0.05
    output_dir: Path = Path(".")
    seed: int = 42

    def __post_init__(self):
        for name in ("gamma0", "lam", "epsilon", "t_max", "grid_step", "pole_exclusion"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive number, got {value}")
        if not self.renyi_orders or any(a < 2 for a in self.renyi_orders):
            raise ConfigError(f"renyi orders must be integers >= 2, got {self.renyi_orders}")
        if self.grid_step > self.t_max:
            raise ConfigError("grid step exceeds t-max")

    @property
    def params(self) -> DephasingParams:
        return DephasingParams(self.gamma0, self.lam, self.epsilon)


# key in config file / flag dest -> (field name, parser)
def _orders(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in str(text).replace(" ", "").split(",") if x)
    except ValueError:
        raise ConfigError(f"renyi orders must be comma-separated integers, got {text!r}") from None


_FIELDS = {
    "gamma0": ("gamma0", float),
    "lambda": ("lam", float),
    "epsilon": ("epsilon", float),
    "t_max": ("t_max", float),
    "grid_step": ("grid_step", float),
    "renyi_orders": ("renyi_orders", _orders),
    "pole_exclusion": ("pole_exclusion", float),
    "out": ("output_dir", Path),
    "output_dir": ("output_dir", Path),
    "seed": ("seed", int),
}


def read_config_file(path: Path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment. Dashes in keys act as underscores."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in _FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    raw: dict[str, object] = {}
    if args.config is not None:
        raw.update(read_config_file(args.config))
    for key in _FIELDS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    kwargs = {}
    for key, value in raw.items():
        name, parse = _FIELDS[key]
        try:
            kwargs[name] = parse(value)
        except (TypeError, ValueError):
            raise ConfigError(f"invalid value for {key}: {value!r}") from None
    return RunConfig(**kwargs)


def _write_outputs(out_dir: Path, files: dict[str, str]) -> None:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, content in files.items():
            with open(out_dir / name, "w", newline="") as fh:
                fh.write(content)
    except OSError as exc:
        raise OSError(f"cannot write to {out_dir}: {exc}") from exc


def _title(cfg: RunConfig) -> str:
    return f"gamma0={cfg.gamma0:g}, lambda={cfg.lam:g}, eps={cfg.epsilon:g}"


def cmd_scan(cfg: RunConfig) -> int:
    grid = verify.scan_grid(cfg.t_max, cfg.grid_step)
    result = witness_scan(cfg.params, grid, cfg.renyi_orders, "closed_form", cfg.pole_exclusion)
    for t in result.skipped:
        print(f"skipped t={t:g}: within {cfg.pole_exclusion:g} of a pole", file=sys.stderr)
    _write_outputs(
        cfg.output_dir,
        {
            "scan.csv": report.scan_csv(result.samples, cfg.renyi_orders),
            "scan.svg": report.scan_svg(result.samples, cfg.renyi_orders, cfg.grid_step, _title(cfg)),
        },
    )
    print(f"wrote {len(result.samples)} rows to {cfg.output_dir / 'scan.csv'}")
    return EXIT_OK


def cmd_measures(cfg: RunConfig) -> int:
    p = cfg.params
    t0s = verify.scan_grid(cfg.t_max, cfg.grid_step)
    # integration step divides the output step so every t0 lands on a node
    sub = max(1, math.ceil(cfg.grid_step / 1e-3 - 1e-9))
    step = cfg.grid_step / sub
    ns = [measure_ns(p, t0, step, cfg.pole_exclusion).value for t0 in t0s]
    ne = [measure_ne(p, t0, step, cfg.pole_exclusion).value for t0 in t0s]
    _write_outputs(
        cfg.output_dir,
        {
            "measures.csv": report.measures_csv(t0s, ns, ne),
            "measures.svg": report.measures_svg(t0s, ns, ne, _title(cfg)),
        },
    )
    print(f"wrote {len(t0s)} rows to {cfg.output_dir / 'measures.csv'}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = verify.run_all(cfg.params, cfg.t_max, cfg.grid_step, cfg.pole_exclusion, cfg.seed, cfg.renyi_orders)
    for r in results:
        print(f"[{r.verdict}] {r.name}: {r.detail}")
    if verify.suite_passed(results):
        print("all invariants hold")
        return EXIT_OK
    failed = [r.name for r in results if r.verdict == "FAIL"]
    print("FAILED: " + "; ".join(failed))
    return EXIT_INVARIANT


COMMANDS = {"scan": cmd_scan, "measures": cmd_measures, "verify": cmd_verify}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma0", type=float)
    common.add_argument("--lambda", dest="lambda", type=float)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--grid-step", dest="grid_step", type=float)
    common.add_argument("--renyi-orders", dest="renyi_orders", help="comma-separated, e.g. 2,5,10")
    common.add_argument("--pole-exclusion", dest="pole_exclusion", type=float)
    common.add_argument("--out", dest="out", type=Path, help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", type=Path, help="key=value config file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="choi-witness", description="Choi-state entropy witnesses of non-Markovianity")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("scan", parents=[common], help="witness time series (scan.csv, scan.svg)")
    sub.add_parser("measures", parents=[common], help="accumulated N_S and N_e (measures.csv, measures.svg)")
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
