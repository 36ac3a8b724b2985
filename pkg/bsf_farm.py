#!/usr/bin/env python3

import argparse
import logging
import sys
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Optional, Tuple

from colorama import init, Fore, Style

from costmodel import (BsfParams, TIME_FIELDS, SWEEP_COLUMNS, scalability_bound,
                       speedup_from_times, sweep_values)
from simulator import (ClusterConfig, ScheduleMode, CURVE_COLUMNS, TIMELINE_COLUMNS,
                       simulate_iteration, simulate_run, measured_speedup,
                       timeline_to_json, timeline_to_csv, run_to_json, curve_to_csv)
from runtime import (BsfProgram, CommCostSpec, PayloadError, ValidationRow,
                     calibrate, validate, DEFAULT_REPETITIONS)
from payloads import PAYLOAD_REGISTRY, build_payload
from utils import OutputFormatter, FORMATS, parse_k_spec, parse_config_file

init(autoreset=True)

log = logging.getLogger('bsf_farm')

EXIT_OK = 0
EXIT_INTERRUPTED = 1
EXIT_CONFIG = 2
EXIT_PAYLOAD = 3

COMMANDS = ('predict', 'sweep', 'simulate', 'calibrate', 'validate')
PARAM_COMMANDS = ('predict', 'sweep', 'simulate')
DEFAULT_K = {'sweep': '1:100', 'simulate': '1', 'validate': '1,2,4'}
DEFAULT_VALIDATION_ITERATIONS = 3

# flag spellings accepted as keys in --config files
KEY_ALIASES = {'ts': 't_s', 'tw': 't_w', 'tr': 't_r', 'tp': 't_p'}

FLOAT_KEYS = ('L', 't_s', 't_w', 't_r', 't_p', 'tol', 'compute_ms',
              'latency', 'per_byte', 'per_message')
INT_KEYS = ('seed', 'repetitions', 'size', 'order_bytes', 'result_bytes', 'iterations')


class ConfigError(ValueError):
    """Invalid or inconsistent command-line configuration"""


@dataclass(frozen=True)
class CliConfig:
    command: str
    L: Optional[float] = None
    t_s: Optional[float] = None
    t_w: Optional[float] = None
    t_r: Optional[float] = None
    t_p: Optional[float] = None
    K: Optional[Tuple[int, ...]] = None
    mode: str = ScheduleMode.PAPER_FAITHFUL.value
    format: str = 'table'
    out: Optional[str] = None
    seed: int = 0
    repetitions: int = DEFAULT_REPETITIONS
    payload: Optional[str] = None
    problem: Optional[str] = None
    size: Optional[int] = None
    tol: Optional[float] = None
    compute_ms: Optional[float] = None
    order_bytes: Optional[int] = None
    result_bytes: Optional[int] = None
    iterations: Optional[int] = None
    latency: Optional[float] = None
    per_byte: Optional[float] = None
    per_message: Optional[float] = None
    verbose: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"Unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        try:
            ScheduleMode(self.mode)
        except ValueError:
            modes = ', '.join(m.value for m in ScheduleMode)
            raise ConfigError(f"Unknown mode {self.mode!r}; choose from {modes}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be at least 1, got {self.repetitions}")
        if self.iterations is not None and self.iterations < 1:
            raise ConfigError(f"iterations must be at least 1, got {self.iterations}")
        if self.payload is not None and self.payload not in PAYLOAD_REGISTRY:
            raise ConfigError(f"Unknown payload {self.payload!r}; "
                              f"choose from {', '.join(sorted(PAYLOAD_REGISTRY))}")

        if self.command in PARAM_COMMANDS:
            if self.explicit_params == (self.payload is not None):
                raise ConfigError("Give either model parameters (--L --ts --tw --tr --tp) "
                                  "or a calibration target (--payload), not both or neither")
        elif self.payload is None:
            raise ConfigError(f"{self.command} needs --payload")
        elif self.explicit_params:
            raise ConfigError(f"{self.command} measures its parameters; drop --L/--ts/--tw/--tr/--tp")

    @property
    def explicit_params(self) -> bool:
        return any(getattr(self, name) is not None for name in TIME_FIELDS)

    def model_params(self) -> BsfParams:
        """Explicit parameters; unspecified costs are zero"""
        return BsfParams(**{name: getattr(self, name) or 0.0 for name in TIME_FIELDS})

    def k_values(self) -> Optional[List[int]]:
        if self.K is not None:
            return list(self.K)
        if self.command in DEFAULT_K:
            return parse_k_spec(DEFAULT_K[self.command])
        return None

    def comm_cost(self) -> CommCostSpec:
        return CommCostSpec(latency=self.latency or 0.0, per_byte=self.per_byte or 0.0,
                            per_message=self.per_message or 0.0)


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if key == 'K':
            return tuple(parse_k_spec(value))
        if key in FLOAT_KEYS:
            return float(value)
        if key in INT_KEYS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"expected an integer, got {value}")
            return int(value)
        if key == 'verbose':
            return bool(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for {key}: {e}") from e
    return str(value)


def build_config(args: argparse.Namespace) -> CliConfig:
    """Merge built-in defaults, an optional JSON config file and flags"""
    known = {f.name for f in fields(CliConfig)} - {'command'}
    values: Dict[str, Any] = {}

    if args.config:
        for key, value in parse_config_file(args.config).items():
            name = KEY_ALIASES.get(key, key.replace('-', '_'))
            if name not in known:
                raise ConfigError(f"Unknown key {key!r} in config file {args.config}")
            values[name] = value

    for key, value in vars(args).items():
        name = KEY_ALIASES.get(key, key)
        if name in known and value is not None:
            values[name] = value

    coerced = {name: _coerce(name, value) for name, value in values.items()}
    return CliConfig(command=args.command, **{k: v for k, v in coerced.items() if v is not None})


def _fmt(value: Optional[float]) -> str:
    return 'n/a' if value is None else f"{value:g}"


class BsfFarm:
    def __init__(self, config: CliConfig):
        self.config = config
        self.output = OutputFormatter(config.format)

    def program(self) -> BsfProgram:
        cfg = self.config
        program = build_payload(cfg.payload, seed=cfg.seed, size=cfg.size, problem=cfg.problem,
                                tol=cfg.tol, compute_ms=cfg.compute_ms,
                                order_bytes=cfg.order_bytes, result_bytes=cfg.result_bytes,
                                iterations=cfg.iterations)
        log.debug("Built payload %s with %s", program.name, program.params)
        return program

    def params(self) -> BsfParams:
        """Model parameters, given explicitly or calibrated from a payload"""
        if self.config.explicit_params:
            return self.config.model_params()
        self.output.status(f"Calibrating payload {self.config.payload} "
                           f"({self.config.repetitions} repetitions)")
        result = calibrate(self.program(), repetitions=self.config.repetitions,
                           comm_cost=self.config.comm_cost())
        for name in result.flagged:
            self.output.warning(f"{name} is below the measurable floor; "
                                f"treat the prediction as indicative only")
        return result.params

    def cmd_predict(self) -> int:
        p = self.params()
        report = scalability_bound(p)
        if report.note:
            self.output.warning(report.note)
        K_star = 'unbounded' if report.unbounded else _fmt(report.K_star)
        self.output.result(f"K_star = {K_star}, K_opt = {_fmt(report.K_opt)}, "
                           f"a_max = {_fmt(report.a_max)}, e_at_opt = {_fmt(report.e_at_opt)}")

        rows = [r.to_dict() for r in sweep_values(p, self.config.K)] if self.config.K else None
        record = report.to_dict()
        if self.output.format == 'json':
            document = {'params': p.to_dict(), 'report': record}
            if rows is not None:
                document['sweep'] = rows
            text = self.output.to_json(document)
        elif rows is not None:
            text = self.output.render_rows(rows, SWEEP_COLUMNS)
            if self.output.format == 'table':
                text = self.output.render_record(record) + text
        else:
            text = self.output.render_record(record)
        self.output.write(text, self.config.out)
        return EXIT_OK

    def cmd_sweep(self) -> int:
        p = self.params()
        rows = sweep_values(p, self.config.k_values())
        best = max(rows, key=lambda r: (r.speedup, -r.K))
        self.output.result(f"Best K in sweep: {best.K} (speedup {best.speedup:g})")
        self.output.write(self.output.render_rows([r.to_dict() for r in rows], SWEEP_COLUMNS),
                          self.config.out)
        return EXIT_OK

    def cmd_simulate(self) -> int:
        cfg = self.config
        p = self.params()
        K_list = cfg.k_values()
        template = ClusterConfig.from_params(p, K_list[0], ScheduleMode(cfg.mode))

        if len(K_list) == 1:
            timeline = simulate_iteration(template)
            T1 = simulate_iteration(template.with_workers(1)).T_measured
            T = timeline.T_measured
            speedup = speedup_from_times(T1, T) if T1 > 0 and T > 0 else None
            self.output.result(f"K={template.K} ({cfg.mode}): T_measured = {T:g}, "
                               f"speedup = {_fmt(speedup)}")
            if cfg.iterations and cfg.iterations > 1:
                trace = simulate_run(template, cfg.iterations)
                self.output.result(f"{trace.iteration_count} iterations: total {trace.total_time:g}")
                if self.output.format == 'json':
                    self.output.write(run_to_json(trace) + '\n', cfg.out)
                    return EXIT_OK
            if self.output.format == 'json':
                text = timeline_to_json(timeline) + '\n'
            elif self.output.format == 'csv':
                text = timeline_to_csv(timeline)
            else:
                text = self.output.render_rows([e.to_dict() for e in timeline.events],
                                               TIMELINE_COLUMNS)
            self.output.write(text, cfg.out)
            return EXIT_OK

        curve = measured_speedup(template, K_list)
        best_K, best_T, best_a = max(curve, key=lambda c: (c[2], -c[0]))
        self.output.result(f"Simulated speedup peaks at K={best_K} "
                           f"(T_measured = {best_T:g}, speedup = {best_a:g})")
        if self.output.format == 'csv':
            text = curve_to_csv(curve)
        else:
            rows = [dict(zip(CURVE_COLUMNS, point)) for point in curve]
            text = self.output.render_rows(rows, CURVE_COLUMNS)
        self.output.write(text, cfg.out)
        return EXIT_OK

    def cmd_calibrate(self) -> int:
        cfg = self.config
        self.output.status(f"Calibrating payload {cfg.payload} ({cfg.repetitions} repetitions)")
        result = calibrate(self.program(), repetitions=cfg.repetitions, comm_cost=cfg.comm_cost())
        for name in result.flagged:
            self.output.warning(f"{name} is below the measurable floor")
        self.output.result(f"t_w = {result.params.t_w:g} s, t_p = {result.params.t_p:g} s")

        if self.output.format == 'json':
            text = self.output.to_json(result.to_dict())
        else:
            record = dict(result.params.to_dict(), flagged=','.join(result.flagged))
            text = self.output.render_record(record)
        self.output.write(text, cfg.out)
        return EXIT_OK

    def cmd_validate(self) -> int:
        cfg = self.config
        K_list = cfg.k_values()
        self.output.status(f"Validating payload {cfg.payload} for K in {K_list}")
        report = validate(self.program(), K_list, repetitions=cfg.repetitions,
                          comm_cost=cfg.comm_cost(),
                          iterations=cfg.iterations or DEFAULT_VALIDATION_ITERATIONS,
                          mode=ScheduleMode(cfg.mode))
        for name in report.flagged:
            self.output.warning(f"{name} is below the measurable floor")
        self.output.result(f"Predicted K_opt = {_fmt(report.K_opt_predicted)}, "
                           f"best measured K = {_fmt(report.K_best_measured)}")

        if self.output.format == 'json':
            text = self.output.to_json(report.to_dict())
        else:
            columns = [f.name for f in fields(ValidationRow)]
            text = self.output.render_rows([vars(r) for r in report.rows], columns)
        self.output.write(text, cfg.out)
        return EXIT_OK

    def run(self) -> int:
        return getattr(self, f"cmd_{self.config.command}")()


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)

    model = common.add_argument_group('model parameters')
    model.add_argument('--L', type=float, help='Network latency per message')
    model.add_argument('--ts', type=float, help='Master time to send an order to one worker')
    model.add_argument('--tw', type=float, help='Total worker compute time on one worker')
    model.add_argument('--tr', type=float, help='Master time to receive all results')
    model.add_argument('--tp', type=float, help='Master time to process the results')

    run = common.add_argument_group('run options')
    run.add_argument('--K', help='Worker counts (e.g., 10 or 1,2,4 or 1:200 or 1:200:5)')
    run.add_argument('--mode', choices=[m.value for m in ScheduleMode],
                     help='Simulated schedule (default: paper_faithful)')
    run.add_argument('--format', choices=FORMATS, help='Output format (default: table)')
    run.add_argument('--out', help='Write data to this file instead of stdout')
    run.add_argument('--seed', type=int, help='Problem generator seed (default: 0)')
    run.add_argument('--repetitions', type=int,
                     help=f'Timed repetitions per measurement (default: {DEFAULT_REPETITIONS})')
    run.add_argument('--config', help='JSON file of option values; flags override it')
    run.add_argument('-v', '--verbose', action='store_true', default=None,
                     help='Enable debug logging')

    payload = common.add_argument_group('calibration target')
    payload.add_argument('--payload', choices=sorted(PAYLOAD_REGISTRY), help='Payload to run')
    payload.add_argument('--problem', help='Problem file in the dense text format')
    payload.add_argument('--size', type=int, help='Generated problem size')
    payload.add_argument('--tol', type=float, help='Convergence tolerance')
    payload.add_argument('--compute-ms', dest='compute_ms', type=float,
                         help='Synthetic compute time per iteration in milliseconds')
    payload.add_argument('--order-bytes', dest='order_bytes', type=int,
                         help='Synthetic order size in bytes')
    payload.add_argument('--result-bytes', dest='result_bytes', type=int,
                         help='Synthetic total result size in bytes')
    payload.add_argument('--iterations', type=int, help='Iterations to run or simulate')
    payload.add_argument('--latency', type=float, help='Message latency L for calibration (s)')
    payload.add_argument('--per-byte', dest='per_byte', type=float,
                         help='Transfer cost per byte for calibration (s)')
    payload.add_argument('--per-message', dest='per_message', type=float,
                         help='Fixed cost per message for calibration (s)')

    parser = argparse.ArgumentParser(
        description='BSF Farm - predict, simulate and measure master/worker scalability',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    subparsers.add_parser('predict', parents=[common],
                          help='Scalability bound, optionally with a speedup sweep')
    subparsers.add_parser('sweep', parents=[common], help='Predicted cost, speedup and efficiency over K')
    subparsers.add_parser('simulate', parents=[common], help='Discrete-event simulation of iterations')
    subparsers.add_parser('calibrate', parents=[common], help='Measure model parameters of a payload')
    subparsers.add_parser('validate', parents=[common],
                          help='Compare predicted, simulated and measured iteration times')

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_arguments(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    error_stream = sys.stdout if args.format in (None, 'table') else sys.stderr

    try:
        config = build_config(args)
        return BsfFarm(config).run()
    except PayloadError as e:
        print(f"{Fore.RED}[!] Payload failure: {e}{Style.RESET_ALL}", file=error_stream)
        log.debug("Payload failure", exc_info=True)
        return EXIT_PAYLOAD
    except (ValueError, OSError) as e:
        print(f"{Fore.RED}[!] {e}{Style.RESET_ALL}", file=error_stream)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        print(f"\n{Fore.YELLOW}[!] Interrupted by user{Style.RESET_ALL}", file=error_stream)
        return EXIT_INTERRUPTED


if __name__ == '__main__':
    sys.exit(main())
