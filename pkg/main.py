"""
Program entry for the Gibbs mixing engine: point, sweep and verify.
"""

import argparse
from copy import deepcopy
import logging
import sys

from active_config import ACTIVE_PRESET, RUNTIME_OVERRIDES
from config import CONFIG_LOAD_ERROR
from config_support import (
    COLORS_CHOICES,
    SPACING_CHOICES,
    STAT_CHOICES,
    SWEEP_CHOICES,
    build_runtime_configuration,
    flags_to_overrides,
    merge_overrides,
    parse_flag_file,
    preset_display_name,
)
from gibbs_mixing.core_model import (
    InternalLabels,
    PhysicalConfig,
    ScenarioPair,
    Statistics,
    classical_mixing_entropy,
    optional_statistics,
)
from gibbs_mixing.errors import EXIT_OK, EXIT_VERIFY, GibbsMixingError, UsageError
from gibbs_mixing.formatting import format_items, format_number
from gibbs_mixing.sweep import SweepRequest, run_sweep
from gibbs_mixing.thermo import evaluate_pair
from gibbs_mixing.verification import PROFILES, format_table, run_verify
from log import logging_context, setup_logging

# argparse dest -> flat config key
FLAG_DESTS = {
    "n": "n",
    "colors": "colors",
    "stat": "stat",
    "beta": "beta",
    "length": "length",
    "sweep": "sweep",
    "from_": "from",
    "to": "to",
    "steps": "steps",
    "spacing": "spacing",
    "out": "out",
    "outputs": "outputs",
    "workers": "workers",
    "profile": "profile",
}


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose errors become UsageError (exit status 1)."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", default=None, help="本次运行使用的预设模块，例如 configs.config_colors_length_beta1")
    parser.add_argument("--config", default=None, help="key=value 配置文件，键名与命令行长参数一致")
    parser.add_argument("--verbose", "-v", action="store_true", help="控制台输出 INFO 级别日志")
    parser.add_argument("--log-dir", default=None, help="日志根目录；传 none 关闭文件日志")


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None, help="粒子数（正偶数）")
    parser.add_argument("--colors", choices=COLORS_CHOICES, default=None, help="是否带内态标签")
    parser.add_argument("--stat", choices=STAT_CHOICES, default=None, help="统计类型")
    parser.add_argument("--beta", type=float, default=None, help="逆温度 beta")
    parser.add_argument("--length", type=float, default=None, help="势阱宽度 l")


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(prog="main.py", description="少粒子 Gibbs 混合熵与等温功计算")
    subparsers = parser.add_subparsers(dest="command", metavar="{point,sweep,verify}")
    subparsers.required = True

    point = subparsers.add_parser("point", help="单点计算熵变与功")
    _add_scenario_flags(point)
    _add_common_flags(point)

    sweep = subparsers.add_parser("sweep", help="沿 beta 或 l 扫描并写出 CSV")
    _add_scenario_flags(sweep)
    sweep.add_argument("--sweep", choices=SWEEP_CHOICES, default=None, help="扫描参数")
    sweep.add_argument("--from", dest="from_", type=float, default=None, help="扫描起点")
    sweep.add_argument("--to", type=float, default=None, help="扫描终点")
    sweep.add_argument("--steps", type=int, default=None, help="网格点数（>= 2）")
    sweep.add_argument("--spacing", choices=SPACING_CHOICES, default=None, help="网格间距")
    sweep.add_argument("--out", default=None, help="输出 CSV 路径；- 表示标准输出")
    sweep.add_argument("--outputs", default=None, help="逗号分隔的附加输出列，例如 delta_s,work,mean_energy")
    sweep.add_argument("--workers", type=int, default=None, help="并行计算线程数")
    _add_common_flags(sweep)

    verify = subparsers.add_parser("verify", help="运行自检套件")
    verify.add_argument("--profile", choices=sorted(PROFILES), default=None, help="容差与网格配置")
    verify.add_argument("--oracle-n-max", type=int, default=None, help="强制穷举截断能级数")
    _add_common_flags(verify)
    return parser


def resolve_configuration(args) -> dict:
    """Preset, then --config file, then explicit CLI flags."""
    preset = args.preset or ACTIVE_PRESET
    overrides = deepcopy(RUNTIME_OVERRIDES) if preset == ACTIVE_PRESET else {}
    cli_flags = {
        key: getattr(args, dest) for dest, key in FLAG_DESTS.items() if getattr(args, dest, None) is not None
    }
    try:
        if args.config:
            overrides = merge_overrides(overrides, flags_to_overrides(parse_flag_file(args.config)))
        overrides = merge_overrides(overrides, flags_to_overrides(cli_flags))
        return build_runtime_configuration(preset, overrides)
    except (ValueError, ImportError, OSError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc


def _log_dir(args, runtime: dict):
    if args.log_dir is None:
        return runtime["logging"]["log_dir"]
    if args.log_dir.strip().lower() in ("", "none", "off"):
        return None
    return args.log_dir


def _point_pair(n: int, labels: InternalLabels, statistics: Statistics, explicit: bool) -> ScenarioPair:
    # With --stat all the distinguishable block falls back to the colored setup.
    if statistics is Statistics.DISTINGUISHABLE and not explicit:
        labels = InternalLabels.WITH_COLORS
    return ScenarioPair.of(n, labels, statistics)


def run_point(runtime: dict, out=None) -> int:
    point = runtime["point"]
    tol = runtime["numerics"]["tol"]
    labels = InternalLabels.from_flag(point["colors"])
    config = PhysicalConfig(beta=point["beta"], length=point["length"])
    explicit = point["stat"] != "all"
    blocks = []
    values = []
    for statistics in optional_statistics(point["stat"]):
        pair = _point_pair(point["n"], labels, statistics, explicit)
        with logging_context(scenario=pair.label()):
            report = evaluate_pair(pair, config, tol)
        values.append(report.delta_s)
        blocks.append(format_items([("statistics", statistics.value)] + report.as_items()))
    footer = [("classical_ref", classical_mixing_entropy(point["n"], labels))]
    if len(values) > 1:
        footer.append(("delta_s_spread", max(values) - min(values)))
    print("\n\n".join(blocks + [format_items(footer)]), file=out or sys.stdout)
    return EXIT_OK


def run_sweep_command(runtime: dict) -> int:
    sweep = runtime["sweep"]
    fixed = sweep["length"] if sweep["sweep"] == "beta" else sweep["beta"]
    request = SweepRequest(
        n_particles=sweep["n"],
        internal_labels=InternalLabels.from_flag(sweep["colors"]),
        swept=sweep["sweep"],
        fixed_value=fixed,
        start=sweep["from"],
        stop=sweep["to"],
        count=sweep["steps"],
        spacing=sweep["spacing"],
        statistics=tuple(optional_statistics(sweep["stat"])),
        outputs=tuple(sweep["outputs"]),
    )
    out_path = None if sweep["out"] == "-" else sweep["out"]
    run_sweep(request, out_path, workers=sweep["workers"], tol=runtime["numerics"]["tol"])
    return EXIT_OK


def run_verify_command(runtime: dict, oracle_n_max=None, out=None) -> int:
    summary = run_verify(
        profile=runtime["verify"]["profile"],
        oracle_n_max=oracle_n_max,
        tol=runtime["numerics"]["tol"],
        oracle_tolerance=runtime["numerics"]["oracle_tolerance"],
        level_cap=runtime["numerics"]["oracle_level_cap"],
    )
    print(format_table(summary), file=out or sys.stdout)
    return EXIT_OK if summary.passed else EXIT_VERIFY


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        runtime = resolve_configuration(args)
    except GibbsMixingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status

    logger = setup_logging(
        app_name=f"gibbs_mixing_{args.command}",
        log_dir=_log_dir(args, runtime),
        command=args.command,
        console_level=logging.INFO if args.verbose else logging.WARNING,
        max_sessions=runtime["logging"]["max_sessions"],
    )
    preset = args.preset or ACTIVE_PRESET
    logger.info(
        "main.py 启动参数: command=%s, preset=%s (%s), config=%s, runtime=%s",
        args.command,
        preset,
        preset_display_name(preset),
        args.config,
        runtime.get(args.command),
    )
    if CONFIG_LOAD_ERROR is not None:
        logger.warning("配置加载失败，已回退到默认配置: %s", CONFIG_LOAD_ERROR)

    try:
        if args.command == "point":
            return run_point(runtime)
        if args.command == "sweep":
            return run_sweep_command(runtime)
        return run_verify_command(runtime, oracle_n_max=args.oracle_n_max)
    except GibbsMixingError as exc:
        logger.error("命令执行失败: command=%s, error=%s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
