"""命令行入口：generate / train / eval / experiment。

退出码：
- 0 成功
- 1 参数、配置、任务不匹配或边槽不足（k_max 过小）
- 2 数据文件或检查点损坏、退化重采样耗尽
- 3 其它内部不变量失败
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

import structlog
from pydantic import ValidationError

from hypergraph_refiner.application.exceptions import (
    CheckpointFormatError,
    ConfigError,
    DataFormatError,
    DegeneracyExhaustedError,
    TaskMismatchError,
    UsageError,
)
from hypergraph_refiner.application.services.dataset_service import (
    OracleChoice,
    TaskParams,
    generate_dataset,
)
from hypergraph_refiner.application.services.evaluation_service import check_task, evaluate, task_mode
from hypergraph_refiner.application.services.experiment_service import (
    ExperimentPlan,
    experiment_names,
    run_experiment,
)
from hypergraph_refiner.application.services.training_service import infer_k_max, train_run
from hypergraph_refiner.cli.config_file import TASK_ALIASES, RunConfig, load_model, load_run_config
from hypergraph_refiner.common.errors import HypergraphError
from hypergraph_refiner.config import Settings, configure_logging, get_logger
from hypergraph_refiner.domain.exceptions import CapacityError, InvalidInputError
from hypergraph_refiner.domain.services.sampling import PointDistribution
from hypergraph_refiner.domain.value_objects import TaskKind
from hypergraph_refiner.infrastructure.checkpoint_file import load_checkpoint, save_checkpoint, sidecar_path
from hypergraph_refiner.infrastructure.csv_tables import (
    METRICS_HEADER,
    append_metrics_row,
    format_metrics_row,
    write_table,
    write_train_log,
)
from hypergraph_refiner.infrastructure.dataset_file import Dataset, DatasetWriter, read_dataset
from hypergraph_refiner.model.params import RefinerConfig

logger = get_logger(__name__)

SPLITS = ("train", "val", "test")

_USAGE_ERRORS = (ConfigError, UsageError, TaskMismatchError, InvalidInputError, CapacityError)
_DATA_ERRORS = (DegeneracyExhaustedError, DataFormatError, CheckpointFormatError)


class _Parser(argparse.ArgumentParser):
    """参数错误统一以退出码 1 结束。"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = _Parser(prog="hyperrefine", description="Recurrent hypergraph refiner for set-to-hypergraph tasks")
    parser.add_argument("--log-level", default=None, help="覆盖 LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("generate", help="生成 train/val/test 数据集文件")
    gen.add_argument("--task", choices=sorted(TASK_ALIASES), required=True)
    gen.add_argument("--dist", type=PointDistribution, choices=list(PointDistribution), default=None)
    gen.add_argument("--n", type=int, default=None, help="固定集合大小")
    gen.add_argument("--n-min", type=int, default=None)
    gen.add_argument("--n-max", type=int, default=None)
    gen.add_argument("--dim", type=int, default=3)
    gen.add_argument("--c-min", type=int, default=2, help="partition 任务的簇数下界")
    gen.add_argument("--c-max", type=int, default=6)
    gen.add_argument("--jitter", type=float, default=0.3)
    gen.add_argument("--oracle", type=OracleChoice, choices=list(OracleChoice), default=OracleChoice.AUTO)
    gen.add_argument("--count", type=int, default=1000, help="三个切分的总条数（80/10/10）")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, default=None)
    gen.add_argument("--threads", type=int, default=None)

    train = commands.add_parser("train", help="按配置文件训练并写出检查点与训练日志")
    train.add_argument("config", type=Path)
    train.add_argument("--threads", type=int, default=None)

    ev = commands.add_parser("eval", help="评测检查点（或 oracle）并追加一行指标")
    ev.add_argument("--checkpoint", type=Path, default=None)
    ev.add_argument("--data", type=Path, required=True)
    ev.add_argument("--task", choices=sorted(TASK_ALIASES), default=None)
    ev.add_argument("--oracle", action="store_true", help="以目标作为预测，用于检查流水线")
    ev.add_argument("--t-total", type=int, default=None, help="覆盖检查点里的 T_total")
    ev.add_argument("--split", default=None, help="写入指标表的切分名（默认取数据文件名）")
    ev.add_argument("--out", type=Path, default=Path("metrics.csv"))
    ev.add_argument("--threads", type=int, default=None)

    exp = commands.add_parser("experiment", help="运行一个桌面规模实验并写出 CSV")
    exp.add_argument("name", help=f"one of: {', '.join(experiment_names())}")
    exp.add_argument("--plan", type=Path, default=None, help="key = value 形式的 ExperimentPlan 覆盖项")
    exp.add_argument("--out", type=Path, default=Path("experiments"))
    exp.add_argument("--threads", type=int, default=None)

    return parser.parse_args(argv)


def _threads(args: argparse.Namespace, settings: Settings, configured: int | None = None) -> int:
    threads = args.threads or configured or settings.threads
    if threads < 1:
        raise UsageError(f"--threads must be >= 1, got {threads}")
    return threads


def _split_counts(count: int) -> tuple[int, int, int]:
    if count < 3:
        raise UsageError(f"--count must be at least 3, got {count}")
    held_out = max(1, count // 10)
    return count - 2 * held_out, held_out, held_out


def _write_splits(
    params: TaskParams, count: int, seed: int, paths: dict[str, Path], *, threads: int
) -> list[Path]:
    """按 80/10/10 写出给定的切分；第 i 个切分使用 seed + i。"""
    written = []
    for offset, (split, split_count) in enumerate(zip(SPLITS, _split_counts(count), strict=True)):
        if split not in paths:
            continue
        path = paths[split]
        with DatasetWriter(path, task=params.task, dim=params.dim) as writer:
            generate_dataset(params, split_count, seed + offset, writer, threads=threads)
        written.append(path)
    return written


def cmd_generate(args: argparse.Namespace, settings: Settings) -> int:
    task, fixed_dim = TASK_ALIASES[args.task]
    if args.n is not None and (args.n_min is not None or args.n_max is not None):
        raise UsageError("use either --n or --n-min/--n-max")
    n_min = args.n if args.n is not None else args.n_min
    n_max = args.n if args.n is not None else args.n_max
    if n_min is None or n_max is None:
        raise UsageError("set size is required (--n, or both --n-min and --n-max)")
    dim = fixed_dim or args.dim
    fields: dict[str, object] = {"task": task, "dim": dim, "n_min": n_min, "n_max": n_max, "oracle": args.oracle}
    fields |= {"c_min": args.c_min, "c_max": args.c_max, "jitter": args.jitter}
    if args.dist is not None:
        fields["dist"] = args.dist
    elif task is TaskKind.DELAUNAY:
        fields["dist"] = PointDistribution.UNIT_SQUARE
    try:
        params = TaskParams.model_validate(fields)
    except ValidationError as exc:
        raise UsageError(str(exc.errors()[0]["msg"]).removeprefix("Value error, ")) from None

    out = settings.resolve(args.out) if args.out is not None else settings.data_dir
    paths = {split: out / f"{split}.hset" for split in SPLITS}
    for path in _write_splits(params, args.count, args.seed, paths, threads=_threads(args, settings)):
        print(path)
    return 0


def _read(path: Path) -> Dataset:
    dataset = read_dataset(path)
    if not dataset.records:
        raise UsageError(f"{path}: dataset has no records")
    return dataset


def _generate_missing(run: RunConfig, paths: dict[str, Path], *, threads: int) -> None:
    """配置里给了集合大小时，补齐不存在的数据文件。"""
    missing = {split: path for split, path in paths.items() if not path.exists()}
    if not missing or run.n_range() is None:
        return
    written = _write_splits(run.task_params(), run.count, run.seed, missing, threads=threads)
    logger.info("datasets_generated", paths=[str(path) for path in written])


def cmd_train(args: argparse.Namespace, settings: Settings) -> int:
    run = load_run_config(args.config)
    threads = _threads(args, settings, run.threads)
    paths = {"train": settings.resolve(run.train_data), "val": settings.resolve(run.val_data)}
    if run.test_data is not None:
        paths["test"] = settings.resolve(run.test_data)
    _generate_missing(run, paths, threads=threads)

    datasets = {split: _read(path) for split, path in paths.items()}
    train, val, test = datasets["train"], datasets["val"], datasets.get("test")
    for split, dataset in datasets.items():
        check_task(run.task_kind, dataset.task)
        if dataset.dim != train.dim:
            raise UsageError(f"train data is {train.dim}-dimensional, {split} data is {dataset.dim}-dimensional")

    model = RefinerConfig(
        in_features=train.dim,
        d=run.d,
        k_max=infer_k_max(train.records) if run.k_max == "auto" else run.k_max,
        mode=task_mode(run.task_kind),
        sharing=run.sharing,
        steps=run.t_total,
    )
    config = run.train_config()
    result = train_run(train.records, val.records, model, config, threads=threads)

    out_dir = settings.resolve(run.out_dir)
    checkpoint = out_dir / "model.hrf"
    save_checkpoint(checkpoint, result.params, task=run.task_kind, t_total=run.t_total)
    write_train_log(out_dir / "train_log.csv", result.log)
    logger.info(
        "checkpoint_written",
        path=str(checkpoint),
        sidecar=str(sidecar_path(checkpoint)),
        best_epoch=result.best_epoch,
    )
    print(f"best_val_f1={result.best_val_f1!r} epoch={result.best_epoch}")

    if test is not None:
        row = evaluate(test.records, result.params, run.task_kind, run.t_total, split="test", threads=threads)
        append_metrics_row(out_dir / "metrics.csv", row)
        logger.info("evaluation_finished", split="test", f1=row.f1)
        print(f"test_f1={row.f1!r}")
    return 0


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    dataset = _read(settings.resolve(args.data))
    requested = TASK_ALIASES[args.task][0] if args.task else None
    if args.oracle:
        params, t_total = None, 0
        task = requested or dataset.task
    else:
        if args.checkpoint is None:
            raise UsageError("eval needs --checkpoint unless --oracle is given")
        checkpoint = load_checkpoint(settings.resolve(args.checkpoint))
        if requested is not None:
            check_task(checkpoint.task, requested)
        params, task = checkpoint.params, checkpoint.task
        t_total = args.t_total or checkpoint.t_total
    check_task(task, dataset.task)

    split = args.split or Path(args.data).stem
    row = evaluate(dataset.records, params, task, t_total, split=split, threads=_threads(args, settings))
    append_metrics_row(settings.resolve(args.out), row)
    logger.info("evaluation_finished", split=split, f1=row.f1, oracle=args.oracle)
    print(",".join(METRICS_HEADER))
    print(format_metrics_row(row))
    return 0


def cmd_experiment(args: argparse.Namespace, settings: Settings) -> int:
    plan = load_model(ExperimentPlan, args.plan) if args.plan is not None else ExperimentPlan()
    if args.threads is not None:
        plan = plan.model_copy(update={"threads": _threads(args, settings)})
    table = run_experiment(args.name, plan)
    path = settings.resolve(args.out) / f"{table.name.value}.csv"
    write_table(path, table.header, table.rows, comment=table.comment)
    logger.info("experiment_written", experiment=table.name.value, path=str(path), rows=len(table.rows))
    print(path)
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "generate": cmd_generate,
    "train": cmd_train,
    "eval": cmd_eval,
    "experiment": cmd_experiment,
}


def _exit_code(exc: HypergraphError) -> int:
    if isinstance(exc, _USAGE_ERRORS):
        return 1
    if isinstance(exc, _DATA_ERRORS):
        return 2
    return 3


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse_args(argv)
    try:
        settings = Settings() if args.log_level is None else Settings(log_level=args.log_level)
    except ValidationError as exc:
        print(f"error: invalid settings ({exc.errors()[0]['msg']})", file=sys.stderr)
        return 1
    configure_logging(log_level=settings.log_level)

    with structlog.contextvars.bound_contextvars(command=args.command):
        try:
            return COMMANDS[args.command](args, settings)
        except HypergraphError as exc:
            code = _exit_code(exc)
            logger.error("command_failed", error=type(exc).__name__, exit_code=code)
            print(f"error: {exc}", file=sys.stderr)
            return code


if __name__ == "__main__":
    sys.exit(main())
