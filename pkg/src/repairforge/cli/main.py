import argparse
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import TextIO

from pydantic import BaseModel, Field, PositiveInt

from src.repairforge.canonical.algorithm import (
    BuildMode,
    BuildOptions,
    CanonicalBuilder,
)
from src.repairforge.canonical.fast_paths import canonical_one_fd, canonical_one_key
from src.repairforge.canonical.worlds import canonical_from_worlds
from src.repairforge.config import Settings, config, log_level_from_env
from src.repairforge.conflicts.hypergraph import build_hypergraph
from src.repairforge.constraints.classify import certify_single_dependency
from src.repairforge.constraints.dsl import parse_constraints, render_constraints
from src.repairforge.constraints.model import ConstraintKind, DenialConstraint
from src.repairforge.core.facts_parser import parse_facts, serialize_facts
from src.repairforge.core.model import Database
from src.repairforge.disjunctive.database import (
    DisjunctiveDatabase,
    minimal_models,
    parse_disjunctive,
    size,
)
from src.repairforge.errors import ClassificationError, RepairForgeError, UsageError
from src.repairforge.families.generators import (
    FamilyKind,
    FamilySpec,
    expected_sizes,
    generate,
)
from src.repairforge.repairs.enumeration import (
    RepairKind,
    RepairSet,
    brute_force_repairs,
    repairs_of,
)
from src.repairforge.services.formatting import (
    dump_json,
    hypergraph_dump,
    render_check,
    render_disjunctive_db,
    render_error,
    render_repairs,
)
from src.schemas.outputs import BuildStats, CheckReport

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2

SEMANTICS = [k.value for k in RepairKind]


class FastPath(str, Enum):
    OFF = "off"
    AUTO = "auto"
    FORCE_KEY = "force-key"
    FORCE_FD = "force-fd"


class CommandSpec(BaseModel):
    """One parsed invocation."""
    subcommand: str
    facts_path: Path | None = None
    constraints_path: Path | None = None
    disjdb_path: Path | None = None
    semantics: RepairKind = Field(default=RepairKind.S_REPAIR)
    mode: BuildMode = Field(default=BuildMode.EAGER_SUBSUMPTION)
    fast_path: FastPath = Field(default=FastPath.OFF)
    output_format: str = Field(default="text")
    oracle: bool = False
    minimized: bool = False
    max_facts: PositiveInt | None = None
    max_disjunctions: PositiveInt | None = None
    max_worlds: PositiveInt | None = None
    family: FamilyKind | None = None
    n: PositiveInt = Field(default=1)
    sizes: list[PositiveInt] = Field(default_factory=list)
    out: Path | None = None

    def settings(self) -> Settings:
        return config.with_overrides(
            max_facts=self.max_facts,
            max_disjunctions=self.max_disjunctions,
            max_worlds=self.max_worlds,
        )

    def family_spec(self) -> FamilySpec:
        if self.family is None:
            raise UsageError(f"{self.subcommand} needs --family")
        return FamilySpec(family=self.family, n=self.n, clique_sizes=self.sizes)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _sizes(text: str) -> list[int]:
    return [_positive(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument(
        "--format", dest="output_format", choices=["text", "json"], default="text"
    )
    common.add_argument("--max-facts", type=_positive)
    common.add_argument("--max-disjunctions", type=_positive)
    common.add_argument("--max-worlds", type=_positive)

    instance = _ArgumentParser(add_help=False)
    instance.add_argument("-f", "--facts", dest="facts_path", type=Path)
    instance.add_argument("-c", "--constraints", dest="constraints_path", type=Path)
    instance.add_argument("--semantics", choices=SEMANTICS, default="s")

    construction = _ArgumentParser(add_help=False)
    construction.add_argument(
        "--mode", choices=[m.value for m in BuildMode], default="eager"
    )
    construction.add_argument(
        "--fast-path",
        dest="fast_path",
        choices=[f.value for f in FastPath],
        default="off",
    )

    family = _ArgumentParser(add_help=False)
    family.add_argument("--family", choices=[f.value for f in FamilyKind])
    family.add_argument("--n", type=_positive, default=1)
    family.add_argument("--sizes", type=_sizes, default=[])

    parser = _ArgumentParser(
        prog="repairforge",
        description=(
            "Canonical disjunctive databases and repairs of inconsistent databases."
        ),
    )
    sub = parser.add_subparsers(
        dest="subcommand", required=True, parser_class=_ArgumentParser
    )
    building = [common, instance, construction]
    sub.add_parser("build", parents=building, help="emit the canonical database")
    repairs = sub.add_parser(
        "repairs", parents=[common, instance], help="enumerate repairs"
    )
    repairs.add_argument("--from-disjdb", dest="disjdb_path", type=Path)
    repairs.add_argument(
        "--oracle", action="store_true", help="use the exhaustive oracle"
    )
    sub.add_parser("check", parents=building, help="compare against the oracle")
    sub.add_parser("stats", parents=building, help="build statistics")
    dump = sub.add_parser(
        "dump-hypergraph", parents=[common, instance], help="conflict hypergraph"
    )
    dump.add_argument("--minimized", action="store_true")
    gen = sub.add_parser(
        "gen", parents=[common, family], help="write a family instance"
    )
    gen.add_argument(
        "--out", type=Path, required=True, help="path prefix for .facts and .dc"
    )
    expect = sub.add_parser("expect", parents=[common, family], help="closed-form size")
    expect.add_argument("--semantics", choices=SEMANTICS, default="s")
    return parser


def parse_command(argv: list[str]) -> CommandSpec:
    namespace = build_parser().parse_args(argv)
    return CommandSpec(**{k: v for k, v in vars(namespace).items() if v is not None})


def _load_instance(spec: CommandSpec) -> tuple[Database, list[DenialConstraint]]:
    if spec.facts_path is None or spec.constraints_path is None:
        raise UsageError(f"{spec.subcommand} needs -f FACTS and -c CONSTRAINTS")
    with spec.facts_path.open(encoding="utf-8") as f:
        db = parse_facts(f)
    with spec.constraints_path.open(encoding="utf-8") as f:
        constraints = parse_constraints(f, db.schema)
    return db, constraints


def _build(
    db: Database,
    constraints: list[DenialConstraint],
    spec: CommandSpec,
    settings: Settings,
) -> tuple[DisjunctiveDatabase, BuildStats]:
    if spec.semantics is RepairKind.C_REPAIR:
        worlds = repairs_of(
            db,
            constraints,
            RepairKind.C_REPAIR,
            settings.max_facts,
            settings.max_worlds,
        )
        dd = canonical_from_worlds(worlds, settings.max_disjunctions)
        return dd, _summary(dd, "worlds", spec.mode)

    if spec.fast_path is not FastPath.OFF:
        dependency = certify_single_dependency(constraints, db.schema)
        if dependency is None and spec.fast_path is not FastPath.AUTO:
            raise ClassificationError("the constraints do not form a single key or FD")
        if dependency is not None:
            is_key = dependency.kind is ConstraintKind.KEY
            if spec.fast_path is FastPath.FORCE_KEY and not is_key:
                raise ClassificationError(f"{dependency} is not a key")
            if is_key and spec.fast_path is not FastPath.FORCE_FD:
                logging.info("build: one-key fast path for %s", dependency)
                dd = canonical_one_key(db, dependency)
                return dd, _summary(dd, "one_key", spec.mode)
            logging.info("build: one-FD fast path for %s", dependency)
            dd = canonical_one_fd(db, dependency, settings.max_disjunctions)
            return dd, _summary(dd, "one_fd", spec.mode)

    options = BuildOptions(mode=spec.mode, max_disjunctions=settings.max_disjunctions)
    builder = CanonicalBuilder(db, constraints, options)
    dd = builder.build()
    return dd, builder.stats


def _summary(dd: DisjunctiveDatabase, path: str, mode: BuildMode) -> BuildStats:
    return BuildStats(
        mode=mode.value,
        path=path,
        final_disjunctions=len(dd),
        final_size=size(dd),
    )


def _cmd_build(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    db, constraints = _load_instance(spec)
    dd, _ = _build(db, constraints, spec, settings)
    stdout.write(render_disjunctive_db(dd, spec.output_format))
    return EXIT_OK


def _cmd_stats(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    db, constraints = _load_instance(spec)
    _, stats = _build(db, constraints, spec, settings)
    stdout.write(dump_json(stats))
    return EXIT_OK


def _cmd_repairs(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    if spec.disjdb_path is not None:
        with spec.disjdb_path.open(encoding="utf-8") as f:
            dd = parse_disjunctive(f)
        models = minimal_models(dd, settings.max_facts, settings.max_worlds)
        repairs = RepairSet(spec.semantics, tuple(models), Database.of(dd.facts()))
    else:
        db, constraints = _load_instance(spec)
        if spec.oracle:
            repairs = brute_force_repairs(
                db, constraints, spec.semantics, settings.brute_force_cap
            )
        else:
            repairs = repairs_of(
                db, constraints, spec.semantics, settings.max_facts, settings.max_worlds
            )
    stdout.write(render_repairs(repairs, spec.output_format))
    return EXIT_OK


def _cmd_check(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    db, constraints = _load_instance(spec)
    worlds = brute_force_repairs(
        db, constraints, spec.semantics, settings.brute_force_cap
    )
    expected = canonical_from_worlds(worlds, settings.max_disjunctions)
    actual, _ = _build(db, constraints, spec, settings)
    status = "MATCH" if expected == actual else "MISMATCH"
    if status == "MISMATCH":
        logging.warning("check: canonical database differs from the oracle")
    report = CheckReport(
        status=status,
        kind=spec.semantics.value,
        worlds=len(worlds),
        expected_disjunctions=len(expected),
        actual_disjunctions=len(actual),
    )
    stdout.write(render_check(report, spec.output_format))
    return EXIT_OK if status == "MATCH" else EXIT_MISMATCH


def _cmd_dump_hypergraph(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    db, constraints = _load_instance(spec)
    graph = build_hypergraph(db, constraints)
    if spec.minimized:
        graph = graph.minimized()
    stdout.write(dump_json(hypergraph_dump(graph)))
    return EXIT_OK


def _cmd_gen(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    db, constraints = generate(spec.family_spec())
    if spec.out is None:
        raise UsageError("gen needs --out PREFIX")
    facts_path = spec.out.with_name(spec.out.name + ".facts")
    constraints_path = spec.out.with_name(spec.out.name + ".dc")
    facts_path.parent.mkdir(parents=True, exist_ok=True)
    facts_path.write_text(serialize_facts(db), encoding="utf-8")
    header = "".join(f"#relation {name}/{db.schema[name]}.\n" for name in db.relations)
    constraints_path.write_text(
        header + render_constraints(constraints), encoding="utf-8"
    )
    stdout.write(f"{facts_path}\n{constraints_path}\n")
    return EXIT_OK


def _cmd_expect(spec: CommandSpec, settings: Settings, stdout: TextIO) -> int:
    stdout.write(f"{expected_sizes(spec.family_spec(), spec.semantics)}\n")
    return EXIT_OK


_COMMANDS = {
    "build": _cmd_build,
    "stats": _cmd_stats,
    "repairs": _cmd_repairs,
    "check": _cmd_check,
    "dump-hypergraph": _cmd_dump_hypergraph,
    "gen": _cmd_gen,
    "expect": _cmd_expect,
}


def _requested_format(argv: list[str]) -> str:
    for i, arg in enumerate(argv):
        if arg == "--format=json":
            return "json"
        if arg == "--format" and argv[i + 1 : i + 2] == ["json"]:
            return "json"
    return "text"


def run(
    argv: list[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Executes one command and returns its exit status."""
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    fmt = _requested_format(argv)
    try:
        spec = parse_command(argv)
        return _COMMANDS[spec.subcommand](spec, spec.settings(), stdout)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    except RepairForgeError as e:
        stderr.write(render_error(e, e.details(), fmt))
    except (OSError, ValueError) as e:
        stderr.write(render_error(e, {}, fmt))
    return EXIT_ERROR


def main():
    logging.basicConfig(
        level=log_level_from_env(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
