"""Command line front end; exit code 0 on success, 1 on a failed invariant, 2 on bad input"""
import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from analysis.arrangement import (
    MonotonePath,
    UnboundedFaceException,
    build_arrangement,
    longest_monotone_path,
    path_length,
    verify_monotone_path,
)
from analysis.pseudodisc import (
    ConstructionFailedException,
    NestedMembersException,
    PseudoDiscFamily,
    build_tverberg_system,
    common_tangents,
    hull_arcs_contiguous,
    three_ray_construction,
    verify_pseudodisc_family,
)
from analysis.reductions import (
    InvalidAntichainException,
    PerturbationException,
    SeparatedConfiguration,
    SeparationFailedException,
    UnsortedLinesException,
    WedgeSearchException,
    antichain_to_lines,
    dualize_configuration,
    lines_to_antichain,
    path_to_points,
    points_to_path,
)
from analysis.separable import (
    DilworthCertificateException,
    SubsetFamily,
    enumerate_separable,
    family_from_json,
    k_sets,
    layer_sizes,
)
from broker import (
    ExperimentBroker,
    ExperimentSpec,
    InvariantViolationException,
    load_instance_file,
)
from config import ConfigProvider
from db.entity import Pipeline
from geometry.core import (
    DegenerateArrangementException,
    GeneralPositionException,
    LineSet,
    ParallelLinesException,
    PointOnLineException,
    PointSet,
    VerticalLineException,
)
from geometry.fileio import (
    InstanceFileException,
    line_set_to_json,
    point_set_to_json,
    read_json,
    write_text,
)
from geometry.generators import (
    NAMED_EXAMPLES,
    named_example,
    random_lines,
    random_points,
    random_separated,
)
from render.svg import (
    arrangement_overlay,
    configuration_overlay,
    family_overlay,
    render_svg,
)
from util.helpers import CustomLogger, indices_of

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2

INVARIANT_ERRORS = (
    InvariantViolationException,
    SeparationFailedException,
    WedgeSearchException,
    DilworthCertificateException,
    ConstructionFailedException,
)
INPUT_ERRORS = (
    InstanceFileException,
    GeneralPositionException,
    DegenerateArrangementException,
    VerticalLineException,
    ParallelLinesException,
    PointOnLineException,
    InvalidAntichainException,
    UnsortedLinesException,
    NestedMembersException,
    UnboundedFaceException,
    PerturbationException,
    ValueError,
)


def _output(args: argparse.Namespace, document: Dict[str, Any]) -> None:
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_text(args.out, text)


def _svg(args: argparse.Namespace, overlay) -> None:
    if args.emit_svg is not None:
        write_text(args.emit_svg, render_svg(overlay))


def _seed(args: argparse.Namespace) -> int:
    return 0 if args.seed is None else args.seed


def _require_n(args: argparse.Namespace) -> int:
    if args.n is None:
        raise ValueError("--n is required")
    return args.n


def _read(path: Optional[str], expected: type):
    if path is None:
        raise ValueError("--in is required")
    instance = load_instance_file(path)
    if not isinstance(instance, expected):
        raise InstanceFileException(f"{path} holds a {type(instance).__name__}, expected {expected.__name__}")
    return instance


def _read_configuration(path: Optional[str]) -> SeparatedConfiguration:
    if path is None:
        raise ValueError("--in is required")
    return SeparatedConfiguration.from_json(read_json(path))


def _lines_for(args: argparse.Namespace, config: ConfigProvider) -> LineSet:
    if args.input is not None:
        return _read(args.input, LineSet)
    return random_lines(_require_n(args), _seed(args), config.coordinate_range, config.max_retries)


def cmd_gen(args, logger: CustomLogger, config: ConfigProvider) -> int:
    kind = args.kind
    if kind == "random-points":
        points = random_points(_require_n(args), _seed(args), config.coordinate_range, config.max_retries, logger)
        _output(args, point_set_to_json(points))
        _svg(args, family_overlay(SubsetFamily(points, [])))
    elif kind == "random-lines":
        lines = random_lines(_require_n(args), _seed(args), config.coordinate_range, config.max_retries, logger)
        _output(args, line_set_to_json(lines))
        _svg(args, arrangement_overlay(build_arrangement(lines.lines)))
    elif kind == "random-separated":
        separated = random_separated(_require_n(args), _seed(args), config.coordinate_range, config.max_retries, logger)
        _output(args, separated.to_json())
        _svg(args, configuration_overlay(separated))
    elif kind == "three-ray":
        _, family = three_ray_construction(_require_n(args), _seed(args), config.max_retries, logger)
        _output(args, family.to_json())
        _svg(args, family_overlay(family))
    else:
        if args.name is None:
            raise ValueError(f"--name is required, choose from {sorted(NAMED_EXAMPLES)}")
        instance = named_example(args.name)
        if isinstance(instance, PointSet):
            _output(args, point_set_to_json(instance))
            _svg(args, family_overlay(SubsetFamily(instance, [])))
        elif isinstance(instance, LineSet):
            _output(args, line_set_to_json(instance))
            _svg(args, arrangement_overlay(build_arrangement(instance.lines)))
        else:
            _output(args, instance.to_json())
            _svg(args, family_overlay(instance))
    logger.success(f"Generated {kind}.", CustomLogger.LEVEL_DEBUG)
    return EXIT_OK


def cmd_separable(args, logger: CustomLogger, config: ConfigProvider) -> int:
    points = _read(args.input, PointSet)
    if args.action == "ksets":
        if args.k is None:
            family = enumerate_separable(points)
            logger.table([["k", "|A_k|"]] + [[k, size] for k, size in layer_sizes(family).items()])
            _output(args, {"layers": {str(k): size for k, size in layer_sizes(family).items()}})
        else:
            members = k_sets(points, args.k)
            _output(args, SubsetFamily(points, members).to_json())
        return EXIT_OK

    broker = ExperimentBroker(logger, config)
    pipeline = Pipeline.ENUMERATE if args.action == "enumerate" else Pipeline.ANTICHAIN
    outcome = broker.run_outcome(pipeline, points, args.seed, args.oracle, args.svg_prefix)
    if args.action == "enumerate":
        _output(args, outcome.family.to_json())
        _svg(args, family_overlay(outcome.family))
    else:
        result = outcome.antichain
        document = SubsetFamily(points, result.antichain).to_json()
        document["chains"] = [[indices_of(member) for member in chain] for chain in result.chains]
        _output(args, document)
        _svg(args, family_overlay(SubsetFamily(points, result.antichain)))
    return EXIT_OK


def cmd_arr(args, logger: CustomLogger, config: ConfigProvider) -> int:
    lines = _lines_for(args, config)
    arrangement = build_arrangement(lines.lines)
    if args.action == "build":
        _output(
            args,
            {
                "lines": line_set_to_json(lines),
                "vertices": [
                    {"lines": list(key), "point": [str(p.x), str(p.y)]}
                    for key, p in sorted(arrangement.vertices.items())
                ],
            },
        )
        _svg(args, arrangement_overlay(arrangement))
        return EXIT_OK
    if args.action == "longest-path":
        broker = ExperimentBroker(logger, config)
        outcome = broker.run_outcome(Pipeline.LONGEST_PATH, lines, args.seed, args.oracle, args.svg_prefix)
        path = outcome.path
        document = path.to_json()
        document["length"] = outcome.record.lam
        _output(args, document)
        _svg(args, arrangement_overlay(arrangement, path))
        return EXIT_OK

    if args.path is None:
        raise ValueError("--path is required")
    path = MonotonePath.from_json(read_json(args.path))
    valid = verify_monotone_path(path, arrangement)
    _output(args, {"valid": valid, "length": path_length(path) if valid else None})
    if not valid:
        logger.failure(f"{args.path} is not a monotone path of {lines.label or 'the arrangement'}")
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_reduce(args, logger: CustomLogger, config: ConfigProvider) -> int:
    action = args.action
    if action == "antichain-to-lines":
        if args.input is None:
            raise ValueError("--in is required")
        family = family_from_json(read_json(args.input))
        result = antichain_to_lines(family.ambient, family.members, logger)
        _output(args, result.to_json())
        _svg(args, configuration_overlay(result))
    elif action == "lines-to-antichain":
        config_in = _read_configuration(args.input)
        family = SubsetFamily(config_in.points, lines_to_antichain(config_in))
        _output(args, family.to_json())
        _svg(args, family_overlay(family))
    elif action == "path-to-points":
        lines = _read(args.input, LineSet)
        arrangement = build_arrangement(lines.lines)
        path = (
            MonotonePath.from_json(read_json(args.path))
            if args.path is not None
            else longest_monotone_path(arrangement)
        )
        result = path_to_points(path, arrangement, logger)
        _output(args, result.to_json())
        _svg(args, configuration_overlay(result))
    elif action == "points-to-path":
        traced = points_to_path(
            _read_configuration(args.input), _seed(args), logger, config.perturbation_denominator
        )
        document = traced.path.to_json()
        document["length"] = path_length(traced.path)
        document["lines"] = line_set_to_json(traced.configuration.lines)
        document["perturbed"] = traced.perturbed
        _output(args, document)
        _svg(args, arrangement_overlay(traced.arrangement, traced.path))
    else:
        result = dualize_configuration(_read_configuration(args.input))
        _output(args, result.to_json())
        _svg(args, configuration_overlay(result))
    return EXIT_OK


def _family_for(args, config: ConfigProvider) -> PseudoDiscFamily:
    if args.input is not None:
        return PseudoDiscFamily.of(_read(args.input, SubsetFamily))
    return three_ray_construction(_require_n(args), _seed(args), config.max_retries)[1]


def cmd_pd(args, logger: CustomLogger, config: ConfigProvider) -> int:
    action = args.action
    if action == "three-ray":
        family = three_ray_construction(_require_n(args), _seed(args), config.max_retries, logger)[1]
        _output(args, family.to_json())
        _svg(args, family_overlay(family))
        return EXIT_OK

    family = _family_for(args, config)
    if action == "verify":
        report = verify_pseudodisc_family(family)
        _output(
            args,
            {
                "passed": report.passed,
                "empty_members": report.empty_members,
                "not_convexly_cut": report.not_convexly_cut,
                "disconnected_pairs": [list(pair) for pair in report.disconnected_pairs],
            },
        )
        _svg(args, family_overlay(family))
        if not report.passed:
            logger.failure(report)
            return EXIT_INVARIANT
        return EXIT_OK
    if action == "tangents":
        if args.pair is None:
            raise ValueError("--pair I J is required")
        i, j = args.pair
        if not (0 <= i < len(family) and 0 <= j < len(family)):
            raise ValueError(f"Pair {i} {j} out of range for {len(family)} members")
        a, b = family.members[i], family.members[j]
        report = common_tangents(a, b, family.ambient, exhaustive=args.oracle)
        _output(
            args,
            {
                "first_kind": [[line.tail, line.head] for line in report.first_kind],
                "second_kind": [[line.tail, line.head] for line in report.second_kind],
                "weight": str(report.weight),
                "case": report.tangent_case,
                "contiguous": hull_arcs_contiguous(a, b, family.ambient),
            },
        )
        if report.weight != 1:
            logger.failure(f"Tangent weight of members {i} and {j} is {report.weight}")
            return EXIT_INVARIANT
        return EXIT_OK

    if args.emit_matrix is not None:
        write_text(args.emit_matrix, build_tverberg_system(family).to_text())
    broker = ExperimentBroker(logger, config)
    record = broker.run_pseudodisc_suite(family, args.seed, args.svg_prefix)
    _output(
        args,
        {"members": record.family_size, "rows": record.bound_rows, "passed": record.passed},
    )
    return EXIT_OK


def cmd_chain(args, logger: CustomLogger, config: ConfigProvider) -> int:
    broker = ExperimentBroker(logger, config)
    if args.batch is not None:
        specs = [
            ExperimentSpec(
                Pipeline.CHAIN,
                "random-lines",
                _require_n(args),
                _seed(args) + offset,
                svg_prefix=None if args.svg_prefix is None else f"{args.svg_prefix}-{offset}",
                oracle=args.oracle,
            )
            for offset in range(args.batch)
        ]
        records = broker.run_batch(specs, args.workers)
        _output(args, {"records": [_record_json(record) for record in records]})
        return EXIT_OK if all(record.passed for record in records) else EXIT_INVARIANT

    lines = _lines_for(args, config)
    seed = None if args.input is not None else _seed(args)
    record = broker.run_chain(lines, seed, args.oracle, args.svg_prefix)
    _output(args, _record_json(record))
    return EXIT_OK


def _record_json(record) -> Dict[str, Any]:
    values = record.to_values()
    values["pipeline"] = record.pipeline.value
    return values


def cmd_report(args, logger: CustomLogger, config: ConfigProvider) -> int:
    broker = ExperimentBroker(logger, config)
    pipeline = None if args.pipeline is None else Pipeline(args.pipeline)
    records = broker.get_records(pipeline, args.limit)
    rows: List[List[Any]] = [["id", "pipeline", "label", "n", "g>=", "h>=", "lambda", "rows", "|F|", "result"]]
    for record in records:
        rows.append(
            [
                record.id,
                record.pipeline.value,
                record.label,
                record.n,
                record.g_lower,
                record.h_lower,
                record.lam,
                record.bound_rows,
                record.family_size,
                "PASS" if record.passed else "FAIL",
            ]
        )
    logger.table(rows)
    logger.info(f"{len(records)} of {broker.count_records()} stored record(s) shown.")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for generators and perturbations.")
    common.add_argument("--n", type=int, default=None, help="Instance size.")
    common.add_argument("--out", default=None, help="Output JSON path (stdout if omitted).")
    common.add_argument("--emit-svg", dest="emit_svg", default=None, help="Write a figure of the result here.")
    common.add_argument(
        "--svg-prefix", dest="svg_prefix", default=None, help="Write one figure per pipeline stage."
    )
    common.add_argument("--oracle", action="store_true", help="Enable brute-force cross-checks.")
    common.add_argument("--in", dest="input", default=None, help="Input instance file.")
    common.add_argument("--verbose", action="store_true", help="Debug output.")
    common.add_argument(
        "--coordinate-range", dest="coordinate_range", type=int, default=None, help="Override [GENERATOR] coordinaterange."
    )
    common.add_argument(
        "--max-retries", dest="max_retries", type=int, default=None, help="Override [GENERATOR] maxretries."
    )
    common.add_argument("--db", dest="database_path", default=None, help="Override [OUTPUT] databasepath.")

    parser = argparse.ArgumentParser(description="Separable antichains, monotone paths and convex pseudo-discs.")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="Generate instances.")
    gen.add_argument(
        "kind", choices=["random-points", "random-lines", "random-separated", "three-ray", "named-example"]
    )
    gen.add_argument("--name", default=None, help=f"Named example: {', '.join(sorted(NAMED_EXAMPLES))}.")
    gen.set_defaults(handler=cmd_gen)

    separable = commands.add_parser("separable", parents=[common], help="Separable subsets of a point set.")
    separable.add_argument("action", choices=["enumerate", "antichain", "ksets"])
    separable.add_argument("--k", type=int, default=None, help="Subset size for ksets.")
    separable.set_defaults(handler=cmd_separable)

    arr = commands.add_parser("arr", parents=[common], help="Line arrangements and monotone paths.")
    arr.add_argument("action", choices=["build", "longest-path", "verify-path"])
    arr.add_argument("--path", default=None, help="Path file for verify-path.")
    arr.set_defaults(handler=cmd_arr)

    reduce = commands.add_parser("reduce", parents=[common], help="Constructions between the problems.")
    reduce.add_argument(
        "action",
        choices=["antichain-to-lines", "lines-to-antichain", "path-to-points", "points-to-path", "dualize"],
    )
    reduce.add_argument("--path", default=None, help="Path file for path-to-points (longest path if omitted).")
    reduce.set_defaults(handler=cmd_reduce)

    pd = commands.add_parser("pd", parents=[common], help="Convex pseudo-disc families.")
    pd.add_argument("action", choices=["verify", "tangents", "rank", "three-ray"])
    pd.add_argument("--pair", type=int, nargs=2, default=None, metavar=("I", "J"))
    pd.add_argument("--emit-matrix", dest="emit_matrix", default=None, help="Write the rank system here.")
    pd.set_defaults(handler=cmd_pd)

    chain = commands.add_parser("chain", parents=[common], help="End-to-end chain of constructions.")
    chain.add_argument("--batch", type=int, default=None, help="Run this many seeds starting at --seed.")
    chain.add_argument("--workers", type=int, default=None, help="Worker processes for --batch.")
    chain.set_defaults(handler=cmd_chain)

    report = commands.add_parser("report", parents=[common], help="List stored records.")
    report.add_argument("--limit", type=int, default=None)
    report.add_argument("--pipeline", choices=[p.value for p in Pipeline], default=None)
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = CustomLogger(__name__, logging.DEBUG if args.verbose else logging.INFO)
    try:
        config = ConfigProvider(logger)
        config.override(
            coordinate_range=args.coordinate_range,
            max_retries=args.max_retries,
            database_path=None if args.database_path is None else os.path.abspath(args.database_path),
        )
        logger.debug(f"Configuration: {config.as_dict()}")
        if args.svg_prefix is not None and os.path.dirname(args.svg_prefix) == "":
            # bare prefixes go to the configured figure directory
            args.svg_prefix = os.path.join(config.svg_directory, args.svg_prefix)
        return args.handler(args, logger, config)
    except INVARIANT_ERRORS as e:
        logger.failure(e)
        return EXIT_INVARIANT
    except INPUT_ERRORS as e:
        logger.error(e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
