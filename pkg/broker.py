"""Contains the broker running experiment pipelines and storing their records"""
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from analysis.arrangement import (
    Arrangement,
    MonotonePath,
    build_arrangement,
    exhaustive_longest_path_length,
    longest_monotone_path,
    path_length,
    verify_monotone_path,
)
from analysis.pseudodisc import (
    PseudoDiscFamily,
    three_ray_construction,
    verify_pseudodisc_family,
    verify_rank_bound,
)
from analysis.reductions import (
    SeparatedConfiguration,
    TracedPath,
    all_pairs_separated,
    dualize_configuration,
    lines_to_antichain,
    path_to_points,
    points_to_path,
    verify_configuration,
    wedges_for_path,
)
from analysis.separable import (
    AntichainResult,
    SubsetFamily,
    brute_force_separable,
    enumerate_separable,
    family_from_json,
    max_antichain,
    max_antichain_oracle,
    verify_antichain,
)
from config import ConfigProvider
from db.entity import MetricsRecord, Pipeline
from db.manager import EntityManager
from geometry.core import LineSet, PointSet
from geometry.fileio import (
    InstanceFileException,
    line_set_from_json,
    point_set_from_json,
    read_json,
    write_text,
)
from geometry.generators import named_example, random_lines, random_points
from render.svg import (
    Overlay,
    arrangement_overlay,
    configuration_overlay,
    family_overlay,
    render_svg,
)
from util.const import DEFAULT_PERTURBATION_DENOMINATOR
from util.helpers import CustomLogger, ceil_half, tverberg_row_count

Instance = Union[PointSet, LineSet, SubsetFamily]


class InvariantViolationException(Exception):
    """
    Thrown if a pipeline stage fails its verification; carries the certificate
    """

    def __init__(self, message: str, certificates: Sequence[str], record: Optional[MetricsRecord] = None):
        super().__init__(message)
        self.certificates = list(certificates)
        self.record = record


@dataclass(frozen=True)
class RunSettings:
    """Configuration values a pipeline needs; picklable for worker processes"""

    coordinate_range: int
    max_retries: int
    brute_force_family_limit: int
    exhaustive_path_lines: int
    perturbation_denominator: int = DEFAULT_PERTURBATION_DENOMINATOR

    @classmethod
    def of(cls, config: ConfigProvider) -> "RunSettings":
        return cls(
            config.coordinate_range,
            config.max_retries,
            config.brute_force_family_limit,
            config.exhaustive_path_lines,
            config.perturbation_denominator,
        )


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One pipeline run. The instance comes from `path` when source is "file",
    otherwise from the generator named by source (random-points,
    random-lines, three-ray, named-example with `path` as the example name)
    """

    pipeline: Pipeline
    source: str
    n: int = 0
    seed: int = 0
    path: Optional[str] = None
    svg_prefix: Optional[str] = None
    oracle: bool = False


@dataclass
class Outcome:
    record: MetricsRecord
    certificates: List[str] = field(default_factory=list)
    figures: Dict[str, Overlay] = field(default_factory=dict)
    # computed objects, kept for the caller; not sent back from worker processes
    family: Optional[SubsetFamily] = None
    antichain: Optional[AntichainResult] = None
    path: Optional[MonotonePath] = None


def load_instance_file(path: str) -> Instance:
    """
    Reads a point set, line set or family document
    """
    document = read_json(path)
    if "ambient" in document:
        return family_from_json(document)
    if "lines" in document and "points" not in document:
        return line_set_from_json(document)
    if "points" in document and "lines" not in document:
        return point_set_from_json(document)
    raise InstanceFileException(f"{path} is neither a point set, a line set nor a family")


def load_instance(spec: ExperimentSpec, settings: RunSettings) -> Instance:
    if spec.source == "file":
        if spec.path is None:
            raise ValueError("File source needs a path")
        return load_instance_file(spec.path)
    if spec.source == "random-points":
        return random_points(spec.n, spec.seed, settings.coordinate_range, settings.max_retries)
    if spec.source == "random-lines":
        return random_lines(spec.n, spec.seed, settings.coordinate_range, settings.max_retries)
    if spec.source == "three-ray":
        return three_ray_construction(spec.n, spec.seed, settings.max_retries)[1]
    if spec.source == "named-example":
        if spec.path is None:
            raise ValueError("Named example source needs a name")
        return named_example(spec.path)
    raise ValueError(f"Unknown instance source {spec.source!r}")


def _expect(instance: Instance, kind: type, pipeline: Pipeline):
    if not isinstance(instance, kind):
        raise InstanceFileException(
            f"Pipeline {pipeline.value} needs a {kind.__name__}, got {type(instance).__name__}"
        )
    return instance


def enumerate_outcome(points: PointSet, seed: Optional[int], settings: RunSettings, oracle: bool) -> Outcome:
    family = enumerate_separable(points)
    n = len(points)
    record = MetricsRecord(
        pipeline=Pipeline.ENUMERATE, label=points.label, seed=seed, n=n, family_size=len(family)
    )
    outcome = Outcome(record, figures={"family": family_overlay(family)}, family=family)
    record.cardinality_passed = len(family) == n * (n - 1) + 2
    if not record.cardinality_passed:
        outcome.certificates.append(f"{len(family)} separable subsets, expected {n * (n - 1) + 2}")
    if oracle:
        brute_force = sorted(brute_force_separable(points))
        if brute_force != sorted(family.members):
            record.cardinality_passed = False
            outcome.certificates.append(
                f"Enumeration differs from the hull-disjointness oracle "
                f"({len(family)} vs {len(brute_force)} subsets)"
            )
    return outcome


def antichain_outcome(points: PointSet, seed: Optional[int], settings: RunSettings, oracle: bool) -> Outcome:
    family = enumerate_separable(points)
    result = max_antichain(family)
    record = MetricsRecord(
        pipeline=Pipeline.ANTICHAIN,
        label=points.label,
        seed=seed,
        n=len(points),
        family_size=len(family),
        g_lower=len(result),
    )
    outcome = Outcome(
        record,
        figures={"antichain": family_overlay(SubsetFamily(points, result.antichain))},
        family=family,
        antichain=result,
    )
    record.antichain_passed = result.certificate_valid(family)
    if not record.antichain_passed:
        outcome.certificates.append(f"Dilworth certificate rejected for antichain of size {len(result)}")
    if oracle and len(family) <= settings.brute_force_family_limit:
        exhaustive = max_antichain_oracle(family, settings.brute_force_family_limit)
        if len(exhaustive) != len(result):
            record.antichain_passed = False
            outcome.certificates.append(
                f"Clique oracle finds an antichain of size {len(exhaustive)}, matching found {len(result)}"
            )
    return outcome


def _path_oracle(arrangement: Arrangement, path: MonotonePath, settings: RunSettings, outcome: Outcome) -> bool:
    if len(arrangement) > settings.exhaustive_path_lines:
        return True
    exhaustive = exhaustive_longest_path_length(arrangement)
    if exhaustive != path_length(path):
        outcome.certificates.append(
            f"Dynamic program gives length {path_length(path)}, exhaustive search {exhaustive}"
        )
        return False
    return True


def longest_path_outcome(lines: LineSet, seed: Optional[int], settings: RunSettings, oracle: bool) -> Outcome:
    arrangement = build_arrangement(lines.lines)
    path = longest_monotone_path(arrangement)
    record = MetricsRecord(
        pipeline=Pipeline.LONGEST_PATH, label=lines.label, seed=seed, n=len(lines), lam=path_length(path)
    )
    outcome = Outcome(record, figures={"path": arrangement_overlay(arrangement, path)}, path=path)
    record.path_passed = verify_monotone_path(path, arrangement)
    if not record.path_passed:
        outcome.certificates.append(f"Dynamic program returned an invalid path {path}")
    if oracle:
        record.path_passed = _path_oracle(arrangement, path, settings, outcome) and record.path_passed
    return outcome


def chain_outcome(lines: LineSet, seed: Optional[int], settings: RunSettings, oracle: bool) -> Outcome:
    """
    Longest path, its points, their dual lines and the antichain cut by
    those lines; the sizes must satisfy g >= h >= ceil((lambda + 1) / 2),
    and tracing a path back through the points gives length >= h - 2 with
    at least h - 3 bends
    """
    arrangement = build_arrangement(lines.lines)
    path = longest_monotone_path(arrangement)
    lam = path_length(path)
    record = MetricsRecord(pipeline=Pipeline.CHAIN, label=lines.label, seed=seed, n=len(lines), lam=lam)
    outcome = Outcome(record, path=path)

    record.path_passed = verify_monotone_path(path, arrangement)
    if oracle:
        record.path_passed = _path_oracle(arrangement, path, settings, outcome) and record.path_passed

    points: SeparatedConfiguration = path_to_points(path, arrangement)
    record.h_lower = len(points.points)
    record.separation_passed = verify_configuration(points) and all_pairs_separated(points)
    if not record.separation_passed:
        outcome.certificates.append(f"Points {list(points.points)} are not separated by the lines")

    dual = dualize_configuration(points)
    antichain = lines_to_antichain(dual)
    record.g_lower = len(set(antichain))
    record.antichain_passed = (
        verify_configuration(dual) and verify_antichain(antichain) and record.g_lower == len(antichain)
    )
    if not record.antichain_passed:
        outcome.certificates.append(f"Dual subsets {antichain} do not form an antichain")

    record.inequality_passed = record.g_lower >= record.h_lower >= ceil_half(lam + 1)
    if not record.inequality_passed:
        outcome.certificates.append(
            f"g >= h >= ceil((lambda + 1) / 2) fails: g={record.g_lower} h={record.h_lower} lambda={lam}"
        )

    traced: TracedPath = points_to_path(points, seed or 0, start_k=settings.perturbation_denominator)
    traced_length = path_length(traced.path)
    traced_bends = len(traced.path.bends)
    if traced_length < record.h_lower - 2 or traced_bends < record.h_lower - 3:
        record.path_passed = False
        outcome.certificates.append(
            f"Traced path has length {traced_length} and {traced_bends} bend(s) for {record.h_lower} points"
        )

    wedges = [wedge for pair in wedges_for_path(path, arrangement) for wedge in pair]
    outcome.figures = {
        "path": arrangement_overlay(arrangement, path, wedges),
        "points": configuration_overlay(points),
        "dual": configuration_overlay(dual),
        "antichain": family_overlay(SubsetFamily(dual.points, antichain)),
        "traced": arrangement_overlay(traced.arrangement, traced.path),
    }
    return outcome


def pseudodisc_outcome(
    family: SubsetFamily, seed: Optional[int], settings: RunSettings, oracle: bool
) -> Outcome:
    family = PseudoDiscFamily.of(family)
    n = len(family.ambient)
    record = MetricsRecord(
        pipeline=Pipeline.PSEUDODISC_SUITE,
        label=family.ambient.label,
        seed=seed,
        n=n,
        family_size=len(family),
        bound_rows=tverberg_row_count(n),
    )
    outcome = Outcome(record, figures={"family": family_overlay(family)}, family=family)

    record.antichain_passed = verify_antichain(family.members)
    if not record.antichain_passed:
        outcome.certificates.append("Family members are nested")
    pseudodisc_report = verify_pseudodisc_family(family)
    record.pseudodisc_passed = pseudodisc_report.passed
    if not pseudodisc_report.passed:
        outcome.certificates.append(repr(pseudodisc_report))
    if record.antichain_passed:
        record.g_lower = len(family)
        rank_report = verify_rank_bound(family)
        record.rank_passed = rank_report.passed
        if not rank_report.passed:
            outcome.certificates.append(repr(rank_report))
    return outcome


_PIPELINES = {
    Pipeline.ENUMERATE: (PointSet, enumerate_outcome),
    Pipeline.ANTICHAIN: (PointSet, antichain_outcome),
    Pipeline.LONGEST_PATH: (LineSet, longest_path_outcome),
    Pipeline.CHAIN: (LineSet, chain_outcome),
    Pipeline.PSEUDODISC_SUITE: (SubsetFamily, pseudodisc_outcome),
}


def run_pipeline(
    pipeline: Pipeline, instance: Instance, seed: Optional[int], settings: RunSettings, oracle: bool
) -> Outcome:
    kind, compute = _PIPELINES[pipeline]
    return compute(_expect(instance, kind, pipeline), seed, settings, oracle)


def write_figures(outcome: Outcome, svg_prefix: str) -> List[str]:
    """Writes one SVG per stage as <prefix>-<stage>.svg"""
    paths = []
    for stage, overlay in outcome.figures.items():
        path = f"{svg_prefix}-{stage}.svg"
        write_text(path, render_svg(overlay))
        paths.append(path)
    return paths


def _run_job(job: Tuple[ExperimentSpec, RunSettings]) -> Tuple[Dict[str, Any], List[str]]:
    spec, settings = job
    instance = load_instance(spec, settings)
    seed = None if spec.source == "file" else spec.seed
    outcome = run_pipeline(spec.pipeline, instance, seed, settings, spec.oracle)
    if spec.svg_prefix is not None:
        write_figures(outcome, spec.svg_prefix)
    return outcome.record.to_values(), outcome.certificates


class ExperimentBroker:
    """
    Runs pipelines and stores their records
    """

    def __init__(self, logger: CustomLogger, config: ConfigProvider, database_path: Optional[str] = None):
        self._logger = logger
        self._settings = RunSettings.of(config)
        self._em = EntityManager(logger, database_path or config.database_path)

    @property
    def settings(self) -> RunSettings:
        return self._settings

    def _finish(self, outcome: Outcome, svg_prefix: Optional[str]) -> Outcome:
        record = outcome.record
        self._em.add_record(record)
        if svg_prefix is not None:
            for path in write_figures(outcome, svg_prefix):
                self._logger.debug(f"Wrote {path}")
        if not record.passed:
            for certificate in outcome.certificates:
                self._logger.failure(certificate)
            raise InvariantViolationException(f"{record.pipeline.value} failed for {record.label}", outcome.certificates, record)
        self._logger.success(record)
        return outcome

    def run(
        self,
        pipeline: Pipeline,
        instance: Instance,
        seed: Optional[int] = None,
        oracle: bool = False,
        svg_prefix: Optional[str] = None,
    ) -> MetricsRecord:
        return self.run_outcome(pipeline, instance, seed, oracle, svg_prefix).record

    def run_outcome(
        self,
        pipeline: Pipeline,
        instance: Instance,
        seed: Optional[int] = None,
        oracle: bool = False,
        svg_prefix: Optional[str] = None,
    ) -> Outcome:
        """
        Runs one pipeline on an instance and stores its record
        Args:
            pipeline: pipeline to run
            instance: point set, line set or family, as the pipeline needs
            seed: seed the instance was generated with, stored with the record
            oracle: enable the brute-force cross-checks
            svg_prefix: write one figure per stage with this path prefix

        Returns:
            outcome with the stored record and the computed family, antichain
            or path; a failed check raises InvariantViolationException after
            the record is stored
        """
        self._logger.header_start(f"{pipeline.value}: {getattr(instance, 'label', '')}", CustomLogger.LEVEL_DEBUG)
        outcome = run_pipeline(pipeline, instance, seed, self._settings, oracle)
        try:
            return self._finish(outcome, svg_prefix)
        finally:
            self._logger.header_end(CustomLogger.LEVEL_DEBUG)

    def run_chain(
        self, lines: LineSet, seed: Optional[int] = None, oracle: bool = False, svg_prefix: Optional[str] = None
    ) -> MetricsRecord:
        return self.run(Pipeline.CHAIN, lines, seed, oracle, svg_prefix)

    def run_pseudodisc_suite(
        self, family: SubsetFamily, seed: Optional[int] = None, svg_prefix: Optional[str] = None
    ) -> MetricsRecord:
        return self.run(Pipeline.PSEUDODISC_SUITE, family, seed, False, svg_prefix)

    def run_batch(self, specs: Sequence[ExperimentSpec], workers: Optional[int] = None) -> List[MetricsRecord]:
        """
        Runs independent experiments in worker processes; records are stored
        in input order whatever order the workers finish in
        Args:
            specs: experiments to run
            workers: process count, one per CPU if None

        Returns:
            records in input order, failed ones included
        """
        jobs = [(spec, self._settings) for spec in specs]
        if workers == 1:
            results = [_run_job(job) for job in jobs]
        else:
            with ProcessPoolExecutor(max_workers=workers or os.cpu_count()) as executor:
                results = list(executor.map(_run_job, jobs))

        records = [MetricsRecord.from_values(values) for values, _ in results]
        self._em.add_records(records)
        failed = 0
        for record, (_, certificates) in zip(records, results):
            if record.passed:
                continue
            failed += 1
            self._logger.failure(record)
            for certificate in certificates:
                self._logger.failure(certificate)
        if failed == 0:
            self._logger.success(f"All {len(records)} experiment(s) passed.")
        return records

    def get_records(self, pipeline: Optional[Pipeline] = None, limit: Optional[int] = None) -> List[MetricsRecord]:
        return self._em.get_records(pipeline, limit)

    def count_records(self) -> int:
        return self._em.count_records()

    def close(self) -> None:
        self._em.close()
