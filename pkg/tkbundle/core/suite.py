"""
Verification suite runner.
Runs every property check for one fixture and order, fanning samples out
across worker threads, and collects the results into a SuiteReport.
"""

import logging
import time
import zlib
import concurrent.futures
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from tkbundle.core.atlas import (
    AtlasError,
    ChartedManifold,
    build_fixture,
    check_fixture,
    levi_civita,
    random_polynomial_map,
)
from tkbundle.core.connection import (
    ConnectionComponents,
    connection_map_apply,
    horizontal_projector,
    induce_components,
    verify_compatibility,
)
from tkbundle.core.faa import chain_coefficient, enumerate_partitions, pushforward_jet
from tkbundle.core.jets import TruncSeries1, max_relative_deviation, series_compose_oracle
from tkbundle.core.lifts import (
    DegenerateLagrangianError,
    degenerate_lagrangian,
    energy_lagrangian,
    lagrangian_lift,
    lagrangian_vector_field,
    metric_lift,
)
from tkbundle.core.linearize import (
    block_linear_transition,
    detrivialize,
    linear_transition,
    restrict_order,
    trivialize,
)
from tkbundle.core.osculating import (
    natural_transition,
    random_jet,
    random_tangent,
    tangent_transition,
    tangent_transition_directional,
    vertical_shift_J,
)
from tkbundle.core.tower import (
    JetThread,
    commutes_with_truncation,
    frechet_distance,
    project,
    strong_system_check,
    transition_block,
)
from tkbundle.models.jet import CurveJet, LinearizedVector, OsculatingTangent
from tkbundle.models.report import CheckRecord, SuiteReport
from tkbundle.utils.config import ConfigError, RunConfig

logger = logging.getLogger(__name__)

ANCHORS: Dict[str, str] = {
    "fixture-invariants": "atlas invariants: round trip, tensor symmetry, metric invariance",
    "partition-coefficients": "order-k chain rule coefficients",
    "chain-rule-oracle": "order-k chain rule vs truncated composition",
    "chain-rule-functoriality": "natural transitions compose: there and back",
    "tangent-transition-directional": "tangent transition rule of natural charts",
    "tangent-transition-linearity": "tangent transition is fibre-linear",
    "connection-map-stages": "connection map compatible with powers of J",
    "horizontal-split": "kernel of the connection map is horizontal",
    "connection-compatibility": "connection-map compatibility across charts",
    "trivialization-round-trip": "vector bundle chart is fibre-wise bijective",
    "block-linearity": "vector bundle structure: transitions are block-linear",
    "block-linearity-negative-control": "negative control: corrupted M^2 breaks block-linearity",
    "transition-cocycle": "linear transitions satisfy the cocycle condition",
    "order-restriction": "lower-order vector bundle structure by restriction",
    "metric-lift-symmetry": "lifted Riemannian metric is symmetric",
    "metric-lift-definiteness": "lifted Riemannian metric is positive-definite",
    "metric-lift-chart-invariance": "lifted Riemannian metric is chart-independent",
    "lagrangian-spray": "Lagrangian vector field of the energy is the geodesic spray",
    "lagrangian-lift-chart-invariance": "lifted Lagrangian is chart-independent",
    "lagrangian-lift-order-one": "lifted Lagrangian at order one is the Lagrangian",
    "degenerate-lagrangian-detected": "degenerate Lagrangian is rejected",
    "strong-projective-system": "strong projective system: truncation commutes with trivialization",
    "thread-transition-commutes": "transitions preserve the thread condition",
    "frechet-axioms": "tower metric axioms; partial sums nondecreasing",
    "frechet-worked-value": "tower metric of threads differing in the first coefficient",
}

# the compatibility recursion is the cost driver; deeper orders add little
COMPATIBILITY_MAX_ORDER = 3
CORRUPTION_ORDER = 2
CORRUPTION_FACTOR = 1.1

class SuiteError(Exception):
    """Base exception for suite run errors."""
    pass

SampleCheck = Callable[[np.random.Generator, int], float]

def _stirling2(n: int, k: int) -> int:
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]

def _fibre_deviation(a: LinearizedVector, b: LinearizedVector) -> float:
    return max_relative_deviation((a.x,) + a.z, (b.x,) + b.z)

def _jet_deviation(a: CurveJet, b: CurveJet) -> float:
    return max_relative_deviation(a.coefficients(), b.coefficients())

def _tangent_deviation(a: OsculatingTangent, b: OsculatingTangent) -> float:
    return max_relative_deviation(a.components(), b.components())

class BundleVerifier:
    """
    Runs the property checks of one fixture at one order.

    Each sample draws from its own generator spawned from (seed, check id),
    so results do not depend on the worker count or completion order.
    """

    def __init__(self, cfg: RunConfig, manifold: Optional[ChartedManifold] = None):
        """
        Initialize the verifier.

        Args:
            cfg: Validated run configuration
            manifold: Prebuilt fixture (built from cfg when None)

        Raises:
            SuiteError: If the fixture cannot be built
        """
        try:
            self.cfg = cfg.validate()
        except ConfigError as e:
            raise SuiteError(f"Invalid configuration: {e}")

        try:
            self.params = cfg.fixture_params()
            self.manifold = manifold or build_fixture(cfg.fixture, self.params)
        except (AtlasError, ConfigError) as e:
            raise SuiteError(f"Cannot build fixture {cfg.fixture}: {e}")

        self.order = cfg.order
        self.connection = levi_civita(self.manifold.metric)
        self.components = induce_components(self.connection, self.order)
        self.lagrangian = energy_lagrangian(self.manifold.metric)
        logger.info(f"Bundle verifier initialized for {self.manifold.name} at order {self.order}")

    # --- sampling ---

    def _generators(self, check_id: str, samples: int) -> List[np.random.Generator]:
        root = np.random.SeedSequence([self.cfg.seed, zlib.crc32(check_id.encode())])
        return [np.random.default_rng(child) for child in root.spawn(samples)]

    def _pair(self, index: int) -> Tuple[str, str]:
        """(source, target) chart pair for a sample; same-chart when there is no overlap."""
        pairs = sorted(self.manifold.transitions)
        if not pairs:
            chart = self.manifold.chart_names[0]
            return chart, chart
        return pairs[index % len(pairs)]

    def _sweep(self, check_id: str, check: SampleCheck, samples: int) -> float:
        """Max residual of check over samples, aggregated in index order."""
        generators = self._generators(check_id, samples)
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.cfg.workers) as executor:
            residuals = list(tqdm(
                executor.map(check, generators, range(samples)),
                total=samples,
                desc=check_id,
                disable=not self.cfg.progress,
                leave=False,
            ))
        return max(residuals) if residuals else 0.0

    def _record(
        self,
        report: SuiteReport,
        check_id: str,
        check: SampleCheck,
        samples: Optional[int] = None,
        comparison: str = "le",
        note: Optional[str] = None
    ) -> CheckRecord:
        samples = samples or self.cfg.samples
        start = time.perf_counter()
        residual = self._sweep(check_id, check, samples)
        report.timing[check_id] = time.perf_counter() - start
        record = CheckRecord(check_id, ANCHORS[check_id], samples, residual,
                             self.cfg.tolerance(check_id), comparison, note)
        level = logging.INFO if record.passed else logging.ERROR
        logger.log(level, f"{check_id}: residual {residual:.3e} (tolerance {record.tolerance:.1e}) "
                          f"{'PASS' if record.passed else 'FAIL'}")
        return report.add(record)

    # --- fixture ---

    def check_fixture_invariants(self, report: SuiteReport) -> CheckRecord:
        """
        Fixture self-test; a failure aborts the run.

        Raises:
            SuiteError: If any fixture invariant is violated
        """
        start = time.perf_counter()
        rng = self._generators("fixture-invariants", 1)[0]
        try:
            residuals = check_fixture(self.manifold, rng, samples=10, max_order=min(self.order + 1, 4))
        except AtlasError as e:
            raise SuiteError(f"Fixture {self.manifold.name} failed its self-test: {e}")
        report.timing["fixture-invariants"] = time.perf_counter() - start

        worst = max(residuals.values())
        record = report.add(CheckRecord(
            "fixture-invariants", ANCHORS["fixture-invariants"], 10, worst,
            self.cfg.tolerance("fixture-invariants"),
            note=", ".join(f"{key}={value:.1e}" for key, value in residuals.items()),
        ))
        if not record.passed:
            raise SuiteError(f"Fixture {self.manifold.name} invariants violated: {residuals}")
        return record

    # --- chain rule ---

    def _partition_coefficients(self, rng: np.random.Generator, index: int) -> float:
        k = self.order
        worst = 0
        for length in range(1, k + 1):
            total = sum(chain_coefficient(p) for p in enumerate_partitions(k) if p.length == length)
            worst = max(worst, abs(total - _stirling2(k, length)))
        return float(worst)

    def _chain_rule_oracle(self, rng: np.random.Generator, index: int) -> float:
        dim = int(rng.integers(1, 4))
        f = random_polynomial_map(rng, dim, self.order + 1, scale=0.5)
        jet = CurveJet("A", rng.uniform(-1.0, 1.0, size=dim),
                       tuple(rng.uniform(-1.0, 1.0, size=dim) for _ in range(self.order)))
        oracle = series_compose_oracle(f, TruncSeries1.from_jet(jet))
        return max_relative_deviation(pushforward_jet(f, jet).coefficients(), oracle.coeffs)

    def _chain_rule_functoriality(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        jet = random_jet(self.manifold, rng, source, self.order, overlap=True)
        back = natural_transition(self.manifold, natural_transition(self.manifold, jet, target), source)
        return _jet_deviation(back, jet)

    # --- tangent transitions ---

    def _tangent_directional(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        ot = random_tangent(self.manifold, rng, source, self.order, overlap=True)
        series = tangent_transition(self.manifold, ot, target)
        directional = tangent_transition_directional(self.manifold, ot, target)
        return max(_tangent_deviation(series, directional), _jet_deviation(series.base, directional.base))

    def _tangent_linearity(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        first = random_tangent(self.manifold, rng, source, self.order, overlap=True)
        second = random_tangent(self.manifold, rng, source, self.order)
        a, b = rng.uniform(-2.0, 2.0, size=2)
        combined = OsculatingTangent(
            first.base,
            a * first.y + b * second.y,
            tuple(a * u + b * v for u, v in zip(first.eta, second.eta)),
        )
        other = OsculatingTangent(first.base, second.y, second.eta)
        moved_first = tangent_transition(self.manifold, first, target)
        moved_other = tangent_transition(self.manifold, other, target)
        expected = [a * u + b * v for u, v in zip(moved_first.components(), moved_other.components())]
        return max_relative_deviation(tangent_transition(self.manifold, combined, target).components(), expected)

    # --- connection map ---

    def _connection_stages(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        ot = random_tangent(self.manifold, rng, chart, self.order)
        k = self.order
        reference = connection_map_apply(self.components, ot)
        worst = 0.0
        shifted = ot
        for a in range(1, k + 1):
            shifted = vertical_shift_J(shifted)
            top = connection_map_apply(self.components, shifted)[k - 1]
            expected = ot.y if a == k else reference[k - a - 1]
            worst = max(worst, max_relative_deviation([top], [expected]))
        return worst

    def _horizontal_split(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        ot = random_tangent(self.manifold, rng, chart, self.order)
        horizontal = horizontal_projector(self.components, ot)
        image = connection_map_apply(self.components, horizontal)
        scale = max(1.0, max(float(np.max(np.abs(v))) for v in horizontal.components()))
        again = horizontal_projector(self.components, horizontal)
        return max(
            max(float(np.max(np.abs(v))) for v in image) / scale,
            _tangent_deviation(again, horizontal),
        )

    # --- trivialization ---

    def _round_trip(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        jet = random_jet(self.manifold, rng, chart, self.order)
        lv = LinearizedVector(chart, jet.x, tuple(rng.uniform(-1.0, 1.0, size=self.manifold.dim)
                                                  for _ in range(self.order)))
        return max(
            _jet_deviation(detrivialize(self.components, trivialize(self.components, jet)), jet),
            _fibre_deviation(trivialize(self.components, detrivialize(self.components, lv)), lv),
        )

    def _random_fibre(self, rng: np.random.Generator, chart: str) -> LinearizedVector:
        x = self.manifold.sample(rng, overlap=True)
        return LinearizedVector(chart, x, tuple(rng.uniform(-1.0, 1.0, size=self.manifold.dim)
                                                for _ in range(self.order)))

    def _block_linearity_with(self, components: ConnectionComponents) -> SampleCheck:
        def check(rng: np.random.Generator, index: int) -> float:
            source, target = self._pair(index)
            lv = self._random_fibre(rng, source)
            honest = linear_transition(self.manifold, components, lv, target)
            return _fibre_deviation(honest, block_linear_transition(self.manifold, lv, target))
        return check

    def _cocycle(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        lv = self._random_fibre(rng, source)
        there = linear_transition(self.manifold, self.components, lv, target)
        back = linear_transition(self.manifold, self.components, there, source)
        return _fibre_deviation(back, lv)

    def _order_restriction(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        lv = self._random_fibre(rng, source)
        worst = 0.0
        for lower in range(1, self.order):
            first = restrict_order(linear_transition(self.manifold, self.components, lv, target), lower)
            second = linear_transition(self.manifold, self.components, restrict_order(lv, lower), target)
            worst = max(worst, _fibre_deviation(first, second))
            if lower > 1:
                nested = restrict_order(restrict_order(lv, lower), 1)
                worst = max(worst, _fibre_deviation(nested, restrict_order(lv, 1)))
        return worst

    # --- lifts ---

    def _jet_pair(self, rng: np.random.Generator, chart: str, overlap: bool = False) -> Tuple[CurveJet, CurveJet]:
        first = random_jet(self.manifold, rng, chart, self.order, overlap=overlap)
        second = CurveJet(chart, first.x, tuple(rng.uniform(-1.0, 1.0, size=self.manifold.dim)
                                                for _ in range(self.order)))
        return first, second

    def _metric_symmetry(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        j1, j2 = self._jet_pair(rng, chart)
        metric = self.manifold.metric
        return abs(metric_lift(metric, self.components, j1, j2) - metric_lift(metric, self.components, j2, j1))

    def _metric_definiteness(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        jet = random_jet(self.manifold, rng, chart, self.order)
        # residual 1 marks a non-positive value
        return 0.0 if metric_lift(self.manifold.metric, self.components, jet, jet) > 0.0 else 1.0

    def _metric_invariance(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        j1, j2 = self._jet_pair(rng, source, overlap=True)
        metric = self.manifold.metric
        here = metric_lift(metric, self.components, j1, j2)
        there = metric_lift(metric, self.components,
                            natural_transition(self.manifold, j1, target),
                            natural_transition(self.manifold, j2, target))
        return abs(here - there) / max(1.0, abs(here))

    def _spray(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        x = self.manifold.sample(rng)
        y = rng.uniform(-1.0, 1.0, size=self.manifold.dim)
        z = lagrangian_vector_field(self.lagrangian, chart, x, y)
        return max_relative_deviation([z], [-self.connection(chart, x, y, y)])

    def _lagrangian_invariance(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        jet = random_jet(self.manifold, rng, source, self.order, overlap=True)
        here = lagrangian_lift(self.lagrangian, self.components, jet)
        there = lagrangian_lift(self.lagrangian, self.components, natural_transition(self.manifold, jet, target))
        return abs(here - there) / max(1.0, abs(here))

    def _lagrangian_order_one(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[index % len(self.manifold.chart_names)]
        jet = project(random_jet(self.manifold, rng, chart, self.order), 1)
        lifted = lagrangian_lift(self.lagrangian, self.components, jet)
        base = float(self.lagrangian(chart, jet.x, jet.xi[0]))
        return abs(lifted - base) / max(1.0, abs(base))

    def _degenerate_detected(self, rng: np.random.Generator, index: int) -> float:
        chart = self.manifold.chart_names[0]
        x = self.manifold.sample(rng)
        y = rng.uniform(-1.0, 1.0, size=self.manifold.dim)
        try:
            lagrangian_vector_field(degenerate_lagrangian(), chart, x, y)
        except DegenerateLagrangianError:
            return 0.0
        return 1.0

    # --- tower ---

    def _thread_commutes(self, rng: np.random.Generator, index: int) -> float:
        source, target = self._pair(index)
        overlap = self.manifold.has_overlap
        jet = random_jet(self.manifold, rng, source, self.order, overlap=overlap)
        block = transition_block(self.manifold, source, target, jet.x, self.order)
        worst = commutes_with_truncation(block, self.manifold.dim)
        if not overlap:
            return worst

        lv = trivialize(self.components, jet)
        moved_jet = natural_transition(self.manifold, jet, target)
        moved_lv = linear_transition(self.manifold, self.components, lv, target)
        for lower in range(1, self.order):
            worst = max(worst, _jet_deviation(project(moved_jet, lower),
                                              natural_transition(self.manifold, project(jet, lower), target)))
            worst = max(worst, _fibre_deviation(restrict_order(moved_lv, lower),
                                                linear_transition(self.manifold, self.components,
                                                                  restrict_order(lv, lower), target)))
        return worst

    def _random_thread(self, rng: np.random.Generator, chart: str, x: np.ndarray, cap: int) -> JetThread:
        coefficients = [rng.uniform(-1.0, 1.0, size=self.manifold.dim) for _ in range(cap)]
        return JetThread.from_supplier(chart, x, lambda i: coefficients[i - 1] if i <= cap else None, cap)

    def _frechet_axioms(self, rng: np.random.Generator, index: int) -> float:
        cap = self.params.thread_cap
        chart = self.manifold.chart_names[0]
        x = self.manifold.sample(rng)
        a, b, c = (self._random_thread(rng, chart, x, cap) for _ in range(3))
        ab = frechet_distance(a, b, cap).value
        ba = frechet_distance(b, a, cap).value
        bc = frechet_distance(b, c, cap).value
        ac = frechet_distance(a, c, cap).value
        aa = frechet_distance(a, a, cap).value
        partial = [frechet_distance(a, b, n).value for n in range(1, cap + 1)]
        drop = max((max(0.0, s - t) for s, t in zip(partial, partial[1:])), default=0.0)
        return max(abs(ab - ba), max(0.0, ac - ab - bc), aa, drop)

    def _frechet_worked(self, rng: np.random.Generator, index: int) -> float:
        cap = self.params.thread_cap
        chart = self.manifold.chart_names[0]
        x = self.manifold.sample(rng)
        first = [rng.uniform(-1.0, 1.0, size=self.manifold.dim) for _ in range(cap)]
        direction = rng.normal(size=self.manifold.dim)
        second = [first[0] + direction / np.linalg.norm(direction)] + first[1:]
        t1 = JetThread.from_supplier(chart, x, lambda i: first[i - 1] if i <= cap else None, cap)
        t2 = JetThread.from_supplier(chart, x, lambda i: second[i - 1] if i <= cap else None, cap)
        worst = 0.0
        for n in range(1, cap + 1):
            distance = frechet_distance(t1, t2, n)
            worst = max(worst, abs(distance.value - 0.5 * (1.0 - 2.0 ** -n)))
            # 1/2 is the untruncated distance
            worst = max(worst, distance.value - 0.5, 0.5 - distance.upper)
        return worst

    # --- runs ---

    def run(self) -> SuiteReport:
        """Run every applicable check and return the report."""
        report = SuiteReport(command="verify", config=self.cfg.to_dict())
        start = time.perf_counter()
        self.check_fixture_invariants(report)

        overlap = self.manifold.has_overlap
        k = self.order

        self._record(report, "partition-coefficients", self._partition_coefficients, samples=1)
        self._record(report, "chain-rule-oracle", self._chain_rule_oracle, samples=2 * self.cfg.samples)
        if overlap:
            self._record(report, "chain-rule-functoriality", self._chain_rule_functoriality)
            self._record(report, "tangent-transition-directional", self._tangent_directional)
            self._record(report, "tangent-transition-linearity", self._tangent_linearity)

        self._record(report, "connection-map-stages", self._connection_stages)
        self._record(report, "horizontal-split", self._horizontal_split)

        if overlap:
            compat_order = min(k, COMPATIBILITY_MAX_ORDER)
            components = induce_components(self.connection, compat_order)
            note = None
            if self.cfg.negative_control and compat_order >= CORRUPTION_ORDER:
                components = components.corrupted(CORRUPTION_ORDER, CORRUPTION_FACTOR)
                note = f"negative control: M^{CORRUPTION_ORDER} scaled by {CORRUPTION_FACTOR}"
            self._run_compatibility(report, components, note)
        elif self.cfg.negative_control:
            logger.warning(f"{self.manifold.name} has no chart overlap; negative control not applicable")

        self._record(report, "trivialization-round-trip", self._round_trip)
        if overlap:
            self._record(report, "block-linearity", self._block_linearity_with(self.components))
            if k >= 3:
                corrupted = self.components.corrupted(CORRUPTION_ORDER, CORRUPTION_FACTOR)
                self._record(report, "block-linearity-negative-control",
                             self._block_linearity_with(corrupted), comparison="gt",
                             note=f"M^{CORRUPTION_ORDER} scaled by {CORRUPTION_FACTOR}; must fail")
            self._record(report, "transition-cocycle", self._cocycle)
            if k >= 2:
                self._record(report, "order-restriction", self._order_restriction)

        self._record(report, "metric-lift-symmetry", self._metric_symmetry)
        self._record(report, "metric-lift-definiteness", self._metric_definiteness)
        if overlap:
            self._record(report, "metric-lift-chart-invariance", self._metric_invariance)

        self._record(report, "lagrangian-spray", self._spray)
        if overlap:
            self._record(report, "lagrangian-lift-chart-invariance", self._lagrangian_invariance)
        self._record(report, "lagrangian-lift-order-one", self._lagrangian_order_one)
        self._record(report, "degenerate-lagrangian-detected", self._degenerate_detected, samples=1)

        if k >= 2:
            self._run_strong_system(report)
            self._record(report, "thread-transition-commutes", self._thread_commutes)
        self._record(report, "frechet-axioms", self._frechet_axioms, samples=10 * self.cfg.samples)
        self._record(report, "frechet-worked-value", self._frechet_worked, samples=1)

        report.timing["total"] = time.perf_counter() - start
        logger.info(f"Verification of {self.manifold.name} finished: "
                    f"{len(report.records) - len(report.failed_checks)}/{len(report.records)} checks passed")
        return report

    def _run_compatibility(self, report: SuiteReport, components: ConnectionComponents, note: Optional[str]) -> None:
        check_id = "connection-compatibility"
        start = time.perf_counter()
        rng = self._generators(check_id, 1)[0]
        record = verify_compatibility(self.manifold, components, self.cfg.samples,
                                      self.cfg.tolerance(check_id), rng=rng)
        record.anchor = ANCHORS[check_id]
        record.note = note
        report.timing[check_id] = time.perf_counter() - start
        report.add(record)

    def _run_strong_system(self, report: SuiteReport) -> None:
        check_id = "strong-projective-system"
        start = time.perf_counter()
        rng = self._generators(check_id, 1)[0]
        record = strong_system_check(self.manifold, self.components, self.cfg.samples,
                                     self.cfg.tolerance(check_id), rng=rng)
        record.anchor = ANCHORS[check_id]
        report.timing[check_id] = time.perf_counter() - start
        report.add(record)

    def lift_table(self) -> SuiteReport:
        """
        Tabulate G^k(j, j), L^k(j) and L(x, ξ_1) per sample, with cross-chart
        residuals where the fixture has an overlap.
        """
        report = SuiteReport(command="lift-demo", config=self.cfg.to_dict())
        start = time.perf_counter()
        self.check_fixture_invariants(report)
        metric = self.manifold.metric
        overlap = self.manifold.has_overlap

        g_worst = 0.0
        l_worst = 0.0
        base_worst = 0.0
        for index, rng in enumerate(self._generators("lift-demo", self.cfg.samples)):
            source, target = self._pair(index)
            jet = random_jet(self.manifold, rng, source, self.order, overlap=overlap)
            g_value = metric_lift(metric, self.components, jet, jet)
            l_value = lagrangian_lift(self.lagrangian, self.components, jet)
            base = float(self.lagrangian(source, jet.x, jet.xi[0]))
            row = {"sample": index, "chart": source, "G": g_value, "L": l_value, "L_base": base}
            if overlap:
                moved = natural_transition(self.manifold, jet, target)
                row["G_residual"] = abs(g_value - metric_lift(metric, self.components, moved, moved)) / max(1.0, abs(g_value))
                row["L_residual"] = abs(l_value - lagrangian_lift(self.lagrangian, self.components, moved)) / max(1.0, abs(l_value))
                g_worst = max(g_worst, row["G_residual"])
                l_worst = max(l_worst, row["L_residual"])
            if self.order == 1:
                base_worst = max(base_worst, abs(l_value - base) / max(1.0, abs(base)))
            report.rows.append(row)

        samples = self.cfg.samples
        if overlap:
            for check_id, worst in (("metric-lift-chart-invariance", g_worst),
                                    ("lagrangian-lift-chart-invariance", l_worst)):
                report.add(CheckRecord(check_id, ANCHORS[check_id], samples, worst, self.cfg.tolerance(check_id)))
        if self.order == 1:
            check_id = "lagrangian-lift-order-one"
            report.add(CheckRecord(check_id, ANCHORS[check_id], samples, base_worst, self.cfg.tolerance(check_id)))

        report.timing["total"] = time.perf_counter() - start
        return report

def run_verify(cfg: RunConfig) -> SuiteReport:
    """
    Run the full verification suite for cfg.

    Raises:
        SuiteError: On invalid configuration or a fixture failing its self-test
    """
    return BundleVerifier(cfg).run()

def run_lift_demo(cfg: RunConfig) -> SuiteReport:
    """Tabulate lifted metric and Lagrangian values for cfg's fixture."""
    return BundleVerifier(cfg).lift_table()
