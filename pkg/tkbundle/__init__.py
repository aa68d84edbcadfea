"""
Higher-order tangent bundle engine.

Provides jets of curves on charted manifolds, the order-k chain rule, the
connection-induced vector bundle charts of T^kM, lifted metrics and
Lagrangians, the jet tower, and a verification suite tying them together.
"""

from tkbundle.core.atlas import AtlasError, ChartedManifold, MetricFixture, SmoothMapOracle, build_fixture, levi_civita
from tkbundle.core.connection import ConnectionComponents, ConnectionMapError, LinearConnection, induce_components
from tkbundle.core.faa import FaaError, enumerate_partitions, pushforward_jet
from tkbundle.core.jets import JetError, dual_directional
from tkbundle.core.lifts import DegenerateLagrangianError, Lagrangian, LiftError
from tkbundle.core.linearize import TrivializationError, detrivialize, linear_transition, trivialize
from tkbundle.core.osculating import OsculatingError, natural_transition, tangent_transition
from tkbundle.core.suite import BundleVerifier, SuiteError, run_lift_demo, run_verify
from tkbundle.core.tower import JetThread, TowerError, frechet_distance, project
from tkbundle.models.jet import CurveJet, LinearizedVector, OsculatingTangent
from tkbundle.models.report import CheckRecord, SuiteReport
from tkbundle.utils.config import FixtureParams, RunConfig
from tkbundle.utils.logging import log_exception, setup_logging

__version__ = '0.1.0'
