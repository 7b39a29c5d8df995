"""Tests of symmetry built on an entropy characterization.

The departure measure ``delta = GCRE - GCE`` vanishes exactly for symmetric
laws. Its U-statistic estimator is tested by jackknife empirical likelihood
(:func:`jel_test`, :func:`ajel_test`) or against a simulated critical region
(:func:`scr_test`).
"""

from .bootstrap import CriticalRegion, bootstrap_critical_region, null_critical_region, scr_test
from .characterization import CharacterizationReport, characterize, delta_true, gce, gcre
from .competitors import cm_statistic, competitor_region, competitor_test, mgg_statistic, sgn_statistic
from .distributions import (
    Azzalini,
    Contaminated,
    Distribution,
    Exponential,
    FernandezSteel,
    Laplace,
    Logistic,
    Normal,
    NormalMixture,
    Uniform,
)
from .errors import (
    DegenerateSampleError,
    HullError,
    NumericError,
    ParameterDomainError,
    ParseError,
    SampleSizeError,
    SymTestError,
)
from .estimator import SortedSample, delta_hat, delta_hat_naive
from .grammar import parse_family
from .jel import ajel_statistic, ajel_test, jel_statistic, jel_test, pseudo_values, solve_lambda
from .outcome import TestOutcome
from .rng import RandomStream, derive_stream_id
from .simulation import ResultTable, SimulationConfig, emit_table, estimate_rejection_rate, run_study

__version__ = "0.1.0"
