"""Logarithmic capacity toolkit for uniform interval levels.

Core objects: log-domain interval geometry (:mod:`logcap.intervals`),
measures with piecewise-constant densities (:mod:`logcap.measures`), the
closed-form pair-energy kernel with certified point-charge errors
(:mod:`logcap.pairkernel`, :mod:`logcap.energy`), capacity bounds and
schedule certification (:mod:`logcap.bounds`), and the experiment runners
behind the ``logcap`` CLI (:mod:`logcap.experiments`).
"""

from .bounds import (
    BoundReport,
    CoverDescription,
    MeasuringFunction,
    PhaseLabel,
    TailSeries,
    UrsellRow,
    UrsellSchedule,
    capacity_upper_bound,
    cs_lower_energy_bound,
    doubly_exponential_witness,
    h_volume_upper,
    phase_classify,
    tail_series,
    ursell_schedule,
)
from .energy import (
    EnergyBreakdown,
    EvalPolicy,
    KernelAntiderivative,
    TruncationLevel,
    energy,
    mutual_energy,
    mutual_energy_const,
    self_energy_const,
    truncated_energy,
    uniform_level_energy_fast,
)
from .experiments import (
    CounterexampleParams,
    ExperimentConfig,
    ResultTable,
    emit,
    run_averaged_convergence,
    run_counterexample_check,
    run_phase_scan,
    run_redistribution_convergence,
)
from .errors import (
    CutoffError,
    DisjointnessError,
    GeometryError,
    InvalidArgumentError,
    LogCapError,
    OracleBudgetError,
    PolicyError,
    ScheduleDomainError,
    WitnessError,
    ZeroMassError,
)
from .intervals import (
    Interval,
    IntervalUnion,
    disjointify,
    interval_relation,
    make_uniform_level,
    min_center_gap,
    set_difference_closed,
    set_intersection,
    shared_centers,
)
from .logdomain import LogLength, Rational
from .measures import (
    ArcsineReference,
    CutoffFamily,
    Slab,
    StepMeasure,
    WeightVector,
    arcsine_reference,
    averaged_redistribute,
    cutoff_raw_mass,
    cutoff_step_density,
    redistribute,
)
from .primes import PrimeWindow, primes_in_window
from .quadrature import quadrature_oracle
from .schedules import (
    CustomTable,
    GeometricDyadic,
    PowerExp,
    RadiusSchedule,
    SubexpRoot,
    parse_schedule,
    schedule_radius,
)
from .sums import backend_name

__version__ = "0.1.0"

__all__ = [
    "ArcsineReference",
    "BoundReport",
    "CounterexampleParams",
    "CoverDescription",
    "CustomTable",
    "CutoffError",
    "CutoffFamily",
    "DisjointnessError",
    "EnergyBreakdown",
    "EvalPolicy",
    "ExperimentConfig",
    "GeometricDyadic",
    "GeometryError",
    "Interval",
    "IntervalUnion",
    "InvalidArgumentError",
    "KernelAntiderivative",
    "LogCapError",
    "LogLength",
    "MeasuringFunction",
    "OracleBudgetError",
    "PhaseLabel",
    "PolicyError",
    "PowerExp",
    "PrimeWindow",
    "RadiusSchedule",
    "Rational",
    "ResultTable",
    "ScheduleDomainError",
    "Slab",
    "StepMeasure",
    "SubexpRoot",
    "TailSeries",
    "TruncationLevel",
    "UrsellRow",
    "UrsellSchedule",
    "WeightVector",
    "WitnessError",
    "ZeroMassError",
    "arcsine_reference",
    "averaged_redistribute",
    "backend_name",
    "capacity_upper_bound",
    "cs_lower_energy_bound",
    "cutoff_raw_mass",
    "cutoff_step_density",
    "disjointify",
    "doubly_exponential_witness",
    "emit",
    "energy",
    "h_volume_upper",
    "interval_relation",
    "make_uniform_level",
    "min_center_gap",
    "mutual_energy",
    "mutual_energy_const",
    "parse_schedule",
    "phase_classify",
    "primes_in_window",
    "quadrature_oracle",
    "redistribute",
    "run_averaged_convergence",
    "run_counterexample_check",
    "run_phase_scan",
    "run_redistribution_convergence",
    "schedule_radius",
    "self_energy_const",
    "set_difference_closed",
    "set_intersection",
    "shared_centers",
    "tail_series",
    "truncated_energy",
    "uniform_level_energy_fast",
    "ursell_schedule",
]
