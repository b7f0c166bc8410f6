"""Hardy-like contextuality proofs on odd measurement cycles of a qutrit."""

from .bounds import (
    hardy_max_bound,
    nchv_cycle_bound,
    nchv_cycle_bound_closed_form,
    nchv_implication_check,
    quantum_cycle_bound,
)
from .errors import (
    ContextualityError,
    DegenerateVector,
    Infeasible,
    InfeasibleAngles,
    IncompatiblePair,
    InvalidScenario,
    ParallelInputs,
    TooLarge,
    UnsupportedFormat,
)
from .graph import OrthogonalityGraph, build_graph, export_graph, is_cycle
from .linalg import inner, joint_prob, normalize, plane_normal, single_prob
from .optimize import OptimizationResult, optimize_cycle_max, optimize_hardy_max, parametrize
from .sampler import SampleReport, run_experiment, sample_context
from .scenario import (
    ConditionReport,
    CycleScenario,
    HardyFamilyParams,
    check_conditions,
    cycle_sum,
    hardy_family,
    hardy_prob,
    ks_block,
    pentagon,
    solve_thetas,
    validate_scenario,
)

__version__ = "0.1.0"
