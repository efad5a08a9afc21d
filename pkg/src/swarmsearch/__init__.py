"""Decentralized asynchronous swarm search over spatial signal fields.

Robots model the signal with Gaussian-process regression, plan waypoints by
maximizing a penalized exploit/explore acquisition over their reachable disk,
and share observations and plans only when they reach waypoints. Includes a
deterministic discrete-event simulator, an exhaustive-sweep baseline, and a
config-driven experiment harness.
"""

from .acquisition import (
    AcquisitionConfig,
    AcquisitionContext,
    CandidatePath,
    PeerPlan,
    acquisition_value,
    alpha_schedule,
    effective_penalty,
    exploit_term,
    explore_term,
    find_x_star,
    local_penalty,
)
from .field import (
    Arena,
    CaseConfig,
    GaussianComponent,
    GaussianMixtureField,
    case1_preset,
    case2_preset,
    evaluate,
    load_field_file,
    observe,
    save_field_file,
)
from .gp import (
    Dataset,
    GpFitConfig,
    GpHyperParams,
    GpModel,
    fit,
    log_likelihood,
    posterior_mean,
    posterior_std,
    posterior_std_augmented,
)
from .harness import ExperimentConfig, compare_table, run_seeds, sweep_table
from .metrics import MetricReport, mapping_rmse, relative_completion_time
from .planner import (
    PlannerConfig,
    PlanResult,
    WaypointPlanner,
    downsample,
    first_waypoint,
    plan_next_waypoint,
)
from .swarm import (
    Broadcast,
    Knowledge,
    RobotState,
    SimResult,
    SwarmConfig,
    deliver_and_snapshot,
    run_experiment,
    run_exhaustive_baseline,
)

__version__ = "0.1.0"
