"""Complex-action kinematics and the diffusion ensemble of the trembling motion."""

from .states import *  # noqa: F401,F403
from .ensemble import (  # noqa: F401
    BudgetExceededError,
    EstimatorResult,
    StepSizeError,
    TrajectoryEnsemble,
    diffusion_coefficient,
    estimate_velocities_from_paths,
    fit_slope,
    ou_effective_samples,
    richardson_velocities,
    simulate_ensemble,
)
