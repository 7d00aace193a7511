"""Feature-based visual servoing toolkit (C++ core)."""

from ._core import (
    TRAJECTORY_COLUMNS,
    Correction,
    GoalSpec,
    GridTooLarge,
    HoleObservation,
    IllConditioned,
    InvalidObservation,
    JacobianVariant,
    Limits,
    ParseError,
    Pose,
    RunConfig,
    SensorModel,
    ServokitError,
    ValidationError,
    build_jacobian,
    check_jacobian,
    condition_number,
    euler_to_rotation,
    feature_error,
    hole_points,
    limit_corrections,
    load_config,
    newton_step,
    parse_config,
    rotation_to_euler,
    run_closed_loop,
    run_scan,
    servo_step,
    trajectory_csv,
    wrap_angle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
