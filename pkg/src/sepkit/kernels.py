"""Public kernel surface, bound to the backend chosen by `sepkit.backend`."""

from . import backend

if backend.USE_NUMBA:
    from . import _kernels_nb as _impl
else:
    from . import _kernels_np as _impl

ball_single_event = _impl.ball_single_event
ball_all_event = _impl.ball_all_event
ball_angle_event = _impl.ball_angle_event
pairwise_eps_orthogonal = _impl.pairwise_eps_orthogonal
count_eps_violations = _impl.count_eps_violations
cube_single_event = _impl.cube_single_event
cube_all_event = _impl.cube_all_event

__all__ = [
    "ball_single_event",
    "ball_all_event",
    "ball_angle_event",
    "pairwise_eps_orthogonal",
    "count_eps_violations",
    "cube_single_event",
    "cube_all_event",
]
