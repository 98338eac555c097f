"""Pre-deployment planning toolkit for rail-mounted pick-and-place cells
shared with human operators: place-side packing, swarm-optimized base
poses and task order, and distance-based speed scaling, all evaluated on
an internal kinematic model of the cell."""

__version__ = "0.1.0"

from ._kernel import BACKEND

__all__ = ["BACKEND", "__version__"]
