"""Exception and warning types shared across the package."""


class CellPlanError(Exception):
    """Base class for all cellplan errors."""


class ScenarioError(CellPlanError):
    """A scenario or schedule file could not be parsed."""


class LayoutInfeasible(CellPlanError):
    """Box capacities cannot hold all items of some type."""


class DimensionMismatch(CellPlanError):
    """Joint vector length does not match the kinematic chain."""


class OutOfReach(CellPlanError):
    """IK target lies outside the workspace radius of the arm."""


class IkDidNotConverge(CellPlanError):
    """Damped least-squares iteration exhausted its budget."""


class NegativeDistance(CellPlanError):
    """Motion profile asked for a negative travel distance."""


class TimeOutOfRange(CellPlanError):
    """Profile sample time outside [0, duration]."""


class BadKappa(CellPlanError):
    """Scaling level outside the policy's level set."""


class AllInfinite(CellPlanError):
    """Every travel-time candidate carries the infeasibility marker."""


class AllInfeasible(CellPlanError):
    """A swarm run never found a feasible rollout for an item."""

    def __init__(self, item: int, reason: str = "no feasible rollout"):
        super().__init__(f"item {item}: {reason}")
        self.item = item
        self.reason = reason


class PlanInfeasible(CellPlanError):
    """The outer planning loop cannot make progress."""


class TooFewSuccesses(CellPlanError):
    """Calibration collected fewer feasible rollouts than required."""


class EmptyBoxWarning(UserWarning):
    """A box admits zero spots for its item type."""


class DegenerateVarianceWarning(UserWarning):
    """A calibration dataset collapsed to (near) zero variance."""


class WeightSumWarning(UserWarning):
    """KPI weights do not sum to one."""
