"""Resource limits and counters shared by unification, rewriting and solving."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Limits", "Stats", "ResourceLimit", "BranchLimitExceeded", "StepLimitExceeded"]


class ResourceLimit(Exception):
    """A configured cap was hit; the answer is unknown, never wrong."""


class BranchLimitExceeded(ResourceLimit):
    pass


class StepLimitExceeded(ResourceLimit):
    pass


@dataclass(frozen=True)
class Limits:
    branch_limit: int = 100_000
    step_limit: int = 1_000_000


@dataclass
class Stats:
    branches: int = 0
    rule_applications: int = 0

    def rule(self, limits: Limits, n: int = 1) -> None:
        self.rule_applications += n
        if self.rule_applications > limits.step_limit:
            raise StepLimitExceeded(f"more than {limits.step_limit} rule applications")

    def branch(self, limits: Limits, n: int = 1) -> None:
        self.branches += n
        if self.branches > limits.branch_limit:
            raise BranchLimitExceeded(f"more than {limits.branch_limit} branches")

    def as_dict(self) -> dict[str, int]:
        return {"branches": self.branches, "rule_applications": self.rule_applications}
