"""Uniform result record for verified identities and inequalities."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class IdentityReport:
    """Two sides of an identity (or inequality), their residual, and a scale.

    ``residual`` is always ``lhs - rhs`` in the convention of the producing
    operation; ``scale`` is the magnitude the residual should be judged
    against (never zero).  ``passed`` applies the producer's tolerance.
    """

    label: str
    lhs: float
    rhs: float
    residual: float
    scale: float
    tol: float
    passed: bool
    note: str = ""

    def rel_residual(self) -> float:
        return abs(self.residual) / self.scale

    def as_dict(self) -> dict:
        # Plain Python scalars so the dict is json.dumps-able even when the
        # producer computed fields with numpy.
        return {
            "label": str(self.label),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "residual": float(self.residual),
            "scale": float(self.scale),
            "tol": float(self.tol),
            "passed": bool(self.passed),
            "note": str(self.note),
        }
