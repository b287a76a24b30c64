"""Structural equation models over catalog graphs and their exact moments.

Each graph induces a linear Gaussian model: every variable is the sum of
coefficient * parent over its parents plus independent normal noise. Error
standard deviations follow the generating rule sd = 1 (no parents),
sqrt(2)/sqrt(3) (one parent), 1/sqrt(3) (two parents). Note this rule does
NOT give unit variance to a two-parent child with correlated parents
(e.g. Var(W) = 1 + 2/(3*sqrt(3)) for the collider with X->Y); we keep the
mechanical rule because it is what the generating code defines.

From the exact covariance matrix we compute the population estimand of
each adjustment technique — the slope it converges to with unlimited data —
which serves as the analytic oracle for the Monte Carlo results.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graphs import (
    CatalogEntry,
    CausalGraph,
    EDGE_COEF,
    enumerate_catalog,
    true_effect,
)

_SD_BY_PARENT_COUNT = (1.0, math.sqrt(2.0) / math.sqrt(3.0), 1.0 / math.sqrt(3.0))


class TechniqueId(str, Enum):
    """The six adjustment techniques, in their definition order."""

    SIMPLE_REGRESSION = "simple_regression"
    MULTIPLE_REGRESSION = "multiple_regression"
    RESIDUAL_X = "residual_x"
    RESIDUAL_Y = "residual_y"
    RESIDUAL_XY = "residual_xy"
    FITTED_X = "fitted_x"

    @property
    def label(self) -> str:
        return _TECH_LABELS[self]


_TECH_LABELS = {
    TechniqueId.SIMPLE_REGRESSION: "Simple Regression",
    TechniqueId.MULTIPLE_REGRESSION: "Multiple Regression",
    TechniqueId.RESIDUAL_X: "Residual X",
    TechniqueId.RESIDUAL_Y: "Residual Y",
    TechniqueId.RESIDUAL_XY: "Residual X and Y",
    TechniqueId.FITTED_X: "Fitted X",
}

TECHNIQUES = tuple(TechniqueId)


@dataclass(frozen=True, eq=False)
class StructuralModel:
    """Coefficient matrix B (B[child, parent]), error SDs, topological order."""

    coeff: np.ndarray
    error_sd: np.ndarray
    topo_order: tuple[int, int, int]

    def __post_init__(self):
        coeff = np.asarray(self.coeff, dtype=np.float64)
        error_sd = np.asarray(self.error_sd, dtype=np.float64)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "error_sd", error_sd)
        if coeff.shape != (3, 3) or error_sd.shape != (3,):
            raise ValueError("expected 3x3 coefficient matrix and 3 error SDs")
        if np.any(~np.isfinite(coeff)) or np.any(~np.isfinite(error_sd)) or np.any(error_sd < 0):
            raise ValueError("coefficients must be finite and error SDs nonnegative")
        if sorted(self.topo_order) != [0, 1, 2]:
            raise ValueError(f"topo_order must permute (0, 1, 2), got {self.topo_order}")
        p = list(self.topo_order)
        if np.any(np.triu(coeff[np.ix_(p, p)]) != 0.0):
            raise ValueError("coefficients must be strictly lower triangular in topo order")


def build_model(graph: CausalGraph) -> StructuralModel:
    """Structural model of a graph: +-1/sqrt(3) coefficients, rule-based SDs."""
    coeff = np.zeros((3, 3))
    n_parents = [0, 0, 0]
    for node in range(3):
        for parent, c in graph.parents(node):
            coeff[node, parent] = c
            n_parents[node] += 1
    error_sd = np.array([_SD_BY_PARENT_COUNT[k] for k in n_parents])

    # Kahn's algorithm with smallest-index tie-break, for a stable order.
    remaining = {0, 1, 2}
    order: list[int] = []
    while remaining:
        ready = sorted(
            v for v in remaining
            if all(p not in remaining for p, _ in graph.parents(v))
        )
        order.append(ready[0])
        remaining.remove(ready[0])
    return StructuralModel(coeff=coeff, error_sd=error_sd, topo_order=tuple(order))


@dataclass(frozen=True, eq=False)
class PopulationCovariance:
    """Exact 3x3 covariance of (X, W, Y) under a structural model."""

    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.float64)
        object.__setattr__(self, "sigma", sigma)
        if sigma.shape != (3, 3):
            raise ValueError("covariance must be 3x3")
        if not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-12):
            raise ValueError("covariance must be symmetric")
        # Positive definiteness via leading principal minors.
        if not (
            sigma[0, 0] > 0.0
            and np.linalg.det(sigma[:2, :2]) > 0.0
            and np.linalg.det(sigma) > 0.0
        ):
            raise ValueError("covariance must be positive definite")

    @property
    def s_xx(self) -> float:
        return float(self.sigma[0, 0])

    @property
    def s_xw(self) -> float:
        return float(self.sigma[0, 1])

    @property
    def s_xy(self) -> float:
        return float(self.sigma[0, 2])

    @property
    def s_ww(self) -> float:
        return float(self.sigma[1, 1])

    @property
    def s_wy(self) -> float:
        return float(self.sigma[1, 2])

    @property
    def s_yy(self) -> float:
        return float(self.sigma[2, 2])


def population_covariance(model: StructuralModel) -> PopulationCovariance:
    """Sigma = M D M^T with M = (I - B)^{-1} = I + B + B^2 (B is nilpotent
    for a 3-node DAG, so the truncated series is the exact inverse)."""
    b = model.coeff
    m = np.eye(3) + b + b @ b
    sigma = m @ np.diag(model.error_sd**2) @ m.T
    sigma = (sigma + sigma.T) / 2.0
    return PopulationCovariance(sigma=sigma)


def population_estimand(cov: PopulationCovariance, technique: TechniqueId) -> float | None:
    """Asymptotic slope of a technique; None where it is undefined
    (Fitted X with sigma_xw = 0; W-conditioning with a singular design)."""
    if technique is TechniqueId.SIMPLE_REGRESSION:
        return cov.s_xy / cov.s_xx
    if technique in (
        TechniqueId.MULTIPLE_REGRESSION,
        TechniqueId.RESIDUAL_X,
        TechniqueId.RESIDUAL_XY,
    ):
        det = cov.s_xx * cov.s_ww - cov.s_xw**2
        if det == 0.0:
            return None
        return (cov.s_xy * cov.s_ww - cov.s_wy * cov.s_xw) / det
    if technique is TechniqueId.RESIDUAL_Y:
        return (cov.s_xy - cov.s_wy * cov.s_xw / cov.s_ww) / cov.s_xx
    if technique is TechniqueId.FITTED_X:
        if cov.s_xw == 0.0:
            return None
        return cov.s_wy / cov.s_xw
    raise ValueError(f"unknown technique {technique!r}")


@dataclass(frozen=True)
class EstimandRow:
    graph_id: int
    notation: str
    w_class: str
    xy_relation: str
    technique: TechniqueId
    estimand: float | None
    true_effect: float
    bias: float | None


def estimand_table(entries=None) -> list[EstimandRow]:
    """One row per (catalog entry x technique); bias = estimand - true effect."""
    if entries is None:
        entries = enumerate_catalog()
    rows = []
    for entry in entries:
        cov = population_covariance(build_model(entry.graph))
        target = true_effect(entry.graph)
        for technique in TECHNIQUES:
            estimand = population_estimand(cov, technique)
            rows.append(
                EstimandRow(
                    graph_id=entry.id,
                    notation=entry.notation,
                    w_class=entry.graph_class.w_class.value,
                    xy_relation=entry.graph_class.xy_relation.value,
                    technique=technique,
                    estimand=estimand,
                    true_effect=target,
                    bias=None if estimand is None else estimand - target,
                )
            )
    return rows


def estimand_table_csv(rows=None) -> str:
    """CSV export; undefined estimands render as empty cells."""
    if rows is None:
        rows = estimand_table()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["graph_id", "notation", "w_class", "xy_relation", "technique",
         "estimand", "true_effect", "bias"]
    )
    for r in rows:
        writer.writerow(
            [
                r.graph_id,
                r.notation,
                r.w_class,
                r.xy_relation,
                r.technique.value,
                "" if r.estimand is None else repr(r.estimand),
                repr(r.true_effect),
                "" if r.bias is None else repr(r.bias),
            ]
        )
    return buf.getvalue()


def catalog_models(entries=None) -> dict[int, StructuralModel]:
    if entries is None:
        entries = enumerate_catalog()
    return {e.id: build_model(e.graph) for e in entries}


def catalog_estimands(entries=None) -> dict[tuple[int, TechniqueId], float | None]:
    return {(r.graph_id, r.technique): r.estimand for r in estimand_table(entries)}


__all__ = [
    "EDGE_COEF",
    "EstimandRow",
    "PopulationCovariance",
    "StructuralModel",
    "TECHNIQUES",
    "TechniqueId",
    "build_model",
    "catalog_estimands",
    "catalog_models",
    "estimand_table",
    "estimand_table_csv",
    "population_covariance",
    "population_estimand",
]
