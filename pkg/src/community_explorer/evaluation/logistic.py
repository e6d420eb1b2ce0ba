"""
Two-parameter logistic regression of stage on community share.

Newton-Raphson (IRLS) with step halving. When a threshold on x splits the two
classes the likelihood has no finite maximizer; the fit then runs to
``max_iter`` and reports the last iterate with a separation flag.
"""

import logging
from typing import Mapping, Sequence, Tuple

import numpy as np
import polars as pl
from scipy.special import expit, log_expit

from community_explorer.errors import DegenerateDesign, SingleClass
from community_explorer.evaluation.models import LogisticFit

logger = logging.getLogger(__name__)

MAX_HALVINGS = 30


def detect_separation(x: np.ndarray, y: np.ndarray) -> str:
    """Classify the data as "none", "quasi" or "complete" separation."""
    x0, x1 = x[y == 0], x[y == 1]
    if x0.max() < x1.min() or x1.max() < x0.min():
        return "complete"
    if x0.max() == x1.min() or x1.max() == x0.min():
        return "quasi"
    return "none"


def log_likelihood(design: np.ndarray, y: np.ndarray, coef: np.ndarray) -> float:
    eta = design @ coef
    return float(np.sum(y * log_expit(eta) + (1 - y) * log_expit(-eta)))


def score(design: np.ndarray, y: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """Gradient of the log-likelihood."""
    return design.T @ (y - expit(design @ coef))


def _validate(x: Sequence[float], y: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.size != y.size:
        raise ValueError(f"x and y differ in length ({x.size} vs {y.size})")
    if x.size < 2:
        raise ValueError("logistic fit needs at least 2 observations")
    if not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("y must be binary (0/1)")
    if not np.isfinite(x).all():
        raise ValueError("x must be finite")
    if y.min() == y.max():
        raise SingleClass(f"All responses equal {int(y[0])}", {"class": int(y[0])})
    if x.min() == x.max():
        raise DegenerateDesign(f"Predictor is constant ({x[0]})", {"value": float(x[0])})
    return x, y


def logistic_fit(
    x: Sequence[float],
    y: Sequence[int],
    max_iter: int = 100,
    tol: float = 1e-10,
) -> LogisticFit:
    """Fit P{Y=1 | X=x} = expit(α + βx) by maximum likelihood.

    Args:
        x: Predictor values
        y: Binary responses
        max_iter: Newton iteration limit
        tol: Stop when the largest coefficient step is below tol · (1 + |coef|)

    Returns:
        LogisticFit with the estimate, convergence and separation status

    Raises:
        SingleClass: All y equal
        DegenerateDesign: x is constant
        ValueError: Mismatched lengths, fewer than 2 points or non-binary y
    """
    x, y = _validate(x, y)
    separation = detect_separation(x, y)
    if separation != "none":
        logger.warning(f"{separation.capitalize()} separation detected; slope diverges, reporting iterate {max_iter}")

    design = np.column_stack([np.ones_like(x), x])
    coef = np.zeros(2)
    current = log_likelihood(design, y, coef)
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        p = expit(design @ coef)
        gradient = design.T @ (y - p)
        hessian = design.T @ (design * (p * (1 - p))[:, None])
        step = np.linalg.lstsq(hessian, gradient, rcond=None)[0]

        # Halve until the likelihood does not drop
        candidate = coef + step
        value = log_likelihood(design, y, candidate)
        halvings = 0
        while value < current and halvings < MAX_HALVINGS:
            step = step / 2
            candidate = coef + step
            value = log_likelihood(design, y, candidate)
            halvings += 1
        coef, current = candidate, value
        logger.debug(f"IRLS iteration {iterations}: coef={coef.tolist()}, loglik={current:.12g}")

        if separation == "none" and np.max(np.abs(step)) <= tol * (1 + np.max(np.abs(coef))):
            converged = True
            break

    final_gradient = score(design, y, coef)
    fit = LogisticFit(
        alpha_hat=float(coef[0]),
        beta_hat=float(coef[1]),
        converged=converged,
        separation=separation,
        iterations=iterations,
        log_likelihood=current,
        gradient=(float(final_gradient[0]), float(final_gradient[1])),
    )
    logger.info(f"Logistic fit: alpha={fit.alpha_hat:.4f}, beta={fit.beta_hat:.4f}, converged={converged}")
    return fit


def logistic_curve(fit: LogisticFit, x_grid: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate π̂(x) = expit(α̂ + β̂x) on a grid."""
    x = np.asarray(x_grid, dtype=float)
    return x, expit(fit.alpha_hat + fit.beta_hat * x)


def stage_curves(fits: Mapping[str, LogisticFit], x_grid: Sequence[float]) -> pl.DataFrame:
    """Curves of several methods on a common grid, as rows (x, pi_hat, method)."""
    frames = []
    for method, fit in fits.items():
        x, pi_hat = logistic_curve(fit, x_grid)
        frames.append(pl.DataFrame({"x": x, "pi_hat": pi_hat, "method": [method] * x.size}))
    if not frames:
        return pl.DataFrame(schema={"x": pl.Float64, "pi_hat": pl.Float64, "method": pl.Utf8})
    return pl.concat(frames)
