"""Cross-sectional Sharpe-vs-skewness analysis and the PCA diagnostic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateX, SingularWindow, TooFewRows, TooShort
from .portfolio import Panel

ON_LINE = "on-line"
BELOW_LINE = "below-line"
PURE_ALPHA = "pure-alpha"


@dataclass(frozen=True)
class CrossSectionRow:
    name: str
    sharpe: float
    ann_vol: float
    zeta_star: float
    err_sharpe: float = 0.0
    err_zeta_star: float = 0.0
    included_in_fit: bool = True


@dataclass(frozen=True)
class CrossSection:
    rows: list[CrossSectionRow]

    def __post_init__(self) -> None:
        names = [r.name for r in self.rows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate strategy names in cross-section")
        for r in self.rows:
            if r.err_sharpe < 0 or r.err_zeta_star < 0:
                raise ValueError(f"{r.name}: negative error bar")


@dataclass(frozen=True)
class RegressionResult:
    """Fit S = a + b * (-zeta*) with a 2-sigma classification channel."""

    intercept: float
    slope: float
    corr_skew_sr: float
    corr_vol_sr: float
    channel_halfwidth: float
    classifications: dict[str, str]

    def as_dict(self) -> dict:
        return {
            "intercept": self.intercept,
            "slope": self.slope,
            "corr_skew_sr": self.corr_skew_sr,
            "corr_vol_sr": self.corr_vol_sr,
            "channel_halfwidth": self.channel_halfwidth,
            "classifications": dict(self.classifications),
        }


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(np.sum(xc * xc)) * float(np.sum(yc * yc)))
    if denom == 0.0:
        return float("nan")
    return float(np.sum(xc * yc) / denom)


def cross_section_stats(cs: CrossSection) -> RegressionResult:
    """OLS of Sharpe on -zeta* plus correlations and the 2-sigma channel.

    The fit uses only rows flagged included_in_fit (the pure-alpha
    candidates are held out of it); correlations and the channel use
    every supplied row. The channel half-width is twice the median
    combined error sqrt(err_S^2 + b^2 err_z^2); rows more than one
    half-width above the line classify as pure-alpha, below as
    below-line, otherwise on-line.
    """
    rows = cs.rows
    fit_rows = [r for r in rows if r.included_in_fit]
    if len(fit_rows) < 3:
        raise TooFewRows(f"{len(fit_rows)} rows included in fit, need 3")
    x_fit = np.array([-r.zeta_star for r in fit_rows])
    y_fit = np.array([r.sharpe for r in fit_rows])
    xc = x_fit - x_fit.mean()
    sxx = float(np.sum(xc * xc))
    if sxx == 0.0:
        raise DegenerateX("all fitted zeta* values are equal")
    slope = float(np.sum(xc * (y_fit - y_fit.mean())) / sxx)
    intercept = float(y_fit.mean() - slope * x_fit.mean())

    zs_all = np.array([r.zeta_star for r in rows])
    sr_all = np.array([r.sharpe for r in rows])
    vol_all = np.array([r.ann_vol for r in rows])
    combined = np.array(
        [math.sqrt(r.err_sharpe**2 + slope**2 * r.err_zeta_star**2) for r in rows]
    )
    halfwidth = 2.0 * float(np.median(combined))

    classes: dict[str, str] = {}
    for r in rows:
        resid = r.sharpe - (intercept + slope * (-r.zeta_star))
        if resid > halfwidth:
            classes[r.name] = PURE_ALPHA
        elif resid < -halfwidth:
            classes[r.name] = BELOW_LINE
        else:
            classes[r.name] = ON_LINE

    return RegressionResult(
        intercept=intercept,
        slope=slope,
        corr_skew_sr=_pearson(zs_all, sr_all),
        corr_vol_sr=_pearson(vol_all, sr_all),
        channel_halfwidth=halfwidth,
        classifications=classes,
    )


# ---------------------------------------------------------------------------
# Rolling PCA of the strategy correlation matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindowSpectrum:
    end_date: np.datetime64
    assets: list[str]
    eigenvalues: list[float]          # descending
    separation: float | None          # lambda1/lambda2, None if lambda2 ~ 0


@dataclass(frozen=True)
class PcaSpectrum:
    windows: list[WindowSpectrum]
    top_vector_stability: float | None = field(default=None)


def _pairwise_corr(block: np.ndarray) -> np.ndarray:
    """Pairwise-complete Pearson correlation matrix of panel columns."""
    k = block.shape[1]
    corr = np.eye(k)
    finite = np.isfinite(block)
    for i in range(k):
        for j in range(i + 1, k):
            both = finite[:, i] & finite[:, j]
            if both.sum() < 2:
                corr[i, j] = corr[j, i] = 0.0
                continue
            xi = block[both, i]
            xj = block[both, j]
            xi = xi - xi.mean()
            xj = xj - xj.mean()
            denom = math.sqrt(float(np.sum(xi * xi)) * float(np.sum(xj * xj)))
            corr[i, j] = corr[j, i] = 0.0 if denom == 0.0 else float(np.sum(xi * xj) / denom)
    return corr


def pca_spectrum(panel: Panel, window: int = 252, step: int = 21, min_coverage: float = 0.8) -> PcaSpectrum:
    """Rolling eigenvalue spectra of the strategy correlation matrix.

    Each window keeps the strategies with at least `min_coverage` of its
    dates populated, builds the pairwise-complete correlation matrix and
    reports eigenvalues (descending) and the lambda1/lambda2 separation.
    Stability is the mean |cosine| between top eigenvectors of
    consecutive windows, compared on their common strategies.
    """
    if len(panel.assets) < 2:
        raise TooFewRows("need at least 2 strategies")
    n = panel.dates.size
    if window > n:
        raise TooShort(f"window {window} exceeds history {n}")
    windows: list[WindowSpectrum] = []
    tops: list[tuple[list[str], np.ndarray]] = []
    for start in range(0, n - window + 1, step):
        block = panel.values[start : start + window]
        coverage = np.isfinite(block).sum(axis=0) / window
        cols = np.flatnonzero(coverage >= min_coverage)
        if cols.size < 2:
            continue
        sub = block[:, cols]
        for c in range(sub.shape[1]):
            col = sub[:, c][np.isfinite(sub[:, c])]
            if col.size and np.ptp(col) == 0.0:
                raise SingularWindow(
                    f"{panel.assets[cols[c]]} is constant in the window ending {panel.dates[start + window - 1]}"
                )
        corr = _pairwise_corr(sub)
        evals, evecs = np.linalg.eigh(corr)
        order = np.argsort(evals)[::-1]
        evals = evals[order]
        top = evecs[:, order[0]]
        sep = float(evals[0] / evals[1]) if evals[1] > 1e-12 else None
        names = [panel.assets[c] for c in cols]
        windows.append(
            WindowSpectrum(
                end_date=panel.dates[start + window - 1],
                assets=names,
                eigenvalues=[float(v) for v in evals],
                separation=sep,
            )
        )
        tops.append((names, top))

    stability = None
    cosines = []
    for (na, va), (nb, vb) in zip(tops[:-1], tops[1:]):
        common = [x for x in na if x in set(nb)]
        if len(common) < 2:
            continue
        sa = np.array([va[na.index(x)] for x in common])
        sb = np.array([vb[nb.index(x)] for x in common])
        norm = float(np.linalg.norm(sa) * np.linalg.norm(sb))
        if norm > 0:
            cosines.append(abs(float(np.dot(sa, sb)) / norm))
    if cosines:
        stability = float(np.mean(cosines))
    return PcaSpectrum(windows=windows, top_vector_stability=stability)
