"""Estimator-style front end so the analysis composes with sklearn pipelines.

`CLDAnalyzer` fits one image and exposes the diagram, the maps and the
percentage tables.  `CLDDescriptor` turns a batch of images into
32-dimensional feature vectors (the direction-mean lengths), usable as
a transformer step ahead of any downstream sklearn model.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import defect, directional, engine, optimize
from .errors import DegenerateCurveError, DegenerateImageError
from .image import compute_stats
from .validation import check_fraction, check_gray_image


class CLDAnalyzer(BaseEstimator):
    """Full analysis of a single grayscale image.

    Parameters
    ----------
    tau : float or None, default=None
        Saturation threshold as a unit ratio.  None tunes it
        automatically on fit.
    grid_size : int, default=64
        Threshold grid resolution used by the automatic tuning.
    k : int, default=10
        Subinterval count for the percentage tables.
    """

    def __init__(self, tau: float | None = None, grid_size: int = 64, k: int = 10):
        self.tau = tau
        self.grid_size = grid_size
        self.k = k

    def fit(self, X, y=None):
        img = check_gray_image(X)
        self.image_ = img
        self.stats_ = compute_stats(img)
        self.profile_ = engine.LengthProfile.from_image(img, self.stats_)
        if self.tau is None:
            self.optimization_ = optimize.optimize_tau(
                img, self.stats_, self.grid_size, profile=self.profile_
            )
            self.tau_ = self.optimization_.tau0
        else:
            if self.tau <= 0.0:
                raise ValueError("tau must be positive")
            self.optimization_ = None
            self.tau_ = float(self.tau)
        self.local_ = self.profile_.lengths_at(self.tau_)
        self.overall_ = engine.overall_cld(self.local_, self.tau_)
        return self

    def _check_fitted(self):
        if not hasattr(self, "overall_"):
            raise NotFittedError("call fit(image) first")

    def diagram(self) -> engine.OverallCLD:
        self._check_fitted()
        return self.overall_

    def support_map(self) -> np.ndarray:
        self._check_fitted()
        return engine.support_map(self.local_)

    def success_profile(self) -> defect.SuccessProfile:
        self._check_fitted()
        return defect.success_profile(self.local_, self.overall_)

    def coverage_table(self, k: int | None = None) -> defect.SuccessTable:
        return defect.coverage_table(self.success_profile(), k or self.k)

    def defect_map(
        self, coverage: float | None = None, tau_prime: float | None = None
    ) -> defect.DefectMap:
        """Vote-score map at an explicit tolerance or a coverage target."""
        self._check_fitted()
        if tau_prime is None:
            if coverage is None:
                raise ValueError("give either coverage or tau_prime")
            check_fraction(coverage, "coverage")
            _, tau_prime = defect.resolve_coverage(self.coverage_table(), coverage)
        return defect.defect_map(self.local_, self.overall_, tau_prime)

    def directional_map(self) -> directional.DirectionalDefectMap:
        self._check_fitted()
        return directional.directional_defect_map(self.local_, self.overall_)

    def defect_table(self, k: int | None = None) -> directional.DefectTable:
        return directional.defect_table(self.directional_map(), k or self.k)

    def directional_classification(
        self, defect_fraction: float | None = None, tau_dprime: float | None = None
    ) -> np.ndarray:
        """Defective-pixel mask at an explicit threshold or a percentage target."""
        ddmap = self.directional_map()
        if tau_dprime is None:
            if defect_fraction is None:
                raise ValueError("give either defect_fraction or tau_dprime")
            _, tau_dprime = directional.resolve_defect_percentage(
                self.defect_table(), defect_fraction
            )
        return directional.classify_defective(ddmap, tau_dprime)


class CLDDescriptor(TransformerMixin, BaseEstimator):
    """Extract the 32 direction-mean lengths as a feature vector.

    Parameters
    ----------
    tau : float or None, default=None
        Saturation threshold; None tunes it per image (slower but
        parameter free).  Directions without support map to 0.
    grid_size : int, default=64
        Grid resolution of the automatic tuning.
    """

    def __init__(self, tau: float | None = None, grid_size: int = 64):
        self.tau = tau
        self.grid_size = grid_size

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        rows = []
        for item in X:
            img = check_gray_image(item)
            stats = compute_stats(img)
            if self.tau is not None:
                tau = float(self.tau)
            else:
                try:
                    tau = optimize.optimize_tau(img, stats, self.grid_size).tau0
                except DegenerateCurveError as exc:
                    tau = exc.fallback_tau
                except DegenerateImageError:
                    # constant image: every length is 1 at any threshold
                    tau = 0.5
            local = engine.local_cld(img, stats, tau)
            overall = engine.overall_cld(local, tau)
            rows.append(np.where(
                overall.support_counts > 0, overall.mean_lengths, 0.0
            ))
        return np.asarray(rows)
