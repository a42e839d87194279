"""In-memory analysis sessions with per-parameter result caching.

Every cached entry is a pure function of (image, parameters), so cache
hits are bit-identical to fresh computation.  Sessions are evicted
least-recently-used; nothing persists.
"""

from __future__ import annotations

import threading
import uuid
from collections import OrderedDict

import numpy as np

from . import defect, directional, engine, optimize
from .image import ImageStats, compute_stats

DEFAULT_MAX_SESSIONS = 16


class AnalysisSession:
    """One uploaded image plus lazily computed, memoized results."""

    def __init__(self, image: np.ndarray):
        self.session_id = uuid.uuid4().hex
        self.image = image
        self.stats: ImageStats = compute_stats(image)
        self._lock = threading.RLock()
        self._profile: engine.LengthProfile | None = None
        self._local: dict[float, np.ndarray] = {}
        self._overall: dict[float, engine.OverallCLD] = {}
        self._smap: dict[float, np.ndarray] = {}
        self._success: dict[float, defect.SuccessProfile] = {}
        self._ddmap: dict[float, directional.DirectionalDefectMap] = {}
        self._coverage_tables: dict[tuple[float, int], defect.SuccessTable] = {}
        self._defect_tables: dict[tuple[float, int], directional.DefectTable] = {}
        self._optimization: dict[int, optimize.OptimizationResult] = {}

    def profile(self) -> engine.LengthProfile:
        with self._lock:
            if self._profile is None:
                self._profile = engine.LengthProfile.from_image(self.image, self.stats)
            return self._profile

    def local(self, tau: float) -> np.ndarray:
        # the multi-threshold profile costs a full walk per ray; build
        # it only for optimization, otherwise use the single-threshold
        # path (both produce bit-identical grids)
        with self._lock:
            if tau not in self._local:
                if self._profile is not None:
                    self._local[tau] = self._profile.lengths_at(tau)
                else:
                    self._local[tau] = engine.local_cld(self.image, self.stats, tau)
            return self._local[tau]

    def overall(self, tau: float) -> engine.OverallCLD:
        with self._lock:
            if tau not in self._overall:
                self._overall[tau] = engine.overall_cld(self.local(tau), tau)
            return self._overall[tau]

    def support_map(self, tau: float) -> np.ndarray:
        with self._lock:
            if tau not in self._smap:
                self._smap[tau] = engine.support_map(self.local(tau))
            return self._smap[tau]

    def optimization(self, grid_size: int = 64) -> optimize.OptimizationResult:
        with self._lock:
            if grid_size not in self._optimization:
                self._optimization[grid_size] = optimize.optimize_tau(
                    self.image, self.stats, grid_size, profile=self.profile()
                )
            return self._optimization[grid_size]

    def success_profile(self, tau: float) -> defect.SuccessProfile:
        with self._lock:
            if tau not in self._success:
                self._success[tau] = defect.success_profile(
                    self.local(tau), self.overall(tau)
                )
            return self._success[tau]

    def coverage_table(self, tau: float, k: int) -> defect.SuccessTable:
        with self._lock:
            key = (tau, k)
            if key not in self._coverage_tables:
                self._coverage_tables[key] = defect.coverage_table(
                    self.success_profile(tau), k
                )
            return self._coverage_tables[key]

    def directional_map(self, tau: float) -> directional.DirectionalDefectMap:
        with self._lock:
            if tau not in self._ddmap:
                self._ddmap[tau] = directional.directional_defect_map(
                    self.local(tau), self.overall(tau)
                )
            return self._ddmap[tau]

    def defect_table(self, tau: float, k: int) -> directional.DefectTable:
        with self._lock:
            key = (tau, k)
            if key not in self._defect_tables:
                self._defect_tables[key] = directional.defect_table(
                    self.directional_map(tau), k
                )
            return self._defect_tables[key]


class SessionStore:
    """Thread-safe LRU store of analysis sessions."""

    def __init__(self, max_sessions: int = DEFAULT_MAX_SESSIONS):
        self.max_sessions = max_sessions
        self._lock = threading.Lock()
        self._sessions: OrderedDict[str, AnalysisSession] = OrderedDict()

    def create(self, image: np.ndarray) -> AnalysisSession:
        session = AnalysisSession(image)
        with self._lock:
            self._sessions[session.session_id] = session
            while len(self._sessions) > self.max_sessions:
                self._sessions.popitem(last=False)
        return session

    def get(self, session_id: str) -> AnalysisSession | None:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None:
                self._sessions.move_to_end(session_id)
            return session
