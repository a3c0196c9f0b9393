"""Estimator-style wrappers: fit on a group or model, transform points."""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_group, check_points
from .errors import FaceEmpty
from .faces import SIGNBOX, FacePoint, _lex
from .groups import DEFAULT_CAP
from .quotient import orbit_space
from .resolve import GeometricModel, canonical_resolution
from .strata import isotropy_poset


class IsotropyStratifier(TransformerMixin, BaseEstimator):
    """Fit on a finite group, map points to isotropy class ids."""

    def __init__(self, cap: int = DEFAULT_CAP):
        self.cap = cap

    def fit(self, X, y=None):
        self.group_ = check_group(X, self.cap)
        self.poset_ = isotropy_poset(self.group_)
        self.n_types_ = len(self.poset_.types)
        self.principal_ = self.poset_.principal
        return self

    def transform(self, X):
        check_is_fitted(self, "poset_")
        pts = check_points(X, self.group_.ambient_dim)
        return [self.poset_.class_of_point(p) for p in pts]


class CanonicalResolver(BaseEstimator):
    """Fit on a geometric model; transform interior points to resolved components."""

    def __init__(self, samples_per_face: int = 5, seed: int = 0, truncate_last_step: bool = False,
                 verify: bool = True):
        self.samples_per_face = samples_per_face
        self.seed = seed
        self.truncate_last_step = truncate_last_step
        self.verify = verify

    def fit(self, X, y=None):
        if not isinstance(X, GeometricModel):
            raise TypeError("CanonicalResolver.fit expects a GeometricModel")
        self.outcome_ = canonical_resolution(X, self.truncate_last_step, self.samples_per_face, self.seed,
                                             self.verify)
        self.trace_ = self.outcome_.trace
        self.resolved_ = self.outcome_.resolved
        self.report_ = self.outcome_.report
        self.components_ = list(self.resolved_.components)
        return self

    def transform(self, X):
        """Index into ``components_`` of each interior point off the blown centres."""
        check_is_fitted(self, "outcome_")
        model = self.outcome_.model
        pts = check_points(X, model.dimension)
        geo = self.outcome_.space.geometry
        index = {c: i for i, c in enumerate(self.components_)}
        out = []
        for p in pts:
            if model.kind == SIGNBOX:
                inside = all(abs(x) < 1 for x in p)
            else:
                inside = sum(x * x for x in p) < 1
            if not inside:
                raise ValueError(f"{p} is not an interior point of the model")
            try:
                key = geo.locate(FacePoint([], False, set(), _lex(p), []))
            except FaceEmpty:
                raise ValueError(f"{p} lies on a blown centre") from None
            out.append(index[key])
        return out


class OrbitSpace(BaseEstimator):
    """Fit on a model (or a fitted resolver) and map components to their orbit representatives."""

    def __init__(self, samples_per_face: int = 5, seed: int = 0):
        self.samples_per_face = samples_per_face
        self.seed = seed

    def fit(self, X, y=None):
        if isinstance(X, CanonicalResolver):
            check_is_fitted(X, "outcome_")
            self.resolver_ = X
        else:
            self.resolver_ = CanonicalResolver(self.samples_per_face, self.seed).fit(X)
        self.orbit_space_ = orbit_space(self.resolver_.outcome_)
        self.complex_ = self.orbit_space_.complex
        self.components_ = list(self.complex_.components)
        return self

    def transform(self, X):
        check_is_fitted(self, "orbit_space_")
        comps = self.resolver_.transform(X)
        index = {c: i for i, c in enumerate(self.components_)}
        return [index[self.orbit_space_.orbit_of[self.resolver_.components_[i]]] for i in comps]
