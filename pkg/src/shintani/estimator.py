"""scikit-learn style facade over domain construction and the signed count.

There is nothing to learn from data here: ``fit`` ignores ``X`` beyond a
shape check and builds the domain from the constructor parameters.  The
facade exists so the domain can sit inside sklearn pipelines and tooling
(``get_params``, ``clone``, ``check_is_fitted``).

Inputs are rows of I(x) = (x_1, ..., x_r1, Re x_{r1+1}, Im x_{r1+1}, ...),
the real coordinates of a point of R^r1 x C^r2.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .domain import AMBIGUOUS, build_signed_domain, contains
from .exceptions import InvalidFieldSpec
from .numfield import NumberField
from .verify import signed_count_detail


class SignedFundamentalDomain(BaseEstimator):
    """Signed fundamental domain for the totally positive units of a field.

    Parameters
    ----------
    min_poly : sequence of int
        Ascending coefficients of a monic irreducible polynomial.
    units : sequence of sequences
        r = r1 + r2 - 1 totally positive units in power-basis coordinates.
    N : sequence of int
        Sector counts, one per complex place, each >= 3.
    twister : Twister or None
        Explicit twister; constructed when None.
    precision_bits : int
        Working precision for certified numerics.
    tolerance : float or str
        Relative tolerance below which a numeric membership is ambiguous.
    bound : int or None
        Fixed enumeration box; None derives one per point.
    """

    def __init__(self, min_poly=(-1, -1, 1), units=(("1", "1"),), N=(), twister=None,
                 precision_bits=128, tolerance="1e-30", bound=None):
        self.min_poly = min_poly
        self.units = units
        self.N = N
        self.twister = twister
        self.precision_bits = precision_bits
        self.tolerance = tolerance
        self.bound = bound

    def fit(self, X=None, y=None):
        K = NumberField(list(self.min_poly), self.precision_bits)
        if X is not None:
            check_array(X, ensure_min_samples=0)
        units = [K.element(u) for u in self.units]
        self.domain_ = build_signed_domain(K, units, tuple(self.N), self.twister)
        self.field_ = K
        self.n_features_in_ = K.n
        self.n_cones_ = len(self.domain_.cones)
        return self

    def _points(self, X):
        check_is_fitted(self, "domain_")
        X = check_array(X, dtype=np.float64)
        K = self.field_
        if X.shape[1] != K.n:
            raise InvalidFieldSpec(f"expected {K.n} features, got {X.shape[1]}")
        for row in X:
            yield list(row[:K.r1]) + [complex(row[K.r1 + 2 * j], row[K.r1 + 2 * j + 1])
                                      for j in range(K.r2)]

    def predict(self, X):
        """Signed orbit count per row; nan where a membership was ambiguous."""
        out = []
        for x in self._points(X):
            res = signed_count_detail(self.domain_, x, self.bound, self.tolerance)
            out.append(np.nan if res.value == AMBIGUOUS else float(res.value))
        return np.array(out)

    def transform(self, X):
        """Per-cone membership of each row: 1, 0, or nan when ambiguous."""
        cones = self.domain_.active_cones if hasattr(self, "domain_") else []
        rows = []
        for x in self._points(X):
            row = []
            for c in cones:
                v = contains(c, x, self.tolerance)
                row.append(np.nan if v == AMBIGUOUS else float(v == "yes"))
            rows.append(row)
        return np.array(rows).reshape(len(rows), len(cones))

    def score(self, X, y=None):
        """Fraction of rows whose signed count is exactly 1."""
        counts = self.predict(X)
        return float(np.mean(counts == 1)) if len(counts) else 1.0
