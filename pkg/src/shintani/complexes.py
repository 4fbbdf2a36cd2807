"""Ordered simplicial complexes with integer vertices.

The dimension-raising operator Y(X, omega, [M1, M2]) turns an ordered
p-complex into an ordered (p+1)-complex, and ``build_domain_complex`` applies
it n - 1 times to produce the complex whose simplices index the signed cones.

Vertex coordinates are always exact integers.  The only irrational input is
the linear form omega, whose coefficients are normalised unit arguments; it
enters through the upper fractional part A(u) and the order it induces, and
every such decision is certified with interval arithmetic.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import factorial, floor
from typing import Callable, Optional

import numpy as np
from mpmath import iv, mp

from ._intervals import (certify, endpoints, fraction_det, fraction_inverse, ival, leibniz_det, mid,
                         sign, working_precision)
from .exceptions import (AmbiguousBarycentric, BadSectorCount, InvalidFieldSpec,
                         PointOutsideComplex, PrecisionExhausted,
                         UnitNotTotallyPositive, UnitsNotIndependent)
from .numfield import arg_iv, is_totally_positive, log_abs_iv, norm_exact

DEFAULT_START_BITS = 128
DEFAULT_CAP_BITS = 4096


# -- data types --------------------------------------------------------------

@dataclass(frozen=True)
class OrderedSimplex:
    """A p-simplex with integer vertices listed in its total order."""

    vertices: tuple
    provenance: tuple = ()

    @property
    def dim(self):
        return len(self.vertices) - 1

    def difference_matrix(self):
        """Columns v_i - v_0 (returned row-major, one row per coordinate)."""
        v0 = self.vertices[0]
        p = self.dim
        return [[self.vertices[i + 1][c] - v0[c] for i in range(p)] for c in range(p)]

    def det(self):
        """Exact det V with columns v_i - v_0 in stored order."""
        if self.dim == 0:
            return 1
        return int(fraction_det(self.difference_matrix()))

    def relabel(self, perm):
        return OrderedSimplex(tuple(self.vertices[i] for i in perm), self.provenance)


@dataclass(frozen=True)
class OrderedComplex:
    """A finite ordered p-complex adapted to the diagonal lattice ``periods``."""

    dim: int
    simplices: tuple
    periods: tuple

    def __post_init__(self):
        for s in self.simplices:
            if s.dim != self.dim:
                raise ValueError("all simplices must share the complex dimension")
        if len(self.periods) != self.dim:
            raise ValueError("one period per coordinate is required")

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __getitem__(self, i):
        return self.simplices[i]

    def replace_simplex(self, index, simplex):
        simplices = list(self.simplices)
        simplices[index] = simplex
        return OrderedComplex(self.dim, tuple(simplices), self.periods)


@dataclass(frozen=True, eq=False)
class LinearForm:
    """A linear function on R^dim.

    Coefficients are either exact rationals (``exact``) or supplied by
    ``numeric(bits)``, which must return rigorous ``iv`` enclosures (or None
    when it cannot at that precision).  ``support`` lists the coordinates
    whose coefficient may be nonzero; outside it the form vanishes exactly,
    which is what lets exact ties be recognised without numerics.
    """

    dim: int
    exact: Optional[tuple] = None
    numeric: Optional[Callable] = None
    support: tuple = ()

    @classmethod
    def zero(cls, dim):
        return cls(dim, exact=tuple(Fraction(0) for _ in range(dim)), support=())

    @classmethod
    def rational(cls, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        return cls(len(coeffs), exact=coeffs,
                   support=tuple(i for i, c in enumerate(coeffs) if c))

    @classmethod
    def from_unit_arguments(cls, field, units, place, N, dim):
        """omega(x) = (N / 2 pi) sum_l x[l] arg(eps_l at ``place``)."""
        r = len(units)
        cache = {}

        def numeric(bits):
            if bits not in cache:
                coeffs = []
                for u in units:
                    a = arg_iv(field, u, place, bits)
                    if a is None:
                        return None
                    coeffs.append(iv.mpf(N) * a / (2 * iv.pi))
                cache[bits] = coeffs + [iv.mpf(0)] * (dim - r)
            return cache[bits]

        return cls(dim, numeric=numeric, support=tuple(range(r)))

    def vanishes_at(self, u):
        return all(u[i] == 0 for i in self.support)

    def value_exact(self, u):
        return sum((c * x for c, x in zip(self.exact, u)), Fraction(0))

    def value_iv(self, u, bits):
        """Interval value at the integer (or rational) vector ``u``."""
        if self.vanishes_at(u):
            return iv.mpf(0)
        if self.exact is not None:
            return ival(self.value_exact(u))
        coeffs = self.numeric(bits)
        if coeffs is None:
            return None
        total = iv.mpf(0)
        for i in self.support:
            if u[i]:
                total += coeffs[i] * ival(Fraction(u[i]))
        return total

    def value(self, u, bits=DEFAULT_START_BITS):
        """Best-effort point value (Fraction when exact, else an mpf midpoint)."""
        if self.exact is not None:
            return self.value_exact(u)
        if self.vanishes_at(u):
            return mp.mpf(0)
        with working_precision(bits):
            v = self.value_iv(u, bits)
            return mid(v) if v is not None else None

    def restrict(self, dim):
        """The same form viewed on R^dim (extra coordinates get coefficient 0)."""
        if self.exact is not None:
            coeffs = list(self.exact[:dim]) + [Fraction(0)] * max(0, dim - self.dim)
            return LinearForm.rational(coeffs)
        inner = self.numeric

        def numeric(bits):
            c = inner(bits)
            if c is None:
                return None
            return list(c[:dim]) + [iv.mpf(0)] * max(0, dim - self.dim)

        return LinearForm(dim, numeric=numeric,
                          support=tuple(i for i in self.support if i < dim))


@dataclass
class SectorData:
    """Per-simplex sector anchors alpha_j, one per complex place.

    ``anchors[idx][j]`` is a pair (v, m) with alpha_j = omega_j(v) + m exactly,
    where omega_j is ``forms[j]`` and m is an integer.  ``values`` caches the
    numerical alpha_j at the build precision.
    """

    r: int
    forms: tuple
    anchors: list = dc_field(default_factory=list)
    values: list = dc_field(default_factory=list)

    def alpha(self, idx, j):
        return self.values[idx][j]


# -- upper fractional part and the order it induces --------------------------

def _k_from_interval(w):
    """The integer k with omega + k in (0, 1], or None if w straddles a step."""
    a, b = endpoints(w)
    lo, hi = floor(1 - b), floor(1 - a)
    return lo if lo == hi else None


def _k_exact(value):
    return floor(1 - value)


def upper_fractional(omega, u, start_bits=DEFAULT_START_BITS, cap_bits=DEFAULT_CAP_BITS):
    """Return (A(u), k) with A(u) = omega(u) + k, 0 < A(u) <= 1 and k an integer.

    A is a Fraction for exact forms and an mpf otherwise.
    """
    if omega.vanishes_at(u):
        return (Fraction(1) if omega.exact is not None else mp.mpf(1)), 1
    if omega.exact is not None:
        v = omega.value_exact(u)
        k = _k_exact(v)
        return v + k, k

    def attempt(bits):
        w = omega.value_iv(u, bits)
        if w is None:
            return None
        k = _k_from_interval(w)
        if k is None:
            return None
        return mid(w) + k, k

    a, k = certify(attempt, start_bits, cap_bits, "upper fractional part")
    return +a, k


def _simplex_k_and_order(vertices, omega, start_bits, cap_bits):
    """Integers k(u) for every vertex and the ranks listed in the order <^A."""
    p1 = len(vertices)
    if omega.exact is not None or all(omega.vanishes_at(u) for u in vertices):
        ks, avals = [], []
        for u in vertices:
            a, k = upper_fractional(omega, u)
            ks.append(k)
            avals.append(Fraction(a))
        order = sorted(range(p1), key=lambda i: (avals[i], i))
        return ks, order

    def attempt(bits):
        ks = []
        for u in vertices:
            if omega.vanishes_at(u):
                ks.append(1)
                continue
            w = omega.value_iv(u, bits)
            if w is None:
                return None
            k = _k_from_interval(w)
            if k is None:
                return None
            ks.append(k)
        # certified comparison: A(u_i) - A(u_j) = omega(u_i - u_j) + k_i - k_j
        less = {}
        for i in range(p1):
            for j in range(i + 1, p1):
                diff = tuple(a - b for a, b in zip(vertices[i], vertices[j]))
                if omega.vanishes_at(diff):
                    d = ks[i] - ks[j]
                    less[i, j] = d < 0 or d == 0
                    continue
                w = omega.value_iv(diff, bits)
                if w is None:
                    return None
                w = w + (ks[i] - ks[j])
                if w.b < 0:
                    less[i, j] = True
                elif w.a > 0:
                    less[i, j] = False
                else:
                    return None
        return ks, less

    ks, less = certify(attempt, start_bits, cap_bits, "order of upper fractional parts")
    order = []
    for i in range(p1):
        pos = 0
        for j in range(p1):
            if j == i:
                continue
            before = less[j, i] if j < i else not less[i, j]
            pos += before
        order.append((pos, i))
    return ks, [i for _, i in sorted(order)]


def reorder_A(simplex, omega, start_bits=DEFAULT_START_BITS, cap_bits=DEFAULT_CAP_BITS):
    """Stored ranks of the simplex's vertices listed in the order <^A."""
    return _simplex_k_and_order(simplex.vertices, omega, start_bits, cap_bits)[1]


# -- raising -----------------------------------------------------------------

def _raise_with_anchors(X, omega, M1, M2, start_bits, cap_bits):
    if not M1 < M2:
        raise ValueError("need M1 < M2")
    if omega.dim != X.dim:
        raise ValueError("linear form dimension must match the complex")
    out, anchors = [], []
    for simplex in X.simplices:
        verts = simplex.vertices
        ks, order = _simplex_k_and_order(verts, omega, start_bits, cap_bits)
        position = {rank: pos for pos, rank in enumerate(order)}
        for rank in range(len(verts)):
            j = position[rank]
            for ell in range(M1, M2):
                new = []
                for pos, i in enumerate(order):
                    if pos <= j:
                        new.append((i, ks[i] + ell))
                    if pos >= j:
                        new.append((i, ks[i] + ell - 1))
                # stored order: by the old rank, ties by larger new coordinate
                new.sort(key=lambda t: (t[0], -t[1]))
                vertices = tuple(tuple(verts[i]) + (h,) for i, h in new)
                out.append(OrderedSimplex(vertices, simplex.provenance + ((rank, ell),)))
                anchors.append((tuple(verts[rank]), ks[rank] + ell - 1))
    Y = OrderedComplex(X.dim + 1, tuple(out), tuple(X.periods) + (M2 - M1,))
    return Y, anchors


def raise_complex(X, omega, M1, M2, start_bits=DEFAULT_START_BITS,
                  cap_bits=DEFAULT_CAP_BITS):
    """The ordered (p+1)-complex Y(X, omega, [M1, M2])."""
    return _raise_with_anchors(X, omega, M1, M2, start_bits, cap_bits)[0]


def point_complex():
    """The trivial 0-complex {0} in R^0."""
    return OrderedComplex(0, (OrderedSimplex(((),)),), ())


# -- the complex for a number field -------------------------------------------

def _is_algebraic_unit(u):
    """Integral with norm +-1: char poly of the multiplication matrix in Z[x]."""
    m = [[Fraction(c) for c in row] for row in u.multiplication_matrix()]
    n = len(m)
    # Faddeev-LeVerrier
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    mk = [row[:] for row in ident]
    coeff = Fraction(1)
    for k in range(1, n + 1):
        am = [[sum(m[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeff = -sum(am[i][i] for i in range(n)) / k
        if coeff.denominator != 1:
            return False
        mk = [[am[i][j] + (coeff if i == j else 0) for j in range(n)] for i in range(n)]
    return abs(norm_exact(u.field, u)) == 1


def check_units(field, units):
    """Validate the unit list; raises the matching InvalidFieldSpec subclass."""
    r = field.r1 + field.r2 - 1
    if len(units) != r:
        raise InvalidFieldSpec(f"expected r = r1 + r2 - 1 = {r} units, got {len(units)}")
    for i, u in enumerate(units, 1):
        if u.field != field:
            raise InvalidFieldSpec(f"unit {i} belongs to a different field")
        if u.is_zero() or not _is_algebraic_unit(u):
            raise InvalidFieldSpec(f"unit {i} is not an algebraic unit")
        if not is_totally_positive(field, u):
            raise UnitNotTotallyPositive(f"unit {i} is not totally positive")
    if r == 0:
        return
    bits = field.precision_bits
    with working_precision(bits):
        # dropping the last place is injective on the trace-zero hyperplane
        rows = [[log_abs_iv(field, u, place, bits) for place in range(1, r + 1)]
                for u in units]
        if any(x is None for row in rows for x in row):
            raise UnitsNotIndependent("log embedding could not be evaluated")
        s = sign(leibniz_det(rows))
    if s in (0, None):
        raise UnitsNotIndependent("units are multiplicatively dependent (log matrix singular)")


def build_domain_complex(field, units, N, start_bits=None, cap_bits=None):
    """Build the (n-1)-complex and its sector anchors for ``field``.

    ``units`` are the r = r1 + r2 - 1 fixed totally positive units and ``N``
    the r2 sector counts.  Returns (complex, SectorData).
    """
    start_bits = start_bits or field.precision_bits
    cap_bits = cap_bits or field.max_precision_bits
    N = [int(x) for x in N]
    if len(N) != field.r2:
        raise BadSectorCount(f"expected {field.r2} sector counts, got {len(N)}")
    for x in N:
        if x < 3:
            raise BadSectorCount(f"sector counts must be >= 3, got {x}")
    check_units(field, units)
    r = len(units)
    X = point_complex()
    for step in range(r):
        X = raise_complex(X, LinearForm.zero(step), 0, 1, start_bits, cap_bits)
    forms = []
    per_step = []
    for j, Nj in enumerate(N, 1):
        omega = LinearForm.from_unit_arguments(field, units, field.r1 + j, Nj, r + j - 1)
        forms.append(omega)
        X, anchors = _raise_with_anchors(X, omega, 0, Nj, start_bits, cap_bits)
        per_step.append(anchors)
    sector = SectorData(r, tuple(forms))
    # each later raise multiplies simplices in blocks: a simplex of X_{r+j}
    # with index i spawns a contiguous block of (p+1)*N simplices
    for idx in range(len(X)):
        row_anchor, row_value = [], []
        for j in range(field.r2):
            block = 1
            for jj in range(j + 1, field.r2):
                block *= (r + jj + 1) * N[jj]
            v, m = per_step[j][idx // block]
            row_anchor.append((v, m))
            a = forms[j].value(v, start_bits)
            row_value.append(a + m)
        sector.anchors.append(tuple(row_anchor))
        sector.values.append(tuple(row_value))
    return X, sector


def omega_j(field, units, N, j, kappa, bits=None):
    """Omega_j(kappa) = kappa[r+j] + (N_j / 2 pi) sum_l kappa[l] arg(eps_l^(r1+j))."""
    if not 1 <= j <= field.r2:
        raise IndexError("complex place index out of range")
    r = len(units)
    bits = bits or field.precision_bits
    form = LinearForm.from_unit_arguments(field, units, field.r1 + j, int(N[j - 1]), r)
    kappa = list(kappa)

    def attempt(b):
        head = [Fraction(x) if isinstance(x, (int, Fraction)) else x for x in kappa[:r]]
        if all(isinstance(x, Fraction) for x in head):
            w = form.value_iv(head, b)
        else:
            coeffs = form.numeric(b)
            if coeffs is None:
                return None
            w = iv.mpf(0)
            for c, x in zip(coeffs, head):
                w += c * iv.mpf(x)
        if w is None:
            return None
        return mid(w)

    return certify(attempt, bits, field.max_precision_bits, "Omega_j") + mp.mpf(kappa[r + j - 1])


# -- barycentric helpers -----------------------------------------------------

class _SimplexGeometry:
    """Integer adjugate data for exact barycentric coordinates.

    For y in R^p: det * t[1:] = adj (y - v0) and det * t0 = det - sum.
    """

    def __init__(self, simplex):
        self.simplex = simplex
        p = simplex.dim
        self.p = p
        self.v0 = np.array(simplex.vertices[0], dtype=np.int64).reshape(p)
        self.vertices = np.array(simplex.vertices, dtype=np.int64).reshape(p + 1, p)
        self.lo = self.vertices.min(axis=0) if p else np.zeros(0, dtype=np.int64)
        self.hi = self.vertices.max(axis=0) if p else np.zeros(0, dtype=np.int64)
        self.det = simplex.det()
        if self.det != 0 and p:
            inv = fraction_inverse(simplex.difference_matrix())
            self.adj = np.array([[int(x * self.det) for x in row] for row in inv],
                                dtype=np.int64)
            self.inv_float = np.array([[float(x) for x in row] for row in inv])
        else:
            self.adj = np.zeros((p, p), dtype=np.int64)
            self.inv_float = np.zeros((p, p))

    def scaled_bary(self, P, D):
        """Integer rows of det*D*t for points P/D (P: m x p ints, D: m ints)."""
        rel = P - D[:, None] * self.v0[None, :]
        tail = rel @ self.adj.T
        head = self.det * D - tail.sum(axis=1)
        out = np.concatenate([head[:, None], tail], axis=1)
        return out if self.det > 0 else -out

    def float_bary(self, Y):
        tail = (Y - self.v0[None, :]) @ self.inv_float.T
        return np.concatenate([1 - tail.sum(axis=1, keepdims=True), tail], axis=1)


def _translations(lo_a, hi_a, lo_b, hi_b, periods):
    """Lattice vectors tau with box_a + tau meeting box_b (closed boxes)."""
    ranges = []
    for la, ha, lb, hb, per in zip(lo_a, hi_a, lo_b, hi_b, periods):
        first = _ceil_div(int(lb) - int(ha), per)
        last = (int(hb) - int(la)) // per
        ranges.append([per * t for t in range(first, last + 1)])
    return [tuple(t) for t in product(*ranges)]


def _ceil_div(a, b):
    return -((-a) // b)


def spanning_vertices(X, x, tol=1e-12):
    """Spanning vertices of the point ``x`` of X (a set of integer tuples).

    Exact when ``x`` has int/Fraction entries; otherwise coordinates within
    ``tol`` of zero (but not exactly zero) raise AmbiguousBarycentric.
    """
    exact = all(isinstance(c, (int, Fraction)) for c in x)
    found = None
    for s in X.simplices:
        if s.det() == 0:
            continue
        if exact:
            inv = fraction_inverse(s.difference_matrix()) if s.dim else []
            rel = [Fraction(c) - v for c, v in zip(x, s.vertices[0])]
            tail = [sum(a * b for a, b in zip(row, rel)) for row in inv]
            t = [1 - sum(tail)] + tail
            if min(t) < 0:
                continue
            spanning = {s.vertices[i] for i, ti in enumerate(t) if ti > 0}
        else:
            g = _SimplexGeometry(s)
            t = g.float_bary(np.array([x], dtype=float))[0] if s.dim else np.array([1.0])
            if t.min() < -tol:
                continue
            if any(0 < abs(ti) <= tol for ti in t):
                raise AmbiguousBarycentric("barycentric coordinate within tolerance of 0")
            spanning = {s.vertices[i] for i, ti in enumerate(t) if ti > tol}
        if found is None:
            found = spanning
        elif exact and found != spanning:
            # different containing simplices disagree: X is not simplicial here
            raise ValueError("inconsistent spanning vertices across simplices")
        if not exact:
            break
    if found is None:
        raise PointOutsideComplex("point lies in no simplex of the complex")
    return found


# -- exact linear programming --------------------------------------------------

def _lp_max(A, b, c):
    """Maximise c.x subject to A x = b, x >= 0 over the rationals.

    Two-phase simplex with Bland's rule.  Returns None if infeasible and
    +inf (as the string "unbounded") if unbounded; otherwise the optimum.
    """
    m, n = len(A), len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: n originals, m artificials, rhs
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(r, col):
        pv = T[r][col]
        T[r] = [v / pv for v in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[r])]
        basis[r] = col

    def run(cost, allowed):
        while True:
            # reduced costs for maximisation
            entering = None
            for col in allowed:
                if col in basis:
                    continue
                rc = cost[col] - sum(cost[basis[i]] * T[i][col] for i in range(m))
                if rc > 0:
                    entering = col
                    break
            if entering is None:
                return True
            best, row = None, None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                        best, row = ratio, i
            if row is None:
                return False
            pivot(row, entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, range(n + m))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) > 0:
        return None
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((k for k in range(n) if T[i][k] != 0 and k not in basis), None)
            if col is not None:
                pivot(i, col)
    cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    if not run(cost, range(n)):
        return "unbounded"
    return sum(cost[basis[i]] * T[i][-1] for i in range(m))


def simplices_meet_properly(S, T):
    """True iff S and T intersect in the hull of their shared vertices (or not at all)."""
    shared = set(S) & set(T)
    ns = [i for i, v in enumerate(S) if v not in shared]
    nt = [k for k, v in enumerate(T) if v not in shared]
    if not ns and not nt:
        return True
    p = len(S[0])
    a, b = len(S), len(T)
    A = []
    for coord in range(p):
        A.append([S[i][coord] for i in range(a)] + [-T[k][coord] for k in range(b)])
    A.append([1] * a + [0] * b)
    A.append([0] * a + [1] * b)
    rhs = [0] * p + [1, 1]
    cost = [1 if i in ns else 0 for i in range(a)] + [1 if k in nt else 0 for k in range(b)]
    best = _lp_max(A, rhs, cost)
    return best is None or best == 0


# -- Lambda-complex check ------------------------------------------------------

@dataclass
class AxiomResult:
    name: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def fail(self, msg, keep=20):
        if len(self.failures) < keep:
            self.failures.append(msg)
        else:
            self.failures.append("...")
            self.failures = self.failures[:keep] + ["..."]


@dataclass
class LambdaReport:
    axioms: dict
    volume: int
    expected_volume: int
    samples: int
    seed: int
    omega_range: Optional[AxiomResult] = None
    max_omega_range: Optional[object] = None

    @property
    def passed(self):
        ok = all(a.passed for a in self.axioms.values())
        if self.omega_range is not None:
            ok = ok and self.omega_range.passed
        return ok

    def summary(self):
        rows = {k: ("pass" if a.passed else "FAIL") for k, a in self.axioms.items()}
        if self.omega_range is not None:
            rows["omega_range"] = "pass" if self.omega_range.passed else "FAIL"
        return rows


def _neighbor_pairs(geoms, periods):
    """All (a, b, tau) with box(a) meeting box(b) + tau, each unordered pair once."""
    out = []
    for a, ga in enumerate(geoms):
        for b in range(a, len(geoms)):
            gb = geoms[b]
            # tau with box(b) + tau meeting box(a)
            for tau in _translations(gb.lo, gb.hi, ga.lo, ga.hi, periods):
                if a == b and (not any(tau) or tau < tuple(-t for t in tau)):
                    continue
                out.append((a, b, tau))
    return out


def _check_faces_and_orders(X, geoms, res_i, res_ii, res_iii):
    for a, b, tau in _neighbor_pairs(geoms, X.periods):
        S = X[a].vertices
        T = tuple(tuple(x + t for x, t in zip(v, tau)) for v in X[b].vertices)
        shared = set(S) & set(T)
        res_i.checked += 1
        if not simplices_meet_properly(S, T):
            res_i.fail(f"simplices {a} and {b}+{tau} overlap outside a common face")
        if len(shared) >= 2:
            res = res_iii if any(tau) else res_ii
            res.checked += 1
            rank_s = [v for v in S if v in shared]
            rank_t = [v for v in T if v in shared]
            if rank_s != rank_t:
                res.fail(f"orders of simplices {a} and {b}+{tau} disagree on shared vertices")


def _check_cover(X, geoms, samples, rng, res_iv, eps=1e-9):
    p = X.dim
    periods = np.array(X.periods, dtype=float)
    pts = rng.random((samples, p)) * periods[None, :]
    closed = np.zeros(samples, dtype=np.int64)
    interior = np.zeros(samples, dtype=np.int64)
    near = np.zeros(samples, dtype=bool)
    cell_lo = np.zeros(p, dtype=np.int64)
    cell_hi = np.array(X.periods, dtype=np.int64)
    for g in geoms:
        if g.det == 0:
            continue
        for tau in _translations(cell_lo, cell_hi, g.lo, g.hi, X.periods):
            t = g.float_bary(pts + np.array(tau, dtype=float)[None, :])
            tmin = t.min(axis=1)
            closed += tmin >= -eps
            interior += tmin > eps
            near |= np.abs(tmin) <= eps
    res_iv.checked += samples
    for i in np.nonzero(closed == 0)[0][:5]:
        res_iv.fail(f"sample {pts[i].tolist()} is not covered modulo the lattice")
    clean = ~near
    for i in np.nonzero(clean & (interior != 1))[0][:5]:
        res_iv.fail(f"interior sample {pts[i].tolist()} covered {int(interior[i])} times")


def _check_spanning(X, geoms, samples, rng, res_v):
    """Exact check of SpVt(x + tau) = SpVt(x) + tau on random boundary points."""
    if X.dim == 0 or not samples:
        return
    p = X.dim
    live = [i for i, g in enumerate(geoms) if g.det != 0]
    owners = rng.choice(live, size=samples)
    for a in sorted(set(owners.tolist())):
        count = int((owners == a).sum())
        ga = geoms[a]
        P = np.zeros((count, p), dtype=np.int64)
        D = np.zeros(count, dtype=np.int64)
        faces = []
        for s in range(count):
            size = int(rng.integers(1, p + 1))
            face = sorted(rng.choice(p + 1, size=size, replace=False).tolist())
            w = rng.integers(1, 8, size=size)
            P[s] = (w[:, None] * ga.vertices[face]).sum(axis=0)
            D[s] = w.sum()
            faces.append(frozenset(tuple(ga.vertices[f].tolist()) for f in face))
        for b, gb in enumerate(geoms):
            if gb.det == 0:
                continue
            for tau in _translations(ga.lo, ga.hi, gb.lo, gb.hi, X.periods):
                shifted = P + D[:, None] * np.array(tau, dtype=np.int64)[None, :]
                bary = gb.scaled_bary(shifted, D)
                inside = np.nonzero(bary.min(axis=1) >= 0)[0]
                for s in inside:
                    span = frozenset(
                        tuple((gb.vertices[k] - np.array(tau)).tolist())
                        for k in range(p + 1) if bary[s, k] > 0)
                    res_v.checked += 1
                    if span != faces[s]:
                        res_v.fail(f"spanning vertices differ for a point of simplex {a} "
                                   f"seen in simplex {b} translated by {tau}")


def _check_omega_range(X, sector, start_bits, cap_bits, res):
    r = sector.r
    worst = mp.mpf(0)
    for idx, s in enumerate(X.simplices):
        for j, form in enumerate(sector.forms):
            v, m = sector.anchors[idx][j]
            c = r + j
            offsets = []
            for kappa in s.vertices:
                diff = tuple(kappa[i] - v[i] for i in range(len(v)))
                base = kappa[c] - m
                offsets.append((diff, base))

            def attempt(bits):
                vals = []
                for diff, base in offsets:
                    if form.vanishes_at(diff):
                        vals.append(iv.mpf(base))
                    else:
                        w = form.value_iv(diff, bits)
                        if w is None:
                            return None
                        vals.append(w + base)
                for w in vals:
                    inside = w.a >= 0 and w.b <= 1
                    outside = w.b < 0 or w.a > 1
                    if not (inside or outside):
                        return None
                return vals

            res.checked += 1
            try:
                vals = certify(attempt, start_bits, cap_bits, "Omega range")
            except PrecisionExhausted:
                res.fail(f"simplex {idx}, place {j + 1}: Omega range undecidable")
                continue
            lo = min(mp.mpf(w.a) for w in vals)
            hi = max(mp.mpf(w.b) for w in vals)
            if lo < 0 or hi > 1:
                res.fail(f"simplex {idx}, place {j + 1}: Omega outside [alpha, alpha + 1]")
            worst = max(worst, max(mid(w) for w in vals) - min(mid(w) for w in vals))
    return worst


def lambda_complex_check(X, samples=10_000, seed=0, sector=None,
                         start_bits=DEFAULT_START_BITS, cap_bits=DEFAULT_CAP_BITS):
    """Check the five Lambda-complex axioms (and the Omega range, given sectors)."""
    rng = np.random.default_rng(seed)
    geoms = [_SimplexGeometry(s) for s in X.simplices]
    axioms = {name: AxiomResult(name) for name in ("i", "ii", "iii", "iv", "v")}
    for idx, g in enumerate(geoms):
        if g.det == 0:
            axioms["i"].fail(f"simplex {idx} is degenerate")
    _check_faces_and_orders(X, geoms, axioms["i"], axioms["ii"], axioms["iii"])
    volume = sum(abs(g.det) for g in geoms)
    expected = factorial(X.dim)
    for per in X.periods:
        expected *= per
    axioms["iv"].checked += 1
    if volume != expected:
        axioms["iv"].fail(f"sum |det V| = {volume}, expected {expected}")
    if X.dim:
        _check_cover(X, geoms, samples, rng, axioms["iv"])
    _check_spanning(X, geoms, samples, rng, axioms["v"])
    report = LambdaReport(axioms, volume, expected, samples, seed)
    if sector is not None and sector.forms:
        report.omega_range = AxiomResult("omega_range")
        report.max_omega_range = _check_omega_range(X, sector, start_bits, cap_bits,
                                                    report.omega_range)
    return report
