"""Runtime oracle for the signed orbit-count identity and the property suite.

For a point x the signed count is sum over cones with mu != 0 of
mu * #{a in Z^r : eps^a x in C_alpha}.  For a signed fundamental domain it is always 1.

Unit translates are handled in power-basis coordinates: if u are the
coordinates of x then eps^a x has coordinates M_a^T u, where M_a is the
(exact, rational) multiplication matrix of eps^a.  A cone test therefore
costs one small matrix-vector product, done first in float64 and redone at
working precision only when the float answer is within a safety margin.
"""

import copy
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import factorial, log
from typing import Optional

import numpy as np
from mpmath import mp

from ._intervals import working_precision
from .complexes import lambda_complex_check
from .domain import (AMBIGUOUS, DEFAULT_TOLERANCE, NO, YES, cone_generators,
                     det_W_sign_numeric, exact_membership, sector_check, sign_mu,
                     solve_e1)
from .exceptions import PrecisionExhausted, UnstableBound
from .numfield import embed, is_totally_positive

FLOAT_MARGIN = 1e-9
STABILITY_MARGIN = 2
LOG_BOX = 2.0


# -- per-domain caches -----------------------------------------------------------

class _Counter:
    """Enumeration machinery shared by all points of one domain."""

    def __init__(self, domain):
        self.domain = domain
        self.field = domain.field
        self.units = domain.units
        self.r = len(domain.units)
        self.cones = domain.active_cones
        self.n = self.field.n
        self._unit_mats = {}
        self._float_stack = {}
        self._exact = {}
        self._boxes = {}
        self._cinv_float = np.array(
            [[[float(v) for v in row] for row in c.CinvT] for c in self.cones],
            dtype=float).reshape(len(self.cones), self.n, self.n)
        self._bound_data()

    # exact linear maps -------------------------------------------------------

    def unit_matrix_T(self, a):
        """M_a^T as Fractions, M_a the multiplication matrix of eps^a."""
        a = tuple(a)
        if a not in self._unit_mats:
            e = self.field.one()
            for i, (u, k) in enumerate(zip(self.units, a)):
                if k:
                    e = e * self._unit_power(i, k)
            m = e.multiplication_matrix()
            self._unit_mats[a] = [[m[j][i] for j in range(self.n)] for i in range(self.n)]
        return self._unit_mats[a]

    def _unit_power(self, i, k):
        key = ("pow", i, k)
        if key not in self._unit_mats:
            self._unit_mats[key] = self.units[i] ** k
        return self._unit_mats[key]

    def exact_maps(self, a):
        """Per active cone, the Fraction matrix G = C^{-T} M_a^T."""
        a = tuple(a)
        if a not in self._exact:
            MT = self.unit_matrix_T(a)
            mats = []
            for cone in self.cones:
                C = cone.CinvT
                mats.append([[sum((C[i][k] * MT[k][j] for k in range(self.n)), Fraction(0))
                              for j in range(self.n)] for i in range(self.n)])
            self._exact[a] = mats
        return self._exact[a]

    def float_stack(self, a):
        """Float version of ``exact_maps`` (only the fallback needs exactness)."""
        a = tuple(a)
        if a not in self._float_stack:
            MT = np.array([[float(v) for v in row] for row in self.unit_matrix_T(a)])
            self._float_stack[a] = self._cinv_float @ MT
        return self._float_stack[a]

    def box_stack(self, top):
        """Exponent list for the box |a_i| <= top and the stacked float maps."""
        if top not in self._boxes:
            exps = list(product(range(-top, top + 1), repeat=self.r))
            stack = np.stack([self.float_stack(a) for a in exps])
            self._boxes[top] = (exps, stack)
        return self._boxes[top]

    # enumeration bound -------------------------------------------------------

    def _bound_data(self):
        """Per-place bounds for log|z| over norm-one points of every closed cone."""
        f = self.field
        places = f.r1 + f.r2
        weights = [1] * f.r1 + [2] * f.r2
        lo = np.full(places, np.inf)
        hi = np.full(places, -np.inf)
        for cone in self.cones:
            amin, bmax = [], []
            for j in range(places):
                lower, upper = [], []
                for w in cone.generators:
                    z = complex(embed(f, w, j + 1).value)
                    upper.append(abs(z))
                    if j < f.r1:
                        lower.append(z.real)
                    else:
                        k = j - f.r1
                        phi = 2 * np.pi * (float(cone.sector[k]) + 0.5) / self.domain.N[k]
                        lower.append((z * np.exp(-1j * phi)).real)
                if min(lower) <= 0:
                    # cannot bound this cone from below; fall back to a wide box
                    lower = [min(upper) * 1e-12]
                amin.append(min(lower))
                bmax.append(max(upper))
            n = f.n
            s_lo = -sum(wt * log(b) for wt, b in zip(weights, bmax)) / n
            s_hi = -sum(wt * log(a) for wt, a in zip(weights, amin)) / n
            for j in range(places):
                lo[j] = min(lo[j], weights[j] * (log(amin[j]) + s_lo))
                hi[j] = max(hi[j], weights[j] * (log(bmax[j]) + s_hi))
        self.log_lo, self.log_hi = lo, hi
        self.weights = np.array(weights, dtype=float)
        if self.r:
            L = np.array([[weights[k] * log(abs(complex(embed(f, u, k + 1).value)))
                           for u in self.units] for k in range(self.r)])
            self.Linv = np.linalg.inv(L)
        else:
            self.Linv = np.zeros((0, 0))

    def bound(self, logs):
        """B for a point with weighted log-embedding ``logs`` (any scale)."""
        if not self.r:
            return 0
        logs = np.asarray(logs, dtype=float)
        shift = logs - logs.sum() / self.n * self.weights
        lo = self.log_lo - shift
        hi = self.log_hi - shift
        reach = np.maximum(np.abs(lo), np.abs(hi))[: self.r]
        a = np.abs(self.Linv) @ reach
        return int(np.ceil(a.max())) + STABILITY_MARGIN


def _counter(domain):
    c = getattr(domain, "_counter", None)
    if c is None:
        c = _Counter(domain)
        domain._counter = c
    return c


# -- public operations ---------------------------------------------------------

def _point_logs(domain, x):
    f = domain.field
    if hasattr(x, "coords"):
        return [(1 if j < f.r1 else 2) * float(mp.log(abs(embed(f, x, j + 1).value)))
                for j in range(f.r1 + f.r2)]
    return [(1 if j < f.r1 else 2) * log(abs(complex(v))) for j, v in enumerate(x)]


def _check_point(domain, x):
    f = domain.field
    if hasattr(x, "coords"):
        if x.is_zero() or not is_totally_positive(f, x):
            raise ValueError("x must be a totally positive element of k")
        return
    if len(x) != f.r1 + f.r2:
        raise ValueError(f"a point needs {f.r1 + f.r2} coordinates")
    for j, v in enumerate(x):
        z = complex(v)
        if j < f.r1 and not (z.imag == 0 and z.real > 0):
            raise ValueError("real coordinates of x must be positive")
        if j >= f.r1 and z == 0:
            raise ValueError("complex coordinates of x must be nonzero")


def enumeration_bound(domain, x):
    """Box bound B on unit exponents a with eps^a x in some closed cone."""
    _check_point(domain, x)
    return _counter(domain).bound(_point_logs(domain, x))


@dataclass
class CountResult:
    value: object                 # int, or AMBIGUOUS
    bound: int
    hits: dict = dc_field(default_factory=dict)   # cone alpha -> number of hits


def _count_numeric(domain, counter, x, B, tol):
    frame = domain.frame
    real = np.array([float(v) for v in frame.point_to_real(x)])
    u_float = frame.power_coords_float(real[None, :])[0]
    u_mp = None
    top = B + STABILITY_MARGIN
    exps, stack = counter.box_stack(top)
    t = stack @ u_float
    scale = np.abs(stack) @ np.abs(u_float)
    clear_yes = (t > FLOAT_MARGIN * scale).all(axis=2)
    clear_no = (t < -FLOAT_MARGIN * scale).any(axis=2)
    ambiguous = False
    for ai, idx in zip(*np.nonzero(~(clear_yes | clear_no))):
        if u_mp is None:
            u_mp = frame.power_coords(x)
        verdict = _mp_verdict(counter.exact_maps(exps[ai])[idx], u_mp, tol,
                              domain.field.precision_bits)
        if verdict == AMBIGUOUS:
            ambiguous = True
        clear_yes[ai, idx] = verdict == YES
    totals = {B: 0, top: 0}
    hits = {}
    for ai, idx in zip(*np.nonzero(clear_yes)):
        cone = counter.cones[idx]
        hits[cone.alpha] = hits.get(cone.alpha, 0) + 1
        totals[top] += cone.mu
        if max((abs(v) for v in exps[ai]), default=0) <= B:
            totals[B] += cone.mu
    return totals, hits, ambiguous


def _mp_verdict(G, u, tol, bits):
    with working_precision(bits):
        ambiguous = False
        for row in G:
            terms = [mp.mpf(c.numerator) / c.denominator * v for c, v in zip(row, u) if c]
            t = mp.fsum(terms)
            sc = mp.fsum(abs(v) for v in terms)
            if abs(t) <= tol * sc:
                ambiguous = True
            elif t < 0:
                return NO
        return AMBIGUOUS if ambiguous else YES


def _count_exact(domain, counter, x, B):
    top = B + STABILITY_MARGIN
    totals = {B: 0, top: 0}
    hits = {}
    for a in product(range(-top, top + 1), repeat=counter.r):
        inner = max((abs(v) for v in a), default=0) <= B
        for cone, G in zip(counter.cones, counter.exact_maps(a)):
            t = [sum((c * v for c, v in zip(row, x.coords)), Fraction(0)) for row in G]
            if exact_membership(t, cone.closure) == YES:
                hits[cone.alpha] = hits.get(cone.alpha, 0) + 1
                totals[top] += cone.mu
                if inner:
                    totals[B] += cone.mu
    return totals, hits, False


def signed_count_detail(domain, x, B=None, tol=None):
    """Signed orbit count with per-cone hits; see ``signed_count``."""
    _check_point(domain, x)
    counter = _counter(domain)
    if B is None:
        B = counter.bound(_point_logs(domain, x))
    tol = DEFAULT_TOLERANCE if tol is None else mp.mpf(tol)
    if hasattr(x, "coords"):
        totals, hits, ambiguous = _count_exact(domain, counter, x, B)
    else:
        totals, hits, ambiguous = _count_numeric(domain, counter, x, B, tol)
    if ambiguous:
        return CountResult(AMBIGUOUS, B, hits)
    if totals[B] != totals[B + STABILITY_MARGIN]:
        raise UnstableBound(f"signed count {totals[B]} at B={B} but "
                            f"{totals[B + STABILITY_MARGIN]} at B={B + STABILITY_MARGIN}")
    return CountResult(totals[B], B, hits)


def signed_count(domain, x, B=None, tol=None):
    """sum_alpha mu_alpha #{eps in E, |a_i| <= B : eps x in C_alpha}, or AMBIGUOUS.

    ``x`` is a FieldElement (exact membership) or a numeric point given as
    r1 positive reals followed by r2 nonzero complex numbers.
    """
    return signed_count_detail(domain, x, B, tol).value


# -- sampling -----------------------------------------------------------------

def sample_points(field, rng, count, log_box=LOG_BOX):
    """Log-uniform magnitudes in [e^-box, e^box]; uniform angles at complex places."""
    pts = []
    for _ in range(count):
        x = [float(np.exp(rng.uniform(-log_box, log_box))) for _ in range(field.r1)]
        for _ in range(field.r2):
            rad = float(np.exp(rng.uniform(-log_box, log_box)))
            x.append(complex(rad * np.exp(1j * rng.uniform(-np.pi, np.pi))))
        pts.append(x)
    return pts


def unit_action(domain, a, x):
    """The numeric point eps^a x."""
    f = domain.field
    e = f.one()
    for u, k in zip(domain.units, a):
        if k:
            e = e * (u ** k)
    out = []
    for j, v in enumerate(x):
        z = complex(embed(f, e, j + 1).value)
        out.append((z * complex(v)).real if j < f.r1 else z * complex(v))
    return out


# -- the suite ----------------------------------------------------------------

@dataclass
class PropertyResult:
    passed: bool
    checked: int = 0
    detail: str = ""


@dataclass
class VerifyReport:
    """Outcome of ``run_property_suite``.

    ``samples_accepted`` counts samples with an unambiguous signed count,
    ``samples_resampled`` counts ambiguous draws that were replaced, so
    ``samples_accepted + samples_resampled`` is the number of draws made.
    """

    seed: int
    precision_bits: int
    samples_requested: int
    samples_accepted: int = 0
    samples_resampled: int = 0
    counts: list = dc_field(default_factory=list)
    count_failures: list = dc_field(default_factory=list)
    cone_hits: dict = dc_field(default_factory=dict)
    max_orbit_hits: dict = dc_field(default_factory=dict)
    mu_zero_cones: list = dc_field(default_factory=list)
    properties: dict = dc_field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(p.passed for p in self.properties.values())

    def failed_properties(self):
        return [k for k, p in self.properties.items() if not p.passed]


def _relabel_check(domain, rng, relabelings):
    bad, checked = [], 0
    cache = {}
    for cone, simplex in zip(domain.cones, domain.complex.simplices):
        p1 = len(simplex.vertices)
        for _ in range(relabelings):
            perm = rng.permutation(p1).tolist()
            s2 = simplex.relabel(perm)
            gens = cone_generators(s2, domain.twister, domain.units, cache)
            mu = sign_mu(domain.field, domain.units, s2, gens, domain.det_R_sign,
                         domain.frame)
            checked += 1
            if mu != cone.mu:
                bad.append(cone.alpha)
                break
    return PropertyResult(not bad, checked, f"cones with relabel-dependent mu: {bad}" if bad else "")


def _summarize(failures, limit=5):
    shown = "; ".join(failures[:limit])
    if len(failures) > limit:
        shown += f"; ... ({len(failures) - limit} more)"
    return shown


def run_property_suite(domain, samples=1000, seed=0, lambda_samples=10_000,
                       relabelings=100, invariance_pairs=100, tol=None,
                       max_exponent=2, log_box=LOG_BOX, bound=None):
    """Run every constructive check and the signed-count oracle on ``domain``."""
    start = time.perf_counter()
    f = domain.field
    rng = np.random.default_rng(seed)
    report = VerifyReport(seed, f.precision_bits, samples)
    props = report.properties

    expected = factorial(f.n - 1)
    for n_j in domain.N:
        expected *= n_j
    props["cardinality"] = PropertyResult(len(domain.cones) == expected, 1,
                                          f"{len(domain.cones)} cones, expected {expected}")

    lam = lambda_complex_check(domain.complex, lambda_samples, seed, domain.sector)
    for name, res in lam.axioms.items():
        props[f"lambda_{name}"] = PropertyResult(res.passed, res.checked, _summarize(res.failures))
    props["volume"] = PropertyResult(lam.volume == lam.expected_volume, 1,
                                     f"sum |det V| = {lam.volume}, expected {lam.expected_volume}")
    if lam.omega_range is not None:
        props["omega_range"] = PropertyResult(lam.omega_range.passed, lam.omega_range.checked,
                                              _summarize(lam.omega_range.failures))

    bad_sector = [c.alpha for c in domain.cones if not sector_check(c)]
    props["sector"] = PropertyResult(not bad_sector, len(domain.cones),
                                     f"cones outside their sector: {bad_sector}" if bad_sector else "")

    y_bad = []
    for c in domain.active_cones:
        try:
            _, signs = solve_e1(f, c)
            if tuple(signs) != tuple(c.y_signs):
                y_bad.append(c.alpha)
        except PrecisionExhausted:
            y_bad.append(c.alpha)
    props["y_nonzero"] = PropertyResult(not y_bad, len(domain.active_cones),
                                        f"cones with uncertified y: {y_bad}" if y_bad else "")

    coh = []
    for c in domain.active_cones:
        numeric = det_W_sign_numeric(f, c.generators)
        if numeric != c.det_W_factored_sign:
            coh.append(c.alpha)
    props["det_w_coherence"] = PropertyResult(not coh, len(domain.active_cones),
                                              f"discrepant cones: {coh}" if coh else "")

    dc = domain.degree_constant
    props["degree_constant"] = PropertyResult(dc in (-1, 1), 1, f"degree constant {dc}")

    props["mu_relabel"] = _relabel_check(domain, rng, relabelings)
    report.mu_zero_cones = [c.alpha for c in domain.cones if c.mu == 0]

    # count oracle on random points, resampling ambiguous draws
    failures, unstable = [], []
    draws_left = 10 * max(samples, 1)
    while report.samples_accepted < samples and draws_left > 0:
        draws_left -= 1
        x = sample_points(f, rng, 1, log_box)[0]
        try:
            res = signed_count_detail(domain, x, B=bound, tol=tol)
        except UnstableBound as exc:
            unstable.append(str(exc))
            report.samples_accepted += 1
            report.counts.append(None)
            continue
        if res.value == AMBIGUOUS:
            report.samples_resampled += 1
            continue
        report.samples_accepted += 1
        report.counts.append(res.value)
        if res.value != 1:
            failures.append((x, res.value))
        for alpha, h in res.hits.items():
            report.cone_hits[alpha] = report.cone_hits.get(alpha, 0) + h
            report.max_orbit_hits[alpha] = max(report.max_orbit_hits.get(alpha, 0), h)
    report.count_failures = [(repr(x), v) for x, v in failures[:20]]
    ok = (not failures and not unstable and report.samples_accepted == samples)
    detail = (f"{len(failures)} of {report.samples_accepted} samples with count != 1; "
              f"{len(unstable)} unstable; {report.samples_resampled} resampled")
    props["signed_count"] = PropertyResult(ok, report.samples_accepted, detail)

    # E-invariance on random (x, eps) pairs
    inv_bad, checked = 0, 0
    r = len(domain.units)
    while checked < invariance_pairs and r:
        x = sample_points(f, rng, 1, log_box)[0]
        a = tuple(int(v) for v in rng.integers(-max_exponent, max_exponent + 1, size=r))
        try:
            c1 = signed_count(domain, x, B=bound, tol=tol)
            c2 = signed_count(domain, unit_action(domain, a, x), B=bound, tol=tol)
        except UnstableBound:
            inv_bad += 1
            checked += 1
            continue
        if AMBIGUOUS in (c1, c2):
            continue
        checked += 1
        inv_bad += c1 != c2
    props["e_invariance"] = PropertyResult(inv_bad == 0, checked,
                                           f"{inv_bad} pairs with differing counts" if inv_bad else "")
    report.elapsed = time.perf_counter() - start
    return report


def flip_mu(domain, alpha):
    """A copy of ``domain`` with the sign of cone ``alpha`` negated (negative control)."""
    out = copy.copy(domain)
    out.cones = list(domain.cones)
    cone = copy.copy(domain.cones[alpha])
    cone.mu = -cone.mu
    out.cones[alpha] = cone
    if hasattr(out, "_counter"):
        del out._counter
    return out
