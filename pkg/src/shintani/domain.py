"""Signed cones built from the complex, the units and a twister.

Notation used throughout: I(z) is the real coordinate vector of a point of
R^r1 x C^r2 (real places, then Re and Im per complex place).  P is the n x n
matrix whose rows are I(theta^i), so an element with power-basis coordinates
c has I = c P.  For a cone with generators w_0..w_{n-1} let C hold their
coordinates as rows; then W = C P and a point x decomposes as
x = sum t_l w_l with t = C^{-T} P^{-T} I(x).  The vector P^{-T} I(x) is just
x written in the power basis, which is exact when x lies in k.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import numpy as np
from mpmath import iv, mp

from ._intervals import (certify, fraction_det, fraction_inverse, interval_solve, ival,
                         leibniz_det, mid, sign, working_precision)
from .complexes import build_domain_complex
from .exceptions import (InvalidFieldSpec, PrecisionExhausted, SingularCone,
                         TotallyComplexField)
from .numfield import log_abs_iv
from .twisters import construct_twister, validate_twister

YES, NO, AMBIGUOUS = "yes", "no", "ambiguous"
DEFAULT_TOLERANCE = mp.mpf("1e-30")


# -- per-field numerical frame ---------------------------------------------------

class FieldFrame:
    """Cached numerical data of the power basis of a field."""

    def __init__(self, field):
        self.field = field
        self.n = field.n
        bits = field.precision_bits

        def basis(b):
            rows = field.basis_matrix_iv(b)
            s = sign(leibniz_det(rows))
            if s in (0, None):
                return None
            return rows, s

        rows, self.basis_sign = field.ladder(basis, "sign of the power-basis determinant")
        with working_precision(bits):
            PT = mp.matrix([[mid(rows[i][j]) for i in range(self.n)] for j in range(self.n)])
            self.PinvT = mp.inverse(PT)
        self.PinvT_float = np.array(self.PinvT.tolist(), dtype=float)
        self._e1 = {}
        self.N = ()
        self.forms = ()

    def point_to_real(self, x):
        """I(x) for x given as r1 reals followed by r2 complex numbers."""
        f = self.field
        if len(x) != f.r1 + f.r2:
            raise ValueError(f"a point needs {f.r1 + f.r2} coordinates")
        out = []
        for i, v in enumerate(x):
            if i < f.r1:
                out.append(mp.mpf(v.real if isinstance(v, complex) else v))
            else:
                z = mp.mpc(v)
                out.extend([z.real, z.imag])
        return out

    def power_coords(self, x):
        """Power-basis coordinates (mpf) of a numeric point."""
        with working_precision(self.field.precision_bits):
            u = self.PinvT * mp.matrix(self.point_to_real(x))
            return [u[i] for i in range(self.n)]

    def power_coords_float(self, real_points):
        """Vectorised version for an (m, n) float array of I(x) rows."""
        return real_points @ self.PinvT_float.T

    def e1_coords_iv(self, bits):
        """Interval power-basis coordinates of e_1 at ``bits``."""
        if bits not in self._e1:
            rows = self.field.basis_matrix_iv(bits)
            PT = [[rows[i][j] for i in range(self.n)] for j in range(self.n)]
            rhs = [iv.mpf(1)] + [iv.mpf(0)] * (self.n - 1)
            self._e1[bits] = interval_solve(PT, rhs)
        return self._e1[bits]


# -- cones -------------------------------------------------------------------

@dataclass(eq=False)
class SignedCone:
    alpha: int
    vertices: tuple
    generators: tuple
    mu: int
    det_V: int
    det_C: Fraction
    y: Optional[tuple] = None          # numeric y_l (mpf), when mu != 0
    y_signs: Optional[tuple] = None
    closure: Optional[tuple] = None    # face t_l = 0 included iff y_l > 0
    sector: tuple = ()                 # alpha_j per complex place
    sector_anchor: tuple = ()
    det_W_numeric_sign: Optional[int] = None
    frame: Optional[FieldFrame] = dc_field(default=None, repr=False)
    _CinvT: Optional[list] = dc_field(default=None, repr=False)

    @property
    def coordinate_matrix(self):
        return [list(w.coords) for w in self.generators]

    @property
    def CinvT(self):
        """C^{-T} as exact Fractions (row l gives t_l from power coordinates)."""
        if self._CinvT is None:
            inv = fraction_inverse(self.coordinate_matrix)
            if inv is None:
                raise SingularCone(f"cone {self.alpha} has dependent generators")
            n = len(inv)
            self._CinvT = [[inv[j][i] for j in range(n)] for i in range(n)]
        return self._CinvT

    @property
    def det_W_factored_sign(self):
        s = (self.det_C > 0) - (self.det_C < 0)
        return s * self.frame.basis_sign if self.frame else None


def unit_power_product(units, exponents, cache=None):
    """prod eps_j^{a_j} exactly (with an optional cache keyed by the exponents)."""
    key = tuple(int(a) for a in exponents)
    if cache is not None and key in cache:
        return cache[key]
    field = units[0].field if units else None
    out = field.one() if field else None
    for u, a in zip(units, key):
        if a:
            out = out * (u ** a)
    if cache is not None:
        cache[key] = out
    return out


def cone_generators(simplex, tw, units, cache=None):
    """w_l = beta(v_l) prod_j eps_j^{v_l[j]} for the vertices in stored order."""
    r = len(units)
    out = []
    for v in simplex.vertices:
        beta = tw.lookup(v)
        if r:
            beta = beta * unit_power_product(units, v[:r], cache)
        out.append(beta)
    return out


def det_R_sign(field, units):
    """Certified sign of R (first row ones, then log|eps_{i-1}^{(j)}|)."""
    m = field.r1 + field.r2

    def attempt(bits):
        rows = [[iv.mpf(1)] * m]
        for u in units:
            row = []
            for place in range(1, m + 1):
                v = log_abs_iv(field, u, place, bits)
                if v is None:
                    return None
                row.append(v)
            rows.append(row)
        s = sign(leibniz_det(rows))
        return None if s in (0, None) else s

    return field.ladder(attempt, "sign of det R")


def _r2_sign(r2):
    return -1 if (r2 * (r2 - 1) // 2) % 2 else 1


def det_W_sign_numeric(field, generators):
    """Certified sign of det W from interval embeddings (0 never certifies)."""
    def attempt(bits):
        rows = [field.real_coords_iv(w.coords, bits) for w in generators]
        s = sign(leibniz_det(rows))
        return None if s in (0, None) else s

    return field.ladder(attempt, "sign of det W")


def sign_mu(field, units, simplex, generators, r_sign=None, frame=None):
    """mu = (-1)^{r2(r2-1)/2} sign(det R det V det W); 0 iff the generators are dependent."""
    det_C = fraction_det([list(w.coords) for w in generators])
    if det_C == 0:
        return 0
    r_sign = r_sign if r_sign is not None else det_R_sign(field, units)
    basis = frame.basis_sign if frame is not None else FieldFrame(field).basis_sign
    w_sign = (1 if det_C > 0 else -1) * basis
    v_sign = 1 if simplex.det() > 0 else -1
    return _r2_sign(field.r2) * r_sign * v_sign * w_sign


def solve_e1(field, cone, frame=None):
    """Certified y with e_1 = sum y_l w_l; returns (y midpoints, signs)."""
    if field.r1 < 1:
        raise TotallyComplexField("field must have a real place")
    if cone.mu == 0:
        raise SingularCone(f"cone {cone.alpha} has dependent generators")
    frame = frame or cone.frame
    CinvT = cone.CinvT
    n = field.n

    def attempt(bits):
        u = frame.e1_coords_iv(bits)
        if u is None:
            return None
        y = []
        for row in CinvT:
            acc = iv.mpf(0)
            for c, ui in zip(row, u):
                if c:
                    acc += ival(c) * ui
            y.append(acc)
        signs = [sign(v) for v in y]
        if any(s in (0, None) for s in signs):
            return None
        return tuple(mid(v) for v in y), tuple(signs)

    return field.ladder(attempt, "nonvanishing of y_l")


def _membership_from_t(t, scales, tol):
    ambiguous = False
    for tl, sc in zip(t, scales):
        if abs(tl) <= tol * sc:
            ambiguous = True
        elif tl < 0:
            return NO
    return AMBIGUOUS if ambiguous else YES


def contains(cone, x, tol=None):
    """Membership of x in the half-open cone C_alpha: 'yes', 'no' or 'ambiguous'.

    ``x`` is either a FieldElement (exact path: zeros are exact and the
    closure flags decide boundary faces) or a numeric point of
    R^r1 x C^r2 given as r1 reals followed by r2 complex numbers.
    """
    if cone.mu == 0:
        raise SingularCone(f"cone {cone.alpha} has dependent generators")
    CinvT = cone.CinvT
    if hasattr(x, "coords"):
        if x.is_zero():
            raise ValueError("x must be nonzero")
        t = [sum((c * u for c, u in zip(row, x.coords)), Fraction(0)) for row in CinvT]
        return exact_membership(t, cone.closure)
    tol = DEFAULT_TOLERANCE if tol is None else mp.mpf(tol)
    u = cone.frame.power_coords(x)
    with working_precision(cone.frame.field.precision_bits):
        t, scales = [], []
        for row in CinvT:
            terms = [mp.mpf(c.numerator) / c.denominator * ui for c, ui in zip(row, u) if c]
            t.append(mp.fsum(terms))
            scales.append(mp.fsum(abs(v) for v in terms))
        return _membership_from_t(t, scales, tol)


def exact_membership(t, closure):
    for tl, closed in zip(t, closure):
        if tl < 0 or (tl == 0 and not closed):
            return NO
    return YES


def sector_check(cone, sector=None):
    """Every generator lies in the open half-plane around 2 pi (alpha_j + 1/2) / N_j."""
    frame = cone.frame
    field = frame.field
    if field.r2 == 0:
        return True
    anchors = sector.anchors[cone.alpha] if sector is not None else cone.sector_anchor
    forms = sector.forms if sector is not None else frame.forms
    for j in range(field.r2):
        v, m = anchors[j]
        form = forms[j]
        Nj = frame.N[j]

        def attempt(bits, v=v, m=m, form=form, Nj=Nj, j=j):
            a = form.value_iv(v, bits)
            if a is None:
                return None
            phi = 2 * iv.pi * (a + m + iv.mpf(0.5)) / Nj
            rot = iv.mpc(iv.cos(phi), -iv.sin(phi))
            verdicts = []
            for w in cone.generators:
                z = field.embed_iv(w.coords, field.r1 + 1 + j, bits) * rot
                s = sign(z.real)
                if s is None:
                    return None
                verdicts.append(s > 0)
            return all(verdicts)

        if not field.ladder(attempt, "sector containment"):
            return False
    return True


# -- the whole domain ----------------------------------------------------------

@dataclass(eq=False)
class SignedDomain:
    field: object
    units: tuple
    N: tuple
    twister: object
    complex: object
    sector: object
    cones: list
    det_R_sign: int
    basis_sign: int
    frame: FieldFrame = dc_field(repr=False)

    @property
    def degree_constant(self):
        n, r2 = self.field.n, self.field.r2
        return (-1) ** (n - 1) * _r2_sign(r2) * self.det_R_sign

    @property
    def active_cones(self):
        return [c for c in self.cones if c.mu != 0]

    def coherence_failures(self):
        """Cones whose numeric det W sign disagrees with the exact factorisation."""
        bad = []
        for c in self.cones:
            if c.mu == 0:
                continue
            if c.det_W_numeric_sign != c.det_W_factored_sign:
                bad.append(c.alpha)
        return bad


def make_cone(domain_frame, field, units, simplex, alpha, tw, r_sign, sector=None,
              cache=None, numeric_check=True):
    gens = tuple(cone_generators(simplex, tw, units, cache))
    det_C = fraction_det([list(w.coords) for w in gens])
    mu = sign_mu(field, units, simplex, gens, r_sign, domain_frame) if det_C else 0
    cone = SignedCone(alpha, simplex.vertices, gens, mu, simplex.det(), det_C,
                      frame=domain_frame)
    if sector is not None and sector.forms:
        cone.sector = tuple(sector.values[alpha])
        cone.sector_anchor = tuple(sector.anchors[alpha])
    if mu:
        if numeric_check:
            cone.det_W_numeric_sign = det_W_sign_numeric(field, gens)
        cone.y, cone.y_signs = solve_e1(field, cone, domain_frame)
        cone.closure = tuple(s > 0 for s in cone.y_signs)
    return cone


def build_signed_domain(field, units, N=(), twister=None, margin=0.25):
    """Construct the signed cones {C_alpha, mu_alpha} for ``field``."""
    if field.r1 < 1:
        raise TotallyComplexField("field must have a real place")
    units = tuple(units)
    N = tuple(int(x) for x in N)
    X, sector = build_domain_complex(field, units, N)
    if twister is None:
        twister = construct_twister(field, N, margin=margin)
    else:
        if tuple(twister.N) != N:
            raise InvalidFieldSpec("twister sector counts do not match N")
        report = validate_twister(field, twister)
        if not report.ok:
            bad = [e.cls for e in report.entries if not e.ok]
            raise InvalidFieldSpec(f"twister entries fail their windows: {bad}")
    frame = FieldFrame(field)
    frame.N = N
    frame.forms = sector.forms
    r_sign = det_R_sign(field, units)
    cache = {}
    cones = [make_cone(frame, field, units, s, i, twister, r_sign, sector, cache)
             for i, s in enumerate(X.simplices)]
    return SignedDomain(field, units, N, twister, X, sector, cones, r_sign,
                        frame.basis_sign, frame)
