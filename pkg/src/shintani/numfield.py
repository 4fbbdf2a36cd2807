"""Exact arithmetic in k = Q[x]/(f) and certified embeddings of k.

Elements are stored by their rational coordinates in the power basis
1, theta, ..., theta^(n-1).  Numerical work happens only when an element is
pushed through one of the embeddings, and every numerical answer carries an
error bound (either as an ``mpmath.iv`` interval or an explicit radius).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from mpmath import iv, mp

from ._intervals import (certify, fraction_det, ival, mid, radius, sign,
                         working_precision)
from .exceptions import (InvalidFieldSpec, InversionOfZero, NonInvertible,
                         PrecisionExhausted)

DEFAULT_PRECISION = 128
DEFAULT_PRECISION_CAP = 4096

Rational = Union[int, Fraction, str]


# -- polynomial helpers (ascending coefficient lists over Q) ----------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = _trim(a)
    return _trim(q), a


def _poly_egcd(a, b):
    """Return (g, s) with s*a = g (mod b)."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        qs = _poly_mul(q, s1)
        n = max(len(s0), len(qs))
        s0, s1 = s1, _trim([(s0[i] if i < len(s0) else 0)
                            - (qs[i] if i < len(qs) else 0) for i in range(n)])
    return r0, s0


def parse_rational(x):
    """Rationals travel as "p/q" strings; ints and Fractions pass through."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# -- roots -----------------------------------------------------------------

def _horner_with_derivative(coeffs, z):
    p = coeffs[-1]
    dp = 0
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth_roots(coeffs, bits):
    """Approximate all roots of a monic polynomial by Aberth iteration.

    ``coeffs`` are ascending integers.  The iteration runs with 32 guard bits
    and stops once every relative correction is below 2^-(bits + 16).
    """
    n = len(coeffs) - 1
    with mp.workprec(bits + 32):
        a = [mp.mpf(c) for c in coeffs]
        bound = 1 + max(abs(c) for c in a[:-1]) if n > 1 else abs(a[0]) + 1
        scale = min(bound, mp.mpf(2)) if n > 1 else bound
        z = [scale * mp.expj(2 * mp.pi * k / n + mp.mpf("0.4")) for k in range(n)]
        tol = mp.mpf(2) ** (-(bits + 16))
        for _ in range(64 * n + 4 * bits):
            worst = mp.mpf(0)
            for i in range(n):
                p, dp = _horner_with_derivative(a, z[i])
                if p == 0:
                    continue
                if dp == 0:
                    dp = tol
                ratio = p / dp
                s = mp.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
                step = ratio / (1 - ratio * s)
                z[i] -= step
                worst = max(worst, abs(step) / max(1, abs(z[i])))
            if worst < tol:
                break
        return [mp.mpc(w) for w in z]


@dataclass(frozen=True)
class RootEnclosure:
    """A disk of radius ``radius`` around ``center`` holding exactly one root."""

    center: object
    radius: object
    is_real: bool

    def box(self):
        r = iv.mpf([-self.radius, self.radius])
        if self.is_real:
            return iv.mpf(mp.re(self.center)) + r
        return iv.mpc(iv.mpf(mp.re(self.center)) + r, iv.mpf(mp.im(self.center)) + r)


def _horner_iv(coeffs, z):
    p = ival(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        p = p * z + ival(c)
    return p


def _certified_roots(coeffs, bits):
    """Certified enclosures at ``bits`` of precision, or None.

    Uses the Weierstrass-correction inclusion: the disks D(z_i, n|W_i|) with
    W_i = f(z_i) / prod_{j != i}(z_i - z_j) cover all roots, and an isolated
    disk holds exactly one.  A real-centred isolated disk is its own mirror
    image, so its root is real; a disk above the real axis holds a non-real
    root.
    """
    n = len(coeffs) - 1
    approx = aberth_roots(coeffs, bits)
    thresh = mp.mpf(2) ** (-(bits // 2))
    reals, uppers = [], []
    for z in approx:
        if abs(mp.im(z)) <= thresh * max(1, abs(z)):
            reals.append(mp.mpf(mp.re(z)))
        elif mp.im(z) > 0:
            uppers.append(z)
    if len(reals) + 2 * len(uppers) != n:
        return None
    centers = [mp.mpc(x, 0) for x in reals] + uppers + [mp.conj(u) for u in uppers]
    boxes = [iv.mpc(iv.mpf(mp.re(c)), iv.mpf(mp.im(c))) for c in centers]
    radii = []
    for i, zi in enumerate(boxes):
        fz = _horner_iv(coeffs, zi)
        prod = iv.mpc(1, 0)
        for j, zj in enumerate(boxes):
            if j != i:
                prod = prod * (zi - zj)
        denom = abs(prod)
        if not denom.a > 0:
            return None
        radii.append(mp.mpf((n * abs(fz) / denom).b))
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(boxes[i] - boxes[j])
            if not gap.a > iv.mpf(radii[i]) + iv.mpf(radii[j]):
                return None
    enclosures = []
    for c, rad in zip(centers[: len(reals) + len(uppers)], radii):
        is_real = mp.im(c) == 0
        if not is_real and not mp.im(c) > rad:
            return None
        enclosures.append(RootEnclosure(c if not is_real else mp.re(c), rad, is_real))
    return enclosures


def _order_key_real(e):
    return -mp.re(e.center)


class NumberField:
    """The number field Q[x]/(f) for a monic irreducible integer polynomial f.

    Parameters
    ----------
    min_poly : sequence of int
        Ascending coefficients of f; the last one must be 1.
    precision_bits : int
        Base working precision for embeddings.
    max_precision_bits : int
        Cap for the precision ladder used by sign decisions.

    Places are numbered from 1: the ``r1`` real roots in decreasing order,
    then one root with positive imaginary part per conjugate pair, ordered by
    real part (ties by imaginary part).
    """

    def __init__(self, min_poly: Sequence[int], precision_bits=DEFAULT_PRECISION,
                 max_precision_bits=DEFAULT_PRECISION_CAP):
        coeffs = [int(c) for c in min_poly]
        if any(Fraction(c) != Fraction(m) for c, m in zip(coeffs, min_poly)):
            raise InvalidFieldSpec("minimal polynomial must have integer coefficients")
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise InvalidFieldSpec("minimal polynomial must be monic of degree >= 1")
        if coeffs[0] == 0 and len(coeffs) > 2:
            raise InvalidFieldSpec("minimal polynomial is divisible by x")
        self.min_poly = tuple(coeffs)
        self.n = len(coeffs) - 1
        self.precision_bits = int(precision_bits)
        self.max_precision_bits = int(max(max_precision_bits, precision_bits))
        self._root_cache = {}
        base = certify(self._compute_roots, self.precision_bits,
                       self.max_precision_bits, "root isolation")
        self._base = base
        self.r1 = sum(1 for e in base if e.is_real)
        self.r2 = len(base) - self.r1

    def __repr__(self):
        return f"NumberField(min_poly={list(self.min_poly)}, signature=({self.r1}, {self.r2}))"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    @property
    def signature(self):
        return self.r1, self.r2

    @property
    def num_places(self):
        return self.r1 + self.r2

    @property
    def roots(self):
        """Root centres at the base precision, in place order."""
        return [e.center for e in self._base]

    # -- roots --------------------------------------------------------------

    def _compute_roots(self, bits):
        found = _certified_roots(self.min_poly, bits)
        if found is None:
            return None
        reals = sorted((e for e in found if e.is_real), key=_order_key_real)
        cplx = [e for e in found if not e.is_real]
        if hasattr(self, "_base"):
            cplx = self._match_to_base(cplx)
            if cplx is None:
                return None
        else:
            cplx = self._sort_complex(cplx)
        out = reals + cplx
        self._root_cache[bits] = out
        return out

    @staticmethod
    def _sort_complex(cplx):
        def key(e):
            return (mp.re(e.center), mp.im(e.center))
        ordered = sorted(cplx, key=key)
        # bubble pairs whose real parts are not certifiably distinct into
        # imaginary-part order, so the ordering is stable under refinement
        changed = True
        while changed:
            changed = False
            for i in range(len(ordered) - 1):
                a, b = ordered[i], ordered[i + 1]
                tied = abs(mp.re(a.center) - mp.re(b.center)) <= a.radius + b.radius
                if tied and mp.im(a.center) > mp.im(b.center):
                    ordered[i], ordered[i + 1] = b, a
                    changed = True
        return ordered

    def _match_to_base(self, cplx):
        out = []
        for ref in self._base[self.r1:]:
            hits = [e for e in cplx
                    if abs(e.center - ref.center) <= e.radius + ref.radius]
            if len(hits) != 1:
                return None
            out.append(hits[0])
        return out

    def roots_at(self, bits):
        """Certified root enclosures at ``bits`` bits (cached)."""
        bits = int(bits)
        if bits not in self._root_cache:
            with working_precision(bits):
                if self._compute_roots(bits) is None:
                    raise PrecisionExhausted(f"root isolation failed at {bits} bits")
        return self._root_cache[bits]

    # -- elements -----------------------------------------------------------

    def element(self, coords):
        coords = [parse_rational(c) for c in coords]
        if len(coords) > self.n:
            raise ValueError(f"expected at most {self.n} coordinates")
        coords += [Fraction(0)] * (self.n - len(coords))
        return FieldElement(self, tuple(coords))

    __call__ = element

    def one(self):
        return self.element([1])

    def zero(self):
        return self.element([])

    def theta(self):
        if self.n == 1:
            return self.element([-self.min_poly[0]])
        return self.element([0, 1])

    def _reduce(self, poly):
        p = list(poly) + [Fraction(0)] * max(0, self.n - len(poly))
        f = self.min_poly
        for top in range(len(p) - 1, self.n - 1, -1):
            c = p[top]
            if c:
                shift = top - self.n
                for i in range(self.n + 1):
                    p[shift + i] -= c * f[i]
        return tuple(p[: self.n])

    # -- embeddings (interval level; caller sets the working precision) -----

    def embed_iv(self, coords, place, bits):
        """Interval enclosure of the element at ``place`` (1-based)."""
        if not 1 <= place <= self.num_places:
            raise IndexError(f"place must be in 1..{self.num_places}")
        z = self.roots_at(bits)[place - 1].box()
        return _horner_iv(list(coords), z)

    def real_coords_iv(self, coords, bits):
        """Enclosure of the image under R^r1 x C^r2 -> R^n (Re, Im per complex place)."""
        out = []
        for place in range(1, self.num_places + 1):
            v = self.embed_iv(coords, place, bits)
            if place <= self.r1:
                out.append(v)
            else:
                out.extend([v.real, v.imag])
        return out

    def basis_matrix_iv(self, bits):
        """Rows are the real coordinates of theta^0, ..., theta^(n-1)."""
        rows = []
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 1
            rows.append(self.real_coords_iv(e, bits))
        return rows

    def ladder(self, fn, what):
        return certify(fn, self.precision_bits, self.max_precision_bits, what)


@dataclass(frozen=True)
class FieldElement:
    """An element of a number field as an exact power-basis coordinate vector."""

    field: NumberField
    coords: tuple

    def __repr__(self):
        return f"FieldElement({[str(c) for c in self.coords]})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element([other])
        return (isinstance(other, FieldElement) and other.field == self.field
                and other.coords == self.coords)

    def __hash__(self):
        return hash((self.field.min_poly, self.coords))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def is_zero(self):
        return not any(self.coords)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = _poly_mul(_trim(self.coords), _trim(other.coords))
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise InversionOfZero("inverse of zero")
        g, s = _poly_egcd(_trim(self.coords), [Fraction(c) for c in self.field.min_poly])
        if len(g) != 1:
            raise NonInvertible(
                "element shares a factor with the minimal polynomial; f is reducible")
        s = [c / g[0] for c in s]
        return FieldElement(self.field, self.field._reduce(s))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def multiplication_matrix(self):
        """Row i holds the coordinates of self * theta^i."""
        rows = []
        x = self
        t = self.field.theta() if self.field.n > 1 else None
        for i in range(self.field.n):
            rows.append(list(x.coords))
            if t is not None:
                x = x * t
        return rows


def field_arith(a, b=None, kind="add", e=None):
    """Exact field arithmetic: kind in add, sub, mul, inv, pow."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "inv":
        return a.inverse()
    if kind == "pow":
        return a ** e
    raise ValueError(f"unknown operation {kind!r}")


@dataclass(frozen=True)
class EmbeddedValue:
    place: int
    value: object
    radius: object


def embed(field, a, place):
    """Value of ``a`` at ``place`` (1-based) with a certified error radius."""
    if a.is_zero():
        return EmbeddedValue(place, mp.mpf(0) if place <= field.r1 else mp.mpc(0), mp.mpf(0))

    def attempt(bits):
        v = field.embed_iv(a.coords, place, bits)
        if place <= field.r1:
            value, rad = mid(v), radius(v)
        else:
            value = mp.mpc(mid(v.real), mid(v.imag))
            rad = mp.hypot(radius(v.real), radius(v.imag))
        if rad >= mp.mpf(2) ** (-field.precision_bits // 2) * abs(value):
            return None
        return EmbeddedValue(place, value, rad)

    return field.ladder(attempt, f"embedding at place {place}")


def is_totally_positive(field, a):
    """True iff ``a`` is positive at every real place (vacuous if r1 = 0)."""
    if a.is_zero():
        raise ValueError("zero is not in k*")
    for place in range(1, field.r1 + 1):
        def attempt(bits, place=place):
            return sign(field.embed_iv(a.coords, place, bits))
        if field.ladder(attempt, f"sign at real place {place}") < 0:
            return False
    return True


def norm_exact(field, a):
    """Exact norm N(a) = prod over all n embeddings, via the multiplication matrix.

    For monic f this determinant equals the resultant Res(f, a).
    """
    return fraction_det(a.multiplication_matrix())


def log_embedding(field, a):
    """Vector of e_j log|a^(j)| over the places (e_j = 2 at complex places)."""
    if a.is_zero():
        raise ValueError("log of zero")
    out = []
    for place in range(1, field.num_places + 1):
        def attempt(bits, place=place):
            v = abs(field.embed_iv(a.coords, place, bits))
            if not v.a > 0:
                return None
            weight = 1 if place <= field.r1 else 2
            return mid(weight * iv.log(v))
        out.append(field.ladder(attempt, f"log at place {place}"))
    return out


def log_abs_iv(field, a, place, bits):
    """Interval of log|a^(place)| (no e_j weight)."""
    v = abs(field.embed_iv(a.coords, place, bits))
    if not v.a > 0:
        return None
    return iv.log(v)


def arg_iv(field, a, place, bits):
    """Interval of the principal argument in (-pi, pi] at a complex place."""
    v = field.embed_iv(a.coords, place, bits)
    out = iv.arg(v)
    if out.b - out.a > 1:
        return None
    return out
