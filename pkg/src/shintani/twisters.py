"""Twisters: Lambda-periodic choices of totally positive elements of k.

A twister assigns to each residue class c = (c_1, ..., c_r2), 0 <= c_j < N_j,
a totally positive element whose argument at complex place j lies within
pi/2 - pi/N_j of 2 pi c_j / N_j.  Lookup at x in Z^(n-1) reduces the last r2
coordinates mod N_j and ignores the first r, which makes the map periodic for
Lambda = Z^r x N_1 Z x ... x N_r2 Z by construction.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from mpmath import iv, mp

from ._intervals import certify, sign
from .exceptions import PrecisionExhausted, TwisterSearchFailed

DEFAULT_MARGIN = 0.25
MAX_DENOMINATOR = 2 ** 40


@dataclass(frozen=True)
class Twister:
    field: object
    N: tuple
    table: dict = dc_field(hash=False)

    @property
    def r(self):
        return self.field.n - 1 - len(self.N)

    def classes(self):
        return [tuple(c) for c in product(*(range(n) for n in self.N))]

    def class_of(self, x):
        r = self.r
        return tuple(int(x[r + j]) % n for j, n in enumerate(self.N))

    def lookup(self, x):
        """beta(x) for x in Z^(n-1)."""
        return self.table[self.class_of(x)]

    __call__ = lookup


def trivial_twister(field):
    """beta = 1, the only choice needed when k has no complex place."""
    return Twister(field, (), {(): field.one()})


@dataclass
class WindowCheck:
    place: int
    target: object      # 2 pi c / N
    deviation: object   # |arg(beta) - target| as an mpf (midpoint)
    window: object      # pi/2 - pi/N
    slack: object       # window - deviation
    ok: bool

    @property
    def relative_slack(self):
        return self.slack / self.window


@dataclass
class EntryCheck:
    cls: tuple
    totally_positive: bool
    windows: list

    @property
    def ok(self):
        return self.totally_positive and all(w.ok for w in self.windows)

    @property
    def min_relative_slack(self):
        if not self.windows:
            return mp.mpf(1)
        return min(w.relative_slack for w in self.windows)


@dataclass
class TwisterReport:
    entries: list

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    @property
    def min_relative_slack(self):
        return min((e.min_relative_slack for e in self.entries), default=mp.mpf(1))


def _window_check(field, beta, place, c, N):
    def attempt(bits):
        z = field.embed_iv(beta.coords, place, bits)
        phi = 2 * iv.pi * c / N
        rot = z * iv.mpc(iv.cos(phi), -iv.sin(phi))
        window = iv.pi / 2 - iv.pi / N
        if rot.real.b < 0:
            # left half-plane: deviation exceeds pi/2 > window
            dev = iv.mpf(mp.pi)
        else:
            dev = abs(iv.arg(rot))
            if dev.b - dev.a > 1:
                return None
        slack = window - dev
        s = sign(slack)
        if s is None:
            return None
        return WindowCheck(place, 2 * mp.pi * c / N, +mp.mpf(dev.mid), +mp.mpf(window.mid),
                           +mp.mpf(slack.mid), s > 0)

    return certify(attempt, field.precision_bits, field.max_precision_bits,
                   f"twister window at place {place}")


def _positive_everywhere(field, beta):
    if beta.is_zero():
        return False
    for place in range(1, field.r1 + 1):
        def attempt(bits, place=place):
            return sign(field.embed_iv(beta.coords, place, bits))
        if field.ladder(attempt, "twister sign") <= 0:
            return False
    return True


def validate_twister(field, tw):
    """Certified total positivity and argument-window checks for every class."""
    entries = []
    for cls in tw.classes():
        if cls not in tw.table:
            raise KeyError(f"twister table is missing class {cls}")
        beta = tw.table[cls]
        windows = []
        for j, (c, n) in enumerate(zip(cls, tw.N), 1):
            windows.append(_window_check(field, beta, field.r1 + j, c, n))
        entries.append(EntryCheck(cls, _positive_everywhere(field, beta), windows))
    return TwisterReport(entries)


def _target_coordinates(field, cls, N, bits):
    """Power-basis coordinates (as mpf) of the point (1,...,1, e^(2 pi i c_j / N_j))."""
    with mp.workprec(bits):
        target = [mp.mpf(1)] * field.r1
        for c, n in zip(cls, N):
            z = mp.expjpi(mp.mpf(2 * c) / n)
            target += [mp.re(z), mp.im(z)]
        roots = [mp.mpc(e.center) for e in field.roots_at(bits)]
        rows = []
        for i in range(field.n):
            row = []
            for place, rt in enumerate(roots, 1):
                v = rt ** i
                if place <= field.r1:
                    row.append(mp.re(v))
                else:
                    row.extend([mp.re(v), mp.im(v)])
            rows.append(row)
        # sum_i a_i I(theta^i) = target, i.e. P^T a = target
        P = mp.matrix(rows)
        a = mp.lu_solve(P.T, mp.matrix(target))
        return [a[i] for i in range(field.n)]


def _round(x, bound):
    return Fraction(mp.nstr(x, 60, strip_zeros=False)).limit_denominator(bound)


def construct_twister(field, N, margin=DEFAULT_MARGIN, denom_bound=1,
                      max_denominator=MAX_DENOMINATOR):
    """Build a twister by rounding the real solve of the target equation.

    For each class the coordinates are rounded to rationals with denominator
    at most ``denom_bound``; a candidate is kept once every window has
    relative slack >= ``margin``, otherwise the bound is doubled.
    """
    N = tuple(int(n) for n in N)
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    if denom_bound < 1:
        raise ValueError("denom_bound must be >= 1")
    if not N:
        return trivial_twister(field)
    table = {}
    bits = max(field.precision_bits, 128)
    for cls in product(*(range(n) for n in N)):
        coords = _target_coordinates(field, cls, N, bits)
        bound = int(denom_bound)
        while True:
            candidate = field.element([_round(x, bound) for x in coords])
            if not candidate.is_zero():
                try:
                    entry = EntryCheck(cls, _positive_everywhere(field, candidate), [
                        _window_check(field, candidate, field.r1 + j, c, n)
                        for j, (c, n) in enumerate(zip(cls, N), 1)])
                    if entry.ok and entry.min_relative_slack >= margin:
                        table[cls] = candidate
                        break
                except PrecisionExhausted:
                    pass
            if bound >= max_denominator:
                raise TwisterSearchFailed(
                    f"no twister for class {cls} with denominator <= {max_denominator}")
            bound *= 2
    return Twister(field, N, table)
