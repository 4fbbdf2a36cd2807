"""JSON interchange for field specs, domains and verification reports.

Exact data travels as rational strings "p/q"; decimals appear only in fields
whose names say so (``*_decimal``) and are never read back as exact data.
"""

import json
from fractions import Fraction

from mpmath import mp

from . import __version__
from .complexes import LinearForm, OrderedComplex, OrderedSimplex, SectorData
from .domain import FieldFrame, SignedCone, SignedDomain, det_R_sign
from .exceptions import InvalidFieldSpec, SchemaError
from .numfield import DEFAULT_PRECISION, NumberField, embed
from .twisters import Twister

DOMAIN_SCHEMA = "shintani-domain/1"
REPORT_SCHEMA = "shintani-report/1"
OUTPUT_DIGITS = 30


def rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rats(xs):
    return [rat(x) for x in xs]


def _need(data, key, where):
    if key not in data:
        raise SchemaError(f"{where}: missing key {key!r}")
    return data[key]


# -- field specs -----------------------------------------------------------------

class FieldSpec:
    """Parsed input spec: field, units, sector counts and optional twister."""

    def __init__(self, min_poly, units, N=(), twister=None, precision_bits=DEFAULT_PRECISION,
                 seed=0, sample_count=1000, tolerance="1e-30", notes=None):
        self.min_poly = [int(c) for c in min_poly]
        self.units = [[Fraction(c) for c in u] for u in units]
        self.N = [int(x) for x in N]
        self.twister = twister
        self.precision_bits = int(precision_bits)
        self.seed = int(seed)
        self.sample_count = int(sample_count)
        self.tolerance = str(tolerance)
        self.notes = notes

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise InvalidFieldSpec("field spec must be a JSON object")
        try:
            spec = cls(_need(data, "min_poly", "spec"), _need(data, "units", "spec"),
                       data.get("N", []), data.get("twister"),
                       data.get("precision_bits", DEFAULT_PRECISION), data.get("seed", 0),
                       data.get("sample_count", 1000), data.get("tolerance", "1e-30"),
                       data.get("notes"))
        except SchemaError as exc:
            raise InvalidFieldSpec(str(exc)) from exc
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidFieldSpec(f"malformed field spec: {exc}") from exc
        return spec

    def field(self, precision_bits=None):
        return NumberField(self.min_poly, precision_bits or self.precision_bits)

    def resolve(self, precision_bits=None):
        """Return (field, units, N, twister or None) with the shape checked."""
        K = self.field(precision_bits)
        r = K.r1 + K.r2 - 1
        if len(self.units) != r:
            raise InvalidFieldSpec(f"signature {K.signature} needs {r} units, "
                                   f"spec has {len(self.units)}")
        if len(self.N) != K.r2:
            raise InvalidFieldSpec(f"signature {K.signature} needs {K.r2} sector counts, "
                                   f"spec has {len(self.N)}")
        units = [K.element(u) for u in self.units]
        tw = twister_from_json(K, self.N, self.twister) if self.twister is not None else None
        return K, units, self.N, tw


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidFieldSpec(f"{path}: not valid JSON ({exc})") from exc
    return FieldSpec.from_dict(data)


# -- twisters ------------------------------------------------------------------

def twister_to_json(tw):
    return [{"class": list(c), "coords": _rats(tw.table[c].coords)} for c in tw.classes()]


def twister_from_json(field, N, rows):
    if not isinstance(rows, list):
        raise SchemaError("twister must be a list of {class, coords} entries")
    table = {}
    for row in rows:
        cls = tuple(int(c) for c in _need(row, "class", "twister entry"))
        table[cls] = field.element(_need(row, "coords", "twister entry"))
    tw = Twister(field, tuple(N), table)
    missing = [c for c in tw.classes() if c not in table]
    if missing:
        raise SchemaError(f"twister table is missing classes {missing}")
    return tw


# -- domains -------------------------------------------------------------------

def _decimal(v):
    return mp.nstr(v, OUTPUT_DIGITS)


def _embedding_strings(field, w):
    out = []
    for place in range(1, field.num_places + 1):
        v = embed(field, w, place).value
        if place <= field.r1:
            out.append([_decimal(v)])
        else:
            out.append([_decimal(v.real), _decimal(v.imag)])
    return out


def domain_to_json(domain, spec=None):
    f = domain.field
    cones = []
    for c in domain.cones:
        cones.append({
            "alpha": c.alpha,
            "vertices": [list(v) for v in c.vertices],
            "provenance": [list(p) for p in domain.complex[c.alpha].provenance],
            "generators": [_rats(w.coords) for w in c.generators],
            "embeddings_decimal": [_embedding_strings(f, w) for w in c.generators],
            "mu": c.mu,
            "det_V": c.det_V,
            "det_C": rat(c.det_C),
            "y_signs": list(c.y_signs) if c.y_signs is not None else None,
            "y_decimal": [_decimal(v) for v in c.y] if c.y is not None else None,
            "closure": list(c.closure) if c.closure is not None else None,
            "sector_anchor": [[list(v), m] for v, m in c.sector_anchor],
            "sector_decimal": [_decimal(a) for a in c.sector],
        })
    return {
        "schema_version": DOMAIN_SCHEMA,
        "field": {"min_poly": list(f.min_poly), "signature": [f.r1, f.r2],
                  "precision_bits": f.precision_bits},
        "units": [_rats(u.coords) for u in domain.units],
        "N": list(domain.N),
        "lattice_periods": list(domain.complex.periods),
        "twister": twister_to_json(domain.twister),
        "det_R_sign": domain.det_R_sign,
        "basis_sign": domain.basis_sign,
        "degree_constant": domain.degree_constant,
        "cones": cones,
        "build": _build_info(domain, spec, len(cones)),
    }


def _build_info(domain, spec, count):
    info = {"package_version": __version__, "cone_count": count}
    if spec is not None:
        info.update(seed=spec.seed, sample_count=spec.sample_count, tolerance=spec.tolerance)
    return info


def domain_from_json(data):
    """Rebuild a SignedDomain from its JSON form; exact fields are taken as given."""
    if not isinstance(data, dict) or not data:
        raise SchemaError("domain file is empty or not a JSON object")
    version = data.get("schema_version")
    if version != DOMAIN_SCHEMA:
        raise SchemaError(f"schema_version {version!r} is not {DOMAIN_SCHEMA!r}")
    fd = _need(data, "field", "domain")
    K = NumberField(_need(fd, "min_poly", "field"), fd.get("precision_bits", DEFAULT_PRECISION))
    if [K.r1, K.r2] != list(fd.get("signature", [K.r1, K.r2])):
        raise SchemaError("recorded signature does not match the minimal polynomial")
    units = tuple(K.element(u) for u in _need(data, "units", "domain"))
    N = tuple(int(x) for x in _need(data, "N", "domain"))
    tw = twister_from_json(K, N, _need(data, "twister", "domain"))
    raw = _need(data, "cones", "domain")
    if not raw:
        raise SchemaError("domain has no cones")
    r = len(units)
    forms = tuple(LinearForm.from_unit_arguments(K, units, K.r1 + j, Nj, r + j - 1)
                  for j, Nj in enumerate(N, 1))
    sector = SectorData(r, forms)
    frame = FieldFrame(K)
    frame.N = N
    frame.forms = forms
    simplices, cones = [], []
    for i, c in enumerate(raw):
        if int(_need(c, "alpha", "cone")) != i:
            raise SchemaError("cones must be listed in alpha order")
        verts = tuple(tuple(int(x) for x in v) for v in _need(c, "vertices", "cone"))
        prov = tuple(tuple(p) for p in c.get("provenance", []))
        simplices.append(OrderedSimplex(verts, prov))
        anchors = tuple((tuple(int(x) for x in v), int(m)) for v, m in c.get("sector_anchor", []))
        sector.anchors.append(anchors)
        sector.values.append(tuple(forms[j].value(v, K.precision_bits) + m
                                   for j, (v, m) in enumerate(anchors)))
        gens = tuple(K.element(g) for g in _need(c, "generators", "cone"))
        closure = c.get("closure")
        y_signs = c.get("y_signs")
        y = c.get("y_decimal")
        if y:
            with mp.workprec(K.precision_bits):
                y = tuple(mp.mpf(v) for v in y)
        cone = SignedCone(i, verts, gens, int(_need(c, "mu", "cone")), int(c.get("det_V", 0)),
                          Fraction(c.get("det_C", "0")),
                          y=y or None,
                          y_signs=tuple(y_signs) if y_signs is not None else None,
                          closure=tuple(bool(b) for b in closure) if closure is not None else None,
                          sector=sector.values[-1], sector_anchor=anchors, frame=frame)
        if cone.mu not in (-1, 0, 1):
            raise SchemaError(f"cone {i}: mu must be -1, 0 or 1")
        if cone.mu and cone.closure is None:
            raise SchemaError(f"cone {i}: closure flags are required when mu != 0")
        cones.append(cone)
    dim = K.n - 1
    periods = tuple(int(p) for p in data.get("lattice_periods", [1] * r + list(N)))
    X = OrderedComplex(dim, tuple(simplices), periods)
    r_sign = data.get("det_R_sign")
    if r_sign is None:
        r_sign = det_R_sign(K, units)
    domain = SignedDomain(K, units, N, tw, X, sector, cones, int(r_sign), frame.basis_sign, frame)
    domain.build_info = dict(data.get("build", {}))
    return domain


def load_domain(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if not text.strip():
        raise SchemaError(f"{path}: empty domain file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return domain_from_json(data)


# -- reports -------------------------------------------------------------------

def report_to_json(report):
    return {
        "schema_version": REPORT_SCHEMA,
        "passed": report.passed,
        "seed": report.seed,
        "precision_bits": report.precision_bits,
        "samples_requested": report.samples_requested,
        "samples_accepted": report.samples_accepted,
        "samples_resampled": report.samples_resampled,
        "count_histogram": _histogram(report.counts),
        "count_failures": report.count_failures,
        "cone_hits": {str(k): v for k, v in sorted(report.cone_hits.items())},
        "max_orbit_hits": {str(k): v for k, v in sorted(report.max_orbit_hits.items())},
        "mu_zero_cones": report.mu_zero_cones,
        "properties": {k: {"passed": p.passed, "checked": p.checked, "detail": p.detail}
                       for k, p in report.properties.items()},
        "elapsed_seconds": round(report.elapsed, 3),
    }


def _histogram(counts):
    out = {}
    for c in counts:
        key = "unstable" if c is None else str(c)
        out[key] = out.get(key, 0) + 1
    return out


def dumps(data):
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
