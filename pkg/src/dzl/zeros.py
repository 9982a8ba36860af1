"""Zero localization and certification for Dirichlet polynomials.

Winding numbers are computed by adaptive phase tracking along rectangle
boundaries (no sub-interval is accepted with phase step >= pi/2, so a full
turn cannot hide between samples).  Certification is floating point with
explicit margins: the minimum boundary modulus and the phase-step cap are
always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

from .arith import MultiplicativeFunction
from .bdelta import BDelta
from .dirpoly import DirichletPolynomial, SeriesSurrogate

__all__ = [
    "Rectangle",
    "ZeroRecord",
    "WindingResult",
    "BoundaryZeroError",
    "threshold",
    "delta_for_c",
    "inequality_chain_check",
    "winding_number",
    "winding_with_jitter",
    "refine_zero",
    "find_zeros",
    "domination_abscissa",
    "certify_zero_free",
    "rightmost_zero_scan",
    "montgomery_rectangle",
    "ModelMParams",
    "build_model_m_params",
    "model_M_eval",
    "model_M_winding",
    "model_M_eval_scaled",
    "model_M_winding_scaled",
    "rouche_gap_report",
]

FOUR_OVER_PI = 4.0 / math.pi


# ---------------------------------------------------------------------------
# closed-form quantities

def threshold(N: float, k: float) -> float:
    """The zero-free abscissa 1 + (4k/pi - 1) loglog N / log N."""
    if N <= math.e:
        raise ValueError("need N > e so loglog N is positive")
    if k <= 0:
        raise ValueError("k must be positive")
    return 1.0 + (FOUR_OVER_PI * k - 1.0) * math.log(math.log(N)) / math.log(N)


def delta_for_c(c: float, m: float) -> float:
    """delta = (1/(50 m)) (4m/pi - 1 - c), the twist parameter for exponent c."""
    if m <= math.pi / 4.0:
        raise ValueError(f"need m > pi/4, got m={m}")
    if not 0.0 < c < FOUR_OVER_PI * m - 1.0:
        raise ValueError(f"need 0 < c < 4m/pi - 1 = {FOUR_OVER_PI * m - 1.0:g}, got c={c}")
    d = (FOUR_OVER_PI * m - 1.0 - c) / (50.0 * m)
    assert d < 4.0 / (50.0 * math.pi)
    return d


@dataclass
class ChainLink:
    name: str
    lhs: float
    rhs: float
    strict: bool
    ok: bool

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


@dataclass
class ChainReport:
    links: list
    passed: bool
    tightest: ChainLink


def inequality_chain_check(delta: float, m: float, c: float) -> ChainReport:
    """Verify 8m/pi-1-c > 4m/pi > m*gap >= 4m/pi - 2 m pi d^2 > 4m/pi - 50 m d = 1+c."""
    gap = BDelta(delta).gap()
    v = [
        8.0 * m / math.pi - 1.0 - c,
        FOUR_OVER_PI * m,
        m * gap,
        FOUR_OVER_PI * m - 2.0 * m * math.pi * delta * delta,
        FOUR_OVER_PI * m - 50.0 * m * delta,
    ]
    links = [
        ChainLink("8m/pi-1-c > 4m/pi", v[0], v[1], True, v[0] > v[1]),
        ChainLink("4m/pi > m*gap", v[1], v[2], True, v[1] > v[2]),
        ChainLink("m*gap >= 4m/pi - 2m*pi*d^2", v[2], v[3], False, v[2] >= v[3]),
        ChainLink("4m/pi - 2m*pi*d^2 > 4m/pi - 50m*d", v[3], v[4], True, v[3] > v[4]),
        ChainLink("4m/pi - 50m*d == 1+c", v[4], 1.0 + c, False,
                  abs(v[4] - (1.0 + c)) < 1e-12),
    ]
    passed = all(l.ok for l in links)
    tightest = min(links[:-1], key=lambda l: abs(l.slack))
    return ChainReport(links=links, passed=passed, tightest=tightest)


# ---------------------------------------------------------------------------
# rectangles and winding

@dataclass(frozen=True)
class Rectangle:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not (self.sigma_lo < self.sigma_hi and self.t_lo < self.t_hi):
            raise ValueError("degenerate rectangle")

    @property
    def corners(self):
        return (
            complex(self.sigma_lo, self.t_lo),
            complex(self.sigma_hi, self.t_lo),
            complex(self.sigma_hi, self.t_hi),
            complex(self.sigma_lo, self.t_hi),
        )

    @property
    def diameter(self) -> float:
        return math.hypot(self.sigma_hi - self.sigma_lo, self.t_hi - self.t_lo)

    def contains(self, s: complex) -> bool:
        return (self.sigma_lo <= s.real <= self.sigma_hi
                and self.t_lo <= s.imag <= self.t_hi)


class BoundaryZeroError(RuntimeError):
    """The evaluator came too close to zero on the boundary; perturb the box."""

    def __init__(self, msg, min_modulus=0.0):
        super().__init__(msg)
        self.min_modulus = min_modulus


@dataclass
class WindingResult:
    winding: int
    min_boundary_modulus: float
    segments: int
    side_arg_changes: tuple  # bottom, right, top, left (positive orientation)
    samples: int


def _as_vectorized(evaluator):
    if isinstance(evaluator, DirichletPolynomial):
        return evaluator.eval_many

    def wrapped(s):
        s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        try:
            out = evaluator(s)
            out = np.asarray(out, dtype=np.complex128)
            if out.shape == s.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([evaluator(complex(x)) for x in s], dtype=np.complex128)

    return wrapped


def winding_number(evaluator, box: Rectangle, *, min_per_side: int = 16,
                   max_samples: int = 400_000, zero_margin: float | None = None,
                   phase_cap: float = math.pi / 2.0) -> WindingResult:
    """Total argument change / 2 pi around the positively oriented boundary.

    Each side is refined until every sub-interval has |delta arg| < phase_cap,
    so a winding cannot be lost to aliasing.  Raises BoundaryZeroError when
    the minimum boundary modulus falls under the zero margin (default
    1e-10 times the largest boundary modulus seen).
    """
    f = _as_vectorized(evaluator)
    c = box.corners
    sides = [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]
    side_args = []
    total_samples = 0
    total_segments = 0
    min_mod = math.inf
    max_mod = 0.0
    for start, end in sides:
        u = np.linspace(0.0, 1.0, min_per_side + 1)
        v = f(start + u * (end - start))
        if not np.all(np.isfinite(v)):
            raise ValueError("evaluator returned non-finite boundary value")
        for _round in range(64):
            vmin = float(np.abs(v).min())
            vmax = float(np.abs(v).max())
            if vmin < (zero_margin if zero_margin is not None else 1e-10 * vmax):
                raise BoundaryZeroError(
                    f"boundary modulus {vmin:.3e} during refinement; perturb "
                    "the box", min_modulus=vmin)
            d = np.angle(v[1:] / v[:-1])
            bad = np.abs(d) >= phase_cap
            if not bad.any():
                break
            if len(u) + bad.sum() > max_samples:
                raise RuntimeError("winding refinement exceeded the sample budget")
            mids = 0.5 * (u[:-1][bad] + u[1:][bad])
            vm = f(start + mids * (end - start))
            u = np.concatenate([u, mids])
            v = np.concatenate([v, vm])
            order = np.argsort(u, kind="stable")
            u, v = u[order], v[order]
        else:
            raise RuntimeError("winding refinement failed to settle in 64 rounds")
        d = np.angle(v[1:] / v[:-1])
        side_args.append(float(d.sum()))
        total_samples += len(u)
        total_segments += len(u) - 1
        mods = np.abs(v)
        min_mod = min(min_mod, float(mods.min()))
        max_mod = max(max_mod, float(mods.max()))
    margin = zero_margin if zero_margin is not None else 1e-10 * max_mod
    if min_mod < margin:
        raise BoundaryZeroError(
            f"boundary modulus {min_mod:.3e} below margin {margin:.3e}; "
            "perturb the box", min_modulus=min_mod)
    total = sum(side_args)
    w = round(total / (2.0 * math.pi))
    if abs(total / (2.0 * math.pi) - w) > 0.25:
        raise RuntimeError(
            f"phase accounting failed to close: total arg {total:.6f}")
    return WindingResult(winding=int(w), min_boundary_modulus=min_mod,
                         segments=total_segments,
                         side_arg_changes=tuple(side_args),
                         samples=total_samples)


def _box_jitter(box: Rectangle, attempt: int) -> Rectangle:
    """Deterministic pseudo-random expansion seeded from box coordinates."""
    h = hash((round(box.sigma_lo, 12), round(box.sigma_hi, 12),
              round(box.t_lo, 12), round(box.t_hi, 12), attempt))
    rng = np.random.default_rng(abs(h) % (2**63))
    scale = max(box.diameter, 1e-6)
    eps = (1e-9 + 1e-4 * attempt**2) * scale
    j = eps * (0.5 + 0.5 * rng.random(4))
    return Rectangle(box.sigma_lo - j[0], box.sigma_hi + j[1],
                     box.t_lo - j[2], box.t_hi + j[3])


def winding_with_jitter(evaluator, box: Rectangle, attempts: int = 5,
                        **kw) -> tuple[WindingResult, Rectangle]:
    """winding_number with deterministic boundary-zero jitter retries."""
    last = None
    b = box
    for attempt in range(attempts):
        try:
            return winding_number(evaluator, b, **kw), b
        except BoundaryZeroError as exc:
            last = exc
            b = _box_jitter(box, attempt + 1)
    raise last


# ---------------------------------------------------------------------------
# refinement and subdivision search

@dataclass
class ZeroRecord:
    location: complex
    residual: float
    winding: int
    box: Rectangle
    iterations: int


def refine_zero(p: DirichletPolynomial, seed: complex, tol: float = 1e-10,
                max_iter: int = 100) -> ZeroRecord:
    """Newton refinement (secant fallback) to relative residual < tol.

    The residual is measured against sum |f(n)| n^{-sigma} at the iterate.
    """
    z = complex(seed)
    fz = complex(p.eval_many(np.array([z]))[0])
    prev_z, prev_f = None, None
    it = 0
    best = (abs(fz), z)
    for it in range(1, max_iter + 1):
        scale = p.scale_at(z.real)
        if abs(fz) < tol * scale:
            break
        dz = complex(p.eval_deriv_many(np.array([z]))[0])
        if abs(dz) > 1e-14:
            step = fz / dz
        elif prev_z is not None and fz != prev_f:
            step = fz * (z - prev_z) / (fz - prev_f)
        else:
            step = fz  # desperate fixed-point nudge
        prev_z, prev_f = z, fz
        z = z - step
        fz = complex(p.eval_many(np.array([z]))[0])
        if abs(fz) < best[0]:
            best = (abs(fz), z)
    else:
        raise RuntimeError(
            f"no convergence in {max_iter} iterations; best |F|={best[0]:.3e} "
            f"at {best[1]}")
    scale = p.scale_at(z.real)
    box = Rectangle(z.real - 1e-6, z.real + 1e-6, z.imag - 1e-6, z.imag + 1e-6)
    return ZeroRecord(location=z, residual=abs(fz) / scale, winding=0,
                      box=box, iterations=it)


def _certify_record(p: DirichletPolynomial, rec: ZeroRecord) -> ZeroRecord:
    """Attach a winding-1 (or higher) box of radius 1e-6 around the zero."""
    z = rec.location
    box = Rectangle(z.real - 1e-6, z.real + 1e-6, z.imag - 1e-6, z.imag + 1e-6)
    res, box = winding_with_jitter(p, box)
    rec.winding = res.winding
    rec.box = box
    return rec


def find_zeros(p: DirichletPolynomial, box: Rectangle, *, min_box: float = 1e-6,
               max_depth: int = 64, quadrisections: list | None = None,
               _w: WindingResult | None = None, _depth: int = 0) -> list:
    """Recursive quadrisection driver: subdivide while winding > 0, refine
    once a box is smaller than min_box.  `quadrisections` (if given) collects
    (parent_winding, [child windings]) for conservation checks.
    """
    if _w is None:
        _w, box = winding_with_jitter(p, box)
    if _w.winding == 0:
        return []
    if box.diameter < min_box or _depth >= max_depth:
        seed = complex(0.5 * (box.sigma_lo + box.sigma_hi),
                       0.5 * (box.t_lo + box.t_hi))
        rec = refine_zero(p, seed)
        rec = _certify_record(p, rec)
        return [rec]
    # split point at the center, nudged deterministically if a child boundary
    # runs through a zero
    for attempt in range(6):
        frac = 0.5 if attempt == 0 else 0.5 + 0.01 * attempt * (-1) ** attempt
        sm = box.sigma_lo + frac * (box.sigma_hi - box.sigma_lo)
        tm = box.t_lo + frac * (box.t_hi - box.t_lo)
        children = [
            Rectangle(box.sigma_lo, sm, box.t_lo, tm),
            Rectangle(sm, box.sigma_hi, box.t_lo, tm),
            Rectangle(box.sigma_lo, sm, tm, box.t_hi),
            Rectangle(sm, box.sigma_hi, tm, box.t_hi),
        ]
        try:
            results = [winding_number(p, ch) for ch in children]
        except BoundaryZeroError:
            continue
        break
    else:
        raise BoundaryZeroError("could not find a zero-free subdivision cross")
    ws = [r.winding for r in results]
    if sum(ws) != _w.winding:
        raise RuntimeError(
            f"winding conservation violated: parent {_w.winding}, children {ws}")
    if quadrisections is not None:
        quadrisections.append((_w.winding, list(ws)))
    out = []
    for ch, res in zip(children, results):
        out.extend(find_zeros(p, ch, min_box=min_box, max_depth=max_depth,
                              quadrisections=quadrisections, _w=res,
                              _depth=_depth + 1))
    return out


# ---------------------------------------------------------------------------
# strip certification and scans

def domination_abscissa(p: DirichletPolynomial, hi: float = 80.0) -> float:
    """Smallest sigma with sum_{n>=2} |coeff(n)| n^{-sigma} < |coeff(1)|.

    To the right of this abscissa the leading term dominates and the
    polynomial cannot vanish.
    """
    c1 = abs(p.coeff[1])
    if c1 == 0:
        raise ValueError("leading coefficient vanishes; no trivial domination")

    def excess(sigma):
        return float(np.sum(np.abs(p.coeff[2:])
                            * np.exp(-sigma * p.logn[2:]))) - c1

    lo = 1.0 + 1e-9
    if excess(hi) >= 0:
        raise ValueError("no domination abscissa below sigma=%g" % hi)
    if excess(lo) < 0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass
class ZeroFreeReport:
    passed: bool
    sigma0: float
    sigma_dom: float
    boxes: int
    min_modulus: float
    failures: list  # (Rectangle, winding)
    total_samples: int


def certify_zero_free(p: DirichletPolynomial, sigma0: float,
                      t_range: tuple[float, float], *, tile_t: float = 20.0
                      ) -> ZeroFreeReport:
    """Cover [sigma0, sigma_dom] x t_range with boxes certified winding 0.

    A box with nonzero winding is a finding, reported, not raised.
    """
    sigma_dom = domination_abscissa(p)
    t_lo, t_hi = t_range
    if sigma0 >= sigma_dom:
        return ZeroFreeReport(True, sigma0, sigma_dom, 0, math.inf, [], 0)
    n_tiles = max(1, int(math.ceil((t_hi - t_lo) / tile_t)))
    edges = np.linspace(t_lo, t_hi, n_tiles + 1)
    failures = []
    min_mod = math.inf
    samples = 0
    for i in range(n_tiles):
        box = Rectangle(sigma0, sigma_dom, float(edges[i]), float(edges[i + 1]))
        res, _ = winding_with_jitter(p, box)
        samples += res.samples
        min_mod = min(min_mod, res.min_boundary_modulus)
        if res.winding != 0:
            failures.append((box, res.winding))
    return ZeroFreeReport(passed=not failures, sigma0=sigma0,
                          sigma_dom=sigma_dom, boxes=n_tiles,
                          min_modulus=min_mod, failures=failures,
                          total_samples=samples)


@dataclass
class RightmostScan:
    sigma_max: float | None
    witness: ZeroRecord | None
    sigma_dom: float
    strips_checked: int


def rightmost_zero_scan(p: DirichletPolynomial, sigma_floor: float,
                        t_range: tuple[float, float], *,
                        resolution: float = 1e-3) -> RightmostScan:
    """Find the zero of maximal real part in [sigma_floor, sigma_dom] x t_range.

    Bisects on the left edge of a right-anchored strip (winding counts are
    exact at box granularity; no sampling gaps), then localizes the zeros of
    the final strip.
    """
    sigma_dom = domination_abscissa(p)
    if sigma_floor >= sigma_dom:
        raise ValueError("sigma_floor must lie left of the domination abscissa")
    t_lo, t_hi = t_range

    def strip_winding(lo: float) -> int:
        res, _ = winding_with_jitter(p, Rectangle(lo, sigma_dom, t_lo, t_hi))
        return res.winding

    checked = 1
    if strip_winding(sigma_floor) == 0:
        return RightmostScan(None, None, sigma_dom, checked)
    lo, hi = sigma_floor, sigma_dom
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        checked += 1
        if strip_winding(mid) > 0:
            lo = mid
        else:
            hi = mid
    zs = find_zeros(p, Rectangle(lo, sigma_dom, t_lo, t_hi))
    if not zs:
        raise RuntimeError("strip winding positive but no zero localized")
    best = max(zs, key=lambda r: r.location.real)
    return RightmostScan(sigma_max=best.location.real, witness=best,
                         sigma_dom=sigma_dom, strips_checked=checked)


# ---------------------------------------------------------------------------
# the explicit model M = M1 + M2 and the proof rectangle

def montgomery_rectangle(N: float, c: float, m: float, t1: float, *,
                         log_N: float | None = None) -> Rectangle:
    """The proof rectangle: sigma_1 = 1 + c LL/L, sigma_2 = 1 + (8m/pi-2-c) LL/L,
    t from t1 to t1 + 2 pi / log N, with |t1| <= 2 pi / log N.

    Pass log_N to reach N beyond float range; N is ignored then.
    """
    if not 0.0 < c < FOUR_OVER_PI * m - 1.0:
        raise ValueError("need 0 < c < 4m/pi - 1")
    L = math.log(N) if log_N is None else float(log_N)
    if abs(t1) > 2.0 * math.pi / L + 1e-15:
        raise ValueError("need |t1| <= 2 pi / log N")
    LL = math.log(L)
    s1 = 1.0 + c * LL / L
    s2 = 1.0 + (8.0 * m / math.pi - 2.0 - c) * LL / L
    return Rectangle(s1, s2, t1, t1 + 2.0 * math.pi / L)


@dataclass
class ModelMParams:
    """Constants of the explicit model M(s) = M1(s) + M2(s).

    N may exceed any buildable table; M is a closed-form expression in N.
    The (s-1) and N powers use the principal branch of exp(w log(.)),
    recorded here as the convention.
    """

    N: float
    m: float
    delta: float
    c: float
    A: complex
    A1: complex
    G11_at_1i: complex
    Gtilde_at_1i: complex
    G10_at_1: complex
    Gtilde_at_1: complex
    b0: float
    b1: float
    gamma_mb0: float
    gamma_mb1: float
    log_N: float | None = None  # overrides log(N) for N beyond float range
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.b0 < 0:
            raise ValueError("b_hat(0) must be negative")
        for name in ("A", "A1", "G11_at_1i", "Gtilde_at_1i", "G10_at_1",
                     "Gtilde_at_1"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"constant {name} is not finite")

    @property
    def L(self) -> float:
        return math.log(self.N) if self.log_N is None else self.log_N

    def with_N(self, N: float, log_N: float | None = None) -> "ModelMParams":
        import dataclasses

        return dataclasses.replace(self, N=N, log_N=log_N)


def _gtilde_log_at(f: MultiplicativeFunction, b: BDelta, lam: np.ndarray,
                   s: complex, M: int) -> complex:
    from .arith import primes_up_to

    acc = 0.0 + 0.0j
    for p in primes_up_to(int(math.isqrt(M))):
        p = int(p)
        ap = b.eval(math.log(p) / (2 * math.pi))
        q, e = p * p, 2
        while q <= M:
            theta = math.log(q) / (2 * math.pi)
            acc += lam[q] / math.log(q) * np.exp(-s * math.log(q)) * (
                ap**e - b.eval(theta))
            q *= p
            e += 1
    return acc


def build_model_m_params(f: MultiplicativeFunction, m: float, c: float, *,
                         N: float = 1e10, M: int | None = None,
                         K_const: int = 40, sigma_margin: float = 0.05
                         ) -> ModelMParams:
    """Populate the model constants from truncated series surrogates.

    A (the Laurent leading coefficient at s=1) comes from the numerical limit
    of (sigma-1)^m F(sigma) along the real axis, Richardson-extrapolated with
    an integral-test correction for the dropped series tail; the shifted-pole
    coefficient A1 equals A because the pole is merely translated.  The
    products over shifts are evaluated at sigma = 1 + sigma_margin (the log F
    series converges too slowly on sigma = 1 itself); the offset is recorded.
    """
    M = f.N if M is None else min(M, f.N)
    delta = delta_for_c(c, m)
    b = BDelta(delta)
    k = f.profile.k
    logF = SeriesSurrogate(source=f, M=M, mode="logF")
    lam = logF._lam.lam

    from scipy.special import exp1

    def logF_corrected(sigma: float) -> complex:
        # tail of the prime sum approximated by m * E1(h log M) (pole density)
        v = logF.eval(complex(sigma)).value
        return v + m * float(exp1((sigma - 1.0) * math.log(M)))

    hs = [0.4, 0.2, 0.1, 0.05]
    phis = [np.exp(logF_corrected(1.0 + h) + m * math.log(h)) for h in hs]
    # Richardson: phi(h) = A + a1 h + a2 h^2 + ...; successive halving
    vals = [complex(v) for v in phis]
    for order in range(1, len(vals)):
        vals = [(2**order * vals[i + 1] - vals[i]) / (2**order - 1)
                for i in range(len(vals) - 1)]
    A = vals[0]

    eps = sigma_margin

    def logF_at(sline: complex) -> complex:
        return logF.eval(sline + eps).value

    js = [j for j in range(-K_const, K_const + 1)]
    g11 = sum(b.coeff(j) * logF_at(complex(1.0, 1.0 - j)) for j in js if j != 1)
    g10 = sum(b.coeff(j) * logF_at(complex(1.0, -j)) for j in js if j != 0)
    gt1i = _gtilde_log_at(f, b, lam, complex(1.0, 1.0), M)
    gt1 = _gtilde_log_at(f, b, lam, complex(1.0, 0.0), M)

    b0, b1 = b.coeff(0), b.coeff(1)
    return ModelMParams(
        N=N, m=m, delta=delta, c=c, A=A, A1=A,
        G11_at_1i=complex(np.exp(g11)),
        Gtilde_at_1i=complex(np.exp(gt1i)),
        G10_at_1=complex(np.exp(g10)),
        Gtilde_at_1=complex(np.exp(gt1)),
        b0=b0, b1=b1,
        gamma_mb0=float(_gamma(m * b0)),
        gamma_mb1=float(_gamma(m * b1)),
        meta={
            "truncation_M": M,
            "K_const": K_const,
            "sigma_margin": eps,
            "branch": "principal exp(w log(.)) for (s-1)^w and N^w",
            "A_extrapolation_h": hs,
        },
    )


def model_M_eval(params: ModelMParams, s) -> tuple:
    """Evaluate (M1, M2, M1+M2); vectorized over s."""
    s = np.asarray(s, dtype=np.complex128)
    if np.any(s == 1.0) or np.any(s == 1.0 + 1.0j):
        raise ValueError("model M has poles/branch points at s=1 and s=1+i")
    L = params.L
    mb1, mb0 = params.m * params.b1, params.m * params.b0
    n_pow = np.exp((1.0 - s + 1j) * L)
    m1 = (params.A1 * n_pow * L ** (mb1 - 1.0) * params.G11_at_1i
          * params.Gtilde_at_1i / (params.gamma_mb1 * (1.0 - s + 1j)))
    m2 = (params.A * params.G10_at_1 * params.Gtilde_at_1
          * np.exp(-mb0 * np.log(s - 1.0)))
    return m1, m2, m1 + m2


@dataclass
class ModelWindingResult:
    status: str  # "ok" or "N too small for model regime"
    winding: int
    side_arg_changes: tuple
    right_max_ratio: float   # max |M1/M2| on the right vertical side
    left_max_ratio: float    # max |M2/M1| on the left vertical side
    left_mid_ratio: float    # |M2/M1| at the left-side midpoint
    dominance_pass: bool
    min_boundary_modulus: float


def model_M_winding(params: ModelMParams, rect: Rectangle,
                    n_dominance: int = 129) -> ModelWindingResult:
    """Winding of M over the proof rectangle plus per-side argument budget.

    Dominance margins: M2 must dominate on the right side and M1 on the left
    (ratios < 1/2).  When they fail the result is flagged "N too small for
    model regime" but the winding (an exact computation) is still reported.
    """
    def mfun(s):
        return model_M_eval(params, s)[2]

    u = np.linspace(0.0, 1.0, n_dominance)
    right = rect.sigma_hi + 1j * (rect.t_lo + u * (rect.t_hi - rect.t_lo))
    left = rect.sigma_lo + 1j * (rect.t_lo + u * (rect.t_hi - rect.t_lo))
    m1r, m2r, _ = model_M_eval(params, right)
    m1l, m2l, _ = model_M_eval(params, left)
    right_max = float(np.max(np.abs(m1r / m2r)))
    left_ratios = np.abs(m2l / m1l)
    left_max = float(np.max(left_ratios))
    left_mid = float(left_ratios[n_dominance // 2])
    dominance = right_max < 0.5 and left_max < 0.5
    res, _ = winding_with_jitter(mfun, rect)
    return ModelWindingResult(
        status="ok" if dominance else "N too small for model regime",
        winding=res.winding,
        side_arg_changes=res.side_arg_changes,
        right_max_ratio=right_max,
        left_max_ratio=left_max,
        left_mid_ratio=left_mid,
        dominance_pass=dominance,
        min_boundary_modulus=res.min_boundary_modulus,
    )


def model_M_eval_scaled(params: ModelMParams, z) -> tuple:
    """model_M_eval in rectangle-intrinsic coordinates z = x + i y, where
    s = 1 + (x loglog N + 2 pi i y) / log N.

    Well-conditioned at any log N (the proof rectangle shrinks onto s = 1
    faster than float spacing there).  The constant unimodular factor
    N^{i} = e^{i log N} is dropped: it cannot affect windings, moduli or
    ratios, and log N mod 2 pi is meaningless at extreme scales anyway.
    """
    z = np.asarray(z, dtype=np.complex128)
    L = params.L
    LL = math.log(L)
    mb1, mb0 = params.m * params.b1, params.m * params.b0
    u = z.real * LL + 2j * math.pi * z.imag   # = (s - 1) * L, order 1
    one_minus_s_plus_i = 1j - u / L
    m1 = (params.A1 * np.exp(-u) * L ** (mb1 - 1.0) * params.G11_at_1i
          * params.Gtilde_at_1i / (params.gamma_mb1 * one_minus_s_plus_i))
    m2 = (params.A * params.G10_at_1 * params.Gtilde_at_1
          * np.exp(-mb0 * (np.log(u) - math.log(L))))
    return m1, m2, m1 + m2


def model_M_winding_scaled(params: ModelMParams, y1: float = -0.5,
                           n_dominance: int = 129) -> ModelWindingResult:
    """model_M_winding over the proof rectangle in intrinsic coordinates.

    The box is x in [c, 8m/pi - 2 - c], y in [y1, y1 + 1]; |y1| <= 1 mirrors
    the |t1| <= 2 pi / log N constraint.
    """
    if abs(y1) > 1.0 + 1e-15:
        raise ValueError("need |y1| <= 1")
    c, m = params.c, params.m
    box = Rectangle(c, 8.0 * m / math.pi - 2.0 - c, y1, y1 + 1.0)

    def mfun(z):
        return model_M_eval_scaled(params, z)[2]

    u = np.linspace(0.0, 1.0, n_dominance)
    right = box.sigma_hi + 1j * (box.t_lo + u * (box.t_hi - box.t_lo))
    left = box.sigma_lo + 1j * (box.t_lo + u * (box.t_hi - box.t_lo))
    m1r, m2r, _ = model_M_eval_scaled(params, right)
    m1l, m2l, _ = model_M_eval_scaled(params, left)
    right_max = float(np.max(np.abs(m1r / m2r)))
    left_ratios = np.abs(m2l / m1l)
    left_max = float(np.max(left_ratios))
    left_mid = float(left_ratios[n_dominance // 2])
    dominance = right_max < 0.5 and left_max < 0.5
    res, _ = winding_with_jitter(mfun, box)
    return ModelWindingResult(
        status="ok" if dominance else "N too small for model regime",
        winding=res.winding,
        side_arg_changes=res.side_arg_changes,
        right_max_ratio=right_max,
        left_max_ratio=left_max,
        left_mid_ratio=left_mid,
        dominance_pass=dominance,
        min_boundary_modulus=res.min_boundary_modulus,
    )


@dataclass
class RoucheReport:
    max_ratio: float
    samples: int
    poly_winding: int | None
    model_winding: int
    consistent: bool | None  # None when the ratio is >= 1 (nothing asserted)


def rouche_gap_report(p: DirichletPolynomial, params: ModelMParams,
                      rect: Rectangle, min_samples: int = 1024) -> RoucheReport:
    """max |F_N - M| / |M| on the rectangle boundary, plus both windings.

    When the ratio is below 1, Rouche forces the windings to agree; the
    direct polynomial winding is computed either way as confirmation.
    """
    c = rect.corners
    pts = []
    per_side = max(min_samples // 4, 256)
    for a, bb in zip(c, c[1:] + c[:1]):
        u = np.linspace(0.0, 1.0, per_side, endpoint=False)
        pts.append(a + u * (bb - a))
    pts = np.concatenate(pts)
    mvals = model_M_eval(params, pts)[2]
    fvals = p.eval_many(pts)
    ratio = float(np.max(np.abs(fvals - mvals) / np.abs(mvals)))
    mres, _ = winding_with_jitter(lambda s: model_M_eval(params, s)[2], rect)
    pres, _ = winding_with_jitter(p, rect)
    consistent = (pres.winding == mres.winding) if ratio < 1.0 else None
    return RoucheReport(max_ratio=ratio, samples=len(pts),
                        poly_winding=pres.winding, model_winding=mres.winding,
                        consistent=consistent)
