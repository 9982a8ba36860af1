"""Dirichlet polynomial evaluation and truncated-series surrogates.

The batch kernel is the single evaluation path: scalar calls, grids and
boundary scans all route through `eval_many`, so results are bitwise
reproducible regardless of batch shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import zeta as _zeta

from .arith import MultiplicativeFunction, VonMangoldtTable, vonmangoldt_transform, \
    make_dk, primes_up_to
from .bdelta import BDelta

__all__ = [
    "DirichletPolynomial",
    "GridSpec",
    "SeriesSurrogate",
    "SurrogateValue",
    "GstarSplit",
    "eval_poly",
    "eval_grid",
    "eval_surrogate",
    "eval_gstar_split",
    "grid_to_csv",
    "grid_to_binary",
]

_CHUNK_N = 4096      # coefficient block; fixed so the reduction tree never moves
_CHUNK_P = 1024      # point block, memory control only

GRID_MAGIC = b"DZLGRID1"


@dataclass(frozen=True)
class DirichletPolynomial:
    """coeff[n] * n^{-s} summed over 1 <= n <= N, with precomputed logs."""

    N: int
    coeff: np.ndarray  # complex, index 0 unused
    logn: np.ndarray   # float, logn[1] = 0

    def __post_init__(self):
        if len(self.coeff) != self.N + 1 or len(self.logn) != self.N + 1:
            raise ValueError("coefficient/log array length mismatch")
        if self.N >= 2 and not np.all(np.diff(self.logn[1:]) > 0):
            raise ValueError("logn must be strictly increasing")
        self.coeff.setflags(write=False)
        self.logn.setflags(write=False)

    @classmethod
    def from_coefficients(cls, coeff) -> "DirichletPolynomial":
        """coeff is 1-based (coeff[0] ignored) or a plain list for n=1.."""
        c = np.asarray(coeff, dtype=np.complex128)
        n = len(c) - 1
        logs = np.zeros(n + 1)
        logs[1:] = np.log(np.arange(1, n + 1))
        return cls(N=n, coeff=c.copy(), logn=logs)

    @classmethod
    def from_function(cls, f: MultiplicativeFunction, N: int | None = None
                      ) -> "DirichletPolynomial":
        n = f.N if N is None else min(N, f.N)
        return cls.from_coefficients(f.values[: n + 1])

    def eval_many(self, s: np.ndarray) -> np.ndarray:
        """Batch evaluation at complex points s (any shape), deterministic.

        Fixed-size coefficient chunks with compensated (Kahan) accumulation
        across chunks; within a chunk numpy's pairwise reduction is used.
        """
        s_flat = np.asarray(s, dtype=np.complex128).ravel()
        out = np.zeros(len(s_flat), dtype=np.complex128)
        for p0 in range(0, len(s_flat), _CHUNK_P):
            sp = s_flat[p0 : p0 + _CHUNK_P]
            acc = np.zeros(len(sp), dtype=np.complex128)
            comp = np.zeros(len(sp), dtype=np.complex128)
            for n0 in range(1, self.N + 1, _CHUNK_N):
                n1 = min(n0 + _CHUNK_N, self.N + 1)
                terms = np.exp(-sp[:, None] * self.logn[n0:n1][None, :])
                terms *= self.coeff[n0:n1][None, :]
                block = terms.sum(axis=1)
                # Kahan step
                y = block - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
            out[p0 : p0 + _CHUNK_P] = acc
        return out.reshape(np.shape(s))

    def eval_deriv_many(self, s: np.ndarray) -> np.ndarray:
        """d/ds: -sum coeff[n] log(n) n^{-s}, same chunking as eval_many."""
        d = DirichletPolynomial(
            N=self.N, coeff=(-self.coeff * self.logn).copy(), logn=self.logn.copy()
        )
        return d.eval_many(s)

    def __call__(self, s):
        return self.eval_many(np.asarray(s, dtype=np.complex128))

    def scale_at(self, sigma: float) -> float:
        """sum |coeff[n]| n^{-sigma}: natural magnitude scale for residuals."""
        return float(np.sum(np.abs(self.coeff[1:]) * np.exp(-sigma * self.logn[1:])))


@dataclass(frozen=True)
class GridSpec:
    sigma_lo: float
    sigma_hi: float
    sigma_step: float
    t_lo: float
    t_hi: float
    t_step: float

    def __post_init__(self):
        if self.sigma_step <= 0 or self.t_step <= 0:
            raise ValueError("grid steps must be positive")
        for v in (self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi):
            if not math.isfinite(v):
                raise ValueError("grid ranges must be finite")

    @property
    def sigmas(self) -> np.ndarray:
        n = int(math.floor((self.sigma_hi - self.sigma_lo) / self.sigma_step + 1e-9)) + 1
        return self.sigma_lo + self.sigma_step * np.arange(max(n, 1))

    @property
    def ts(self) -> np.ndarray:
        n = int(math.floor((self.t_hi - self.t_lo) / self.t_step + 1e-9)) + 1
        return self.t_lo + self.t_step * np.arange(max(n, 1))


def eval_poly(p: DirichletPolynomial, s: complex) -> complex:
    return complex(p.eval_many(np.array([s]))[0])


def eval_grid(p: DirichletPolynomial, g: GridSpec,
              memory_budget_bytes: int = 1 << 30) -> np.ndarray:
    """Row-major matrix F(sigma_i + i t_j); rows indexed by t, columns by sigma."""
    sigmas, ts = g.sigmas, g.ts
    if len(sigmas) == 0 or len(ts) == 0:
        raise ValueError("empty grid")
    need = len(sigmas) * len(ts) * 16
    if need > memory_budget_bytes:
        raise MemoryError(
            f"grid needs {need} bytes for the result, budget is {memory_budget_bytes}"
        )
    ss = sigmas[None, :] + 1j * ts[:, None]
    return p.eval_many(ss)


@dataclass
class SeriesSurrogate:
    """Truncation of F, log F, or the Lambda_f series, with a tail bound.

    mode "F":         sum_{n<=M} f(n) n^{-s}
    mode "logF":      sum_{2<=n<=M} Lambda_f(n) / (log n) / n^s
    mode "FlogDeriv": sum_{2<=n<=M} Lambda_f(n) / n^s   (equals -F'/F)
    """

    source: MultiplicativeFunction
    M: int
    mode: str = "F"

    def __post_init__(self):
        if self.M > self.source.N:
            raise ValueError("truncation M exceeds source table length")
        if self.mode not in ("F", "logF", "FlogDeriv"):
            raise ValueError(f"unknown surrogate mode {self.mode!r}")

    @cached_property
    def _lam(self) -> VonMangoldtTable:
        return vonmangoldt_transform(self.source)

    @cached_property
    def _poly(self) -> DirichletPolynomial:
        M = self.M
        if self.mode == "F":
            return DirichletPolynomial.from_coefficients(self.source.values[: M + 1])
        lam = self._lam.lam[: M + 1].copy()
        if self.mode == "logF":
            logs = np.ones(M + 1)
            logs[2:] = np.log(np.arange(2, M + 1))
            lam = lam / logs
        lam[1] = 0.0
        return DirichletPolynomial.from_coefficients(lam)

    @cached_property
    def _dk_values(self) -> np.ndarray:
        return make_dk(self.source.profile.k, self.M).values.real

    def tail(self, sigma: float) -> float:
        """Upper bound on the dropped tail at Re(s) = sigma > 1."""
        k = self.source.profile.k
        M = self.M
        if sigma <= 1.0:
            raise ValueError("surrogates require Re(s) > 1")
        if self.mode == "F":
            # |f(n)| <= d_k(n): tail <= zeta(sigma)^k - sum_{n<=M} d_k(n) n^{-sigma}
            part = float(np.sum(self._dk_values[1:] *
                                np.arange(1, M + 1, dtype=float) ** (-sigma)))
            return max(0.0, float(_zeta(sigma, 1)) ** k - part)
        if self.mode == "logF":
            # Lambda_f/log n <= k on prime powers; integral test on sum n^{-sigma}
            return k * M ** (1.0 - sigma) / (sigma - 1.0)
        # FlogDeriv: |Lambda_f| <= k log n
        return k * M ** (1.0 - sigma) * (
            math.log(M) / (sigma - 1.0) + 1.0 / (sigma - 1.0) ** 2
        )

    def eval(self, s: complex):
        if s.real <= 1.0:
            raise ValueError(f"surrogate requires Re(s) > 1, got {s}")
        return SurrogateValue(value=eval_poly(self._poly, s),
                              tail_bound=self.tail(s.real))

    def eval_many(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.complex128)
        if np.any(s.real <= 1.0):
            raise ValueError("surrogate requires Re(s) > 1")
        return self._poly.eval_many(s)


@dataclass(frozen=True)
class SurrogateValue:
    value: complex
    tail_bound: float


def eval_surrogate(sur: SeriesSurrogate, s: complex) -> SurrogateValue:
    return sur.eval(s)


@dataclass
class GstarSplit:
    Gstar: complex
    G1: complex
    G2: complex
    Gtilde: complex
    G_direct: complex
    g2_deviation: float        # |G2 - 1|
    tail_budget: float         # combined relative budget for the factorization
    tail_parts: dict = field(default_factory=dict)


def _twist_values(f: MultiplicativeFunction, b: BDelta, M: int) -> np.ndarray:
    """a(n) for n <= M, a completely multiplicative, a(p) = b(log p / 2 pi)."""
    from .arith import smallest_prime_factor

    a = np.zeros(M + 1, dtype=np.complex128)
    a[1] = 1.0
    spf = smallest_prime_factor(M)
    for p in primes_up_to(M):
        a[int(p)] = b.eval(math.log(int(p)) / (2 * math.pi))
    for n in range(2, M + 1):
        p = int(spf[n])
        if n != p:
            a[n] = a[p] * a[n // p]
    return a


def eval_gstar_split(f: MultiplicativeFunction, b: BDelta, s: complex,
                     K: float, J: int, M: int) -> GstarSplit:
    """Split evaluation of the twisted product against the direct twisted series.

    G1 multiplies shifts |j| <= K, G2 the shifts K < |j| <= J (the remaining
    Fourier tail is bounded, not evaluated); powers are exp(b_hat(j) log F)
    with log F from its own series, so there is no branch ambiguity.
    """
    if s.real <= 1.0:
        raise ValueError(f"requires Re(s) > 1, got {s}")
    if J < K:
        raise ValueError("J must be >= K")
    logF = SeriesSurrogate(source=f, M=M, mode="logF")
    k = f.profile.k
    sigma = s.real

    js_inner = [j for j in range(-int(J), int(J) + 1) if abs(j) <= K]
    js_outer = [j for j in range(-int(J), int(J) + 1) if abs(j) > K]
    pts_inner = np.array([s - 1j * j for j in js_inner])
    pts_outer = np.array([s - 1j * j for j in js_outer])
    lf_inner = logF.eval_many(pts_inner) if len(pts_inner) else np.array([])
    lf_outer = logF.eval_many(pts_outer) if len(pts_outer) else np.array([])
    logG1 = sum(b.coeff(j) * v for j, v in zip(js_inner, lf_inner))
    logG2 = sum(b.coeff(j) * v for j, v in zip(js_outer, lf_outer))
    G1 = np.exp(logG1)
    G2 = np.exp(logG2) if js_outer else 1.0 + 0.0j

    # G tilde from its own exponential prime-power sum (primes cancel exactly)
    lam = logF._lam.lam
    log_gt = 0.0 + 0.0j
    a_vals = _twist_values(f, b, M)
    for p in primes_up_to(int(math.isqrt(M))):
        p = int(p)
        q = p * p
        e = 2
        while q <= M:
            theta = math.log(q) / (2 * math.pi)
            log_gt += lam[q] / math.log(q) * np.exp(-s * math.log(q)) * (
                a_vals[p] ** e - b.eval(theta)
            )
            q *= p
            e += 1
    Gtilde = np.exp(log_gt)

    gpoly = DirichletPolynomial.from_coefficients(f.values[: M + 1] * a_vals)
    G_direct = eval_poly(gpoly, s)

    # budget pieces (all relative to |G_direct|)
    logF_bound = k * float(np.log(_zeta(sigma, 1)))  # |log F| <= k log zeta(sigma)
    fourier_tail = b.coeff_abs_tail(int(J))
    tail_logF = logF.tail(sigma)                      # per-shift series truncation
    coeff_per_shift = sum(abs(b.coeff(j)) for j in range(-int(J), int(J) + 1))
    gt_tail = 4.0 * k * (math.isqrt(M) + 1) ** (1.0 - 2 * sigma) / (2 * sigma - 1.0)
    direct_tail = SeriesSurrogate(source=f, M=M, mode="F").tail(sigma)
    rel = (
        math.expm1(fourier_tail * logF_bound)
        + math.expm1(coeff_per_shift * tail_logF)
        + math.expm1(gt_tail)
        + direct_tail / max(abs(G_direct), 1e-300)
    )
    return GstarSplit(
        Gstar=complex(G1 * G2),
        G1=complex(G1),
        G2=complex(G2),
        Gtilde=complex(Gtilde),
        G_direct=complex(G_direct),
        g2_deviation=float(abs(G2 - 1.0)),
        tail_budget=float(rel),
        tail_parts={
            "fourier_tail": fourier_tail,
            "logF_series_tail": tail_logF,
            "gtilde_tail": gt_tail,
            "direct_tail": direct_tail,
        },
    )


def grid_to_csv(p: DirichletPolynomial, g: GridSpec, path: str) -> None:
    """CSV dump: sigma,t,re,im,abs, t-major to match the row-major matrix."""
    vals = eval_grid(p, g)
    sigmas, ts = g.sigmas, g.ts
    with open(path, "w") as fh:
        fh.write("sigma,t,re,im,abs\n")
        for i, t in enumerate(ts):
            for j, sg in enumerate(sigmas):
                v = vals[i, j]
                fh.write(
                    f"{sg:.17g},{t:.17g},{v.real:.17g},{v.imag:.17g},{abs(v):.17g}\n"
                )


def grid_to_binary(p: DirichletPolynomial, g: GridSpec, path: str) -> None:
    """Binary dump: magic DZLGRID1, uint64 rows/cols, row-major (re, im) doubles."""
    vals = eval_grid(p, g)
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(np.array(vals.shape, dtype="<u8").tobytes())
        inter = np.empty(vals.shape + (2,))
        inter[..., 0] = vals.real
        inter[..., 1] = vals.imag
        fh.write(inter.astype("<f8").tobytes())
