"""Multiplicative coefficient tables: sieving, von Mangoldt transforms, twists.

Tables are 1-indexed: ``values[n]`` is the coefficient at n, ``values[0]``
is unused.  All tables are immutable after construction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PrimePowerRule",
    "AnalyticProfile",
    "MultiplicativeFunction",
    "VonMangoldtTable",
    "KBoundReport",
    "primes_up_to",
    "smallest_prime_factor",
    "generalized_binomial",
    "kronecker_symbol",
    "is_fundamental_discriminant",
    "ones_rule",
    "dk_rule",
    "moebius_rule",
    "sieve_multiplicative",
    "make_ones",
    "make_dk",
    "make_moebius",
    "dedekind_quadratic",
    "vonmangoldt_transform",
    "inverse_vonmangoldt",
    "verify_k_bound",
    "twist",
    "export_table_csv",
]


def primes_up_to(n: int) -> np.ndarray:
    """Primes <= n via a bytearray sieve."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def smallest_prime_factor(n: int) -> np.ndarray:
    """spf[m] = smallest prime factor of m for 2 <= m <= n (spf[0]=spf[1]=0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    return spf


def generalized_binomial(k: float, e: int) -> float:
    """binom(k+e-1, e) for real k > 0, as a product (valid for non-integer k)."""
    out = 1.0
    for j in range(e):
        out *= (k + j) / (j + 1)
    return out


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), standard reciprocity cases, n any integer."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out 2s from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol (a|n) for odd n > 0
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1 or d == 0:
        return False

    def squarefree(m: int) -> bool:
        m = abs(m)
        i = 2
        while i * i <= m:
            if m % (i * i) == 0:
                return False
            i += 1
        return True

    if d % 4 == 1 or d % 4 == -3:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3, -2, -1) and squarefree(m)
    return False


@dataclass(frozen=True)
class PrimePowerRule:
    """Evaluator (p, e) -> complex coefficient at p^e; e=0 is implicitly 1."""

    fn: Callable[[int, int], complex]
    label: str = "custom"

    def __call__(self, p: int, e: int) -> complex:
        if e == 0:
            return 1.0
        return self.fn(p, e)


@dataclass(frozen=True)
class AnalyticProfile:
    """Analytic metadata: k-bound, pole order m, and region/bound constants.

    c1, M, B, C describe the zero-free region and growth bounds of the
    underlying Dirichlet series; they are metadata only (no built-in generator
    pins them to specific numeric values).
    """

    k: float
    m: float = 0.0
    c1: float = 1.0
    M: float = 1.0
    B: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if self.m > self.k + 1e-12:
            raise ValueError(f"pole order m={self.m} exceeds k-bound k={self.k}")


@dataclass(frozen=True)
class MultiplicativeFunction:
    """Coefficient table f(1..N) with its prime-power rule and analytic profile."""

    N: int
    values: np.ndarray  # complex, index n in [1, N]; values[0] unused
    rule: PrimePowerRule
    profile: AnalyticProfile

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.values.shape != (self.N + 1,):
            raise ValueError("values must have shape (N+1,)")
        self.values.setflags(write=False)

    def __getitem__(self, n: int) -> complex:
        return complex(self.values[n])


@dataclass(frozen=True)
class VonMangoldtTable:
    """Lambda_f(n) on [1, N]; zero off prime powers."""

    N: int
    lam: np.ndarray

    def __post_init__(self):
        self.lam.setflags(write=False)


@dataclass(frozen=True)
class KBoundReport:
    max_ratio: float
    witness: int
    passed: bool


def sieve_multiplicative(
    rule: PrimePowerRule, N: int, profile: AnalyticProfile
) -> MultiplicativeFunction:
    """Fill f(1..N) from the prime-power rule, multiplicatively.

    Uses a smallest-prime-factor table: f(n) = rule(p, e) * f(n / p^e) with
    p^e || n, so each entry is one complex multiply.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    values = np.zeros(N + 1, dtype=np.complex128)
    values[1] = 1.0
    if N >= 2:
        spf = smallest_prime_factor(N)
        for n in range(2, N + 1):
            p = int(spf[n])
            m, e = n, 0
            while m % p == 0:
                m //= p
                e += 1
            v = complex(rule(p, e))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"rule {rule.label!r} returned non-finite value at (p={p}, e={e})")
            values[n] = v * values[m]
    return MultiplicativeFunction(N=N, values=values, rule=rule, profile=profile)


ones_rule = PrimePowerRule(lambda p, e: 1.0, label="ones")


def dk_rule(k: float) -> PrimePowerRule:
    return PrimePowerRule(lambda p, e: generalized_binomial(k, e), label=f"d_{k:g}")


moebius_rule = PrimePowerRule(lambda p, e: -1.0 if e == 1 else 0.0, label="moebius")


def make_ones(N: int) -> MultiplicativeFunction:
    return sieve_multiplicative(ones_rule, N, AnalyticProfile(k=1.0, m=1.0))


def make_dk(k: float, N: int) -> MultiplicativeFunction:
    return sieve_multiplicative(dk_rule(k), N, AnalyticProfile(k=k, m=k))


def make_moebius(N: int) -> MultiplicativeFunction:
    return sieve_multiplicative(moebius_rule, N, AnalyticProfile(k=1.0, m=0.0))


def dedekind_quadratic(D: int, N: int) -> MultiplicativeFunction:
    """Ideal-count coefficients of the quadratic field with discriminant D.

    a(n) = sum_{d|n} chi_D(d) with chi_D the Kronecker symbol, realized on
    prime powers: a(p^e) = sum_{j<=e} chi_D(p)^j.
    """
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")

    def at_prime_power(p: int, e: int) -> float:
        chi = kronecker_symbol(D, p)
        return float(sum(chi**j for j in range(e + 1)))

    rule = PrimePowerRule(at_prime_power, label=f"dedekind({D})")
    return sieve_multiplicative(rule, N, AnalyticProfile(k=2.0, m=1.0))


def _prime_power_list(N: int) -> list[tuple[int, int, int]]:
    """(p, e, p^e) for all prime powers p^e <= N, grouped by p, e ascending."""
    out = []
    for p in primes_up_to(N):
        p = int(p)
        q, e = p, 1
        while q <= N:
            out.append((p, e, q))
            q *= p
            e += 1
    return out


def vonmangoldt_transform(f: MultiplicativeFunction) -> VonMangoldtTable:
    """Solve f(n) log n = sum_{d|n} Lambda_f(d) f(n/d) for Lambda_f.

    Supported on prime powers only; Lambda_f(p^a) is obtained inductively in a:
    a log(p) f(p^a) = sum_{j=1..a} Lambda_f(p^j) f(p^{a-j}).
    """
    N = f.N
    lam = np.zeros(N + 1, dtype=np.complex128)
    for p in primes_up_to(N):
        p = int(p)
        logp = math.log(p)
        # f at p^0..p^amax
        fpows = [1.0 + 0j]
        q = p
        while q <= N:
            fpows.append(complex(f.values[q]))
            q *= p
        lams: list[complex] = []
        q = p
        for a in range(1, len(fpows)):
            acc = a * logp * fpows[a]
            for j in range(1, a):
                acc -= lams[j - 1] * fpows[a - j]
            lams.append(acc)  # coefficient of Lambda_f(p^a) is f(1)=1
            lam[q] = acc
            q *= p
    return VonMangoldtTable(N=N, lam=lam)


def inverse_vonmangoldt(
    lam: VonMangoldtTable,
    rule_label: str = "from_vonmangoldt",
    profile: AnalyticProfile | None = None,
) -> MultiplicativeFunction:
    """Run the convolution identity forward to rebuild f from Lambda_f."""
    N = lam.N
    pps = {q for _, _, q in _prime_power_list(N)}
    bad = [n for n in range(2, N + 1) if abs(lam.lam[n]) > 1e-12 and n not in pps]
    if bad:
        raise ValueError(f"Lambda table supported off prime powers, e.g. at n={bad[0]}")

    ppvals: dict[int, complex] = {}
    for p in primes_up_to(N):
        p = int(p)
        logp = math.log(p)
        fpows = [1.0 + 0j]
        q = p
        a = 1
        while q <= N:
            acc = 0.0 + 0j
            qq = p
            for j in range(1, a + 1):
                acc += lam.lam[qq] * fpows[a - j]
                qq *= p
            fpows.append(acc / (a * logp))
            ppvals[q] = fpows[a]
            q *= p
            a += 1

    def from_table(p: int, e: int) -> complex:
        return ppvals[p**e]

    rule = PrimePowerRule(from_table, label=rule_label)
    prof = profile if profile is not None else AnalyticProfile(k=1.0, m=0.0)
    # Direct multiplicative fill; the rule closure keeps the table reusable.
    return sieve_multiplicative(rule, N, prof)


def verify_k_bound(lam, k: float) -> KBoundReport:
    """max over prime powers n<=N of |Lambda_f(n)| / Lambda(n), vs k.

    Accepts a VonMangoldtTable or a MultiplicativeFunction (transformed here).
    """
    if isinstance(lam, MultiplicativeFunction):
        lam = vonmangoldt_transform(lam)
    max_ratio = 0.0
    witness = 0
    for p, _e, q in _prime_power_list(lam.N):
        ratio = abs(lam.lam[q]) / math.log(p)
        if ratio > max_ratio:
            max_ratio = ratio
            witness = q
    return KBoundReport(
        max_ratio=max_ratio, witness=witness, passed=max_ratio <= k * (1 + 1e-12)
    )


def twist(f: MultiplicativeFunction, b) -> MultiplicativeFunction:
    """g(n) = f(n) a(n) with a completely multiplicative, a(p) = b_delta(log p / 2pi).

    `b` is a BDelta instance.
    """
    delta = b.delta
    N = f.N
    avals = np.zeros(N + 1, dtype=np.complex128)
    avals[1] = 1.0
    if N >= 2:
        spf = smallest_prime_factor(N)
        for p in primes_up_to(N):
            avals[int(p)] = b.eval(math.log(int(p)) / (2 * math.pi))
        for n in range(2, N + 1):
            p = int(spf[n])
            if n != p:
                avals[n] = avals[p] * avals[n // p]
    mod_err = np.max(np.abs(np.abs(avals[1:]) - 1.0))
    if mod_err > 1e-12:
        raise AssertionError(f"twist lost unit modulus, max deviation {mod_err:.3e}")

    def twisted_rule(p: int, e: int) -> complex:
        return f.rule(p, e) * avals[p] ** e if p <= N else f.rule(p, e)

    rule = PrimePowerRule(twisted_rule, label=f"{f.rule.label}*twist(delta={delta:g})")
    values = f.values * avals
    return MultiplicativeFunction(N=N, values=values.copy(), rule=rule, profile=f.profile)


def export_table_csv(f: MultiplicativeFunction, path: str) -> None:
    """CSV dump: header n,re,im, one row per n in [1, N]."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "re", "im"])
        for n in range(1, f.N + 1):
            v = f.values[n]
            w.writerow([n, format(v.real, ".17g"), format(v.imag, ".17g")])
