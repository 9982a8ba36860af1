"""Adaptive Gauss-Kronrod (7-15) panel integration for complex-valued integrands.

Integrands are vectorized callables f(t: ndarray) -> ndarray over a real
parameter; panels are processed in batches so the expensive evaluations
(Dirichlet sums) amortize.  Summation order is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadResult", "gk_integrate", "gk_integrate_real", "integrate_segment"]

# 15-point Kronrod nodes/weights on [-1, 1]; odd indices are the Gauss-7 nodes.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG7 = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
# Gauss weights scattered onto the 15-node layout (zeros at Kronrod-only nodes)
_WG = np.zeros(15)
_WG[1::2] = _WG7


@dataclass
class QuadResult:
    value: complex
    abs_err_estimate: float
    panels: int

    def __post_init__(self):
        if self.abs_err_estimate < 0:
            raise ValueError("error estimate must be nonnegative")


def _eval_panels(f, lo: np.ndarray, hi: np.ndarray):
    """GK15 on each [lo_i, hi_i]; returns (I_i, err_i) arrays."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * _XK[None, :]
    vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
    ik = half * (vals @ _WK)
    ig = half * (vals @ _WG)
    err = np.abs(ik - ig)
    # scipy-style sharpening of the raw K-G difference
    scale = np.abs(half) * np.abs(vals).mean(axis=1) + 1e-300
    rel = np.minimum(1.0, (200.0 * err / scale) ** 1.5)
    return ik, err * rel + 1e-300 * np.abs(ik)


def gk_integrate(f, a: float, b: float, tol: float = 1e-10,
                 initial_panels: int = 1, max_panels: int = 65536) -> QuadResult:
    """Adaptive bisection; splits the worst panels until the error target holds.

    `tol` is an absolute target on the summed panel error estimates.
    """
    if b == a:
        return QuadResult(0.0 + 0.0j, 0.0, 0)
    edges = np.linspace(a, b, max(1, initial_panels) + 1)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    vals, errs = _eval_panels(f, lo, hi)
    while len(lo) < max_panels:
        total_err = errs.sum()
        if total_err <= tol:
            break
        # split every panel holding more than its fair share of the budget
        bad = errs > max(tol / (2.0 * len(lo)), total_err * 1e-6)
        if not bad.any():
            bad = errs == errs.max()
        nb = int(bad.sum())
        if len(lo) + nb > max_panels:
            break
        mids = 0.5 * (lo[bad] + hi[bad])
        new_lo = np.concatenate([lo[bad], mids])
        new_hi = np.concatenate([mids, hi[bad]])
        nv, ne = _eval_panels(f, new_lo, new_hi)
        lo = np.concatenate([lo[~bad], new_lo])
        hi = np.concatenate([hi[~bad], new_hi])
        vals = np.concatenate([vals[~bad], nv])
        errs = np.concatenate([errs[~bad], ne])
    # deterministic reduction: sum panels in left-edge order
    order = np.argsort(lo, kind="stable")
    return QuadResult(complex(vals[order].sum()), float(errs.sum()), len(lo))


def gk_integrate_real(f, a: float, b: float, tol: float = 1e-10,
                      initial_panels: int = 1, max_panels: int = 65536) -> QuadResult:
    res = gk_integrate(f, a, b, tol=tol, initial_panels=initial_panels,
                       max_panels=max_panels)
    return QuadResult(res.value.real, res.abs_err_estimate, res.panels)


def integrate_segment(f, start: complex, end: complex, tol: float = 1e-10,
                      initial_panels: int = 1, max_panels: int = 65536) -> QuadResult:
    """Integral of f along the straight segment from start to end.

    f must accept an ndarray of complex points.
    """
    d = end - start

    def g(t):
        return f(start + np.asarray(t) * d) * d

    return gk_integrate(g, 0.0, 1.0, tol=tol, initial_panels=initial_panels,
                        max_panels=max_panels)
