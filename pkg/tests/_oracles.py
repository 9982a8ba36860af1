"""Independent zero-counting oracle: dense |F| grid minima + Newton refinement.

Deliberately does not use winding numbers anywhere, so it can arbitrate the
winding-based counts.
"""

import numpy as np

from dzl.zeros import Rectangle


def oracle_zeros(p, sigma_range, t_range, step=0.01, residual_tol=1e-9):
    """All zeros of p in the region, found as refined local minima of |F|."""
    sigmas = np.arange(sigma_range[0], sigma_range[1] + step / 2, step)
    ts = np.arange(t_range[0], t_range[1] + step / 2, step)
    grid = sigmas[None, :] + 1j * ts[:, None]
    vals = np.abs(p.eval_many(grid))
    interior = vals[1:-1, 1:-1]
    is_min = np.ones_like(interior, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            nb = vals[1 + di:vals.shape[0] - 1 + di,
                      1 + dj:vals.shape[1] - 1 + dj]
            is_min &= interior <= nb
    seeds = grid[1:-1, 1:-1][is_min]
    zeros = []
    for seed in seeds:
        z = complex(seed)
        ok = False
        for _ in range(80):
            fz = complex(p.eval_many(np.array([z]))[0])
            scale = p.scale_at(z.real)
            if abs(fz) < residual_tol * scale:
                ok = True
                break
            dz = complex(p.eval_deriv_many(np.array([z]))[0])
            if abs(dz) < 1e-300:
                break
            z = z - fz / dz
        if not ok:
            continue
        if not (sigma_range[0] <= z.real <= sigma_range[1]
                and t_range[0] <= z.imag <= t_range[1]):
            continue
        if all(abs(z - w) > 1e-5 for w in zeros):
            zeros.append(z)
    return zeros


def safe_box(zeros, sigma_range, t_range, margin=0.05, clearance=0.02):
    """A rectangle strictly inside the scan region whose boundary stays at
    least `clearance` away from every oracle zero (edges nudged if needed)."""
    def pick(lo, hi, coords):
        for trial in np.linspace(0.0, margin, 11):
            a, b = lo + margin - trial, hi - margin + trial
            if all(min(abs(c - a), abs(c - b)) > clearance for c in coords):
                return a, b
        raise RuntimeError("could not place a clear boundary")

    res = [z.real for z in zeros]
    ims = [z.imag for z in zeros]
    a, b = pick(sigma_range[0], sigma_range[1], res)
    c, d = pick(t_range[0], t_range[1], ims)
    return Rectangle(a, b, c, d)


def count_inside(zeros, box):
    return sum(1 for z in zeros if box.contains(z)
               and box.sigma_lo < z.real < box.sigma_hi
               and box.t_lo < z.imag < box.t_hi)


def random_poly(rng, max_n=50):
    from dzl.dirpoly import DirichletPolynomial

    n = int(rng.integers(5, max_n + 1))
    c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    c[0] = 0.0
    # keep the leading coefficient honest so the polynomial is genuinely
    # degree-n and has a domination abscissa
    if abs(c[1]) < 0.3:
        c[1] = 0.3 + 0.3j
    return DirichletPolynomial.from_coefficients(c)
