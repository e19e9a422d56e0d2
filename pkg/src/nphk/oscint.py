"""Numerical verification of oscillatory-integral decay rates.

Evaluates I(lambda, s) = integral of exp(i*lambda*(phi(x) + s.x)) g(x) dx over
a compactly supported polynomial bump g, fits decay exponents on dyadic
lambda grids, and probes the local L^q behavior of the weighted maximal
function sup_lambda lambda^(1/2 + 1/(m+1)) |I(lambda, s)|.

Quadrature is a tensor-product composite Gauss rule whose panel count scales
with the phase's oscillation count (an oversampled nodes-per-cycle budget),
validated by doubling the panel count and comparing.  No asymptotic
(Filon-type) schemes: lambda stays at desk scale, the point is an
independent, error-controlled check of the predicted power laws, not speed.

Offset grids for the maximal-function scans are cell-centered.  The caustic
of the probed phases is an axis line through s = 0 where the maximal
function is genuinely infinite; endpoint grids would sample it directly and
the Riemann sums would measure the grid, not the function.
"""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classify import D_TYPE, UnsupportedKindError, classify_singularity
from .polyring import INFINITE_ORDER, BivariatePolynomial

GAUSS_ORDER = 10
# Nodes per oscillation cycle.  Order-10 Gauss panels at 2.5 cycles per panel
# integrate a pure tone with per-panel error below 1e-12, so 4 is already
# deep in the convergent regime; every reported value is still validated by
# doubling the panel count.
OVERSAMPLE_NODES_PER_CYCLE = 4
MIN_PANELS = 6
REL_TOL = 1e-3
MAX_FEASIBLE_LAMBDA = float(1 << 15)

DEFAULT_LAMBDA_GRID = tuple(float(2**j) for j in range(6, 15))
DEFAULT_RADIUS = 0.25
DEFAULT_SCAN_HALF_WIDTH = 0.25
# Cell count per axis for offset scans.  Must be even: the probed phases have
# their caustic on an axis line, where the maximal function is infinite, and
# an odd cell-centered grid would place sample points exactly on it.
DEFAULT_SCAN_CELLS = 32


class QuadratureNotConverged(RuntimeError):
    """Panel doubling failed to stabilize the integral at the requested tolerance."""


@dataclass(frozen=True)
class AmplitudeSpec:
    """Compactly supported polynomial bump amplitude.

    ``profile`` is "radial" for (1 - (r/R)^2)^order on the disc of radius R,
    or "product" for the tensor bump (1 - (x/R)^2)^order (1 - (y/R)^2)^order
    on the square.
    """

    radius: float = DEFAULT_RADIUS
    order: int = 8
    profile: str = "radial"

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("amplitude radius must be positive")
        if self.order < 2 or self.order % 2:
            raise ValueError("bump order must be an even integer >= 2")
        if self.profile not in ("radial", "product"):
            raise ValueError(f"unknown amplitude profile {self.profile!r}")


@dataclass(frozen=True)
class DecayFit:
    """Sampled values of I(lambda, s) and the fitted decay exponent."""

    lambdas: Tuple[float, ...]
    values: Tuple[complex, ...]
    magnitudes: Tuple[float, ...]
    gamma_hat: float
    log_correction: bool
    residual: float
    quadrature_error_bound: Tuple[float, ...]


@dataclass(frozen=True)
class RandolScan:
    """Maximal-function samples and empirical L^q refinement ratios."""

    m: int
    s_grid: Tuple[Tuple[float, float], ...]
    M_values: Tuple[float, ...]
    q_report: Dict[float, Tuple[float, float, float]]  # q -> (coarse, fine, ratio)


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("NPHK_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


# -- quadrature engine ---------------------------------------------------------


def _float_terms(phi: BivariatePolynomial) -> List[Tuple[int, int, float]]:
    return [(a, b, float(c)) for (a, b), c in sorted(phi.terms.items())]


def _gradient_bound(phi: BivariatePolynomial, radius: float, axis: int) -> float:
    """Coefficientwise bound for |d phi / d axis| on the square [-R, R]^2."""
    total = 0.0
    for a, b, c in _float_terms(phi):
        e = a if axis == 0 else b
        if e:
            total += abs(c) * e * radius ** (a + b - 1)
    return total


def _panel_count(lam: float, grad_bound: float, radius: float, oversample: float) -> int:
    cycles = lam * grad_bound * (2 * radius) / (2 * math.pi)
    panels = int(math.ceil(oversample * cycles / GAUSS_ORDER)) + 2
    return max(panels, MIN_PANELS)


def _gauss_axis(radius: float, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    gl_x, gl_w = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    edges = np.linspace(-radius, radius, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2.0
    mid = (edges[1:] + edges[:-1]) / 2.0
    nodes = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    weights = (half[:, None] * gl_w[None, :]).ravel()
    return nodes, weights


def _bump_rows(amp: AmplitudeSpec, xc: np.ndarray, y: np.ndarray) -> np.ndarray:
    r = amp.radius
    if amp.profile == "radial":
        t = 1.0 - (xc[:, None] ** 2 + y[None, :] ** 2) / (r * r)
        return np.where(t > 0.0, t, 0.0) ** amp.order
    tx = np.clip(1.0 - (xc / r) ** 2, 0.0, None) ** amp.order
    ty = np.clip(1.0 - (y / r) ** 2, 0.0, None) ** amp.order
    return tx[:, None] * ty[None, :]


def _power_cache(base: np.ndarray):
    cache = {0: np.ones_like(base)}

    def pw(k):
        if k not in cache:
            cache[k] = pw(k - 1) * base
        return cache[k]

    return pw


def _phase_rows(terms, xc: np.ndarray, ypow, out: np.ndarray) -> np.ndarray:
    """lam-free phase values on the chunk grid, accumulated into ``out``."""
    xp = _power_cache(xc)
    out.fill(0.0)
    tmp = np.empty_like(out)
    for a, b, c in terms:
        np.multiply(xp(a)[:, None], ypow(b)[None, :], out=tmp)
        tmp *= c
        out += tmp
    return out


def _osc_grids(
    phi: BivariatePolynomial,
    amp: AmplitudeSpec,
    lam: float,
    grids: Sequence[Tuple[np.ndarray, np.ndarray]],
    panels: Tuple[int, int],
) -> List[np.ndarray]:
    """I(lambda, s) over several separable s-grids, sharing one integrand sweep.

    Each grid is (s1_values, s2_values) and yields the full matrix
    I[i, j] = I(lambda, (s1[i], s2[j])).
    """
    x, wx = _gauss_axis(amp.radius, panels[0])
    y, wy = _gauss_axis(amp.radius, panels[1])
    terms = _float_terms(phi)

    mats_a = [np.exp(1j * lam * np.outer(s1, x)) * wx[None, :] for s1, _ in grids]
    mats_b = [np.exp(1j * lam * np.outer(s2, y)) * wy[None, :] for _, s2 in grids]
    totals = [
        np.zeros((a.shape[0], b.shape[0]), dtype=np.complex128)
        for a, b in zip(mats_a, mats_b)
    ]

    chunk = max(16, (1 << 21) // max(1, y.size))
    phase = np.empty((chunk, y.size))
    e = np.empty((chunk, y.size), dtype=np.complex128)
    ypow = _power_cache(y)
    for lo in range(0, x.size, chunk):
        hi = min(lo + chunk, x.size)
        rows = hi - lo
        xc = x[lo:hi]
        p = _phase_rows(terms, xc, ypow, phase[:rows])
        p *= lam
        g = _bump_rows(amp, xc, y)
        eh = e[:rows]
        np.cos(p, out=eh.real)
        np.sin(p, out=eh.imag)
        eh.real *= g
        eh.imag *= g
        for idx, (a, b) in enumerate(zip(mats_a, mats_b)):
            totals[idx] += a[:, lo:hi] @ (eh @ b.T)
    return totals


def _panels_for(phi: BivariatePolynomial, amp: AmplitudeSpec, lam: float, s_max: Tuple[float, float], oversample: float) -> Tuple[int, int]:
    gx = _gradient_bound(phi, amp.radius, 0) + abs(s_max[0])
    gy = _gradient_bound(phi, amp.radius, 1) + abs(s_max[1])
    return (
        _panel_count(lam, gx, amp.radius, oversample),
        _panel_count(lam, gy, amp.radius, oversample),
    )


def amplitude_mass(amp: AmplitudeSpec) -> float:
    """The integral of the bump; radial bumps have the closed form pi R^2/(order+1)."""
    if amp.profile == "radial":
        return math.pi * amp.radius**2 / (amp.order + 1)
    gl_x, gl_w = np.polynomial.legendre.leggauss(64)
    one_d = amp.radius * float(np.sum(gl_w * (1.0 - gl_x**2) ** amp.order))
    return one_d * one_d


def check_amplitude_support(phi: BivariatePolynomial, amp: AmplitudeSpec, grid: int = 49) -> bool:
    """Grid check that the phase has no critical points separated from the origin.

    Critical sets through the origin (curves of degenerate phases) are
    accepted; a low-gradient island disconnected from the origin's component
    is not, since it would contribute its own stationary-phase terms.
    """
    r = amp.radius
    xs = np.linspace(-r, r, grid)
    g1 = np.zeros((grid, grid))
    g2 = np.zeros((grid, grid))
    for a, b, c in _float_terms(phi.partial(0)):
        g1 += c * xs[:, None] ** a * xs[None, :] ** b
    for a, b, c in _float_terms(phi.partial(1)):
        g2 += c * xs[:, None] ** a * xs[None, :] ** b
    mag = np.hypot(g1, g2)
    scale = max(float(mag.max()), 1e-30)
    mask = mag < 1e-2 * scale
    if amp.profile == "radial":
        inside = xs[:, None] ** 2 + xs[None, :] ** 2 <= (0.98 * r) ** 2
    else:
        inside = np.ones_like(mask)

    # flood fill from the cells nearest the origin
    seen = np.zeros_like(mask, dtype=bool)
    queue = deque()
    c0 = grid // 2
    for di in (0, 1):
        for dj in (0, 1):
            queue.append((c0 + di, c0 + dj))
    while queue:
        i, j = queue.popleft()
        if not (0 <= i < grid and 0 <= j < grid) or seen[i, j]:
            continue
        seen[i, j] = True
        if not mask[i, j]:
            continue
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                queue.append((i + di, j + dj))
    # a strong zero outside the origin's component signals a separate critical point
    strong = (mag < 1e-9 * scale) & inside
    stray = strong & ~seen
    stray[c0 - 1 : c0 + 2, c0 - 1 : c0 + 2] = False
    return not bool(stray.any())


def _eval_with_error(
    phi: BivariatePolynomial,
    amp: AmplitudeSpec,
    lam: float,
    s: Tuple[float, float],
    oversample: float = OVERSAMPLE_NODES_PER_CYCLE,
) -> Tuple[complex, float]:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if lam > MAX_FEASIBLE_LAMBDA:
        raise ValueError(f"lambda={lam} beyond the feasible range {MAX_FEASIBLE_LAMBDA}")
    panels = _panels_for(phi, amp, lam, s, oversample)
    grid = [(np.array([s[0]]), np.array([s[1]]))]
    coarse = _osc_grids(phi, amp, lam, grid, panels)[0][0, 0]
    fine = _osc_grids(phi, amp, lam, grid, (2 * panels[0], 2 * panels[1]))[0][0, 0]
    floor = 1e-9 * amplitude_mass(amp)
    if abs(fine) < floor:
        return fine, 0.0
    rel = abs(fine - coarse) / abs(fine)
    if rel > REL_TOL:
        raise QuadratureNotConverged(
            f"doubling moved I(lambda={lam}, s={s}) by {rel:.2e} (> {REL_TOL})"
        )
    return fine, rel


def eval_oscillatory(
    phi: BivariatePolynomial,
    amp: AmplitudeSpec,
    lam: float,
    s: Tuple[float, float] = (0.0, 0.0),
) -> complex:
    """Quadrature value of I(lambda, s), validated by panel doubling."""
    value, _ = _eval_with_error(phi, amp, lam, s)
    return value


def dyadic_grid(lmin: float, lmax: float) -> Tuple[float, ...]:
    """Powers of two from lmin through lmax inclusive."""
    out = []
    lam = float(lmin)
    while lam <= lmax * (1 + 1e-12):
        out.append(lam)
        lam *= 2.0
    return tuple(out)


def fit_decay_from_samples(
    lams: Sequence[float],
    values: Sequence[complex],
    errors: Sequence[float],
    with_log: bool = False,
) -> DecayFit:
    """Least-squares decay exponent from precomputed I(lambda, s) samples."""
    if len(lams) < 3:
        raise ValueError("need at least three lambda samples for a decay fit")
    mags = [abs(v) for v in values]
    if min(mags) <= 0.0:
        raise QuadratureNotConverged("an |I| value underflowed; decay fit is degenerate")
    logl = np.log(np.asarray(lams, dtype=float))
    logm = np.log(np.asarray(mags, dtype=float))
    cols = [np.ones_like(logl), -logl]
    if with_log:
        cols.append(np.log(logl))
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, logm, rcond=None)
    fitted = design @ coef
    residual = float(np.sqrt(np.mean((fitted - logm) ** 2)))
    return DecayFit(
        lambdas=tuple(float(v) for v in lams),
        values=tuple(complex(v) for v in values),
        magnitudes=tuple(mags),
        gamma_hat=float(coef[1]),
        log_correction=bool(with_log),
        residual=residual,
        quadrature_error_bound=tuple(float(e) for e in errors),
    )


def fit_decay(
    phi: BivariatePolynomial,
    amp: AmplitudeSpec,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    s: Tuple[float, float] = (0.0, 0.0),
    with_log: bool = False,
    workers: Optional[int] = None,
) -> DecayFit:
    """Least-squares decay exponent of |I(lambda, s)| over a lambda grid.

    Fits log|I| against log(lambda) (optionally with a log log lambda
    regressor) and reports gamma_hat with the RMS fit residual and the
    per-point quadrature error estimates.
    """
    lams = sorted(float(v) for v in lambda_grid)
    if not check_amplitude_support(phi, amp):
        raise ValueError("phase has critical points separated from the origin inside the support")
    nworkers = resolve_workers(workers)

    def one(lam: float):
        return _eval_with_error(phi, amp, lam, s)

    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(one, lams))
    else:
        results = [one(lam) for lam in lams]
    return fit_decay_from_samples(
        lams, [v for v, _ in results], [e for _, e in results], with_log=with_log
    )


# -- maximal-function scans -----------------------------------------------------


def _require_d_type(phi: BivariatePolynomial, m: int) -> None:
    kind = classify_singularity(phi)
    if kind.tag != D_TYPE or kind.m != m:
        raise UnsupportedKindError(
            f"phase classifies as {kind.tag} with m={kind.m}, not a D type with m={m}"
        )
    n = kind.n
    if n is not INFINITE_ORDER and n <= 2 * m + 1:
        raise UnsupportedKindError(f"maximal-function scaling needs 2m+1 < n, got n={n}")


def randol_weight(m: int) -> float:
    return 0.5 + 1.0 / (m + 1)


def randol_maximal(
    phi: BivariatePolynomial,
    amp: AmplitudeSpec,
    m: int,
    s: Tuple[float, float],
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
) -> float:
    """Grid approximation (a lower bound) of sup_lambda lambda^(1/2+1/(m+1)) |I(lambda, s)|."""
    _require_d_type(phi, m)
    w = randol_weight(m)
    best = 0.0
    for lam in sorted(float(v) for v in lambda_grid):
        value, _ = _eval_with_error(phi, amp, lam, s)
        best = max(best, lam**w * abs(value))
    return best


def cell_centered_grid(half_width: float, cells: int) -> np.ndarray:
    """Cell centers of a uniform subdivision of [-w, w] into ``cells`` cells."""
    step = 2.0 * half_width / cells
    return -half_width + step * (np.arange(cells) + 0.5)


def randol_lq_scan(
    phi: BivariatePolynomial,
    amp: AmplitudeSpec,
    m: int,
    q_list: Sequence[float],
    half_width: float = DEFAULT_SCAN_HALF_WIDTH,
    cells: int = DEFAULT_SCAN_CELLS,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    refine: int = 2,
    validate: bool = True,
) -> RandolScan:
    """Empirical L^q Riemann sums of the maximal function at two grid refinements.

    A bounded coarse-to-fine ratio is the integrability signal; a growing one
    flags divergence.  The two cell-centered offset grids share every
    integrand sweep, and each lambda sweep is optionally validated by panel
    doubling on the coarse grid.
    """
    _require_d_type(phi, m)
    if not check_amplitude_support(phi, amp):
        raise ValueError("phase has critical points separated from the origin inside the support")
    w = randol_weight(m)
    cells += cells % 2  # keep sample points off the axis caustic
    coarse = cell_centered_grid(half_width, cells)
    fine = cell_centered_grid(half_width, refine * cells)
    grids = [(coarse, coarse), (fine, fine)]

    m_coarse = np.zeros((coarse.size, coarse.size))
    m_fine = np.zeros((fine.size, fine.size))
    for lam in sorted(float(v) for v in lambda_grid):
        panels = _panels_for(phi, amp, lam, (half_width, half_width), OVERSAMPLE_NODES_PER_CYCLE)
        mats = _osc_grids(phi, amp, lam, grids, panels)
        if validate:
            doubled = _osc_grids(phi, amp, lam, grids[:1], (2 * panels[0], 2 * panels[1]))[0]
            floor = 1e-9 * amplitude_mass(amp)
            big = np.abs(doubled) > floor
            if big.any():
                rel = float(
                    (np.abs(mats[0] - doubled)[big] / np.abs(doubled)[big]).max()
                )
                if rel > REL_TOL:
                    raise QuadratureNotConverged(
                        f"doubling moved the scan at lambda={lam} by {rel:.2e}"
                    )
        m_coarse = np.maximum(m_coarse, lam**w * np.abs(mats[0]))
        m_fine = np.maximum(m_fine, lam**w * np.abs(mats[1]))

    area_c = (2.0 * half_width / coarse.size) ** 2
    area_f = (2.0 * half_width / fine.size) ** 2
    report: Dict[float, Tuple[float, float, float]] = {}
    for q in q_list:
        s_c = float(np.sum(m_coarse**q) * area_c)
        s_f = float(np.sum(m_fine**q) * area_f)
        report[float(q)] = (s_c, s_f, s_f / s_c if s_c > 0 else math.inf)

    points = tuple((float(a), float(b)) for a in coarse for b in coarse)
    return RandolScan(
        m=m,
        s_grid=points,
        M_values=tuple(float(v) for v in m_coarse.ravel()),
        q_report=report,
    )


# -- CSV emission ----------------------------------------------------------------


def write_fit_csv(path: str, fit: DecayFit) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("lambda,re_I,im_I,abs_I,quad_err\n")
        for lam, val, err in zip(fit.lambdas, fit.values, fit.quadrature_error_bound):
            fh.write(
                f"{lam:.10g},{val.real:.12g},{val.imag:.12g},{abs(val):.12g},{err:.3g}\n"
            )


def write_scan_csv(path: str, scan: RandolScan) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("s1,s2,M_value\n")
        for (s1, s2), value in zip(scan.s_grid, scan.M_values):
            fh.write(f"{s1:.10g},{s2:.10g},{value:.12g}\n")
