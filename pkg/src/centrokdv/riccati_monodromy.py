"""Monodromy machinery: Hill fundamental matrices, periodic Riccati branches,
the one-parameter family of projective period maps, and the fixed-point
conjugator.

All period maps are computed by a classical fourth-order one-step method on
[0, pi] with step h = pi/(substeps*N); coefficient values at half steps come
from exact trigonometric resampling, so step-halving exhibits clean order-4
decay.  Eigen-structure of the resulting 2x2 matrices drives everything
else: branch labels, fixed points in RP^1, and spectral invariants.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import periodic_fn as pf
from .curve_core import ProjectiveCurve, wrap_half_pi
from .errors import BranchSingular, Degenerate, NoRealFixedPoints, Resonant, ZeroParam

__all__ = [
    "MonodromyMatrix",
    "RiccatiBranch",
    "SpectralScan",
    "hill_fundamental",
    "hill_fundamental_family",
    "riccati_periodic_solutions",
    "moebius_monodromy",
    "moebius_apply_angle",
    "spectral_scan",
    "scan_to_csv",
    "scan_from_csv",
    "conjugator",
]

DEFAULT_SUBSTEPS = 8
PARABOLIC_TOL = 1e-9


def _rk4_transfer(b_half: np.ndarray, h: float, keep_trajectory: bool = False):
    """Integrate X' = B(t)X across K steps of size h.

    ``b_half`` holds B at half-step resolution: shape (2K+1, ..., 2, 2),
    where index 2k is the start of step k, 2k+1 its midpoint, 2k+2 its end.
    Batch axes between the time axis and the matrix block are carried along.
    Returns the final matrix, or the whole (K+1)-point trajectory.
    """
    steps = (b_half.shape[0] - 1) // 2
    batch = b_half.shape[1:-2]
    m = np.broadcast_to(np.eye(2), batch + (2, 2)).copy()
    traj = np.empty((steps + 1,) + batch + (2, 2)) if keep_trajectory else None
    if keep_trajectory:
        traj[0] = m
    for k in range(steps):
        b0 = b_half[2 * k]
        bm = b_half[2 * k + 1]
        b1 = b_half[2 * k + 2]
        k1 = b0 @ m
        k2 = bm @ (m + (0.5 * h) * k1)
        k3 = bm @ (m + (0.5 * h) * k2)
        k4 = b1 @ (m + h * k3)
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if keep_trajectory:
            traj[k + 1] = m
    return traj if keep_trajectory else m


@dataclass(frozen=True)
class MonodromyMatrix:
    """Period map of a pi-periodic planar linear system, plus its parameter."""

    m: np.ndarray
    meta: dict | None = None

    def __post_init__(self):
        arr = np.asarray(self.m, dtype=float)
        if arr.shape != (2, 2):
            raise ValueError("monodromy must be 2x2")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "m", arr)

    @property
    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    @property
    def det(self) -> float:
        return float(self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0])

    @property
    def tr2(self) -> float:
        """Trace squared over determinant: the conjugacy (and sign) invariant."""
        return self.trace**2 / self.det

    def eigen_system(self):
        """Real eigen-decomposition ((mu_plus, v_plus), (mu_minus, v_minus)).

        "plus" is the eigenvalue of larger modulus.  Raises
        NoRealFixedPoints inside the elliptic/parabolic band
        |trace| <= 2 sqrt(det) + tol, and BranchSingular when the matrix is
        a multiple of the identity (every direction fixed, no way to pick
        two branches).
        """
        t, d = self.trace, self.det
        disc = t * t - 4.0 * d
        if disc <= PARABOLIC_TOL * max(1.0, abs(d)):
            off = max(abs(self.m[0, 1]), abs(self.m[1, 0]), abs(self.m[0, 0] - self.m[1, 1]))
            if off < 1e-9 * max(1.0, abs(t)):
                raise BranchSingular("monodromy is a multiple of the identity")
            raise NoRealFixedPoints(f"trace {t!r}, det {d!r}: no real eigen-directions")
        root = np.sqrt(disc)
        mu_a = (t + root) / 2.0
        mu_b = (t - root) / 2.0
        if abs(mu_a) < abs(mu_b):
            mu_a, mu_b = mu_b, mu_a
        return (mu_a, self._eigenvector(mu_a)), (mu_b, self._eigenvector(mu_b))

    def _eigenvector(self, mu: float) -> np.ndarray:
        r1 = np.array([self.m[0, 1], mu - self.m[0, 0]])
        r2 = np.array([mu - self.m[1, 1], self.m[1, 0]])
        v = r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2
        return v / np.linalg.norm(v)

    def fixed_angles(self):
        """Fixed points of the induced RP^1 map as angles in (-pi/2, pi/2].

        Returned as (plus, minus) by eigenvalue modulus; the angle chi
        stands for the projective point tan(chi).
        """
        (_, vp), (_, vm) = self.eigen_system()
        return (
            float(wrap_half_pi(np.arctan2(vp[0], vp[1]))),
            float(wrap_half_pi(np.arctan2(vm[0], vm[1]))),
        )


def moebius_apply_angle(m: np.ndarray, chi):
    """Action of a 2x2 matrix on RP^1 points written as angles.

    The point tan(chi) maps to tan(result); work on the homogeneous vector
    (sin chi, cos chi) so nothing blows up at the chart pole.
    """
    chi = np.asarray(chi, dtype=float)
    v1 = m[0, 0] * np.sin(chi) + m[0, 1] * np.cos(chi)
    v2 = m[1, 0] * np.sin(chi) + m[1, 1] * np.cos(chi)
    return np.arctan2(v1, v2)


def _hill_b_half(potential: pf.PeriodicFn, substeps: int, lambdas=None) -> np.ndarray:
    """Coefficient matrices [[0,1],[potential+lambda,0]] at half-step resolution."""
    fine = pf.values_with_wrap(potential, 2 * substeps * potential.n)
    if lambdas is None:
        b = np.zeros((fine.shape[0], 2, 2))
        b[:, 0, 1] = 1.0
        b[:, 1, 0] = fine
    else:
        lam = np.asarray(lambdas, dtype=float)
        b = np.zeros((fine.shape[0], lam.shape[0], 2, 2))
        b[:, :, 0, 1] = 1.0
        b[:, :, 1, 0] = fine[:, None] + lam[None, :]
    return b


def hill_fundamental(
    potential: pf.PeriodicFn, substeps: int = DEFAULT_SUBSTEPS, keep_trajectory: bool = False
):
    """Fundamental solution of u'' = potential * u over [0, pi] acting on (u, u').

    With ``keep_trajectory`` also returns the matrix at every step point
    (substeps*N + 1 of them), which downstream code uses to follow
    individual solutions across the period.
    """
    h = np.pi / (substeps * potential.n)
    b = _hill_b_half(potential, substeps)
    if keep_trajectory:
        traj = _rk4_transfer(b, h, keep_trajectory=True)
        return MonodromyMatrix(traj[-1], meta={"kind": "hill"}), traj
    return MonodromyMatrix(_rk4_transfer(b, h), meta={"kind": "hill"})


def hill_fundamental_family(potential: pf.PeriodicFn, lambdas, substeps: int = DEFAULT_SUBSTEPS):
    """Monodromy of u'' = (potential + lambda)u for a whole batch of lambda at once."""
    h = np.pi / (substeps * potential.n)
    return _rk4_transfer(_hill_b_half(potential, substeps, lambdas), h)


@dataclass(frozen=True)
class RiccatiBranch:
    """One periodic solution of the quadratic relation c w' = w^2 - 1 - c^2 p,
    p the Hill potential, tagged by which Floquet branch produced it."""

    solution: pf.PeriodicFn
    branch: str
    multiplier: float
    c_aff: float


def riccati_periodic_solutions(
    potential: pf.PeriodicFn, c_aff: float, substeps: int = DEFAULT_SUBSTEPS
):
    """Both periodic Riccati solutions for the given Hill potential and c.

    The quadratic relation is linearized by w = -c u'/u with
    u'' = (potential + 1/c^2) u; periodic w correspond to Floquet
    solutions, i.e. eigenvectors of the period matrix.  Returns
    (plus, minus) ordered by eigenvalue modulus.  Raises NoRealFixedPoints
    when the period matrix is elliptic (or within tolerance of parabolic),
    and BranchSingular for a branch whose u vanishes somewhere (the
    periodic solution has a pole there).
    """
    if c_aff == 0.0:
        raise ZeroParam("c must be nonzero")
    shifted = potential + 1.0 / c_aff**2
    mono, traj = hill_fundamental(shifted, substeps=substeps, keep_trajectory=True)
    (mu_p, v_p), (mu_m, v_m) = mono.eigen_system()
    out = []
    for mu, v, name in ((mu_p, v_p, "plus"), (mu_m, v_m, "minus")):
        sol = traj @ v  # (u, u') along the period
        u, du = sol[:, 0], sol[:, 1]
        peak = np.max(np.abs(u))
        if np.any(u[:-1] * u[1:] <= 0.0) or np.min(np.abs(u)) < 1e-6 * peak:
            raise BranchSingular(
                f"branch {name}: u vanishes on [0, pi], the solution a has a pole"
            )
        nodes = np.arange(potential.n) * substeps
        w = pf.PeriodicFn(-c_aff * du[nodes] / u[nodes], "periodic")
        w = _polish_riccati(w, potential, c_aff)
        out.append(RiccatiBranch(solution=w, branch=name, multiplier=float(mu), c_aff=c_aff))
    return out[0], out[1]


def _polish_riccati(w: pf.PeriodicFn, potential: pf.PeriodicFn, c: float) -> pf.PeriodicFn:
    """Newton-correct a near-solution of c w' = w^2 - 1 - c^2 p in place.

    The time stepper leaves an O(h^4) defect that compounds when
    transformations are stacked; one or two spectral Newton steps push it
    to roundoff.  Each step solves delta' - (2w/c) delta = -defect, whose
    homogeneous multiplier is the inverse square of the Floquet multiplier,
    safely away from 1 on a hyperbolic branch.
    """
    for _ in range(2):
        defect = pf.differentiate(w) - (w * w - 1.0) / c + c * potential
        if np.max(np.abs(defect.samples)) < 1e-13:
            break
        try:
            w = w + pf.solve_linear_periodic((2.0 / c) * w, -defect)
        except Resonant:
            break  # weakly hyperbolic: keep the shooting solution
    return w


def _angle_b_half(gamma: ProjectiveCurve, substeps: int) -> np.ndarray:
    """lambda-independent part of the projective generator at half steps.

    The generator of the one-parameter family is
    B(t) = (lambda/phi') [[-sin phi cos phi, sin^2 phi], [-cos^2 phi, sin phi cos phi]],
    the angle-chart form of the affine-chart field (lambda/gamma')
    [[-gamma, gamma^2], [-1, gamma]]; this helper returns B/lambda.
    """
    m = 2 * substeps * gamma.n
    t = np.arange(m + 1) * (np.pi / m)
    phi = t + pf.values_with_wrap(gamma.psi, m)
    dphi = 1.0 + pf.values_with_wrap(pf.differentiate(gamma.psi), m)
    s, c = np.sin(phi), np.cos(phi)
    b = np.empty((m + 1, 2, 2))
    b[:, 0, 0] = -s * c
    b[:, 0, 1] = s * s
    b[:, 1, 0] = -c * c
    b[:, 1, 1] = s * c
    return b / dphi[:, None, None]


def moebius_monodromy(
    gamma: ProjectiveCurve,
    lam: float,
    substeps: int = DEFAULT_SUBSTEPS,
    keep_trajectory: bool = False,
):
    """Period map of the lambda-scaled projective vector field along gamma.

    The generator is traceless, so the result is unimodular; its conjugacy
    class in PSL(2, R) is a spectral invariant of the curve.  With
    keep_trajectory, also return the fundamental matrix at every step.
    """
    h = np.pi / (substeps * gamma.n)
    b = float(lam) * _angle_b_half(gamma, substeps)
    meta = {"kind": "moebius", "lambda": float(lam)}
    if keep_trajectory:
        traj = _rk4_transfer(b, h, keep_trajectory=True)
        return MonodromyMatrix(traj[-1], meta=meta), traj
    return MonodromyMatrix(_rk4_transfer(b, h), meta=meta)


@dataclass(frozen=True)
class SpectralScan:
    """Trace-squared-over-det of the period map sampled on a lambda grid."""

    lambdas: np.ndarray
    tr2: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        tr2 = np.asarray(self.tr2, dtype=float)
        if lam.shape != tr2.shape or lam.ndim != 1:
            raise ValueError("lambda and tr2 arrays must be 1-d and congruent")
        lam = lam.copy()
        tr2 = tr2.copy()
        lam.flags.writeable = False
        tr2.flags.writeable = False
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "tr2", tr2)


def spectral_scan(
    gamma: ProjectiveCurve, lambda_grid, substeps: int = DEFAULT_SUBSTEPS
) -> SpectralScan:
    """Scan the spectral invariant over a grid of lambda values.

    All grid points ride one batched integration: the generator is linear
    in lambda, so the coefficient field is built once.
    """
    lam = np.atleast_1d(np.asarray(lambda_grid, dtype=float))
    h = np.pi / (substeps * gamma.n)
    b = lam[None, :, None, None] * _angle_b_half(gamma, substeps)[:, None, :, :]
    m = _rk4_transfer(b, h)
    tr = m[:, 0, 0] + m[:, 1, 1]
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    return SpectralScan(lambdas=lam, tr2=tr * tr / det)


def scan_to_csv(scan: SpectralScan, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "tr2"])
        for lam, val in zip(scan.lambdas, scan.tr2):
            writer.writerow([repr(float(lam)), repr(float(val))])


def scan_from_csv(path) -> SpectralScan:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["lambda", "tr2"]:
        raise ValueError("expected header 'lambda,tr2'")
    lam = np.array([float(r[0]) for r in rows[1:]])
    tr2 = np.array([float(r[1]) for r in rows[1:]])
    return SpectralScan(lambdas=lam, tr2=tr2)


def conjugator_affine(x: float, y: float, mu: float) -> np.ndarray:
    """Matrix fixing affine point x with eigenvalue 1 and y with eigenvalue mu.

    Explicitly (1/(x-y)) [[x - mu y, x y (mu - 1)], [1 - mu, x mu - y]],
    with determinant mu and trace 1 + mu.
    """
    return (1.0 / (x - y)) * np.array(
        [[x - mu * y, x * y * (mu - 1.0)], [1.0 - mu, x * mu - y]]
    )


def conjugator(
    gamma: ProjectiveCurve, delta: ProjectiveCurve, mu: float, t: float
) -> np.ndarray:
    """The matrix fixing gamma(t) with eigenvalue 1 and scaling delta(t) by mu.

    The affine-chart formula (conjugator_affine) is chart-equivariant since
    its eigen-data pins it uniquely, so it is evaluated in the chart
    centered between the two points and rotated back.  Raises Degenerate
    when the points coincide in RP^1.
    """
    chi_g = float(gamma.phi(t))
    chi_d = float(delta.phi(t))
    gap = wrap_half_pi(chi_g - chi_d)
    if abs(np.sin(chi_g - chi_d)) < 1e-12:
        raise Degenerate(f"curves meet at t = {t!r}: no conjugator")
    theta = chi_g - gap / 2.0
    x = np.tan(gap / 2.0)
    a_mid = conjugator_affine(x, -x, mu)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    return rot.T @ a_mid @ rot
