"""Two-dimensional holomorphic germs with a semi-indifferent fixed point.

A :class:`Germ2` is a pair of truncated series fixing the origin whose
linear part has one eigenvalue ``lam`` on the unit circle and one
eigenvalue ``mu`` strictly inside.  Construction validates the spectrum,
diagonalizes the linear part (the change of basis is kept in ``frame``),
and stores the series in the diagonal frame, so downstream solvers can
assume ``df_0 = diag(lam, mu)``.

Forward orbits evaluate the series; backward orbits run a Newton solve on
the pair seeded by the inverse linear part.  Fixed points are classified
as semi-parabolic (with the rotation data ``p/q`` and the multiplicity),
Brjuno-certified semi-Siegel, semi-Cremer evidence, or unresolved.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BackwardStepError, SeriesDomainError, SpectrumError
from .rotation import (
    CONVERGING,
    DIVERGING,
    RotationArithmetic,
)
from .series import TruncatedSeries2, series_from_json

__all__ = ["Germ2", "FixedPointClass", "OrbitResult", "classify", "iterate"]

UNIT_CIRCLE_TOL = 1e-12
ROOT_OF_UNITY_TOL = 1e-10
DEFAULT_ROOT_BUDGET = 512


@dataclass(frozen=True)
class Germ2:
    """A germ (x, y) -> (f1(x, y), f2(x, y)) in its diagonal frame."""

    f1: TruncatedSeries2
    f2: TruncatedSeries2
    lam: complex
    mu: complex
    frame: np.ndarray  # columns are the eigenvectors in input coordinates

    @property
    def degree_cap(self):
        return self.f1.degree_cap

    def linear_part(self):
        return np.array(
            [
                [self.f1[1, 0], self.f1[0, 1]],
                [self.f2[1, 0], self.f2[0, 1]],
            ]
        )

    def eval(self, x, y):
        return self.f1.eval(x, y), self.f2.eval(x, y)

    def jacobian(self):
        """The four partial-derivative series, row major."""
        return (
            self.f1.partial_x(),
            self.f1.partial_y(),
            self.f2.partial_x(),
            self.f2.partial_y(),
        )

    def to_json(self):
        return {
            "lambda": {"re": self.lam.real, "im": self.lam.imag},
            "mu": {"re": self.mu.real, "im": self.mu.imag},
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json(),
        }


def new_germ(f1, f2):
    """Validate and diagonalize a germ given by two series.

    Both series must vanish at the origin and the linear part must be
    invertible with exactly one eigenvalue within ``1e-12`` of the unit
    circle and the other strictly inside.  If the linear part is not
    already diagonal the whole germ is conjugated into the eigenbasis.
    """
    if f1.degree_cap != f2.degree_cap:
        raise SeriesDomainError("germ components need matching degree caps")
    if f1[0, 0] != 0 or f2[0, 0] != 0:
        raise SeriesDomainError("germ must fix the origin")
    L = np.array([[f1[1, 0], f1[0, 1]], [f2[1, 0], f2[0, 1]]])
    if abs(np.linalg.det(L)) < 1e-14:
        raise SpectrumError("linear part is not invertible")
    if L[1, 0] == 0 and L[0, 1] == 0:
        evals = np.array([L[0, 0], L[1, 1]])
        evecs = np.eye(2, dtype=complex)
    else:
        evals, evecs = np.linalg.eig(L)
    moduli = np.abs(evals)
    neutral = [i for i in range(2) if abs(moduli[i] - 1.0) < UNIT_CIRCLE_TOL]
    inside = [i for i in range(2) if moduli[i] < 1.0 - UNIT_CIRCLE_TOL]
    if len(neutral) != 1 or len(inside) != 1 or neutral[0] == inside[0]:
        raise SpectrumError(
            "spectrum is not semi-indifferent: "
            f"|eigenvalues| = ({moduli[0]:.6f}, {moduli[1]:.6f})"
        )
    order = [neutral[0], inside[0]]
    lam = complex(evals[order[0]])
    mu = complex(evals[order[1]])
    P = evecs[:, order]
    if np.allclose(P, np.eye(2), atol=0.0):
        g1, g2 = f1, f2
        P = np.eye(2, dtype=complex)
    else:
        g1, g2 = _conjugate_linear(f1, f2, P)
    return Germ2(f1=g1, f2=g2, lam=lam, mu=mu, frame=P)


def _conjugate_linear(f1, f2, P):
    """P^{-1} o (f1, f2) o P for an invertible 2x2 matrix P."""
    cap = f1.degree_cap
    Pinv = np.linalg.inv(P)
    x = TruncatedSeries2.var_x(cap)
    y = TruncatedSeries2.var_y(cap)
    u = x * P[0, 0] + y * P[0, 1]
    v = x * P[1, 0] + y * P[1, 1]
    h1 = f1.subst_pair(u, v)
    h2 = f2.subst_pair(u, v)
    g1 = h1 * Pinv[0, 0] + h2 * Pinv[0, 1]
    g2 = h1 * Pinv[1, 0] + h2 * Pinv[1, 1]
    return g1, g2


@dataclass(frozen=True)
class FixedPointClass:
    """Classification outcome together with the diagnostics that led to it.

    ``kind`` is one of ``semi_parabolic``, ``semi_siegel_certified``,
    ``semi_cremer_evidence``, ``irrational_unresolved``.  For the
    semi-parabolic kind ``p``, ``q`` and ``nu`` are set.
    """

    kind: str
    p: int | None = None
    q: int | None = None
    nu: int | None = None
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class OrbitResult:
    points: tuple
    exit_index: int | None
    failure_index: int | None = None

    @property
    def stayed(self):
        return self.exit_index is None and self.failure_index is None


def minimal_root_order(lam, budget=DEFAULT_ROOT_BUDGET, tol=ROOT_OF_UNITY_TOL):
    """Smallest q <= budget with |lam^q - 1| < tol, or None."""
    power = 1.0 + 0.0j
    for q in range(1, budget + 1):
        power *= lam
        if abs(power - 1.0) < tol:
            return q
    return None


def classify(g, r=None, budget=DEFAULT_ROOT_BUDGET, cf_terms=25):
    """Classify the fixed point of a validated germ.

    Root-of-unity eigenvalues (minimal order within ``budget``) lead to
    the semi-parabolic branch, which computes the multiplicity from the
    restriction to the center direction.  Otherwise the continued
    fraction of the rotation number (supplied as ``r`` or expanded from
    ``lam``) decides between Brjuno-certified semi-Siegel, semi-Cremer
    evidence, and unresolved.
    """
    from .manifolds import center_manifold_series, restrict_to_center
    from .normalform import semiparabolic_multiplicity

    q = minimal_root_order(g.lam, budget)
    if q is not None:
        theta = cmath.phase(g.lam) / (2 * math.pi) % 1.0
        p = round(theta * q) % q
        if q > 1 and math.gcd(p, q) != 1:
            raise SpectrumError(f"inconsistent root-of-unity data p={p}, q={q}")
        cm = center_manifold_series(g, g.degree_cap)
        h = restrict_to_center(g, cm)
        nu, lead = semiparabolic_multiplicity(h, p, q)
        return FixedPointClass(
            kind="semi_parabolic",
            p=p,
            q=q,
            nu=nu,
            diagnostics={"leading_coeff": lead, "root_tol": ROOT_OF_UNITY_TOL},
        )
    if r is None:
        theta = cmath.phase(g.lam) / (2 * math.pi) % 1.0
        r = RotationArithmetic.from_real(theta, depth=cf_terms + 2)
    terms = min(cf_terms, r.depth - 1)
    if terms < 1:
        return FixedPointClass(
            kind="irrational_unresolved",
            diagnostics={"reason": "no convergents available"},
        )
    report = r.brjuno_sum(terms)
    diag = {
        "brjuno_verdict": report.verdict,
        "brjuno_partial_sum": report.partial_sums[-1],
        "terms": terms,
    }
    if report.verdict == CONVERGING:
        return FixedPointClass(kind="semi_siegel_certified", diagnostics=diag)
    if report.verdict == DIVERGING:
        return FixedPointClass(kind="semi_cremer_evidence", diagnostics=diag)
    return FixedPointClass(kind="irrational_unresolved", diagnostics=diag)


def iterate(g, z, n, trap_radius, newton_tol=1e-12, newton_max=50):
    """Orbit of z = (x, y) under g (n > 0) or its local inverse (n < 0).

    Stops at the first exit from the closed ball of radius
    ``trap_radius`` and reports the exit index.  Backward steps solve
    g(w) = target by Newton, seeded with the inverse linear part; a
    non-convergent step sets ``failure_index`` instead of raising.
    """
    x, y = complex(z[0]), complex(z[1])
    if math.hypot(abs(x), abs(y)) > trap_radius:
        raise SeriesDomainError("start point lies outside the trap ball")
    pts = [(x, y)]
    if n == 0:
        return OrbitResult(tuple(pts), None)
    steps = abs(n)
    backward = n < 0
    j11, j12, j21, j22 = g.jacobian()
    L = g.linear_part()
    Linv = np.linalg.inv(L)
    for k in range(1, steps + 1):
        if backward:
            try:
                x, y = _newton_step(
                    g, (j11, j12, j21, j22), Linv, x, y, newton_tol, newton_max
                )
            except BackwardStepError:
                return OrbitResult(tuple(pts), None, failure_index=k)
        else:
            x, y = g.eval(x, y)
        pts.append((x, y))
        if math.hypot(abs(x), abs(y)) > trap_radius:
            return OrbitResult(tuple(pts), k)
    return OrbitResult(tuple(pts), None)


def _newton_step(g, jac, Linv, tx, ty, tol, max_iter):
    """Solve g(w) = (tx, ty) for w near the linear preimage."""
    j11, j12, j21, j22 = jac
    wx = Linv[0, 0] * tx + Linv[0, 1] * ty
    wy = Linv[1, 0] * tx + Linv[1, 1] * ty
    for _ in range(max_iter):
        fx, fy = g.eval(wx, wy)
        rx, ry = fx - tx, fy - ty
        if max(abs(rx), abs(ry)) < tol:
            return wx, wy
        a = j11.eval(wx, wy)
        b = j12.eval(wx, wy)
        c = j21.eval(wx, wy)
        d = j22.eval(wx, wy)
        det = a * d - b * c
        if det == 0:
            break
        wx -= (d * rx - b * ry) / det
        wy -= (-c * rx + a * ry) / det
    raise BackwardStepError(step_index=-1)


def germ_from_json(obj):
    """Build a Germ2 from the germ JSON schema.

    ``lambda`` and ``mu`` accept ``{"re":  , "im": }``, ``{"angle": t}``
    (turns), or ``{"angle_quotients": [...]}`` (continued fraction of the
    rotation number in turns).  ``f1``/``f2`` are series JSON; when they
    are omitted the germ is the linear map diag(lambda, mu) at the given
    degree cap (key ``degree_cap``, default 16).
    """
    lam = _complex_from_json(obj["lambda"])
    mu = _complex_from_json(obj["mu"])
    if "f1" in obj and "f2" in obj:
        f1 = series_from_json(obj["f1"])
        f2 = series_from_json(obj["f2"])
    else:
        cap = int(obj.get("degree_cap", 16))
        f1 = TruncatedSeries2.from_terms([(1, 0, lam)], cap)
        f2 = TruncatedSeries2.from_terms([(0, 1, mu)], cap)
    return new_germ(f1, f2)


def _complex_from_json(obj):
    if "re" in obj:
        return complex(obj["re"], obj.get("im", 0.0))
    if "angle" in obj:
        return cmath.exp(2j * math.pi * float(obj["angle"]))
    if "angle_quotients" in obj:
        r = RotationArithmetic.from_quotients(obj["angle_quotients"])
        return cmath.exp(2j * math.pi * r.alpha)
    if "root_of_unity" in obj:
        p, q = obj["root_of_unity"]
        return cmath.exp(2j * math.pi * p / q)
    raise SeriesDomainError(f"unrecognized complex value spec: {obj!r}")
