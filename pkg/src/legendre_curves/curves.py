"""Plane curves with a unit normal frame and their curvature pair.

A frame pair ``(gamma, nu)`` consists of a parametrized plane curve and a
unit vector field along it with ``gamma'(t) . nu(t) = 0`` everywhere.  The
moving frame is completed by ``mu = J(nu)``, the quarter rotation of ``nu``,
and the curvature pair is

    ell(t)  = nu'(t) . mu(t)
    beta(t) = gamma'(t) . mu(t)

``beta`` vanishes exactly at the singular points of ``gamma``; ``ell``
vanishes at inflection points.  The pair determines the curve up to a
rotation and a translation, which is what the reconstruction and signature
modules build on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import CurveError, LegendreError
from .exprs import ScalarFun, eval_jet_many, pretty_print
from .jets import TaylorJet, jet_sqrt

TWO_PI = 2.0 * math.pi


def moving_frame(nu_value):
    """Quarter anticlockwise rotation: mu = J(nu) = (-nu_2, nu_1)."""
    return (-nu_value[1], nu_value[0])


@dataclass
class LegendreCurve:
    """Curve plus unit frame, each component an evaluable scalar function."""

    x: ScalarFun
    y: ScalarFun
    nu_x: ScalarFun
    nu_y: ScalarFun
    domain: tuple[float, float]
    closed: bool = False

    @classmethod
    def from_exprs(cls, x: str, y: str, nu: Optional[tuple[str, str]] = None,
                   domain: tuple[float, float] = (0.0, TWO_PI),
                   closed: bool = False,
                   params: Optional[dict[str, float]] = None) -> "LegendreCurve":
        """Build a curve from expression text, deriving the frame if omitted.

        Omitting ``nu`` is only valid for regular curves; a curve with a
        singular point must supply its frame explicitly.
        """
        xf = ScalarFun.from_text(x, params)
        yf = ScalarFun.from_text(y, params)
        if nu is not None:
            nxf = ScalarFun.from_text(nu[0], params)
            nyf = ScalarFun.from_text(nu[1], params)
        else:
            nxf, nyf = derive_nu(xf, yf, domain)
        curve = cls(xf, yf, nxf, nyf, (float(domain[0]), float(domain[1])), bool(closed))
        if curve.closed:
            rep = check_closed(curve, max_order=1, tol=1e-9)
            if rep.closed_order < 1:
                raise CurveError("curve is flagged closed but is not C^1-closed "
                                 "at the endpoints")
        return curve

    # -- evaluation -----------------------------------------------------

    def gamma_jets(self, t0, order: int) -> tuple[TaylorJet, TaylorJet]:
        if self.x.ast is not None and self.y.ast is not None:
            jx, jy = eval_jet_many([self.x.ast, self.y.ast], t0, order)
            return jx, jy
        return self.x.jet(t0, order), self.y.jet(t0, order)

    def nu_jets(self, t0, order: int) -> tuple[TaylorJet, TaylorJet]:
        if self.nu_x.ast is not None and self.nu_y.ast is not None:
            jx, jy = eval_jet_many([self.nu_x.ast, self.nu_y.ast], t0, order)
            return jx, jy
        return self.nu_x.jet(t0, order), self.nu_y.jet(t0, order)

    def gamma(self, ts) -> np.ndarray:
        """Curve points, shape (..., 2)."""
        ts = np.asarray(ts, dtype=float)
        return np.stack([self.x.values(ts), self.y.values(ts)], axis=-1)

    def nu(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return np.stack([self.nu_x.values(ts), self.nu_y.values(ts)], axis=-1)

    # -- curvature ------------------------------------------------------

    def ell(self) -> ScalarFun:
        def jet_fn(t0, order):
            jx, jy = self.nu_jets(t0, order + 1)
            # mu = (-nu_y, nu_x); ell = nu' . mu
            return jy.derivative() * jx.truncate(order) - jx.derivative() * jy.truncate(order)

        return ScalarFun(jet_fn, name="ell")

    def beta(self) -> ScalarFun:
        def jet_fn(t0, order):
            gx, gy = self.gamma_jets(t0, order + 1)
            jnx, jny = self.nu_jets(t0, order)
            return gy.derivative() * jnx - gx.derivative() * jny

        return ScalarFun(jet_fn, name="beta")

    def curvature_pair(self) -> "CurvaturePair":
        return CurvaturePair(self.ell(), self.beta(), self.domain, self.closed)

    def is_expression_backed(self) -> bool:
        return all(f.ast is not None for f in (self.x, self.y, self.nu_x, self.nu_y))

    def spec_dict(self) -> dict:
        """Curve spec file content (JSON syntax); expression-backed only."""
        if not self.is_expression_backed():
            raise CurveError("curve components are not expression-backed; "
                             "cannot emit a spec file")
        return {
            "x": pretty_print(self.x.ast),
            "y": pretty_print(self.y.ast),
            "nu": [pretty_print(self.nu_x.ast), pretty_print(self.nu_y.ast)],
            "domain": [self.domain[0], self.domain[1]],
            "closed": self.closed,
        }


@dataclass
class CurvaturePair:
    """The evaluable pair (ell, beta), from a curve or from raw expressions."""

    ell: ScalarFun
    beta: ScalarFun
    domain: tuple[float, float]
    closed: bool = False

    @classmethod
    def from_curve(cls, curve: LegendreCurve) -> "CurvaturePair":
        return curve.curvature_pair()

    @classmethod
    def from_exprs(cls, ell: str, beta: str, domain: tuple[float, float],
                   closed: bool = False,
                   params: Optional[dict[str, float]] = None) -> "CurvaturePair":
        return cls(ScalarFun.from_text(ell, params), ScalarFun.from_text(beta, params),
                   (float(domain[0]), float(domain[1])), bool(closed))

    def __call__(self, t: float) -> tuple[float, float]:
        return self.ell(t), self.beta(t)


def curvature(curve: LegendreCurve, t: float) -> tuple[float, float]:
    """The curvature pair (ell, beta) at one parameter value."""
    pair = curve.curvature_pair()
    return pair(t)


# -- checks -----------------------------------------------------------------


@dataclass(frozen=True)
class LegendreReport:
    ok: bool
    max_defect: float
    max_norm_defect: float


def check_legendre(curve, samples: int = 2048, tol: float = 1e-9) -> LegendreReport:
    """Verify gamma' . nu = 0 and |nu| = 1 on a uniform grid."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    a, b = curve.domain
    ts = np.linspace(a, b, samples)
    try:
        gx, gy = curve.gamma_jets(ts, 1)
        nx, ny = curve.nu_jets(ts, 0)
    except LegendreError as err:
        t_bad = _locate_failure(curve, ts)
        raise CurveError(f"expression evaluation failed at t={t_bad!r}: {err}") from err
    dgx = np.broadcast_to(np.asarray(gx.coeffs[1], dtype=float), ts.shape)
    dgy = np.broadcast_to(np.asarray(gy.coeffs[1], dtype=float), ts.shape)
    nxv = np.broadcast_to(np.asarray(nx.coeffs[0], dtype=float), ts.shape)
    nyv = np.broadcast_to(np.asarray(ny.coeffs[0], dtype=float), ts.shape)
    tangency = np.abs(dgx * nxv + dgy * nyv)
    norm_defect = np.abs(np.hypot(nxv, nyv) - 1.0)
    max_defect = float(np.max(tangency))
    max_norm = float(np.max(norm_defect))
    return LegendreReport(ok=(max_defect <= tol and max_norm <= tol),
                          max_defect=max_defect, max_norm_defect=max_norm)


def _locate_failure(curve, ts):
    for t in ts:
        try:
            curve.gamma_jets(float(t), 1)
            curve.nu_jets(float(t), 0)
        except LegendreError:
            return float(t)
    return None


def derive_nu(x, y, domain: tuple[float, float],
              grid_n: int = 2048, tol: float = 1e-9) -> tuple[ScalarFun, ScalarFun]:
    """Frame of a regular curve: nu = J(gamma') / |gamma'|, so beta = -|gamma'|.

    The squared speed is swept on a grid and its interior minima are
    polished, so a singular point between grid nodes is still caught; a
    singular curve must supply its frame as data.
    """
    xf = ScalarFun.wrap(x)
    yf = ScalarFun.wrap(y)

    def speed2_jet(t0, order):
        dxj = xf.jet(t0, order + 1).derivative()
        dyj = yf.jet(t0, order + 1).derivative()
        return dxj * dxj + dyj * dyj

    speed2 = ScalarFun(speed2_jet, name="speed^2")
    from .signatures import _refined_min_sq  # deferred: avoids a module cycle
    if _refined_min_sq(speed2, domain, grid_n) <= tol * tol:
        raise CurveError("curve has a singular point; supply ν explicitly")

    def make(component: str) -> ScalarFun:
        def jet_fn(t0, order):
            dxj = xf.jet(t0, order + 1).derivative()
            dyj = yf.jet(t0, order + 1).derivative()
            norm = jet_sqrt(dxj * dxj + dyj * dyj)
            return (-dyj if component == "x" else dxj) / norm

        return ScalarFun(jet_fn, name=f"nu_{component}")

    return make("x"), make("y")


@dataclass(frozen=True)
class ImmersionReport:
    ok: bool
    witnesses: tuple[float, ...]
    min_combined: float


def is_immersion(curve, samples: int = 2048) -> ImmersionReport:
    """Check (ell, beta) != (0, 0) everywhere; witnesses are common zeros."""
    from .signatures import find_zeros  # local import avoids a module cycle

    pair = curve.curvature_pair()
    a, b = curve.domain
    ts = np.linspace(a, b, samples)
    ev = pair.ell.values(ts)
    bv = pair.beta.values(ts)
    combined = np.maximum(np.abs(ev), np.abs(bv))
    min_combined = float(np.min(combined))
    scale_e = float(np.max(np.abs(ev)))
    scale_b = float(np.max(np.abs(bv)))

    witnesses: list[float] = []
    coincide = 1e-8
    if scale_e <= 1e-10 * max(scale_b, 1e-300) and scale_b <= 1e-10 * max(scale_e, 1e-300):
        # both identically zero on the grid: every point degenerate
        return ImmersionReport(False, tuple(float(t) for t in ts[:: max(1, samples // 8)]),
                               min_combined)
    if scale_e <= 1e-10 * scale_b:
        witnesses = list(find_zeros(pair.beta, curve.domain, grid_n=samples))
    elif scale_b <= 1e-10 * scale_e:
        witnesses = list(find_zeros(pair.ell, curve.domain, grid_n=samples))
    else:
        ell_zeros = find_zeros(pair.ell, curve.domain, grid_n=samples)
        beta_zeros = find_zeros(pair.beta, curve.domain, grid_n=samples)
        for r in ell_zeros:
            if any(abs(r - s) <= coincide for s in beta_zeros):
                witnesses.append(r)
    witnesses = sorted(set(witnesses))
    return ImmersionReport(ok=(not witnesses), witnesses=tuple(witnesses),
                           min_combined=min_combined)


@dataclass(frozen=True)
class ClosedReport:
    closed_order: int           # -1 when not even C^0-closed
    checked_order: int
    closed_to_checked_order: bool

    def describe(self) -> str:
        if self.closed_order < 0:
            return "not C0-closed"
        if self.closed_to_checked_order:
            return f"closed to checked order (C^{self.checked_order})"
        return f"C^{self.closed_order}-closed but not C^{self.closed_order + 1}"


def check_closed(curve, max_order: int = 8, tol: float = 1e-8) -> ClosedReport:
    """Compare one-sided derivatives of (gamma, nu) at the two endpoints.

    Each order is compared with a mixed absolute/relative tolerance, since
    high-order derivatives of oscillatory components grow like n^k and an
    absolute comparison would drown in float rounding.
    """
    a, b = curve.domain
    ja = list(curve.gamma_jets(a, max_order)) + list(curve.nu_jets(a, max_order))
    jb = list(curve.gamma_jets(b, max_order)) + list(curve.nu_jets(b, max_order))
    closed_order = -1
    for k in range(max_order + 1):
        ok = True
        for ca, cb in zip(ja, jb):
            da = float(ca.derivative_value(k))
            db = float(cb.derivative_value(k))
            if abs(da - db) > tol * (1.0 + max(abs(da), abs(db))):
                ok = False
                break
        if not ok:
            break
        closed_order = k
    return ClosedReport(closed_order, max_order, closed_order == max_order)


# -- curve spec files --------------------------------------------------------


def load_curve(source) -> LegendreCurve:
    """Load a curve spec: a dict, JSON text, or a path to a JSON file.

    Format: {"x": str, "y": str, "nu": [str, str] (optional),
             "domain": [a, b], "closed": bool, "params": {name: number}}
    """
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = dict(source)
    try:
        x = data["x"]
        y = data["y"]
        domain = tuple(float(v) for v in data["domain"])
    except KeyError as missing:
        raise CurveError(f"curve spec is missing field {missing}") from None
    nu = data.get("nu")
    if nu is not None:
        nu = (str(nu[0]), str(nu[1]))
    params = data.get("params") or None
    return LegendreCurve.from_exprs(x, y, nu=nu, domain=domain,
                                    closed=bool(data.get("closed", False)),
                                    params=params)


def dump_curve(curve: LegendreCurve) -> str:
    return json.dumps(curve.spec_dict(), indent=2)
