"""Norm expression trees on R^n.

A space is a :class:`NormExpr`: a p-norm leaf, an absolute sum of two
spaces under a 2-d gauge, a pullback of a space through a linear map
(possibly a seminorm), or a pointwise max / sum of same-dimension terms.

Every node evaluates its (semi)norm, produces support functionals
(subgradients), projects to the unit sphere, and computes dual norms:
exactly where a closed form exists (p-norms, absolute sums of exact duals,
invertible or norm-preserving pullbacks), otherwise as a certified bracket
(witness lower bound, preimage/interchange upper bound).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NormDefinitionError, UnitVectorError
from .gauges import AbsoluteGauge, LpGauge

__all__ = [
    "NormExpr",
    "Lp",
    "AbsoluteSum",
    "Pullback",
    "MaxOf",
    "SumOf",
    "DualValue",
    "AxiomReport",
    "check_norm_axioms",
    "attaining_direction",
]

_ZERO_TOL = 1e-14


@dataclass(frozen=True)
class DualValue:
    """Dual-norm evaluation: certified bracket [lower, upper].

    ``exact`` means the two endpoints coincide by a closed form. ``value``
    is the certified upper endpoint (equal to ``lower`` when exact), so it
    is always sound in Holder-type estimates.
    """

    lower: float
    upper: float
    exact: bool
    witness: object = None

    @property
    def value(self):
        return self.upper

    @property
    def width(self):
        return self.upper - self.lower


@dataclass(frozen=True)
class AxiomReport:
    homogeneity_error: float
    triangle_violation: float
    kernel_smin: float
    is_norm: bool


class NormExpr:
    """Base class for norm expression nodes."""

    dim = None

    # -- basic evaluation ------------------------------------------------

    def norm(self, v):
        """(Semi)norm of ``v``; batched over leading axes."""
        raise NotImplementedError

    def support(self, u):
        """A subgradient g at u: g(u) = N(u) and g(v) <= N(v) for all v."""
        raise NotImplementedError

    def support_is_unique(self, u):
        """Whether the subgradient at u is provably unique (conservative)."""
        raise NotImplementedError

    def dual(self, f):
        """Dual norm of the functional ``f`` as a :class:`DualValue`."""
        raise NotImplementedError

    def dual_space(self):
        """A NormExpr for the dual norm when a closed form exists, else None."""
        return None

    def kernel_matrix(self):
        """A matrix K with null(K) = {v : N(v) = 0}."""
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError

    # -- shared helpers ---------------------------------------------------

    def _check(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != self.dim:
            raise DimensionMismatch(
                f"vector of length {v.shape[-1]} fed to {self.describe()} (dim {self.dim})"
            )
        return v

    def unit(self, v):
        """Project ``v`` to the unit sphere; error if too close to the kernel."""
        v = self._check(np.atleast_1d(np.asarray(v, dtype=float)))
        n = float(self.norm(v))
        if n < 1e-12 * max(1.0, float(np.max(np.abs(v)))):
            raise UnitVectorError("cannot normalize a vector with (semi)norm ~ 0")
        return v / n

    def require_unit(self, u, tol=1e-8):
        u = self._check(u)
        n = float(self.norm(u))
        if abs(n - 1.0) > tol:
            raise UnitVectorError(f"expected a unit vector, got norm {n!r}")
        return u

    def is_norm(self, tol=1e-10):
        """Definiteness check: (verdict, smallest singular value of the
        stacked kernel matrix)."""
        k = self.kernel_matrix()
        if k.shape[0] < self.dim:
            return False, 0.0
        smin = float(np.linalg.svd(k, compute_uv=False)[-1])
        return smin > tol, smin

    def _dual_lower(self, f, budget=800):
        """Witnessed lower bound for the dual norm: deterministic ascent of
        f . x over the unit sphere."""
        f = self._check(f)
        starts = []
        fscale = float(np.max(np.abs(f)))
        if fscale > 0:
            try:
                starts.append(self.unit(f))
            except UnitVectorError:
                pass
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = 1.0 if f[i] >= 0 else -1.0
            try:
                starts.append(self.unit(e))
            except UnitVectorError:
                continue
        ones = np.where(f >= 0, 1.0, -1.0)
        try:
            starts.append(self.unit(ones))
        except UnitVectorError:
            pass
        best_v = 0.0
        best_x = None
        evals = 0
        for x in starts:
            v = float(f @ x)
            step = 0.5
            while step > 1e-9 and evals < budget:
                moved = False
                for i in range(self.dim):
                    for sgn in (1.0, -1.0):
                        cand = x.copy()
                        cand[i] += sgn * step
                        try:
                            cand = self.unit(cand)
                        except UnitVectorError:
                            continue
                        cv = float(f @ cand)
                        evals += 1
                        if cv > v + 1e-15:
                            x, v = cand, cv
                            moved = True
                    if evals >= budget:
                        break
                if not moved:
                    step *= 0.5
            if v > best_v:
                best_v, best_x = v, x
            if evals >= budget:
                break
        return best_v, best_x


class Lp(NormExpr):
    """The p-norm on R^dim, 1 <= p <= inf."""

    def __init__(self, p, dim):
        p = float(p)
        dim = int(dim)
        if not (p >= 1.0):
            raise NormDefinitionError(f"p must be >= 1, got {p}")
        if dim < 1:
            raise NormDefinitionError(f"dim must be >= 1, got {dim}")
        self.p = p
        self.dim = dim

    def norm(self, v):
        v = self._check(v)
        if np.isinf(self.p):
            return np.max(np.abs(v), axis=-1)
        if self.p == 1.0:
            return np.sum(np.abs(v), axis=-1)
        if self.p == 2.0:
            return np.sqrt(np.sum(v * v, axis=-1))
        return np.sum(np.abs(v) ** self.p, axis=-1) ** (1.0 / self.p)

    def support(self, u):
        u = self._check(u)
        n = float(self.norm(u))
        if n == 0.0:
            return np.zeros(self.dim)
        if np.isinf(self.p):
            i = int(np.argmax(np.abs(u)))
            g = np.zeros(self.dim)
            g[i] = 1.0 if u[i] >= 0 else -1.0
            return g
        if self.p == 1.0:
            return np.sign(u)
        w = u / n
        return np.sign(w) * np.abs(w) ** (self.p - 1.0)

    def support_is_unique(self, u):
        u = self._check(u)
        a = np.abs(u)
        m = float(np.max(a))
        if m == 0.0:
            return False
        if np.isinf(self.p):
            second = float(np.partition(a, -2)[-2]) if self.dim > 1 else -np.inf
            return m - second > 1e-9 * m
        if self.p == 1.0:
            return bool(np.min(a) > 1e-9 * m)
        return True

    def dual_space(self):
        if np.isinf(self.p):
            return Lp(1.0, self.dim)
        if self.p == 1.0:
            return Lp(np.inf, self.dim)
        return Lp(self.p / (self.p - 1.0), self.dim)

    def dual(self, f):
        f = self._check(f)
        d = self.dual_space()
        v = float(d.norm(f))
        witness = d.support(f) if v > 0 else None
        return DualValue(v, v, True, witness)

    def kernel_matrix(self):
        return np.eye(self.dim)

    def describe(self):
        p = "inf" if np.isinf(self.p) else f"{self.p:g}"
        return f"lp(p={p}, dim={self.dim})"


class AbsoluteSum(NormExpr):
    """|(x, z)| = gauge(||x||_left, ||z||_right) on R^(left.dim + right.dim)."""

    def __init__(self, gauge, left, right):
        if not isinstance(gauge, AbsoluteGauge):
            raise NormDefinitionError("gauge must be an AbsoluteGauge")
        self.gauge = gauge
        self.left = left
        self.right = right
        self.dim = left.dim + right.dim

    def _split(self, v):
        k = self.left.dim
        return v[..., :k], v[..., k:]

    def norm(self, v):
        x, z = self._split(self._check(v))
        return self.gauge.value(self.left.norm(x), self.right.norm(z))

    def support(self, u):
        x, z = self._split(self._check(u))
        nx = float(self.left.norm(x))
        nz = float(self.right.norm(z))
        if nx == 0.0 and nz == 0.0:
            return np.zeros(self.dim)
        al, be = self.gauge.subgradient(nx, nz)
        gl = self.left.support(x) if nx > 0 else np.zeros(self.left.dim)
        gr = self.right.support(z) if nz > 0 else np.zeros(self.right.dim)
        return np.concatenate([al * gl, be * gr])

    def support_is_unique(self, u):
        x, z = self._split(self._check(u))
        nx = float(self.left.norm(x))
        nz = float(self.right.norm(z))
        if nx == 0.0 and nz == 0.0:
            return False
        if not self.gauge.subdiff_is_singleton(nx, nz):
            return False
        al, be = self.gauge.subgradient(nx, nz)
        if nx > 0:
            if not self.left.support_is_unique(x):
                return False
        elif al > _ZERO_TOL:
            return False
        if nz > 0:
            if not self.right.support_is_unique(z):
                return False
        elif be > _ZERO_TOL:
            return False
        return True

    def dual_space(self):
        dl = self.left.dual_space()
        dr = self.right.dual_space()
        if dl is None or dr is None:
            return None
        return AbsoluteSum(self.gauge.dual(), dl, dr)

    def dual(self, f):
        fx, fz = self._split(self._check(f))
        dl = self.left.dual(fx)
        dr = self.right.dual(fz)
        g = self.gauge.dual()
        lo = float(g.value(dl.lower, dr.lower))
        hi = float(g.value(dl.upper, dr.upper))
        return DualValue(lo, hi, dl.exact and dr.exact, None)

    def kernel_matrix(self):
        kl = self.left.kernel_matrix()
        kr = self.right.kernel_matrix()
        out = np.zeros((kl.shape[0] + kr.shape[0], self.dim))
        out[: kl.shape[0], : self.left.dim] = kl
        out[kl.shape[0] :, self.left.dim :] = kr
        return out

    def describe(self):
        return (
            f"abs-sum({self.gauge.describe()}, {self.left.describe()}, "
            f"{self.right.describe()})"
        )


class Pullback(NormExpr):
    """N(v) = inner(A v); a seminorm unless A is injective.

    ``matrix`` has shape (inner.dim, dim): it maps ambient coordinates into
    the inner space.
    """

    def __init__(self, matrix, inner):
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2:
            raise NormDefinitionError("pullback matrix must be 2-d")
        if a.shape[0] != inner.dim:
            raise DimensionMismatch(
                f"pullback matrix has {a.shape[0]} rows, inner space dim {inner.dim}"
            )
        self.matrix = a
        self.inner = inner
        self.dim = a.shape[1]
        self._square_inv = None
        if a.shape[0] == a.shape[1]:
            try:
                cond = np.linalg.cond(a)
                if np.isfinite(cond) and cond < 1e12:
                    self._square_inv = np.linalg.inv(a)
            except np.linalg.LinAlgError:
                pass

    def norm(self, v):
        v = self._check(v)
        return self.inner.norm(v @ self.matrix.T)

    def support(self, u):
        u = self._check(u)
        return self.matrix.T @ self.inner.support(self.matrix @ u)

    def support_is_unique(self, u):
        u = self._check(u)
        return self.inner.support_is_unique(self.matrix @ u)

    def dual_space(self):
        if self._square_inv is None:
            return None
        di = self.inner.dual_space()
        if di is None:
            return None
        return Pullback(self._square_inv.T, di)

    def _min_preimage_dual(self, f):
        """min ||g||_inner-dual subject to matrix^T g = f, as (value, exact).

        Returns (None, False) if f is not in the row space (dual norm +inf).
        """
        a_t = self.matrix.T  # (dim, inner_dim)
        g0, *_ = np.linalg.lstsq(a_t, f, rcond=None)
        resid = float(np.max(np.abs(a_t @ g0 - f)))
        if resid > 1e-9 * max(1.0, float(np.max(np.abs(f)))):
            return None, False
        inner = self.inner
        if isinstance(inner, Lp) and inner.p == 2.0:
            # least-squares minimal l2 preimage is the exact dual value
            return float(np.linalg.norm(g0)), True
        if isinstance(inner, Lp) and (np.isinf(inner.p) or inner.p == 1.0):
            from scipy.optimize import linprog

            m = self.matrix.shape[0]
            if np.isinf(inner.p):
                # dual is l1: min sum(t), -t <= g <= t, A^T g = f
                c = np.concatenate([np.zeros(m), np.ones(m)])
                a_ub = np.block(
                    [[np.eye(m), -np.eye(m)], [-np.eye(m), -np.eye(m)]]
                )
                b_ub = np.zeros(2 * m)
                a_eq = np.concatenate([a_t, np.zeros((self.dim, m))], axis=1)
                bounds = [(None, None)] * m + [(0, None)] * m
            else:
                # dual is linf: min t, -t <= g_i <= t, A^T g = f
                c = np.concatenate([np.zeros(m), [1.0]])
                a_ub = np.block(
                    [[np.eye(m), -np.ones((m, 1))], [-np.eye(m), -np.ones((m, 1))]]
                )
                b_ub = np.zeros(2 * m)
                a_eq = np.concatenate([a_t, np.zeros((self.dim, 1))], axis=1)
                bounds = [(None, None)] * m + [(0, None)]
            res = linprog(
                c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=f, bounds=bounds,
                method="highs",
            )
            if res.status == 0:
                return float(res.fun), True
            return None, False
        return float(self.inner.dual(g0).upper), False

    def dual(self, f):
        f = self._check(f)
        if self._square_inv is not None:
            g = self._square_inv.T @ f
            inner_val = self.inner.dual(g)
            return DualValue(inner_val.lower, inner_val.upper, inner_val.exact, None)
        upper, exact = self._min_preimage_dual(f)
        if upper is None:
            return DualValue(np.inf, np.inf, False, None)
        if exact:
            return DualValue(upper, upper, True, None)
        lower, wit = self._dual_lower(f)
        return DualValue(min(lower, upper), upper, False, wit)

    def kernel_matrix(self):
        return self.inner.kernel_matrix() @ self.matrix

    def describe(self):
        r, c = self.matrix.shape
        return f"pullback({r}x{c}, {self.inner.describe()})"


class _Combine(NormExpr):
    def __init__(self, terms):
        terms = tuple(terms)
        if len(terms) < 1:
            raise NormDefinitionError("need at least one term")
        dim = terms[0].dim
        for t in terms[1:]:
            if t.dim != dim:
                raise DimensionMismatch("all terms must share the ambient dimension")
        self.terms = terms
        self.dim = dim

    def dual(self, f):
        f = self._check(f)
        upper = np.inf
        for t in self.terms:
            upper = min(upper, t.dual(f).upper)
        lower, wit = self._dual_lower(f)
        return DualValue(min(lower, upper), upper, False, wit)


class MaxOf(_Combine):
    """Pointwise maximum of same-dimension (semi)norm terms."""

    def norm(self, v):
        v = self._check(v)
        return np.max(np.stack([t.norm(v) for t in self.terms]), axis=0)

    def _active(self, u, tol=1e-9):
        vals = [float(t.norm(u)) for t in self.terms]
        m = max(vals)
        for i, val in enumerate(vals):
            if val >= m - tol * max(1.0, m):
                return i, vals
        return 0, vals

    def support(self, u):
        u = self._check(u)
        i, _ = self._active(u)
        return self.terms[i].support(u)

    def support_is_unique(self, u):
        u = self._check(u)
        i, vals = self._active(u)
        m = vals[i]
        near = [j for j, v in enumerate(vals) if v >= m - 1e-9 * max(1.0, m)]
        if len(near) > 1:
            return False
        return self.terms[i].support_is_unique(u)

    def kernel_matrix(self):
        return np.concatenate([t.kernel_matrix() for t in self.terms], axis=0)

    def describe(self):
        return "max(" + ", ".join(t.describe() for t in self.terms) + ")"


class SumOf(_Combine):
    """Pointwise sum of same-dimension (semi)norm terms."""

    def norm(self, v):
        v = self._check(v)
        return np.sum(np.stack([t.norm(v) for t in self.terms]), axis=0)

    def support(self, u):
        u = self._check(u)
        return np.sum(np.stack([t.support(u) for t in self.terms]), axis=0)

    def support_is_unique(self, u):
        u = self._check(u)
        for t in self.terms:
            # a term vanishing at u has the whole dual ball as subdifferential
            if float(t.norm(u)) <= 1e-12:
                return False
            if not t.support_is_unique(u):
                return False
        return True

    def kernel_matrix(self):
        return np.concatenate([t.kernel_matrix() for t in self.terms], axis=0)

    def describe(self):
        return "sum(" + ", ".join(t.describe() for t in self.terms) + ")"


def attaining_direction(expr, f):
    """A unit vector x with f . x = dual norm of f, when the dual space has
    a closed form; otherwise None."""
    d = expr.dual_space()
    if d is None:
        return None
    g = d.support(np.asarray(f, dtype=float))
    n = float(expr.norm(g))
    if n <= 0:
        return None
    return g / n


def check_norm_axioms(expr, samples=200, seed=0):
    """Sampled homogeneity/triangle checks plus an exact definiteness check."""
    from .rng import stream

    rng = stream(seed, 101)
    dim = expr.dim
    v = rng.standard_normal((samples, dim))
    w = rng.standard_normal((samples, dim))
    lam = rng.standard_normal(samples)
    nv = np.asarray(expr.norm(v))
    nw = np.asarray(expr.norm(w))
    nvw = np.asarray(expr.norm(v + w))
    nlam = np.asarray(expr.norm(lam[:, None] * v))
    hom = float(np.max(np.abs(nlam - np.abs(lam) * nv) / np.maximum(1.0, nlam)))
    tri = float(np.max((nvw - (nv + nw)) / np.maximum(1.0, nvw)))
    ok, smin = expr.is_norm()
    return AxiomReport(hom, max(tri, 0.0), smin, ok)
