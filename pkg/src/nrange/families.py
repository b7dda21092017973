"""Truncated operator families whose spatial and intrinsic ranges split.

Each family builds, for a truncation size m, a pair (domain embedded in an
ambient space) and an operator T such that every state-side pairing f(Tx)
vanishes while the operator-norm quotient (||J + aT|| - 1)/a stays near a
positive law.  The families share one mechanism: the ambient norm carries a
structural factor strictly below 1 (growing to 1 with m), so states at
embedded points never see the T-block, while J + aT picks up the factor
(1 + a).

Family ids:

  thm21        max(l2, pullback-sum of linf pieces), diagonal factors k/(k+1)
  example34    l2 (+)_inf (l2 (+)_1 l2), same diagonal factors
  remark_case1 max(linf, |w.x| + |t|) with geometric weights w
  example32    max(linf, l1 on two tail coordinates), embedded graph of w
  prop33       base (+)_inf (R (+)_1 R) for a caller-supplied base norm
  remark_case2 max(l2, max-row pairing + tail), difference rows (e_n - e_0)

All ids accept a truncation size m >= 2.  The quotient law is closed-form
except for remark_case2, which is evaluated through its structured operator
norm only.
"""

from dataclasses import dataclass, field

import numpy as np

from .gauges import LpGauge
from .optimize import SearchConfig
from .pairs import OperatorSpec, SubspacePair
from .ranges import sup_spatial
from .spaces import AbsoluteSum, Lp, MaxOf, Pullback, SumOf

__all__ = [
    "FamilyInstance",
    "GapProfile",
    "FAMILY_IDS",
    "make_family",
    "structured_opnorm",
    "reference_quotient",
    "sweep",
]

FAMILY_IDS = (
    "thm21",
    "remark_case1",
    "remark_case2",
    "example32",
    "prop33",
    "example34",
)


@dataclass
class FamilyInstance:
    family_id: str
    m: int
    pair: SubspacePair
    op: OperatorSpec
    reference: object  # callable alpha -> quotient, or None when oracle-only
    reference_kind: str  # 'closed-form' | 'oracle-only'
    eta: float  # 1 - (structural factor): the attainment deficit scale
    intended_domain: object  # the base norm the embedding must reproduce
    blocks: dict = field(default_factory=dict)

    def describe(self):
        return (
            f"{self.family_id}(m={self.m}): domain dim {self.pair.k},"
            f" ambient dim {self.pair.space.dim}, eta={self.eta:.3g},"
            f" reference {self.reference_kind}"
        )

    def isometry_defect(self, samples=100, seed=0):
        """max | ||x||_pulled-back - ||x||_intended | over seeded samples."""
        from .rng import stream

        rng = stream(seed, 71)
        v = rng.standard_normal((samples, self.pair.k))
        a = np.asarray(self.pair.domain.norm(v))
        b = np.asarray(self.intended_domain.norm(v))
        return float(np.max(np.abs(a - b)))


def _law(sigma):
    def ref(alpha):
        return max(0.0, ((1.0 + alpha) * sigma - 1.0) / alpha)

    return ref


def _geometric_weights(m):
    return np.array([2.0 ** (-(k + 1)) for k in range(m)])


def _diag_factors(m):
    return np.array([k / (k + 1.0) for k in range(1, m + 1)])


def _select(rows, cols, row_start):
    out = np.zeros((rows, cols))
    out[:, row_start : row_start + rows] = np.eye(rows)
    return out


def make_family(family_id, m, base=None, functional=None):
    """Build a truncated family instance.

    ``base`` and ``functional`` apply to prop33 only: the base norm (any
    NormExpr with an exact dual) and the row functional whose dual norm
    drives the law; defaults are linf of dimension m with geometric
    weights.
    """
    m = int(m)
    if m < 2:
        raise ValueError(f"truncation size must be >= 2, got {m}")
    if family_id not in FAMILY_IDS:
        raise ValueError(f"unknown family id {family_id!r}")

    if family_id == "thm21":
        s = np.diag(_diag_factors(m))
        left = np.concatenate([np.eye(m), np.zeros((m, m))], axis=1)
        right = np.concatenate([np.zeros((m, m)), np.eye(m)], axis=1)
        space = MaxOf(
            [
                Pullback(left, Lp(2, m)),
                SumOf(
                    [
                        Pullback(s @ left, Lp(np.inf, m)),
                        Pullback(right, Lp(np.inf, m)),
                    ]
                ),
            ]
        )
        j = np.concatenate([np.eye(m), np.zeros((m, m))], axis=0)
        t = np.concatenate([np.zeros((m, m)), s], axis=0)
        pair = SubspacePair(space, j)
        sigma = m / (m + 1.0)
        return FamilyInstance(
            family_id, m, pair, OperatorSpec(pair, t), _law(sigma),
            "closed-form", 1.0 - sigma, Lp(2, m), {"S": s},
        )

    if family_id == "example34":
        s = np.diag(_diag_factors(m))
        space = AbsoluteSum(
            LpGauge(np.inf),
            Lp(2, m),
            AbsoluteSum(LpGauge(1), Lp(2, m), Lp(2, m)),
        )
        j = np.concatenate([np.eye(m), s, np.zeros((m, m))], axis=0)
        t = np.concatenate([np.zeros((2 * m, m)), s], axis=0)
        pair = SubspacePair(space, j)
        sigma = m / (m + 1.0)
        return FamilyInstance(
            family_id, m, pair, OperatorSpec(pair, t), _law(sigma),
            "closed-form", 1.0 - sigma, Lp(2, m), {"S": s},
        )

    if family_id == "remark_case1":
        w = _geometric_weights(m)
        amb = m + 1
        sel_x = _select(m, amb, 0)
        mix = np.zeros((2, amb))
        mix[0, :m] = w
        mix[1, m] = 1.0
        space = MaxOf([Pullback(sel_x, Lp(np.inf, m)), Pullback(mix, Lp(1, 2))])
        j = np.concatenate([np.eye(m), np.zeros((1, m))], axis=0)
        t = np.concatenate([np.zeros((m, m)), w[None, :]], axis=0)
        pair = SubspacePair(space, j)
        sigma = float(np.sum(w))
        return FamilyInstance(
            family_id, m, pair, OperatorSpec(pair, t), _law(sigma),
            "closed-form", 1.0 - sigma, Lp(np.inf, m), {"w": w},
        )

    if family_id == "example32":
        w = _geometric_weights(m)
        amb = m + 2
        sel_x = _select(m, amb, 0)
        sel_tail = _select(2, amb, m)
        space = MaxOf(
            [Pullback(sel_x, Lp(np.inf, m)), Pullback(sel_tail, Lp(1, 2))]
        )
        j = np.concatenate([np.eye(m), w[None, :], np.zeros((1, m))], axis=0)
        t = np.concatenate([np.zeros((m + 1, m)), w[None, :]], axis=0)
        pair = SubspacePair(space, j)
        sigma = float(np.sum(w))
        return FamilyInstance(
            family_id, m, pair, OperatorSpec(pair, t), _law(sigma),
            "closed-form", 1.0 - sigma, Lp(np.inf, m), {"w": w},
        )

    if family_id == "prop33":
        if base is None:
            base = Lp(np.inf, m)
            v0 = _geometric_weights(m)
        else:
            if functional is None:
                raise ValueError("prop33 with a custom base needs a functional")
            v0 = np.asarray(functional, dtype=float)
        if base.dim != m or v0.shape != (m,):
            raise ValueError("prop33 base/functional must have dimension m")
        dv = base.dual(v0)
        if not dv.exact:
            raise ValueError("prop33 needs a base norm with an exact dual")
        sigma = float(dv.upper)
        if sigma > 1.0 + 1e-12:
            raise ValueError(
                f"functional must sit in the dual unit ball, norm {sigma!r}"
            )
        space = AbsoluteSum(LpGauge(np.inf), base, Lp(1, 2))
        j = np.concatenate([np.eye(m), v0[None, :], np.zeros((1, m))], axis=0)
        t = np.concatenate([np.zeros((m + 1, m)), v0[None, :]], axis=0)
        pair = SubspacePair(space, j)
        return FamilyInstance(
            family_id, m, pair, OperatorSpec(pair, t), _law(sigma),
            "closed-form", 1.0 - sigma, base, {"v0": v0},
        )

    # remark_case2
    c = np.array([n / (n + 1.0) for n in range(1, m)])
    s = np.zeros((m - 1, m))
    for n in range(1, m):
        s[n - 1, n] = c[n - 1] / np.sqrt(2.0)
        s[n - 1, 0] = -c[n - 1] / np.sqrt(2.0)
    amb = m + 1
    sel_x = _select(m, amb, 0)
    last = np.zeros((1, amb))
    last[0, m] = 1.0
    space = MaxOf(
        [
            Pullback(sel_x, Lp(2, m)),
            SumOf([Pullback(s @ sel_x, Lp(np.inf, m - 1)), Pullback(last, Lp(1, 1))]),
        ]
    )
    j = np.concatenate([np.eye(m), np.zeros((1, m))], axis=0)
    t = np.zeros((amb, m))
    t[m, 0] = 1.0
    pair = SubspacePair(space, j)
    return FamilyInstance(
        family_id, m, pair, OperatorSpec(pair, t), None, "oracle-only",
        1.0 / m, Lp(2, m), {"S": s},
    )


def structured_opnorm(instance, alpha):
    """Exact ||J + alpha T|| from the family's block structure.

    Every family reduces the operator norm to a one-dimensional maximum
    over its structural factor; remark_case2 needs a sign split over its
    difference rows.
    """
    fam = instance.family_id
    if fam == "thm21":
        s = instance.blocks["S"]
        sigma = float(np.max(np.linalg.norm(s, axis=1)))
        return max(1.0, (1.0 + alpha) * sigma)
    if fam == "example34":
        s = instance.blocks["S"]
        sigma = float(np.linalg.norm(s, 2))
        return max(1.0, (1.0 + alpha) * sigma)
    if fam in ("remark_case1", "example32"):
        w = instance.blocks["w"]
        return max(1.0, (1.0 + alpha) * float(np.sum(np.abs(w))))
    if fam == "prop33":
        v0 = instance.blocks["v0"]
        sigma = instance.intended_domain.dual(v0).upper
        return max(1.0, (1.0 + alpha) * float(sigma))
    # remark_case2: rows see |S_n x| + alpha |x_0|; over the l2 sphere the
    # supremum is the better of the two sign alignments
    s = instance.blocks["S"]
    e0 = np.zeros(s.shape[1])
    e0[0] = alpha
    best = 1.0
    for row in s:
        best = max(
            best,
            float(np.linalg.norm(row + e0)),
            float(np.linalg.norm(row - e0)),
        )
    return best


def reference_quotient(instance, alpha):
    """The family's law at alpha: closed form when it exists, else the
    structured operator norm quotient."""
    if instance.reference is not None:
        return float(instance.reference(alpha))
    return (structured_opnorm(instance, alpha) - 1.0) / alpha


@dataclass
class GapProfile:
    family_id: str
    mode: str
    rows: list  # (m, alpha, quotient, reference, supw)

    def max_reference_error(self):
        return max(abs(q - r) for _, _, q, r, _ in self.rows)

    def max_supw(self):
        return max(s for *_, s in self.rows)


def sweep(family_id, m_list, alpha_list, mode="structured-exact", budget=400,
          seed=0, base=None, functional=None):
    """Quotient sweep over (m, alpha), with a spatial-range estimate per m.

    mode 'structured-exact' evaluates ||J + alpha T|| through
    :func:`structured_opnorm`; 'optimizer' runs the generic sphere search
    so the structure can be cross-checked.
    """
    if mode not in ("structured-exact", "optimizer"):
        raise ValueError(f"unknown sweep mode {mode!r}")
    if not m_list or not alpha_list:
        raise ValueError("m_list and alpha_list must be nonempty")
    rows = []
    for m in m_list:
        inst = make_family(family_id, m, base=base, functional=functional)
        cfg = SearchConfig(budget=budget, starts=6, seed=seed)
        supw = sup_spatial(inst.pair, inst.op, cfg).value
        j = inst.pair.embedding
        t = inst.op.matrix
        for alpha in alpha_list:
            if mode == "structured-exact":
                opn = structured_opnorm(inst, alpha)
            else:
                from .optimize import sphere_maximize

                res = sphere_maximize(
                    lambda x: float(inst.pair.space.norm((j + alpha * t) @ x)),
                    inst.pair.domain.unit,
                    inst.pair.k,
                    cfg,
                )
                opn = res.value
            q = (opn - 1.0) / alpha
            rows.append(
                (m, float(alpha), float(q), reference_quotient(inst, alpha), supw)
            )
    return GapProfile(family_id, mode, rows)
