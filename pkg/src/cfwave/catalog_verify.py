"""End-to-end derivation, solution evaluation and residual verification.

The residual harness never goes through the travelling-wave reduction: it
re-parses the equation and applies the conformable operators of every term
directly to u(x, t) by nested finite differences.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .catalog import ConditionViolation, EquationInstance, get_equation, select_branch
from .cfd_num import DomainError, derivative, nested_step
from .pde_lang import BetaMode, format_ode, lower_to_ode, parse_pde
from .special_fn import FAMILIES_BY_NAME, PoleProximity, ellipk, SQRT2_2, wp_real_period
from .surd import SurdNumber
from .surd_solve import Branch, branch_set, instantiate, solve
from .sym_poly import ansatz_substitute, collect_system

INCONCLUSIVE_FRACTION = 0.2


# -- derivation ----------------------------------------------------------------

@lru_cache(maxsize=None)
def symbolic_pipeline(eq_id):
    """(ast, ode, system) with b / c left symbolic."""
    spec = get_equation(eq_id)
    ast = parse_pde(spec.source, spec.params)
    ode = lower_to_ode(ast, spec.beta_mode)
    poly = ansatz_substitute(ode, spec.form, spec.aux)
    return ast, ode, collect_system(poly, spec.unknowns)


@dataclass
class DeriveReport:
    eq_id: str
    params: dict
    ode: str
    system: object
    branches: list
    expected: list

    @property
    def matches(self):
        return branch_set(self.branches) == branch_set(self.expected)

    @property
    def verdict(self):
        return "match" if self.matches else "mismatch"

    def to_json(self):
        return {
            "equation": self.eq_id,
            "params": {k: f"{v.numerator}/{v.denominator}" for k, v in self.params.items()},
            "ode": self.ode,
            "system": self.system.to_json(),
            "branches": [b.to_json() for b in self.branches],
            "expected": [b.to_json() for b in self.expected],
            "verdict": self.verdict,
        }


def derive(inst):
    """Parse, lower, substitute, collect and solve; compare with the catalog."""
    spec = inst.spec
    _, ode, system = symbolic_pipeline(spec.eq_id)
    values = inst.system_params()
    concrete = instantiate(system, {k: values[k] for k in system.parameters})
    branches = solve(concrete, nonzero=spec.nonzero, script=spec.script)
    expected = [Branch.make(b) for b in inst.closed_form()]
    return DeriveReport(spec.eq_id, values, format_ode(ode), system, branches, expected)


# -- solutions -----------------------------------------------------------------

@dataclass(frozen=True)
class Constants:
    """Free constants of the families: c1/g3 (variant A), c2/c3/eps (variant B)."""

    c1: float = 0.0
    g3: float = 4.0
    c2: float = 0.0
    c3: float = 0.0
    eps: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ConditionViolation("eps must be +1 or -1")


@dataclass(frozen=True)
class SolutionFamily:
    eq_id: str
    index: str
    family: str
    values: dict              # branch values as floats (a0, a1, a, omega)
    aux_constant: float
    alpha: float
    beta: float
    beta_mode: BetaMode
    constants: Constants

    def xi(self, x, t):
        if self.beta_mode is BetaMode.ONE:
            X = x
        else:
            if x <= 0:
                raise DomainError("fractional x-axis needs x > 0")
            order = self.alpha if self.beta_mode is BetaMode.ALPHA else self.beta
            X = x ** order / order
        if t <= 0:
            raise DomainError("fractional t-axis needs t > 0")
        return X + self.values["omega"] * t ** self.alpha / self.alpha

    def profile(self, xi):
        fam = FAMILIES_BY_NAME[self.family]
        k = self.constants
        a = self.values["a"]
        if fam.aux == "A":
            F = fam.evaluate(a, xi, b=self.aux_constant, g3=k.g3, c1=k.c1)
        else:
            shift = k.c2 if fam.c_value == 2 else k.c3
            F = fam.evaluate(a, xi, eps=k.eps, shift=shift)
        return self.values.get("a0", 0.0) + self.values["a1"] * F

    def __call__(self, x, t):
        return self.profile(self.xi(x, t))


def default_constants(family):
    """Zero shifts, g3 = 4 and eps = +1; nc is shifted to widen its pole-free band."""
    if family == "nc":
        return Constants(c2=-ellipk(SQRT2_2) / 3.0)
    return Constants()


def make_solution(inst, index, constants=None, *, alpha=1.0, beta=1.0, branch=None):
    """Evaluable u(x, t) for the explicit solution ``index`` of ``inst``."""
    spec = inst.spec
    fam = spec.family(index)
    if not 0 < alpha <= 1 or not 0 < beta <= 1:
        raise ConditionViolation("orders must lie in (0, 1]")
    if spec.beta_mode is BetaMode.ONE:
        beta = 1.0
    elif spec.beta_mode is BetaMode.ALPHA:
        beta = alpha
    inst_used, curated = select_branch(inst, fam)
    if constants is None:
        constants = default_constants(fam.aux_family)
    chosen = curated if branch is None else (branch.values if isinstance(branch, Branch) else branch)
    values = {k: float(v) for k, v in chosen.items()}
    if "omega" not in values:
        values["omega"] = float(inst.omega)
    return SolutionFamily(
        spec.eq_id, index, fam.aux_family, values, float(inst_used.aux_constant),
        float(alpha), float(beta), spec.beta_mode, constants,
    )


# -- grids ---------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    x0: float = 0.5
    x1: float = 2.0
    nx: int = 20
    t0: float = 0.5
    t1: float = 2.0
    nt: int = 20

    @classmethod
    def parse(cls, text):
        """``x0:x1:n,t0:t1:m``"""
        try:
            xs, ts = text.split(",")
            x0, x1, nx = xs.split(":")
            t0, t1, nt = ts.split(":")
            grid = cls(float(x0), float(x1), int(nx), float(t0), float(t1), int(nt))
        except ValueError:
            raise ValueError(f"bad grid {text!r}; expected x0:x1:n,t0:t1:m") from None
        if grid.nx < 1 or grid.nt < 1:
            raise ValueError("grid counts must be positive")
        return grid

    def text(self):
        return f"{self.x0:g}:{self.x1:g}:{self.nx},{self.t0:g}:{self.t1:g}:{self.nt}"

    @staticmethod
    def _axis(a, b, n):
        if n == 1:
            return [a]
        return [a + (b - a) * i / (n - 1) for i in range(n)]

    def points(self):
        """t-major ordering."""
        for t in self._axis(self.t0, self.t1, self.nt):
            for x in self._axis(self.x0, self.x1, self.nx):
                yield x, t

    def __len__(self):
        return self.nx * self.nt


# -- default grids ---------------------------------------------------------------
# Exponential-elliptic members reach a pole (or blow up) once e^{+-a xi}
# leaves a bounded window, so their default grid is moved off [0.5, 2]^2
# when needed.  Windows are stated for s = a*xi with zero shift constants.

_TINY = math.log(1e-5)
_MARGIN = 0.7   # distance to the first pole, in units of s


def s_windows(name, a, k):
    """Safe ranges of s = a*xi for family ``name`` with constants ``k``."""
    if name == "weierstrass":
        if k.c1 != 0:
            return None
        a = abs(a)
        return [(_TINY + math.log(a), math.log(a * wp_real_period(k.g3)) - _MARGIN)]
    if name.startswith("coth"):
        return [(0.5, 80.0), (-80.0, -0.5)]
    if name.startswith("tanh"):
        return None
    K = ellipk(SQRT2_2)
    shift = k.c2 if name in ("ds", "nc") else k.c3
    if name == "nc":
        # sqrt(2) e^{-s} + shift must stay below the pole at K
        room = K * math.exp(-_MARGIN) - shift
        if not -K * math.exp(-_MARGIN) < shift < K * math.exp(-_MARGIN):
            return None
        return [(-math.log(room / math.sqrt(2.0)), -_TINY)]
    if shift != 0:
        return None
    top = 2 * K * math.exp(-_MARGIN) if name == "ds" else 4.0 / math.sqrt(2.0)
    return [(-math.log(top), -_TINY)]


def xi_windows(sol):
    """Pole-free xi intervals for the default constants (None: unrestricted)."""
    a = sol.values["a"]
    wins = s_windows(sol.family, a, sol.constants)
    if wins is None:
        return None
    return [tuple(sorted((lo / a, hi / a))) for lo, hi in wins]


def _x_of_X(sol, X):
    if sol.beta_mode is BetaMode.ONE:
        return X
    order = sol.alpha if sol.beta_mode is BetaMode.ALPHA else sol.beta
    return (order * X) ** (1.0 / order) if X > 0 else 0.0


def _X_of_x(sol, x):
    if sol.beta_mode is BetaMode.ONE:
        return x
    order = sol.alpha if sol.beta_mode is BetaMode.ALPHA else sol.beta
    return x ** order / order


def _fit(sol, lo, hi, t0, t1, x_lo=0.5, x_hi=2.0, x_floor=0.25):
    om, al = sol.values["omega"], sol.alpha
    w1, w2 = sorted((om * t0 ** al / al, om * t1 ** al / al))
    X_lo, X_hi = lo - w1, hi - w2
    if sol.beta_mode is not BetaMode.ONE:
        X_lo = max(X_lo, _X_of_x(sol, x_floor))
    if X_hi <= X_lo:
        return None
    f_lo, f_hi = _x_of_X(sol, X_lo), _x_of_X(sol, X_hi)
    if f_lo <= x_lo and f_hi >= x_hi:
        return x_lo, x_hi
    width = min(x_hi - x_lo, f_hi - f_lo)
    if width < 0.2:
        return None
    start = min(max(x_lo, f_lo), f_hi - width)
    return start, start + width


def default_grid(sol, n=20):
    """[0.5, 2]^2 unless the family's pole-free window forces a shift."""
    wins = xi_windows(sol)
    base = Grid(nx=n, nt=n)
    if wins is None:
        return base
    best = None
    for lo, hi in wins:
        t1 = 2.0
        while t1 - 0.5 > 0.05:
            xr = _fit(sol, lo, hi, 0.5, t1)
            if xr is not None:
                overlap = max(0.0, min(xr[1], 2.0) - max(xr[0], 0.5))
                score = (t1, overlap)
                if best is None or score > best[0]:
                    best = (score, Grid(round(xr[0], 6), round(xr[1], 6), n, 0.5, t1, n))
                break
            t1 = 0.5 + (t1 - 0.5) / 2
    if best is None:
        raise ConditionViolation(f"no pole-free default grid for {sol.eq_id} {sol.index}")
    return best[1]


# -- residuals -----------------------------------------------------------------

def _step(v, depth, integer_axis):
    return nested_step(1.0 if integer_axis else abs(v), depth)


def _operator(g, axis, order, depth, integer_axis):
    def x_op(x, t):
        h, lv = _step(x, depth, integer_axis)
        if not integer_axis and x < 5 * depth * h:
            raise DomainError(f"x={x} too close to 0")
        d = derivative(lambda s: g(s, t), x, h, lv)
        return d if order == 1.0 else x ** (1.0 - order) * d

    def t_op(x, t):
        h, lv = _step(t, depth, False)
        if t < 5 * depth * h:
            raise DomainError(f"t={t} too close to 0")
        d = derivative(lambda s: g(x, s), t, h, lv)
        return d if order == 1.0 else t ** (1.0 - order) * d

    return x_op if axis == "x" else t_op


def chain_operators(chain, alpha, beta):
    """(axis, order, integer?) list for one derivative chain; t first."""
    return (
        [("t", alpha, False)] * chain.t_alpha
        + [("x", beta, False)] * chain.x_beta
        + [("x", 1.0, True)] * chain.x_int
        + [("x", alpha, False)] * chain.x_alpha
    )


def apply_chain(u, chain, x, t, alpha, beta):
    ops = chain_operators(chain, alpha, beta)
    g = lambda xx, tt: u(xx, tt)  # noqa: E731
    for axis, order, integer_axis in ops:
        g = _operator(g, axis, order, len(ops), integer_axis)
    return g(x, t)


def term_values(ast, u, x, t, alpha, beta, params):
    out = []
    u0 = u(x, t)
    for term in ast.terms:
        v = float(term.coefficient)
        for s, e in term.params:
            v *= float(params[s]) ** e
        v *= u0 ** term.u_power
        for chain in term.derivs:
            v *= apply_chain(u, chain, x, t, alpha, beta)
        out.append(v)
    return out


@dataclass
class ResidualReport:
    grid: Grid
    max_abs: float
    rms: float
    max_rel: float
    evaluated: int
    skipped: list = field(default_factory=list)   # (x, t, reason)

    @property
    def skipped_fraction(self):
        total = self.evaluated + len(self.skipped)
        return len(self.skipped) / total if total else 1.0

    @property
    def inconclusive(self):
        return self.skipped_fraction >= INCONCLUSIVE_FRACTION

    def passes(self, tol, scaled=False):
        return not self.inconclusive and (self.max_rel if scaled else self.max_abs) < tol

    def to_json(self):
        return {
            "grid": self.grid.text(),
            "max_abs_residual": self.max_abs,
            "rms_residual": self.rms,
            "max_scaled_residual": self.max_rel,
            "points_evaluated": self.evaluated,
            "points_skipped": len(self.skipped),
            "skipped": [{"x": x, "t": t, "reason": r} for x, t, r in self.skipped],
            "inconclusive": self.inconclusive,
        }


SKIPPABLE = (PoleProximity, OverflowError, ZeroDivisionError)


def residual(inst, sol, grid=None):
    """Left-hand side of the equation at every grid point.

    ``max_rel`` scales each residual by 1 + sum of |term| magnitudes so that
    large-amplitude members can be judged against the finite-difference floor.
    """
    grid = grid or default_grid(sol)
    ast, _, _ = symbolic_pipeline(inst.spec.eq_id)
    params = inst.all_params()
    worst = worst_rel = sq = 0.0
    n = 0
    skipped = []
    for x, t in grid.points():
        try:
            vals = term_values(ast, sol, x, t, sol.alpha, sol.beta, params)
        except SKIPPABLE as exc:
            skipped.append((x, t, f"{type(exc).__name__}: {exc}"))
            continue
        if not all(math.isfinite(v) for v in vals):
            skipped.append((x, t, "non-finite value"))
            continue
        r = math.fsum(vals)
        n += 1
        worst = max(worst, abs(r))
        worst_rel = max(worst_rel, abs(r) / (1.0 + math.fsum(abs(v) for v in vals)))
        sq += r * r
    rms = math.sqrt(sq / n) if n else math.nan
    return ResidualReport(grid, worst if n else math.nan, rms, worst_rel if n else math.nan, n, skipped)


def tolerance_tier(eq_id, alpha, beta=1.0):
    """Residual tolerance implied by the finite-difference depth involved."""
    if eq_id in ("fisher", "cahn-allen"):
        return 1e-8 if alpha == 1.0 else 1e-6
    return 1e-4


# -- sampling ------------------------------------------------------------------

def sample(sol, grid=None):
    """Rows (x, t, u or None, skipped) in t-major order."""
    rows = []
    for x, t in (grid or default_grid(sol)).points():
        try:
            u = sol(x, t)
            ok = math.isfinite(u)
        except SKIPPABLE:
            ok = False
        rows.append((x, t, u if ok else None, not ok))
    return rows


def _g17(v):
    return format(v, ".17g")


def rows_to_csv(rows, stream=None):
    out = stream or io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("x", "t", "u", "skipped"))
    for x, t, u, skip in rows:
        w.writerow((_g17(x), _g17(t), "" if u is None else _g17(u), "true" if skip else "false"))
    return out.getvalue() if stream is None else None


# -- auxiliary ODE check -----------------------------------------------------------

def aux_ode_residual(name, a, xi, *, b=1.0, g3=4.0, c1=0.0, eps=1, shift=0.0):
    """|F'' - rhs| / (1 + |F''|) for one of the nine auxiliary families."""
    fam = FAMILIES_BY_NAME[name]
    F = lambda s: fam.evaluate(a, s, b=b, g3=g3, c1=c1, eps=eps, shift=shift)  # noqa: E731
    h = 1e-3 * max(1.0, abs(xi))
    f0 = F(xi)
    f1 = derivative(F, xi, h, 2)
    f2 = derivative(lambda s: derivative(F, s, h, 2), xi, h, 2)
    if fam.aux == "A":
        terms = (b * f0 * f0, -6 * a * a * f0, 5 * a * f1)
    else:
        terms = (fam.c_value * f0 ** 3, -2 * a * a * f0, -3 * a * f1)
    return abs(f2 - math.fsum(terms)) / (1.0 + abs(f2))


def as_surd(value):
    return value if isinstance(value, SurdNumber) else SurdNumber.coerce(value)


def family_ids(eq_id):
    return [f.index for f in get_equation(eq_id).families]


def default_instance(eq_id, family_index=None):
    """Default parameters, switching the auxiliary constant to the family's c."""
    inst = EquationInstance.build(eq_id)
    if family_index is not None:
        fam = inst.spec.family(family_index)
        if fam.aux_constant is not None:
            inst = replace(inst, aux_constant=type(inst.aux_constant)(fam.aux_constant))
    return inst
