"""The six example equations: sources, closed-form branches and solution families.

Each equation carries the text fed to the parser, the ansatz / auxiliary
variant used to derive its coefficient system, the curated parameter
branches (as exact SurdNumbers) and the table of explicit solutions u1..un.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .pde_lang import BetaMode
from .surd import NegativeRadicand, SurdNumber
from .surd_solve import SolveScript, Substitute
from .sym_poly import AnsatzForm, AuxKind


class ConditionViolation(ValueError):
    """Parameters fall outside the region where a branch or family exists."""


class UnknownEquation(KeyError):
    pass


class UnknownFamily(KeyError):
    pass


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


def _sqrt(r):
    return SurdNumber.sqrt_of(r)


def _need_nonzero(params, *names):
    for n in names:
        if params[n] == 0:
            raise ConditionViolation(f"{n} must be nonzero")


# -- curated branches -----------------------------------------------------------
# Each returns a list of {unknown: SurdNumber} dicts; ``k`` is the auxiliary
# constant (b for variant A, c for variant B).

def _kdv_branches(p, k):
    lam, mu, nu, om = p["lambda"], p["mu"], p["nu"], p["omega"]
    return [{
        "a": SurdNumber(-mu / (5 * nu)),
        "a0": SurdNumber((6 * mu ** 2 - 25 * om * nu) / (25 * lam * nu)),
        "a1": SurdNumber(-2 * k * nu / lam),
    }]


def _fisher_branches(p, k):
    return [
        {"a0": SurdNumber(0), "a1": SurdNumber(k / 6), "a": SurdNumber(1), "omega": SurdNumber(5)},
        {"a0": SurdNumber(0), "a1": SurdNumber(k / 6), "a": SurdNumber(-1), "omega": SurdNumber(-5)},
    ]


def _rlw_branches(p, k):
    pp, q, r, s, om = p["p"], p["q"], p["r"], p["s"], p["omega"]
    return [{
        "a": SurdNumber(-r / (5 * s * om)),
        "a0": SurdNumber(-(25 * s * om ** 2 + 25 * pp * s * om - 6 * r ** 2) / (25 * q * s * om)),
        "a1": SurdNumber(-2 * k * s * om / q),
    }]


def _cahn_allen_branches(p, k):
    if k < 0:
        return []
    half = _sqrt(Fraction(1, 2))
    return [
        {"a": sa * half, "a1": s1 * _sqrt(k), "omega": -3 * sa * half}
        for sa in (1, -1) for s1 in (1, -1)
    ]


def _mkdv_branches(p, k):
    lam, r, s = p["lambda"], p["r"], p["s"]
    rad = -3 * k * s / lam
    if rad < 0:
        return []
    a = SurdNumber(r / (3 * s))
    om = SurdNumber(2 * r ** 2 / (9 * s))
    return [{"a": a, "a1": sg * _sqrt(rad), "omega": om} for sg in (1, -1)]


def _telegraph_branches(p, k):
    mu, nu = p["mu"], p["nu"]
    ratio = mu / (9 * mu - 2)
    rad = -2 * k / (nu * (9 * mu - 2))
    if ratio < 0 or rad < 0:
        return []
    root = _sqrt(ratio)
    out = []
    for sg in (1, -1):
        a = sg * (9 * mu - 2) / 2 * root
        om = sg * 3 * root
        out.extend({"a": a, "a1": s1 * _sqrt(rad), "omega": om} for s1 in (1, -1))
    return out


# -- per-equation admissibility ------------------------------------------------

def _kdv_check(p):
    _need_nonzero(p, "lambda", "mu", "nu")


def _rlw_check(p):
    _need_nonzero(p, "q", "r", "s", "omega")


def _mkdv_check(p):
    _need_nonzero(p, "lambda", "r", "s")


def _telegraph_check(p):
    mu = p["mu"]
    _need_nonzero(p, "mu", "nu")
    if mu == Fraction(2, 9):
        raise ConditionViolation("mu = 2/9 is excluded")
    if mu / (9 * mu - 2) <= 0:
        raise ConditionViolation("need mu < 0 or mu > 2/9")


def _no_check(p):
    pass


# -- family conditions ------------------------------------------------------------

def _mkdv_sign(sign):
    def check(p):
        if (p["s"] * p["lambda"] > 0) != (sign > 0):
            raise ConditionViolation("requires s*lambda " + ("> 0" if sign > 0 else "< 0"))
    return check


def _telegraph_guard(c):
    """c = 2: mu<0,nu>0 or mu>2/9,nu<0;  c = -2: mu<0,nu<0 or mu>2/9,nu>0."""

    def check(p):
        mu, nu = p["mu"], p["nu"]
        same = nu < 0 if c > 0 else nu > 0
        ok = (mu < 0 and not same and nu != 0) or (mu > Fraction(2, 9) and same)
        if not ok:
            raise ConditionViolation(
                "requires mu<0,nu>0 or mu>2/9,nu<0" if c > 0 else "requires mu<0,nu<0 or mu>2/9,nu>0"
            )
        # the guard must leave a real amplitude a1^2 = -2c / (nu (9 mu - 2))
        if -2 * c / (nu * (9 * mu - 2)) <= 0:
            raise ConditionViolation("a1^2 would be negative")
    return check


@dataclass(frozen=True)
class FamilySpec:
    """One explicit solution u_i: an auxiliary family plus the branch it uses.

    ``select`` maps unknown -> sign and picks the curated branch whose values
    have those signs.
    """

    index: str
    aux_family: str
    aux_constant: int | None = None   # c for variant B (None for A: b is free)
    select: tuple = ()
    condition: object = None
    note: str = ""


@dataclass(frozen=True)
class EquationSpec:
    eq_id: str
    title: str
    source: str
    params: tuple
    beta_mode: BetaMode
    form: AnsatzForm
    aux: AuxKind
    unknowns: tuple
    omega_free: bool
    closed_form: object
    check: object
    families: tuple
    script: SolveScript | None = None
    defaults: dict = field(default_factory=dict)

    def family(self, index):
        for f in self.families:
            if f.index == index:
                return f
        raise UnknownFamily(f"{self.eq_id} has no family {index!r}")

    @property
    def nonzero(self):
        return ("a1",)


_A_FAMILIES = ("weierstrass", "tanh-sq-plus", "coth-sq-plus")

EQUATIONS = {}


def _register(spec):
    EQUATIONS[spec.eq_id] = spec
    return spec


_register(EquationSpec(
    eq_id="kdv-burgers",
    title="space-time fractional KdV-Burgers equation",
    source="D{t,a}u + lambda*u*D{x,b}u + mu*D{x,2b}u + nu*D{x,3b}u = 0",
    params=("lambda", "mu", "nu"),
    beta_mode=BetaMode.INDEPENDENT,
    form=AnsatzForm.WITH_CONSTANT,
    aux=AuxKind.A,
    unknowns=("a0", "a1", "a"),
    omega_free=True,
    closed_form=_kdv_branches,
    check=_kdv_check,
    families=tuple(FamilySpec(f"u{i + 1}", name) for i, name in enumerate(_A_FAMILIES)),
    defaults={"lambda": 1, "mu": 2, "nu": 3, "omega": 5, "b": 1},
))

_register(EquationSpec(
    eq_id="fisher",
    title="time fractional Fisher equation",
    source="D{t,a}u = D{x,2}u + 6*u*(1-u)",
    params=(),
    beta_mode=BetaMode.ONE,
    form=AnsatzForm.WITH_CONSTANT,
    aux=AuxKind.A,
    unknowns=("a0", "a1", "a", "omega"),
    omega_free=False,
    closed_form=_fisher_branches,
    check=_no_check,
    families=tuple(
        FamilySpec(f"u{i + 1 + 3 * j}", name, select=(("a", sign),))
        for j, sign in enumerate((1, -1)) for i, name in enumerate(_A_FAMILIES)
    ),
    defaults={"b": 6},
))

_register(EquationSpec(
    eq_id="rlw-burgers",
    title="time fractional RLW-Burgers equation",
    source="D{t,a}u + p*D{x,1}u + q*u*D{x,1}u + r*D{x,2}u + s*D{x,2}D{t,a}u = 0",
    params=("p", "q", "r", "s"),
    beta_mode=BetaMode.ONE,
    form=AnsatzForm.WITH_CONSTANT,
    aux=AuxKind.A,
    unknowns=("a0", "a1", "a"),
    omega_free=True,
    closed_form=_rlw_branches,
    check=_rlw_check,
    families=tuple(FamilySpec(f"u{i + 1}", name) for i, name in enumerate(_A_FAMILIES)),
    defaults={"p": 1, "q": 1, "r": 5, "s": 1, "omega": 1, "b": 1},
))

_register(EquationSpec(
    eq_id="cahn-allen",
    title="time fractional Cahn-Allen equation",
    source="D{t,a}u - D{x,2}u - u + u^3 = 0",
    params=(),
    beta_mode=BetaMode.ONE,
    form=AnsatzForm.PURE_LINEAR,
    aux=AuxKind.B,
    unknowns=("a1", "a", "omega"),
    omega_free=False,
    closed_form=_cahn_allen_branches,
    check=_no_check,
    # upper / lower sign pairs; a1 > 0 since epsilon already carries the sign
    families=tuple(
        FamilySpec(f"u{i + 1}{tag}", name, 2, select=(("a", sign), ("a1", 1)))
        for i, name in enumerate(("ds", "nc", "tanh-minus", "coth-minus"))
        for tag, sign in (("+", 1), ("-", -1))
    ),
    defaults={"c": 2},
))

_register(EquationSpec(
    eq_id="mkdv-burgers",
    title="space-time fractional mKdV-Burgers equation",
    source="D{t,a}u + lambda*u^2*D{x,a}u + r*D{x,2a}u + s*D{x,3a}u = 0",
    params=("lambda", "r", "s"),
    beta_mode=BetaMode.ALPHA,
    form=AnsatzForm.PURE_LINEAR,
    aux=AuxKind.B,
    unknowns=("a1", "a", "omega"),
    omega_free=False,
    closed_form=_mkdv_branches,
    check=_mkdv_check,
    families=tuple(
        FamilySpec(f"u{i + 1}", name, 2, (("a1", 1),), _mkdv_sign(-1))
        for i, name in enumerate(("ds", "nc", "tanh-minus", "coth-minus"))
    ) + (
        FamilySpec("u5", "cn", -2, (("a1", 1),), _mkdv_sign(1)),
        # the amplitude sqrt(3s/lambda) is real only for s*lambda > 0, so the
        # sometimes quoted condition s*lambda < 0 is not used
        FamilySpec("u6", "sd", -2, (("a1", 1),), _mkdv_sign(1), note="requires s*lambda > 0"),
    ),
    defaults={"lambda": -1, "r": 3, "s": 1, "c": 2},
))

_TELEGRAPH_NAMES = ("ds", "nc", "tanh-minus", "coth-minus", "cn", "sd")

_register(EquationSpec(
    eq_id="telegraph",
    title="space-time fractional telegraph equation",
    source="D{t,2a}u - D{x,2a}u + D{t,a}u + mu*u + nu*u^3 = 0",
    params=("mu", "nu"),
    beta_mode=BetaMode.ALPHA,
    form=AnsatzForm.PURE_LINEAR,
    aux=AuxKind.B,
    unknowns=("a1", "a", "omega"),
    omega_free=False,
    closed_form=_telegraph_branches,
    check=_telegraph_check,
    families=tuple(
        FamilySpec(
            f"u{i + 1 + 6 * j}", name, 2 if i < 4 else -2,
            (("a", sign), ("a1", 1)), _telegraph_guard(2 if i < 4 else -2),
        )
        for j, sign in enumerate((1, -1)) for i, name in enumerate(_TELEGRAPH_NAMES)
    ),
    # no equation is univariate in a single unknown: eliminate a between the
    # (1,0) and (0,1) coefficient equations first
    script=SolveScript((Substitute(1, 0, "a"),)),
    defaults={"mu": 1, "nu": -1, "c": 2},
))


def get_equation(eq_id):
    try:
        return EQUATIONS[eq_id]
    except KeyError:
        raise UnknownEquation(f"unknown equation {eq_id!r}; choose from {', '.join(EQUATIONS)}") from None


@dataclass(frozen=True)
class EquationInstance:
    """An equation with exact parameter values and the auxiliary constant."""

    spec: EquationSpec
    params: dict
    aux_constant: Fraction
    omega: Fraction | None = None

    @classmethod
    def build(cls, eq_id, params=None, *, omega=None, aux_constant=None):
        spec = get_equation(eq_id)
        given = {k: _q(v) for k, v in (params or {}).items()}
        unknown = set(given) - set(spec.params)
        if unknown:
            raise ConditionViolation(f"{eq_id} takes no parameter(s) {', '.join(sorted(unknown))}")
        vals = {k: given.get(k, _q(spec.defaults[k]) if k in spec.defaults else None) for k in spec.params}
        missing = [k for k, v in vals.items() if v is None]
        if missing:
            raise ConditionViolation(f"missing parameter(s): {', '.join(missing)}")
        if spec.omega_free:
            omega = _q(spec.defaults["omega"] if omega is None else omega)
        elif omega is not None:
            raise ConditionViolation(f"omega is solved for {eq_id}, it cannot be preset")
        k_name = spec.aux.constant_symbol
        k = _q(spec.defaults[k_name] if aux_constant is None else aux_constant)
        if k == 0:
            raise ConditionViolation(f"{k_name} must be nonzero")
        inst = cls(spec, vals, k, omega)
        spec.check(inst.all_params())
        return inst

    def all_params(self):
        out = dict(self.params)
        if self.omega is not None:
            out["omega"] = self.omega
        return out

    def system_params(self):
        """Values for every non-unknown symbol of the coefficient system."""
        out = self.all_params()
        out[self.spec.aux.constant_symbol] = self.aux_constant
        return out

    def closed_form(self):
        try:
            return self.spec.closed_form(self.all_params(), self.aux_constant)
        except NegativeRadicand:
            return []

    def with_aux_constant(self, k):
        return EquationInstance(self.spec, self.params, _q(k), self.omega)


def select_branch(inst, family):
    """The curated branch feeding ``family`` (after its condition check)."""
    if family.condition is not None:
        family.condition(inst.all_params())
    if family.aux_constant is not None and inst.aux_constant != family.aux_constant:
        inst = inst.with_aux_constant(family.aux_constant)
    wanted = dict(family.select)
    for branch in inst.closed_form():
        if all(branch[k].sign() == s for k, s in wanted.items()):
            return inst, branch
    raise ConditionViolation(f"no real branch for {inst.spec.eq_id} {family.index}")
