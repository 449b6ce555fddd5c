"""Exact solving of instantiated coefficient systems over Q(sqrt(d)).

The generic strategy repeatedly strips factors of unknowns declared nonzero,
solves an equation that is univariate of degree <= 2 in one unknown (or in
its square), substitutes every root and branches.  Systems that need an
elimination first take a :class:`SolveScript`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from types import MappingProxyType

from .multipoly import MultiPoly, sort_symbols
from .surd import IncompatibleRadicands, NegativeRadicand, NestedRadical, SurdNumber

MAX_UNKNOWNS = 5


class SolveError(ValueError):
    pass


class NotTriangularizable(SolveError):
    pass


class DegreeTooHigh(SolveError):
    pass


class InconsistentSystem(SolveError):
    pass


class InstantiationError(ValueError):
    pass


@dataclass(frozen=True)
class InstantiatedSystem:
    keys: tuple
    equations: tuple
    unknowns: tuple

    def __len__(self):
        return len(self.equations)


def instantiate(system, params):
    """Substitute exact rational parameter values into an AlgebraicSystem."""
    for name in params:
        if name in system.unknowns:
            raise InstantiationError(f"{name!r} is an unknown, not a parameter")
    missing = [p for p in system.parameters if p not in params]
    if missing:
        raise InstantiationError(f"missing parameter values: {', '.join(missing)}")
    values = {k: Fraction(v) for k, v in params.items()}
    eqs = tuple(eq.substitute(values) for eq in system.equations)
    return InstantiatedSystem(system.keys, eqs, tuple(system.unknowns))


# -- scripts -----------------------------------------------------------------

@dataclass(frozen=True)
class SolveUnivariate:
    equation: int
    unknown: str
    power: int = 1

    def describe(self):
        target = self.unknown if self.power == 1 else f"{self.unknown}^{self.power}"
        return f"solve eq{self.equation} for {target}"


@dataclass(frozen=True)
class Substitute:
    """Eliminate ``unknown`` between two equations; the resultant is appended."""

    equation: int
    using: int
    unknown: str

    def describe(self):
        return f"eliminate {self.unknown} from eq{self.equation} using eq{self.using}"


@dataclass(frozen=True)
class DivideByNonzero:
    symbol: str

    def describe(self):
        return f"assume {self.symbol} != 0 and divide it out"


@dataclass(frozen=True)
class SolveScript:
    steps: tuple = ()


@dataclass(frozen=True)
class Branch:
    values: MappingProxyType
    provenance: tuple = ()
    free: tuple = ()

    @classmethod
    def make(cls, values, provenance=(), free=()):
        ordered = {k: values[k] for k in sort_symbols(values)}
        return cls(MappingProxyType(ordered), tuple(provenance), tuple(free))

    def key(self):
        return tuple((k, v.key()) for k, v in self.values.items())

    def __getitem__(self, name):
        return self.values[name]

    def to_json(self):
        out = {"unknowns": {k: v.to_json() for k, v in self.values.items()}, "provenance": list(self.provenance)}
        if self.free:
            out["free"] = list(self.free)
        return out

    @classmethod
    def from_json(cls, obj):
        vals = {k: SurdNumber.from_json(v) for k, v in obj["unknowns"].items()}
        return cls.make(vals, obj.get("provenance", ()), obj.get("free", ()))

    def as_floats(self):
        return {k: float(v) for k, v in self.values.items()}


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    zeros: tuple
    nonzero_violations: tuple = ()

    @property
    def ok(self):
        return all(self.zeros) and not self.nonzero_violations


def _strip_nonzero(eq, nonzero):
    for s in nonzero:
        k = eq.min_exponent(s)
        if k:
            eq = eq.divide_symbol(s, k)
    return eq


def _eval_zero(eq, values, nonzero):
    """Exact zero test; falls back to dividing out nonzero unknowns if radicands mix."""
    try:
        return not eq.substitute(values)
    except IncompatibleRadicands:
        reduced = _strip_nonzero(eq, [s for s in nonzero if values.get(s, 1) != 0])
        return not reduced.substitute(values)


def verify_assignment(system, branch, nonzero=()):
    """Back-substitute ``branch`` exactly; one zero/nonzero verdict per equation."""
    values = dict(branch.values) if isinstance(branch, Branch) else dict(branch)
    values = {k: SurdNumber.coerce(v) for k, v in values.items()}
    nonzero = tuple(nonzero)
    zeros = tuple(_eval_zero(eq, values, nonzero) for eq in system.equations)
    violations = tuple(s for s in nonzero if s in values and not values[s])
    return Verdict(zeros, violations)


# -- solving -----------------------------------------------------------------

@dataclass
class _State:
    equations: list
    values: dict
    nonzero: set
    provenance: list
    script: list = field(default_factory=list)

    def fork(self):
        return _State(list(self.equations), dict(self.values), set(self.nonzero), list(self.provenance), list(self.script))


def _poly_roots(coeffs):
    """Real roots of sum(coeffs[k] y^k) with degree <= 2, coefficients SurdNumbers."""
    coeffs = [SurdNumber.coerce(c) for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg <= 0:
        return None if deg == 0 and coeffs[0] else []
    if deg == 1:
        return [-coeffs[0] / coeffs[1]]
    c0, c1, c2 = coeffs
    disc = c1 * c1 - 4 * c2 * c0
    if disc.sign() < 0:
        return []
    if not disc:
        return [-c1 / (2 * c2)]
    root = disc.sqrt()
    return [(-c1 + root) / (2 * c2), (-c1 - root) / (2 * c2)]


def _univariate(eq, unknowns):
    syms = [s for s in eq.symbols()]
    if len(syms) != 1 or syms[0] not in unknowns:
        return None
    var = syms[0]
    parts = eq.coefficients_in(var)
    exps = sorted(parts)
    power = 2 if all(e % 2 == 0 for e in exps) and max(exps) > 2 else 1
    if all(e % 2 == 0 for e in exps) and max(exps) == 2:
        power = 1
    deg = max(exps) // power
    coeffs = [Fraction(0)] * (deg + 1)
    for e, p in parts.items():
        coeffs[e // power] = p.constant_value()
    return var, power, coeffs


def _substitute_all(state, var, value):
    state.values[var] = value
    state.equations = [eq.substitute({var: value}) if eq else eq for eq in state.equations]


def _apply_roots(state, var, power, coeffs, label):
    """Yield forked states for each real root; raises DegreeTooHigh."""
    if len(coeffs) - 1 > 2:
        raise DegreeTooHigh(f"{label}: degree {len(coeffs) - 1} in {var}^{power}")
    roots = _poly_roots(coeffs)
    if roots is None:
        return []
    out = []
    if power == 1:
        candidates = roots
    else:
        candidates = []
        for y in roots:
            if y.sign() < 0:
                continue
            r = y.sqrt()
            candidates.extend([r, -r] if r else [r])
    for value in candidates:
        child = state.fork()
        child.provenance.append(f"{label}: {var} = {value}")
        _substitute_all(child, var, value)
        out.append(child)
    return out


def _normalize(state):
    """Strip nonzero factors; return False if some equation is a nonzero constant."""
    eqs = []
    for eq in state.equations:
        if eq:
            eq = _strip_nonzero(eq, [s for s in state.nonzero if s not in state.values])
            if eq.is_constant():
                return False
        eqs.append(eq)
    state.equations = eqs
    return True


def _resultant(p, q, var):
    """Sylvester resultant of p and q in ``var`` (degrees <= 2)."""
    cp, cq = p.coefficients_in(var), q.coefficients_in(var)
    m, n = max(cp), max(cq)
    if m > 2 or n > 2:
        raise DegreeTooHigh(f"resultant needs degree <= 2 in {var}")
    if m == 0 or n == 0:
        raise SolveError(f"both equations must contain {var}")
    a = [cp.get(k, MultiPoly()) for k in range(m, -1, -1)]
    b = [cq.get(k, MultiPoly()) for k in range(n, -1, -1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([MultiPoly()] * i + a + [MultiPoly()] * (size - i - m - 1))
    for i in range(m):
        rows.append([MultiPoly()] * i + b + [MultiPoly()] * (size - i - n - 1))
    return _det(rows)


def _det(rows):
    n = len(rows)
    total = MultiPoly()
    for perm in permutations(range(n)):
        term = MultiPoly.constant(1)
        for i, j in enumerate(perm):
            entry = rows[i][j]
            if not entry:
                break
            term = term * entry
        else:
            inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            total = total + (term if inversions % 2 == 0 else -term)
    return total


def _run_script_step(state, step):
    label = step.describe()
    if isinstance(step, DivideByNonzero):
        state.nonzero.add(step.symbol)
        state.provenance.append(label)
        return [state]
    if isinstance(step, Substitute):
        res = _resultant(state.equations[step.equation], state.equations[step.using], step.unknown)
        state.equations.append(res)
        state.provenance.append(f"{label} -> eq{len(state.equations) - 1}")
        return [state]
    if isinstance(step, SolveUnivariate):
        eq = state.equations[step.equation]
        free = [s for s in eq.symbols() if s != step.unknown]
        if free:
            raise NotTriangularizable(f"{label}: equation still depends on {', '.join(free)}")
        parts = eq.coefficients_in(step.unknown)
        if any(e % step.power for e in parts):
            raise SolveError(f"{label}: not a polynomial in {step.unknown}^{step.power}")
        deg = max(parts) // step.power
        coeffs = [Fraction(0)] * (deg + 1)
        for e, p in parts.items():
            coeffs[e // step.power] = p.constant_value()
        return _apply_roots(state, step.unknown, step.power, coeffs, label)
    raise TypeError(f"unknown script step {step!r}")


def _pick(state, unknowns):
    """Best univariate equation: (index, var, power, coeffs) with minimal degree."""
    best = None
    for idx, eq in enumerate(state.equations):
        if not eq:
            continue
        found = _univariate(eq, unknowns)
        if found is None:
            continue
        var, power, coeffs = found
        rank = (len(coeffs) - 1, idx)
        if best is None or rank < best[0]:
            best = (rank, idx, var, power, coeffs)
    return best


def _pick_division(state, unknowns):
    for eq in state.equations:
        if not eq:
            continue
        for var in eq.symbols():
            if var in unknowns and var not in state.nonzero and var not in state.values:
                k = eq.min_exponent(var)
                if k:
                    reduced = eq.divide_symbol(var, k)
                    found = _univariate(reduced, unknowns)
                    if found and len(found[2]) - 1 <= 2:
                        return var
    return None


def solve(system, nonzero=(), script=None):
    """All real branches of an instantiated system, each exactly verified."""
    unknowns = tuple(system.unknowns)
    if len(unknowns) > MAX_UNKNOWNS:
        raise SolveError(f"at most {MAX_UNKNOWNS} unknowns supported")
    nonzero = set(nonzero)
    root = _State(list(system.equations), {}, set(nonzero), [], list(script.steps) if script else [])
    stack = [root]
    leaves = []
    dead_inconsistent = 0
    while stack:
        state = stack.pop()
        if not _normalize(state):
            dead_inconsistent += 1
            continue
        if state.script:
            step = state.script.pop(0)
            stack.extend(reversed(_run_script_step(state, step)))
            continue
        pending = [eq for eq in state.equations if eq]
        if not pending:
            leaves.append(state)
            continue
        best = _pick(state, unknowns)
        if best is not None and best[0][0] <= 2:
            _, idx, var, power, coeffs = best
            children = _apply_roots(state, var, power, coeffs, f"eq{idx}")
            stack.extend(reversed(children))
            continue
        var = _pick_division(state, unknowns)
        if var is not None:
            state.nonzero.add(var)
            state.provenance.append(DivideByNonzero(var).describe())
            stack.append(state)
            continue
        if best is not None:
            raise DegreeTooHigh(f"eq{best[1]}: degree {best[0][0]} in {best[2]}^{best[3]}")
        raise NotTriangularizable(
            "no equation is univariate in one unknown; supply a SolveScript"
        )

    branches = {}
    for leaf in leaves:
        if any(not leaf.values.get(s, 1) for s in leaf.nonzero if s in leaf.values):
            continue
        free = tuple(s for s in unknowns if s not in leaf.values)
        branch = Branch.make(leaf.values, leaf.provenance, free)
        if not verify_assignment(system, branch, leaf.nonzero).ok:
            continue
        branches.setdefault(branch.key(), branch)
    if not branches and dead_inconsistent and not leaves:
        raise InconsistentSystem("every branch reduces some equation to a nonzero constant")
    return list(branches.values())


def branch_set(branches):
    """Hashable set view for exact comparison of branch collections."""
    return frozenset(frozenset((k, v.key()) for k, v in b.values.items()) for b in branches)


__all__ = [
    "Branch", "DegreeTooHigh", "DivideByNonzero", "IncompatibleRadicands", "InconsistentSystem",
    "InstantiatedSystem", "InstantiationError", "NegativeRadicand", "NestedRadical",
    "NotTriangularizable", "SolveError", "SolveScript", "SolveUnivariate", "Substitute",
    "Verdict", "branch_set", "instantiate", "solve", "verify_assignment",
]
