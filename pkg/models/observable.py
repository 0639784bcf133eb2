"""Polynomial classical observables in canonical coordinates."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Tuple, Union

import numpy as np
import sympy as sp


@lru_cache(maxsize=None)
def canonical_symbols(n: int) -> Tuple[Tuple[sp.Symbol, ...], Tuple[sp.Symbol, ...]]:
    """Generators (q..., p...); plain q, p in one dimension."""
    if n == 1:
        return (sp.Symbol('q', real=True),), (sp.Symbol('p', real=True),)
    qs = tuple(sp.Symbol(f'q{j}', real=True) for j in range(1, n + 1))
    ps = tuple(sp.Symbol(f'p{j}', real=True) for j in range(1, n + 1))
    return qs, ps


@lru_cache(maxsize=None)
def complex_symbols(n: int) -> Tuple[Tuple[sp.Symbol, ...], Tuple[sp.Symbol, ...]]:
    """Generators (z..., zbar...) treated as independent."""
    if n == 1:
        return (sp.Symbol('z'),), (sp.Symbol('zbar'),)
    zs = tuple(sp.Symbol(f'z{j}') for j in range(1, n + 1))
    zbs = tuple(sp.Symbol(f'zbar{j}') for j in range(1, n + 1))
    return zs, zbs


ExprLike = Union[str, sp.Expr, int, float, complex]


@dataclass(frozen=True, eq=False)
class Observable:
    """Complex polynomial f(q, p) on R^2n.

    Stored as an exact sympy ``Poly`` so brackets and derivatives stay
    coefficient-exact.
    """

    poly: sp.Poly
    n: int = 1

    def __post_init__(self):
        gens = self.generators
        if tuple(self.poly.gens) != gens:
            object.__setattr__(self, 'poly', sp.Poly(self.poly.as_expr(), *gens))

    # ---- construction ----------------------------------------------------

    @classmethod
    def from_expr(cls, expr: ExprLike, n: int = 1) -> "Observable":
        """Parse an expression in q, p (q1..qn, p1..pn when n > 1)."""
        qs, ps = canonical_symbols(n)
        names = {str(s): s for s in qs + ps}
        if isinstance(expr, str):
            expr = sp.sympify(expr, locals=names)
        else:
            expr = sp.sympify(expr)
        expr = sp.nsimplify(expr, rational=True) if expr.has(sp.Float) else expr
        extra = expr.free_symbols - set(qs + ps)
        if extra:
            raise ValueError(f"observable depends on unknown symbols {sorted(map(str, extra))}")
        return cls(sp.Poly(sp.expand(expr), *(qs + ps)), n=n)

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, ...], complex], n: int = 1) -> "Observable":
        """Build from {exponent multi-index over (q..., p...): coefficient}."""
        qs, ps = canonical_symbols(n)
        gens = qs + ps
        expr = sp.Integer(0)
        for exponents, coeff in terms.items():
            if len(exponents) != 2 * n:
                raise ValueError(f"multi-index {exponents} does not match dimension {n}")
            monomial = sp.Mul(*[g ** e for g, e in zip(gens, exponents)])
            expr += sp.nsimplify(sp.sympify(coeff), rational=True) * monomial
        return cls(sp.Poly(expr, *gens), n=n)

    @classmethod
    def from_complex(cls, expr: ExprLike, n: int = 1) -> "Observable":
        """Parse an expression in z, zbar with z = p + iq."""
        qs, ps = canonical_symbols(n)
        zs, zbs = complex_symbols(n)
        names = {str(s): s for s in zs + zbs}
        expr = sp.sympify(expr, locals=names) if isinstance(expr, str) else sp.sympify(expr)
        subs = {}
        for q, p, z, zb in zip(qs, ps, zs, zbs):
            subs[z] = p + sp.I * q
            subs[zb] = p - sp.I * q
        return cls.from_expr(sp.expand(expr.subs(subs)), n=n)

    @classmethod
    def constant(cls, value: complex, n: int = 1) -> "Observable":
        return cls.from_expr(sp.nsimplify(sp.sympify(value), rational=True), n=n)

    # ---- structure -------------------------------------------------------

    @property
    def generators(self) -> Tuple[sp.Symbol, ...]:
        qs, ps = canonical_symbols(self.n)
        return qs + ps

    @property
    def q_symbols(self) -> Tuple[sp.Symbol, ...]:
        return canonical_symbols(self.n)[0]

    @property
    def p_symbols(self) -> Tuple[sp.Symbol, ...]:
        return canonical_symbols(self.n)[1]

    @property
    def expr(self) -> sp.Expr:
        return self.poly.as_expr()

    @property
    def terms(self) -> Dict[Tuple[int, ...], complex]:
        return {monom: complex(coeff) for monom, coeff in self.poly.terms()}

    @property
    def degree(self) -> int:
        if self.poly.is_zero:
            return 0
        return self.poly.total_degree()

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def is_real(self) -> bool:
        return all(sp.im(c) == 0 for c in self.poly.coeffs())

    def diff_q(self, j: int = 0) -> "Observable":
        return Observable(self.poly.diff(self.q_symbols[j]), n=self.n)

    def diff_p(self, j: int = 0) -> "Observable":
        return Observable(self.poly.diff(self.p_symbols[j]), n=self.n)

    def laplacian(self) -> "Observable":
        """Σ (∂²/∂q_j² + ∂²/∂p_j²)."""
        total = sp.Poly(0, *self.generators)
        for g in self.generators:
            total = total + self.poly.diff(g).diff(g)
        return Observable(total, n=self.n)

    def in_complex_coordinates(self) -> Dict[Tuple[int, ...], complex]:
        """Coefficients of z^a zbar^b (multi-indices over (z..., zbar...))."""
        qs, ps = canonical_symbols(self.n)
        zs, zbs = complex_symbols(self.n)
        subs = {}
        for q, p, z, zb in zip(qs, ps, zs, zbs):
            subs[q] = (z - zb) / (2 * sp.I)
            subs[p] = (z + zb) / 2
        expr = sp.expand(self.expr.subs(subs, simultaneous=True))
        poly = sp.Poly(expr, *(zs + zbs))
        return {monom: complex(coeff) for monom, coeff in poly.terms()}

    # ---- evaluation ------------------------------------------------------

    def lambdify(self) -> Callable[[np.ndarray], np.ndarray]:
        """Vectorized evaluator taking points of shape (..., 2n)."""
        func = sp.lambdify(self.generators, self.expr, modules='numpy')

        def evaluate(points: np.ndarray) -> np.ndarray:
            points = np.asarray(points, dtype=float)
            args = [points[..., k] for k in range(2 * self.n)]
            value = np.asarray(func(*args), dtype=complex)
            return np.broadcast_to(value, points.shape[:-1]).copy()

        return evaluate

    def __call__(self, point) -> complex:
        coords = getattr(point, 'coords', point)
        return complex(self.lambdify()(np.asarray(coords, dtype=float)))

    # ---- algebra ---------------------------------------------------------

    def _check_dimension(self, other: "Observable") -> None:
        if other.n != self.n:
            from engine.errors import DimensionMismatchError
            raise DimensionMismatchError(f"observables on R^{2 * self.n} and R^{2 * other.n}")

    def _coerce(self, other) -> "Observable":
        if isinstance(other, Observable):
            self._check_dimension(other)
            return other
        return Observable.constant(other, n=self.n)

    def __add__(self, other) -> "Observable":
        other = self._coerce(other)
        return Observable(self.poly + other.poly, n=self.n)

    __radd__ = __add__

    def __sub__(self, other) -> "Observable":
        other = self._coerce(other)
        return Observable(self.poly - other.poly, n=self.n)

    def __rsub__(self, other) -> "Observable":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Observable":
        other = self._coerce(other)
        return Observable(self.poly * other.poly, n=self.n)

    __rmul__ = __mul__

    def __neg__(self) -> "Observable":
        return Observable(-self.poly, n=self.n)

    def __eq__(self, other) -> bool:
        if isinstance(other, Observable):
            return self.n == other.n and (self.poly - other.poly).is_zero
        try:
            return (self.poly - sp.nsimplify(other)).is_zero
        except (TypeError, sp.SympifyError):
            return NotImplemented

    def __hash__(self):
        return hash((self.n, self.poly))

    def __repr__(self) -> str:
        return f"Observable({self.expr}, n={self.n})"

    def to_dict(self) -> dict:
        return {'expr': str(self.expr), 'n': self.n, 'degree': self.degree}
