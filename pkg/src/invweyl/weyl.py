"""Differential operators with polynomial coefficients, in normal order.

A :class:`DiffOp` is a finite sum of normally ordered words
``c * x^a d^b`` (multiplication in front, differentiation behind).
Composition reorders via ``d x = x d + 1``.  Also provided: power operators
``sum_i x_i^k d_i^l``, the Euler-operator calculus (falling factorials and
Stirling expansions of powers of ``x_i d_i``), Jucys-Murphy actions,
the transpose anti-automorphism, and finite group actions on polynomials
(variable permutations and diagonal weight classes).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, perm
from typing import Iterable, Iterator, Mapping, Sequence

from .poly import Exponent, Poly, revlex_key

OpTerm = tuple[Exponent, Exponent]


class DiffOp:
    """Normally ordered differential operator on ``nvars`` variables."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[OpTerm, Fraction | int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        cleaned: dict[OpTerm, Fraction] = {}
        for (a, b), coeff in items:
            a, b = tuple(a), tuple(b)
            if len(a) != nvars or len(b) != nvars:
                raise ValueError("exponent length mismatch")
            if any(e < 0 for e in a + b):
                raise ValueError("negative exponent")
            c = cleaned.get((a, b), Fraction(0)) + Fraction(coeff)
            if c:
                cleaned[(a, b)] = c
            elif (a, b) in cleaned:
                del cleaned[(a, b)]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "DiffOp":
        return cls(nvars)

    @classmethod
    def identity(cls, nvars: int) -> "DiffOp":
        z = (0,) * nvars
        return cls(nvars, {(z, z): 1})

    @classmethod
    def monomial_op(cls, a: Exponent, b: Exponent, coeff: Fraction | int = 1) -> "DiffOp":
        return cls(len(tuple(a)), {(tuple(a), tuple(b)): coeff})

    @classmethod
    def x(cls, i: int, nvars: int) -> "DiffOp":
        """Multiplication by x_i (1-based)."""
        a = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {(a, (0,) * nvars): 1})

    @classmethod
    def d(cls, i: int, nvars: int) -> "DiffOp":
        """Differentiation d/dx_i (1-based)."""
        b = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {((0,) * nvars, b): 1})

    @classmethod
    def from_poly(cls, p: Poly, differentiate: bool = False) -> "DiffOp":
        """Multiplication by ``p``, or ``p(d/dx)`` when ``differentiate``."""
        zero = (0,) * p.nvars
        if differentiate:
            return cls(p.nvars, {(zero, exp): c for exp, c in p.terms()})
        return cls(p.nvars, {(exp, zero): c for exp, c in p.terms()})

    # -- structure ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[tuple[OpTerm, Fraction]]:
        """Terms ordered by descending reverse-lex on (x-part, d-part)."""
        def key(term: OpTerm):
            return (revlex_key(term[0]), revlex_key(term[1]))

        for ab in sorted(self._terms, key=key, reverse=True):
            yield ab, self._terms[ab]

    def homogeneous_degree(self) -> int | None:
        """The common degree shift |a|-|b| of all terms, or None if mixed.

        The zero operator reports 0.
        """
        degrees = {sum(a) - sum(b) for a, b in self._terms}
        if not degrees:
            return 0
        if len(degrees) > 1:
            return None
        return degrees.pop()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffOp)
            and self.nvars == other.nvars
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"DiffOp({self.nvars}, {diffop_to_text(self)!r})"

    # -- algebra ----------------------------------------------------------

    def _require_same_vars(self, other: "DiffOp") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if not isinstance(other, DiffOp):
            return NotImplemented
        self._require_same_vars(other)
        terms = dict(self._terms)
        for ab, coeff in other._terms.items():
            c = terms.get(ab, Fraction(0)) + coeff
            if c:
                terms[ab] = c
            elif ab in terms:
                del terms[ab]
        return DiffOp(self.nvars, terms)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self.__add__(-other)

    def __neg__(self) -> "DiffOp":
        return DiffOp(self.nvars, {ab: -c for ab, c in self._terms.items()})

    def scale(self, c: Fraction | int) -> "DiffOp":
        c = Fraction(c)
        if not c:
            return DiffOp.zero(self.nvars)
        return DiffOp(self.nvars, {ab: coeff * c for ab, coeff in self._terms.items()})

    def __mul__(self, other):
        """Operator composition self ∘ other (or scalar scaling)."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        self._require_same_vars(other)
        result: dict[OpTerm, Fraction] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                # Normal-order d^{b1} x^{a2} one variable at a time:
                # d^s x^t = sum_j C(s,j) t!/(t-j)! x^{t-j} d^{s-j}.
                base = c1 * c2
                shifts = [
                    [(j, comb(s, j) * perm(t, j)) for j in range(min(s, t) + 1)]
                    for s, t in zip(b1, a2)
                ]
                stack = [((), 1)]
                for options in shifts:
                    stack = [(js + (j,), w * wj) for js, w in stack for j, wj in options]
                for js, weight in stack:
                    a = tuple(x1 + x2 - j for x1, x2, j in zip(a1, a2, js))
                    b = tuple(y1 + y2 - j for y1, y2, j in zip(b2, b1, js))
                    c = result.get((a, b), Fraction(0)) + base * weight
                    if c:
                        result[(a, b)] = c
                    elif (a, b) in result:
                        del result[(a, b)]
        return DiffOp(self.nvars, result)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "DiffOp":
        if k < 0:
            raise ValueError("negative power")
        result = DiffOp.identity(self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def extend_vars(self, nvars: int) -> "DiffOp":
        if nvars < self.nvars:
            raise ValueError("extend_vars cannot shrink")
        pad = (0,) * (nvars - self.nvars)
        return DiffOp(nvars, {(a + pad, b + pad): c for (a, b), c in self._terms.items()})

    # -- action -------------------------------------------------------------

    def apply(self, p: Poly) -> Poly:
        if self.nvars != p.nvars:
            raise ValueError("variable count mismatch")
        terms: dict[Exponent, Fraction] = {}
        for (a, b), c in self._terms.items():
            for exp, coeff in p._terms.items():
                weight = 1
                for e, db in zip(exp, b):
                    if db:
                        if e < db:
                            weight = 0
                            break
                        weight *= perm(e, db)
                if not weight:
                    continue
                target = tuple(e - db + da for e, db, da in zip(exp, b, a))
                value = terms.get(target, Fraction(0)) + c * coeff * weight
                if value:
                    terms[target] = value
                elif target in terms:
                    del terms[target]
        return Poly(self.nvars, terms)

    def transpose(self) -> "DiffOp":
        """Anti-automorphism with x_i -> d_i and d_i -> x_i.

        Adjoint for the apolarity pairing: <P f, g> = <f, P^t g>.
        """
        return DiffOp(self.nvars, {(b, a): c for (a, b), c in self._terms.items()})


# -- standard operators --------------------------------------------------------


def power_op(k: int, l: int, n: int) -> DiffOp:
    """sum_i x_i^k d_i^l on n variables."""
    if k < 0 or l < 0:
        raise ValueError("negative exponent")
    if n < 1:
        raise ValueError("need at least one variable")
    terms = {}
    for i in range(n):
        a = tuple(k if j == i else 0 for j in range(n))
        b = tuple(l if j == i else 0 for j in range(n))
        terms[(a, b)] = terms.get((a, b), 0) + 1
    return DiffOp(n, terms)


def euler_op(n: int) -> DiffOp:
    """The Euler (degree) operator sum_i x_i d_i."""
    return power_op(1, 1, n)


def nabla_falling(k: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of p_k(t) = t(t-1)...(t-k+1), so that
    x^k d^k acts on x^m as p_k(m)."""
    if k < 0:
        raise ValueError("negative order")
    coeffs = [Fraction(1)]
    for step in range(k):
        # multiply by (t - step)
        shifted = [Fraction(0)] + coeffs
        coeffs = [a - step * b for a, b in zip(shifted, coeffs + [Fraction(0)])]
    return tuple(coeffs)


@lru_cache(maxsize=None)
def stirling2(i: int, k: int) -> int:
    """Stirling numbers of the second kind S(i, k)."""
    if i == k == 0:
        return 1
    if i == 0 or k == 0 or k > i:
        return 0
    return k * stirling2(i - 1, k) + stirling2(i - 1, k - 1)


def nabla_power_op(i: int, j: int, n: int) -> DiffOp:
    """(x_j d_j)^i expanded in normal order: sum_k S(i,k) x_j^k d_j^k."""
    if i < 1:
        raise ValueError("power must be >= 1")
    if not 1 <= j <= n:
        raise ValueError("variable index out of range")
    terms = {}
    for k in range(1, i + 1):
        s = stirling2(i, k)
        if s:
            a = tuple(k if m == j - 1 else 0 for m in range(n))
            terms[(a, a)] = Fraction(s)
    return DiffOp(n, terms)


def nabla_power_sum(i: int, n: int) -> DiffOp:
    """t_i = sum_j (x_j d_j)^i; diagonal on monomials with eigenvalue
    sum_j alpha(j)^i."""
    total = DiffOp.zero(n)
    for j in range(1, n + 1):
        total = total + nabla_power_op(i, j, n)
    return total


# -- group actions ---------------------------------------------------------------


def permute_variables(p: Poly, sigma: Sequence[int]) -> Poly:
    """Apply the substitution x_i -> x_{sigma(i)} (sigma 1-based, a bijection)."""
    n = p.nvars
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("sigma is not a permutation of 1..n")
    terms = {}
    for exp, coeff in p._terms.items():
        new = [0] * n
        for pos, e in enumerate(exp):
            new[sigma[pos] - 1] = e
        terms[tuple(new)] = coeff
    return Poly(n, terms)


def swap_variables(p: Poly, i: int, j: int) -> Poly:
    sigma = list(range(1, p.nvars + 1))
    sigma[i - 1], sigma[j - 1] = sigma[j - 1], sigma[i - 1]
    return permute_variables(p, sigma)


def jm_apply(i: int, p: Poly) -> Poly:
    """Jucys-Murphy action L_i p = sum_{j<i} p with x_j and x_i swapped."""
    if not 2 <= i <= p.nvars:
        raise ValueError(f"index {i} out of range 2..{p.nvars}")
    total = Poly.zero(p.nvars)
    for j in range(1, i):
        total = total + swap_variables(p, j, i)
    return total


def weight_components(p: Poly, weights: Sequence[int], e: int) -> dict[int, Poly]:
    """Split p by the residue class sum_i w_i a_i mod e of its terms."""
    if len(weights) != p.nvars:
        raise ValueError("weight vector length mismatch")
    if e < 1:
        raise ValueError("modulus must be positive")
    parts: dict[int, dict[Exponent, Fraction]] = {}
    for exp, coeff in p._terms.items():
        r = sum(w * a for w, a in zip(weights, exp)) % e
        parts.setdefault(r, {})[exp] = coeff
    return {r: Poly(p.nvars, t) for r, t in sorted(parts.items())}


def weight_residue(p: Poly, weights: Sequence[int], e: int) -> int:
    """The common residue of all terms; raises if the terms are mixed."""
    parts = weight_components(p, weights, e)
    if len(parts) != 1:
        raise ValueError(f"mixed weight residues {sorted(parts)}")
    return next(iter(parts))


# -- eigen helpers -----------------------------------------------------------------


def op_eigenvalue(op: DiffOp, p: Poly) -> Fraction:
    """The scalar c with op(p) = c p; raises if p is not an eigenvector."""
    if p.is_zero():
        raise ValueError("zero vector")
    image = op.apply(p)
    exp, coeff = p.leading_term()
    c = image.coefficient(exp) / coeff
    if image != p.scale(c):
        raise ValueError("not an eigenvector")
    return c


def jm_eigenvalue(i: int, p: Poly) -> Fraction:
    """The scalar c with L_i p = c p; raises if p is not an eigenvector."""
    if p.is_zero():
        raise ValueError("zero vector")
    image = jm_apply(i, p)
    exp, coeff = p.leading_term()
    c = image.coefficient(exp) / coeff
    if image != p.scale(c):
        raise ValueError("not an eigenvector")
    return c


# -- serialization ------------------------------------------------------------------


def diffop_to_json(op: DiffOp) -> list[dict]:
    return [
        {"x": list(a), "d": list(b), "num": str(c.numerator), "den": str(c.denominator)}
        for (a, b), c in op.terms()
    ]


def diffop_from_json(data: Iterable[Mapping], nvars: int | None = None) -> DiffOp:
    terms = []
    for item in data:
        a = tuple(int(e) for e in item["x"])
        b = tuple(int(e) for e in item["d"])
        terms.append(((a, b), Fraction(int(item["num"]), int(item["den"]))))
    if nvars is None:
        if not terms:
            raise ValueError("cannot infer variable count")
        nvars = len(terms[0][0][0])
    return DiffOp(nvars, terms)


def _format_word(a: Exponent, b: Exponent) -> str:
    parts = []
    for i, e in enumerate(a):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    for i, e in enumerate(b):
        if e == 1:
            parts.append(f"d{i + 1}")
        elif e > 1:
            parts.append(f"d{i + 1}^{e}")
    return "*".join(parts)


def diffop_to_text(op: DiffOp) -> str:
    if op.is_zero():
        return "0"
    pieces = []
    for index, ((a, b), coeff) in enumerate(op.terms()):
        word = _format_word(a, b)
        mag = abs(coeff)
        if not word:
            body = str(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{mag}*{word}"
        if index == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
