"""Sparse multivariate polynomials over exact rationals.

Monomials are exponent tuples of fixed length ``nvars``.  The term order used
throughout is reverse lexicographic: exponent vectors are compared at the
largest index where they differ.  Serialized output always lists terms in
descending reverse-lex order; canonical sign choices anchor on the
reverse-lex *minimal* (trailing) term.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


def revlex_key(alpha: Exponent) -> tuple[int, ...]:
    """Sort key for the reverse-lex order (larger key = larger monomial)."""
    return tuple(reversed(alpha))


def multiset_key(alpha: Exponent) -> Exponent:
    """Sorted exponent multiset; constant on permutation orbits of monomials."""
    return tuple(sorted(alpha))


class Poly:
    """Immutable polynomial with Fraction coefficients keyed by exponent tuple."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction | int] | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        cleaned: dict[Exponent, Fraction] = {}
        for exp, coeff in items:
            exp = tuple(exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = cleaned.get(exp, Fraction(0)) + Fraction(coeff)
            if c:
                cleaned[exp] = c
            elif exp in cleaned:
                del cleaned[exp]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, exp: Exponent, coeff: Fraction | int = 1) -> "Poly":
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Poly":
        """The variable x_i (1-based)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        exp = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {exp: 1})

    # -- basic queries ------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def terms(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Terms in descending reverse-lex order."""
        for exp in sorted(self._terms, key=revlex_key, reverse=True):
            yield exp, self._terms[exp]

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree (max |alpha|); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(exp) for exp in self._terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(exp) for exp in self._terms}
        return len(degrees) <= 1

    def homogeneous_components(self) -> dict[int, "Poly"]:
        parts: dict[int, dict[Exponent, Fraction]] = {}
        for exp, coeff in self._terms.items():
            parts.setdefault(sum(exp), {})[exp] = coeff
        return {d: Poly(self.nvars, t) for d, t in sorted(parts.items())}

    def leading_term(self) -> tuple[Exponent, Fraction]:
        """Greatest term in reverse-lex order; raises on zero."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=revlex_key)
        return exp, self._terms[exp]

    def trailing_term(self) -> tuple[Exponent, Fraction]:
        """Least term in reverse-lex order; raises on zero."""
        if not self._terms:
            raise ValueError("zero polynomial has no trailing term")
        exp = min(self._terms, key=revlex_key)
        return exp, self._terms[exp]

    # -- arithmetic ----------------------------------------------------------

    def _require_same_vars(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._require_same_vars(other)
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            c = terms.get(exp, Fraction(0)) + coeff
            if c:
                terms[exp] = c
            elif exp in terms:
                del terms[exp]
        return Poly(self.nvars, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self.__add__(-other)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._require_same_vars(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = terms.get(exp, Fraction(0)) + c1 * c2
                if c:
                    terms[exp] = c
                elif exp in terms:
                    del terms[exp]
        return Poly(self.nvars, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Fraction | int) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: coeff * c for e, coeff in self._terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.one(self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {poly_to_text(self)!r})"

    # -- variable bookkeeping -------------------------------------------------

    def extend_vars(self, nvars: int) -> "Poly":
        """Reinterpret in a larger variable set (new trailing variables unused)."""
        if nvars < self.nvars:
            raise ValueError("extend_vars cannot shrink")
        pad = (0,) * (nvars - self.nvars)
        return Poly(nvars, {exp + pad: c for exp, c in self._terms.items()})

    def truncate_vars(self, nvars: int) -> "Poly":
        """Drop unused trailing variables; raises if any of them occur."""
        if nvars > self.nvars:
            raise ValueError("truncate_vars cannot grow")
        for exp in self._terms:
            if any(exp[nvars:]):
                raise ValueError("polynomial involves a dropped variable")
        return Poly(nvars, {exp[:nvars]: c for exp, c in self._terms.items()})

    def coefficient_of(self, var_exponents: Mapping[int, int]) -> "Poly":
        """Coefficient polynomial of prod x_i^{e_i} over the remaining variables.

        ``var_exponents`` maps 1-based variable indices to required exponents;
        the extracted coefficient has those variables set to exponent 0.
        """
        fixed = {i - 1: e for i, e in var_exponents.items()}
        terms = {}
        for exp, coeff in self._terms.items():
            if all(exp[pos] == want for pos, want in fixed.items()):
                reduced = tuple(0 if pos in fixed else e for pos, e in enumerate(exp))
                terms[reduced] = terms.get(reduced, Fraction(0)) + coeff
        return Poly(self.nvars, terms)

    def max_variable_degree(self) -> int:
        """Largest single-variable exponent appearing; 0 for constants/zero."""
        return max((max(exp) for exp in self._terms), default=0)

    def evaluate(self, point: Iterable[Fraction | int]) -> Fraction:
        values = [Fraction(v) for v in point]
        if len(values) != self.nvars:
            raise ValueError("point length mismatch")
        total = Fraction(0)
        for exp, coeff in self._terms.items():
            term = coeff
            for v, e in zip(values, exp):
                term *= v**e
            total += term
        return total


# -- contract operations -----------------------------------------------------


def pairing(f: Poly, g: Poly) -> Fraction:
    """Apolarity pairing <f, g> = (f(d/dx) g)(0) = sum_a a! f_a g_a."""
    f._require_same_vars(g)
    small, large = (f, g) if len(f) <= len(g) else (g, f)
    total = Fraction(0)
    for exp, coeff in small._terms.items():
        other = large._terms.get(exp)
        if other is not None:
            weight = 1
            for e in exp:
                weight *= factorial(e)
            total += weight * coeff * other
    return total


def leading_term_revlex(p: Poly) -> tuple[Exponent, Fraction]:
    return p.leading_term()


def lambda_of_multiindex(alpha: Exponent) -> tuple[int, ...]:
    """Fibre-size sequence (#{j: a_j = 0}, #{j: a_j = 1}, ...) up to max(a)."""
    alpha = tuple(alpha)
    counts = [0] * (max(alpha) + 1 if alpha else 1)
    for value in alpha:
        counts[value] += 1
    return tuple(counts)


def isotypic_project(p: Poly, lam: Iterable[int]) -> Poly:
    """Keep exactly the terms whose exponent fibre sequence equals ``lam``."""
    lam = tuple(lam)
    return Poly(
        p.nvars,
        {e: c for e, c in p._terms.items() if lambda_of_multiindex(e) == lam},
    )


def primitive_normal_form(p: Poly) -> Poly:
    """Canonical scalar multiple: integer coefficients, content 1, positive
    coefficient on the reverse-lex minimal term.  Zero stays zero."""
    if p.is_zero():
        return p
    denom_lcm = 1
    for _, coeff in p._terms.items():
        denom_lcm = denom_lcm * coeff.denominator // gcd(denom_lcm, coeff.denominator)
    numerators = [coeff * denom_lcm for coeff in p._terms.values()]
    content = 0
    for value in numerators:
        content = gcd(content, int(value))
    scale = Fraction(denom_lcm, content)
    if p.trailing_term()[1] < 0:
        scale = -scale
    return p.scale(scale)


# -- serialization -------------------------------------------------------------


def poly_to_json(p: Poly) -> list[dict]:
    return [
        {"exp": list(exp), "num": str(c.numerator), "den": str(c.denominator)}
        for exp, c in p.terms()
    ]


def poly_from_json(data: Iterable[Mapping], nvars: int | None = None) -> Poly:
    terms = []
    for item in data:
        exp = tuple(int(e) for e in item["exp"])
        terms.append((exp, Fraction(int(item["num"]), int(item["den"]))))
    if nvars is None:
        if not terms:
            raise ValueError("cannot infer variable count from an empty term list")
        nvars = len(terms[0][0])
    return Poly(nvars, terms)


def _format_monomial(exp: Exponent) -> str:
    parts = []
    for i, e in enumerate(exp):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def poly_to_text(p: Poly) -> str:
    """Human-readable form, terms in descending reverse-lex order."""
    if p.is_zero():
        return "0"
    pieces = []
    for index, (exp, coeff) in enumerate(p.terms()):
        mono = _format_monomial(exp)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if index == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
