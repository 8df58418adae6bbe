"""Groebner-backed presentations for the catalog's commutative rings.

The classical algebras in the catalog (orthogonal groups in the split
basis, spheres, chart algebras with inverted radii) are commutative
quotients.  To realize them in the rewriting engine their defining
ideals are completed once, at build time, to a reduced Groebner basis
in the same degree-lex order the word rewriting uses, and the basis is
emitted as sorted-word rewrite rules next to the generator-sorting
rules.  The emitted system is then re-verified by the generic bounded
confluence check, so nothing here is trusted blindly.

The engine's word order (degree, then ascending comparison of sorted
words) coincides with graded reverse lexicographic order when the
variables are listed from the largest generator down; sympy computes
that basis exactly over Q.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from ..scalars import Scalar

Expvec = Tuple[int, ...]


class GroebnerError(Exception):
    pass


def element_to_expr(e, symbol_map):
    expr = sympy.Integer(0)
    for w, c in e.terms.items():
        if not c.is_rational():
            raise GroebnerError("Groebner completion needs rational coefficients")
        term = sympy.Rational(c.as_fraction())
        for g in w:
            term *= symbol_map[g]
        expr += term
    return expr


def _scalar(x) -> Scalar:
    return Scalar.from_fraction(Fraction(int(x.p), int(x.q)))


def commutative_presentation(
    generators: Sequence[str],
    relations,
    involution=None,
    *,
    overlap_bound: Optional[int] = None,
):
    """Presentation of a commutative quotient algebra.

    ``relations`` are Elements equated to zero.  The reduced Groebner
    basis becomes sorted-word rules; generator sorting rules are added
    for all surviving generator pairs.
    """
    from ..ncpoly import DEFAULT_OVERLAP_BOUND, Element, Presentation, RewriteRule

    gens = tuple(generators)
    syms = sympy.symbols([f"v{i}" for i in range(len(gens))])
    symbol_map = dict(zip(gens, syms))
    exprs = [element_to_expr(r, symbol_map) for r in relations]
    exprs = [e for e in exprs if e != 0]
    if exprs:
        gb = sympy.groebner(exprs, *reversed(syms), order="grevlex", domain=sympy.QQ)
        if gb.exprs == [sympy.Integer(1)]:
            raise GroebnerError("inconsistent relations: ideal is the whole ring")
        basis_polys = [p for p in gb.polys]
    else:
        basis_polys = []

    killed = set()
    gb_rules: List[Tuple[Tuple[str, ...], Element]] = []
    for p in basis_polys:
        # monomials come back in the listed (reversed) variable order
        terms = p.terms(order="grevlex")
        lead_exp, lead_coeff = terms[0]
        lead = tuple(reversed(lead_exp))
        word = _expvec_word(lead, gens)
        if len(word) == 1:
            killed.add(word[0])
        rhs_terms = {}
        inv = _scalar(sympy.Rational(lead_coeff)).inverse()
        for exp, coeff in terms[1:]:
            mono = tuple(reversed(exp))
            rhs_terms[_expvec_word(mono, gens)] = -(_scalar(sympy.Rational(coeff)) * inv)
        gb_rules.append((word, Element(rhs_terms)))

    rules = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if gens[i] in killed or gens[j] in killed:
                continue
            rules.append(
                RewriteRule((gens[j], gens[i]), Element.from_word((gens[i], gens[j])))
            )
    max_len = 2
    for lhs, rhs in gb_rules:
        max_len = max(max_len, len(lhs))
        rules.append(RewriteRule(lhs, rhs))
    bound = (
        overlap_bound
        if overlap_bound is not None
        else max(DEFAULT_OVERLAP_BOUND, 2 * max_len - 1)
    )
    return Presentation(gens, rules, involution, overlap_bound=bound)


def _expvec_word(m: Expvec, gens: Sequence[str]) -> Tuple[str, ...]:
    out: List[str] = []
    for i, e in enumerate(m):
        out.extend([gens[i]] * e)
    return tuple(out)
