"""Comodule algebras: one- and two-sided coactions, gradings, coinvariants.

A :class:`Coaction` stores the structure map on generators and extends
it multiplicatively; comodule axioms and the algebra-map property
(compatibility with every rewrite rule of the module presentation) are
checked at construction.  Abelian-group gradings give the compact
encoding of torus coactions used all over the catalog; bicomodules add
the left/right compatibility; coinvariants are computed by exact
kernel linear algebra on a degree-truncated span.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .groups import GroupHopf, Weight
from .hopfcore import HopfPresentation, apply_coproduct_to_slot
from .ncpoly import (
    EMPTY_WORD,
    Element,
    Presentation,
    TensorElement,
    Word,
    tensor_multiply,
    tensor_normal_form,
    word_str,
)
from .report import Report
from .scalars import Scalar

RIGHT = "right"
LEFT = "left"


class CoactionError(Exception):
    pass


class Coaction:
    """A right coaction A -> A (x) H or left coaction A -> K (x) A.

    Slot convention: right coactions use (module, hopf), left coactions
    (hopf, module).  The generator table is extended multiplicatively.
    """

    def __init__(
        self,
        side: str,
        module: Presentation,
        hopf: HopfPresentation,
        table: Mapping[str, TensorElement],
        *,
        name: str = "",
        check: bool = True,
    ):
        if side not in (RIGHT, LEFT):
            raise CoactionError("side must be 'right' or 'left'")
        self.side = side
        self.module = module
        self.hopf = hopf
        self.name = name
        self.table = {g: table[g] for g in module.generators}
        self._cache: Dict[Word, TensorElement] = {}
        if check:
            self._verify()

    @property
    def slot_presentations(self) -> List[Presentation]:
        if self.side == RIGHT:
            return [self.module, self.hopf.base]
        return [self.hopf.base, self.module]

    def apply_word(self, w: Word) -> TensorElement:
        cached = self._cache.get(w)
        if cached is None:
            out = TensorElement.unit(2)
            slots = self.slot_presentations
            for g in w:
                out = tensor_multiply(out, self.table[g], slots)
            cached = self._cache[w] = out
        return cached

    def apply(self, e: Element) -> TensorElement:
        out = TensorElement(2)
        for w, c in e.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    # -- axioms ---------------------------------------------------------
    def _verify(self):
        slots = self.slot_presentations
        H = self.hopf
        for g, t in self.table.items():
            if t.slots != 2:
                raise CoactionError(f"coaction image of {g} must have 2 slots")
            if self.side == RIGHT:
                # (delta (x) id) delta == (id (x) Delta) delta in (A,H,H)
                via_coaction = TensorElement(3)
                for (mw, hw), c in t.terms.items():
                    inner = self.apply_word(mw)
                    for (mw2, hw2), c2 in inner.terms.items():
                        via_coaction = via_coaction + TensorElement(
                            3, {(mw2, hw2, hw): c * c2}
                        )
                via_coproduct = apply_coproduct_to_slot(t, 1, H)
                norm = [self.module, H.base, H.base]
            else:
                via_coaction = TensorElement(3)
                for (hw, mw), c in t.terms.items():
                    inner = self.apply_word(mw)
                    for (hw2, mw2), c2 in inner.terms.items():
                        via_coaction = via_coaction + TensorElement(
                            3, {(hw, hw2, mw2): c * c2}
                        )
                via_coproduct = apply_coproduct_to_slot(t, 0, H)
                norm = [H.base, H.base, self.module]
            if not tensor_normal_form(via_coaction - via_coproduct, norm).is_zero():
                raise CoactionError(f"coaction not coassociative on {g}")
            # counit law
            collapsed = Element.zero()
            for key, c in t.terms.items():
                mw, hw = (key if self.side == RIGHT else (key[1], key[0]))
                collapsed = collapsed + Element({mw: c * H.counit_word(hw)})
            if self.module.normal_form(collapsed) != Element.generator(g):
                raise CoactionError(f"counit law fails on {g}")
        for r in self.module.rules:
            diff = self.apply(Element.from_word(r.lhs)) - self.apply(r.rhs)
            if not tensor_normal_form(diff, self.slot_presentations).is_zero():
                raise CoactionError(
                    f"coaction incompatible with rule {word_str(r.lhs)}"
                )

    def __repr__(self):
        return f"<Coaction {self.side} {self.name or id(self)}>"


def trivial_coaction(side: str, module: Presentation, hopf: HopfPresentation) -> Coaction:
    table = {}
    for g in module.generators:
        if side == RIGHT:
            table[g] = TensorElement(2, {((g,), EMPTY_WORD): Scalar.one()})
        else:
            table[g] = TensorElement(2, {(EMPTY_WORD, (g,)): Scalar.one()})
    return Coaction(side, module, hopf, table, name="trivial")


class Grading:
    """Abelian-group grading: compact form of a (left or right) torus coaction.

    Each generator carries a weight in the grading group; every rewrite
    rule must be homogeneous.  Expansion to an honest :class:`Coaction`
    sends a generator g of weight w to g (x) t^w (right) or t^w (x) g.
    """

    def __init__(self, group: GroupHopf, module: Presentation, weights: Mapping[str, Weight], *, check: bool = True):
        self.group = group
        self.module = module
        self.weights = {g: group.normalize_weight(tuple(weights[g])) for g in module.generators}
        if check:
            self._verify()

    def weight_of_word(self, w: Word) -> Weight:
        total = [0] * len(self.group.moduli)
        for g in w:
            for i, x in enumerate(self.weights[g]):
                total[i] += x
        return self.group.normalize_weight(tuple(total))

    def weight_decomposition(self, e: Element) -> Dict[Weight, Element]:
        out: Dict[Weight, Element] = {}
        for w, c in e.terms.items():
            wt = self.weight_of_word(w)
            out.setdefault(wt, Element.zero())
            out[wt] = out[wt] + Element({w: c})
        return out

    def _verify(self):
        for r in self.module.rules:
            wt = self.weight_of_word(r.lhs)
            for w in r.rhs.terms:
                if self.weight_of_word(w) != wt:
                    raise CoactionError(
                        f"rule {word_str(r.lhs)} is not weight-homogeneous"
                    )

    def to_coaction(self, side: str, *, name: str = "") -> Coaction:
        table = {}
        for g in self.module.generators:
            tw = self.group.word_of(self.weights[g])
            if side == RIGHT:
                table[g] = TensorElement(2, {((g,), tw): Scalar.one()})
            else:
                table[g] = TensorElement(2, {(tw, (g,)): Scalar.one()})
        return Coaction(side, self.module, self.group.hopf, table, name=name or "grading")


class BicomoduleAlgebra:
    """Compatible left K- and right H-coactions on one algebra."""

    def __init__(self, left: Coaction, right: Coaction, *, check: bool = True):
        if left.side != LEFT or right.side != RIGHT:
            raise CoactionError("need a left coaction and a right coaction")
        if left.module is not right.module:
            raise CoactionError("coactions must share the module")
        self.left = left
        self.right = right
        self.module = left.module
        if check:
            rep = self.verify()
            if not rep.passed:
                f = rep.failures[0]
                raise CoactionError(f"bicomodule compatibility fails on {f.input}")

    def verify(self) -> Report:
        rep = Report(
            check="bicomodule-compatibility",
            instance=self.left.name + "/" + self.right.name,
        )
        norm = [self.left.hopf.base, self.module, self.right.hopf.base]
        for g in self.module.generators:
            delta = self.right.apply_word((g,))
            lhs = TensorElement(3)
            for (mw, hw), c in delta.terms.items():
                rho = self.left.apply_word(mw)
                for (kw, mw2), c2 in rho.terms.items():
                    lhs = lhs + TensorElement(3, {(kw, mw2, hw): c * c2})
            rho_g = self.left.apply_word((g,))
            rhs = TensorElement(3)
            for (kw, mw), c in rho_g.terms.items():
                delta2 = self.right.apply_word(mw)
                for (mw2, hw), c2 in delta2.terms.items():
                    rhs = rhs + TensorElement(3, {(kw, mw2, hw): c * c2})
            rep.record(g, tensor_normal_form(lhs, norm), tensor_normal_form(rhs, norm))
        return rep


def verify_bicomodule(b: BicomoduleAlgebra) -> Report:
    return b.verify()


def coact_apply(e: Element, c: Coaction) -> TensorElement:
    return tensor_normal_form(c.apply(e), c.slot_presentations)


def coinvariants(
    c: Coaction, degree_bound: int, *, size_cap: int = 20_000
) -> List[Element]:
    """Echelonized basis of the coinvariant subspace up to the degree bound.

    Exact kernel of (coaction - id (x) unit), restricted to the span of
    reduced module words of length <= degree_bound.
    """
    words = c.module.reduced_words(degree_bound, size_cap=size_cap)
    # columns: module words; equations indexed by (module word, hopf word)
    equations: Dict[Tuple[Word, Word], Dict[Word, Scalar]] = {}
    for w in words:
        t = tensor_normal_form(c.apply_word(w), c.slot_presentations)
        diff: Dict[Tuple[Word, Word], Scalar] = {}
        for key, coeff in t.terms.items():
            mw, hw = (key if c.side == RIGHT else (key[1], key[0]))
            diff[(mw, hw)] = diff.get((mw, hw), Scalar.zero()) + coeff
        unit_key = (w, EMPTY_WORD)
        diff[unit_key] = diff.get(unit_key, Scalar.zero()) - Scalar.one()
        for key, coeff in diff.items():
            if not coeff.is_zero():
                equations.setdefault(key, {})[w] = coeff
    rows = list(equations.values())
    kernel = linalg.kernel_basis(rows, words)
    return [Element(vec) for vec in kernel]


def adjoint_coaction(H: HopfPresentation, *, name: str = "") -> Coaction:
    """The right coaction h -> h_2 (x) S(h_1) h_3 of a Hopf algebra on itself."""
    if not H.has_antipode:
        raise CoactionError("adjoint coaction needs an antipode")
    table: Dict[str, TensorElement] = {}
    for g in H.base.generators:
        legs = H.coproduct_iter(Element.generator(g), 2)
        acc = TensorElement(2)
        for (w1, w2, w3), c in legs.terms.items():
            tail = H.base.multiply(H.antipode_word(w1), Element.from_word(w3))
            for tw, tc in tail.terms.items():
                acc = acc + TensorElement(2, {(w2, tw): c * tc})
        table[g] = tensor_normal_form(acc, [H.base, H.base])
    return Coaction(RIGHT, H.base, H, table, name=name or f"Ad({H.name})")


def adjoint_coaction_word(H: HopfPresentation, w: Word) -> TensorElement:
    """Adjoint coaction evaluated by direct Sweedler expansion (no
    multiplicative extension); independent route used by tests."""
    legs = H.coproduct_iter(Element.from_word(w), 2)
    acc = TensorElement(2)
    for (w1, w2, w3), c in legs.terms.items():
        tail = H.base.multiply(H.antipode_word(w1), Element.from_word(w3))
        for tw, tc in tail.terms.items():
            acc = acc + TensorElement(2, {(w2, tw): c * tc})
    return tensor_normal_form(acc, [H.base, H.base])
