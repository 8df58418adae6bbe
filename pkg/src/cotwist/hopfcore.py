"""Hopf structure on a presented algebra.

A :class:`HopfPresentation` layers coproduct, counit and antipode
tables over a :class:`~cotwist.ncpoly.Presentation`.  The coproduct and
counit extend multiplicatively, the antipode anti-multiplicatively; all
three are checked at construction: the coalgebra axioms on every
generator, and compatibility with every rewrite rule (so the maps are
well defined on the quotient).

Linear functionals with the convolution product and finite dual
pairings live here as well; they are the raw material for 2-cocycles.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

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
from .scalars import Scalar


class HopfError(Exception):
    pass


class HopfPresentation:
    """A bialgebra or Hopf algebra presented by tables on generators."""

    def __init__(
        self,
        base: Presentation,
        coproduct: Mapping[str, TensorElement],
        counit: Mapping[str, Scalar],
        antipode: Optional[Mapping[str, Element]] = None,
        *,
        name: str = "",
        check: bool = True,
    ):
        self.base = base
        self.name = name
        self._coproduct_table = {g: coproduct[g] for g in base.generators}
        self._counit_table = {g: counit[g] for g in base.generators}
        self._antipode_table = dict(antipode) if antipode is not None else None
        self._cop_cache: Dict[Word, TensorElement] = {}
        self._cop_iter_cache: Dict[Tuple[Word, int], TensorElement] = {}
        self._antipode_cache: Dict[Word, Element] = {}
        if check:
            self._verify()

    @property
    def has_antipode(self) -> bool:
        return self._antipode_table is not None

    # -- structure maps ------------------------------------------------
    def coproduct_word(self, w: Word) -> TensorElement:
        cached = self._cop_cache.get(w)
        if cached is None:
            out = TensorElement.unit(2)
            pair = [self.base, self.base]
            for g in w:
                out = tensor_multiply(out, self._coproduct_table[g], pair)
            cached = self._cop_cache[w] = out
        return cached

    def coproduct(self, e: Element) -> TensorElement:
        out = TensorElement(2)
        for w, c in e.terms.items():
            out = out + self.coproduct_word(w).scale(c)
        return out

    def counit_word(self, w: Word) -> Scalar:
        out = Scalar.one()
        for g in w:
            out = out * self._counit_table[g]
            if out.is_zero():
                break
        return out

    def counit(self, e: Element) -> Scalar:
        out = Scalar.zero()
        for w, c in e.terms.items():
            out = out + c * self.counit_word(w)
        return out

    def antipode_word(self, w: Word) -> Element:
        if self._antipode_table is None:
            raise HopfError("antipode undefined")
        cached = self._antipode_cache.get(w)
        if cached is None:
            out = Element.unit()
            for g in reversed(w):
                out = self.base.multiply(out, self._antipode_table[g])
            cached = self._antipode_cache[w] = out
        return cached

    def antipode(self, e: Element) -> Element:
        out = Element.zero()
        for w, c in e.terms.items():
            out = out + self.antipode_word(w).scale(c)
        return out

    def coproduct_iter(self, e: Element, n: int) -> TensorElement:
        """n-fold iterated coproduct, an (n+1)-slot tensor."""
        if n < 0:
            raise ValueError("iteration count must be >= 0")
        if n == 0:
            return TensorElement(1, {(w,): c for w, c in e.terms.items()})
        out = TensorElement(n + 1)
        for w, c in e.terms.items():
            out = out + self._coproduct_iter_word(w, n).scale(c)
        return out

    def _coproduct_iter_word(self, w: Word, n: int) -> TensorElement:
        key = (w, n)
        cached = self._cop_iter_cache.get(key)
        if cached is not None:
            return cached
        if n == 1:
            out = self.coproduct_word(w)
        else:
            prev = self._coproduct_iter_word(w, n - 1)
            out = apply_coproduct_to_slot(prev, prev.slots - 1, self)
        self._cop_iter_cache[key] = out
        return out

    # -- verification ----------------------------------------------------
    def _verify(self):
        p = self.base
        triple = [p, p, p]
        for g in p.generators:
            d = self._coproduct_table[g]
            if d.slots != 2:
                raise HopfError(f"coproduct of {g} must have two slots")
            left = tensor_normal_form(apply_coproduct_to_slot(d, 0, self), triple)
            right = tensor_normal_form(apply_coproduct_to_slot(d, 1, self), triple)
            if left != right:
                raise HopfError(f"coproduct not coassociative on {g}")
            ce_l = Element.zero()
            ce_r = Element.zero()
            for (w1, w2), c in d.terms.items():
                ce_l = ce_l + Element({w2: c * self.counit_word(w1)})
                ce_r = ce_r + Element({w1: c * self.counit_word(w2)})
            gen = Element.generator(g)
            if p.normal_form(ce_l) != gen or p.normal_form(ce_r) != gen:
                raise HopfError(f"counit axiom fails on {g}")
            if self._antipode_table is not None:
                target = Element.unit(self._counit_table[g])
                for left_slot in (True, False):
                    acc = Element.zero()
                    for (w1, w2), c in d.terms.items():
                        if left_slot:
                            acc = acc + p.multiply(self.antipode_word(w1), Element({w2: c}))
                        else:
                            acc = acc + p.multiply(Element({w1: c}), self.antipode_word(w2))
                    if p.normal_form(acc - target) != Element.zero():
                        raise HopfError(f"antipode axiom fails on {g}")
        # compatibility with the quotient: structure maps kill each rule
        for r in p.rules:
            lhs = Element.from_word(r.lhs)
            diff_cop = self.coproduct(lhs) - self.coproduct(r.rhs)
            if not tensor_normal_form(diff_cop, [p, p]).is_zero():
                raise HopfError(f"coproduct not compatible with rule {word_str(r.lhs)}")
            if not (self.counit(lhs) - self.counit(r.rhs)).is_zero():
                raise HopfError(f"counit not compatible with rule {word_str(r.lhs)}")
            if self._antipode_table is not None:
                diff_s = self.antipode(lhs) - self.antipode(r.rhs)
                if not p.normal_form(diff_s).is_zero():
                    raise HopfError(f"antipode not compatible with rule {word_str(r.lhs)}")

    def __repr__(self):
        label = self.name or ",".join(self.base.generators)
        return f"<HopfPresentation {label}>"


def apply_coproduct_to_slot(t: TensorElement, i: int, H: HopfPresentation) -> TensorElement:
    """Replace slot i by its coproduct, yielding one more slot."""
    acc: Dict[Tuple[Word, ...], Scalar] = {}
    for key, c in t.terms.items():
        d = H.coproduct_word(key[i])
        for (w1, w2), cc in d.terms.items():
            nk = key[:i] + (w1, w2) + key[i + 1 :]
            nc = c * cc
            if not nc.is_zero():
                acc[nk] = acc.get(nk, Scalar.zero()) + nc
    return TensorElement(t.slots + 1, acc)


def sweedler_legs(H: HopfPresentation, e: Element, n_legs: int) -> TensorElement:
    """Iterated coproduct with exactly ``n_legs`` output slots."""
    if n_legs < 1:
        raise ValueError("need at least one leg")
    return H.coproduct_iter(e, n_legs - 1)


class HopfMorphism:
    """Algebra+coalgebra map between Hopf presentations, given on generators."""

    def __init__(
        self,
        source: HopfPresentation,
        target: HopfPresentation,
        images: Mapping[str, Element],
        *,
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.images = {g: images[g] for g in source.base.generators}
        self._word_cache: Dict[Word, Element] = {}
        if check:
            self._verify()

    def apply_word(self, w: Word) -> Element:
        cached = self._word_cache.get(w)
        if cached is None:
            out = Element.unit()
            for g in w:
                out = self.target.base.multiply(out, self.images[g])
            cached = self._word_cache[w] = out
        return cached

    def apply(self, e: Element) -> Element:
        out = Element.zero()
        for w, c in e.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def _verify(self):
        src, tgt = self.source, self.target
        for r in src.base.rules:
            img = self.apply(Element.from_word(r.lhs)) - self.apply(r.rhs)
            if not tgt.base.normal_form(img).is_zero():
                raise HopfError(f"morphism does not respect rule {word_str(r.lhs)}")
        pair = [tgt.base, tgt.base]
        for g in src.base.generators:
            lhs = tensor_normal_form(
                tensor_map_slots(src.coproduct_word((g,)), self), pair
            )
            rhs = tgt.coproduct(self.images[g])
            if lhs != rhs:
                raise HopfError(f"morphism does not intertwine coproducts on {g}")
            if src.counit_word((g,)) != tgt.counit(self.images[g]):
                raise HopfError(f"morphism does not intertwine counits on {g}")

    def __repr__(self):
        return f"<HopfMorphism {self.source.name or '?'} -> {self.target.name or '?'}>"


def tensor_map_slots(t: TensorElement, phi: HopfMorphism) -> TensorElement:
    out = t
    for i in range(t.slots):
        out = out.map_slot(i, phi.apply_word)
    return out


class Functional:
    """Linear functional on reduced words of a k-fold tensor power.

    Backed by a word-level callable or an explicit table with a degree
    truncation; evaluation outside the table is an error, never a
    silent zero.
    """

    def __init__(
        self,
        slots: int,
        fn: Callable[[Tuple[Word, ...]], Scalar] | None = None,
        table: Optional[Mapping[Tuple[Word, ...], Scalar]] = None,
        truncation: Optional[int] = None,
        description: str = "",
    ):
        if (fn is None) == (table is None):
            raise ValueError("provide exactly one of fn or table")
        self.slots = slots
        self._fn = fn
        self._table = dict(table) if table is not None else None
        self.truncation = truncation
        self.description = description

    def eval_words(self, words: Tuple[Word, ...]) -> Scalar:
        if len(words) != self.slots:
            raise HopfError("slot mismatch in functional evaluation")
        if self.truncation is not None and any(len(w) > self.truncation for w in words):
            raise HopfError(
                f"functional {self.description or ''} evaluated beyond truncation "
                f"degree {self.truncation}"
            )
        if self._fn is not None:
            return self._fn(words)
        try:
            return self._table[words]
        except KeyError:
            raise HopfError(
                f"functional table has no entry for {'#'.join(map(word_str, words))}"
            ) from None

    def __call__(self, x) -> Scalar:
        if isinstance(x, Element):
            x = TensorElement(1, {(w,): c for w, c in x.terms.items()})
        out = Scalar.zero()
        for key, c in x.terms.items():
            out = out + c * self.eval_words(key)
        return out


def unit_functional(H: HopfPresentation, slots: int = 1) -> Functional:
    """The convolution unit: the (tensor power of the) counit."""

    def fn(words: Tuple[Word, ...]) -> Scalar:
        out = Scalar.one()
        for w in words:
            out = out * H.counit_word(w)
        return out

    return Functional(slots, fn=fn, description="eta o eps")


def convolve(f: Functional, g: Functional, H: HopfPresentation) -> Functional:
    """Convolution product on functionals over a tensor power of H."""
    if f.slots != g.slots:
        raise HopfError("cannot convolve functionals with different slot counts")
    slots = f.slots

    def fn(words: Tuple[Word, ...]) -> Scalar:
        cops = [H.coproduct_word(w) for w in words]
        total = Scalar.zero()
        for combo in itertools.product(*(c.terms.items() for c in cops)):
            coeff = Scalar.one()
            first = []
            second = []
            for (w1, w2), c in combo:
                coeff = coeff * c
                first.append(w1)
                second.append(w2)
            if coeff.is_zero():
                continue
            total = total + coeff * f.eval_words(tuple(first)) * g.eval_words(tuple(second))
        return total

    return Functional(slots, fn=fn, description=f"({f.description})*({g.description})")


class DualPairing:
    """Pairing table between a finite-dimensional Hopf algebra and another.

    The table is indexed by (left basis word, right basis word); the
    pairing axioms are machine-verified on the stored bases.
    """

    def __init__(
        self,
        left: HopfPresentation,
        right: HopfPresentation,
        table: Mapping[Tuple[Word, Word], Scalar],
        *,
        left_basis: Optional[Sequence[Word]] = None,
        right_basis: Optional[Sequence[Word]] = None,
        check: bool = True,
    ):
        self.left = left
        self.right = right
        self.table = dict(table)
        self.left_basis = list(left_basis) if left_basis is not None else left.base.full_basis()
        self.right_basis = list(right_basis) if right_basis is not None else right.base.full_basis()
        if check:
            self._verify()

    def eval_words(self, lw: Word, rw: Word) -> Scalar:
        try:
            return self.table[(lw, rw)]
        except KeyError:
            raise HopfError(
                f"pairing table has no entry for ({word_str(lw)}, {word_str(rw)})"
            ) from None

    def eval(self, xi: Element, h: Element) -> Scalar:
        out = Scalar.zero()
        for lw, lc in xi.terms.items():
            for rw, rc in h.terms.items():
                c = lc * rc
                if not c.is_zero():
                    out = out + c * self.eval_words(lw, rw)
        return out

    def _verify(self):
        L, R = self.left, self.right
        for lw1, lw2 in itertools.product(self.left_basis, repeat=2):
            prod = L.base.reduce_word(lw1 + lw2)
            for rw in self.right_basis:
                lhs = self.eval(prod, Element.from_word(rw))
                rhs = Scalar.zero()
                for (w1, w2), c in R.coproduct_word(rw).terms.items():
                    rhs = rhs + c * self.eval_words(lw1, w1) * self.eval_words(lw2, w2)
                if lhs != rhs:
                    raise HopfError(
                        f"pairing fails product law at ({word_str(lw1)},{word_str(lw2)};{word_str(rw)})"
                    )
        for rw1, rw2 in itertools.product(self.right_basis, repeat=2):
            prod = R.base.reduce_word(rw1 + rw2)
            for lw in self.left_basis:
                lhs = self.eval(Element.from_word(lw), prod)
                rhs = Scalar.zero()
                for (w1, w2), c in L.coproduct_word(lw).terms.items():
                    rhs = rhs + c * self.eval_words(w1, rw1) * self.eval_words(w2, rw2)
                if lhs != rhs:
                    raise HopfError(
                        f"pairing fails coproduct law at ({word_str(lw)};{word_str(rw1)},{word_str(rw2)})"
                    )
        for lw in self.left_basis:
            if self.eval_words(lw, EMPTY_WORD) != L.counit_word(lw):
                raise HopfError(f"pairing fails unit law on left word {word_str(lw)}")
        for rw in self.right_basis:
            if self.eval_words(EMPTY_WORD, rw) != R.counit_word(rw):
                raise HopfError(f"pairing fails unit law on right word {word_str(rw)}")


def pairing_eval(xi: Element, h: Element, P: DualPairing) -> Scalar:
    return P.eval(xi, h)
