"""Twist deformations: products, actions, coproducts, and the
isomorphisms that compare a twisted construction with the construction
on twisted inputs.

Everything here is a pure function of immutable inputs.  Sweedler
expansions are eager; the per-element term counts stay small because
coproducts and cocycle values are cached on words by the underlying
objects.

Twisted algebras normally stay *views* (products computed on the fly
against the original presentation).  When the deformation is diagonal
on the monomial basis (every catalog twist is: bicharacter cocycles on
graded algebras rescale each monomial by a unit), the view can be
materialized into an honest presentation with regenerated rules, which
then re-enters the rewriting machinery, confluence check included.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .coact import Coaction, LEFT, RIGHT, BicomoduleAlgebra
from .cocycle import TwoCocycle, u_pair
from .hopfcore import HopfPresentation
from .ncpoly import (
    EMPTY_WORD,
    Element,
    Presentation,
    RewriteRule,
    TensorElement,
    Word,
    tensor_normal_form,
    word_str,
)
from .scalars import Scalar


class DeformError(Exception):
    pass


# -- twisted Hopf algebra ----------------------------------------------------

def twist_hopf_product(h: Element, k: Element, H: HopfPresentation, gamma: TwoCocycle) -> Element:
    """gamma(h1,k1) h2 k2 gammabar(h3,k3)."""
    out = Element.zero()
    for hw, hc in h.terms.items():
        hlegs = H.coproduct_iter(Element.from_word(hw), 2)
        for kw, kc in k.terms.items():
            klegs = H.coproduct_iter(Element.from_word(kw), 2)
            c0 = hc * kc
            for (h1, h2, h3), c1 in hlegs.terms.items():
                for (k1, k2, k3), c2 in klegs.terms.items():
                    c = c0 * c1 * c2
                    if c.is_zero():
                        continue
                    f = gamma.eval_words(h1, k1)
                    if f.is_zero():
                        continue
                    g = gamma.eval_words(h3, k3, inverse=True)
                    if g.is_zero():
                        continue
                    out = out + H.base.reduce_word(h2 + k2).scale(c * f * g)
    return out


def twist_antipode(h: Element, H: HopfPresentation, gamma: TwoCocycle) -> Element:
    """u(h1) S(h2) ubar(h3)."""
    if not H.has_antipode:
        raise DeformError("antipode undefined")
    out = Element.zero()
    for w, c in h.terms.items():
        legs = H.coproduct_iter(Element.from_word(w), 2)
        for (w1, w2, w3), cc in legs.terms.items():
            k = c * cc
            if k.is_zero():
                continue
            u1, _ = u_pair(gamma, Element.from_word(w1))
            if u1.is_zero():
                continue
            _, ub = u_pair(gamma, Element.from_word(w3))
            if ub.is_zero():
                continue
            out = out + H.antipode_word(w2).scale(k * u1 * ub)
    return out


class TwistedHopf:
    """View of H with the twisted product and antipode, same coalgebra."""

    def __init__(self, H: HopfPresentation, gamma: TwoCocycle):
        if gamma.hopf is not H:
            raise DeformError("cocycle lives on a different Hopf algebra")
        self.underlying = H
        self.cocycle = gamma
        self.base = H.base

    def product(self, h: Element, k: Element) -> Element:
        return twist_hopf_product(h, k, self.underlying, self.cocycle)

    def antipode(self, h: Element) -> Element:
        return twist_antipode(h, self.underlying, self.cocycle)

    def counit(self, h: Element) -> Scalar:
        return self.underlying.counit(h)

    def coproduct(self, h: Element) -> TensorElement:
        return self.underlying.coproduct(h)

    def __repr__(self):
        return f"<TwistedHopf {self.underlying.name or '?'} by {self.cocycle.name}>"


# -- twisted comodule algebra products ---------------------------------------

def twist_right_product(a: Element, b: Element, delta: Coaction, gamma: TwoCocycle) -> Element:
    """a0 b0 gammabar(a1, b1), the deformed product of a right comodule algebra."""
    if delta.side != RIGHT:
        raise DeformError("need a right coaction")
    out = Element.zero()
    da = delta.apply(a)
    db = delta.apply(b)
    for (a0, a1), c1 in da.terms.items():
        for (b0, b1), c2 in db.terms.items():
            c = c1 * c2
            if c.is_zero():
                continue
            f = gamma.eval_words(a1, b1, inverse=True)
            if f.is_zero():
                continue
            out = out + delta.module.reduce_word(a0 + b0).scale(c * f)
    return out


def twist_left_product(a: Element, b: Element, rho: Coaction, sigma: TwoCocycle) -> Element:
    """sigma(a-1, b-1) a0 b0, the deformed product of a left comodule algebra."""
    if rho.side != LEFT:
        raise DeformError("need a left coaction")
    out = Element.zero()
    ra = rho.apply(a)
    rb = rho.apply(b)
    for (am1, a0), c1 in ra.terms.items():
        for (bm1, b0), c2 in rb.terms.items():
            c = c1 * c2
            if c.is_zero():
                continue
            f = sigma.eval_words(am1, bm1)
            if f.is_zero():
                continue
            out = out + rho.module.reduce_word(a0 + b0).scale(c * f)
    return out


def twist_both_product(
    a: Element,
    b: Element,
    bico: BicomoduleAlgebra,
    sigma: Optional[TwoCocycle],
    gamma: Optional[TwoCocycle],
) -> Element:
    """sigma(a-1, b-1) a0 b0 gammabar(a1, b1) on a bicomodule algebra."""
    out = Element.zero()
    mod = bico.module
    for aw, ac in a.terms.items():
        for bw, bc in b.terms.items():
            c0 = ac * bc
            if c0.is_zero():
                continue
            for (am1, a0, a1), c1 in _bicomodule_legs(bico, aw).items():
                for (bm1, b0, b1), c2 in _bicomodule_legs(bico, bw).items():
                    c = c0 * c1 * c2
                    if c.is_zero():
                        continue
                    if sigma is not None:
                        f = sigma.eval_words(am1, bm1)
                        if f.is_zero():
                            continue
                        c = c * f
                    if gamma is not None:
                        g = gamma.eval_words(a1, b1, inverse=True)
                        if g.is_zero():
                            continue
                        c = c * g
                    out = out + mod.reduce_word(a0 + b0).scale(c)
    return out


_BICO_CACHE: Dict[Tuple[int, Word], Dict[Tuple[Word, Word, Word], Scalar]] = {}


def _bicomodule_legs(bico: BicomoduleAlgebra, w: Word) -> Dict[Tuple[Word, Word, Word], Scalar]:
    """(K-leg, module, H-leg) expansion of one module word."""
    key = (id(bico), w)
    cached = _BICO_CACHE.get(key)
    if cached is None:
        acc: Dict[Tuple[Word, Word, Word], Scalar] = {}
        for (mw, hw), c in bico.right.apply_word(w).terms.items():
            for (kw, mw2), c2 in bico.left.apply_word(mw).terms.items():
                k = (kw, mw2, hw)
                cc = c * c2
                acc[k] = acc.get(k, Scalar.zero()) + cc
        cached = _BICO_CACHE[key] = {k: v for k, v in acc.items() if not v.is_zero()}
    return cached


# -- twisted module actions ---------------------------------------------------

def twist_right_module_action(
    action: Callable[[Element, Element], Element],
    delta_mod: Coaction,
    delta_alg: Coaction,
    gamma: TwoCocycle,
) -> Callable[[Element, Element], Element]:
    """Deform a left action: a |>_gamma v = (a0 |> v0) gammabar(a1, v1)."""

    def twisted(a: Element, v: Element) -> Element:
        out = Element.zero()
        da = delta_alg.apply(a)
        dv = delta_mod.apply(v)
        for (a0, a1), c1 in da.terms.items():
            for (v0, v1), c2 in dv.terms.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                f = gamma.eval_words(a1, v1, inverse=True)
                if f.is_zero():
                    continue
                out = out + action(Element.from_word(a0), Element.from_word(v0)).scale(c * f)
        return out

    return twisted


# -- twisted comodule coalgebra -----------------------------------------------

class ComoduleCoalgebra:
    """A coalgebra in the category of right comodules.

    Bundles the comodule's presentation, a right coaction, and the
    coalgebra structure maps (as word-level callables).
    """

    def __init__(
        self,
        coaction: Coaction,
        coproduct_word: Callable[[Word], TensorElement],
        counit_word: Callable[[Word], Scalar],
        name: str = "",
    ):
        if coaction.side != RIGHT:
            raise DeformError("comodule coalgebras here carry right coactions")
        self.coaction = coaction
        self.coproduct_word = coproduct_word
        self.counit_word = counit_word
        self.name = name

    def coproduct(self, e: Element) -> TensorElement:
        out = TensorElement(2)
        for w, c in e.terms.items():
            out = out + self.coproduct_word(w).scale(c)
        return out


def underline_comodule_coalgebra(H: HopfPresentation, ad: Coaction) -> ComoduleCoalgebra:
    """H as a comodule coalgebra over itself via the adjoint coaction."""
    return ComoduleCoalgebra(ad, H.coproduct_word, H.counit_word, name="underline")


def twisted_coalgebra_coproduct(
    c: Element, C: ComoduleCoalgebra, gamma: TwoCocycle
) -> TensorElement:
    """(c1)0 (x) (c2)0 gamma((c1)1, (c2)1)."""
    out = TensorElement(2)
    delta = C.coaction
    for (w1, w2), cc in C.coproduct(c).terms.items():
        d1 = delta.apply_word(w1)
        d2 = delta.apply_word(w2)
        for (x0, x1), c1 in d1.terms.items():
            for (y0, y1), c2 in d2.terms.items():
                k = cc * c1 * c2
                if k.is_zero():
                    continue
                f = gamma.eval_words(x1, y1)
                if f.is_zero():
                    continue
                out = out + TensorElement(2, {(x0, y0): k * f})
    return tensor_normal_form(out, [delta.module, delta.module])


# -- the phi isomorphisms ------------------------------------------------------

def phi_right(
    t: TensorElement,
    coactions: Sequence[Coaction],
    gamma: TwoCocycle,
    *,
    inverse: bool = False,
) -> TensorElement:
    """v0 (x) w0 gammabar(v1, w1) slotwise on a two-slot tensor.

    The monoidal comparison map for right-coaction twists; ``inverse``
    evaluates gamma instead of its inverse.
    """
    if t.slots != 2 or len(coactions) != 2:
        raise DeformError("phi acts on two-slot tensors")
    if any(c.side != RIGHT for c in coactions):
        raise DeformError("phi needs right coactions")
    out = TensorElement(2)
    for (v, w), c in t.terms.items():
        dv = coactions[0].apply_word(v)
        dw = coactions[1].apply_word(w)
        for (v0, v1), c1 in dv.terms.items():
            for (w0, w1), c2 in dw.terms.items():
                k = c * c1 * c2
                if k.is_zero():
                    continue
                f = gamma.eval_words(v1, w1, inverse=not inverse)
                if f.is_zero():
                    continue
                out = out + TensorElement(2, {(v0, w0): k * f})
    return tensor_normal_form(out, [coactions[0].module, coactions[1].module])


def phi_left(
    t: TensorElement,
    coactions: Sequence[Coaction],
    sigma: TwoCocycle,
    *,
    inverse: bool = False,
) -> TensorElement:
    """sigma(v-1, w-1) v0 (x) w0 slotwise; left-coaction counterpart."""
    if t.slots != 2 or len(coactions) != 2:
        raise DeformError("phi acts on two-slot tensors")
    if any(c.side != LEFT for c in coactions):
        raise DeformError("phi_left needs left coactions")
    out = TensorElement(2)
    for (v, w), c in t.terms.items():
        rv = coactions[0].apply_word(v)
        rw = coactions[1].apply_word(w)
        for (vm1, v0), c1 in rv.terms.items():
            for (wm1, w0), c2 in rw.terms.items():
                k = c * c1 * c2
                if k.is_zero():
                    continue
                f = sigma.eval_words(vm1, wm1, inverse=inverse)
                if f.is_zero():
                    continue
                out = out + TensorElement(2, {(v0, w0): k * f})
    return tensor_normal_form(out, [coactions[0].module, coactions[1].module])


# -- the Q map -----------------------------------------------------------------

def q_map(h: Element, H: HopfPresentation, gamma: TwoCocycle, direction: str = "forward") -> Element:
    """Comodule-coalgebra comparison between the two deformations of H
    as an adjoint comodule.

    forward: h3 u(h1) gammabar(S(h2), h4);
    inverse: h3 ubar(h2) gamma(S(h1), h4).
    """
    if direction not in ("forward", "inverse"):
        raise DeformError("direction must be forward or inverse")
    if not H.has_antipode:
        raise DeformError("antipode required")
    out = Element.zero()
    for w, c in h.terms.items():
        legs = H.coproduct_iter(Element.from_word(w), 3)
        for (w1, w2, w3, w4), cc in legs.terms.items():
            k = c * cc
            if k.is_zero():
                continue
            if direction == "forward":
                u1, _ = u_pair(gamma, Element.from_word(w1))
                if u1.is_zero():
                    continue
                f = gamma.eval_elements(
                    H.antipode_word(w2), Element.from_word(w4), inverse=True
                )
                if f.is_zero():
                    continue
                out = out + Element({w3: k * u1 * f})
            else:
                _, ub = u_pair(gamma, Element.from_word(w2))
                if ub.is_zero():
                    continue
                f = gamma.eval_elements(H.antipode_word(w1), Element.from_word(w4))
                if f.is_zero():
                    continue
                out = out + Element({w3: k * ub * f})
    return H.base.normal_form(out)


def q_map_compact(h: Element, H: HopfPresentation, gamma: TwoCocycle) -> Element:
    """Equivalent closed form g3 gamma(g1, S(g2) g4); independent route
    for cross-checking the forward Q map."""
    out = Element.zero()
    for w, c in h.terms.items():
        legs = H.coproduct_iter(Element.from_word(w), 3)
        for (w1, w2, w3, w4), cc in legs.terms.items():
            k = c * cc
            if k.is_zero():
                continue
            f = gamma.eval_elements(
                Element.from_word(w1),
                H.base.multiply(H.antipode_word(w2), Element.from_word(w4)),
            )
            if f.is_zero():
                continue
            out = out + Element({w3: k * f})
    return H.base.normal_form(out)


def underline_product(h: Element, k: Element, H: HopfPresentation, gamma: TwoCocycle) -> Element:
    """Transport of the twisted product through the Q map."""
    qh = q_map(h, H, gamma, "inverse")
    qk = q_map(k, H, gamma, "inverse")
    return q_map(twist_hopf_product(qh, qk, H, gamma), H, gamma, "forward")


# -- left-deformation of linear maps (sections, cleaving maps) -----------------

class LeftComoduleSpace:
    """A K-comodule realized on k-slot tensors with a diagonal coaction.

    ``coactions[i]`` is the left coaction on slot i; the space's
    coaction multiplies the K-legs together.
    """

    def __init__(self, coactions: Sequence[Coaction], name: str = ""):
        if not coactions or any(c.side != LEFT for c in coactions):
            raise DeformError("need left coactions, one per slot")
        self.coactions = list(coactions)
        self.slots = len(coactions)
        self.khopf = coactions[0].hopf
        self.name = name

    @property
    def slot_presentations(self) -> List[Presentation]:
        return [c.module for c in self.coactions]

    def as_tensor(self, x) -> TensorElement:
        if isinstance(x, Element):
            if self.slots != 1:
                raise DeformError("element given for a multi-slot space")
            return TensorElement(1, {(w,): c for w, c in x.terms.items()})
        if x.slots != self.slots:
            raise DeformError("slot mismatch")
        return x

    def coact(self, x) -> TensorElement:
        """K-leg prepended: result has slots+1 slots."""
        t = self.as_tensor(x)
        out = TensorElement(self.slots + 1)
        K = self.khopf.base
        for key, c in t.terms.items():
            partial = [(EMPTY_WORD, key, c)]
            for i, co in enumerate(self.coactions):
                nxt = []
                for kleg, mods, coeff in partial:
                    for (kw, mw), cc in co.apply_word(mods[i]).terms.items():
                        merged = K.reduce_word(kleg + kw)
                        for mw2, c3 in merged.terms.items():
                            nxt.append(
                                (mw2, mods[:i] + (mw,) + mods[i + 1 :], coeff * cc * c3)
                            )
                partial = nxt
            for kleg, mods, coeff in partial:
                out = out + TensorElement(self.slots + 1, {(kleg,) + mods: coeff})
        return out


def fS_map(
    s: Callable,
    domain: LeftComoduleSpace,
    codomain: LeftComoduleSpace,
    sigma: TwoCocycle,
    direction: str = "forward",
) -> Callable:
    """Deform a B-linear H-colinear map to the sigma-twisted side.

    forward: v -> sigma(v-2, S(v-1) s(v0)-1) s(v0)0;
    inverse: v -> sigma(S(v-2), s(v0)-1) ubar(v-1) s(v0)0.
    On K-colinear maps the forward direction is the identity transport.
    """
    if direction not in ("forward", "inverse"):
        raise DeformError("direction must be forward or inverse")
    K = sigma.hopf

    def deformed(v):
        tv = domain.coact(v)  # (K, slots...) with K-leg at 0
        out = TensorElement(codomain.slots)
        for key, c in tv.terms.items():
            kleg, mods = key[0], key[1:]
            # split the K-leg once more
            for (km2, km1), ck in K.coproduct_word(kleg).terms.items():
                c1 = c * ck
                if c1.is_zero():
                    continue
                img = codomain.as_tensor(
                    s(_tensor_or_element(mods, domain))
                )
                timg = codomain.coact(img)
                for ikey, c2 in timg.terms.items():
                    sk, srest = ikey[0], ikey[1:]
                    cc = c1 * c2
                    if cc.is_zero():
                        continue
                    if direction == "forward":
                        f = sigma.eval_elements(
                            Element.from_word(km2),
                            K.base.multiply(K.antipode_word(km1), Element.from_word(sk)),
                        )
                    else:
                        f = sigma.eval_elements(K.antipode_word(km2), Element.from_word(sk))
                        if not f.is_zero():
                            _, ub = u_pair(sigma, Element.from_word(km1))
                            f = f * ub
                    if f.is_zero():
                        continue
                    out = out + TensorElement(codomain.slots, {srest: cc * f})
        out = tensor_normal_form(out, codomain.slot_presentations)
        if codomain.slots == 1:
            return out.slot_element()
        return out

    return deformed


def _tensor_or_element(mods: Tuple[Word, ...], space: LeftComoduleSpace):
    if space.slots == 1:
        return Element.from_word(mods[0])
    return TensorElement(space.slots, {mods: Scalar.one()})


# -- materialization -----------------------------------------------------------

def materialize_twisted_presentation(
    base: Presentation,
    product: Callable[[Element, Element], Element],
    *,
    involution_compatible: bool = True,
    overlap_bound: Optional[int] = None,
) -> Tuple[Presentation, Callable[[Word], Scalar]]:
    """Regenerate rewrite rules for a diagonally-twisted algebra.

    Requires the twisted product of the letters of every reduced word w
    to equal ``kappa(w) . w`` for a unit ``kappa(w)`` (true for all
    bicharacter twists of graded algebras).  The returned presentation
    has the same generators and reduced words; the identification with
    the view is through kappa.
    """
    kappa_cache: Dict[Word, Scalar] = {EMPTY_WORD: Scalar.one()}

    def letter_product(w: Word) -> Element:
        out = Element.unit()
        for g in w:
            out = product(out, Element.generator(g))
        return out

    def kappa(w: Word) -> Scalar:
        got = kappa_cache.get(w)
        if got is None:
            m = letter_product(w)
            if len(m.terms) != 1 or w not in m.terms:
                raise DeformError(
                    f"twist is not diagonal on {word_str(w)}; keep the view"
                )
            got = kappa_cache[w] = m.terms[w]
        return got

    new_rules = []
    for r in base.rules:
        m = letter_product(r.lhs)
        target = base.normal_form(Element.from_word(r.lhs))
        if target.is_zero():
            if not m.is_zero():
                raise DeformError(
                    f"twisted image of {word_str(r.lhs)} is nonzero while the "
                    "classical normal form vanishes"
                )
            new_rules.append(RewriteRule(r.lhs, Element.zero()))
            continue
        # m = kappa(lhs) . sum c_v v ; rule: lhs -> sum kappa(lhs) c_v kappa(v)^-1 v
        probe = next(iter(target.terms))
        kl = m.terms.get(probe, Scalar.zero()) * target.terms[probe].inverse()
        if kl.is_zero():
            raise DeformError(f"cannot extract diagonal factor for {word_str(r.lhs)}")
        check = target.scale(kl)
        if check != m:
            raise DeformError(
                f"twist is not diagonal on rule {word_str(r.lhs)}; keep the view"
            )
        rhs = Element({v: kl * c * kappa(v).inverse() for v, c in target.terms.items()})
        new_rules.append(RewriteRule(r.lhs, rhs))
    twisted = Presentation(
        base.generators,
        new_rules,
        base.involution_table if involution_compatible else None,
        overlap_bound=overlap_bound if overlap_bound is not None else base.overlap_bound,
        step_budget=base.step_budget,
    )
    return twisted, kappa


def materialize_twisted_hopf(
    H: HopfPresentation,
    gamma: TwoCocycle,
    *,
    name: str = "",
) -> Tuple[HopfPresentation, Callable[[Word], Scalar]]:
    """Materialize the twisted Hopf algebra of H by a cocycle.

    The coproduct and counit tables carry over verbatim (the coalgebra
    is untouched); the antipode table is the twisted antipode of each
    generator, and all Hopf axioms are re-verified against the
    regenerated rules.

    Only valid when the twisted product is diagonal AND kappa is 1 on
    all reduced words appearing in the structure tables (so the tables
    need no rescaling); this is checked.
    """
    view = TwistedHopf(H, gamma)
    base_gamma, kappa = materialize_twisted_presentation(H.base, view.product)
    cop = {}
    for g in H.base.generators:
        t = H.coproduct_word((g,))
        for (w1, w2) in t.terms:
            for w in (w1, w2):
                if not kappa(w).is_one():
                    raise DeformError(
                        "coproduct table words acquire nontrivial factors; "
                        "materialization would change the tables"
                    )
        cop[g] = t
    antipode = None
    if H.has_antipode:
        antipode = {}
        for g in H.base.generators:
            sg = view.antipode(Element.generator(g))
            for w in sg.terms:
                if not kappa(w).is_one():
                    raise DeformError("antipode table words acquire nontrivial factors")
            antipode[g] = sg
    counit = {g: H.counit_word((g,)) for g in H.base.generators}
    twisted = HopfPresentation(
        base_gamma, cop, counit, antipode, name=name or f"{H.name}_twisted"
    )
    return twisted, kappa
