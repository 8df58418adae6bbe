"""Sheaves of comodule algebras over a finite topology.

A sheaf here is a finite assignment of comodule algebras to named
opens with restriction algebra maps along inclusions.  Construction
verifies functoriality on generators, that every restriction is an
algebra map (relations map to zero) and a comodule map for the
declared coactions.  Gluing along a two-open cover produces matched
generator pairs for the global sections; twisting is objectwise with
the same restriction tables, re-verified against the deformed
products.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .coact import Coaction, LEFT, RIGHT
from .cocycle import TwoCocycle
from .deform import twist_both_product, twist_left_product, twist_right_product
from .ncpoly import Element, Presentation, TensorElement, Word, tensor_normal_form, word_str
from .report import Report
from .scalars import Scalar


class SheafError(Exception):
    pass


class TopologyBasis:
    """Named opens with an inclusion partial order.

    ``inclusions`` are (smaller, larger) pairs; the reflexive-transitive
    closure is taken.  Declared pairwise intersections must name an
    open in the basis.
    """

    def __init__(
        self,
        opens: Sequence[str],
        inclusions: Sequence[Tuple[str, str]],
        intersections: Optional[Mapping[Tuple[str, str], str]] = None,
    ):
        self.opens = tuple(opens)
        known = set(self.opens)
        rel = {(u, u) for u in self.opens}
        for small, large in inclusions:
            if small not in known or large not in known:
                raise SheafError("inclusion names unknown open")
            rel.add((small, large))
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        self.leq = rel
        self.intersections = dict(intersections or {})
        for (u, v), w in self.intersections.items():
            if (w, u) not in rel or (w, v) not in rel:
                raise SheafError(f"declared intersection {w} of ({u},{v}) is not below both")

    def included(self, small: str, large: str) -> bool:
        return (small, large) in self.leq

    def chains(self) -> List[Tuple[str, str, str]]:
        out = []
        for u, v, w in itertools.product(self.opens, repeat=3):
            if u != v and v != w and u != w:
                if self.included(w, v) and self.included(v, u):
                    out.append((u, v, w))
        return out


class AlgebraMap:
    """Algebra morphism given by a generator-image table."""

    def __init__(self, source: Presentation, target: Presentation, images: Mapping[str, Element], *, name: str = ""):
        self.source = source
        self.target = target
        self.images = {g: images[g] for g in source.generators}
        self.name = name
        self._cache: Dict[Word, Element] = {}

    def apply_word(self, w: Word) -> Element:
        cached = self._cache.get(w)
        if cached is None:
            out = Element.unit()
            for g in w:
                out = self.target.multiply(out, self.images[g])
            cached = self._cache[w] = out
        return cached

    def apply(self, e: Element) -> Element:
        out = Element.zero()
        for w, c in e.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def respects_relations(self) -> bool:
        for r in self.source.rules:
            if not self.target.normal_form(
                self.apply(Element.from_word(r.lhs)) - self.apply(r.rhs)
            ).is_zero():
                return False
        return True

    def compose(self, after: "AlgebraMap") -> "AlgebraMap":
        images = {g: after.apply(self.images[g]) for g in self.source.generators}
        return AlgebraMap(self.source, after.target, images, name=f"{after.name} o {self.name}")

    def equal_on_generators(self, other: "AlgebraMap") -> bool:
        return all(
            self.target.normal_form(self.images[g]) == other.target.normal_form(other.images[g])
            for g in self.source.generators
        )


class SheafSection:
    """Per-open data: presentation, right coaction, optional left coaction."""

    def __init__(
        self,
        presentation: Presentation,
        right_coaction: Optional[Coaction] = None,
        left_coaction: Optional[Coaction] = None,
        coinvariant_letters: Sequence[str] = (),
    ):
        self.presentation = presentation
        self.right_coaction = right_coaction
        self.left_coaction = left_coaction
        self.coinvariant_letters = tuple(coinvariant_letters)


class AlgebraSheaf:
    def __init__(
        self,
        topology: TopologyBasis,
        sections: Mapping[str, SheafSection],
        restrictions: Mapping[Tuple[str, str], AlgebraMap],
        *,
        name: str = "",
        check: bool = True,
    ):
        self.topology = topology
        self.sections = dict(sections)
        self.restrictions = dict(restrictions)
        self.name = name
        if check:
            rep = self.verify()
            if not rep.passed:
                f = rep.failures[0]
                raise SheafError(f"sheaf verification failed: {f.input}")

    def restriction(self, large: str, small: str) -> AlgebraMap:
        try:
            return self.restrictions[(large, small)]
        except KeyError:
            raise SheafError(f"no restriction {large} -> {small}") from None

    def verify(self) -> Report:
        rep = Report(check="sheaf-structure", instance=self.name)
        for (large, small), r in self.restrictions.items():
            if not self.topology.included(small, large):
                rep.fail(f"restriction {large}->{small}", "inclusion", "missing")
                continue
            if not r.respects_relations():
                rep.fail(f"restriction {large}->{small}", "relations->0", "violated")
            rep.count()
            src = self.sections[large]
            tgt = self.sections[small]
            for coatt in ("right_coaction", "left_coaction"):
                c_src = getattr(src, coatt)
                c_tgt = getattr(tgt, coatt)
                if c_src is None or c_tgt is None:
                    continue
                slot = 0 if c_src.side == RIGHT else 1
                norm = (
                    [r.target, c_src.hopf.base]
                    if c_src.side == RIGHT
                    else [c_src.hopf.base, r.target]
                )
                for g in r.source.generators:
                    lhs = tensor_normal_form(
                        c_src.apply_word((g,)).map_slot(slot, r.apply_word), norm
                    )
                    rhs = tensor_normal_form(
                        c_tgt.apply(r.images[g]), c_tgt.slot_presentations
                    )
                    rep.record(f"{coatt} of {large}->{small} on {g}", lhs, rhs)
        # functoriality along all chains
        for u, v, w in self.topology.chains():
            if (u, v) in self.restrictions and (v, w) in self.restrictions and (u, w) in self.restrictions:
                comp = self.restrictions[(u, v)].compose(self.restrictions[(v, w)])
                direct = self.restrictions[(u, w)]
                ok = comp.equal_on_generators(direct)
                rep.count()
                if not ok:
                    rep.fail(f"functoriality {u}->{v}->{w}", "compose", "direct")
        return rep


def _push_coaction(t: TensorElement, r: AlgebraMap, side: str) -> TensorElement:
    slot = 0 if side == RIGHT else 1
    out = t.map_slot(slot, r.apply_word)
    pres = [r.target, t_slot_hopf(t)] if side == RIGHT else [t_slot_hopf(t), r.target]
    return tensor_normal_form(out, pres)


_HOPF_SLOT: Dict[int, Presentation] = {}


def t_slot_hopf(t: TensorElement) -> Presentation:
    raise SheafError("internal: hopf slot presentation must be supplied")


class GluedSections:
    """Matched generator pairs of a two-open gluing."""

    def __init__(self, pairs: Mapping[str, Tuple[Element, Element]], report: Report):
        self.pairs = dict(pairs)
        self.report = report


def glue_global(
    sheaf: AlgebraSheaf,
    cover: Tuple[str, str, str],
    pairs: Mapping[str, Tuple[Element, Element]],
    relations: Optional[Mapping[str, Tuple[Element, Element]]] = None,
) -> GluedSections:
    """Verify that declared pairs agree on the overlap and that declared
    global relations hold componentwise.

    cover = (U, V, W) with W the intersection; each pair is (element of
    A(U), element of A(V)); each relation is a pair of elements that
    must reduce to zero in its component algebra.
    """
    U, V, W = cover
    rU = sheaf.restriction(U, W)
    rV = sheaf.restriction(V, W)
    rep = Report(check="gluing", instance=sheaf.name)
    target = sheaf.sections[W].presentation
    for label, (eu, ev) in pairs.items():
        rep.record(
            f"match {label}",
            target.normal_form(rU.apply(eu)),
            target.normal_form(rV.apply(ev)),
        )
    for label, (eu, ev) in (relations or {}).items():
        rep.record(
            f"relation {label} on {U}",
            sheaf.sections[U].presentation.normal_form(eu),
            Element.zero(),
        )
        rep.record(
            f"relation {label} on {V}",
            sheaf.sections[V].presentation.normal_form(ev),
            Element.zero(),
        )
    return GluedSections(pairs, rep)


def restriction_apply(e: Element, r: AlgebraMap) -> Element:
    return r.target.normal_form(r.apply(e))


class TwistedSheafSection:
    """Objectwise twisted section: same presentation, deformed product."""

    def __init__(self, section: SheafSection, sigma: Optional[TwoCocycle], gamma: Optional[TwoCocycle]):
        self.section = section
        self.sigma = sigma
        self.gamma = gamma

    def product(self, x: Element, y: Element) -> Element:
        s = self.section
        if self.sigma is not None and self.gamma is not None:
            from .coact import BicomoduleAlgebra

            bico = BicomoduleAlgebra(s.left_coaction, s.right_coaction, check=False)
            return twist_both_product(x, y, bico, self.sigma, self.gamma)
        if self.sigma is not None:
            return twist_left_product(x, y, s.left_coaction, self.sigma)
        if self.gamma is not None:
            return twist_right_product(x, y, s.right_coaction, self.gamma)
        return s.presentation.multiply(x, y)


class TwistedSheaf:
    def __init__(self, base: AlgebraSheaf, sigma: Optional[TwoCocycle], gamma: Optional[TwoCocycle], *, check: bool = True):
        self.base = base
        self.sigma = sigma
        self.gamma = gamma
        self.sections = {
            u: TwistedSheafSection(s, sigma, gamma) for u, s in base.sections.items()
        }
        if check:
            rep = self.verify()
            if not rep.passed:
                f = rep.failures[0]
                raise SheafError(f"twisted sheaf fails: {f.input}")

    def verify(self, degree: int = 1) -> Report:
        """Every restriction table is still an algebra map for the
        deformed products (on generator pairs up to the degree)."""
        rep = Report(check="twisted-sheaf", instance=self.base.name, bound=degree)
        for (large, small), r in self.base.restrictions.items():
            src = self.sections[large]
            tgt = self.sections[small]
            words = src.section.presentation.reduced_words(degree)
            for w1, w2 in itertools.product(words, repeat=2):
                lhs = r.apply(src.product(Element.from_word(w1), Element.from_word(w2)))
                rhs = tgt.product(r.apply_word(w1), r.apply_word(w2))
                rep.record(
                    f"{large}->{small} on ({word_str(w1)},{word_str(w2)})",
                    r.target.normal_form(lhs),
                    r.target.normal_form(rhs),
                )
        return rep


def twist_sheaf(
    sheaf: AlgebraSheaf,
    sigma: Optional[TwoCocycle] = None,
    gamma: Optional[TwoCocycle] = None,
    *,
    check: bool = True,
) -> TwistedSheaf:
    return TwistedSheaf(sheaf, sigma, gamma, check=check)
