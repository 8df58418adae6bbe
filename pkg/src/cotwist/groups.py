"""Group algebras of finitely generated abelian groups as Hopf presentations.

These are the workhorse Hopf algebras of the engine: tori (free
factors), cyclic factors, and products thereof.  Every generator is
group-like, so gradings, bicharacters and cocycle arithmetic reduce to
integer exponent bookkeeping on the weight lattice.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .hopfcore import HopfPresentation
from .ncpoly import Element, Presentation, RewriteRule, TensorElement, Word
from .scalars import Scalar

Weight = Tuple[int, ...]


class GroupHopf:
    """Group algebra of Z^a x prod Z_{n_i}, with weight <-> word helpers.

    ``moduli`` holds one entry per factor: 0 for an infinite (torus)
    factor, n >= 2 for a cyclic factor of order n.  Free factors get a
    starred inverse generator; finite factors satisfy t^n = 1.
    """

    def __init__(self, moduli: Sequence[int], names: Optional[Sequence[str]] = None, label: str = ""):
        self.moduli: Tuple[int, ...] = tuple(moduli)
        if names is None:
            names = [f"t{i+1}" for i in range(len(self.moduli))]
        if len(names) != len(self.moduli):
            raise ValueError("need one name per group factor")
        self.factor_names: Tuple[str, ...] = tuple(names)
        gens = []
        self._gen_weight: Dict[str, Weight] = {}
        rules = []
        involution: Dict[str, Element] = {}
        k = len(self.moduli)
        for i, (nm, n) in enumerate(zip(self.factor_names, self.moduli)):
            e = tuple(1 if j == i else 0 for j in range(k))
            gens.append(nm)
            self._gen_weight[nm] = e
            if n == 0:
                star = nm + "*"
                gens.append(star)
                self._gen_weight[star] = tuple(-x for x in e)
                involution[nm] = Element.generator(star)
                involution[star] = Element.generator(nm)
            else:
                rules.append(RewriteRule((nm,) * n, Element.unit()))
                involution[nm] = Element.from_word((nm,) * (n - 1)) if n > 1 else Element.unit()
        # commutative sorting, then unit cancellation for free factors
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                rules.append(
                    RewriteRule((gens[j], gens[i]), Element.from_word((gens[i], gens[j])))
                )
        for i, (nm, n) in enumerate(zip(self.factor_names, self.moduli)):
            if n == 0:
                rules.append(RewriteRule((nm, nm + "*"), Element.unit()))
        max_len = max((len(r.lhs) for r in rules), default=2)
        base = Presentation(tuple(gens), rules, involution, overlap_bound=max(6, 2 * max_len - 1))
        coproduct = {g: TensorElement(2, {((g,), (g,)): Scalar.one()}) for g in gens}
        counit = {g: Scalar.one() for g in gens}
        antipode = {}
        for g in gens:
            w = self._gen_weight[g]
            antipode[g] = Element.from_word(self.word_of(tuple(-x for x in w)))
        self.hopf = HopfPresentation(base, coproduct, counit, antipode, name=label or "+".join(names))

    # -- weight <-> word -------------------------------------------------
    def word_of(self, weight: Weight) -> Word:
        if len(weight) != len(self.moduli):
            raise ValueError("weight length mismatch")
        letters = []
        for i, (nm, n, e) in enumerate(zip(self.factor_names, self.moduli, weight)):
            if n == 0:
                if e >= 0:
                    letters.extend([nm] * e)
                else:
                    letters.extend([nm + "*"] * (-e))
            else:
                letters.extend([nm] * (e % n))
        return tuple(letters)

    def weight_of_word(self, w: Word) -> Weight:
        total = [0] * len(self.moduli)
        for g in w:
            wt = self._gen_weight[g]
            for i, x in enumerate(wt):
                total[i] += x
        return self.normalize_weight(tuple(total))

    def normalize_weight(self, weight: Weight) -> Weight:
        return tuple(e % n if n else e for e, n in zip(weight, self.moduli))

    def group_like(self, weight: Weight) -> Element:
        return Element.from_word(self.word_of(self.normalize_weight(weight)))

    def basis_words(self) -> Sequence[Word]:
        """Full basis for finite groups (all moduli nonzero)."""
        if any(n == 0 for n in self.moduli):
            raise ValueError("group is infinite")
        return self.hopf.base.full_basis()

    def __repr__(self):
        return f"<GroupHopf moduli={self.moduli}>"


def torus(n: int, names: Optional[Sequence[str]] = None) -> GroupHopf:
    """Coordinate Hopf algebra of the n-torus (Laurent generators)."""
    return GroupHopf((0,) * n, names=names, label=f"T^{n}")


def cyclic_group_algebra(orders: Sequence[int], names: Optional[Sequence[str]] = None) -> GroupHopf:
    return GroupHopf(tuple(orders), names=names)
