"""Free associative *-algebras presented by generators and rewriting rules.

An :class:`Element` is a finite linear combination of words in named
generators with :class:`~cotwist.scalars.Scalar` coefficients.  A
:class:`Presentation` realizes a quotient algebra through a terminating
rewriting system: every rule's left-hand side strictly dominates its
right-hand side in the degree-then-lexicographic order induced by the
generator declaration order, and local confluence is machine-checked on
all overlaps up to a configurable bound at construction time.

Multi-slot tensors (:class:`TensorElement`) carry elements of
``A_1 (x) ... (x) A_k`` with slotwise normalization; slot count 1
coincides with a plain element.

>>> from cotwist.scalars import Scalar
>>> p = Presentation(("x", "y"), [commutation_rule(("y", "x"), ("x", "y"))])
>>> print(p.multiply(Element.generator("y"), Element.generator("x")))
x y
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .scalars import Scalar

Word = Tuple[str, ...]

EMPTY_WORD: Word = ()

DEFAULT_STEP_BUDGET = 200_000
DEFAULT_OVERLAP_BOUND = 6


class RewriteError(Exception):
    pass


class BudgetExceededError(RewriteError):
    """The rewriting step budget was exhausted; the rule set is suspect."""


class PresentationError(Exception):
    pass


class Element:
    """Finite map word -> scalar; the zero element stores nothing.

    Elements are plain values: they do not know their algebra, which is
    supplied to :meth:`Presentation.normal_form` and friends.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        data: Dict[Word, Scalar] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    data[tuple(w)] = data.get(tuple(w), Scalar.zero()) + c
        self.terms = {w: c for w, c in data.items() if not c.is_zero()}

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @classmethod
    def unit(cls, coeff: Scalar | None = None) -> "Element":
        return cls({EMPTY_WORD: coeff if coeff is not None else Scalar.one()})

    @classmethod
    def generator(cls, name: str) -> "Element":
        return cls({(name,): Scalar.one()})

    @classmethod
    def from_word(cls, word: Sequence[str], coeff: Scalar | None = None) -> "Element":
        return cls({tuple(word): coeff if coeff is not None else Scalar.one()})

    # -- linear structure ---------------------------------------------
    def __add__(self, other: "Element") -> "Element":
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, Scalar.zero()) + c
        return Element(acc)

    def __sub__(self, other: "Element") -> "Element":
        return self + other.scale(Scalar.from_int(-1))

    def __neg__(self) -> "Element":
        return self.scale(Scalar.from_int(-1))

    def scale(self, c: Scalar) -> "Element":
        if c.is_zero():
            return Element()
        return Element({w: cc * c for w, cc in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, word: Sequence[str]) -> Scalar:
        return self.terms.get(tuple(word), Scalar.zero())

    def support(self) -> List[Word]:
        return sorted(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def map_scalars(self, fn: Callable[[Scalar], Scalar]) -> "Element":
        return Element({w: fn(c) for w, c in self.terms.items()})

    def __str__(self):
        return format_terms(self.terms, word_str)

    def __repr__(self):
        return f"<Element {self}>"


def word_str(w: Word) -> str:
    return " ".join(w) if w else "1"


def format_terms(terms, keyfmt) -> str:
    if not terms:
        return "0"
    parts = []
    for key in sorted(terms):
        c = terms[key]
        cs = str(c)
        ks = keyfmt(key)
        if ks == "1":
            parts.append(cs)
        elif cs == "1":
            parts.append(ks)
        elif cs == "-1":
            parts.append(f"-{ks}")
        elif "+" in cs or (" - " in cs) or (cs.startswith("-") and "-" in cs[1:]):
            parts.append(f"({cs}) {ks}")
        else:
            parts.append(f"{cs} {ks}")
    out = parts[0]
    for p in parts[1:]:
        out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return out


class RewriteRule:
    """One oriented relation ``lhs -> rhs``.

    The orientation invariant (lhs strictly greater than every monomial
    of rhs in the presentation's order) is validated when the rule is
    attached to a :class:`Presentation`.
    """

    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Sequence[str], rhs: Element):
        self.lhs: Word = tuple(lhs)
        if not self.lhs:
            raise PresentationError("empty left-hand side")
        self.rhs = rhs

    def __repr__(self):
        return f"<RewriteRule {word_str(self.lhs)} -> {self.rhs}>"


def commutation_rule(lhs: Sequence[str], rhs_word: Sequence[str], coeff: Scalar | None = None) -> RewriteRule:
    return RewriteRule(lhs, Element.from_word(rhs_word, coeff))


class ConfluenceReport:
    def __init__(self, overlap_bound: int):
        self.overlap_bound = overlap_bound
        self.pairs_checked = 0
        self.divergent: List[Tuple[Word, Element, Element]] = []

    @property
    def confluent(self) -> bool:
        return not self.divergent

    def __repr__(self):
        status = "confluent" if self.confluent else f"{len(self.divergent)} divergent"
        return f"<ConfluenceReport bound={self.overlap_bound} pairs={self.pairs_checked} {status}>"


class Presentation:
    """Generators, rewriting rules, monomial order, involution.

    The monomial order is degree-then-lexicographic with ties broken by
    generator declaration order; this makes normal forms deterministic
    across runs.  Construction inter-reduces the rules, validates the
    orientation of each, and (unless ``check_confluence=False``) runs
    the bounded local-confluence check, raising on divergence.
    """

    def __init__(
        self,
        generators: Sequence[str],
        rules: Iterable[RewriteRule] = (),
        involution: Optional[Mapping[str, Element]] = None,
        *,
        overlap_bound: int = DEFAULT_OVERLAP_BOUND,
        step_budget: int = DEFAULT_STEP_BUDGET,
        check_confluence: bool = True,
    ):
        self.generators: Tuple[str, ...] = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        self._index = {g: i for i, g in enumerate(self.generators)}
        self.step_budget = step_budget
        self.overlap_bound = overlap_bound
        self.rules: List[RewriteRule] = []
        for r in rules:
            self._check_words(r.lhs)
            for w in r.rhs.terms:
                self._check_words(w)
            self.rules.append(r)
        self._rules_by_first: Dict[str, List[RewriteRule]] = {}
        self._nf_cache: Dict[Word, Element] = {}
        self._rebuild_index()
        self._inter_reduce()
        self.involution_table = dict(involution) if involution else None
        if check_confluence:
            report = self.check_local_confluence(self.overlap_bound)
            if not report.confluent:
                w, a, b = report.divergent[0]
                raise PresentationError(
                    f"rules not locally confluent at bound {self.overlap_bound}: "
                    f"word {word_str(w)} reduces to both ({a}) and ({b})"
                )

    # -- order ----------------------------------------------------------
    def word_key(self, w: Word):
        return (len(w), tuple(self._index[g] for g in w))

    def word_less(self, a: Word, b: Word) -> bool:
        return self.word_key(a) < self.word_key(b)

    def _check_words(self, w: Word):
        for g in w:
            if g not in self._index:
                raise PresentationError(f"unknown generator {g!r}")

    def _validate_rule(self, r: RewriteRule):
        for w in r.rhs.terms:
            if not self.word_less(w, r.lhs):
                raise PresentationError(
                    f"rule {word_str(r.lhs)} -> {r.rhs} is not order-decreasing "
                    f"(monomial {word_str(w)})"
                )

    def _rebuild_index(self):
        self._rules_by_first = {}
        for r in self.rules:
            self._rules_by_first.setdefault(r.lhs[0], []).append(r)
        self._nf_cache = {}

    def _inter_reduce(self):
        for r in self.rules:
            self._validate_rule(r)
        for i, r in enumerate(self.rules):
            for j, other in enumerate(self.rules):
                if i != j and _find_subword(r.lhs, other.lhs) is not None:
                    raise PresentationError(
                        f"rule lhs {word_str(r.lhs)} contains rule lhs "
                        f"{word_str(other.lhs)}; inter-reduce the input rules"
                    )
        # Orientation forbids a rhs monomial from containing its own
        # lhs (it would not be smaller), so full reduction is safe here.
        changed = True
        while changed:
            changed = False
            for i, r in enumerate(self.rules):
                reduced = self._normal_form_element(r.rhs)
                if reduced != r.rhs:
                    self.rules[i] = RewriteRule(r.lhs, reduced)
                    self._validate_rule(self.rules[i])
                    self._rebuild_index()
                    changed = True

    # -- rewriting -------------------------------------------------------
    def _find_rule(self, w: Word) -> Optional[Tuple[int, RewriteRule]]:
        for i in range(len(w)):
            for r in self._rules_by_first.get(w[i], ()):
                n = len(r.lhs)
                if w[i : i + n] == r.lhs:
                    return i, r
        return None

    def reduce_word(self, w: Word) -> Element:
        """Full normal form of a single word."""
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        out = self._normal_form_element(Element.from_word(w))
        self._nf_cache[w] = out
        return out

    def _normal_form_element(self, e: Element) -> Element:
        budget = self.step_budget
        pending: List[Tuple[Word, Scalar]] = list(e.terms.items())
        done: Dict[Word, Scalar] = {}
        while pending:
            w, c = pending.pop()
            if not self._rules_by_first:
                done[w] = done.get(w, Scalar.zero()) + c
                continue
            hit = self._find_rule(w)
            if hit is None:
                done[w] = done.get(w, Scalar.zero()) + c
                continue
            budget -= 1
            if budget <= 0:
                raise BudgetExceededError(
                    "rewriting step budget exceeded; rule set may not terminate"
                )
            i, r = hit
            prefix, suffix = w[:i], w[i + len(r.lhs) :]
            cached = self._nf_cache.get(w)
            if cached is not None:
                for rw, rc in cached.terms.items():
                    done[rw] = done.get(rw, Scalar.zero()) + c * rc
                continue
            for rw, rc in r.rhs.terms.items():
                pending.append((prefix + rw + suffix, c * rc))
        return Element({w: c for w, c in done.items() if not c.is_zero()})

    def is_reduced(self, w: Word) -> bool:
        return self._find_rule(w) is None

    def normal_form(self, e: Element) -> Element:
        out = Element.zero()
        for w, c in e.terms.items():
            out = out + self.reduce_word(w).scale(c)
        return out

    def multiply(self, x: Element, y: Element) -> Element:
        acc: Dict[Word, Scalar] = {}
        for w1, c1 in x.terms.items():
            for w2, c2 in y.terms.items():
                c = c1 * c2
                for rw, rc in self.reduce_word(w1 + w2).terms.items():
                    acc[rw] = acc.get(rw, Scalar.zero()) + c * rc
        return Element(acc)

    def multiply_all(self, factors: Sequence[Element]) -> Element:
        out = Element.unit()
        for f in factors:
            out = self.multiply(out, f)
        return out

    # -- involution -------------------------------------------------------
    def star(self, e: Element) -> Element:
        if self.involution_table is None:
            raise PresentationError("presentation has no involution")
        out = Element.zero()
        for w, c in e.terms.items():
            factor = Element.unit(c.conjugate())
            for g in reversed(w):
                factor = self.multiply(factor, self.involution_table[g])
            out = out + factor
        return out

    # -- basis enumeration --------------------------------------------------
    def reduced_words(self, max_degree: int, size_cap: int = 200_000) -> List[Word]:
        """All rewriting-reduced words of length <= max_degree, in order."""
        out: List[Word] = [EMPTY_WORD]
        layer: List[Word] = [EMPTY_WORD]
        for _ in range(max_degree):
            nxt = []
            for w in layer:
                for g in self.generators:
                    cand = w + (g,)
                    if self.is_reduced(cand):
                        nxt.append(cand)
                        if len(out) + len(nxt) > size_cap:
                            raise PresentationError("reduced-word enumeration cap exceeded")
            layer = nxt
            out.extend(layer)
        return out

    def full_basis(self, degree_limit: int = 64, size_cap: int = 10_000) -> List[Word]:
        """Basis of a finite-dimensional quotient; errors if growth persists."""
        out: List[Word] = [EMPTY_WORD]
        layer: List[Word] = [EMPTY_WORD]
        for _ in range(degree_limit):
            nxt = []
            for w in layer:
                for g in self.generators:
                    cand = w + (g,)
                    if self.is_reduced(cand):
                        nxt.append(cand)
            if not nxt:
                return out
            layer = nxt
            out.extend(layer)
            if len(out) > size_cap:
                raise PresentationError("algebra does not look finite-dimensional")
        raise PresentationError(f"basis not exhausted at degree {degree_limit}")

    # -- confluence -----------------------------------------------------------
    def check_local_confluence(self, overlap_bound: Optional[int] = None) -> ConfluenceReport:
        """Check joinability of all critical pairs up to the overlap bound.

        Critical words come from (a) two rules with equal lhs, (b) a
        proper suffix/prefix overlap, (c) one lhs contained in another.
        The report lists every divergent pair with the witness word.
        """
        bound = overlap_bound if overlap_bound is not None else self.overlap_bound
        report = ConfluenceReport(bound)
        for r1, r2 in itertools.product(self.rules, repeat=2):
            for word, (i1, i2) in _overlap_words(r1.lhs, r2.lhs, bound, r1 is r2):
                report.pairs_checked += 1
                left = self._apply_at(word, i1, r1)
                right = self._apply_at(word, i2, r2)
                a = self.normal_form(left)
                b = self.normal_form(right)
                if a != b:
                    report.divergent.append((word, a, b))
        return report

    def _apply_at(self, w: Word, i: int, r: RewriteRule) -> Element:
        prefix, suffix = w[:i], w[i + len(r.lhs) :]
        return Element({prefix + rw + suffix: rc for rw, rc in r.rhs.terms.items()})

    def __repr__(self):
        return f"<Presentation gens={','.join(self.generators)} rules={len(self.rules)}>"


def _find_subword(big: Word, small: Word) -> Optional[int]:
    n = len(small)
    for i in range(len(big) - n + 1):
        if big[i : i + n] == small:
            return i
    return None


def _overlap_words(l1: Word, l2: Word, bound: int, same_rule: bool):
    """Yield (word, (pos1, pos2)) for critical overlaps of two lhs words.

    Three shapes: equal lhs on distinct rules, one lhs contained in the
    other, and a proper suffix/prefix overlap.  Overlaps of a rule with
    itself at position 0 are trivially joinable and skipped.
    """
    if l1 == l2:
        if not same_rule:
            yield l1, (0, 0)
    elif len(l2) < len(l1):
        for i in range(len(l1) - len(l2) + 1):
            if l1[i : i + len(l2)] == l2:
                yield l1, (0, i)
    # proper overlaps: nonempty proper suffix of l1 == proper prefix of l2
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            word = l1 + l2[k:]
            if len(word) <= bound:
                yield word, (0, len(l1) - k)


class TensorElement:
    """Element of a k-fold tensor product, as a map (word,...,word) -> scalar."""

    __slots__ = ("slots", "terms")

    def __init__(self, slots: int, terms: Optional[Mapping[Tuple[Word, ...], Scalar]] = None):
        if slots < 1:
            raise ValueError("slot count must be >= 1")
        self.slots = slots
        data: Dict[Tuple[Word, ...], Scalar] = {}
        if terms:
            for key, c in terms.items():
                key = tuple(tuple(w) for w in key)
                if len(key) != slots:
                    raise ValueError("key arity does not match slot count")
                if not c.is_zero():
                    data[key] = data.get(key, Scalar.zero()) + c
        self.terms = {k: c for k, c in data.items() if not c.is_zero()}

    @classmethod
    def unit(cls, slots: int, coeff: Scalar | None = None) -> "TensorElement":
        return cls(slots, {tuple(EMPTY_WORD for _ in range(slots)): coeff or Scalar.one()})

    @classmethod
    def of(cls, *elements: Element) -> "TensorElement":
        """Tensor product of plain elements, one per slot."""
        slots = len(elements)
        acc: Dict[Tuple[Word, ...], Scalar] = {}
        for combo in itertools.product(*(e.terms.items() for e in elements)):
            key = tuple(w for w, _ in combo)
            c = Scalar.one()
            for _, ci in combo:
                c = c * ci
            if not c.is_zero():
                acc[key] = acc.get(key, Scalar.zero()) + c
        return cls(slots, acc)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.slots != other.slots:
            raise ValueError("slot count mismatch")
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, Scalar.zero()) + c
        return TensorElement(self.slots, acc)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(Scalar.from_int(-1))

    def scale(self, c: Scalar) -> "TensorElement":
        if c.is_zero():
            return TensorElement(self.slots)
        return TensorElement(self.slots, {k: cc * c for k, cc in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and self.slots == other.slots
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.slots, frozenset(self.terms.items())))

    def slot_element(self) -> Element:
        if self.slots != 1:
            raise ValueError("only slot count 1 converts to a plain element")
        return Element({k[0]: c for k, c in self.terms.items()})

    def map_slot(self, i: int, fn: Callable[[Word], Element]) -> "TensorElement":
        """Apply a word-level linear map to slot i, redistributing terms."""
        acc: Dict[Tuple[Word, ...], Scalar] = {}
        for key, c in self.terms.items():
            img = fn(key[i])
            for w, cc in img.terms.items():
                nk = key[:i] + (w,) + key[i + 1 :]
                nc = c * cc
                if not nc.is_zero():
                    acc[nk] = acc.get(nk, Scalar.zero()) + nc
        return TensorElement(self.slots, acc)

    def __str__(self):
        return format_terms(self.terms, lambda k: " # ".join(word_str(w) for w in k))

    def __repr__(self):
        return f"<TensorElement[{self.slots}] {self}>"


def tensor_normal_form(t: TensorElement, presentations: Sequence[Presentation]) -> TensorElement:
    if len(presentations) != t.slots:
        raise ValueError("need one presentation per slot")
    out = t
    for i, p in enumerate(presentations):
        out = out.map_slot(i, p.reduce_word)
    return out


def tensor_multiply(x: TensorElement, y: TensorElement, presentations: Sequence[Presentation]) -> TensorElement:
    """Slotwise product followed by slotwise normalization."""
    if x.slots != y.slots:
        raise ValueError("slot count mismatch")
    if len(presentations) != x.slots:
        raise ValueError("need one presentation per slot")
    acc: Dict[Tuple[Word, ...], Scalar] = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            c = c1 * c2
            if c.is_zero():
                continue
            reduced = [presentations[i].reduce_word(k1[i] + k2[i]) for i in range(x.slots)]
            for combo in itertools.product(*(r.terms.items() for r in reduced)):
                key = tuple(w for w, _ in combo)
                cc = c
                for _, ci in combo:
                    cc = cc * ci
                if not cc.is_zero():
                    acc[key] = acc.get(key, Scalar.zero()) + cc
    return TensorElement(x.slots, acc)


def normal_form(e, p):
    """Normal form for an Element or TensorElement.

    For tensors, p must be a sequence of per-slot presentations.
    """
    if isinstance(e, Element):
        return p.normal_form(e)
    return tensor_normal_form(e, p)


def element_specialize(e: Element, assignment) -> Element:
    return e.map_scalars(lambda s: s.specialize(assignment))
