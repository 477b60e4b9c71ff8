"""Partial skew groupoid rings A ⋆_α G over a generic partial-action interface.

An action supplies the groupoid operations, the central idempotents 1_g that
cut out the ideals A_g = A·1_g, and the isomorphisms α_g : A_{g⁻¹} → A_g.
Coefficient-ring elements only need ``+``, ``-``, ``*``, scalar ``*`` and
truthiness (zero test), so a skew ring can itself serve as a coefficient ring.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator

from .fields import QQ, Field, ModP, format_scalar
from .reports import PROVED, Check, bounded, bounded_positive


class ActionMismatch(ValueError):
    pass


class CoefficientError(ValueError):
    pass


class InfiniteGroupoid(ValueError):
    pass


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, ModP)) and not isinstance(x, bool)


class PartialAction:
    """Interface for unital partial actions of a groupoid on a ring.

    Subclasses implement the groupoid part (``objects``, ``source``, ``target``,
    ``compose``, ``inverse``, ``identity``, ``elements``) and the ring part
    (``unit``, ``apply``, ``one``, ``zero``)."""

    field: Field = QQ
    name: str = "action"

    # groupoid
    def objects(self) -> list:
        raise NotImplementedError

    def source(self, g):
        raise NotImplementedError

    def target(self, g):
        raise NotImplementedError

    def composable(self, g, h) -> bool:
        return self.source(g) == self.target(h)

    def compose(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self, max_len: int | None = None) -> Iterator:
        """All groupoid elements (finite case) or those of length <= max_len."""
        raise NotImplementedError

    def sort_key(self, g):
        return str(g)

    def format_element(self, g) -> str:
        return str(g)

    # ring
    def unit(self, g):
        """The central idempotent 1_g with A_g = A·1_g."""
        raise NotImplementedError

    def apply(self, g, a):
        """α_g(a) for a in A_{g⁻¹}."""
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def zero(self):
        return self.one() * self.field.zero

    def in_ideal(self, g, a) -> bool:
        return a * self.unit(g) == a


class SkewElement:
    """Finite formal sum Σ a_g δ_g with each a_g = a_g·1_g nonzero."""

    __slots__ = ("action", "terms")

    def __init__(self, action: PartialAction, terms: dict | None = None, _trusted=False):
        self.action = action
        if _trusted:
            self.terms = terms or {}
            return
        clean = {}
        for g, a in (terms or {}).items():
            a = a * action.unit(g)
            if a:
                clean[g] = a
        self.terms = clean

    @classmethod
    def make(cls, action: PartialAction, pairs: Iterable, strict: bool = False) -> "SkewElement":
        """Sum of a·δ_g over ``pairs``.  With ``strict`` a coefficient outside
        its ideal A_g is an error instead of being cut by 1_g."""
        acc: dict = {}
        for g, a in pairs:
            if strict and not action.in_ideal(g, a):
                raise CoefficientError(f"coefficient {a} is not in the ideal of {action.format_element(g)}")
            a = a * action.unit(g)
            if not a:
                continue
            acc[g] = acc[g] + a if g in acc else a
        return cls(action, {g: a for g, a in acc.items() if a}, _trusted=True)

    @classmethod
    def identity(cls, action: PartialAction) -> "SkewElement":
        return cls.make(action, [(action.identity(y), action.unit(action.identity(y))) for y in action.objects()])

    @classmethod
    def zero(cls, action: PartialAction) -> "SkewElement":
        return cls(action, {}, _trusted=True)

    @classmethod
    def homogeneous(cls, action: PartialAction, g, a) -> "SkewElement":
        return cls.make(action, [(g, a)])

    def _check(self, other: "SkewElement"):
        if not isinstance(other, SkewElement):
            raise ActionMismatch(f"cannot combine a skew element with {type(other).__name__}")
        if other.action is not self.action:
            raise ActionMismatch("skew elements over different actions")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        acc = dict(self.terms)
        for g, b in other.terms.items():
            if g in acc:
                s = acc[g] + b
                if s:
                    acc[g] = s
                else:
                    del acc[g]
            else:
                acc[g] = b
        return SkewElement(self.action, acc, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return SkewElement(self.action, {g: -a for g, a in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SkewElement":
        c = self.action.field(c)
        if not c:
            return SkewElement.zero(self.action)
        return SkewElement(self.action, {g: a * c for g, a in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        self._check(other)
        act = self.action
        acc: dict = {}
        for g, a in self.terms.items():
            cut = act.unit(act.inverse(g))
            for h, b in other.terms.items():
                if not act.composable(g, h):
                    continue
                c = a * act.apply(g, b * cut)
                if not c:
                    continue
                gh = act.compose(g, h)
                if gh in acc:
                    s = acc[gh] + c
                    if s:
                        acc[gh] = s
                    else:
                        del acc[gh]
                else:
                    acc[gh] = c
        return SkewElement(act, acc, _trusted=True)

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, SkewElement) or other.action is not self.action:
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[g] == other.terms[g] for g in self.terms)

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def component(self, g):
        """Coefficient of the homogeneous piece at g (zero if absent)."""
        return self.terms.get(g, self.action.zero())

    def grading_support(self) -> list:
        return sorted(self.terms, key=self.action.sort_key)

    def items(self):
        for g in self.grading_support():
            yield g, self.terms[g]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for g, a in self.items():
            parts.append(f"{format_coefficient(a)} δ_{{{self.action.format_element(g)}}}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SkewElement({self})"


def format_coefficient(a) -> str:
    if is_scalar(a):
        return format_scalar(a)
    text = str(a)
    return f"({text})" if " + " in text else text


def join(e, f):
    """Join of two commuting idempotents."""
    return e + f - e * f


def is_global(action: PartialAction, max_len: int | None = None) -> Check:
    """α is global iff 1_g = 1_{t(g)} for every g."""
    elements = action.elements(None if action.is_finite else max_len)
    for g in elements:
        if action.unit(g) != action.unit(action.identity(action.target(g))):
            verdict = PROVED if action.is_finite else bounded(max_len)
            return Check("is_global", False, verdict, witness=action.format_element(g))
    verdict = PROVED if action.is_finite else bounded_positive(max_len)
    return Check("is_global", True, verdict)


def is_group_type(action: PartialAction, base, transversal: dict, sample_len: int = 4) -> Check:
    """Conditions 1_{τ_y⁻¹} = 1_x and 1_{τ_y} = 1_y for a given transversal, plus
    the consequence 1_g·1_{gτ_{s(g)}} = 1_g on elements up to ``sample_len``."""
    objects = action.objects()
    if set(transversal) != set(objects):
        raise ValueError("transversal must assign an element to every object")
    for y in objects:
        t = transversal[y]
        if action.source(t) != base or action.target(t) != y:
            raise ValueError(f"transversal element {action.format_element(t)} does not go from {base} to {y}")
    if transversal[base] != action.identity(base):
        raise ValueError("transversal must map the base object to its identity")
    for y in objects:
        t = transversal[y]
        if action.unit(action.inverse(t)) != action.unit(action.identity(base)):
            return Check("is_group_type", False, witness=f"1_{{inverse of {action.format_element(t)}}} != 1_{base}")
        if action.unit(t) != action.unit(action.identity(y)):
            return Check("is_group_type", False, witness=f"1_{{{action.format_element(t)}}} != 1_{y}")
    for g in action.elements(None if action.is_finite else sample_len):
        one_g = action.unit(g)
        h = action.compose(g, transversal[action.source(g)])
        if one_g * action.unit(h) != one_g:
            return Check("is_group_type", False, witness=f"A_g not inside A_(g tau) at g={action.format_element(g)}")
    return Check("is_group_type", True)


def is_finite_type(action: PartialAction, max_len: int, family_size: int = 1) -> Check:
    """Bounded search, per object z, for g_1..g_n in G(-, z) whose translates
    satisfy 1_{t(g)} = join of 1_{g g_i} for every g in G(z, -) up to ``max_len``."""
    elements = list(action.elements(None if action.is_finite else max_len))
    families = {}
    for z in action.objects():
        candidates = [g for g in elements if action.target(g) == z]
        tests = [g for g in elements if action.source(g) == z]
        found = None
        for n in range(1, family_size + 1):
            for fam in itertools.combinations(candidates, n):
                ok = True
                for g in tests:
                    acc = action.zero()
                    for gi in fam:
                        acc = join(acc, action.unit(action.compose(g, gi)))
                    if acc != action.unit(action.identity(action.target(g))):
                        ok = False
                        break
                if ok:
                    found = fam
                    break
            if found:
                break
        if found is None:
            verdict = PROVED if action.is_finite else bounded(max_len)
            return Check("is_finite_type", False, verdict, witness=f"no family of size <= {family_size} at object {z}")
        families[str(z)] = [action.format_element(g) for g in found]
    verdict = PROVED if action.is_finite else bounded_positive(max_len)
    return Check("is_finite_type", True, verdict, details={"families": families})


def trace(action: PartialAction, a):
    """tr_α(a) = Σ_g α_g(a·1_{g⁻¹}) over a finite groupoid."""
    if not action.is_finite:
        raise InfiniteGroupoid("trace needs a finite groupoid")
    total = action.zero()
    for g in action.elements():
        total = total + action.apply(g, a * action.unit(action.inverse(g)))
    return total


def verify_partial_action(action: PartialAction, elements: list, coefficient_samples, name: str = "partial action") -> Check:
    """Axioms of a unital partial action on the given elements.

    ``coefficient_samples(g)`` returns elements of A_g used as probes.  Checks:
    α on identities is the identity; α_g maps A_{g⁻¹}∩A_h into A_{gh}
    (as 1_g·1_{gh} = α_g(1_{g⁻¹}·1_h)); α_g∘α_h = α_{gh} on
    α_h⁻¹(A_{h}∩A_{g⁻¹}); α_{g⁻¹}∘α_g is the identity on A_{g⁻¹}."""
    checked = 0
    for g in elements:
        if action.source(g) == action.target(g) and g == action.identity(action.target(g)):
            for a in coefficient_samples(g):
                if action.apply(g, a) != a:
                    return Check(name, False, witness=f"identity {action.format_element(g)} moves {a}")
        gi = action.inverse(g)
        for a in coefficient_samples(gi):
            if action.apply(gi, action.apply(g, a)) != a:
                return Check(name, False, witness=f"inverse law fails at {action.format_element(g)} on {a}")
    for g, h in itertools.product(elements, elements):
        if not action.composable(g, h):
            continue
        checked += 1
        gh = action.compose(g, h)
        gi, hi = action.inverse(g), action.inverse(h)
        lhs = action.unit(g) * action.unit(gh)
        rhs = action.apply(g, action.unit(gi) * action.unit(h))
        if lhs != rhs:
            return Check(name, False, witness=f"ideal intersection law at ({action.format_element(g)}, {action.format_element(h)})")
        # the inverse image of A_h ∩ A_{g⁻¹} under α_h is cut by α_{h⁻¹}(1_h 1_{g⁻¹})
        dom2 = action.apply(hi, action.unit(h) * action.unit(gi))
        if dom2 * action.unit(action.inverse(gh)) != dom2:
            return Check(name, False, witness=f"domain inclusion fails at ({action.format_element(g)}, {action.format_element(h)})")
        for a in coefficient_samples(hi):
            a = a * dom2
            if action.apply(g, action.apply(h, a)) != action.apply(gh, a):
                return Check(name, False, witness=f"composition law at ({action.format_element(g)}, {action.format_element(h)}) on {a}")
    return Check(name, True, details={"pairs": checked})
