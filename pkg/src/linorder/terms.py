"""Term algebra for countable linear orders.

Terms denote countable linear orders: finite chains, omega, the rationals,
reversals, finite sums, products Prod(L, K) = sum of one copy of L per point
of K, and integer powers ZetaPow(e) (finite-support functions from the order
denoted by e into the integers, compared at the largest differing point).

The module also carries the structural classification (scatteredness,
well-orderedness, extrema, scattered end segments, Hausdorff rank upper
bound) and the sound rule calculus deciding strong surjectivity where the
classification permits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .cnf import CNF, CNF_ZERO, CNF_ONE, CNF_OMEGA, cnf_add, cnf_mul, from_nat, omega_power


@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("finite chains must be non-empty")


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class Eta:
    pass


@dataclass(frozen=True)
class Rev:
    inner: "OrderTerm"


@dataclass(frozen=True)
class Sum:
    parts: Tuple["OrderTerm", ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("sums need at least two parts")


@dataclass(frozen=True)
class Prod:
    left: "OrderTerm"
    right: "OrderTerm"


@dataclass(frozen=True)
class ZetaPow:
    exp: "OrderTerm"


OrderTerm = Union[Fin, Omega, Eta, Rev, Sum, Prod, ZetaPow]

OMEGA = Omega()
ETA = Eta()


def rev_push(t: OrderTerm) -> OrderTerm:
    """Push reversals to the leaves; afterwards Rev wraps only Omega."""
    if isinstance(t, Rev):
        u = t.inner
        if isinstance(u, Fin):
            return u
        if isinstance(u, Omega):
            return t
        if isinstance(u, Eta):
            return u
        if isinstance(u, Rev):
            return rev_push(u.inner)
        if isinstance(u, Sum):
            return Sum(tuple(rev_push(Rev(p)) for p in reversed(u.parts)))
        if isinstance(u, Prod):
            return Prod(rev_push(Rev(u.left)), rev_push(Rev(u.right)))
        if isinstance(u, ZetaPow):
            # negation is an order isomorphism of an integer power
            return ZetaPow(rev_push(u.exp))
    if isinstance(t, Sum):
        return Sum(tuple(rev_push(p) for p in t.parts))
    if isinstance(t, Prod):
        return Prod(rev_push(t.left), rev_push(t.right))
    if isinstance(t, ZetaPow):
        return ZetaPow(rev_push(t.exp))
    return t


@dataclass(frozen=True)
class Classification:
    scattered: bool
    well_order: bool
    rev_well_order: bool
    has_min: bool
    has_max: bool
    scattered_init: bool
    scattered_final: bool
    rank_upper: Optional[CNF]


def classify(t: OrderTerm) -> Classification:
    if isinstance(t, Fin):
        rank = CNF_ZERO if t.n == 1 else from_nat(1)
        return Classification(True, True, True, True, True, True, True, rank)
    if isinstance(t, Omega):
        return Classification(True, True, False, True, False, True, True, from_nat(1))
    if isinstance(t, Eta):
        return Classification(False, False, False, False, False, False, False, None)
    if isinstance(t, Rev):
        c = classify(t.inner)
        return Classification(
            c.scattered, c.rev_well_order, c.well_order, c.has_max, c.has_min,
            c.scattered_final, c.scattered_init, c.rank_upper)
    if isinstance(t, Sum):
        cs = [classify(p) for p in t.parts]
        scattered = all(c.scattered for c in cs)
        rank = None
        if scattered:
            rank = cnf_add(max((c.rank_upper for c in cs), default=CNF_ZERO), CNF_ONE)
        return Classification(
            scattered,
            all(c.well_order for c in cs),
            all(c.rev_well_order for c in cs),
            cs[0].has_min,
            cs[-1].has_max,
            cs[0].scattered_init,
            cs[-1].scattered_final,
            rank)
    if isinstance(t, Prod):
        cl, cr = classify(t.left), classify(t.right)
        scattered = cl.scattered and cr.scattered
        rank = cnf_add(cl.rank_upper, cr.rank_upper) if scattered else None
        return Classification(
            scattered,
            cl.well_order and cr.well_order,
            cl.rev_well_order and cr.rev_well_order,
            cl.has_min and cr.has_min,
            cl.has_max and cr.has_max,
            cl.scattered_init if cr.has_min else cl.scattered and cr.scattered_init,
            cl.scattered_final if cr.has_max else cl.scattered and cr.scattered_final,
            rank)
    if isinstance(t, ZetaPow):
        ce = classify(t.exp)
        scattered = ce.well_order
        rank = None
        if scattered:
            rank = cnf_add(cnf_mul(ordinal_value(t.exp), from_nat(2)), from_nat(2))
        return Classification(scattered, False, False, False, False,
                              scattered, scattered, rank)
    raise TypeError(f"not an order term: {t!r}")


def ordinal_value(t: OrderTerm) -> Optional[CNF]:
    """Ordinal denoted by a well-ordered term, None otherwise."""
    return _ordinal_value(rev_push(t))


def _ordinal_value(t: OrderTerm) -> Optional[CNF]:
    if isinstance(t, Fin):
        return from_nat(t.n)
    if isinstance(t, Omega):
        return CNF_OMEGA
    if isinstance(t, (Eta, Rev, ZetaPow)):
        return None
    if isinstance(t, Sum):
        total = CNF_ZERO
        for p in t.parts:
            v = _ordinal_value(p)
            if v is None:
                return None
            total = cnf_add(total, v)
        return total
    if isinstance(t, Prod):
        vl, vr = _ordinal_value(t.left), _ordinal_value(t.right)
        if vl is None or vr is None:
            return None
        return cnf_mul(vl, vr)
    raise TypeError(f"not an order term: {t!r}")


def cnf_to_term(c: CNF) -> OrderTerm:
    """Render a positive ordinal as a term.

    Only exponents below omega are expressible: the term language has no
    infinitary constructor, so omega^omega and beyond have no term.
    """
    if c.is_zero():
        raise ValueError("no term denotes the empty order")
    parts = []
    for expo, coeff in c.terms:
        if not expo.is_finite():
            raise ValueError("exponent not expressible as a term")
        k = expo.finite_value()
        if k == 0:
            parts.append(Fin(coeff))
            continue
        unit: OrderTerm = OMEGA
        for _ in range(k - 1):
            unit = Prod(unit, OMEGA)
        parts.append(Prod(unit, Fin(coeff)) if coeff > 1 else unit)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


@dataclass(frozen=True)
class Verdict:
    outcome: str  # "yes" | "no" | "unknown"
    rule_trace: Tuple[str, ...]


def _right_assoc(t: OrderTerm) -> OrderTerm:
    if isinstance(t, Prod):
        left = _right_assoc(t.left)
        right = _right_assoc(t.right)
        if isinstance(left, Prod):
            return _right_assoc(Prod(left.left, Prod(left.right, right)))
        return Prod(left, right)
    if isinstance(t, Sum):
        return Sum(tuple(_right_assoc(p) for p in t.parts))
    if isinstance(t, Rev):
        return Rev(_right_assoc(t.inner))
    if isinstance(t, ZetaPow):
        return ZetaPow(_right_assoc(t.exp))
    return t


def sts_verdict(t: OrderTerm) -> Verdict:
    """Sound first-match calculus for strong surjectivity of a term.

    Works on the reversal-normalized, right-associated product form; both
    rewrites are order isomorphisms.
    """
    return _verdict(_right_assoc(rev_push(t)))


def _verdict(t: OrderTerm) -> Verdict:
    c = classify(t)
    if not c.scattered:
        # a countable non-scattered order is strongly surjective exactly
        # when neither end has a scattered segment
        if c.scattered_init:
            return Verdict("no", ("N1:scatteredInit",))
        if c.scattered_final:
            return Verdict("no", ("N1:scatteredFinal",))
        return Verdict("yes", ("N1",))
    if c.well_order:
        v = _ordinal_value(t)
        return Verdict("yes" if v.is_single_term() else "no", ("S1",))
    if c.rev_well_order:
        v = _ordinal_value(rev_push(Rev(t)))
        return Verdict("yes" if v.is_single_term() else "no", ("S2",))
    if c.has_min:
        # an epimorphic image of an order with a minimum keeps the minimum,
        # so only well-orders with minima can be strongly surjective
        return Verdict("no", ("S3:hasMin",))
    if c.has_max:
        return Verdict("no", ("S3:hasMax",))
    if isinstance(t, ZetaPow) and classify(t.exp).well_order:
        return Verdict("yes", ("S4",))
    if isinstance(t, Prod):
        lv = _verdict(t.left)
        rv = _verdict(t.right)
        if lv.outcome == "yes" and rv.outcome == "yes":
            trace = ("S5",) + tuple("L." + e for e in lv.rule_trace) \
                + tuple("R." + e for e in rv.rule_trace)
            return Verdict("yes", trace)
        if classify(t.left).scattered and rv.outcome == "no":
            trace = ("S5:quotient", "L.scattered") \
                + tuple("R." + e for e in rv.rule_trace)
            return Verdict("no", trace)
    if isinstance(t, Sum) and len(t.parts) == 2:
        first, second = t.parts
        rv1 = _ordinal_value(rev_push(Rev(first)))
        v2 = _ordinal_value(second)
        if rv1 is not None and rv1.is_single_term() \
                and v2 is not None and v2.is_single_term():
            return Verdict("yes", ("S6",))
    return Verdict("unknown", ("S7",))


def reduce_map(kind: str, first: OrderTerm, second: Optional[OrderTerm] = None) -> OrderTerm:
    """Hardness reductions into the term algebra.

    wo(L) = (1+L)*omega          well-orderedness of L
    nonscat(L) = eta + L*omega   non-scatteredness of L
    main(K, L) = z^K*(1+L)*omega   well-order(K) implies well-order(L)
    """
    if kind == "wo":
        return Prod(Sum((Fin(1), first)), OMEGA)
    if kind == "nonscat":
        return Sum((ETA, Prod(first, OMEGA)))
    if kind == "main":
        if second is None:
            raise ValueError("main reduction takes two terms")
        return Prod(Prod(ZetaPow(first), Sum((Fin(1), second))), OMEGA)
    raise ValueError(f"unknown reduction kind: {kind}")


def term_size(t: OrderTerm) -> int:
    if isinstance(t, (Fin, Omega, Eta)):
        return 1
    if isinstance(t, Rev):
        return 1 + term_size(t.inner)
    if isinstance(t, ZetaPow):
        return 1 + term_size(t.exp)
    if isinstance(t, Sum):
        return 1 + sum(term_size(p) for p in t.parts)
    if isinstance(t, Prod):
        return 1 + term_size(t.left) + term_size(t.right)
    raise TypeError(f"not an order term: {t!r}")


def format_term(t: OrderTerm) -> str:
    return _fmt(t, 0)


def _fmt(t: OrderTerm, level: int) -> str:
    # level 0 admits sums, level 1 admits products, level 2 atoms only
    if isinstance(t, Fin):
        return str(t.n)
    if isinstance(t, Omega):
        return "w"
    if isinstance(t, Eta):
        return "eta"
    if isinstance(t, Rev):
        return f"rev({_fmt(t.inner, 0)})"
    if isinstance(t, ZetaPow):
        return f"z^({_fmt(t.exp, 0)})"
    if isinstance(t, Sum):
        s = " + ".join(_fmt(p, 1) for p in t.parts)
        return s if level == 0 else f"({s})"
    if isinstance(t, Prod):
        s = f"{_fmt(t.left, 1)}*{_fmt(t.right, 2)}"
        return s if level <= 1 else f"({s})"
    raise TypeError(f"not an order term: {t!r}")
