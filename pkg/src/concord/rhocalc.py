"""Symbolic calculus of signature-defect invariants.

Atoms stand for real numbers no algorithm here can produce: rho0(K) (the
signature integral, which does get a certified value when K has a Seifert
matrix), rho1(K) (the metabelian signature defect attached to the zero
submodule, opaque), and C(M) (the uniform bound constant of a 3-manifold,
opaque and only ever used inside inequalities).  Terms are rational
linear combinations plus a rational constant; all computations with the
worked doubling examples reduce to this atom algebra plus one additivity
rule: an infection along a curve eta adds the infectant's rho0 exactly
when the metabelian quotient map does not kill eta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from concord.alexmod import (
    AlexModule,
    Submodule,
    SubmoduleLattice,
    blanchfield_form,
    module_from_seifert,
)
from concord.certified import CertifiedReal
from concord.construction import (
    BaseKnot,
    ConnectedSum,
    ConstructionError,
    CurveSpec,
    Infect,
    Node,
    normalize_tree,
)
from concord.laurent import conjugate_normalized


class MissingAlexClass(Exception):
    """The curve has no Alexander-module class; supply alex_class (its
    image in the base's module) to evaluate metabelian kernels."""


_KIND_ORDER = {"rho0": 0, "rho1": 1, "cg": 2}


@dataclass(frozen=True)
class RhoAtom:
    kind: str
    label: str

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown atom kind {self.kind!r}")

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.label)

    def __str__(self) -> str:
        if self.kind == "cg":
            return f"C({self.label})"
        return f"{self.kind}({self.label})"

    @classmethod
    def rho0(cls, label: str) -> "RhoAtom":
        return cls("rho0", label)

    @classmethod
    def rho1(cls, label: str) -> "RhoAtom":
        return cls("rho1", label)

    @classmethod
    def cg(cls, label: str) -> "RhoAtom":
        return cls("cg", label)

    @classmethod
    def parse(cls, text: str) -> "RhoAtom":
        text = text.strip()
        for prefix, kind in (("rho0(", "rho0"), ("rho1(", "rho1"), ("C(", "cg")):
            if text.startswith(prefix) and text.endswith(")"):
                return cls(kind, text[len(prefix):-1].strip())
        raise ValueError(f"cannot parse atom {text!r}")


@dataclass(frozen=True)
class RhoTerm:
    """constant + sum of coeff * atom, in canonical form."""

    constant: Fraction = Fraction(0)
    coeffs: Tuple[Tuple[RhoAtom, Fraction], ...] = ()

    @classmethod
    def make(cls, constant=0, coeffs: Optional[Dict[RhoAtom, Fraction]] = None) -> "RhoTerm":
        clean = []
        if coeffs:
            for a, c in coeffs.items():
                c = Fraction(c)
                if c:
                    clean.append((a, c))
        clean.sort(key=lambda ac: ac[0].sort_key())
        return cls(Fraction(constant), tuple(clean))

    @classmethod
    def zero(cls) -> "RhoTerm":
        return cls()

    @classmethod
    def of_atom(cls, atom: RhoAtom, coeff=1) -> "RhoTerm":
        return cls.make(0, {atom: Fraction(coeff)})

    @classmethod
    def const(cls, c) -> "RhoTerm":
        return cls.make(c, {})

    def is_zero(self) -> bool:
        return not self.constant and not self.coeffs

    def atoms(self) -> Tuple[RhoAtom, ...]:
        return tuple(a for a, _ in self.coeffs)

    def coeff(self, atom: RhoAtom) -> Fraction:
        for a, c in self.coeffs:
            if a == atom:
                return c
        return Fraction(0)

    def __add__(self, other: "RhoTerm") -> "RhoTerm":
        d = dict(self.coeffs)
        for a, c in other.coeffs:
            d[a] = d.get(a, Fraction(0)) + c
        return RhoTerm.make(self.constant + other.constant, d)

    def __sub__(self, other: "RhoTerm") -> "RhoTerm":
        return self + other.scale(-1)

    def __neg__(self) -> "RhoTerm":
        return self.scale(-1)

    def scale(self, c) -> "RhoTerm":
        c = Fraction(c)
        return RhoTerm.make(
            self.constant * c, {a: v * c for a, v in self.coeffs}
        )

    def drop_atom(self, atom: RhoAtom) -> "RhoTerm":
        return RhoTerm.make(
            self.constant, {a: c for a, c in self.coeffs if a != atom}
        )

    def evaluate(self, values: Dict[RhoAtom, CertifiedReal]) -> Optional[CertifiedReal]:
        """Certified numeric value, or None if some atom has no value."""
        total = CertifiedReal.exact(self.constant)
        for a, c in self.coeffs:
            v = values.get(a)
            if v is None:
                return None
            total = total + v.scale(c)
        return total

    def to_json(self) -> dict:
        return {
            "constant": [self.constant.numerator, self.constant.denominator],
            "coeffs": [
                [str(a), [c.numerator, c.denominator]] for a, c in self.coeffs
            ],
        }

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: List[str] = []

        def fmt_coeff(c: Fraction) -> str:
            if c.denominator == 1:
                return str(abs(c))
            return f"{abs(c.numerator)}/{c.denominator}"

        for a, c in self.coeffs:
            mag = fmt_coeff(c)
            body = str(a) if mag == "1" else f"{mag}*{a}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        if self.constant:
            mag = fmt_coeff(self.constant)
            if not parts:
                parts.append(mag if self.constant > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if self.constant > 0 else f"- {mag}")
        return " ".join(parts)


# -- axioms and nonvanishing ---------------------------------------------------------


@dataclass(frozen=True)
class Axioms:
    """User-declared facts: the listed atoms form a Q-linearly independent
    family of reals (a singleton declaration is just 'nonzero')."""

    independent: frozenset = frozenset()

    @classmethod
    def parse(cls, groups: Iterable[Iterable[str]]) -> "Axioms":
        atoms = set()
        for group in groups:
            for name in group:
                atoms.add(RhoAtom.parse(name))
        return cls(frozenset(atoms))

    def covers(self, term: RhoTerm) -> bool:
        return all(a in self.independent for a in term.atoms())


def linearly_independent(terms: Sequence[RhoTerm], axioms: Axioms) -> int:
    """1 iff the terms are provably Q-linearly independent: every atom is
    covered by the declared independent family, constants vanish, and the
    coefficient matrix has full rank over Q."""
    terms = list(terms)
    if not terms:
        return 1
    for t in terms:
        if t.constant or not axioms.covers(t):
            return 0
    basis = sorted({a for t in terms for a in t.atoms()}, key=lambda a: a.sort_key())
    rows = [[t.coeff(a) for a in basis] for t in terms]
    return 1 if _rank(rows) == len(terms) else 0


def _rank(rows: List[List[Fraction]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][c]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def provably_nonzero(
    term: RhoTerm,
    axioms: Axioms,
    values: Optional[Dict[RhoAtom, CertifiedReal]] = None,
) -> Tuple[bool, Optional[str]]:
    """Whether the term is certified to be a nonzero real, and by which
    route ("exact", "numeric", or "axiom")."""
    if not term.coeffs:
        return (not term.is_zero(), "exact" if not term.is_zero() else None)
    if values is not None:
        num = term.evaluate(values)
        if num is not None and num.excludes_zero():
            return True, "numeric"
    if term.constant == 0 and axioms.covers(term) and term.coeffs:
        return True, "axiom"
    return False, None


# -- metabelian kernel evaluation --------------------------------------------------


@dataclass(frozen=True)
class MetabelianSystem:
    """A knot's module together with one isotropic submodule P; the
    quotient it indexes kills exactly the module classes inside P."""

    module: AlexModule
    submodule: Submodule


def eval_kernel(system: MetabelianSystem, curve: CurveSpec) -> int:
    """0 iff the curve's class dies in the quotient indexed by P (i.e. the
    class lies in P); 1 otherwise."""
    if curve.alex_class is None:
        raise MissingAlexClass(
            f"curve {curve.label!r} carries no alex_class; supply its image in "
            "the base knot's Alexander module to evaluate metabelian kernels"
        )
    lattice = SubmoduleLattice(system.module)
    x = system.module.element(list(curve.alex_class))
    return 0 if lattice.membership(system.submodule, x) else 1


def rho_additivity(base_term: RhoTerm, contributions: Sequence[Tuple[int, RhoTerm]]) -> RhoTerm:
    """base + sum of the terms whose bit is 1 (the additivity rule for
    infections under a metabelian quotient)."""
    out = base_term
    for bit, term in contributions:
        if bit:
            out = out + term
    return out


# -- structural rho0 of a construction tree ------------------------------------------


def rho0_atom_term(node: Node, registry: Optional[Dict[str, BaseKnot]] = None) -> RhoTerm:
    """The rho0 of a knot-valued tree as a symbolic term.

    Winding-number-zero infection does not change abelian invariants, so
    the term descends to the base pattern; connected sums add.  Slice
    bases contribute exactly zero."""
    node = normalize_tree(node)
    if isinstance(node, BaseKnot):
        if registry is not None:
            registry.setdefault(node.name, node)
        if node.is_slice():
            return RhoTerm.zero()
        return RhoTerm.of_atom(RhoAtom.rho0(node.name))
    if isinstance(node, Infect):
        return rho0_atom_term(node.parent, registry)
    if isinstance(node, ConnectedSum):
        out = RhoTerm.zero()
        for p in node.parts:
            out = out + rho0_atom_term(p, registry)
        return out
    raise ConstructionError(f"rho0 needs a knot-valued tree, got {type(node).__name__}")


def collect_knots(node: Node, registry: Dict[str, BaseKnot]) -> None:
    if isinstance(node, BaseKnot):
        existing = registry.get(node.name)
        if existing is not None and existing != node:
            raise ConstructionError(f"knot name {node.name!r} used inconsistently")
        registry[node.name] = node
        return
    if isinstance(node, Infect):
        collect_knots(node.parent, registry)
        for i in node.infectants:
            collect_knots(i, registry)
    elif isinstance(node, ConnectedSum):
        for p in node.parts:
            collect_knots(p, registry)
    elif hasattr(node, "parent"):
        collect_knots(node.parent, registry)


_RHO0_VALUE_CACHE: Dict[Tuple, CertifiedReal] = {}


def resolve_rho0_values(
    registry: Dict[str, BaseKnot], tol: Fraction = Fraction(1, 10**9)
) -> Dict[RhoAtom, CertifiedReal]:
    """Certified values for every rho0 atom whose knot has a Seifert
    matrix."""
    from concord.seifert import rho0 as rho0_exact

    out: Dict[RhoAtom, CertifiedReal] = {}
    for name, knot in registry.items():
        if knot.seifert is None:
            continue
        key = (knot.seifert.entries, tol)
        val = _RHO0_VALUE_CACHE.get(key)
        if val is None:
            val = rho0_exact(knot.seifert, tol)
            _RHO0_VALUE_CACHE[key] = val
        out[RhoAtom.rho0(name)] = val
    return out


# -- base-term annotation rules -----------------------------------------------------


def _conjugate_swapped_pair(module: AlexModule) -> bool:
    """Cyclic module whose order is a product of two distinct irreducibles
    swapped by t -> 1/t (the ribbon + amphichiral vanishing pattern)."""
    if not module.is_cyclic() or module.is_zero_module():
        return False
    try:
        comps = module.isotypic_components()
    except Exception:
        return False
    if len(comps) != 2:
        return False
    p, q = comps[0].order, comps[1].order
    return p != q and conjugate_normalized(p) == q


def base_first_order_terms(
    base: BaseKnot, module: AlexModule, submodules: Sequence[Submodule]
) -> Tuple[List[RhoTerm], List[str]]:
    """The base knot's own contribution rho(M_base, phi_P) per isotropic P,
    after the annotation-driven vanishing rules."""
    notes: List[str] = []
    all_zero = False
    if base.is_slice() and "amphichiral" in base.flags and _conjugate_swapped_pair(module):
        all_zero = True
        notes.append(
            f"{base.name}: ribbon + amphichiral + conjugate-swapped irreducible "
            "pair; every first-order signature of the base vanishes"
        )
    terms: List[RhoTerm] = []
    for idx, sub in enumerate(submodules):
        if all_zero:
            terms.append(RhoTerm.zero())
            continue
        if sub.is_zero():
            if "amphichiral" in base.flags:
                terms.append(RhoTerm.zero())
                notes.append(
                    f"{base.name}: amphichiral, so the zero-submodule term dies "
                    "(its kernel is characteristic)"
                )
            else:
                terms.append(RhoTerm.of_atom(RhoAtom.rho1(base.name)))
            continue
        if base.is_slice() and "ribbon_kernels_all" in base.flags:
            terms.append(RhoTerm.zero())
            notes.append(
                f"{base.name}: P{idx} is a ribbon-disk kernel; the quotient "
                "extends over the disk exterior, so the base term vanishes"
            )
        else:
            terms.append(RhoTerm.of_atom(RhoAtom.rho1(f"{base.name}|P{idx}")))
    return terms, notes


def simplify(term: RhoTerm, annotations: Dict[str, frozenset]) -> RhoTerm:
    """Atom rewrite rules from knot annotations.

    rho0(K) dies for slice/ribbon K (the abelian system always extends
    over the disk exterior).  rho1(K) dies only for amphichiral K (the
    zero-submodule kernel is characteristic); ribbonness alone says
    nothing about it.  Qualified base terms rho1("K|Pi") die when the
    annotations certify every nonzero isotropic submodule as a
    ribbon-disk kernel."""
    out: Dict[RhoAtom, Fraction] = {}
    for a, c in term.coeffs:
        base_label = a.label.split("|", 1)[0]
        qualified = "|" in a.label
        flags = annotations.get(base_label, frozenset())
        slice_flag = "ribbon" in flags or "slice" in flags
        if a.kind == "rho0" and slice_flag:
            continue
        if a.kind == "rho1" and not qualified and "amphichiral" in flags:
            continue
        if a.kind == "rho1" and qualified and slice_flag and \
                "ribbon_kernels_all" in flags:
            continue
        out[a] = c
    return RhoTerm.make(term.constant, out)


# -- first-order signature sets ------------------------------------------------------


@dataclass
class FirstOrderSignatures:
    """The set of first-order signatures of a knot, one symbolic term per
    isotropic submodule of the base's Alexander module."""

    base: BaseKnot
    module: AlexModule
    submodules: List[Submodule]
    terms: List[RhoTerm]
    notes: Tuple[str, ...]
    registry: Dict[str, BaseKnot]
    incomplete: bool = False

    def pairs(self) -> List[Tuple[Submodule, RhoTerm]]:
        return list(zip(self.submodules, self.terms))

    def term_strings(self) -> List[str]:
        return [str(t) for t in self.terms]

    def multiset(self) -> Tuple[str, ...]:
        return tuple(sorted(str(t) for t in self.terms))

    def atom_values(self, tol: Fraction = Fraction(1, 10**9)) -> Dict[RhoAtom, CertifiedReal]:
        return resolve_rho0_values(self.registry, tol)


def first_order_signatures(node: Node) -> FirstOrderSignatures:
    """First-order signature set of a base knot or a single infection over
    one.

    Curves must carry alex_class except at certified depth >= 2, where the
    contribution factors away below the metabelian level and is dropped
    (with a note)."""
    node = normalize_tree(node)
    if isinstance(node, BaseKnot):
        base, curves, infectants = node, (), ()
    elif isinstance(node, Infect) and isinstance(node.parent, BaseKnot):
        base, curves, infectants = node.parent, node.curves, node.infectants
    else:
        raise ConstructionError(
            "first-order signatures are computed for a base knot or a single "
            "infection over one"
        )
    registry: Dict[str, BaseKnot] = {}
    collect_knots(node, registry)
    if base.is_opaque():
        term = RhoTerm.of_atom(RhoAtom.rho1(base.name))
        return FirstOrderSignatures(
            base=base,
            module=None,  # type: ignore[arg-type]
            submodules=[],
            terms=[term],
            notes=(
                f"{base.name}: opaque base, submodule lattice unavailable; only "
                "the zero-submodule term is listed",
            ),
            registry=registry,
            incomplete=True,
        )
    module = module_from_seifert(base.seifert)
    form = blanchfield_form(module)
    lattice = SubmoduleLattice(module, form)
    submodules = lattice.isotropic()
    base_terms, notes = base_first_order_terms(base, module, submodules)
    notes = list(notes)

    contributions: List[Tuple[CurveSpec, RhoTerm]] = []
    for curve, infectant in zip(curves, infectants):
        if curve.alex_class is None:
            depth, _status = curve.certificate.lower_depth()
            if depth >= 2:
                notes.append(
                    f"curve {curve.label!r}: no module class but certified depth "
                    f"{depth} >= 2; its contribution factors away at first order"
                )
                continue
            raise MissingAlexClass(
                f"curve {curve.label!r} carries no alex_class; supply its image "
                "in the base knot's Alexander module"
            )
        contributions.append((curve, rho0_atom_term(infectant, registry)))

    terms: List[RhoTerm] = []
    for sub, base_term in zip(submodules, base_terms):
        bits = [
            (eval_kernel(MetabelianSystem(module, sub), curve), term)
            for curve, term in contributions
        ]
        terms.append(rho_additivity(base_term, bits))
    return FirstOrderSignatures(
        base=base,
        module=module,
        submodules=list(submodules),
        terms=terms,
        notes=tuple(notes),
        registry=registry,
    )
