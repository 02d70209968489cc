"""The construction DSL: knots and links assembled from base knots by
infection (satellite operations with winding number zero), doubling
operators, connected sums and string-link multiples.

A construction tree carries exactly the algebraic data the obstruction
engine consumes: free-group or assumed depth certificates for infection
curves, their Alexander-module classes, and base-knot annotations.  No
diagram geometry is modeled.

Solvability bookkeeping: infecting a link along curves of derived depth
p_i with (q_i)-solvable knots keeps the result inside filtration level
min(parent level, min_i(p_i + q_i)); slice bases sit at every level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from concord import catalog
from concord.freegroup import (
    DepthResult,
    FreeWord,
    bing_curve,
    derived_depth,
)
from concord.laurent import LaurentPoly
from concord.seifert import SeifertMatrix, arf


class ConstructionError(Exception):
    pass


# -- depth certificates -------------------------------------------------------


@dataclass(frozen=True)
class WordDepth:
    """Curve given as a free word in the ambient trivial-link group;
    its depth is certified by the derived-series oracle."""

    word: FreeWord

    def lower_depth(self) -> Tuple[int, str]:
        return _cached_depth(self.word).value, "certified"

    def exact_depth(self) -> Optional[Tuple[int, str]]:
        res = _cached_depth(self.word)
        return (res.value, "certified") if res.exact else None


@dataclass(frozen=True)
class AssumedDepth:
    """User-supplied depth hypothesis (for ambient groups the free-group
    oracle cannot reach); verdicts report it as assumed."""

    depth: int

    def lower_depth(self) -> Tuple[int, str]:
        return self.depth, "assumed"

    def exact_depth(self) -> Optional[Tuple[int, str]]:
        return self.depth, "assumed"


@dataclass(frozen=True)
class LinkingZeroDepth:
    """Depth exactly 1: the curve has linking number zero with the base
    (so it lies in the commutator subgroup) and a nontrivial
    Alexander-module class (so it survives one level down)."""

    def lower_depth(self) -> Tuple[int, str]:
        return 1, "certified"

    def exact_depth(self) -> Optional[Tuple[int, str]]:
        return 1, "certified"


@dataclass(frozen=True)
class CloneDepth:
    """Depth of a clone curve produced by expanding an i-fold doubling
    tower; the recursion places clones in the i-th derived subgroup."""

    depth: int

    def lower_depth(self) -> Tuple[int, str]:
        return self.depth, "certified"

    def exact_depth(self) -> Optional[Tuple[int, str]]:
        return self.depth, "structural"


@dataclass(frozen=True)
class MeridianCurve:
    """A meridian (depth 0); infection along it just substitutes the
    infectant."""

    def lower_depth(self) -> Tuple[int, str]:
        return 0, "certified"

    def exact_depth(self) -> Optional[Tuple[int, str]]:
        return 0, "certified"


Certificate = Union[WordDepth, AssumedDepth, LinkingZeroDepth, CloneDepth, MeridianCurve]

_DEPTH_CACHE: Dict[FreeWord, DepthResult] = {}


def _cached_depth(word: FreeWord) -> DepthResult:
    res = _DEPTH_CACHE.get(word)
    if res is None:
        res = derived_depth(word)
        _DEPTH_CACHE[word] = res
    return res


@dataclass(frozen=True)
class CurveSpec:
    """An infection curve: a depth certificate, an optional class in the
    base's Alexander module (decomposition coordinates), and the
    winding-number-zero invariant (always required)."""

    label: str
    certificate: Certificate
    alex_class: Optional[Tuple[LaurentPoly, ...]] = None
    lk_zero: bool = True

    def __post_init__(self):
        if not self.lk_zero:
            raise ConstructionError(
                f"curve {self.label!r}: infection requires linking number zero"
            )


# -- construction nodes ------------------------------------------------------------


@dataclass(frozen=True)
class BaseKnot:
    name: str
    seifert: Optional[SeifertMatrix]
    flags: frozenset = frozenset()

    @classmethod
    def from_catalog(cls, name: str) -> "BaseKnot":
        v, flags = catalog.get(name)
        return cls(name, v, frozenset(k for k, val in flags.items() if val))

    def is_opaque(self) -> bool:
        return self.seifert is None

    def is_slice(self) -> bool:
        return "ribbon" in self.flags or "slice" in self.flags


@dataclass(frozen=True)
class TrivialLink:
    components: int

    def __post_init__(self):
        if self.components < 1:
            raise ConstructionError("a link needs at least one component")


@dataclass(frozen=True)
class SliceLinkAssumed:
    label: str
    components: int


@dataclass(frozen=True)
class Infect:
    parent: "Node"
    curves: Tuple[CurveSpec, ...]
    infectants: Tuple["Node", ...]

    def __post_init__(self):
        if len(self.curves) != len(self.infectants):
            raise ConstructionError(
                f"{len(self.curves)} curves vs {len(self.infectants)} infectants"
            )
        if not self.curves:
            raise ConstructionError("infection needs at least one curve")


@dataclass(frozen=True)
class BingDouble:
    parent: "Node"
    iterations: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ConstructionError("doubling iterations must be >= 1")


@dataclass(frozen=True)
class RDouble:
    """Sugar: infection of the standard two-band ribbon pattern (the 9_46
    knot) along its band meridians, using the same infectant at both."""

    parent: "Node"
    operator: str = "nine46"


@dataclass(frozen=True)
class ConnectedSum:
    parts: Tuple["Node", ...]

    def __post_init__(self):
        if not self.parts:
            raise ConstructionError("empty connected sum")


@dataclass(frozen=True)
class Multiple:
    parent: "Node"
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ConstructionError("multiple count must be >= 1")


Node = Union[BaseKnot, TrivialLink, SliceLinkAssumed, Infect, BingDouble, RDouble,
             ConnectedSum, Multiple]


def component_count(node: Node) -> int:
    if isinstance(node, BaseKnot):
        return 1
    if isinstance(node, (TrivialLink, SliceLinkAssumed)):
        return node.components
    if isinstance(node, Infect):
        return component_count(node.parent)
    if isinstance(node, BingDouble):
        if component_count(node.parent) != 1:
            raise ConstructionError("doubling is defined on knots here")
        return 2**node.iterations
    if isinstance(node, RDouble):
        return 1
    if isinstance(node, ConnectedSum):
        for p in node.parts:
            if component_count(p) != 1:
                raise ConstructionError("connected sum parts must be knots")
        return 1
    if isinstance(node, Multiple):
        return component_count(node.parent)
    raise TypeError(f"not a construction node: {node!r}")


def is_knot(node: Node) -> bool:
    return component_count(node) == 1


# -- the 9_46 operator data ---------------------------------------------------------


_OPERATOR_CACHE: Dict[str, Tuple[BaseKnot, Tuple[CurveSpec, CurveSpec]]] = {}


def operator_pattern(name: str = "nine46") -> Tuple[BaseKnot, Tuple[CurveSpec, CurveSpec]]:
    """Base knot + the two band-meridian curve specs of the doubling
    operator.  The curves' module classes are the two isotypic basis
    vectors of the operator's Alexander module."""
    if name != "nine46":
        raise ConstructionError(f"unknown doubling operator {name!r}")
    cached = _OPERATOR_CACHE.get(name)
    if cached is not None:
        return cached
    from concord.alexmod import module_from_seifert

    base = BaseKnot.from_catalog(name)
    mod = module_from_seifert(base.seifert)
    comps = mod.isotypic_components()
    assert len(comps) == 2
    alpha = CurveSpec("alpha", LinkingZeroDepth(), tuple(comps[0].generator.coords))
    beta = CurveSpec("beta", LinkingZeroDepth(), tuple(comps[1].generator.coords))
    _OPERATOR_CACHE[name] = (base, (alpha, beta))
    return _OPERATOR_CACHE[name]


def rdouble_tower(base: Node, levels: int, operator: str = "nine46") -> Node:
    out = base
    for _ in range(levels):
        out = RDouble(out, operator)
    return out


# -- canonical form ---------------------------------------------------------------


def _node_key(node: Node) -> tuple:
    if isinstance(node, BaseKnot):
        return ("base", node.name, node.seifert.entries if node.seifert else None,
                tuple(sorted(node.flags)))
    if isinstance(node, TrivialLink):
        return ("trivial", node.components)
    if isinstance(node, SliceLinkAssumed):
        return ("slice_link", node.label, node.components)
    if isinstance(node, Infect):
        return ("infect", _node_key(node.parent),
                tuple(_curve_key(c) for c in node.curves),
                tuple(_node_key(i) for i in node.infectants))
    if isinstance(node, ConnectedSum):
        return ("sum", tuple(_node_key(p) for p in node.parts))
    if isinstance(node, Multiple):
        return ("multiple", node.count, _node_key(node.parent))
    raise TypeError(f"non-canonical node in key: {node!r}")


def _curve_key(c: CurveSpec) -> tuple:
    cert = c.certificate
    if isinstance(cert, WordDepth):
        ck = ("word", cert.word.rank, cert.word.letters)
    elif isinstance(cert, AssumedDepth):
        ck = ("assumed", cert.depth)
    elif isinstance(cert, LinkingZeroDepth):
        ck = ("lk0",)
    elif isinstance(cert, CloneDepth):
        ck = ("clone", cert.depth)
    else:
        ck = ("meridian",)
    cls = None
    if c.alex_class is not None:
        cls = tuple(p.to_json() for p in c.alex_class)
    return (c.label, ck, _to_hashable(cls))


def _to_hashable(x):
    if isinstance(x, list):
        return tuple(_to_hashable(v) for v in x)
    if isinstance(x, tuple):
        return tuple(_to_hashable(v) for v in x)
    return x


def normalize_tree(node: Node) -> Node:
    """Canonical form: doubling sugar expanded to infections, multiples of
    knots expanded to connected sums, sums flattened and deterministically
    ordered.  Structural equality of canonical forms is tree equivalence."""
    if isinstance(node, (BaseKnot, TrivialLink, SliceLinkAssumed)):
        return node
    if isinstance(node, RDouble):
        base, curves = operator_pattern(node.operator)
        inner = normalize_tree(node.parent)
        if not is_knot(inner):
            raise ConstructionError("doubling operators apply to knots")
        return Infect(base, curves, (inner, inner))
    if isinstance(node, BingDouble):
        inner = normalize_tree(node.parent)
        if not is_knot(inner):
            raise ConstructionError("iterated doubling of a knot only")
        word, rank = bing_curve(node.iterations)
        curve = CurveSpec(f"doubling_curve_{node.iterations}", WordDepth(word))
        return Infect(TrivialLink(rank), (curve,), (inner,))
    if isinstance(node, Infect):
        parent = normalize_tree(node.parent)
        infectants = tuple(normalize_tree(i) for i in node.infectants)
        for i in infectants:
            if not is_knot(i):
                raise ConstructionError("infectants must be knots")
        for c in node.curves:
            if isinstance(c.certificate, WordDepth) and isinstance(parent, TrivialLink):
                if c.certificate.word.rank != parent.components:
                    raise ConstructionError(
                        f"curve {c.label!r}: word lives in rank "
                        f"{c.certificate.word.rank} but the ambient trivial link "
                        f"has {parent.components} components"
                    )
        return Infect(parent, node.curves, infectants)
    if isinstance(node, ConnectedSum):
        flat: List[Node] = []
        for p in node.parts:
            q = normalize_tree(p)
            if isinstance(q, ConnectedSum):
                flat.extend(q.parts)
            else:
                flat.append(q)
        for p in flat:
            if not is_knot(p):
                raise ConstructionError("connected sum parts must be knots")
        if len(flat) == 1:
            return flat[0]
        flat.sort(key=_node_key)
        return ConnectedSum(tuple(flat))
    if isinstance(node, Multiple):
        parent = normalize_tree(node.parent)
        if node.count == 1:
            return parent
        if is_knot(parent):
            return normalize_tree(ConnectedSum((parent,) * node.count))
        return Multiple(parent, node.count)
    raise TypeError(f"not a construction node: {node!r}")


# -- solvability -------------------------------------------------------------------


@dataclass(frozen=True)
class SolvDegree:
    """Best provable filtration level.

    level None with slice_all means solvable at every level; level None
    without it means unknown (see notes for why)."""

    level: Optional[Fraction] = None
    slice_all: bool = False
    rational_only: bool = False
    assumed: bool = False
    notes: Tuple[str, ...] = ()

    def known(self) -> bool:
        return self.slice_all or self.level is not None

    def at_least(self, q) -> bool:
        if self.slice_all:
            return True
        return self.level is not None and self.level >= Fraction(q)

    def display(self) -> str:
        if self.slice_all:
            return "slice (every level)"
        if self.level is None:
            return "unknown"
        lv = self.level
        return str(int(lv)) if lv.denominator == 1 else f"{float(lv):g}"

    def __str__(self) -> str:
        out = self.display()
        if self.rational_only and self.level is not None:
            out += " (rational)"
        if self.assumed:
            out += " (assumed)"
        return out


def solvability_upper_bound(node: Node) -> SolvDegree:
    """Best filtration level provable from the composition rule, Arf
    gates, and slice annotations."""
    return _solvable(normalize_tree(node))


def _solvable(node: Node) -> SolvDegree:
    if isinstance(node, BaseKnot):
        if node.is_slice():
            assumed = "slice" in node.flags and "ribbon" not in node.flags
            return SolvDegree(slice_all=True, assumed=assumed)
        if node.seifert is not None:
            if arf(node.seifert) == 0:
                return SolvDegree(level=Fraction(0))
            # Arf = 1 blocks the integral level; the rational one survives
            return SolvDegree(
                level=Fraction(0), rational_only=True,
                notes=(f"{node.name}: Arf = 1, so level 0 holds only rationally",),
            )
        if "arf_zero" in node.flags:
            return SolvDegree(level=Fraction(0), assumed=True)
        return SolvDegree(notes=(f"{node.name}: no Seifert data and no Arf annotation",))
    if isinstance(node, TrivialLink):
        return SolvDegree(slice_all=True)
    if isinstance(node, SliceLinkAssumed):
        return SolvDegree(slice_all=True, assumed=True)
    if isinstance(node, ConnectedSum):
        return _combine_min(_solvable(p) for p in node.parts)
    if isinstance(node, Multiple):
        return _solvable(node.parent)
    if isinstance(node, Infect):
        parent = _solvable(node.parent)
        if not parent.known():
            return parent
        best: Optional[Fraction] = None
        assumed = parent.assumed
        rational = parent.rational_only
        notes: List[str] = list(parent.notes)
        for curve, infectant in zip(node.curves, node.infectants):
            p, status = curve.certificate.lower_depth()
            if status == "assumed":
                assumed = True
            q = _solvable(infectant)
            if not q.known():
                return SolvDegree(
                    notes=tuple(notes) + (
                        f"curve {curve.label!r}: infectant level unknown",
                    ) + q.notes,
                )
            assumed = assumed or q.assumed
            rational = rational or q.rational_only
            if q.slice_all:
                continue  # slice infectant never limits the level
            cand = Fraction(p) + q.level
            best = cand if best is None else min(best, cand)
        if best is None:
            # every infectant slice: result as solvable as the parent
            return SolvDegree(
                level=parent.level, slice_all=parent.slice_all,
                rational_only=rational, assumed=assumed, notes=tuple(notes),
            )
        if parent.slice_all:
            return SolvDegree(level=best, rational_only=rational,
                              assumed=assumed, notes=tuple(notes))
        return SolvDegree(level=min(best, parent.level), rational_only=rational,
                          assumed=assumed, notes=tuple(notes))
    raise TypeError(f"not a construction node: {node!r}")


def _combine_min(parts) -> SolvDegree:
    best: Optional[SolvDegree] = None
    slice_all = True
    assumed = False
    rational = False
    notes: List[str] = []
    for p in parts:
        if not p.known():
            return SolvDegree(notes=p.notes)
        assumed = assumed or p.assumed
        rational = rational or p.rational_only
        notes.extend(p.notes)
        if p.slice_all:
            continue
        slice_all = False
        if best is None or p.level < best:
            best = p.level
    if slice_all:
        return SolvDegree(slice_all=True, assumed=assumed, notes=tuple(notes))
    return SolvDegree(level=best, rational_only=rational, assumed=assumed,
                      notes=tuple(notes))


# -- clone expansion --------------------------------------------------------------


def tower_decomposition(node: Node) -> Tuple[int, Node]:
    """Recognize an n-fold doubling tower (9_46 pattern) and return
    (n, terminal knot).  n = 0 when the node is not such an infection."""
    node = normalize_tree(node)
    base, curves = operator_pattern()
    n = 0
    while (
        isinstance(node, Infect)
        and node.parent == base
        and node.curves == curves
        and len(node.infectants) == 2
        and node.infectants[0] == node.infectants[1]
    ):
        n += 1
        node = node.infectants[0]
    return n, node


def expand_clones(node: Node, i: int) -> Node:
    """Rewrite an n-fold doubling tower over K as a single multi-infection:
    the i-fold tower over the unknot (a ribbon knot), infected along its
    2^i clone curves (each at derived depth i) by copies of the
    (n-i)-fold tower over K.  i = 0 returns the tower itself."""
    n, terminal = tower_decomposition(node)
    if n == 0:
        raise ConstructionError("clone expansion needs a doubling tower")
    if not 0 <= i <= n:
        raise ConstructionError(f"expansion level {i} outside 0..{n}")
    if i == 0:
        return normalize_tree(node)
    ribbon_base = normalize_tree(rdouble_tower(BaseKnot.from_catalog("unknot"), i))
    infectant = normalize_tree(rdouble_tower(terminal, n - i))
    _, pattern_curves = operator_pattern()
    curves = []
    for j in range(2**i):
        if i == 1:
            # the two depth-1 clones are the band meridians themselves
            template = pattern_curves[j]
            curves.append(
                CurveSpec(f"clone_{i}_{j}", CloneDepth(1), template.alex_class)
            )
        else:
            curves.append(CurveSpec(f"clone_{i}_{j}", CloneDepth(i)))
    return Infect(ribbon_base, tuple(curves), (infectant,) * (2**i))
