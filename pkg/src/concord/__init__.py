"""concord: exact computation of knot/link concordance obstructions.

The package computes, in exact rational arithmetic, the desk-scale
obstruction theory for satellite/doubling constructions: Alexander
polynomials and modules from Seifert matrices, Levine signature functions
and their circle integrals with certified error bounds, Blanchfield
isotropy lattices, free-group derived-series depths of doubling curves,
and symbolic first-order signature sets feeding slice/solvability
verdicts.
"""

from concord.laurent import (
    LaurentPoly,
    Rational,
    RationalFunction,
    RationalFunctionModPoly,
    factor,
    gcd,
    lcm,
    normalize,
)
from concord.certified import CertifiedReal, Interval
from concord.seifert import (
    SeifertMatrix,
    SignatureFunction,
    alexander_poly,
    arf,
    connected_sum,
    mirror,
    rho0,
    rho0_riemann_estimate,
    signature_at,
    signature_function,
)
from concord.alexmod import (
    AlexModule,
    BlanchfieldForm,
    ModElement,
    Submodule,
    SubmoduleLattice,
    UnsupportedModule,
    blanchfield,
    blanchfield_form,
    isotropic_submodules,
    module_from_seifert,
    smith_normal_form,
    submodule_membership,
)
from concord.freegroup import (
    DepthResult,
    FreeWord,
    ResourceCapExceeded,
    WreathElement,
    bing_curve,
    derived_depth,
    magnus_embed,
    parse_word,
)
from concord.construction import (
    AssumedDepth,
    BaseKnot,
    BingDouble,
    ConnectedSum,
    ConstructionError,
    CurveSpec,
    Infect,
    LinkingZeroDepth,
    Multiple,
    RDouble,
    SliceLinkAssumed,
    SolvDegree,
    TrivialLink,
    WordDepth,
    expand_clones,
    normalize_tree,
    operator_pattern,
    rdouble_tower,
    solvability_upper_bound,
)
from concord.rhocalc import (
    Axioms,
    FirstOrderSignatures,
    MetabelianSystem,
    MissingAlexClass,
    RhoAtom,
    RhoTerm,
    eval_kernel,
    first_order_signatures,
    linearly_independent,
    provably_nonzero,
    rho_additivity,
    simplify,
)
from concord.verdict import (
    Verdict,
    bing_obstruction,
    doubling_operator_verdict,
    infection_obstruction,
)

__version__ = "0.1.0"
