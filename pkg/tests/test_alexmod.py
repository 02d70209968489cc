import random
from fractions import Fraction

import pytest

from concord import catalog
from concord.alexmod import (
    BlanchfieldForm,
    SubmoduleLattice,
    UnsupportedModule,
    blanchfield,
    isotropic_submodules,
    module_from_seifert,
    smith_normal_form,
    submodule_membership,
    _identity,
    _mat_mul,
)
from concord.laurent import LaurentPoly, exact_div, gcd, reduce_mod
from concord.seifert import SeifertMatrix, alexander_poly
from test_seifert import random_seifert


def lp(d):
    return LaurentPoly(d)


NINE46 = SeifertMatrix([[0, 2], [1, 0]], name="nine46")
TREFOIL = SeifertMatrix([[-1, 1], [0, -1]], name="trefoil")
FIG8 = SeifertMatrix([[1, 1], [0, -1]], name="figure8")
UNKNOT = SeifertMatrix([], name="unknot")
EIGHT9 = catalog.get("eight9")[0]

P_EX = lp({3: 1, 2: -2, 1: 1, 0: -1})
Q_EX = lp({3: 1, 2: -1, 1: 2, 0: -1})


class TestSmith:
    def test_diagonalizes_and_inverses(self):
        rng = random.Random(4)
        for _ in range(25):
            v = random_seifert(rng, rng.choice([1, 2]))
            n = v.size()
            t = LaurentPoly.t()
            m = [
                [t.scale(v.entries[j][i]) - LaurentPoly.constant(v.entries[i][j])
                 for j in range(n)]
                for i in range(n)
            ]
            d, u, uinv, w, winv = smith_normal_form(m)
            prod = _mat_mul(_mat_mul(u, m), w)
            for i in range(n):
                for j in range(n):
                    expect = d[i] if i == j else LaurentPoly.zero()
                    assert prod[i][j] == expect
            assert _mat_mul(u, uinv) == _identity(n)
            assert _mat_mul(w, winv) == _identity(n)
            for i in range(n - 1):
                if not d[i].is_zero() and not d[i + 1].is_zero():
                    assert exact_div(d[i + 1], d[i]) is not None

    def test_divisibility_chain(self):
        # anti-diagonal coprime entries force [1, product]
        m = [
            [LaurentPoly.zero(), lp({1: 1, 0: -2})],
            [lp({1: 2, 0: -1}), LaurentPoly.zero()],
        ]
        d, *_ = smith_normal_form(m)
        assert d[0] == LaurentPoly.one()
        assert d[1] == lp({2: 2, 1: -5, 0: 2})


class TestModule:
    def test_nine46_two_isotypic_pieces(self):
        mod = module_from_seifert(NINE46)
        assert mod.is_cyclic()  # invariant-factor chain has one entry
        assert [str(p) for p in mod.isotypic_orders()] == ["t - 2", "2*t - 1"]
        assert mod.dim_over_q() == 2

    def test_eight9_cyclic_of_order_pq(self):
        mod = module_from_seifert(EIGHT9)
        assert mod.is_cyclic()
        assert mod.orders[0].eq_up_to_units(P_EX * Q_EX)
        assert {str(p) for p in mod.isotypic_orders()} == {str(P_EX), str(Q_EX)}

    def test_unknot_zero_module(self):
        mod = module_from_seifert(UNKNOT)
        assert mod.is_zero_module()
        assert isotropic_submodules(mod) == [
            isotropic_submodules(mod)[0]
        ]

    def test_trefoil_cyclic_irreducible(self):
        mod = module_from_seifert(TREFOIL)
        assert [str(d) for d in mod.orders] == ["t^2 - t + 1"]

    def test_orders_multiply_to_delta_1000(self):
        rng = random.Random(31337)
        for _ in range(1000):
            v = random_seifert(rng, rng.choice([1, 1, 2, 3]))
            mod = module_from_seifert(v)
            assert mod.total_order().eq_up_to_units(alexander_poly(v))


class TestBlanchfield:
    def test_nine46_values(self):
        mod = module_from_seifert(NINE46)
        form = BlanchfieldForm(mod)
        comps = mod.isotypic_components()
        alpha, beta = comps[0].generator, comps[1].generator
        assert form.pairing(alpha, alpha).is_zero()
        assert form.pairing(beta, beta).is_zero()
        assert not form.pairing(alpha, beta).is_zero()

    def test_zero_module_vacuous(self):
        mod = module_from_seifert(UNKNOT)
        form = BlanchfieldForm(mod)
        assert form.pairing(mod.zero(), mod.zero()).is_zero()

    def test_sesqui_hermitian_nonsingular_random(self):
        rng = random.Random(55)
        cases = 0
        while cases < 60:
            v = random_seifert(rng, rng.choice([1, 1, 2]))
            mod = module_from_seifert(v)
            if mod.is_zero_module():
                continue
            cases += 1
            form = BlanchfieldForm(mod)
            assert form.is_nonsingular_on_basis()
            x = mod.element([
                LaurentPoly({rng.randrange(-2, 3): rng.randrange(-3, 4) for _ in range(2)})
                for _ in mod.orders
            ])
            y = mod.element([
                LaurentPoly({rng.randrange(-2, 3): rng.randrange(-3, 4) for _ in range(2)})
                for _ in mod.orders
            ])
            f = LaurentPoly({rng.randrange(-1, 3): rng.randrange(-3, 4) for _ in range(2)})
            lhs = form.pairing(mod.scale(f, x), y)
            rhs = form.pairing(x, y).scale_poly(f)
            assert lhs == rhs
            lhs2 = form.pairing(x, mod.scale(f, y))
            rhs2 = form.pairing(x, y).scale_poly(f.conjugate())
            assert lhs2 == rhs2
            assert form.pairing(y, x) == form.pairing(x, y).conjugate()

    def test_pairing_kills_orders(self):
        mod = module_from_seifert(EIGHT9)
        form = BlanchfieldForm(mod)
        g = mod.generator(0)
        d = mod.orders[0]
        assert form.pairing(mod.scale(d, g), g).is_zero()


class TestIsotropic:
    def test_nine46_three(self):
        mod = module_from_seifert(NINE46)
        subs = isotropic_submodules(mod)
        assert len(subs) == 3
        assert subs[0].is_zero()
        assert all(len(s.component_keys) <= 1 for s in subs)

    def test_eight9_three(self):
        mod = module_from_seifert(EIGHT9)
        subs = isotropic_submodules(mod)
        assert len(subs) == 3
        assert subs[0].is_zero()

    def test_trefoil_only_zero(self):
        mod = module_from_seifert(TREFOIL)
        subs = isotropic_submodules(mod)
        assert len(subs) == 1 and subs[0].is_zero()

    def test_fig8_only_zero(self):
        mod = module_from_seifert(FIG8)
        subs = isotropic_submodules(mod)
        assert len(subs) == 1 and subs[0].is_zero()

    def test_brute_force_divisor_oracle(self):
        # cyclic squarefree modules: submodules <=> divisors; compare lattices
        for v in [NINE46, EIGHT9, TREFOIL, FIG8]:
            mod = module_from_seifert(v)
            form = BlanchfieldForm(mod)
            lat = SubmoduleLattice(mod, form)
            comps = mod.isotypic_components()
            d = mod.orders[0]
            g = mod.generator(0)
            brute = set()
            for mask in range(1 << len(comps)):
                f = LaurentPoly.one()
                for i in range(len(comps)):
                    if mask >> i & 1:
                        f = f * comps[i].order
                val = form.pairing(mod.scale(f, g), mod.scale(f, g))
                if val.is_zero():
                    # <f*g> spans the components NOT dividing f
                    keys = tuple(sorted(
                        c.key() for i, c in enumerate(comps) if not mask >> i & 1
                    ))
                    brute.add(keys)
            enumerated = {s.component_keys for s in lat.isotropic()}
            assert brute == enumerated

    def test_membership(self):
        mod = module_from_seifert(EIGHT9)
        subs = isotropic_submodules(mod)
        g = mod.generator(0)
        nonzero_subs = [s for s in subs if not s.is_zero()]
        for s in nonzero_subs:
            assert submodule_membership(mod, s, g) == 0
            for gen in s.generators:
                assert submodule_membership(mod, s, gen) == 1
        zero_sub = subs[0]
        assert submodule_membership(mod, zero_sub, mod.zero()) == 1
        assert submodule_membership(mod, zero_sub, g) == 0

    def test_non_squarefree_rejected(self):
        vsum = SeifertMatrix(
            [[-1, 1, 0, 0], [0, -1, 0, 0], [0, 0, -1, 1], [0, 0, 0, -1]]
        )  # trefoil # trefoil: order (t^2-t+1)^2
        mod = module_from_seifert(vsum)
        with pytest.raises(UnsupportedModule):
            isotropic_submodules(mod)

    def test_nine46_membership_spec_rows(self):
        mod = module_from_seifert(NINE46)
        subs = isotropic_submodules(mod)
        comps = mod.isotypic_components()
        alpha, beta = comps[0].generator, comps[1].generator
        p_alpha = next(
            s for s in subs if not s.is_zero() and submodule_membership(mod, s, alpha)
        )
        assert submodule_membership(mod, p_alpha, beta) == 0
