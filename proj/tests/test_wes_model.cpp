#include "instances.hpp"
#include "wes/wes_model.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace wes;
using wes::instances::group_of;

namespace {

Homomorphism mult(const FgAbGroup& G, std::int64_t k) { return Homomorphism::multiplication(G, k); }

Homomorphism swap2(const FgAbGroup& G) { return Homomorphism(G, G, IntMatrix{{0, 1}, {1, 0}}); }

WesData zero_data(FgAbGroup H3, FgAbGroup H4, FgAbGroup H5, FgAbGroup H6)
{
    Gamma5 g = gamma5_structure(H3, H4);
    IntMatrix b6(g.summand_count(), H6.ngens());
    FgAbGroup coker = cokernel(g.from_summand_matrix(H6, b6)).group;
    std::vector<std::vector<Integer>> cls(H5.torsion_count(), std::vector<Integer>(coker.ngens()));
    return make_wes_data(H3, H4, H5, H6, b6, cls);
}

} // namespace

TEST_CASE("gamma5 examples")
{
    CHECK(gamma5(group_of({3, 3}), FgAbGroup::trivial()) == group_of({3}));
    CHECK(gamma5(group_of({3}), group_of({2, 2})) == group_of({2, 2}));
    CHECK(gamma5(group_of({5}), group_of({7})).is_trivial());
    CHECK(gamma5(group_of({3, 3}), group_of({2})) == group_of({6}));
    CHECK(gamma5(group_of({3, 9}), group_of({4}, 1)) == group_of({2, 6}));
    CHECK(gamma5(FgAbGroup::trivial(), FgAbGroup::free(2)) == group_of({2, 2}));
}

TEST_CASE("gamma5 rejects H3 with 2-torsion or free part")
{
    for (const auto& H3 : {group_of({2}), group_of({4}), FgAbGroup::free(1), group_of({3, 6})}) {
        try {
            gamma5(H3, FgAbGroup::trivial());
            FAIL("expected a hypothesis violation");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::HypothesisViolation);
            CHECK(std::string(e.what()).find("H3 ⊗ Z₂ ≠ 0") != std::string::npos);
        }
    }
}

TEST_CASE("summand and canonical bases are inverse on Gamma5")
{
    Gamma5 g = gamma5_structure(group_of({3, 3}), group_of({2}));
    REQUIRE(g.summand_count() == 2);
    Homomorphism id = Homomorphism::identity(g.group);
    CHECK(g.from_summand_matrix(g.group, g.to_summand_matrix(id)) == id);
    // the tensor generator has order 2, the wedge generator order 3
    Homomorphism t = g.from_summand_matrix(FgAbGroup::cyclic(6), IntMatrix{{3}, {0}});
    CHECK(t.well_defined());
    CHECK(!Homomorphism::unchecked(FgAbGroup::cyclic(2), g.group, (g.to_canonical * IntMatrix{{0}, {1}})).well_defined());
}

TEST_CASE("validate reports each invariant")
{
    CHECK(validate(instances::odd_cyclic(3, 5, 7)).ok());
    CHECK(validate(instances::z8_over_z2(3, 1)).ok());

    WesData w = instances::odd_cyclic(3, 5, 7);
    w.H3 = group_of({2});
    ValidationReport r = validate(w);
    CHECK(!r.ok());
    REQUIRE(r.first_failure());
    CHECK(r.first_failure()->find("H3 ⊗ Z₂ ≠ 0") != std::string::npos);

    WesData v = instances::odd_cyclic(3, 5, 7);
    v.H6 = group_of({4});
    r = validate(v);
    CHECK(!r.ok());
    bool saw = false;
    for (const auto& c : r.checks)
        if (!c.passed && c.reason.find("H6 must be torsion-free") != std::string::npos)
            saw = true;
    CHECK(saw);

    try {
        WesContext ctx(w);
        FAIL("context accepted invalid data");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HypothesisViolation);
    }
}

TEST_CASE("make_wes_data checks shapes")
{
    CHECK_THROWS_AS(make_wes_data(group_of({3}), group_of({2, 2}), group_of({8}), FgAbGroup::free(1),
                                  IntMatrix{{1}}, {{1}}),
                    Error);
    CHECK_THROWS_AS(make_wes_data(group_of({3}), group_of({2, 2}), group_of({8}), FgAbGroup::free(1),
                                  IntMatrix{{1}, {0}}, {}),
                    Error);
}

TEST_CASE("gamma_of examples")
{
    WesData w = instances::z8_over_z2(3, 0);
    WesContext ctx(w);
    for (std::int64_t u : {1, 2})
        CHECK(ctx.gamma_of(mult(w.H3, u), Homomorphism::identity(w.H4)) == Homomorphism::identity(ctx.gamma5().group));
    // on H4 (x) Z2 = H4 the map is f4 itself, so gamma runs over all of GL2(F2)
    std::set<IntMatrix> gammas;
    for (const auto& f4 : aut_group(w.H4, 1000))
        for (const auto& f3 : aut_group(w.H3, 1000)) {
            Homomorphism g = ctx.gamma_of(f3, f4);
            CHECK(g.matrix() == f4.matrix());
            gammas.insert(g.matrix());
        }
    CHECK(gammas.size() == 6);

    WesData z = zero_data(group_of({3, 3}), FgAbGroup::trivial(), group_of({3}), FgAbGroup::free(1));
    WesContext zc(z);
    Homomorphism g = zc.gamma_of(swap2(z.H3), Homomorphism::identity(z.H4));
    CHECK(g == mult(zc.gamma5().group, 2));
    CHECK(zc.gamma_of(mult(z.H3, 2), Homomorphism::identity(z.H4)) == mult(zc.gamma5().group, 4));

    CHECK_THROWS_AS(ctx.gamma_of(mult(w.H3, 3), Homomorphism::identity(w.H4)), Error);
}

TEST_CASE("gamma_tilde examples")
{
    WesData w = instances::z8_over_z2(3, 1);
    WesContext ctx(w);
    REQUIRE(ctx.coker_b6().group == group_of({2}));
    Homomorphism id5 = Homomorphism::identity(ctx.gamma5().group);
    CHECK(ctx.gamma_tilde(id5) == Homomorphism::identity(ctx.coker_b6().group));

    Homomorphism swap = ctx.gamma_of(Homomorphism::identity(w.H3), swap2(w.H4));
    try {
        ctx.gamma_tilde(swap);
        FAIL("swap should not preserve im b6");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotInducible);
    }
    // (x, y) -> (x + y, y) fixes b6(1) = (1, 0)
    Homomorphism shear = ctx.gamma_of(Homomorphism::identity(w.H3), Homomorphism(w.H4, w.H4, IntMatrix{{1, 1}, {0, 1}}));
    CHECK(ctx.gamma_tilde(shear) == Homomorphism::identity(ctx.coker_b6().group));

    WesData z = zero_data(group_of({3, 3}), FgAbGroup::trivial(), group_of({3}), FgAbGroup::free(1));
    WesContext zc(z);
    Homomorphism g = zc.gamma_of(swap2(z.H3), Homomorphism::identity(z.H4));
    Homomorphism t = zc.gamma_tilde(g);
    CHECK(compose(t, zc.coker_b6().projection) == compose(zc.coker_b6().projection, g));
}

TEST_CASE("is_gamma_automorphism examples")
{
    WesData w = instances::z8_over_z2(3, 1);
    CHECK(is_gamma_automorphism(w, identity_tuple(w)).accepted);
    GammaTuple t = identity_tuple(w);
    t.f6 = mult(w.H6, -1);
    t.f5 = mult(w.H5, 3);
    CHECK(is_gamma_automorphism(w, t).accepted);

    // f6 = -1 is fine because b6 lands in 2-torsion; swapping H4 breaks the square
    GammaTuple s = identity_tuple(w);
    s.f4 = swap2(w.H4);
    Membership m = is_gamma_automorphism(w, s);
    CHECK(!m.accepted);
    CHECK(m.reason.find("b6 square") != std::string::npos);

    GammaTuple bad = identity_tuple(w);
    bad.f5 = mult(w.H5, 2);
    CHECK_THROWS_AS(is_gamma_automorphism(w, bad), Error);

    // odd data: every tuple is accepted since Gamma5 = 0
    WesData o = instances::odd_cyclic(3, 5, 7);
    for (const auto& f3 : aut_group(o.H3, 100))
        for (const auto& f4 : aut_group(o.H4, 100))
            for (const auto& f5 : aut_group(o.H5, 100))
                for (const auto& f6 : aut_group(o.H6, 100))
                    CHECK(is_gamma_automorphism(o, {f3, f4, f5, f6}).accepted);
}

TEST_CASE("split class with b6 = 0 accepts every tuple")
{
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        WesData r = instances::random_instance(rng, {300, 10000});
        WesData w = zero_data(r.H3, r.H4, r.H5, r.H6);
        WesContext ctx(w);
        for (const auto& f3 : aut_group(w.H3, 1000))
            for (const auto& f4 : aut_group(w.H4, 1000)) {
                GammaTuple t{f3, f4, Homomorphism::identity(w.H5), Homomorphism::identity(w.H6)};
                CHECK(ctx.is_gamma_automorphism(t).accepted);
            }
    }
}

TEST_CASE("the left square forces gamma to preserve im b6")
{
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        WesData w = instances::random_instance(rng, {400, 10000});
        WesContext ctx(w);
        for (const auto& f3 : aut_group(w.H3, 1000))
            for (const auto& f4 : aut_group(w.H4, 1000)) {
                Homomorphism g = ctx.gamma_of(f3, f4);
                for (const auto& f6 : aut_group(w.H6, 10))
                    if (ctx.b6_square_commutes(g, f6))
                        CHECK_NOTHROW(ctx.gamma_tilde(g));
            }
    }
}

TEST_CASE("accepted tuples are closed under composition")
{
    for (std::int64_t cls : {0, 1}) {
        WesData w = instances::z8_over_z2(3, cls);
        WesContext ctx(w);
        std::vector<GammaTuple> accepted;
        for (const auto& f3 : aut_group(w.H3, 100))
            for (const auto& f4 : aut_group(w.H4, 100))
                for (const auto& f5 : aut_group(w.H5, 100))
                    for (const auto& f6 : aut_group(w.H6, 100)) {
                        GammaTuple t{f3, f4, f5, f6};
                        if (ctx.is_gamma_automorphism(t).accepted)
                            accepted.push_back(t);
                    }
        CHECK(accepted.size() == 32);
        for (const auto& a : accepted)
            for (const auto& b : accepted)
                CHECK(ctx.is_gamma_automorphism(compose(a, b)).accepted);
    }
}

TEST_CASE("wes_report examples")
{
    InvariantsReport r = wes_report(instances::z8_over_z2(3, 1));
    CHECK(r.gamma5 == group_of({2, 2}));
    CHECK(r.coker_b6 == group_of({2}));
    CHECK(r.ext == group_of({2}));
    CHECK(r.pi5 == group_of({16}));
    CHECK(r.pi5_order == 16);
    CHECK(!r.pi5_class_split);

    InvariantsReport s = wes_report(instances::z8_over_z2(3, 0));
    CHECK(s.pi5 == group_of({2, 8}));
    CHECK(s.pi5_class_split);

    InvariantsReport o = wes_report(instances::odd_cyclic(9, 5, 15));
    CHECK(o.gamma5.is_trivial());
    CHECK(o.coker_b6.is_trivial());
    CHECK(o.pi5 == group_of({15}));
    CHECK(o.pi5_order == 15);
}

TEST_CASE("homology_of_complex examples")
{
    // C3 = C4 = Z, d4 = 3: H3 = Z3, H4 = 0
    ChainHomology h = homology_of_complex(IntMatrix{{3}}, IntMatrix(1, 0), IntMatrix(0, 1));
    CHECK(h.H3 == group_of({3}));
    CHECK(h.H4.is_trivial());
    CHECK(h.H5.is_trivial());
    CHECK(h.H6 == FgAbGroup::free(1));

    // C4 = C5 = Z^2, d5 = diag(2, 4)
    ChainHomology k = homology_of_complex(IntMatrix(0, 2), IntMatrix{{2, 0}, {0, 4}}, IntMatrix(2, 0));
    CHECK(k.H4 == group_of({2, 4}));
    CHECK(k.H5.is_trivial());

    CHECK_THROWS_AS(homology_of_complex(IntMatrix{{1}}, IntMatrix{{1}}, IntMatrix(1, 0)), Error);
    CHECK_THROWS_AS(homology_of_complex(IntMatrix{{1, 0}}, IntMatrix{{1}}, IntMatrix(1, 0)), Error);
}

TEST_CASE("homology ranks satisfy the Euler characteristic")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(0, 3), val(-3, 3);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t c[4] = {std::size_t(dim(rng)), std::size_t(dim(rng)), std::size_t(dim(rng)), std::size_t(dim(rng))};
        // d4 and d6 factor through the left and right kernels of a random d5
        IntMatrix d5(c[1], c[2]);
        for (std::size_t i = 0; i < c[1]; ++i)
            for (std::size_t j = 0; j < c[2]; ++j)
                d5(i, j) = val(rng);
        IntMatrix right = integer_kernel(d5);
        IntMatrix left = integer_kernel(d5.transpose()).transpose();
        IntMatrix Y(right.cols(), c[3]), X(c[0], left.rows());
        for (std::size_t i = 0; i < Y.rows(); ++i)
            for (std::size_t j = 0; j < Y.cols(); ++j)
                Y(i, j) = val(rng);
        for (std::size_t i = 0; i < X.rows(); ++i)
            for (std::size_t j = 0; j < X.cols(); ++j)
                X(i, j) = val(rng);
        IntMatrix d4 = X * left, d6 = right * Y;
        ChainHomology h = homology_of_complex(d4, d5, d6);
        long chi_chain = long(c[0]) - long(c[1]) + long(c[2]) - long(c[3]);
        long chi_h = long(h.H3.rank()) - long(h.H4.rank()) + long(h.H5.rank()) - long(h.H6.rank());
        CHECK(chi_chain == chi_h);
    }
}
