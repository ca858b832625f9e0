#include "instances.hpp"
#include "oracles.hpp"
#include "wes/gamma_enum.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace wes;
using wes::instances::group_of;

namespace {

std::vector<std::int64_t> sorted_orders(const GroupTable& t)
{
    std::vector<std::int64_t> o(t.element_orders.begin(), t.element_orders.end());
    std::sort(o.begin(), o.end());
    return o;
}

std::set<std::pair<std::int64_t, std::int64_t>> f6_f5_pairs(const GroupTable& t)
{
    std::set<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& e : t.elements)
        out.emplace(to_int64(e.f6.matrix()(0, 0)), to_int64(e.f5.matrix()(0, 0)));
    return out;
}

} // namespace

TEST_CASE("abelian invariants from element orders")
{
    for (const auto& cyc : oracle::abelian_groups_up_to(64)) {
        auto orders = oracle::abelian_order_multiset(cyc);
        std::vector<std::size_t> o(orders.begin(), orders.end());
        FgAbGroup expected = instances::group_from_cyclics(cyc);
        auto got = abelian_invariants_from_orders(o);
        CHECK(got == expected.torsion());
    }
}

TEST_CASE("odd cyclic data: the top-degree image is {+-1} x units(m)")
{
    for (std::int64_t m : {3, 5, 7, 9, 15}) {
        WesData w = instances::odd_cyclic(5, 7, m);
        GammaSpace space(w, 1'000'000);
        GroupTable full = gamma_s_group(space);
        CHECK(full.axioms.ok());
        CHECK(full.order == std::size_t(2 * oracle::unit_count(m) * 4 * 6));
        GroupTable top = top_degree_image(space, full);
        CHECK(top.order == std::size_t(2 * oracle::unit_count(m)));
        CHECK(top.is_abelian);
        CHECK(sorted_orders(top) == oracle::sign_times_units_order_multiset(m));
    }
}

TEST_CASE("Z8 over Z2 data: top-degree image is {+-1} x {1,3,5,7}")
{
    const std::set<std::pair<std::int64_t, std::int64_t>> expected{{-1, 1}, {-1, 3}, {-1, 5}, {-1, 7},
                                                                    {1, 1},  {1, 3},  {1, 5},  {1, 7}};
    for (std::int64_t cls : {0, 1}) {
        WesData w = instances::z8_over_z2(3, cls);
        GammaSpace space(w, 1'000'000);
        GroupTable full = gamma_s_group(space);
        CHECK(full.axioms.ok());
        CHECK(full.order == 32);
        // f4 has to fix b6(1) = (1, 0)
        for (const auto& e : full.elements)
            CHECK(e.f4.matrix().col(0) == std::vector<Integer>{1, 0});
        GroupTable top = top_degree_image(space, full);
        CHECK(top.order == 8);
        CHECK(f6_f5_pairs(top) == expected);
        CHECK(top.structure() == "Z2 x Z2 x Z2");
    }
}

TEST_CASE("aut of a cyclic group need not be cyclic")
{
    GammaSpace space(instances::z8_over_z2(3, 1), 1000);
    CHECK(factor_table(space, 1).structure() == "Z2 x Z2");
    CHECK(factor_table(space, 3).structure() == "Z2");
    CHECK(factor_table(space, 2).structure().rfind("nonabelian of order 6", 0) == 0);
    GammaSpace odd(instances::odd_cyclic(9, 5, 7), 1000);
    CHECK(factor_table(odd, 1).structure() == "Z6");
    CHECK(factor_table(odd, 3).structure() == "Z6");
}

TEST_CASE("nonabelian GammaS is reported by table hash")
{
    WesData w = make_wes_data(group_of({3}), group_of({2, 2}), group_of({3}), FgAbGroup::free(1), IntMatrix{{0}, {0}},
                              {{0, 0}});
    GroupTable t = gamma_s_group(w);
    CHECK(t.axioms.ok());
    CHECK(t.order == 2 * 6 * 2 * 2);
    CHECK(!t.is_abelian);
    CHECK(t.structure().find("nonabelian of order 48") == 0);
    CHECK(t.table_hash == gamma_s_group(w).table_hash);
}

TEST_CASE("enumeration output does not depend on the thread count")
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        WesData w = instances::random_instance(rng);
        GroupTable a = gamma_s_group(w, {1'000'000, 1});
        GroupTable b = gamma_s_group(w, {1'000'000, 4});
        CHECK(a.indices == b.indices);
        CHECK(a.table_hash == b.table_hash);
        CHECK(a.structure() == b.structure());
    }
}

TEST_CASE("precomputed membership agrees with the per-tuple criterion")
{
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 25; ++rep) {
        WesData w = instances::random_instance(rng, {600, 20000});
        GammaSpace space(w, 1'000'000);
        MembershipIndex index(space);
        for (std::size_t k = 0; k < space.size(); ++k) {
            TupleIndex t = space.unrank(k);
            CHECK(index.accepted(t) == space.context().is_gamma_automorphism(space.tuple(t)).accepted);
        }
    }
}

TEST_CASE("GammaS satisfies the group axioms on random data")
{
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 25; ++rep) {
        GroupTable t = gamma_s_group(instances::random_instance(rng));
        CHECK(t.axioms.ok());
        CHECK(t.order >= 1);
        for (auto o : t.element_orders)
            CHECK(t.order % o == 0);
    }
}

TEST_CASE("oracle witnesses for Z8 over Z2")
{
    WesData w = instances::z8_over_z2(3, 1);
    OracleContext oracle(w, 1'000'000);
    CHECK(oracle.pi5().group == group_of({16}));
    GammaTuple t = identity_tuple(w);
    t.f6 = Homomorphism::multiplication(w.H6, -1);
    t.f5 = Homomorphism::multiplication(w.H5, 3);
    std::set<std::int64_t> ks;
    for (const auto& phi : oracle.witnesses(t))
        ks.insert(to_int64(phi.matrix()(0, 0)));
    CHECK(ks == std::set<std::int64_t>{3, 11});

    GammaTuple s = identity_tuple(w);
    s.f4 = Homomorphism(w.H4, w.H4, IntMatrix{{0, 1}, {1, 0}});
    CHECK(!oracle.admits(s));
}

TEST_CASE("oracle agrees with the criterion")
{
    for (std::int64_t cls : {0, 1}) {
        OracleReport r = oracle_compare(instances::z8_over_z2(3, cls), 1'000'000);
        CHECK(r.ok());
        CHECK(r.tuples == 2 * 4 * 6 * 2);
        CHECK(r.accepted_by_criterion == 32);
    }
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        WesData w = instances::random_instance(rng, {600, 20000});
        OracleReport r = oracle_compare(w, 1'000'000);
        CHECK(r.ok());
        CHECK(r.accepted_by_oracle == r.accepted_by_criterion);
    }
}

TEST_CASE("enumeration errors")
{
    WesData w = instances::z8_over_z2(3, 1);
    try {
        gamma_s_group(w, {10, 1});
        FAIL("budget not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
    WesData big = make_wes_data(group_of({3}), FgAbGroup::trivial(), group_of({3}), FgAbGroup::free(2),
                                IntMatrix(0, 2), {{}});
    try {
        gamma_s_group(big);
        FAIL("rank 2 accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedRank);
        CHECK(std::string(e.what()).find("aut(H6)") != std::string::npos);
    }
    WesData bad = w;
    bad.H3 = group_of({2});
    CHECK_THROWS_AS(gamma_s_group(bad), Error);
}

TEST_CASE("only the sign of H6 survives when everything else vanishes")
{
    WesData w = make_wes_data(FgAbGroup::trivial(), FgAbGroup::trivial(), FgAbGroup::trivial(), FgAbGroup::free(1),
                              IntMatrix(0, 1), {});
    GroupTable t = gamma_s_group(w);
    CHECK(t.order == 2);
    CHECK(t.structure() == "Z2");
}

TEST_CASE("the oracle finds the identity for the identity tuple")
{
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 15; ++rep) {
        WesData w = instances::random_instance(rng);
        OracleContext oracle(w, 1'000'000);
        auto found = oracle.witnesses(identity_tuple(w));
        Homomorphism id = Homomorphism::identity(oracle.pi5().group);
        CHECK(std::find(found.begin(), found.end(), id) != found.end());
    }
}

TEST_CASE("split data with b6 = 0 accepts a superset")
{
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        WesData w = instances::random_instance(rng);
        Gamma5 g5 = gamma5_structure(w.H3, w.H4);
        WesData split = make_wes_data(w.H3, w.H4, w.H5, w.H6, IntMatrix(g5.summand_count(), w.H6.ngens()),
                                      std::vector<std::vector<Integer>>(w.H5.torsion_count(),
                                                                        std::vector<Integer>(g5.group.ngens())));
        GammaSpace a(w, 1'000'000), b(split, 1'000'000);
        GroupTable ta = gamma_s_group(a), tb = gamma_s_group(b);
        CHECK(tb.order == b.size());
        CHECK(std::includes(tb.indices.begin(), tb.indices.end(), ta.indices.begin(), ta.indices.end()));
    }
}

TEST_CASE("structure does not depend on element order")
{
    std::mt19937_64 rng(5);
    for (const auto& cyc : oracle::abelian_groups_up_to(48)) {
        auto orders = oracle::abelian_order_multiset(cyc);
        std::vector<std::size_t> o(orders.begin(), orders.end());
        auto expected = abelian_invariants_from_orders(o);
        std::shuffle(o.begin(), o.end(), rng);
        CHECK(abelian_invariants_from_orders(o) == expected);
    }
}
