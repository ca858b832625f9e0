#pragma once

#include "wes/wes_model.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace wes {

struct EnumOptions {
    /// Cap on candidates per automorphism enumeration and on the tuple product.
    std::uint64_t budget = 1'000'000;
    /// Worker threads for membership tests; output does not depend on it.
    unsigned threads = 1;
};

/// Indices into aut(H6), aut(H5), aut(H4), aut(H3), in that order.
using TupleIndex = std::array<std::size_t, 4>;

/// aut(G) as an indexed list.
struct AutFactor {
    std::string name;
    FgAbGroup group;
    std::vector<Homomorphism> elements;
    std::map<IntMatrix, std::size_t> index;
    std::size_t identity = 0;

    AutFactor() = default;

    AutFactor(std::string n, const FgAbGroup& g, std::uint64_t budget) : name(std::move(n)), group(g)
    {
        try {
            elements = aut_group(g, budget);
        } catch (const Error& e) {
            throw Error(e.code(), "aut(" + name + "): " + e.message());
        }
        for (std::size_t i = 0; i < elements.size(); ++i)
            index.emplace(elements[i].matrix(), i);
        identity = find(Homomorphism::identity(g));
    }

    std::size_t size() const { return elements.size(); }

    std::size_t find(const Homomorphism& f) const
    {
        auto it = index.find(f.matrix());
        if (it == index.end())
            throw Error(ErrorCode::NotAutomorphism, "map is not in aut(" + name + ")");
        return it->second;
    }
};

/// The product aut(H6) x aut(H5) x aut(H4) x aut(H3) over a validated WesData.
class GammaSpace {
public:
    GammaSpace(const WesData& w, std::uint64_t budget)
        : ctx_(w), factors_{AutFactor("H6", w.H6, budget), AutFactor("H5", w.H5, budget),
                            AutFactor("H4", w.H4, budget), AutFactor("H3", w.H3, budget)}
    {
        Integer total = 1;
        for (const auto& f : factors_)
            total *= f.size();
        if (total > budget)
            throw Error(ErrorCode::BudgetExceeded, "tuple product aut(H6) x aut(H5) x aut(H4) x aut(H3) has " +
                                                       to_string(total) + " elements, budget is " +
                                                       std::to_string(budget));
        size_ = static_cast<std::size_t>(total);
    }

    const WesContext& context() const noexcept { return ctx_; }
    const AutFactor& factor(std::size_t k) const { return factors_[k]; }
    std::size_t size() const noexcept { return size_; }

    /// Mixed-radix decoding, last factor fastest: rank order is lexicographic.
    TupleIndex unrank(std::size_t k) const
    {
        TupleIndex t{};
        for (std::size_t f = 4; f-- > 0;) {
            t[f] = k % factors_[f].size();
            k /= factors_[f].size();
        }
        return t;
    }

    GammaTuple tuple(const TupleIndex& t) const
    {
        return {factors_[3].elements[t[3]], factors_[2].elements[t[2]], factors_[1].elements[t[1]],
                factors_[0].elements[t[0]]};
    }

    TupleIndex identity() const
    {
        return {factors_[0].identity, factors_[1].identity, factors_[2].identity, factors_[3].identity};
    }

    TupleIndex index_of(const GammaTuple& g) const
    {
        return {factors_[0].find(g.f6), factors_[1].find(g.f5), factors_[2].find(g.f4), factors_[3].find(g.f3)};
    }

private:
    WesContext ctx_;
    std::array<AutFactor, 4> factors_;
    std::size_t size_ = 0;
};

/// Membership by the extension criterion with every per-factor quantity
/// precomputed, for exhaustive enumeration. Agrees with
/// WesContext::is_gamma_automorphism tuple by tuple.
class MembershipIndex {
public:
    explicit MembershipIndex(const GammaSpace& space) : space_(space)
    {
        const WesContext& ctx = space.context();
        const WesData& w = ctx.data();
        ExtGroup ext = ext_presentation(w.H5, ctx.coker_b6().group);
        auto coords = [&](const ExtClass& e) { return ext.projection.apply(e.flat()); };

        const AutFactor& a6 = space.factor(0);
        const AutFactor& a5 = space.factor(1);
        const AutFactor& a4 = space.factor(2);
        const AutFactor& a3 = space.factor(3);
        for (const auto& f6 : a6.elements)
            b6_f6_.push_back(compose(w.b6, f6).matrix());
        for (const auto& f5 : a5.elements)
            pulled_.push_back(coords(ext_pullback(f5, w.pi5_class)));
        for (const auto& f4 : a4.elements)
            for (const auto& f3 : a3.elements) {
                Homomorphism gamma = ctx.gamma_block(f3, f4);
                gamma_b6_.push_back(compose(gamma, w.b6).matrix());
                try {
                    pushed_.push_back(coords(ext_pushforward(ctx.gamma_tilde(gamma), w.pi5_class)));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NotInducible)
                        throw;
                    pushed_.push_back(std::nullopt);
                }
            }
    }

    bool accepted(const TupleIndex& t) const
    {
        std::size_t g = t[2] * space_.factor(3).size() + t[3];
        if (!(gamma_b6_[g] == b6_f6_[t[0]]))
            return false;
        return pushed_[g] && *pushed_[g] == pulled_[t[1]];
    }

private:
    const GammaSpace& space_;
    std::vector<IntMatrix> b6_f6_;
    std::vector<std::vector<Integer>> pulled_;
    std::vector<IntMatrix> gamma_b6_;
    std::vector<std::optional<std::vector<Integer>>> pushed_;
};

/// Composition of tuples by index, memoized per factor. Single-threaded.
class TupleMultiplier {
public:
    explicit TupleMultiplier(const GammaSpace& space) : space_(space) {}

    TupleIndex operator()(const TupleIndex& a, const TupleIndex& b)
    {
        TupleIndex c{};
        for (std::size_t f = 0; f < 4; ++f)
            c[f] = product(f, a[f], b[f]);
        return c;
    }

    TupleIndex inverse(const TupleIndex& a)
    {
        TupleIndex c{};
        for (std::size_t f = 0; f < 4; ++f) {
            const AutFactor& F = space_.factor(f);
            c[f] = F.find(*wes::inverse(F.elements[a[f]]));
        }
        return c;
    }

private:
    std::size_t product(std::size_t f, std::size_t a, std::size_t b)
    {
        const AutFactor& F = space_.factor(f);
        std::uint64_t key = static_cast<std::uint64_t>(a) * F.size() + b;
        auto [it, fresh] = memo_[f].try_emplace(key, 0);
        if (fresh)
            it->second = F.find(compose(F.elements[a], F.elements[b]));
        return it->second;
    }

    const GammaSpace& space_;
    std::array<std::unordered_map<std::uint64_t, std::size_t>, 4> memo_;
};

struct AxiomCheck {
    bool has_identity = false;
    bool closed = false;
    bool has_inverses = false;
    bool associative_sample = false;

    bool ok() const { return has_identity && closed && has_inverses && associative_sample; }
};

/// A finite group of Gamma-automorphisms with its identified structure.
/// This is the group GammaS(X) (also written GammaG(X)) when built by
/// gamma_s_group.
struct GroupTable {
    std::vector<GammaTuple> elements;
    std::vector<TupleIndex> indices;
    std::size_t order = 0;
    bool is_abelian = false;
    /// Invariant factors when abelian; empty for the trivial group.
    std::vector<Integer> invariant_factors;
    /// Greedy generating set, as positions in `elements`.
    std::vector<std::size_t> generators;
    std::vector<std::size_t> element_orders;
    /// FNV-1a hash of the multiplication table in element order.
    std::uint64_t table_hash = 0;
    AxiomCheck axioms;

    std::string structure() const
    {
        std::ostringstream os;
        if (!is_abelian) {
            os << "nonabelian of order " << order << ", table hash 0x" << std::hex << table_hash;
            return os.str();
        }
        if (invariant_factors.empty())
            return "trivial";
        for (std::size_t i = 0; i < invariant_factors.size(); ++i)
            os << (i ? " x " : "") << "Z" << invariant_factors[i];
        return os.str();
    }
};

namespace detail {

inline std::vector<std::uint64_t> factor_primes(std::uint64_t n)
{
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    if (n > 1)
        ps.push_back(n);
    return ps;
}

} // namespace detail

/// Invariant factors of a finite abelian group from its element orders. For
/// each prime p, log_p #{x : x^(p^j) = 1} counts the cyclic p-factors of
/// exponent >= j, which fixes the group up to isomorphism.
inline std::vector<Integer> abelian_invariants_from_orders(const std::vector<std::size_t>& orders)
{
    const std::uint64_t n = orders.size();
    std::vector<Integer> factors;
    for (std::uint64_t p : detail::factor_primes(n)) {
        std::vector<std::size_t> at_least;  // at_least[j-1] = # cyclic p-factors with exponent >= j
        std::size_t prev_log = 0;
        for (std::uint64_t pj = p;; pj *= p) {
            std::size_t count = 0;
            for (auto o : orders)
                if (pj % o == 0)
                    ++count;
            std::size_t lg = 0;
            for (std::size_t c = count; c > 1; c /= p)
                ++lg;
            if (lg == prev_log)
                break;
            at_least.push_back(lg - prev_log);
            prev_log = lg;
        }
        // exponents of the p-factors, largest first
        std::vector<std::size_t> exps;
        for (std::size_t k = 0; k < (at_least.empty() ? 0 : at_least[0]); ++k) {
            std::size_t e = 0;
            while (e < at_least.size() && at_least[e] > k)
                ++e;
            exps.push_back(e);
        }
        if (factors.size() < exps.size())
            factors.insert(factors.begin(), exps.size() - factors.size(), Integer(1));
        // factors are stored smallest first; pair the largest p-power with the largest factor
        for (std::size_t k = 0; k < exps.size(); ++k) {
            Integer pe = 1;
            for (std::size_t e = 0; e < exps[k]; ++e)
                pe *= p;
            factors[factors.size() - 1 - k] *= pe;
        }
    }
    return factors;
}

/// The same group under its other name.
using GammaTable = GroupTable;

/// Builds the table of the subgroup with the given elements and checks the
/// group axioms on it (closure and inverses exhaustively, associativity on a
/// deterministic sample of triples).
inline GroupTable make_group_table(const GammaSpace& space, std::vector<TupleIndex> indices)
{
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    GroupTable table;
    table.indices = indices;
    table.order = indices.size();
    for (const auto& t : indices)
        table.elements.push_back(space.tuple(t));

    std::map<TupleIndex, std::size_t> pos;
    for (std::size_t i = 0; i < indices.size(); ++i)
        pos.emplace(indices[i], i);
    auto position = [&](const TupleIndex& t) -> std::optional<std::size_t> {
        auto it = pos.find(t);
        if (it == pos.end())
            return std::nullopt;
        return it->second;
    };

    TupleMultiplier mul(space);
    const TupleIndex id = space.identity();
    auto id_pos = position(id);
    table.axioms.has_identity = id_pos.has_value();

    // closure over all pairs; the hash covers the full table
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    bool closed = true, abelian = true;
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = 0; j < indices.size(); ++j) {
            auto p = position(mul(indices[i], indices[j]));
            if (!p) {
                closed = false;
                mix(~0ull);
                continue;
            }
            mix(*p);
            if (j > i && abelian) {
                auto q = position(mul(indices[j], indices[i]));
                abelian = q && *q == *p;
            }
        }
    table.table_hash = h;
    table.axioms.closed = closed;
    table.is_abelian = abelian;

    bool inverses = true;
    for (const auto& t : indices)
        if (!position(mul.inverse(t)))
            inverses = false;
    table.axioms.has_inverses = inverses;

    bool assoc = true;
    const std::size_t n = indices.size();
    for (std::size_t s = 0; s < std::min<std::size_t>(n * n, 512) && n > 0; ++s) {
        const TupleIndex& a = indices[(s * 7919) % n];
        const TupleIndex& b = indices[(s * 104729 + 1) % n];
        const TupleIndex& c = indices[(s * 1299709 + 2) % n];
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            assoc = false;
    }
    table.axioms.associative_sample = assoc;

    if (!table.axioms.ok())
        return table;

    for (const auto& t : indices) {
        std::size_t k = 1;
        for (TupleIndex x = t; x != id; x = mul(x, t))
            ++k;
        table.element_orders.push_back(k);
    }

    // greedy generators: take each element not yet in the span of the previous ones
    std::vector<bool> in_span(n, false);
    in_span[*id_pos] = true;
    std::vector<std::size_t> span{*id_pos};
    for (std::size_t i = 0; i < n; ++i) {
        if (in_span[i])
            continue;
        table.generators.push_back(i);
        for (std::size_t k = 0; k < span.size(); ++k)
            for (std::size_t g : table.generators) {
                std::size_t p = *position(mul(indices[span[k]], indices[g]));
                if (!in_span[p]) {
                    in_span[p] = true;
                    span.push_back(p);
                }
            }
    }

    if (table.is_abelian)
        table.invariant_factors = abelian_invariants_from_orders(table.element_orders);
    return table;
}

/// GammaS(X): every tuple of the automorphism product accepted by the
/// extension criterion.
inline GroupTable gamma_s_group(const GammaSpace& space, unsigned threads = 1)
{
    MembershipIndex membership(space);
    const std::size_t total = space.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    std::vector<std::vector<TupleIndex>> parts(threads);
    auto work = [&](unsigned w) {
        std::size_t lo = total * w / threads, hi = total * (w + 1) / threads;
        for (std::size_t k = lo; k < hi; ++k) {
            TupleIndex t = space.unrank(k);
            if (membership.accepted(t))
                parts[w].push_back(t);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    std::vector<TupleIndex> accepted;
    for (auto& p : parts)
        accepted.insert(accepted.end(), p.begin(), p.end());
    return make_group_table(space, std::move(accepted));
}

inline GroupTable gamma_s_group(const WesData& w, const EnumOptions& options = {})
{
    GammaSpace space(w, options.budget);
    return gamma_s_group(space, options.threads);
}

/// Image of a group of tuples under the projection to the (f6, f5) factors,
/// realized with f4 and f3 set to the identity.
inline GroupTable top_degree_image(const GammaSpace& space, const GroupTable& table)
{
    std::vector<TupleIndex> image;
    for (const auto& t : table.indices)
        image.push_back({t[0], t[1], space.factor(2).identity, space.factor(3).identity});
    return make_group_table(space, std::move(image));
}

/// aut(H_k) alone as a group table; k indexes factors as in TupleIndex.
inline GroupTable factor_table(const GammaSpace& space, std::size_t k)
{
    std::vector<TupleIndex> elems;
    TupleIndex id = space.identity();
    for (std::size_t i = 0; i < space.factor(k).size(); ++i) {
        TupleIndex t = id;
        t[k] = i;
        elems.push_back(t);
    }
    return make_group_table(space, std::move(elems));
}

// ---------------------------------------------------------------------------
// Diagram-chasing oracle
// ---------------------------------------------------------------------------

/// Decides membership straight from the ladder: builds pi5 as the extension
/// of H5 by coker b6 with the given class and searches aut(pi5) for a phi
/// making all squares commute. Independent of the Ext pullback/pushforward
/// machinery and of gamma~.
class OracleContext {
public:
    OracleContext(const WesData& w, std::uint64_t budget) : ctx_(w)
    {
        ext_ = extension_group_from_class(w.pi5_class);
        // Gamma5 -> pi5 factors through coker b6
        to_pi5_ = compose(ext_.inj, ctx_.coker_b6().projection);
        try {
            auts_ = aut_group(ext_.group, budget);
        } catch (const Error& e) {
            throw Error(e.code(), "aut(pi5): " + e.message());
        }
        for (std::size_t i = 0; i < auts_.size(); ++i) {
            Key key{compose(auts_[i], to_pi5_).matrix(), compose(ext_.surj, auts_[i]).matrix()};
            by_squares_[key].push_back(i);
        }
    }

    const Extension& pi5() const noexcept { return ext_; }
    const std::vector<Homomorphism>& pi5_automorphisms() const noexcept { return auts_; }

    /// Every phi in aut(pi5) closing the ladder for t; empty when the b6
    /// square already fails.
    std::vector<Homomorphism> witnesses(const GammaTuple& t) const
    {
        Homomorphism gamma = ctx_.gamma_block(t.f3, t.f4);
        if (!ctx_.b6_square_commutes(gamma, t.f6))
            return {};
        Key key{compose(to_pi5_, gamma).matrix(), compose(t.f5, ext_.surj).matrix()};
        auto it = by_squares_.find(key);
        std::vector<Homomorphism> out;
        if (it != by_squares_.end())
            for (auto i : it->second)
                out.push_back(auts_[i]);
        return out;
    }

    bool admits(const GammaTuple& t) const { return !witnesses(t).empty(); }

private:
    using Key = std::pair<IntMatrix, IntMatrix>;

    WesContext ctx_;
    Extension ext_;
    Homomorphism to_pi5_;
    std::vector<Homomorphism> auts_;
    std::map<Key, std::vector<std::size_t>> by_squares_;
};

inline bool oracle_membership(const WesData& w, const GammaTuple& t, std::uint64_t budget)
{
    return OracleContext(w, budget).admits(t);
}

struct OracleReport {
    std::size_t tuples = 0;
    std::size_t agreements = 0;
    std::size_t accepted_by_criterion = 0;
    std::size_t accepted_by_oracle = 0;
    std::vector<TupleIndex> disagreements;
    /// Tuples accepted by the criterion, in rank order.
    std::vector<TupleIndex> accepted;

    bool ok() const { return disagreements.empty(); }
};

/// Runs the criterion and the oracle on every tuple of the product.
inline OracleReport oracle_compare(const GammaSpace& space, std::uint64_t budget)
{
    OracleContext oracle(space.context().data(), budget);
    OracleReport r;
    for (std::size_t k = 0; k < space.size(); ++k) {
        TupleIndex idx = space.unrank(k);
        GammaTuple t = space.tuple(idx);
        bool by_criterion = space.context().is_gamma_automorphism(t).accepted;
        bool by_oracle = oracle.admits(t);
        ++r.tuples;
        r.accepted_by_criterion += by_criterion;
        if (by_criterion)
            r.accepted.push_back(idx);
        r.accepted_by_oracle += by_oracle;
        if (by_criterion == by_oracle)
            ++r.agreements;
        else
            r.disagreements.push_back(idx);
    }
    return r;
}

inline OracleReport oracle_compare(const WesData& w, std::uint64_t budget)
{
    GammaSpace space(w, budget);
    return oracle_compare(space, budget);
}

} // namespace wes
