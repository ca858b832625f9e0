#pragma once

#include "wes/homalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wes {

/// Gamma_5 = (H4 (x) Z2) (+) Lambda^2 H3.
///
/// The summand basis lists every H4 (x) Z2 generator, then every Lambda^2 H3
/// generator; input matrices such as b6 are written against it. The group
/// itself is kept in invariant factor form, and `to_canonical` /
/// `from_canonical` translate between the two bases.
struct Gamma5 {
    FgAbGroup group;
    FgAbGroup tensor_part;
    FgAbGroup wedge_part;
    /// group.ngens() x summand_count()
    IntMatrix to_canonical;
    /// summand_count() x group.ngens()
    IntMatrix from_canonical;

    std::size_t summand_count() const { return tensor_part.ngens() + wedge_part.ngens(); }

    /// Orders of the summand generators, in summand order.
    std::vector<Integer> summand_orders() const
    {
        std::vector<Integer> d = tensor_part.torsion();
        d.insert(d.end(), wedge_part.torsion().begin(), wedge_part.torsion().end());
        return d;
    }

    /// Reads a summand-basis matrix (rows = summand generators) as a map into group.
    Homomorphism from_summand_matrix(const FgAbGroup& source, const IntMatrix& m) const
    {
        if (m.rows() != summand_count())
            throw Error(ErrorCode::ShapeMismatch, "matrix into Gamma5 needs " + std::to_string(summand_count()) +
                                                      " rows, got " + std::to_string(m.rows()));
        return Homomorphism(source, group, to_canonical * m);
    }

    /// Summand-basis matrix of a map into group, entries reduced by summand order.
    IntMatrix to_summand_matrix(const Homomorphism& h) const
    {
        IntMatrix m = from_canonical * h.matrix();
        auto orders = summand_orders();
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                m(i, j) = mod_floor(m(i, j), orders[i]);
        return m;
    }
};

inline bool satisfies_mod2_hypothesis(const FgAbGroup& H3) { return tensor_z2(H3).group.is_trivial(); }

inline Gamma5 gamma5_structure(const FgAbGroup& H3, const FgAbGroup& H4)
{
    if (!satisfies_mod2_hypothesis(H3))
        throw Error(ErrorCode::HypothesisViolation, "H3 ⊗ Z₂ ≠ 0 for H3 = " + H3.to_string());
    Gamma5 g;
    g.tensor_part = tensor_z2(H4).group;
    g.wedge_part = lambda2(H3);
    std::vector<Integer> orders = g.summand_orders();
    Quotient q = quotient(IntMatrix::diagonal(orders));
    g.group = q.group;
    g.to_canonical = q.projection;
    g.from_canonical = q.section;
    return g;
}

inline FgAbGroup gamma5(const FgAbGroup& H3, const FgAbGroup& H4) { return gamma5_structure(H3, H4).group; }

/// Data of the Whitehead sequence H6 -> Gamma5 -> pi5 ->> H5 of a 2-connected
/// 6-dimensional complex, with pi3 = H3 and pi4 = H4.
struct WesData {
    FgAbGroup H3, H4, H5, H6;
    /// H6 -> Gamma5, in canonical Gamma5 coordinates.
    Homomorphism b6;
    /// Class in Ext(H5, coker b6).
    ExtClass pi5_class;
};

/// Builds WesData from b6 written in the Gamma5 summand basis and class
/// components written in canonical coker b6 coordinates.
inline WesData make_wes_data(FgAbGroup H3, FgAbGroup H4, FgAbGroup H5, FgAbGroup H6, const IntMatrix& b6_summands,
                             const std::vector<std::vector<Integer>>& pi5_coords)
{
    Gamma5 g5 = gamma5_structure(H3, H4);
    if (b6_summands.cols() != H6.ngens())
        throw Error(ErrorCode::ShapeMismatch, "b6 needs " + std::to_string(H6.ngens()) + " columns, got " +
                                                  std::to_string(b6_summands.cols()));
    Homomorphism b6 = g5.from_summand_matrix(H6, b6_summands);
    FgAbGroup coker = cokernel(b6).group;
    if (pi5_coords.size() != H5.torsion_count())
        throw Error(ErrorCode::ShapeMismatch, "pi5 class needs one component per torsion factor of H5 (" +
                                                  std::to_string(H5.torsion_count()) + "), got " +
                                                  std::to_string(pi5_coords.size()));
    ExtClass cls = ExtClass::from_coords(H5, coker, pi5_coords);
    return WesData{std::move(H3), std::move(H4), std::move(H5), std::move(H6), std::move(b6), std::move(cls)};
}

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string reason;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const
    {
        for (const auto& c : checks)
            if (!c.passed)
                return false;
        return true;
    }

    std::optional<std::string> first_failure() const
    {
        for (const auto& c : checks)
            if (!c.passed)
                return c.name + ": " + c.reason;
        return std::nullopt;
    }
};

/// Checks every invariant of w and reports each one; never throws on bad data.
inline ValidationReport validate(const WesData& w)
{
    ValidationReport r;
    auto add = [&](std::string name, bool ok, std::string why) {
        r.checks.push_back({std::move(name), ok, ok ? std::string() : std::move(why)});
    };

    bool h3_ok = satisfies_mod2_hypothesis(w.H3);
    add("H3 ⊗ Z₂ = 0", h3_ok, "H3 ⊗ Z₂ ≠ 0 (H3 = " + w.H3.to_string() + ")");
    add("H6 torsion-free", w.H6.torsion_count() == 0, "H6 must be torsion-free (H6 = " + w.H6.to_string() + ")");

    add("b6 source is H6", w.b6.source() == w.H6,
        "b6 source " + w.b6.source().to_string() + " differs from H6 = " + w.H6.to_string());
    bool target_ok = false;
    if (h3_ok) {
        FgAbGroup g5 = gamma5(w.H3, w.H4);
        target_ok = w.b6.target() == g5;
        add("b6 target is Gamma5", target_ok,
            "b6 target " + w.b6.target().to_string() + " differs from Gamma5 = " + g5.to_string());
    } else {
        add("b6 target is Gamma5", false, "Gamma5 is undefined because H3 ⊗ Z₂ ≠ 0");
    }
    auto defect = w.b6.defect();
    add("b6 well-defined", !defect, defect.value_or(""));

    add("pi5 class quotient end is H5", w.pi5_class.quotient_end() == w.H5,
        "class is over " + w.pi5_class.quotient_end().to_string() + ", H5 = " + w.H5.to_string());
    if (!defect) {
        FgAbGroup coker = cokernel(w.b6).group;
        add("pi5 class kernel end is coker b6", w.pi5_class.kernel_end() == coker,
            "class components live in " + w.pi5_class.kernel_end().to_string() + ", coker b6 = " +
                coker.to_string());
    } else {
        add("pi5 class kernel end is coker b6", false, "coker b6 is undefined because b6 is not well-defined");
    }
    return r;
}

/// A candidate graded automorphism (f3, f4, f5, f6) of H_*.
struct GammaTuple {
    Homomorphism f3, f4, f5, f6;

    friend bool operator==(const GammaTuple&, const GammaTuple&) = default;
};

inline GammaTuple compose(const GammaTuple& a, const GammaTuple& b)
{
    return {compose(a.f3, b.f3), compose(a.f4, b.f4), compose(a.f5, b.f5), compose(a.f6, b.f6)};
}

inline GammaTuple identity_tuple(const WesData& w)
{
    return {Homomorphism::identity(w.H3), Homomorphism::identity(w.H4), Homomorphism::identity(w.H5),
            Homomorphism::identity(w.H6)};
}

struct Membership {
    bool accepted = false;
    std::string reason;

    explicit operator bool() const { return accepted; }
};

/// Validated WesData with the derived groups computed once. All members are
/// const after construction and safe to share between threads.
class WesContext {
public:
    explicit WesContext(WesData w) : w_(std::move(w))
    {
        ValidationReport r = validate(w_);
        if (!r.ok())
            throw Error(ErrorCode::HypothesisViolation, *r.first_failure());
        g5_ = gamma5_structure(w_.H3, w_.H4);
        coker_ = cokernel(w_.b6);
    }

    const WesData& data() const noexcept { return w_; }
    const Gamma5& gamma5() const noexcept { return g5_; }
    const Cokernel& coker_b6() const noexcept { return coker_; }

    /// gamma = (f4 (x) Z2) (+) Lambda^2 f3 on Gamma5.
    Homomorphism gamma_of(const Homomorphism& f3, const Homomorphism& f4) const
    {
        if (!(f3.source() == w_.H3) || !is_automorphism(f3))
            throw Error(ErrorCode::NotAutomorphism, "f3 is not an automorphism of H3 = " + w_.H3.to_string());
        if (!(f4.source() == w_.H4) || !is_automorphism(f4))
            throw Error(ErrorCode::NotAutomorphism, "f4 is not an automorphism of H4 = " + w_.H4.to_string());
        return gamma_block(f3, f4);
    }

    /// The automorphism of coker b6 induced by gamma.
    Homomorphism gamma_tilde(const Homomorphism& gamma) const
    {
        const Homomorphism& pr = coker_.projection;
        if (!compose(pr, compose(gamma, w_.b6)).is_zero())
            throw Error(ErrorCode::NotInducible, "gamma does not preserve the image of b6");
        return Homomorphism(coker_.group, coker_.group, pr.matrix() * gamma.matrix() * coker_.section);
    }

    /// Left square gamma o b6 = b6 o f6.
    bool b6_square_commutes(const Homomorphism& gamma, const Homomorphism& f6) const
    {
        return compose(gamma, w_.b6) == compose(w_.b6, f6);
    }

    /// Decides membership by the b6 square and f5^*[pi5] = gamma~_*[pi5].
    Membership is_gamma_automorphism(const GammaTuple& t) const
    {
        check_automorphism(t.f5, w_.H5, "f5", "H5");
        check_automorphism(t.f6, w_.H6, "f6", "H6");
        Homomorphism gamma = gamma_of(t.f3, t.f4);
        if (!b6_square_commutes(gamma, t.f6))
            return {false, "b6 square does not commute: gamma o b6 != b6 o f6"};
        Homomorphism tilde = gamma_tilde(gamma);
        ExtClass pulled = ext_pullback(t.f5, w_.pi5_class);
        ExtClass pushed = ext_pushforward(tilde, w_.pi5_class);
        if (!(pulled == pushed))
            return {false, "f5^*[pi5] != gamma~_*[pi5] in Ext(H5, coker b6)"};
        return {true, "b6 square commutes and the extension classes agree"};
    }

    /// gamma without the automorphism checks, for callers that enumerated
    /// f3 and f4 from aut_group already.
    Homomorphism gamma_block(const Homomorphism& f3, const Homomorphism& f4) const
    {
        IntMatrix block = tensor_z2_map(f4).matrix().direct_sum(lambda2_map(f3).matrix());
        return Homomorphism(g5_.group, g5_.group, g5_.to_canonical * block * g5_.from_canonical);
    }

private:
    static void check_automorphism(const Homomorphism& f, const FgAbGroup& G, const char* name, const char* gname)
    {
        if (!(f.source() == G) || !(f.target() == G) || !is_automorphism(f))
            throw Error(ErrorCode::NotAutomorphism,
                        std::string(name) + " is not an automorphism of " + gname + " = " + G.to_string());
    }

    WesData w_;
    Gamma5 g5_;
    Cokernel coker_;
};

inline Homomorphism gamma_of(const WesData& w, const Homomorphism& f3, const Homomorphism& f4)
{
    return WesContext(w).gamma_of(f3, f4);
}

inline Homomorphism gamma_tilde(const WesData& w, const Homomorphism& gamma)
{
    return WesContext(w).gamma_tilde(gamma);
}

inline Membership is_gamma_automorphism(const WesData& w, const GammaTuple& t)
{
    return WesContext(w).is_gamma_automorphism(t);
}

/// Derived invariants of a WesData.
struct InvariantsReport {
    FgAbGroup H3, H4, H5, H6;
    FgAbGroup gamma5, gamma5_tensor, gamma5_wedge;
    /// b6 in canonical Gamma5 coordinates.
    IntMatrix b6;
    FgAbGroup coker_b6;
    /// canonical Gamma5 -> coker b6
    IntMatrix coker_projection;
    FgAbGroup ext;
    std::vector<std::vector<Integer>> pi5_class;
    std::vector<Integer> pi5_class_ext_coords;
    bool pi5_class_split = true;
    /// Middle group of coker b6 >-> pi5 ->> H5.
    FgAbGroup pi5;
    /// |coker b6| * |H5|, 0 when infinite.
    Integer pi5_order;

    friend bool operator==(const InvariantsReport&, const InvariantsReport&) = default;
};

inline InvariantsReport wes_report(const WesData& w)
{
    WesContext ctx(w);
    InvariantsReport r;
    r.H3 = w.H3;
    r.H4 = w.H4;
    r.H5 = w.H5;
    r.H6 = w.H6;
    r.gamma5 = ctx.gamma5().group;
    r.gamma5_tensor = ctx.gamma5().tensor_part;
    r.gamma5_wedge = ctx.gamma5().wedge_part;
    r.b6 = w.b6.matrix();
    r.coker_b6 = ctx.coker_b6().group;
    r.coker_projection = ctx.coker_b6().projection.matrix();
    r.ext = ext_group(w.H5, r.coker_b6);
    for (const auto& c : w.pi5_class.coords())
        r.pi5_class.push_back(c.coords);
    r.pi5_class_ext_coords = ext_coordinates(w.pi5_class);
    r.pi5_class_split = w.pi5_class.is_zero();
    r.pi5 = extension_group_from_class(w.pi5_class).group;
    r.pi5_order = r.coker_b6.order() * w.H5.order();
    return r;
}

struct ChainHomology {
    FgAbGroup H3, H4, H5, H6;
};

namespace detail {

/// ker(out) / im(in) for in : C_{n+1} -> C_n and out : C_n -> C_{n-1}.
inline FgAbGroup homology_at(const IntMatrix& in, const IntMatrix& out)
{
    IntMatrix K = integer_kernel(out);
    IntMatrix Y(K.cols(), in.cols());
    for (std::size_t j = 0; j < in.cols(); ++j) {
        auto y = solve_integer(K, in.col(j));
        if (!y)
            throw Error(ErrorCode::NotAComplex, "boundary column is not a cycle");
        Y.set_col(j, *y);
    }
    return quotient(Y).group;
}

} // namespace detail

/// Homology of 0 -> C6 -d6-> C5 -d5-> C4 -d4-> C3 -> 0. Matrices act on
/// column vectors, so d_n has shape rank C_{n-1} x rank C_n.
inline ChainHomology homology_of_complex(const IntMatrix& d4, const IntMatrix& d5, const IntMatrix& d6)
{
    if (d4.cols() != d5.rows() || d5.cols() != d6.rows())
        throw Error(ErrorCode::NotAComplex, "differentials are not composable: d4 is " + std::to_string(d4.rows()) +
                                                "x" + std::to_string(d4.cols()) + ", d5 is " +
                                                std::to_string(d5.rows()) + "x" + std::to_string(d5.cols()) +
                                                ", d6 is " + std::to_string(d6.rows()) + "x" +
                                                std::to_string(d6.cols()));
    if (!(d4 * d5).is_zero())
        throw Error(ErrorCode::NotAComplex, "not a chain complex: d4 d5 != 0");
    if (!(d5 * d6).is_zero())
        throw Error(ErrorCode::NotAComplex, "not a chain complex: d5 d6 != 0");
    const std::size_t c3 = d4.rows(), c6 = d6.cols();
    ChainHomology h;
    h.H3 = detail::homology_at(d4, IntMatrix(0, c3));
    h.H4 = detail::homology_at(d5, d4);
    h.H5 = detail::homology_at(d6, d5);
    h.H6 = detail::homology_at(IntMatrix(c6, 0), d6);
    return h;
}

} // namespace wes
