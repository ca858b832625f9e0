#pragma once

#include "wes/abelian_group.hpp"

#include <utility>
#include <vector>

namespace wes {

// ---------------------------------------------------------------------------
// - (x) Z2 and Tor(-, Z2)
// ---------------------------------------------------------------------------

struct Reduction {
    FgAbGroup group;
    Homomorphism projection;
};

namespace detail {

/// Generators of A that survive in A/2A: even torsion factors and free generators.
inline std::vector<std::size_t> mod2_survivors(const FgAbGroup& A)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < A.ngens(); ++i)
        if (!A.is_torsion_gen(i) || A.torsion()[i] % 2 == 0)
            idx.push_back(i);
    return idx;
}

inline FgAbGroup elementary_two_group(std::size_t k) { return FgAbGroup(std::vector<Integer>(k, 2), 0); }

} // namespace detail

/// A (x) Z2 = A/2A with the reduction map.
inline Reduction tensor_z2(const FgAbGroup& A)
{
    auto idx = detail::mod2_survivors(A);
    FgAbGroup T = detail::elementary_two_group(idx.size());
    IntMatrix P(idx.size(), A.ngens());
    for (std::size_t r = 0; r < idx.size(); ++r)
        P(r, idx[r]) = 1;
    return Reduction{T, Homomorphism(A, T, std::move(P))};
}

inline Homomorphism tensor_z2_map(const Homomorphism& f)
{
    auto src = detail::mod2_survivors(f.source());
    auto tgt = detail::mod2_survivors(f.target());
    IntMatrix M = f.matrix().select_rows(tgt).select_cols(src);
    return Homomorphism(detail::elementary_two_group(src.size()), detail::elementary_two_group(tgt.size()),
                        std::move(M));
}

/// Tor(A, Z2) = A[2], one Z2 per even invariant factor.
inline FgAbGroup tor_z2(const FgAbGroup& A)
{
    std::size_t k = 0;
    for (const auto& d : A.torsion())
        if (d % 2 == 0)
            ++k;
    return detail::elementary_two_group(k);
}

// ---------------------------------------------------------------------------
// Exterior square. For abelian A, Lambda^2 A is H_2(A; Z).
// ---------------------------------------------------------------------------

/// Canonical generator pairs (i, j), i < j, in lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> lambda2_pairs(const FgAbGroup& A)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < A.ngens(); ++i)
        for (std::size_t j = i + 1; j < A.ngens(); ++j)
            pairs.emplace_back(i, j);
    return pairs;
}

/// Closed form: g_i ^ g_j has order gcd(d_i, d_j) = d_i when i is torsion and
/// is free when both generators are free. Lexicographic pair order already
/// lists these as an invariant factor chain.
inline FgAbGroup lambda2(const FgAbGroup& A)
{
    std::vector<Integer> torsion;
    std::size_t rank = 0;
    for (auto [i, j] : lambda2_pairs(A)) {
        if (A.is_torsion_gen(i))
            torsion.push_back(A.torsion()[i]);
        else
            ++rank;
    }
    return FgAbGroup(std::move(torsion), rank);
}

inline FgAbGroup h2_integral(const FgAbGroup& A) { return lambda2(A); }

/// (Lambda^2 f)(g_i ^ g_j) = f(g_i) ^ f(g_j), expanded with g ^ g = 0 and
/// antisymmetry.
inline Homomorphism lambda2_map(const Homomorphism& f)
{
    const IntMatrix& m = f.matrix();
    auto src = lambda2_pairs(f.source());
    auto tgt = lambda2_pairs(f.target());
    IntMatrix L(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
        auto [i, j] = src[c];
        for (std::size_t r = 0; r < tgt.size(); ++r) {
            auto [k, l] = tgt[r];
            L(r, c) = m(k, i) * m(l, j) - m(l, i) * m(k, j);
        }
    }
    return Homomorphism(lambda2(f.source()), lambda2(f.target()), std::move(L));
}

// ---------------------------------------------------------------------------
// Ext^1(A, C) over the diagonal resolution 0 -> Z^t -> Z^n -> A -> 0.
// ---------------------------------------------------------------------------

/// Element of Ext^1(A, C). Component i is the value of a cocycle on the
/// relation d_i * a_i, an element of C read modulo d_i * C.
class ExtClass {
public:
    ExtClass() = default;

    ExtClass(FgAbGroup A, FgAbGroup C, std::vector<Element> coords)
        : A_(std::move(A)), C_(std::move(C)), coords_(std::move(coords))
    {
        if (coords_.size() != A_.torsion_count())
            throw Error(ErrorCode::ShapeMismatch, "extension class over " + A_.to_string() + " needs " +
                                                      std::to_string(A_.torsion_count()) + " components, got " +
                                                      std::to_string(coords_.size()));
        for (const auto& e : coords_)
            if (!(e.group == C_))
                throw Error(ErrorCode::ShapeMismatch, "extension class component is not an element of " +
                                                          C_.to_string());
    }

    static ExtClass from_coords(const FgAbGroup& A, const FgAbGroup& C,
                                const std::vector<std::vector<Integer>>& coords)
    {
        return ExtClass(A, C, to_elements(C, coords));
    }

    static ExtClass zero(const FgAbGroup& A, const FgAbGroup& C)
    {
        return ExtClass(A, C, std::vector<Element>(A.torsion_count(), Element::zero(C)));
    }

    const FgAbGroup& quotient_end() const noexcept { return A_; }
    const FgAbGroup& kernel_end() const noexcept { return C_; }
    const std::vector<Element>& coords() const noexcept { return coords_; }

    /// Concatenated component coordinates.
    std::vector<Integer> flat() const
    {
        std::vector<Integer> v;
        for (const auto& e : coords_)
            v.insert(v.end(), e.coords.begin(), e.coords.end());
        return v;
    }

    /// Class equality: componentwise membership of the difference in d_i * C,
    /// decided by solving d_i * x = difference.
    friend bool operator==(const ExtClass& a, const ExtClass& b)
    {
        if (!(a.A_ == b.A_) || !(a.C_ == b.C_))
            return false;
        for (std::size_t i = 0; i < a.coords_.size(); ++i) {
            std::vector<Integer> diff(a.C_.ngens());
            for (std::size_t k = 0; k < diff.size(); ++k)
                diff[k] = a.coords_[i].coords[k] - b.coords_[i].coords[k];
            PreimageSolver solver(Homomorphism::multiplication(a.C_, a.A_.torsion()[i]));
            if (!solver.solve(diff))
                return false;
        }
        return true;
    }

    bool is_zero() const { return *this == zero(A_, C_); }

private:
    static std::vector<Element> to_elements(const FgAbGroup& C, const std::vector<std::vector<Integer>>& coords)
    {
        std::vector<Element> out;
        for (const auto& c : coords)
            out.emplace_back(C, c);
        return out;
    }

    FgAbGroup A_;
    FgAbGroup C_;
    std::vector<Element> coords_;
};

struct ExtGroup {
    FgAbGroup group;
    /// Concatenated class components -> canonical coordinates of `group`.
    Homomorphism projection;
};

/// Ext(A, C) = (+)_i C / d_i C over the torsion factors d_i of A, with the map
/// from flattened class components to canonical coordinates.
inline ExtGroup ext_presentation(const FgAbGroup& A, const FgAbGroup& C)
{
    const std::size_t t = A.torsion_count(), n = C.ngens();
    IntMatrix R(t * n, 0);
    for (std::size_t i = 0; i < t; ++i) {
        IntMatrix block(t * n, n + C.torsion_count());
        for (std::size_t k = 0; k < n; ++k)
            block(i * n + k, k) = A.torsion()[i];
        for (std::size_t k = 0; k < C.torsion_count(); ++k)
            block(i * n + k, n + k) = C.torsion()[k];
        R = R.hconcat(block);
    }
    Quotient q = quotient(R);
    FgAbGroup ambient = FgAbGroup::free(t * n);
    return ExtGroup{q.group, Homomorphism(ambient, q.group, q.projection)};
}

inline FgAbGroup ext_group(const FgAbGroup& A, const FgAbGroup& C) { return ext_presentation(A, C).group; }

/// Canonical coordinates of e in ext_group(A, C).
inline std::vector<Integer> ext_coordinates(const ExtClass& e)
{
    ExtGroup eg = ext_presentation(e.quotient_end(), e.kernel_end());
    return eg.projection.apply(e.flat());
}

/// Pullback along an integer lift of a map A' -> A to the free modules on
/// the generators. The lift of the relation d'_j a'_j is
/// sum_i (d'_j m_ij / d_i) (d_i a_i); precomposing the cocycle gives the
/// pulled-back components. Any lift gives the same class.
inline ExtClass ext_pullback_along_lift(const FgAbGroup& A1, const IntMatrix& lift, const ExtClass& e)
{
    const FgAbGroup& A = e.quotient_end();
    const FgAbGroup& C = e.kernel_end();
    if (lift.rows() != A.ngens() || lift.cols() != A1.ngens())
        throw Error(ErrorCode::ShapeMismatch, "lift has the wrong shape for the pullback");
    std::vector<Element> out;
    for (std::size_t j = 0; j < A1.torsion_count(); ++j) {
        const Integer& dj = A1.torsion()[j];
        std::vector<Integer> acc(C.ngens());
        for (std::size_t i = 0; i < A.ngens(); ++i) {
            Integer lifted = dj * lift(i, j);
            if (!A.is_torsion_gen(i)) {
                if (lifted != 0)
                    throw Error(ErrorCode::NotWellDefined, "pullback map does not lift to the resolution");
                continue;
            }
            Integer coef = lifted / A.torsion()[i];
            if (coef * A.torsion()[i] != lifted)
                throw Error(ErrorCode::NotWellDefined, "pullback map does not lift to the resolution");
            for (std::size_t k = 0; k < C.ngens(); ++k)
                acc[k] += coef * e.coords()[i].coords[k];
        }
        out.emplace_back(C, std::move(acc));
    }
    return ExtClass(A1, C, std::move(out));
}

/// f^* e for f : A' -> A.
inline ExtClass ext_pullback(const Homomorphism& f, const ExtClass& e)
{
    if (!(f.target() == e.quotient_end()))
        throw Error(ErrorCode::ShapeMismatch, "pullback map target differs from the class quotient end");
    return ext_pullback_along_lift(f.source(), f.matrix(), e);
}

/// g_* e for g : C -> C', applied componentwise.
inline ExtClass ext_pushforward(const Homomorphism& g, const ExtClass& e)
{
    if (!(g.source() == e.kernel_end()))
        throw Error(ErrorCode::ShapeMismatch, "pushforward map source differs from the class kernel end");
    std::vector<Element> out;
    for (const auto& c : e.coords())
        out.push_back(g(c));
    return ExtClass(e.quotient_end(), g.target(), std::move(out));
}

// ---------------------------------------------------------------------------
// Middle groups of extensions
// ---------------------------------------------------------------------------

/// Short exact sequence C >-> G ->> A.
struct Extension {
    FgAbGroup group;
    Homomorphism inj;
    Homomorphism surj;
};

/// The extension of A by C with class e: generators of C, lifts a~_i of the
/// generators of A, relations of C and d_i a~_i = e_i.
inline Extension extension_group_from_class(const ExtClass& e)
{
    const FgAbGroup& A = e.quotient_end();
    const FgAbGroup& C = e.kernel_end();
    const std::size_t nc = C.ngens(), na = A.ngens();
    IntMatrix R(nc + na, C.torsion_count() + A.torsion_count());
    for (std::size_t k = 0; k < C.torsion_count(); ++k)
        R(k, k) = C.torsion()[k];
    for (std::size_t i = 0; i < A.torsion_count(); ++i) {
        std::size_t col = C.torsion_count() + i;
        R(nc + i, col) = A.torsion()[i];
        for (std::size_t k = 0; k < nc; ++k)
            R(k, col) = -e.coords()[i].coords[k];
    }
    Quotient q = quotient(R);
    Homomorphism inj(C, q.group, q.projection.block(0, q.group.ngens(), 0, nc));
    IntMatrix to_a = IntMatrix(na, nc).hconcat(IntMatrix::identity(na));
    Homomorphism surj(q.group, A, to_a * q.section);
    return Extension{q.group, std::move(inj), std::move(surj)};
}

/// Class of an exact sequence C >-> G ->> A: lift each a_i to x_i, then
/// d_i x_i = inj(c_i) and c_i is component i.
inline ExtClass extension_class_of(const Extension& ext)
{
    const FgAbGroup& A = ext.surj.target();
    const FgAbGroup& C = ext.inj.source();
    PreimageSolver lift(ext.surj), back(ext.inj);
    std::vector<Element> out;
    for (std::size_t i = 0; i < A.torsion_count(); ++i) {
        std::vector<Integer> a(A.ngens());
        a[i] = 1;
        auto x = lift.solve(a);
        if (!x)
            throw Error(ErrorCode::NotWellDefined, "sequence is not exact: surj is not onto");
        std::vector<Integer> dx = ext.group.reduced(std::vector<Integer>(*x));
        for (auto& v : dx)
            v *= A.torsion()[i];
        ext.group.reduce(dx);
        auto c = back.solve(dx);
        if (!c)
            throw Error(ErrorCode::NotWellDefined, "sequence is not exact: d_i x_i is not in the image of inj");
        out.emplace_back(C, std::move(*c));
    }
    return ExtClass(A, C, std::move(out));
}

} // namespace wes
