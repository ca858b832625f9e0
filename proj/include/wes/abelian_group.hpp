#pragma once

#include "wes/error.hpp"
#include "wes/int_matrix.hpp"
#include "wes/integer.hpp"
#include "wes/smith.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace wes {

/// Finitely generated abelian group Z_{d1} + ... + Z_{dt} + Z^r in invariant
/// factor form (d1 | d2 | ... | dt, every di >= 2).
///
/// Generator order is frozen: torsion generators in listed order, then the
/// free generators. Every matrix in the library is read against this order.
class FgAbGroup {
public:
    FgAbGroup() = default;

    FgAbGroup(std::vector<Integer> torsion, std::size_t rank) : torsion_(std::move(torsion)), rank_(rank)
    {
        for (std::size_t i = 0; i < torsion_.size(); ++i) {
            if (torsion_[i] < 2)
                throw Error(ErrorCode::InvalidGroup, "invariant factor " + wes::to_string(torsion_[i]) + " is below 2");
            if (i > 0 && torsion_[i] % torsion_[i - 1] != 0)
                throw Error(ErrorCode::InvalidGroup, "invariant factors " + wes::to_string(torsion_[i - 1]) + ", " +
                                                         wes::to_string(torsion_[i]) + " break the divisibility chain");
        }
    }

    static FgAbGroup trivial() { return {}; }
    static FgAbGroup free(std::size_t rank) { return FgAbGroup({}, rank); }

    /// Z_n for n >= 2, Z for n == 0, the trivial group for n == 1.
    static FgAbGroup cyclic(const Integer& n)
    {
        if (n == 0)
            return free(1);
        if (abs_value(n) == 1)
            return trivial();
        return FgAbGroup({abs_value(n)}, 0);
    }

    const std::vector<Integer>& torsion() const noexcept { return torsion_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t torsion_count() const noexcept { return torsion_.size(); }
    std::size_t ngens() const noexcept { return torsion_.size() + rank_; }
    bool is_trivial() const noexcept { return ngens() == 0; }
    bool is_finite() const noexcept { return rank_ == 0; }
    bool is_torsion_gen(std::size_t i) const noexcept { return i < torsion_.size(); }

    /// Order of generator i, 0 when it is free.
    Integer gen_order(std::size_t i) const { return i < torsion_.size() ? torsion_[i] : Integer(0); }

    /// Group order, 0 when infinite.
    Integer order() const
    {
        if (rank_ > 0)
            return 0;
        Integer n = 1;
        for (const auto& d : torsion_)
            n *= d;
        return n;
    }

    /// Columns d_i * e_i: a presentation matrix of the group on its generators.
    IntMatrix relations() const
    {
        IntMatrix R(ngens(), torsion_.size());
        for (std::size_t i = 0; i < torsion_.size(); ++i)
            R(i, i) = torsion_[i];
        return R;
    }

    /// Reduce torsion coordinates into [0, d_i).
    void reduce(std::vector<Integer>& coords) const
    {
        for (std::size_t i = 0; i < torsion_.size(); ++i)
            coords[i] = mod_floor(coords[i], torsion_[i]);
    }

    std::vector<Integer> reduced(std::vector<Integer> coords) const
    {
        reduce(coords);
        return coords;
    }

    bool is_zero_element(std::vector<Integer> coords) const
    {
        reduce(coords);
        return std::all_of(coords.begin(), coords.end(), [](const Integer& c) { return c == 0; });
    }

    std::string to_string() const
    {
        if (is_trivial())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& d : torsion_) {
            os << (first ? "" : " + ") << "Z" << d;
            first = false;
        }
        if (rank_ > 0) {
            os << (first ? "" : " + ") << "Z";
            if (rank_ > 1)
                os << "^" << rank_;
        }
        return os.str();
    }

    friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

private:
    std::vector<Integer> torsion_;
    std::size_t rank_ = 0;
};

/// An element of a group with torsion coordinates stored reduced.
struct Element {
    FgAbGroup group;
    std::vector<Integer> coords;

    Element(FgAbGroup g, std::vector<Integer> c) : group(std::move(g)), coords(std::move(c))
    {
        if (coords.size() != group.ngens())
            throw Error(ErrorCode::ShapeMismatch, "element has " + std::to_string(coords.size()) +
                                                      " coordinates, group has " + std::to_string(group.ngens()) +
                                                      " generators");
        group.reduce(coords);
    }

    static Element zero(const FgAbGroup& g) { return Element(g, std::vector<Integer>(g.ngens())); }

    bool is_zero() const
    {
        return std::all_of(coords.begin(), coords.end(), [](const Integer& c) { return c == 0; });
    }

    friend bool operator==(const Element&, const Element&) = default;
};

/// Group homomorphism given by its matrix against canonical generators:
/// column j is the image of source generator j. Torsion rows are stored
/// reduced modulo the target factor.
class Homomorphism {
public:
    Homomorphism() = default;

    Homomorphism(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
        : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix))
    {
        check_shape();
        normalize();
        if (auto why = defect())
            throw Error(ErrorCode::NotWellDefined, *why);
    }

    /// Skips the well-definedness check; callers use well_defined() themselves.
    static Homomorphism unchecked(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
    {
        Homomorphism h;
        h.source_ = std::move(source);
        h.target_ = std::move(target);
        h.matrix_ = std::move(matrix);
        h.check_shape();
        h.normalize();
        return h;
    }

    static Homomorphism identity(const FgAbGroup& A) { return {A, A, IntMatrix::identity(A.ngens())}; }

    static Homomorphism zero(const FgAbGroup& A, const FgAbGroup& B) { return {A, B, IntMatrix(B.ngens(), A.ngens())}; }

    static Homomorphism multiplication(const FgAbGroup& A, const Integer& k)
    {
        return {A, A, k * IntMatrix::identity(A.ngens())};
    }

    const FgAbGroup& source() const noexcept { return source_; }
    const FgAbGroup& target() const noexcept { return target_; }
    const IntMatrix& matrix() const noexcept { return matrix_; }

    bool well_defined() const { return !defect().has_value(); }

    /// Reason the matrix fails to respect source relations, if any.
    std::optional<std::string> defect() const
    {
        for (std::size_t j = 0; j < source_.torsion_count(); ++j) {
            const Integer& dj = source_.torsion()[j];
            for (std::size_t i = 0; i < target_.ngens(); ++i) {
                const Integer& m = matrix_(i, j);
                bool ok = target_.is_torsion_gen(i) ? (dj * m) % target_.torsion()[i] == 0 : m == 0;
                if (!ok)
                    return "generator " + std::to_string(j) + " of order " + wes::to_string(dj) +
                           " maps to an element whose coordinate " + std::to_string(i) + " is incompatible";
            }
        }
        return std::nullopt;
    }

    std::vector<Integer> apply(std::span<const Integer> x) const
    {
        std::vector<Integer> y = matrix_ * x;
        target_.reduce(y);
        return y;
    }

    Element operator()(const Element& x) const
    {
        if (!(x.group == source_))
            throw Error(ErrorCode::ShapeMismatch, "element is not in the source group");
        return Element(target_, apply(x.coords));
    }

    bool is_zero() const { return matrix_.is_zero(); }

    friend bool operator==(const Homomorphism&, const Homomorphism&) = default;

private:
    void check_shape() const
    {
        if (matrix_.rows() != target_.ngens() || matrix_.cols() != source_.ngens())
            throw Error(ErrorCode::ShapeMismatch, "homomorphism matrix is " + std::to_string(matrix_.rows()) + "x" +
                                                      std::to_string(matrix_.cols()) + ", expected " +
                                                      std::to_string(target_.ngens()) + "x" +
                                                      std::to_string(source_.ngens()));
    }

    void normalize()
    {
        for (std::size_t i = 0; i < target_.torsion_count(); ++i)
            for (std::size_t j = 0; j < matrix_.cols(); ++j)
                matrix_(i, j) = mod_floor(matrix_(i, j), target_.torsion()[i]);
    }

    FgAbGroup source_;
    FgAbGroup target_;
    IntMatrix matrix_;
};

inline Homomorphism compose(const Homomorphism& g, const Homomorphism& f)
{
    if (!(f.target() == g.source()))
        throw Error(ErrorCode::ShapeMismatch, "compose: target " + f.target().to_string() +
                                                  " does not match source " + g.source().to_string());
    return Homomorphism::unchecked(f.source(), g.target(), g.matrix() * f.matrix());
}

/// Quotient Z^n / span(columns of R) in canonical form.
struct Quotient {
    FgAbGroup group;
    /// group.ngens() x n: ambient coordinates -> canonical coordinates.
    IntMatrix projection;
    /// n x group.ngens(): column k is an ambient lift of canonical generator k.
    IntMatrix section;
};

inline Quotient quotient(const IntMatrix& R)
{
    const std::size_t n = R.rows();
    SnfResult s = snf(R);
    std::vector<Integer> torsion;
    std::vector<std::size_t> kept;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
        Integer d = k < std::min(R.rows(), R.cols()) ? s.D(k, k) : Integer(0);
        if (d == 1)
            continue;
        kept.push_back(k);
        if (d == 0)
            ++rank;
        else
            torsion.push_back(d);
    }
    FgAbGroup G(std::move(torsion), rank);
    IntMatrix P = s.U.select_rows(kept);
    for (std::size_t i = 0; i < G.torsion_count(); ++i)
        for (std::size_t j = 0; j < P.cols(); ++j)
            P(i, j) = mod_floor(P(i, j), G.torsion()[i]);
    return Quotient{std::move(G), std::move(P), s.U_inv.select_cols(kept)};
}

/// Canonical form of Z^rows / column-span(R) with the projection from the
/// ambient free group.
inline std::pair<FgAbGroup, Homomorphism> group_from_relations(const IntMatrix& R)
{
    Quotient q = quotient(R);
    Homomorphism proj(FgAbGroup::free(R.rows()), q.group, q.projection);
    return {q.group, proj};
}

/// Solves h(x) = b for many right-hand sides b with one Smith decomposition
/// of [h | target relations].
class PreimageSolver {
public:
    explicit PreimageSolver(const Homomorphism& h)
        : nsrc_(h.source().ngens()), snf_(snf(h.matrix().hconcat(h.target().relations())))
    {
        rank_ = snf_.rank();
    }

    /// Source coordinates x with h(x) = b, or nullopt when b is not in the image.
    std::optional<std::vector<Integer>> solve(std::span<const Integer> b) const
    {
        std::vector<Integer> c = snf_.U * b;
        std::vector<Integer> y(snf_.V.rows());
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < rank_) {
                if (c[i] % snf_.D(i, i) != 0)
                    return std::nullopt;
                y[i] = c[i] / snf_.D(i, i);
            } else if (c[i] != 0) {
                return std::nullopt;
            }
        }
        std::vector<Integer> z = snf_.V * std::span<const Integer>(y);
        z.resize(nsrc_);
        return z;
    }

private:
    std::size_t nsrc_;
    SnfResult snf_;
    std::size_t rank_ = 0;
};

/// Image of h as a canonical group, with its inclusion into h.target() and
/// the corestriction h.source() ->> image.
struct Image {
    FgAbGroup group;
    Homomorphism inclusion;
    Homomorphism corestriction;
};

inline Image image(const Homomorphism& h)
{
    const std::size_t n = h.source().ngens();
    // x with h.M x in the target relation lattice
    IntMatrix K = integer_kernel(h.matrix().hconcat(h.target().relations()));
    Quotient q = quotient(K.block(0, n, 0, K.cols()));
    Homomorphism incl(q.group, h.target(), h.matrix() * q.section);
    Homomorphism cores(h.source(), q.group, q.projection);
    return Image{q.group, std::move(incl), std::move(cores)};
}

struct Kernel {
    FgAbGroup group;
    Homomorphism inclusion;
};

/// Kernel of f via the Smith form of the lifted relation matrix [f | target relations].
inline Kernel kernel(const Homomorphism& f)
{
    const std::size_t n = f.source().ngens();
    IntMatrix K = integer_kernel(f.matrix().hconcat(f.target().relations()));
    IntMatrix preimage = K.block(0, n, 0, K.cols());
    Homomorphism gens(FgAbGroup::free(preimage.cols()), f.source(), preimage);
    Image im = image(gens);
    return Kernel{im.group, im.inclusion};
}

struct Cokernel {
    FgAbGroup group;
    Homomorphism projection;
    /// Column k lifts canonical generator k back to f.target().
    IntMatrix section;
};

inline Cokernel cokernel(const Homomorphism& f)
{
    Quotient q = quotient(f.target().relations().hconcat(f.matrix()));
    Homomorphism proj(f.target(), q.group, q.projection);
    return Cokernel{q.group, std::move(proj), std::move(q.section)};
}

/// Inverse of f when f is bijective. Surjectivity is decided by solving
/// f(x) = e_j for every generator; a surjective endomorphism of a finitely
/// generated abelian group is injective, so that settles bijectivity.
inline std::optional<Homomorphism> inverse(const Homomorphism& f)
{
    if (!(f.source() == f.target()))
        throw Error(ErrorCode::ShapeMismatch, "inverse requires an endomorphism");
    const FgAbGroup& A = f.source();
    PreimageSolver solver(f);
    IntMatrix inv(A.ngens(), A.ngens());
    for (std::size_t j = 0; j < A.ngens(); ++j) {
        std::vector<Integer> e(A.ngens());
        e[j] = 1;
        auto x = solver.solve(e);
        if (!x)
            return std::nullopt;
        inv.set_col(j, *x);
    }
    return Homomorphism(A, A, std::move(inv));
}

inline bool is_automorphism(const Homomorphism& f)
{
    if (!(f.source() == f.target()))
        return false;
    return inverse(f).has_value();
}

namespace detail {

inline std::vector<std::int64_t> prime_divisors(std::int64_t n)
{
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    if (n > 1)
        ps.push_back(n);
    return ps;
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p)
{
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e > 0) {
        if (e & 1)
            r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

/// Rank test over F_p of the square matrix m.
inline bool invertible_mod_p(std::vector<std::vector<std::int64_t>> m, std::int64_t p)
{
    const std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] % p == 0)
            ++piv;
        if (piv == n)
            return false;
        std::swap(m[piv], m[c]);
        std::int64_t iv = inv_mod(((m[c][c] % p) + p) % p, p);
        for (std::size_t r = c + 1; r < n; ++r) {
            std::int64_t f = ((m[r][c] % p) + p) % p * iv % p;
            if (f == 0)
                continue;
            for (std::size_t k = c; k < n; ++k)
                m[r][k] = ((m[r][k] - f * m[c][k]) % p + p) % p;
        }
    }
    return true;
}

/// Necessary condition for an endomorphism of the torsion part to be
/// bijective: for every prime p the induced map on T/pT is invertible. For
/// finite abelian groups it is also sufficient.
inline bool torsion_invertible_mod_primes(const FgAbGroup& A, const IntMatrix& M,
                                          const std::vector<std::int64_t>& primes)
{
    for (std::int64_t p : primes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < A.torsion_count(); ++i)
            if (A.torsion()[i] % p == 0)
                idx.push_back(i);
        std::vector<std::vector<std::int64_t>> m(idx.size(), std::vector<std::int64_t>(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                m[r][c] = to_int64(mod_floor(M(idx[r], idx[c]), p));
        if (!invertible_mod_p(std::move(m), p))
            return false;
    }
    return true;
}

} // namespace detail

/// Number of candidate matrices aut_group() would examine for A.
inline Integer aut_candidate_count(const FgAbGroup& A)
{
    Integer count = 1;
    for (std::size_t j = 0; j < A.ngens(); ++j)
        for (std::size_t i = 0; i < A.ngens(); ++i) {
            if (A.is_torsion_gen(i))
                count *= A.is_torsion_gen(j) ? gcd(A.torsion()[i], A.torsion()[j]) : A.torsion()[i];
            else if (!A.is_torsion_gen(j))
                count *= 2;
        }
    return count;
}

/// All automorphisms of A, sorted lexicographically by row-major matrix entries.
///
/// Candidates are the generator images compatible with generator orders; the
/// free generator (rank <= 1 only) goes to plus or minus itself plus any
/// torsion shift. Each candidate is kept iff it is bijective.
inline std::vector<Homomorphism> aut_group(const FgAbGroup& A, std::uint64_t budget)
{
    if (A.rank() >= 2)
        throw Error(ErrorCode::UnsupportedRank,
                    "aut(" + A.to_string() + ") is infinite and cannot be enumerated (free rank " +
                        std::to_string(A.rank()) + ")");
    const Integer count = aut_candidate_count(A);
    if (count > budget)
        throw Error(ErrorCode::BudgetExceeded, "aut(" + A.to_string() + ") needs " + to_string(count) +
                                                   " candidates, budget is " + std::to_string(budget));

    const std::size_t n = A.ngens();
    // options[j * n + i]: admissible values of entry (i, j)
    std::vector<std::vector<Integer>> options(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            auto& opt = options[j * n + i];
            if (A.is_torsion_gen(i)) {
                const Integer& di = A.torsion()[i];
                Integer g = A.is_torsion_gen(j) ? gcd(di, A.torsion()[j]) : di;
                Integer step = di / g;
                for (Integer k = 0; k < g; ++k)
                    opt.push_back(k * step);
            } else if (A.is_torsion_gen(j)) {
                opt.push_back(0);
            } else {
                opt.push_back(-1);
                opt.push_back(1);
            }
        }

    std::vector<std::int64_t> primes;
    for (const auto& d : A.torsion())
        for (auto p : detail::prime_divisors(to_int64(d)))
            if (std::find(primes.begin(), primes.end(), p) == primes.end())
                primes.push_back(p);

    std::vector<Homomorphism> autos;
    std::vector<std::size_t> digit(n * n, 0);
    IntMatrix M(n, n);
    for (std::size_t k = 0; k < n * n; ++k)
        M(k % n, k / n) = options[k][0];
    for (;;) {
        if (detail::torsion_invertible_mod_primes(A, M, primes)) {
            Homomorphism f = Homomorphism::unchecked(A, A, M);
            if (is_automorphism(f))
                autos.push_back(std::move(f));
        }
        std::size_t k = 0;
        for (; k < n * n; ++k) {
            if (++digit[k] < options[k].size()) {
                M(k % n, k / n) = options[k][digit[k]];
                break;
            }
            digit[k] = 0;
            M(k % n, k / n) = options[k][0];
        }
        if (k == n * n)
            break;
    }
    std::sort(autos.begin(), autos.end(),
              [](const Homomorphism& a, const Homomorphism& b) { return a.matrix() < b.matrix(); });
    return autos;
}

} // namespace wes
