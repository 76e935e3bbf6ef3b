#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "algebraic.hpp"
#include "substitution.hpp"
#include "words.hpp"

namespace substwords {

// det(xI - M) by Faddeev-LeVerrier; exact, monic, integer coefficients.
inline Poly characteristic_polynomial(const IncidenceMatrix& M) {
    const int n = M.n;
    std::vector<Rat> A(static_cast<std::size_t>(n * n), Rat(0));
    std::vector<Rat> B(static_cast<std::size_t>(n * n), Rat(0));
    auto at = [n](std::vector<Rat>& m, int i, int j) -> Rat& { return m[static_cast<std::size_t>(i * n + j)]; };
    for (int i = 0; i < n; ++i) at(B, i, i) = 1;

    std::vector<Rat> coeffs(static_cast<std::size_t>(n + 1), Rat(0));
    coeffs[static_cast<std::size_t>(n)] = 1;
    for (int k = 1; k <= n; ++k) {
        // A = M * B
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rat s = 0;
                for (int t = 0; t < n; ++t) s += Rat(M.at(i, t)) * at(B, t, j);
                at(A, i, j) = s;
            }
        Rat trace = 0;
        for (int i = 0; i < n; ++i) trace += at(A, i, i);
        Rat ck = trace / k;
        coeffs[static_cast<std::size_t>(n - k)] = -ck;
        B = A;
        for (int i = 0; i < n; ++i) at(B, i, i) -= ck;
    }
    return Poly{std::move(coeffs)};
}

namespace detail {

// Kernel vector of the rational matrix A (n x n, rank n-1), normalized to sum 1.
inline std::vector<Rat> kernel_vector(std::vector<std::vector<Rat>> A) {
    const std::size_t n = A.size();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t sel = row;
        while (sel < n && A[sel][col] == 0) ++sel;
        if (sel == n) continue;
        std::swap(A[sel], A[row]);
        Rat inv = 1 / A[row][col];
        for (std::size_t j = col; j < n; ++j) A[row][j] *= inv;
        for (std::size_t i = 0; i < n; ++i)
            if (i != row && A[i][col] != 0) {
                Rat f = A[i][col];
                for (std::size_t j = col; j < n; ++j) A[i][j] -= f * A[row][j];
            }
        pivot_col.push_back(col);
        ++row;
    }
    if (pivot_col.size() == n) throw Error("matrix has trivial kernel");
    std::size_t free_col = 0;
    while (free_col < pivot_col.size() && pivot_col[free_col] == free_col) ++free_col;

    std::vector<Rat> x(n, Rat(0));
    x[free_col] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        x[pivot_col[r]] = -A[r][free_col];

    Rat sum = 0;
    for (const auto& v : x) sum += v;
    if (sum == 0) throw Error("kernel vector has zero sum");
    for (auto& v : x) v /= sum;
    return x;
}

// Determinant of a small polynomial matrix by first-row expansion.
inline Poly poly_det(const std::vector<std::vector<Poly>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return Poly::constant(1);
    if (n == 1) return m[0][0];
    Poly det;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> r;
            r.reserve(n - 1);
            for (std::size_t t = 0; t < n; ++t)
                if (t != j) r.push_back(m[i][t]);
            minor.push_back(std::move(r));
        }
        Poly term = m[0][j] * poly_det(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

} // namespace detail

// Perron letter frequencies d_alpha: exact rationals when the Perron eigenvalue
// is rational, otherwise quotients of polynomials evaluated at the isolated
// algebraic eigenvalue, with on-demand refinement behind a lock.
class FrequencyVector {
public:
    int size() const { return static_cast<int>(letters_.size()); }
    const std::string& letters() const { return letters_; }
    bool rational() const { return alg_ == nullptr; }

    // exact sign of d_alpha - r
    int compare(int letter, const Rat& r) const {
        if (rational()) return sgn(exact_[static_cast<std::size_t>(letter)] - r);
        std::lock_guard lock(alg_->mu);
        return alg_->rho.sign_of(alg_->num[static_cast<std::size_t>(letter)] - alg_->den * r);
    }

    // enclosure of d_alpha of width <= width
    std::pair<Rat, Rat> bounds(int letter, const Rat& width) const {
        if (rational()) {
            const Rat& d = exact_[static_cast<std::size_t>(letter)];
            return {d, d};
        }
        Rat lo = 0, hi = 1;
        while (hi - lo > width) {
            Rat mid = (lo + hi) / 2;
            int c = compare(letter, mid);
            if (c == 0) return {mid, mid};
            (c > 0 ? lo : hi) = mid;
        }
        return {lo, hi};
    }

    double approx(int letter) const {
        auto [lo, hi] = bounds(letter, Rat(1, 1000000000000LL));
        return static_cast<double>((lo + hi) / 2);
    }

    const std::vector<Rat>& exact() const {
        if (!rational()) throw Error("frequencies are not rational");
        return exact_;
    }

    bool eigenvalue_rational() const { return eigen_rational_; }
    const Rat& eigenvalue() const {
        if (!eigen_rational_) throw Error("eigenvalue is not rational");
        return eigen_;
    }
    std::pair<Rat, Rat> eigenvalue_bounds(const Rat& width) const {
        if (eigen_rational_) return {eigen_, eigen_};
        std::lock_guard lock(alg_->mu);
        alg_->rho.refine_below(width);
        return {alg_->rho.lo(), alg_->rho.hi()};
    }

    // exact check of M d = lambda d
    bool satisfies_eigen_equation(const IncidenceMatrix& M) const {
        const int n = size();
        if (rational()) {
            for (int i = 0; i < n; ++i) {
                Rat s = 0;
                for (int j = 0; j < n; ++j) s += Rat(M.at(i, j)) * exact_[static_cast<std::size_t>(j)];
                if (s != eigen_ * exact_[static_cast<std::size_t>(i)]) return false;
            }
            return true;
        }
        std::lock_guard lock(alg_->mu);
        Poly x{{Rat(0), Rat(1)}};
        for (int i = 0; i < n; ++i) {
            Poly r;
            for (int j = 0; j < n; ++j) r = r + alg_->num[static_cast<std::size_t>(j)] * Rat(M.at(i, j));
            r = r - x * alg_->num[static_cast<std::size_t>(i)];
            if (alg_->rho.sign_of(r) != 0) return false;
        }
        return true;
    }

    // upper bound on max_alpha |emp_alpha - d_alpha|
    Rat deviation_upper_bound(const std::vector<Rat>& emp, const Rat& width = Rat(1, 1000000000)) const {
        Rat dev = 0;
        for (int i = 0; i < size(); ++i) {
            auto [lo, hi] = bounds(i, width);
            const Rat& e = emp[static_cast<std::size_t>(i)];
            Rat d = std::max(abs(e - lo), abs(e - hi));
            dev = std::max(dev, d);
        }
        return dev;
    }

    static FrequencyVector make_rational(std::string letters, std::vector<Rat> freqs, Rat eigenvalue) {
        FrequencyVector f;
        f.letters_ = std::move(letters);
        f.exact_ = std::move(freqs);
        f.eigen_rational_ = true;
        f.eigen_ = std::move(eigenvalue);
        return f;
    }

    static FrequencyVector make_algebraic(std::string letters, AlgebraicReal rho,
                                          std::vector<Poly> num, Poly den) {
        FrequencyVector f;
        f.letters_ = std::move(letters);
        f.alg_ = std::make_shared<AlgState>(std::move(rho));
        f.alg_->num = std::move(num);
        f.alg_->den = std::move(den);
        f.eigen_rational_ = false;
        return f;
    }

private:
    struct AlgState {
        explicit AlgState(AlgebraicReal r) : rho(std::move(r)) {}
        AlgebraicReal rho;
        std::vector<Poly> num;
        Poly den;
        mutable std::mutex mu;
    };

    std::string letters_;
    std::vector<Rat> exact_;
    std::shared_ptr<AlgState> alg_;
    bool eigen_rational_ = false;
    Rat eigen_ = 0;
};

inline FrequencyVector letter_frequencies(const Substitution& z) {
    auto prim = is_primitive(z);
    if (!prim.primitive) throw NotPrimitive("letter frequencies need a primitive substitution");
    const IncidenceMatrix M = incidence_matrix(z);
    const int n = M.n;
    Poly p = characteristic_polynomial(M);
    auto iso = isolate_largest_real_root(p);

    if (iso.is_rational) {
        std::vector<std::vector<Rat>> A(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    Rat(M.at(i, j)) - (i == j ? iso.rational_root : Rat(0));
        auto x = detail::kernel_vector(std::move(A));
        for (const auto& v : x)
            if (v <= 0) throw Error("Perron vector must be strictly positive");
        return FrequencyVector::make_rational(z.alphabet().str(), std::move(x), iso.rational_root);
    }

    AlgebraicReal rho(squarefree_part(p), iso.lo, iso.hi);
    // column 0 of adj(M - xI) spans the kernel at x = rho
    std::vector<std::vector<Poly>> B(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Rat> c{Rat(M.at(i, j))};
            if (i == j) c.push_back(Rat(-1));
            B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Poly{std::move(c)};
        }
    std::vector<Poly> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<Poly>> minor;
        for (int r = 1; r < n; ++r) {
            std::vector<Poly> rowp;
            for (int c = 0; c < n; ++c)
                if (c != i) rowp.push_back(B[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
            minor.push_back(std::move(rowp));
        }
        Poly d = detail::poly_det(minor);
        v[static_cast<std::size_t>(i)] = (i % 2 == 0) ? d : d * Rat(-1);
    }
    Poly den;
    for (const auto& t : v) den = den + t;
    if (rho.sign_of(den) < 0) {
        for (auto& t : v) t = t * Rat(-1);
        den = den * Rat(-1);
    }
    for (auto& t : v)
        if (rho.sign_of(t) <= 0) throw Error("Perron vector must be strictly positive");
    return FrequencyVector::make_algebraic(z.alphabet().str(), std::move(rho), std::move(v), std::move(den));
}

inline std::vector<Rat> empirical_frequencies(const FixedPointWindow& u, long long n) {
    if (n < 1 || n > u.size()) throw WindowExhausted("empirical frequency length outside window");
    auto counts = parikh(u.substitution().alphabet(), u.segment({1, n}));
    std::vector<Rat> out;
    out.reserve(counts.size());
    for (long long c : counts) out.emplace_back(c, n);
    return out;
}

} // namespace substwords
