#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace substwords {

// Positions are 1-based throughout, matching the usual combinatorics-on-words
// convention u = u[1] u[2] u[3] ...

class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::string_view letters) : letters_(letters) {
        if (letters_.empty()) throw Error("alphabet must be nonempty");
        index_.fill(-1);
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(letters_[i]);
            if (index_[c] >= 0) throw Error(std::string("duplicate letter '") + letters_[i] + "'");
            index_[c] = static_cast<int>(i);
        }
    }

    int size() const { return static_cast<int>(letters_.size()); }
    char letter(int i) const { return letters_.at(static_cast<std::size_t>(i)); }
    const std::string& str() const { return letters_; }

    bool contains(char c) const { return index_[static_cast<unsigned char>(c)] >= 0; }

    int index(char c) const {
        int i = index_[static_cast<unsigned char>(c)];
        if (i < 0) throw InvalidSymbol(c);
        return i;
    }

    bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }

private:
    std::string letters_;
    std::array<int, 256> index_{};
};

using ParikhVector = std::vector<long long>;

inline ParikhVector parikh(const Alphabet& a, std::string_view w) {
    ParikhVector v(static_cast<std::size_t>(a.size()), 0);
    for (char c : w) ++v[static_cast<std::size_t>(a.index(c))];
    return v;
}

inline ParikhVector parikh_add(const ParikhVector& x, const ParikhVector& y) {
    ParikhVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline bool is_abelian_equivalent(const Alphabet& a, std::string_view w1, std::string_view w2) {
    return w1.size() == w2.size() && parikh(a, w1) == parikh(a, w2);
}

// Closed integer interval [lo, hi], 1-based, nonempty.
struct Interval {
    long long lo = 1;
    long long hi = 0;

    long long length() const { return hi - lo + 1; }
    bool valid() const { return 1 <= lo && lo <= hi; }
    bool operator==(const Interval&) const = default;
};

// All (possibly overlapping) occurrences of w in text, as 1-based start positions.
inline std::vector<long long> occurrences_in(std::string_view text, std::string_view w) {
    std::vector<long long> out;
    if (w.empty() || w.size() > text.size()) return out;
    std::size_t from = 0;
    while (true) {
        std::size_t i = text.find(w, from);
        if (i == std::string_view::npos) break;
        out.push_back(static_cast<long long>(i) + 1);
        from = i + 1;
    }
    return out;
}

// z[n] = length of the longest common prefix of text and text shifted by n
// (0-based shift; z[0] = |text| by convention, which is always window-capped).
inline std::vector<long long> z_array(std::string_view text) {
    const long long n = static_cast<long long>(text.size());
    std::vector<long long> z(static_cast<std::size_t>(n) + 1, 0);
    if (n == 0) return z;
    z[0] = n;
    long long l = 0, r = 0;
    for (long long i = 1; i < n; ++i) {
        long long zi = 0;
        if (i < r) zi = std::min(r - i, z[static_cast<std::size_t>(i - l)]);
        while (i + zi < n && text[static_cast<std::size_t>(zi)] == text[static_cast<std::size_t>(i + zi)]) ++zi;
        z[static_cast<std::size_t>(i)] = zi;
        if (i + zi > r) { l = i; r = i + zi; }
    }
    return z;
}

// For every word w with |w| <= max_base_len occurring in text, the largest e
// with w^e a factor of text. Computed per base length b from the array of
// longest common prefixes between suffix i and suffix i+b.
struct PowerTable {
    long long max_base_len = 0;
    long long global_max = 0;
    std::unordered_map<std::string, long long> table;

    long long exponent(const std::string& w) const {
        auto it = table.find(w);
        return it == table.end() ? 0 : it->second;
    }
};

inline PowerTable max_power_exponents(std::string_view text, long long max_base_len) {
    const long long n = static_cast<long long>(text.size());
    PowerTable out;
    out.max_base_len = std::min(max_base_len, n);
    std::vector<long long> lcp(static_cast<std::size_t>(n) + 1, 0);
    for (long long b = 1; b <= out.max_base_len; ++b) {
        lcp[static_cast<std::size_t>(n - b)] = 0;
        for (long long i = n - b - 1; i >= 0; --i)
            lcp[static_cast<std::size_t>(i)] =
                text[static_cast<std::size_t>(i)] == text[static_cast<std::size_t>(i + b)]
                    ? lcp[static_cast<std::size_t>(i + 1)] + 1
                    : 0;
        for (long long i = 0; i + b <= n; ++i) {
            long long e = 1 + lcp[static_cast<std::size_t>(i)] / b;
            std::string w{text.substr(static_cast<std::size_t>(i), static_cast<std::size_t>(b))};
            auto [it, fresh] = out.table.try_emplace(std::move(w), e);
            if (!fresh && e > it->second) it->second = e;
            if (e > out.global_max) out.global_max = e;
        }
    }
    return out;
}

} // namespace substwords
