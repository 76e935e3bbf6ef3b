#pragma once

#include <cctype>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "words.hpp"

namespace substwords {

class Substitution {
public:
    Substitution(Alphabet alphabet, std::vector<std::string> images, std::string name = "")
        : alphabet_(std::move(alphabet)), images_(std::move(images)), name_(std::move(name)) {
        if (static_cast<int>(images_.size()) != alphabet_.size())
            throw Error("one image per letter required");
        for (int i = 0; i < alphabet_.size(); ++i) {
            if (images_[static_cast<std::size_t>(i)].empty()) throw EmptyWord();
            for (char c : images_[static_cast<std::size_t>(i)]) alphabet_.index(c);
        }
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    const std::string& image(char a) const { return images_[static_cast<std::size_t>(alphabet_.index(a))]; }
    const std::string& image_by_index(int i) const { return images_.at(static_cast<std::size_t>(i)); }

    long long image_length(char a) const { return static_cast<long long>(image(a).size()); }

    std::optional<long long> constant_length() const {
        long long L = static_cast<long long>(images_[0].size());
        for (const auto& im : images_)
            if (static_cast<long long>(im.size()) != L) return std::nullopt;
        return L;
    }

    long long max_image_length() const {
        std::size_t m = 0;
        for (const auto& im : images_) m = std::max(m, im.size());
        return static_cast<long long>(m);
    }

    long long min_image_length() const {
        std::size_t m = images_[0].size();
        for (const auto& im : images_) m = std::min(m, im.size());
        return static_cast<long long>(m);
    }

    std::string apply(std::string_view w) const {
        std::size_t total = 0;
        for (char c : w) total += image(c).size();
        std::string out;
        out.reserve(total);
        for (char c : w) out += image(c);
        return out;
    }

    Substitution power(long long k) const {
        if (k < 0) throw Error("negative substitution power");
        std::vector<std::string> imgs;
        for (int i = 0; i < alphabet_.size(); ++i) imgs.emplace_back(1, alphabet_.letter(i));
        for (long long step = 0; step < k; ++step)
            for (auto& im : imgs) im = apply(im);
        std::string nm = name_.empty() ? "" : name_ + "^" + std::to_string(k);
        return Substitution(alphabet_, std::move(imgs), std::move(nm));
    }

    // |zeta^k(alpha)| for every letter, by the length recursion (no image materialization).
    std::vector<long long> image_length_table(long long k) const {
        std::vector<long long> len(static_cast<std::size_t>(alphabet_.size()), 1);
        for (long long step = 0; step < k; ++step) {
            std::vector<long long> nxt(len.size(), 0);
            for (int i = 0; i < alphabet_.size(); ++i) {
                long long s = 0;
                for (char c : images_[static_cast<std::size_t>(i)])
                    s += len[static_cast<std::size_t>(alphabet_.index(c))];
                nxt[static_cast<std::size_t>(i)] = s;
            }
            len = std::move(nxt);
        }
        return len;
    }

    // All letters alpha with zeta(alpha) starting in alpha and |zeta(alpha)| >= 2,
    // in alphabet order. Each one seeds a proper fixed point.
    std::vector<char> fixed_point_seeds() const {
        std::vector<char> out;
        for (int i = 0; i < alphabet_.size(); ++i) {
            const std::string& im = images_[static_cast<std::size_t>(i)];
            if (im.size() >= 2 && im[0] == alphabet_.letter(i)) out.push_back(alphabet_.letter(i));
        }
        return out;
    }

private:
    Alphabet alphabet_;
    std::vector<std::string> images_;
    std::string name_;
};

// entry(beta, alpha) = |zeta(alpha)|_beta, so parikh(zeta(w)) = M * parikh(w).
struct IncidenceMatrix {
    int n = 0;
    std::vector<long long> e; // row-major, e[row*n + col]

    long long& at(int row, int col) { return e[static_cast<std::size_t>(row * n + col)]; }
    long long at(int row, int col) const { return e[static_cast<std::size_t>(row * n + col)]; }

    static IncidenceMatrix identity(int n) {
        IncidenceMatrix m{n, std::vector<long long>(static_cast<std::size_t>(n * n), 0)};
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    IncidenceMatrix operator*(const IncidenceMatrix& o) const {
        IncidenceMatrix r{n, std::vector<long long>(static_cast<std::size_t>(n * n), 0)};
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                long long a = at(i, k);
                if (a == 0) continue;
                for (int j = 0; j < n; ++j) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    IncidenceMatrix pow(long long k) const {
        IncidenceMatrix r = identity(n), b = *this;
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    ParikhVector mul(const ParikhVector& v) const {
        ParikhVector r(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[static_cast<std::size_t>(i)] += at(i, j) * v[static_cast<std::size_t>(j)];
        return r;
    }

    bool all_positive() const {
        for (long long x : e)
            if (x <= 0) return false;
        return true;
    }

    bool operator==(const IncidenceMatrix&) const = default;
};

inline IncidenceMatrix incidence_matrix(const Substitution& z) {
    const int n = z.alphabet().size();
    IncidenceMatrix m{n, std::vector<long long>(static_cast<std::size_t>(n * n), 0)};
    for (int col = 0; col < n; ++col)
        for (char c : z.image_by_index(col)) ++m.at(z.alphabet().index(c), col);
    return m;
}

struct PrimitivityResult {
    bool primitive = false;
    long long witness_n = 0;              // least n with M^n entrywise positive
    std::vector<uint8_t> pattern;         // zero pattern at the bound when not primitive
};

inline PrimitivityResult is_primitive(const Substitution& z) {
    const int n = z.alphabet().size();
    const long long bound = static_cast<long long>(n - 1) * n + 1;
    IncidenceMatrix m = incidence_matrix(z);
    IncidenceMatrix p = m;
    for (long long k = 1; k <= bound; ++k) {
        if (p.all_positive()) return {true, k, {}};
        if (k < bound) p = p * m;
    }
    std::vector<uint8_t> pat(p.e.size());
    for (std::size_t i = 0; i < p.e.size(); ++i) pat[i] = p.e[i] > 0 ? 1 : 0;
    return {false, 0, std::move(pat)};
}

struct PrefixMatch {
    long long t = 0;
    bool window_capped = false;
};

// An immutable materialized prefix u[1..W] of the fixed point of zeta from a seed
// letter. Extension returns a new snapshot; existing snapshots never change.
class FixedPointWindow {
public:
    static FixedPointWindow create(Substitution z, char seed, long long length) {
        if (length < 1) throw Error("window length must be >= 1");
        bool ok = false;
        for (char s : z.fixed_point_seeds()) ok |= (s == seed);
        if (!ok) throw NoSeed();
        std::string buf(1, seed);
        grow_buffer(z, buf, length);
        return FixedPointWindow(std::move(z), seed, std::move(buf));
    }

    // Default seed: first valid one in alphabet order.
    static FixedPointWindow create(Substitution z, long long length) {
        auto seeds = z.fixed_point_seeds();
        if (seeds.empty()) throw NoSeed();
        char s = seeds.front();
        return create(std::move(z), s, length);
    }

    FixedPointWindow extend(long long length) const {
        if (length <= size()) return *this;
        std::string buf = state_->symbols;
        grow_buffer(subst_, buf, length);
        return FixedPointWindow(subst_, seed_, std::move(buf));
    }

    const Substitution& substitution() const { return subst_; }
    char seed() const { return seed_; }

    long long size() const { return static_cast<long long>(state_->symbols.size()); }
    std::string_view view() const { return state_->symbols; }

    char at(long long pos) const { // 1-based
        if (pos < 1 || pos > size()) throw WindowExhausted("position " + std::to_string(pos) + " outside window of length " + std::to_string(size()));
        return state_->symbols[static_cast<std::size_t>(pos - 1)];
    }

    std::string_view segment(Interval I) const {
        if (!I.valid()) throw Error("invalid interval");
        if (I.hi > size()) throw WindowExhausted("interval [" + std::to_string(I.lo) + "," + std::to_string(I.hi) + "] outside window of length " + std::to_string(size()));
        return view().substr(static_cast<std::size_t>(I.lo - 1), static_cast<std::size_t>(I.length()));
    }

    std::vector<long long> occurrences(std::string_view w) const {
        if (w.empty()) throw EmptyWord();
        return occurrences_in(view(), w);
    }

    // Maximal t with u[n+1 .. n+t] = u[1 .. t] within the window, 0-based shift n.
    PrefixMatch prefix_match(long long n) const {
        if (n < 0 || n + 1 > size()) throw WindowExhausted("shift " + std::to_string(n) + " outside window");
        long long t = zarr()[static_cast<std::size_t>(n)];
        return {t, n + t == size()};
    }

    const std::vector<long long>& zarr() const {
        std::call_once(state_->z_once, [&] { state_->z = z_array(state_->symbols); });
        return state_->z;
    }

private:
    FixedPointWindow(Substitution z, char seed, std::string buf)
        : subst_(std::move(z)), seed_(seed), state_(std::make_shared<State>(std::move(buf))) {}

    // Repeatedly substitute the shortest prefix whose image reaches the target,
    // then trim to exactly the requested length.
    static void grow_buffer(const Substitution& z, std::string& buf, long long length) {
        while (static_cast<long long>(buf.size()) < length) {
            long long have = 0;
            std::size_t p = 0;
            while (p < buf.size() && have < length) have += z.image_length(buf[p++]);
            std::string next = z.apply(std::string_view(buf).substr(0, p));
            if (next.size() <= buf.size())
                throw Error("substitution does not grow from seed prefix");
            buf = std::move(next);
        }
        buf.resize(static_cast<std::size_t>(length));
    }

    struct State {
        explicit State(std::string s) : symbols(std::move(s)) {}
        std::string symbols;
        mutable std::once_flag z_once;
        mutable std::vector<long long> z;
    };

    Substitution subst_;
    char seed_;
    std::shared_ptr<State> state_;
};

// File format: one rule per line "X -> IMAGE", X a single ASCII letter or digit,
// IMAGE nonempty over the declared letters; '#' starts a comment; blank lines
// ignored; duplicate left-hand sides rejected. Alphabet order = rule order.
inline Substitution parse_substitution(std::istream& in, std::string name = "") {
    std::string letters;
    std::vector<std::string> images;
    std::vector<int> rule_lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string lhs, arrow, image, extra;
        if (!(ls >> lhs)) continue; // blank
        if (!(ls >> arrow) || !(ls >> image) || (ls >> extra))
            throw ParseError(lineno, "expected \"X -> IMAGE\"");
        if (arrow != "->") throw ParseError(lineno, "expected \"->\", got \"" + arrow + "\"");
        if (lhs.size() != 1 || !std::isalnum(static_cast<unsigned char>(lhs[0])))
            throw ParseError(lineno, "left-hand side must be a single ASCII letter or digit");
        if (letters.find(lhs[0]) != std::string::npos)
            throw ParseError(lineno, std::string("duplicate rule for '") + lhs[0] + "'");
        letters += lhs[0];
        images.push_back(image);
        rule_lines.push_back(lineno);
    }
    if (letters.empty()) throw ParseError(lineno, "no rules found");
    Alphabet a(letters);
    for (std::size_t i = 0; i < images.size(); ++i)
        for (char c : images[i])
            if (!a.contains(c))
                throw ParseError(rule_lines[i], std::string("image symbol '") + c + "' has no rule");
    return Substitution(std::move(a), std::move(images), std::move(name));
}

inline Substitution parse_substitution_text(std::string_view text, std::string name = "") {
    std::istringstream in{std::string(text)};
    return parse_substitution(in, std::move(name));
}

} // namespace substwords
