#pragma once

#include <fstream>
#include <string>

#include <substwords/substitution.hpp>

namespace testutil {

inline substwords::Substitution load(const std::string& stem) {
    std::ifstream in(std::string(TESTS_DATA_DIR) + "/" + stem + ".subst");
    if (!in.good()) throw std::runtime_error("missing data file: " + stem);
    return substwords::parse_substitution(in, stem);
}

inline substwords::FixedPointWindow window(const std::string& stem, long long n) {
    return substwords::FixedPointWindow::create(load(stem), n);
}

inline substwords::FixedPointWindow window(const std::string& stem, long long n, char seed) {
    return substwords::FixedPointWindow::create(load(stem), seed, n);
}

} // namespace testutil
