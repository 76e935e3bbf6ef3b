#pragma once

#include <stdexcept>
#include <string>

namespace substwords {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidSymbol : Error {
    char symbol;
    explicit InvalidSymbol(char c)
        : Error(std::string("symbol '") + c + "' is not in the alphabet"), symbol(c) {}
};

struct EmptyWord : Error {
    EmptyWord() : Error("operation requires a nonempty word") {}
};

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct NoSeed : Error {
    NoSeed() : Error("substitution has no letter a with zeta(a) starting in a and |zeta(a)| >= 2") {}
};

struct NotPrimitive : Error {
    explicit NotPrimitive(const std::string& what) : Error(what) {}
};

struct WindowExhausted : Error {
    explicit WindowExhausted(const std::string& what) : Error(what) {}
};

struct NotInLanguage : Error {
    std::string word;
    explicit NotInLanguage(std::string w)
        : Error("word \"" + w + "\" does not occur in the window"), word(std::move(w)) {}
};

struct NoBarInside : Error {
    NoBarInside() : Error("no cutting bar inside the interval") {}
    explicit NoBarInside(const std::string& what) : Error(what) {}
};

struct NotFitted : Error {
    NotFitted() : Error("no 1-fitted occurrence in the window") {}
    explicit NotFitted(const std::string& what) : Error(what) {}
};

// Two 1-fitted occurrences of the same word desubstitute differently: disproves
// strong recognizability at this length. Carries the witness pair.
struct AmbiguousDesubstitution : Error {
    long long first_pos, second_pos;
    AmbiguousDesubstitution(long long i, long long j)
        : Error("fitted occurrences at " + std::to_string(i) + " and " + std::to_string(j) +
                " desubstitute differently"),
          first_pos(i), second_pos(j) {}
};

struct NoRadius : Error {
    NoRadius() : Error("no r in [1,L] makes both prefix and suffix maps injective on letters") {}
    explicit NoRadius(const std::string& what) : Error(what) {}
};

} // namespace substwords
