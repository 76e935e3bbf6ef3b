#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include <substwords/frequencies.hpp>

#include "helpers.hpp"

using namespace substwords;
using testutil::load;
using testutil::window;

TEST_CASE("polynomial arithmetic and root isolation") {
    Poly p{{Rat(-2), Rat(0), Rat(1)}}; // x^2 - 2
    CHECK(p.eval(2) == 2);
    CHECK(p.degree() == 2);
    CHECK(p.derivative().c == std::vector<Rat>{0, 2});

    SECTION("sturm counting") {
        SturmChain ch(p);
        CHECK(ch.count(0, 2) == 1);
        CHECK(ch.count(-2, 2) == 2);
        CHECK(ch.count(Rat(3, 2), 2) == 0);
    }
    SECTION("algebraic sign evaluation at sqrt(2)") {
        AlgebraicReal r(p, 1, 2);
        CHECK(r.sign_of(Poly{{Rat(-7, 5), Rat(1)}}) == 1);  // sqrt(2) > 7/5
        CHECK(r.sign_of(Poly{{Rat(-3, 2), Rat(1)}}) == -1); // sqrt(2) < 3/2
        CHECK(r.sign_of(p) == 0);
        r.refine_below(Rat(1, 1000000));
        CHECK(r.hi() - r.lo() <= Rat(1, 1000000));
        CHECK(r.lo() > Rat(141421, 100000));
        CHECK(r.hi() < Rat(141422, 100000));
    }
    SECTION("largest real root: rational case detected exactly") {
        Poly q{{Rat(6), Rat(-5), Rat(1)}}; // (x-2)(x-3)
        auto iso = isolate_largest_real_root(q);
        REQUIRE(iso.is_rational);
        CHECK(iso.rational_root == 3);
    }
    SECTION("largest real root: irrational case isolated") {
        auto iso = isolate_largest_real_root(p);
        REQUIRE_FALSE(iso.is_rational);
        CHECK(iso.lo < Rat(3, 2));
        CHECK(iso.hi > Rat(7, 5));
    }
    SECTION("squarefree part strips repeated factors") {
        Poly sq = p * p;
        CHECK(squarefree_part(sq).degree() == 2);
    }
}

TEST_CASE("characteristic polynomials of incidence matrices") {
    auto cp = [](const char* stem) { return characteristic_polynomial(incidence_matrix(testutil::load(stem))); };
    CHECK(cp("thue_morse").c == std::vector<Rat>{0, -2, 1});
    CHECK(cp("ex1111").c == std::vector<Rat>{8, -6, 1});
    CHECK(cp("fibonacci").c == std::vector<Rat>{-1, -1, 1});
    CHECK(cp("dekking").c == std::vector<Rat>{-7, 11, -6, 1});
}

TEST_CASE("rational letter frequencies") {
    auto tm = letter_frequencies(load("thue_morse"));
    REQUIRE(tm.rational());
    CHECK(tm.exact() == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
    CHECK(tm.eigenvalue() == 2);
    CHECK(tm.compare(0, Rat(1, 2)) == 0);
    CHECK(tm.compare(0, Rat(1, 3)) == 1);

    auto ex = letter_frequencies(load("ex1111"));
    REQUIRE(ex.rational());
    CHECK(ex.eigenvalue() == 4);
    CHECK(ex.exact() == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

    auto zj = letter_frequencies(load("zeta_j"));
    REQUIRE(zj.rational());
    CHECK(zj.eigenvalue() == 5);
    CHECK(zj.exact() == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

    CHECK_THROWS_AS(letter_frequencies(load("squares")), NotPrimitive);
}

TEST_CASE("algebraic letter frequencies") {
    SECTION("Fibonacci frequencies are powers of the golden ratio") {
        auto f = letter_frequencies(load("fibonacci"));
        REQUIRE_FALSE(f.rational());
        CHECK_FALSE(f.eigenvalue_rational());
        auto [elo, ehi] = f.eigenvalue_bounds(Rat(1, 1000000000));
        // phi = 1.6180339887...
        CHECK(elo > Rat(1618033987, 1000000000));
        CHECK(ehi < Rat(1618033990, 1000000000));
        // d_0 = 1/phi = 0.6180339887...
        CHECK(f.compare(0, Rat(618033, 1000000)) == 1);
        CHECK(f.compare(0, Rat(618034, 1000000)) == -1);
        CHECK(f.compare(1, Rat(381966, 1000000)) == 1);
        CHECK(f.satisfies_eigen_equation(incidence_matrix(load("fibonacci"))));
    }
    SECTION("Dekking frequencies") {
        auto d = letter_frequencies(load("dekking"));
        REQUIRE_FALSE(d.rational());
        auto [elo, ehi] = d.eigenvalue_bounds(Rat(1, 1000000000));
        // theta = 3.324717957244746...
        CHECK(elo > Rat(332471795, 100000000));
        CHECK(ehi < Rat(332471796, 100000000));
        CHECK(d.compare(0, Rat(3247179572LL, 10000000000LL)) == 1);
        CHECK(d.compare(0, Rat(3247179573LL, 10000000000LL)) == -1);
        // d_b = 0.2451223337533...
        CHECK(d.compare(1, Rat(2451223337LL, 10000000000LL)) == 1);
        CHECK(d.compare(1, Rat(2451223338LL, 10000000000LL)) == -1);
        CHECK(d.compare(2, Rat(4301597090LL, 10000000000LL)) == 1);
        CHECK(d.compare(2, Rat(4301597091LL, 10000000000LL)) == -1);
        CHECK(d.satisfies_eigen_equation(incidence_matrix(load("dekking"))));
        CHECK(d.approx(0) == Catch::Approx(0.3247179572).epsilon(1e-9));
    }
    SECTION("bounds trap the value and sum to one") {
        auto f = letter_frequencies(load("tribonacci"));
        REQUIRE_FALSE(f.rational());
        Rat slo = 0, shi = 0;
        for (int i = 0; i < f.size(); ++i) {
            auto [lo, hi] = f.bounds(i, Rat(1, 100000000));
            CHECK(hi - lo <= Rat(1, 100000000));
            slo += lo;
            shi += hi;
        }
        CHECK(slo <= 1);
        CHECK(shi >= 1);
        CHECK(f.satisfies_eigen_equation(incidence_matrix(load("tribonacci"))));
    }
}

TEST_CASE("empirical frequencies converge to the eigenvector") {
    auto tm = window("thue_morse", 64);
    CHECK(empirical_frequencies(tm, 8) == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
    CHECK(empirical_frequencies(tm, 1) == std::vector<Rat>{1, 0});
    CHECK_THROWS_AS(empirical_frequencies(tm, 65), WindowExhausted);

    auto d = letter_frequencies(load("dekking"));
    auto u = window("dekking", 100000);
    auto emp = empirical_frequencies(u, 100000);
    CHECK(d.deviation_upper_bound(emp) < Rat(1, 1000));
}

TEST_CASE("image letter counts approach the frequencies") {
    // parikh(zeta^n(a)) = M^n e_a, exact; deviations shrink with n
    auto z = load("dekking");
    auto M = incidence_matrix(z);
    auto d = letter_frequencies(z);
    auto dev_at = [&](long long n) {
        ParikhVector e{1, 0, 0};
        auto counts = M.pow(n).mul(e);
        long long total = counts[0] + counts[1] + counts[2];
        std::vector<Rat> emp;
        for (long long c : counts) emp.emplace_back(c, total);
        return d.deviation_upper_bound(emp, Rat(1, Rat::value_type(1000000000000LL)));
    };
    CHECK(dev_at(15) < Rat(3, 1000000));
    CHECK(dev_at(15) > Rat(2, 1000000)); // 1e-6 is NOT reached at n=15
    CHECK(dev_at(17) < Rat(1, 1000000));
}

TEST_CASE("non-balance growth identity for the 0100/1101 substitution") {
    auto z = load("ex1111");
    auto M = incidence_matrix(z);
    long long pow2 = 2, pow4 = 4;
    for (long long n = 1; n <= 12; ++n) {
        auto c0 = M.pow(n).mul({1, 0}); // parikh(zeta^n(0))
        auto c1 = M.pow(n).mul({0, 1});
        CHECK(c1[1] - c0[1] == pow2);
        CHECK(c0[0] + c0[1] == pow4);
        CHECK(c1[0] + c1[1] == pow4);
        pow2 *= 2;
        pow4 *= 4;
    }
}
