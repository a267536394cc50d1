#include "fracguide/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracguide;

TEST_SUITE("rng") {

TEST_CASE("mt19937_64 engine matches the standard's 10000th output") {
    std::mt19937_64 e;
    e.discard(9999);
    CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("streams are reproducible and distinct") {
    Rng a(stream_seed(42, 1));
    Rng b(stream_seed(42, 1));
    Rng c(stream_seed(42, 2));
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x != c.uniform());
    }
    CHECK(stream_seed(1, 0) != stream_seed(0, 1));
}

TEST_CASE("uniform, normal and ball moments") {
    Rng r(7);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0, r2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        su += u;
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    // E|X|^2 = d/(d+2) r^2 for the uniform ball in R^d.
    for (int i = 0; i < 50000; ++i) {
        const Eigen::VectorXd p = r.in_ball(2, 2.0);
        CHECK(p.norm() <= 2.0);
        r2 += p.squaredNorm();
    }
    CHECK(r2 / 50000 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("below covers its range") {
    Rng r(3);
    int counts[5] = {};
    for (int i = 0; i < 5000; ++i) ++counts[r.below(5)];
    for (int c : counts) CHECK(c > 800);
}

}  // TEST_SUITE
