#include <cstdlib>

#include "doctest.h"
#include "zerone/common.hpp"
#include "zerone/mc.hpp"

using namespace zerone;

TEST_CASE("counter rng is pinned") {
    // Golden values: the concrete generator is fixed in one place and these
    // freeze it. Any change here breaks every seeded golden file.
    CHECK(rng::at(0, 0, 0) == 0x238275bc38fcbe91ULL);
    CHECK(rng::at(1, 2, 3) == 0x2e90be8fcddb326cULL);
    CHECK(rng::at(42, 7, static_cast<std::uint64_t>(std::int64_t{-5})) ==
          0x8f0cc70789376663ULL);
    CHECK(rng::unit(9, 1, 0) == doctest::Approx(0.7092801589269222).epsilon(1e-15));
}

TEST_CASE("counter rng is a pure function of its arguments") {
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t i = 0; i < 4; ++i)
            CHECK(rng::at(11, s, i) == rng::at(11, s, i));
    CHECK(rng::at(1, 0, 0) != rng::at(2, 0, 0));
    CHECK(rng::at(1, 0, 0) != rng::at(1, 1, 0));
    CHECK(rng::at(1, 0, 0) != rng::at(1, 0, 1));
}

TEST_CASE("rng::below stays in range") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        CHECK(rng::below(7, 3, i, 0) < 7);
        CHECK(rng::below(1, 3, i, 1) == 0);
    }
}

TEST_CASE("wilson interval brackets the estimate") {
    const auto w = wilson95(700, 1000);
    CHECK(w.low < 0.7);
    CHECK(w.high > 0.7);
    CHECK(w.low > 0.66);
    CHECK(w.high < 0.74);

    const auto zero = wilson95(0, 1000);
    CHECK(zero.low <= 1e-12);
    CHECK(zero.high < 0.01);
    const auto one = wilson95(1000, 1000);
    CHECK(one.high == 1.0);
    CHECK(one.low > 0.99);
}

TEST_CASE("mc reports bracket their estimate") {
    for (std::uint64_t n : {1ULL, 10ULL, 1000ULL, 100000ULL}) {
        for (std::uint64_t hits : {std::uint64_t{0}, n / 3, n / 2, n}) {
            const mc::McReport r = mc::report_from_counts(hits, n, 7);
            CHECK(r.ci_low <= r.estimate + 1e-15);
            CHECK(r.estimate <= r.ci_high + 1e-15);
            CHECK(r.samples == n);
        }
    }
    mc::McConfig bad;
    bad.stabilize_from = 3;
    bad.depth = 2;
    CHECK_THROWS_AS(mc::validate(bad), validation_error);
}

TEST_CASE("mixed radix codec round-trips") {
    RadixCodec codec{{3, 2, 4}};
    CHECK(codec.total() == 24);
    std::vector<int> digits(3);
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx) {
        codec.decode(idx, digits);
        CHECK(codec.encode(digits) == idx);
    }
    // first position most significant
    codec.decode(23, digits);
    CHECK(digits[0] == 2);
    CHECK(digits[1] == 1);
    CHECK(digits[2] == 3);
}

TEST_CASE("budget env override") {
    CHECK(enumeration_budget() == (std::uint64_t{1} << 24));
    setenv("ZERONE_BUDGET", "1000", 1);
    CHECK(enumeration_budget() == 1000);
    CHECK_THROWS_AS(check_budget(1001, "test"), budget_error);
    CHECK_NOTHROW(check_budget(1000, "test"));
    unsetenv("ZERONE_BUDGET");
    CHECK(enumeration_budget() == (std::uint64_t{1} << 24));
}
