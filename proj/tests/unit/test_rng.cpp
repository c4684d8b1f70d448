#include <doctest.h>

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "uqfi/rng.hpp"

using uqfi::Rng;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, double (Rng::*fn)()) {
    std::vector<double> out(n);
    for (auto& v : out) v = (rng.*fn)();
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double tail_fraction(const std::vector<double>& v, double cut) {
    std::size_t c = 0;
    for (double x : v) if (std::fabs(x) > cut) ++c;
    return static_cast<double>(c) / static_cast<double>(v.size());
}

} // namespace

TEST_CASE("rng is deterministic and seed-sensitive") {
    Rng a(42), b(42), c(43);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        auto va = a.next_u64();
        if (va != b.next_u64()) all_equal = false;
        if (va != c.next_u64()) any_diff = true;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("derived streams differ from each other and the base") {
    CHECK(Rng::derive(7, 0) != Rng::derive(7, 1));
    CHECK(Rng::derive(7, 0) != Rng::derive(8, 0));
    Rng a(Rng::derive(7, 0)), b(Rng::derive(7, 1));
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("next_unit stays strictly inside (0,1)") {
    Rng rng(1);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 200000; ++i) {
        double u = rng.next_unit();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(lo < 0.001); // the generator actually explores the range
    CHECK(hi > 0.999);
}

TEST_CASE("normal draws match N(0,1) moments") {
    Rng rng(2);
    auto v = draw(rng, 200000, &Rng::next_normal);
    CHECK(mean(v) == approx_margin(0.0, 0.01));
    CHECK(sample_sd(v) == approx_margin(1.0, 0.01));
    // P(|Z| > 1.96) = 0.05
    CHECK(tail_fraction(v, 1.96) == approx_margin(0.05, 0.005));
}

TEST_CASE("exponential draws have unit mean") {
    Rng rng(3);
    auto v = draw(rng, 200000, &Rng::next_exponential);
    CHECK(mean(v) == approx_margin(1.0, 0.01));
    CHECK(*std::min_element(v.begin(), v.end()) > 0.0);
}

TEST_CASE("student t3 draws match t3 tail probabilities") {
    Rng rng(4);
    auto v = draw(rng, 200000, &Rng::next_t3);
    CHECK(mean(v) == approx_margin(0.0, 0.03));
    // P(|t3| > 2) = 0.1393, from the closed-form t3 CDF
    CHECK(tail_fraction(v, 2.0) == approx_margin(0.1393, 0.01));
}

TEST_CASE("cauchy draws match Cauchy(0,1) quartiles") {
    Rng rng(5);
    auto v = draw(rng, 200000, &Rng::next_cauchy);
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    double median = v[v.size() / 2];
    CHECK(median == approx_margin(0.0, 0.02));
    // quartiles of Cauchy(0,1) are +/-1, so half the mass lies beyond |x|=1
    CHECK(tail_fraction(v, 1.0) == approx_margin(0.5, 0.01));
}
