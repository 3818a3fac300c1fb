#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qdec/locking.hpp"

using namespace qdec;
using namespace qdec::locking;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("scheme construction invariants") {
    Sampler s(1);
    Scheme sc = build_scheme(16, 8, 2, s);
    CHECK(sc.messages() == 16);
    CHECK(is_isometry(sc.embedding()));
    CHECK(pairwise_min_distance(sc) == doctest::Approx(2).epsilon(1e-8));
    CHECK(pairwise_min_guess(sc) == doctest::Approx(1).epsilon(1e-8));
    for (int m = 0; m < 16; ++m) {
        Mat r = sc.encoded(m);
        CHECK((r * r).trace().real() == doctest::Approx(1).epsilon(1e-10));
        CHECK(sc.cyphertext(m).trace().real() == doctest::Approx(1).epsilon(1e-10));
        CHECK((oracle::trace_b(r, 8, 2) - sc.cyphertext(m)).norm() < 1e-12);
    }
    Mat j = sc.joint();
    CHECK(j.rows() == 16 * 8);
    CHECK(j.trace().real() == doctest::Approx(1).epsilon(1e-12));

    CHECK_THROWS(build_scheme(17, 8, 2, s));
    CHECK_THROWS(Scheme(2, 2, Mat::Ones(4, 2)));
}

TEST_CASE("no cyphertext means no leakage") {
    Sampler s(2);
    Scheme sc = build_scheme(4, 1, 4, s);
    Leakage l = leakage(sc, 4, 200, s);
    CHECK(l.value == doctest::Approx(0).epsilon(1e-12));
    // a maximally mixed cyphertext for every message leaks nothing in any basis
    Mat emb = Mat::Zero(8, 2);  // C = 2, K = 4, messages on the key alone
    for (int m = 0; m < 2; ++m)
        for (int c = 0; c < 2; ++c) emb(c * 4 + 2 * m + c, m) = 1 / std::sqrt(2.0);
    Scheme flat(2, 4, emb);
    for (int m = 0; m < 2; ++m) CHECK((flat.cyphertext(m) - Mat::Identity(2, 2) / 2.0).norm() < 1e-12);
    for (int t = 0; t < 10; ++t) CHECK(leakage_of(flat, haar_unitary(2, s)) < 1e-12);
}

TEST_CASE("without a key the cyphertexts are distinguishable") {
    for (int n : {2, 4, 8}) {
        Sampler s(3 + n);
        Scheme sc = build_scheme(n, n, 1, s);
        const double exact = 2.0 * (n - 1) / n;
        CHECK(leakage_of(sc, sc.embedding()) == doctest::Approx(exact).epsilon(1e-10));
        Leakage l = leakage(sc, 8, 30000, s);
        CHECK(l.value >= exact - 1e-3);
        CHECK(l.value <= exact + 1e-10);
        CHECK(is_unitary(l.basis));
    }
}

TEST_CASE("outcome statistics") {
    Sampler s(4);
    Scheme sc = build_scheme(6, 4, 2, s);
    Mat basis = haar_unitary(4, s);
    Eigen::MatrixXd p = outcome_distribution(sc, basis);
    CHECK(p.rows() == 6);
    CHECK(p.cols() == 4);
    CHECK(p.sum() == doctest::Approx(1).epsilon(1e-12));
    CHECK(p.minCoeff() >= -1e-15);
    double direct = 0;
    for (int m = 0; m < 6; ++m)
        for (int x = 0; x < 4; ++x) direct += std::abs(p(m, x) - 1.0 / (6 * 4));
    CHECK(leakage_of(sc, basis) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(mutual_information(p) == doctest::Approx(oracle::classical_mi(p)).epsilon(1e-12));
}

TEST_CASE("leakage search is monotone in restarts") {
    Sampler s(5);
    Scheme sc = build_scheme(16, 8, 2, s);
    double prev = 0;
    for (int r : {1, 2, 4, 8}) {
        Leakage l = leakage(sc, r, 400, Sampler(6));
        CHECK(l.value >= prev);
        CHECK(l.value == doctest::Approx(leakage_of(sc, l.basis)).epsilon(1e-12));
        CHECK(static_cast<int>(l.restart_values.size()) == r);
        prev = l.value;
    }
}

TEST_CASE("a key lowers the searched leakage") {
    // N = 16 at total dimension 16: (C, K) = (16, 1), (8, 2), (4, 4)
    std::vector<double> k1, k2, k4;
    for (int t = 0; t < 10; ++t) {
        Sampler a(100 + t), b(100 + t), c(100 + t);
        k1.push_back(leakage(build_scheme(16, 16, 1, a), 4, 1500, a).value);
        k2.push_back(leakage(build_scheme(16, 8, 2, b), 4, 1500, b).value);
        k4.push_back(leakage(build_scheme(16, 4, 4, c), 4, 1500, c).value);
    }
    CHECK(median(k2) < median(k1));
    CHECK(median(k4) < median(k2));
}

TEST_CASE("accessible information bound") {
    CHECK(accessible_info_bound(0, 64) == doctest::Approx(0));
    CHECK(eta(0) == 0);
    CHECK(eta(-0.1) == 0);
    CHECK(eta(0.5) == doctest::Approx(0.5));
    CHECK(accessible_info_bound(0.1, 4) == doctest::Approx(0.4 + 2 * eta(0.9) + 2 * eta(0.1)));
    CHECK_THROWS(accessible_info_bound(-0.1, 4));

    Sampler s(7);
    for (auto [dc, dk] : {std::pair{8, 2}, std::pair{16, 1}, std::pair{4, 4}}) {
        Scheme sc = build_scheme(16, dc, dk, s);
        Leakage l = leakage(sc, 4, 1500, s);
        const double mi = mutual_information(outcome_distribution(sc, l.basis));
        CHECK(mi <= accessible_info_bound(l.value, 4) + 1e-12);
    }
}

TEST_CASE("key requirement arithmetic") {
    KeyRequirement k = key_requirement(64, 0.01);
    const double expect = 3200 * std::sqrt((2 + 128 - std::log2(0.01)) * std::log(100.0));
    CHECK(k.key_dim == doctest::Approx(expect).epsilon(1e-12));
    CHECK(k.eps_in_range);
    CHECK(k.enough_messages);
    CHECK_FALSE(key_requirement(64, 0.2).eps_in_range);
    CHECK_FALSE(key_requirement(3, 0.01).enough_messages);
    CHECK_THROWS(key_requirement(64, 0));
}

TEST_CASE("quasi-measurements") {
    std::vector<Vec> basis;
    for (int i = 0; i < 4; ++i) basis.push_back(Vec::Unit(4, i));
    CHECK(quasi_check(basis, 4, 1));
    std::vector<Vec> same(4, Vec::Unit(4, 0));
    CHECK_FALSE(quasi_check(same, 4, 3.9));
    CHECK(quasi_check(same, 4, 4));

    // rows of a random basis drawn with replacement: the pass rate tracks the Chernoff experiment
    Sampler s(8);
    Mat u = haar_unitary(4, s);
    const int n = 64, trials = 400;
    const double k = 1.3;
    int pass = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<Vec> draws;
        for (int i = 0; i < n; ++i) draws.push_back(u.col(static_cast<int>(s.uniform() * 4) % 4));
        pass += quasi_check(draws, n, k);
    }
    ChernoffResult c = chernoff_experiment(basis_measurement(u), n, k, trials, s);
    const double rate = 1.0 - double(pass) / trials;
    const double sd = std::sqrt((c.violation_rate * (1 - c.violation_rate) + rate * (1 - rate)) / trials) + 1e-3;
    CHECK(std::abs(rate - c.violation_rate) <= 4 * sd);
}
