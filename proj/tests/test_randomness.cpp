#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdec/random.hpp"

using namespace qdec;

TEST_CASE("sampler streams are reproducible") {
    Sampler a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Sampler c = Sampler(42).split(3), d = Sampler(42).split(3), e = Sampler(42).split(4);
    Mat uc = haar_unitary(3, c), ud = haar_unitary(3, d), ue = haar_unitary(3, e);
    CHECK((uc - ud).norm() == 0.0);
    CHECK((uc - ue).norm() > 1e-3);
}

TEST_CASE("haar unitaries") {
    Sampler s(1);
    Mat p = haar_unitary(1, s);
    CHECK(std::abs(std::abs(p(0, 0)) - 1) < 1e-12);
    for (int t = 0; t < 1000; ++t) CHECK(is_unitary(haar_unitary(1 + t % 5, s)));

    // first moment U rho U^dag -> pi
    const int d = 3, n = 20000;
    Mat rho = random_density(Space{{"A", d}}, 1, s).mat();
    Mat sum = Mat::Zero(d, d), sq = Mat::Zero(d, d);
    for (int t = 0; t < n; ++t) {
        Mat u = haar_unitary(d, s);
        Mat x = u * rho * u.adjoint();
        sum += x;
        sq += x.cwiseAbs2().cast<cplx>();
    }
    Mat mean = sum / double(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double var = sq(i, j).real() / n - std::norm(mean(i, j));
            const double target = i == j ? 1.0 / d : 0.0;
            CHECK(std::abs(mean(i, j) - target) <= 3 * std::sqrt(var / n) + 1e-12);
        }

    // left invariance: |<0|V U|0>|^2 has the same mean 1/d as |<0|U|0>|^2
    Mat v = haar_unitary(d, s);
    double m1 = 0, m2 = 0, s1 = 0, s2 = 0;
    for (int t = 0; t < n; ++t) {
        Mat u = haar_unitary(d, s);
        const double a = std::norm(u(0, 0)), b = std::norm((v * u)(0, 0));
        m1 += a;
        m2 += b;
        s1 += a * a;
        s2 += b * b;
    }
    m1 /= n;
    m2 /= n;
    const double se = std::sqrt((s1 / n - m1 * m1) / n + (s2 / n - m2 * m2) / n);
    CHECK(std::abs(m1 - m2) <= 4 * se);
    CHECK(std::abs(m1 - 1.0 / d) <= 4 * std::sqrt((s1 / n - m1 * m1) / n));
}

TEST_CASE("haar isometries") {
    Sampler s(2);
    CHECK(is_isometry(haar_isometry(5, 3, s)));
    CHECK_THROWS(haar_isometry(2, 3, s));
}

TEST_CASE("second moment closed form") {
    for (int d : {1, 2, 3}) {
        SecondMoment id = haar_second_moment(Mat::Identity(d * d, d * d), d);
        SecondMoment f = haar_second_moment(swap_operator(d), d);
        if (d > 1) {
            CHECK(std::abs(id.alpha - 1.0) < 1e-12);
            CHECK(std::abs(id.beta) < 1e-12);
            CHECK(std::abs(f.alpha) < 1e-12);
            CHECK(std::abs(f.beta - 1.0) < 1e-12);
        }
        CHECK((id.value - Mat::Identity(d * d, d * d)).norm() < 1e-12);
        CHECK((f.value - swap_operator(d)).norm() < 1e-12);
    }
    Mat m1 = Mat::Constant(1, 1, cplx(0.3, 0.2));
    CHECK(std::abs(haar_second_moment(m1, 1).value(0, 0) - cplx(0.3, 0.2)) < 1e-15);

    Sampler s(3);
    const int d = 2, n = 20000;
    Mat m = ginibre(d * d, d * d, s);
    SecondMoment c = haar_second_moment(m, d);
    const cplx trm = m.trace(), trmf = (m * swap_operator(d)).trace();
    CHECK(std::abs(c.alpha * double(d * d) + c.beta * double(d) - trm) < 1e-10);
    CHECK(std::abs(c.alpha * double(d) + c.beta * double(d * d) - trmf) < 1e-10);
    Mat sum = Mat::Zero(d * d, d * d);
    double sq = 0;
    for (int t = 0; t < n; ++t) {
        Mat u = haar_unitary(d, s);
        Mat uu = oracle::kron(u, u);
        Mat x = uu * m * uu.adjoint();
        sum += x;
        sq += x.squaredNorm();
    }
    Mat mean = sum / double(n);
    const double var = sq / n - mean.squaredNorm();
    CHECK((mean - c.value).norm() <= 3 * std::sqrt(var / n));
}

TEST_CASE("swap trick") {
    CHECK((oracle::kron(Mat::Identity(2, 2), Mat::Identity(2, 2)) * swap_operator(2)).trace().real() ==
          doctest::Approx(2));
    Mat pi = Mat::Identity(3, 3) / 3.0;
    CHECK((oracle::kron(pi, pi) * swap_operator(3)).trace().real() == doctest::Approx(1.0 / 3));
    Sampler s(4);
    for (int t = 0; t < 50; ++t) {
        Mat a = ginibre(3, 3, s), b = ginibre(3, 3, s);
        CHECK(std::abs((a * b).trace() - (oracle::kron(a, b) * swap_operator(3)).trace()) < 1e-11);
    }
}

TEST_CASE("clifford group is a 2-design") {
    const auto& g1 = clifford_group(1);
    CHECK(g1.size() == 24);
    CHECK((g1[0] - Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK(clifford_group(2).size() == 11520);
    CHECK_THROWS(clifford_group(3));

    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 1;
    CHECK((clifford_second_moment(m, 1) - haar_second_moment(m, 2).value).norm() < 1e-9);

    Sampler s(5);
    for (int t = 0; t < 3; ++t) {
        Mat r = ginibre(16, 16, s);
        CHECK((clifford_second_moment(r, 2) - haar_second_moment(r, 4).value).norm() < 1e-9);
    }
    for (int t = 0; t < 20; ++t) {
        Mat c = clifford_sample(1, s);
        CHECK(is_unitary(c));
        bool found = false;
        for (const auto& e : g1) found = found || std::abs(std::abs((e.adjoint() * c).trace()) - 2) < 1e-9;
        CHECK(found);
    }
}

TEST_CASE("weyl operators") {
    auto w = weyl_operators(2);
    CHECK(w.size() == 4);
    CHECK((w[0] - Mat::Identity(2, 2)).norm() < 1e-12);
    auto in_set = [&](const Mat& p) {
        for (const auto& u : w)
            if (std::abs(std::abs((u.adjoint() * p).trace()) - 2) < 1e-12) return true;
        return false;
    };
    CHECK(in_set(oracle::pauli(1)));
    CHECK(in_set(oracle::pauli(3)));
    CHECK(in_set(oracle::pauli(1) * oracle::pauli(3)));

    Sampler s(6);
    for (int d : {2, 3, 4}) {
        auto ws = weyl_operators(d);
        CHECK(static_cast<int>(ws.size()) == d * d);
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (std::size_t j = 0; j < ws.size(); ++j)
                CHECK(std::abs((ws[i].adjoint() * ws[j]).trace() - cplx(i == j ? d : 0, 0)) < 1e-10);
        Mat rho = ginibre(d, d, s);
        Mat acc = Mat::Zero(d, d);
        for (const auto& u : ws) acc += u * rho * u.adjoint();
        CHECK((acc - double(d) * rho.trace() * Mat::Identity(d, d)).norm() < 1e-10);
    }
}

TEST_CASE("random states") {
    Sampler s(7);
    Density p = random_density(Space{{"A", 3}}, 1, s);
    CHECK((p.mat() * p.mat()).trace().real() == doctest::Approx(1).epsilon(1e-12));
    CHECK(random_pure(Space{{"A", 4}}, s).norm() == doctest::Approx(1).epsilon(1e-12));
    const int n = 5000, d = 3;
    Mat sum = Mat::Zero(d, d), sq = Mat::Zero(d, d);
    for (int t = 0; t < n; ++t) {
        Mat r = random_density(Space{{"A", d}}, d, s).mat();
        sum += r;
        sq += r.cwiseAbs2().cast<cplx>();
    }
    Mat mean = sum / double(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double sd = std::sqrt((sq(i, j).real() / n - std::norm(mean(i, j))) / n);
            CHECK(std::abs(mean(i, j) - (i == j ? 1.0 / d : 0.0)) <= 4 * sd + 1e-12);
        }
    CHECK_THROWS(random_density(Space{{"A", 2}}, 0, s));
}

TEST_CASE("operator chernoff experiment") {
    Sampler s(8);
    RankOneMeasurement m = basis_measurement(haar_unitary(4, s));
    CHECK(chernoff_experiment(m, 8, 100.0, 200, s).violation_rate == 0.0);
    CHECK(chernoff_experiment(m, 1, 1.0, 200, s).violation_rate > 0.95);
    ChernoffResult r = chernoff_experiment(m, 64, 2.0, 2000, s);
    CHECK(r.violation_rate <= r.analytic_bound);
    CHECK(r.analytic_bound == doctest::Approx(8 * std::exp(-64.0 / (4 * 2 * std::log(2.0)))));
}
