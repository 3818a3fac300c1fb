#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdec/entropy.hpp"
#include "qdec/metrics.hpp"
#include "qdec/random.hpp"

using namespace qdec;
using namespace qdec::entropy;

namespace {

const Space kAB{{"A", 2}, {"B", 2}};

// max over qubit channels F: B -> A' of <Phi| (I x F)(rho) |Phi>, by Givens ascent on a Stinespring isometry.
double decoder_search(const Mat& rho, Sampler& s) {
    Vec phi = Vec::Zero(4);
    phi(0) = phi(3) = 1 / std::sqrt(2.0);
    auto score = [&](const Mat& v) {
        // v: (A' x E) x B with |E| = 4
        Mat acc = Mat::Zero(4, 4);
        for (int e = 0; e < 4; ++e) {
            Mat k(2, 2);
            for (int a = 0; a < 2; ++a) k.row(a) = v.row(a * 4 + e);
            Mat kk = oracle::kron(Mat::Identity(2, 2), k);
            acc += kk * rho * kk.adjoint();
        }
        return phi.dot(acc * phi).real();
    };
    double best = 0;
    for (int r = 0; r < 6; ++r) {
        Mat v = haar_isometry(8, 2, s);
        double cur = score(v);
        for (double th = 0.5; th > 1e-6; th /= 2) {
            bool moved = true;
            while (moved) {
                moved = false;
                for (int i = 0; i < 8; ++i)
                    for (int j = i + 1; j < 8; ++j)
                        for (double ph : {0.0, M_PI / 2})
                            for (double sg : {1.0, -1.0}) {
                                Mat w = v;
                                const cplx e = std::polar(1.0, ph);
                                const double c = std::cos(sg * th), sn = std::sin(sg * th);
                                w.row(i) = c * v.row(i) - sn * std::conj(e) * v.row(j);
                                w.row(j) = sn * e * v.row(i) + c * v.row(j);
                                const double val = score(w);
                                if (val > cur + 1e-14) {
                                    cur = val;
                                    v = w;
                                    moved = true;
                                }
                            }
            }
        }
        best = std::max(best, cur);
    }
    return best;
}

}  // namespace

TEST_CASE("von Neumann family") {
    for (int d : {2, 3, 5}) CHECK(entropy::entropy(maximally_mixed(Space{{"A", d}}), {"A"}).value ==
                                  doctest::Approx(std::log2(double(d))));
    Density phi = to_density(maximally_entangled("A", "A'", 2));
    CHECK(conditional_entropy(phi, {"A"}, {"A'"}).value == doctest::Approx(-1));
    CHECK(coherent_information(phi, {"A"}, {"A'"}).value == doctest::Approx(1));

    Sampler s(1);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
        Density r = random_density(Space{{"A", 2}, {"B", 2}, {"C", 2}}, 1 + t % 8, s);
        if (conditional_mutual_information(r, {"A"}, {"B"}, {"C"}).value < -1e-10) ++violations;
    }
    CHECK(violations == 0);

    for (int t = 0; t < 50; ++t) {
        Density p = to_density(random_pure(Space{{"A", 2}, {"B", 3}, {"C", 2}}, s));
        CHECK(entropy::entropy(p, {"A"}).value == doctest::Approx(entropy::entropy(p, {"B", "C"}).value).epsilon(1e-9));
        CHECK(conditional_entropy(p, {"A"}, {"B"}).value ==
              doctest::Approx(-conditional_entropy(p, {"A"}, {"C"}).value).epsilon(1e-9));
        const double lhs = coherent_information(p, {"A"}, {"B"}).value;
        const double rhs = 0.5 * mutual_information(p, {"A"}, {"B"}).value - 0.5 * mutual_information(p, {"A"}, {"C"}).value;
        CHECK(std::abs(lhs - rhs) < 1e-9);
        const double h = entropy::entropy(p, {"A"}).value;
        CHECK(h >= -1e-12);
        CHECK(h <= 1 + 1e-12);
    }
}

TEST_CASE("min-entropy closed cases") {
    Sampler s(2);
    Density sb = random_density(Space{{"B", 3}}, 3, s);
    Density prod = tensor(maximally_mixed(Space{{"A", 4}}), sb);
    CHECK(h_min(prod, {"A"}, {"B"}).value == doctest::Approx(2).epsilon(1e-7));
    Density pp = to_density(tensor(random_pure(Space{{"A", 2}}, s), random_pure(Space{{"B", 2}}, s)));
    CHECK(h_min(pp, {"A"}).value == doctest::Approx(0).epsilon(1e-9));
    Density phi = to_density(maximally_entangled("A", "B", 2));
    const double v = h_min(phi, {"A"}, {"B"}).value;
    CHECK(v == doctest::Approx(-1).epsilon(1e-7));
    CHECK(v == doctest::Approx(oracle::hmin_grid(phi.mat())).epsilon(1e-3));
    Density r = random_density(Space{{"A", 3}}, 3, s);
    auto es = eigh(r.mat());
    CHECK(h_min(r, {"A"}).value == doctest::Approx(-std::log2(es.values.maxCoeff())));
}

TEST_CASE("min-entropy and collision entropy against grid oracles") {
    Sampler s(3);
    for (int t = 0; t < 8; ++t) {
        Density r = random_density(kAB, 1 + t % 4, s);
        Report hm = h_min(r, {"A"}, {"B"});
        Report h2 = h_2(r, {"A"}, {"B"});
        CHECK(hm.value == doctest::Approx(oracle::hmin_grid(r.mat())).epsilon(1e-3));
        CHECK(h2.value == doctest::Approx(oracle::h2_grid(r.mat())).epsilon(1e-3));
        CHECK(hm.value <= h2.value + 1e-6);
        CHECK(hm.method == Method::optimizer);
        CHECK(hm.certified_gap < 1e-6);
    }
}

TEST_CASE("collision entropy closed cases") {
    for (int d : {2, 3, 4}) CHECK(h_2(maximally_mixed(Space{{"A", d}}), {"A"}).value == doctest::Approx(std::log2(double(d))));
    Sampler s(4);
    Density prod = tensor(maximally_mixed(Space{{"A", 2}}), random_density(Space{{"B", 3}}, 2, s));
    CHECK(h_2(prod, {"A"}, {"B"}).value == doctest::Approx(1).epsilon(1e-6));
    // subnormalized input shifts by -2 log tr
    Density r = random_density(kAB, 4, s);
    Density half(kAB, r.mat() * 0.5, Norm::subnormalized);
    CHECK(h_2(half, {"A"}, {"B"}).value == doctest::Approx(h_2(r, {"A"}, {"B"}).value + 2).epsilon(1e-6));
}

TEST_CASE("max-entropy, duality and the ordering chain") {
    Density phi = to_density(maximally_entangled("A", "B", 2));
    CHECK(h_max(phi, {"A"}, {"B"}).value == doctest::Approx(-1).epsilon(1e-6));
    CHECK(h_max(maximally_mixed(Space{{"A", 4}}), {"A"}).value == doctest::Approx(2));

    Sampler s(5);
    int violations = 0;
    for (int t = 0; t < 200; ++t) {
        Density r = random_density(kAB, 1 + t % 4, s);
        const double hm = h_min(r, {"A"}, {"B"}).value, h2 = h_2(r, {"A"}, {"B"}).value;
        const double hv = conditional_entropy(r, {"A"}, {"B"}).value, hx = h_max(r, {"A"}, {"B"}).value;
        if (hm > h2 + 1e-6 || hm > hv + 1e-6 || hv > hx + 1e-6) ++violations;
    }
    CHECK(violations == 0);

    // two purifications give the same dual value
    for (int t = 0; t < 10; ++t) {
        Density r = random_density(kAB, 2, s);
        Ket p1 = purify(r, "C");
        Mat u = haar_isometry(4, p1.space().dim_of("C"), s);
        Ket p2 = apply(Operator(Space{{"C", p1.space().dim_of("C")}}, Space{{"C", 4}}, u), p1);
        const double d1 = -h_min(to_density(p1), {"A"}, {"C"}).value;
        const double d2 = -h_min(to_density(p2), {"A"}, {"C"}).value;
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-6));
        CHECK(h_max(r, {"A"}, {"B"}).value == doctest::Approx(d1).epsilon(1e-6));

        // 2^{H_max} = |A| max_sigma F(rho, pi x sigma)^2 over qubit sigma
        auto neg_f2 = [&](const Mat& sig) {
            const double f = oracle::root_fidelity(r.mat(), oracle::kron(Mat::Identity(2, 2) / 2.0, sig));
            return -f * f;
        };
        const double best = -oracle::bloch_minimize(neg_f2, 12, 12, 24, 30);
        CHECK(std::pow(2.0, d1) == doctest::Approx(2 * best).epsilon(1e-4));
    }
}

TEST_CASE("operational min-entropy against a decoder search") {
    Sampler s(6);
    for (int t = 0; t < 3; ++t) {
        Density r = random_density(kAB, 1 + t, s);
        const double lhs = std::pow(2.0, -h_min(r, {"A"}, {"B"}).value);
        CHECK(lhs == doctest::Approx(2 * decoder_search(r.mat(), s)).epsilon(1e-4));
    }
}

TEST_CASE("smoothing") {
    Sampler s(7);
    Density r = random_density(kAB, 3, s);
    for (Kind k : {Kind::min, Kind::two, Kind::max}) {
        Report z = smooth(k, r, {"A"}, {"B"}, 0);
        Report plain = k == Kind::min ? h_min(r, {"A"}, {"B"}) : k == Kind::two ? h_2(r, {"A"}, {"B"}) : h_max(r, {"A"}, {"B"});
        CHECK(z.value == doctest::Approx(plain.value).epsilon(1e-9));
        double prev = z.value;
        for (double eps : {0.05, 0.1, 0.2, 0.4}) {
            Report sm = smooth(k, r, {"A"}, {"B"}, eps);
            REQUIRE(sm.member.has_value());
            CHECK(sm.member->trace() <= 1 + 1e-12);
            CHECK(fidelity_distance(r.mat(), sm.member->mat()) <= eps + 1e-9);
            if (k == Kind::max) CHECK(sm.value <= prev + 1e-7);
            else CHECK(sm.value >= prev - 1e-7);
            prev = sm.value;
        }
    }

    // a near-pure state gains collision entropy under eigenvalue truncation
    Mat near = Mat::Zero(4, 4);
    near(0, 0) = 0.97;
    for (int i = 1; i < 4; ++i) near(i, i) = 0.01;
    Density np(kAB, near);
    Report base = h_2(np, {"A", "B"});
    Report sm = smooth(Kind::two, np, {"A", "B"}, {}, 0.1);
    CHECK(sm.value > base.value + 1e-3);
    CHECK(sm.strategy != "none");
    CHECK_THROWS(smooth(Kind::min, r, {"A"}, {"B"}, 1.5));
}

TEST_CASE("asymptotic equipartition bound") {
    const double hab = 0.7;
    const double v = aep_bound(hab, 2, 10000, 0.1);
    CHECK(v == doctest::Approx(hab - 4 * std::log2(2 * std::sqrt(2.0) + 1) * std::sqrt(std::log2(200.0) / 1e4)));
    CHECK(aep_bound(hab, 2, 1000000000, 0.1) == doctest::Approx(hab).epsilon(1e-3));
    CHECK_THROWS(aep_bound(hab, 2, 3, 0.1));
    // pi^{x n}: the exact per-copy smooth min-entropy log d sits above the bound
    const double eps = 0.5;
    const int n = static_cast<int>(std::ceil(aep_min_copies(eps)));
    Density pi = maximally_mixed(Space{{"A", 1 << n}});
    const double exact = smooth(Kind::min, pi, {"A"}, {}, eps).value / n;
    CHECK(exact >= 1 - 1e-9);
    CHECK(exact >= aep_bound(1.0, 2, n, eps));
}
