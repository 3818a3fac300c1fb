#include "qdec/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace qdec {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Sampler::Sampler(std::uint64_t seed) : seed_(seed), engine_(splitmix(seed)) {}

Sampler Sampler::split(std::uint64_t stream) const { return Sampler(splitmix(seed_ ^ splitmix(stream + 1))); }

double Sampler::uniform() { return uniform_(engine_); }
double Sampler::normal() { return normal_(engine_); }

cplx Sampler::complex_normal() {
    double re = normal();
    double im = normal();
    return cplx(re, im) / std::sqrt(2.0);
}

int Sampler::uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: empty range");
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(engine_));
}

Mat ginibre(int rows, int cols, Sampler& s) {
    Mat g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = s.complex_normal();
    return g;
}

namespace {

// Orthonormal columns from a Ginibre block, phases fixed so the law is Haar.
Mat phase_fixed_q(const Mat& z) {
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ() * Mat::Identity(z.rows(), z.cols());
    for (long i = 0; i < z.cols(); ++i) {
        const cplx r = qr.matrixQR()(i, i);
        const double a = std::abs(r);
        q.col(i) *= a > 0 ? r / a : cplx(1.0);
    }
    return q;
}

}  // namespace

Mat haar_unitary(int d, Sampler& s) {
    if (d < 1) throw std::invalid_argument("haar_unitary: dimension must be positive");
    return phase_fixed_q(ginibre(d, d, s));
}

// Same law as the first cols columns of haar_unitary(rows) drawn from the same stream.
Mat haar_isometry(int rows, int cols, Sampler& s) {
    if (cols > rows) throw std::invalid_argument("haar_isometry: more columns than rows");
    if (cols < 1) throw std::invalid_argument("haar_isometry: need at least one column");
    return phase_fixed_q(ginibre(rows, cols, s));
}

SecondMoment haar_second_moment(const Mat& m, int d) {
    if (m.rows() != d * d || m.cols() != d * d) throw std::invalid_argument("second moment: operator must act on C^d x C^d");
    SecondMoment out;
    const cplx t = m.trace();
    if (d == 1) {
        out.alpha = t;
        out.beta = 0;
        out.value = Mat::Constant(1, 1, t);
        return out;
    }
    Mat f = swap_matrix(d);
    const cplx s = (m * f).trace();
    const double dd = d;
    const cplx a = (dd * t - s) / (dd * (dd * dd - 1));
    const cplx b = (dd * s - t) / (dd * (dd * dd - 1));
    out.alpha = a;
    out.beta = b;
    out.value = a * Mat::Identity(d * d, d * d) + b * f;
    return out;
}

Mat swap_operator(int d) { return swap_matrix(d); }

namespace {

std::string phase_key(const Mat& m) {
    cplx ref = 0;
    for (long j = 0; j < m.cols() && ref == cplx(0); ++j)
        for (long i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > 1e-8) {
                ref = std::conj(m(i, j)) / std::abs(m(i, j));
                break;
            }
    std::string key;
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i) {
            cplx z = m(i, j) * ref;
            key += std::to_string(std::lround(z.real() * 1e6)) + "," + std::to_string(std::lround(z.imag() * 1e6)) + ";";
        }
    return key;
}

std::vector<Mat> enumerate_group(const std::vector<Mat>& gens) {
    const long d = gens.front().rows();
    std::map<std::string, int> seen;
    std::vector<Mat> elems{Mat::Identity(d, d)};
    seen[phase_key(elems[0])] = 0;
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : gens) {
            Mat next = g * elems[head];
            auto key = phase_key(next);
            if (seen.emplace(key, static_cast<int>(elems.size())).second) elems.push_back(next);
        }
    }
    return elems;
}

std::vector<Mat> build_clifford(int n) {
    const double r = 1.0 / std::sqrt(2.0);
    Mat h(2, 2);
    h << r, r, r, -r;
    Mat sg(2, 2);
    sg << 1, 0, 0, cplx(0, 1);
    if (n == 1) return enumerate_group({h, sg});
    Mat id2 = Mat::Identity(2, 2);
    Mat cnot = Mat::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    return enumerate_group({kron(h, id2), kron(id2, h), kron(sg, id2), kron(id2, sg), cnot});
}

}  // namespace

const std::vector<Mat>& clifford_group(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 2) throw std::invalid_argument("clifford: only 1 or 2 qubits are supported");
    static std::once_flag once1, once2;
    static std::vector<Mat> g1, g2;
    if (n_qubits == 1) {
        std::call_once(once1, [] { g1 = build_clifford(1); });
        return g1;
    }
    std::call_once(once2, [] { g2 = build_clifford(2); });
    return g2;
}

Mat clifford_sample(int n_qubits, Sampler& s) {
    const auto& g = clifford_group(n_qubits);
    return g[s.uniform_int(static_cast<int>(g.size()))];
}

Mat clifford_second_moment(const Mat& m, int n_qubits) {
    const auto& g = clifford_group(n_qubits);
    Mat acc = Mat::Zero(m.rows(), m.cols());
    for (const auto& c : g) {
        Mat cc = kron(c, c);
        acc += cc * m * cc.adjoint();
    }
    return acc / double(g.size());
}

std::vector<Mat> weyl_operators(int d) {
    Mat x = Mat::Zero(d, d), z = Mat::Zero(d, d);
    const double pi = std::acos(-1.0);
    for (int k = 0; k < d; ++k) {
        x((k + 1) % d, k) = 1;
        z(k, k) = std::polar(1.0, 2 * pi * k / d);
    }
    std::vector<Mat> out;
    Mat xa = Mat::Identity(d, d);
    for (int a = 0; a < d; ++a) {
        Mat zb = Mat::Identity(d, d);
        for (int b = 0; b < d; ++b) {
            out.push_back(xa * zb);
            zb = zb * z;
        }
        xa = xa * x;
    }
    return out;
}

Ket random_pure(const Space& space, Sampler& s) {
    Vec v = ginibre(space.dim(), 1, s).col(0);
    return Ket(space, v / v.norm());
}

Density random_density(const Space& space, int rank, Sampler& s) {
    if (rank < 1) throw std::invalid_argument("random_density: rank must be positive");
    Mat g = ginibre(space.dim(), rank, s);
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return Density(space, hermitize(rho));
}

RankOneMeasurement basis_measurement(const Mat& unitary) {
    RankOneMeasurement m;
    for (long i = 0; i < unitary.cols(); ++i) {
        m.weights.push_back(1.0);
        m.vectors.push_back(unitary.col(i));
    }
    return m;
}

double chernoff_bound(int dim, int n, double k) {
    return 2.0 * dim * std::exp(-n * (k - 1) * (k - 1) / (dim * 2.0 * std::log(2.0)));
}

ChernoffResult chernoff_experiment(const RankOneMeasurement& m, int n, double k, int trials, Sampler& s) {
    const int d = m.dim();
    std::vector<double> cdf;
    double acc = 0;
    for (double w : m.weights) cdf.push_back(acc += w / d);
    int violations = 0;
    for (int t = 0; t < trials; ++t) {
        Mat sum = Mat::Zero(d, d);
        for (int j = 0; j < n; ++j) {
            double u = s.uniform() * acc;
            std::size_t x = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
            if (x >= m.vectors.size()) x = m.vectors.size() - 1;
            sum += m.vectors[x] * m.vectors[x].adjoint();
        }
        if (max_eigenvalue(sum * (double(d) / n)) > k + 1e-12) ++violations;
    }
    return {double(violations) / trials, chernoff_bound(d, n, k), trials};
}

}  // namespace qdec
