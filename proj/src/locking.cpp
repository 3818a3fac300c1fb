#include "qdec/locking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qdec/metrics.hpp"

namespace qdec::locking {

Scheme::Scheme(int dim_c, int dim_k, Mat embedding) : dim_c_(dim_c), dim_k_(dim_k), embedding_(std::move(embedding)) {
    if (dim_c < 1 || dim_k < 1) throw std::invalid_argument("scheme: dimensions must be positive");
    if (embedding_.rows() != dim_c * dim_k) throw std::invalid_argument("scheme: embedding has the wrong row count");
    if (!is_isometry(embedding_, kDerivedTol)) throw std::invalid_argument("scheme: embedding is not an isometry");
    for (int m = 0; m < messages(); ++m)
        cyphertexts_.push_back(reduced_of_vector(embedding_.col(m), {dim_c_, dim_k_}, {0}));
}

Mat Scheme::encoded(int m) const {
    Vec v = embedding_.col(m);
    return v * v.adjoint();
}

Mat Scheme::joint() const {
    const int n = messages();
    Mat out = Mat::Zero(n * dim_c_, n * dim_c_);
    for (int m = 0; m < n; ++m) out.block(m * dim_c_, m * dim_c_, dim_c_, dim_c_) = cyphertexts_[m] / n;
    return out;
}

Scheme build_scheme(int messages, int dim_c, int dim_k, Sampler& sampler) {
    if (messages < 1) throw std::invalid_argument("build_scheme: at least one message is needed");
    if (dim_c < 1 || dim_k < 1) throw std::invalid_argument("build_scheme: dimensions must be positive");
    if (messages > dim_c * dim_k) throw std::invalid_argument("build_scheme: more messages than dim C * dim K");
    return Scheme(dim_c, dim_k, haar_isometry(dim_c * dim_k, messages, sampler));
}

double pairwise_min_distance(const Scheme& s) {
    double best = 2;
    for (int i = 0; i < s.messages(); ++i)
        for (int j = i + 1; j < s.messages(); ++j)
            best = std::min(best, trace_norm(s.encoded(i) - s.encoded(j)));
    return best;
}

double pairwise_min_guess(const Scheme& s) {
    double best = 1;
    for (int i = 0; i < s.messages(); ++i)
        for (int j = i + 1; j < s.messages(); ++j) best = std::min(best, helstrom(s.encoded(i), s.encoded(j)).p_guess);
    return best;
}

Eigen::MatrixXd outcome_distribution(const Scheme& s, const Mat& basis) {
    const int n = s.messages();
    Eigen::MatrixXd p(n, s.dim_c());
    for (int m = 0; m < n; ++m) {
        Mat rb = s.cyphertext(m) * basis;
        for (int x = 0; x < s.dim_c(); ++x) p(m, x) = basis.col(x).dot(rb.col(x)).real() / n;
    }
    return p;
}

double leakage_of(const Scheme& s, const Mat& basis) {
    Eigen::MatrixXd p = outcome_distribution(s, basis);
    const double q = 1.0 / (s.messages() * s.dim_c());
    return (p.array() - q).abs().sum();
}

double mutual_information(const Eigen::MatrixXd& joint) {
    Eigen::VectorXd pm = joint.rowwise().sum();
    Eigen::RowVectorXd px = joint.colwise().sum();
    double mi = 0;
    for (int m = 0; m < joint.rows(); ++m)
        for (int x = 0; x < joint.cols(); ++x) {
            const double p = joint(m, x);
            if (p > 0) mi += p * std::log2(p / (pm(m) * px(x)));
        }
    return std::max(mi, 0.0);
}

namespace {

// Diagonal entries <b_x| rho_m |b_x> for the given column.
Eigen::VectorXd column_weights(const Scheme& s, const Vec& b) {
    Eigen::VectorXd w(s.messages());
    for (int m = 0; m < s.messages(); ++m) w(m) = b.dot(s.cyphertext(m) * b).real();
    return w;
}

double column_score(const Eigen::VectorXd& w, int n, int dc) {
    return (w.array() / n - 1.0 / (n * dc)).abs().sum();
}

// Random Givens proposals on pairs of basis columns, accepted on improvement.
double ascend(const Scheme& s, Mat& basis, int iterations, Sampler& rng) {
    const int dc = s.dim_c(), n = s.messages();
    if (dc < 2) return leakage_of(s, basis);
    std::vector<Eigen::VectorXd> w(dc);
    Eigen::VectorXd score(dc);
    for (int x = 0; x < dc; ++x) {
        w[x] = column_weights(s, basis.col(x));
        score(x) = column_score(w[x], n, dc);
    }
    double step = M_PI / 4;
    int rejected = 0;
    const int patience = 4 * dc * dc;
    for (int it = 0; it < iterations; ++it) {
        const int i = rng.uniform_int(dc);
        int j = rng.uniform_int(dc - 1);
        if (j >= i) ++j;
        const double theta = step * (2 * rng.uniform() - 1);
        const cplx e = std::polar(1.0, 2 * M_PI * rng.uniform());
        const double c = std::cos(theta), sn = std::sin(theta);
        Vec bi = c * basis.col(i) - sn * std::conj(e) * basis.col(j);
        Vec bj = sn * e * basis.col(i) + c * basis.col(j);
        Eigen::VectorXd wi = column_weights(s, bi), wj = column_weights(s, bj);
        const double si = column_score(wi, n, dc), sj = column_score(wj, n, dc);
        if (si + sj > score(i) + score(j) + 1e-14) {
            basis.col(i) = bi;
            basis.col(j) = bj;
            w[i] = wi;
            w[j] = wj;
            score(i) = si;
            score(j) = sj;
            rejected = 0;
        } else if (++rejected >= patience) {
            step = std::max(step / 2, 1e-4);
            rejected = 0;
        }
    }
    return score.sum();
}

}  // namespace

Leakage leakage(const Scheme& s, int restarts, int iterations, const Sampler& sampler) {
    if (restarts < 1) throw std::invalid_argument("leakage: at least one restart is needed");
    Leakage best;
    best.value = -1;
    for (int r = 0; r < restarts; ++r) {
        Sampler rng = sampler.split(static_cast<std::uint64_t>(r));
        Mat basis = haar_unitary(s.dim_c(), rng);
        ascend(s, basis, iterations, rng);
        const double v = leakage_of(s, basis);
        best.restart_values.push_back(v);
        if (v > best.value) {
            best.value = v;
            best.basis = basis;
        }
    }
    return best;
}

KeyRequirement key_requirement(double log2_messages, double eps) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("key_requirement: eps must lie in (0, 1)");
    KeyRequirement k;
    const double log_term = 2.0 + 2.0 * log2_messages - std::log2(eps);
    k.key_dim = (32.0 / eps) * std::sqrt(log_term * std::log(1.0 / eps));
    k.eps_in_range = eps <= std::exp(-2.0);
    k.enough_messages = log2_messages >= std::log2(8.0 * std::sqrt(2.0) / eps);
    return k;
}

double eta(double x) { return x <= 0 ? 0.0 : -x * std::log2(x); }

double accessible_info_bound(double eps_lock, double log2_messages) {
    if (eps_lock < 0) throw std::invalid_argument("accessible_info_bound: negative eps");
    return eps_lock * log2_messages + 2 * eta(1 - eps_lock) + 2 * eta(eps_lock);
}

bool quasi_check(const std::vector<Vec>& vectors, int n, double k, double tol) {
    if (vectors.empty()) return true;
    if (n < 1) throw std::invalid_argument("quasi_check: n must be positive");
    const int d = static_cast<int>(vectors.front().size());
    Mat acc = Mat::Zero(d, d);
    for (const auto& v : vectors) {
        if (v.size() != d) throw std::invalid_argument("quasi_check: vectors differ in dimension");
        acc += v * v.adjoint();
    }
    acc *= static_cast<double>(d) / n;
    return max_eigenvalue(acc) <= k + tol;
}

}  // namespace qdec::locking
