#include "qdec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdec {

int product(const Dims& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

EigenSystem eigh(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(h));
    if (es.info() != Eigen::Success) throw std::runtime_error("eigh: decomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Mat spectral_apply(const Mat& h, const std::function<double(double)>& f) {
    auto es = eigh(h);
    RVec fv = es.values.unaryExpr(f);
    return es.vectors * fv.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

Mat sqrtm_psd(const Mat& p) {
    return spectral_apply(p, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

Mat powm_psd(const Mat& p, double exponent, double floor) {
    return spectral_apply(p, [=](double x) { return x > floor ? std::pow(x, exponent) : 0.0; });
}

double trace_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == m.cols() && (m - m.adjoint()).norm() < 1e-13 * (1.0 + m.norm())) {
        return eigh(m).values.cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double frobenius_norm(const Mat& m) { return m.norm(); }

double max_eigenvalue(const Mat& h) { return eigh(h).values.maxCoeff(); }
double min_eigenvalue(const Mat& h) { return eigh(h).values.minCoeff(); }

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

namespace {

std::vector<long> strides_of(const Dims& dims) {
    std::vector<long> s(dims.size(), 1);
    for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
    return s;
}

// index_map[new_index] = old_index for the permutation.
std::vector<long> permutation_map(const Dims& dims, const std::vector<int>& perm) {
    if (perm.size() != dims.size()) throw std::invalid_argument("permute: rank mismatch");
    const long total = product(dims);
    auto old_strides = strides_of(dims);
    Dims new_dims(dims.size());
    for (size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];
    std::vector<long> map(total);
    std::vector<int> digits(dims.size(), 0);
    for (long n = 0; n < total; ++n) {
        long old = 0;
        for (size_t k = 0; k < perm.size(); ++k) old += digits[k] * old_strides[perm[k]];
        map[n] = old;
        for (int k = static_cast<int>(digits.size()) - 1; k >= 0; --k) {
            if (++digits[k] < new_dims[k]) break;
            digits[k] = 0;
        }
    }
    return map;
}

std::vector<int> keep_first_order(int n, const std::vector<int>& keep) {
    std::vector<int> order = keep;
    for (int k = 0; k < n; ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end()) order.push_back(k);
    return order;
}

}  // namespace

Vec permute(const Vec& v, const Dims& dims, const std::vector<int>& perm) {
    auto map = permutation_map(dims, perm);
    Vec out(v.size());
    for (size_t n = 0; n < map.size(); ++n) out(n) = v(map[n]);
    return out;
}

Mat permute(const Mat& m, const Dims& dims, const std::vector<int>& perm) {
    auto map = permutation_map(dims, perm);
    const long d = static_cast<long>(map.size());
    Mat out(d, d);
    for (long j = 0; j < d; ++j)
        for (long i = 0; i < d; ++i) out(i, j) = m(map[i], map[j]);
    return out;
}

Mat partial_trace_keep(const Mat& m, const Dims& dims, const std::vector<int>& keep) {
    if (m.rows() != product(dims) || m.cols() != m.rows())
        throw std::invalid_argument("partial_trace: shape mismatch");
    auto order = keep_first_order(static_cast<int>(dims.size()), keep);
    auto map = permutation_map(dims, order);
    long dk = 1;
    for (int k : keep) dk *= dims[k];
    const long dr = static_cast<long>(map.size()) / dk;
    Mat out = Mat::Zero(dk, dk);
    for (long j = 0; j < dk; ++j)
        for (long i = 0; i < dk; ++i) {
            cplx acc = 0;
            for (long r = 0; r < dr; ++r) acc += m(map[i * dr + r], map[j * dr + r]);
            out(i, j) = acc;
        }
    return out;
}

Mat reduced_of_vector(const Vec& v, const Dims& dims, const std::vector<int>& keep) {
    auto order = keep_first_order(static_cast<int>(dims.size()), keep);
    Vec p = permute(v, dims, order);
    long dk = 1;
    for (int k : keep) dk *= dims[k];
    const long dr = p.size() / dk;
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(p.data(), dk, dr);
    return x * x.adjoint();
}

Vec apply_local(const Vec& v, const Dims& dims, const std::vector<int>& targets, const Mat& op,
                Dims* out_dims) {
    if (targets.empty()) throw std::invalid_argument("apply_local: no targets");
    const int n = static_cast<int>(dims.size());
    auto order = keep_first_order(n, targets);
    long dt = 1;
    for (int k : targets) dt *= dims[k];
    if (op.cols() != dt) throw std::invalid_argument("apply_local: operator input dimension mismatch");
    Vec p = permute(v, dims, order);
    const long dr = p.size() / dt;
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(p.data(), dt, dr);
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> y = op * x;
    Vec w = Eigen::Map<const Vec>(y.data(), y.size());

    // Current layout: [out, rest in original order]. Move out to first target position.
    const int first = *std::min_element(targets.begin(), targets.end());
    Dims cur{static_cast<int>(op.rows())};
    std::vector<int> rest;
    for (int k = 0; k < n; ++k)
        if (std::find(targets.begin(), targets.end(), k) == targets.end()) rest.push_back(k);
    for (int k : rest) cur.push_back(dims[k]);
    std::vector<int> perm;
    Dims final_dims;
    int idx = 1;
    for (int k = 0; k < n; ++k) {
        if (k == first) {
            perm.push_back(0);
            final_dims.push_back(cur[0]);
        } else if (std::find(targets.begin(), targets.end(), k) == targets.end()) {
            perm.push_back(idx);
            final_dims.push_back(cur[idx]);
            ++idx;
        }
    }
    if (out_dims) *out_dims = final_dims;
    return permute(w, cur, perm);
}

Mat swap_matrix(int d) {
    Mat f = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
    return f;
}

Vec max_entangled_unnormalized(int d) {
    Vec v = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
    return v;
}

Mat complement_basis(const Mat& m, double tol) {
    const long d = m.rows();
    if (m.cols() == 0) return Mat::Identity(d, d);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
    long rank = 0;
    const auto& s = svd.singularValues();
    for (long i = 0; i < s.size(); ++i)
        if (s(i) > tol) ++rank;
    return svd.matrixU().rightCols(d - rank);
}

bool is_unitary(const Mat& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - Mat::Identity(u.cols(), u.cols())).norm() < tol * std::max<long>(1, u.cols());
}

bool is_isometry(const Mat& v, double tol) {
    return (v.adjoint() * v - Mat::Identity(v.cols(), v.cols())).norm() < tol * std::max<long>(1, v.cols());
}

bool is_partial_isometry(const Mat& v, double tol) {
    Mat p = v.adjoint() * v;
    return (p * p - p).norm() < tol * std::max<long>(1, v.cols());
}

double log2_safe(double x) {
    if (x <= 0) throw std::domain_error("log2 of non-positive value");
    return std::log2(x);
}

double shannon_term(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

}  // namespace qdec
