#include "qdec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdec {

namespace {

void same_shape(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("metric: dimension mismatch");
}

void same_space(const Density& a, const Density& b) {
    if (a.space() != b.space()) throw std::invalid_argument("metric: space mismatch " + a.space().describe() + " vs " + b.space().describe());
}

}  // namespace

double fidelity(const Mat& rho, const Mat& sigma) {
    same_shape(rho, sigma);
    Mat prod = sqrtm_psd(rho) * sqrtm_psd(sigma);
    Eigen::JacobiSVD<Mat> svd(prod);
    return svd.singularValues().sum();
}

double fidelity(const Density& rho, const Density& sigma) {
    same_space(rho, sigma);
    return fidelity(rho.mat(), sigma.mat());
}

double generalized_fidelity(const Mat& rho, const Mat& sigma) {
    double a = std::max(0.0, 1.0 - rho.trace().real());
    double b = std::max(0.0, 1.0 - sigma.trace().real());
    return fidelity(rho, sigma) + std::sqrt(a * b);
}

double trace_distance(const Mat& rho, const Mat& sigma) {
    same_shape(rho, sigma);
    return trace_norm(rho - sigma);
}

double trace_distance(const Density& rho, const Density& sigma) {
    same_space(rho, sigma);
    return trace_distance(rho.mat(), sigma.mat());
}

double fidelity_distance(const Mat& rho, const Mat& sigma) {
    double f = std::min(1.0, generalized_fidelity(rho, sigma));
    return std::sqrt(std::max(0.0, 1.0 - f * f));
}

double fidelity_distance(const Density& rho, const Density& sigma) {
    same_space(rho, sigma);
    return fidelity_distance(rho.mat(), sigma.mat());
}

Helstrom helstrom(const Mat& rho, const Mat& sigma) {
    same_shape(rho, sigma);
    auto es = eigh(rho - sigma);
    const long d = rho.rows();
    Mat p = Mat::Zero(d, d);
    for (long i = 0; i < d; ++i)
        if (es.values(i) > 0) p += es.vectors.col(i) * es.vectors.col(i).adjoint();
    Helstrom h;
    h.p_guess = 0.5 + 0.25 * es.values.cwiseAbs().sum();
    h.guess_first = p;
    h.guess_second = Mat::Identity(d, d) - p;
    return h;
}

namespace {

struct Split {
    Labels shared, rest_psi, rest_phi;
};

Split split_labels(const Ket& psi, const Ket& phi) {
    Split s;
    for (const auto& l : psi.space().labels()) {
        if (phi.space().contains(l)) {
            if (psi.space().dim_of(l) != phi.space().dim_of(l))
                throw std::invalid_argument("uhlmann: shared label '" + l + "' has different dimensions");
            s.shared.push_back(l);
        } else {
            s.rest_psi.push_back(l);
        }
    }
    for (const auto& l : phi.space().labels())
        if (!psi.space().contains(l)) s.rest_phi.push_back(l);
    return s;
}

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Operator uhlmann_isometry(const Ket& psi, const Ket& phi) {
    auto s = split_labels(psi, phi);
    Labels op = s.shared, oq = s.shared;
    op.insert(op.end(), s.rest_psi.begin(), s.rest_psi.end());
    oq.insert(oq.end(), s.rest_phi.begin(), s.rest_phi.end());
    Ket p = reorder(psi, op);
    Ket q = reorder(phi, oq);
    const int da = psi.space().dim_of(s.shared);
    const int db = psi.dim() / da;
    const int dc = phi.dim() / da;
    Eigen::Map<const RowMat> x(p.vec().data(), da, db);
    Eigen::Map<const RowMat> y(q.vec().data(), da, dc);
    // cross = x^T conj(y) has rank <= da; factor both sides by QR so only a small core is decomposed.
    Eigen::HouseholderQR<Mat> q1(Mat(x.transpose()));  // db x da
    Eigen::HouseholderQR<Mat> q2(Mat(y.transpose()));  // dc x da
    const int k1 = std::min(db, da), k2 = std::min(dc, da);
    Mat r1 = q1.matrixQR().topRows(k1).triangularView<Eigen::Upper>();
    Mat r2 = q2.matrixQR().topRows(k2).triangularView<Eigen::Upper>();
    Mat core = r1 * r2.adjoint();  // k1 x k2
    Eigen::JacobiSVD<Mat> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Pair left and right singular directions in order, then the complements in order.
    const int r = std::min(db, dc);
    const int m = std::min(r, std::max(k1, k2));
    const int rows = std::max(k2, m), cols = std::max(k1, m);
    Mat bv = Mat::Identity(rows, m), bu = Mat::Identity(cols, m);
    bv.topLeftCorner(k2, std::min(k2, m)) = svd.matrixV().leftCols(std::min(k2, m));
    bu.topLeftCorner(k1, std::min(k1, m)) = svd.matrixU().leftCols(std::min(k1, m));
    Mat v = Mat::Zero(dc, db);
    v.topLeftCorner(rows, cols) = bv * bu.adjoint();
    for (int i = m; i < r; ++i) v(i, i) = 1;
    v = q2.householderQ() * v;
    v = v * q1.householderQ().adjoint();
    return Operator(psi.space().select(s.rest_psi), phi.space().select(s.rest_phi), v);
}

double uhlmann_overlap(const Ket& psi, const Ket& phi, const Operator& v) {
    Ket moved = apply(v, psi);
    Ket aligned = reorder(moved, phi.space().labels());
    return std::abs(phi.vec().dot(aligned.vec()));
}

}  // namespace qdec
