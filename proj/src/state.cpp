#include "qdec/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdec {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_density(const Mat& m, Norm norm) {
    if (norm == Norm::unchecked) return;
    if ((m - m.adjoint()).norm() > kStructTol * std::max<double>(1.0, m.rows()))
        throw std::invalid_argument("density: matrix is not Hermitian");
    double lo = min_eigenvalue(m);
    if (lo < -kStructTol) throw std::invalid_argument("density: negative eigenvalue " + std::to_string(lo));
    double tr = m.trace().real();
    if (norm == Norm::normalized && std::abs(tr - 1.0) > kStructTol)
        throw std::invalid_argument("density: trace " + std::to_string(tr) + " is not 1");
    if (norm == Norm::subnormalized && tr > 1.0 + kStructTol)
        throw std::invalid_argument("density: trace exceeds 1");
}

Space splice(const Space& base, const std::vector<int>& targets, const Space& out) {
    const int first = *std::min_element(targets.begin(), targets.end());
    std::vector<Subsystem> parts;
    for (int k = 0; k < static_cast<int>(base.size()); ++k) {
        if (k == first) {
            for (const auto& p : out.parts()) parts.push_back(p);
        } else if (std::find(targets.begin(), targets.end(), k) == targets.end()) {
            parts.push_back(base.parts()[k]);
        }
    }
    return Space(parts);
}

// Vector after apply_local has a single factor of dim out.dim at the first target;
// that layout is the same memory order as the spliced multi-factor space.
Vec apply_vector(const Mat& op, const Space& in_space, const Vec& v, const Space& state_space,
                 const Space& out_space, Space* result_space) {
    if (in_space.empty()) {
        *result_space = out_space + state_space;
        return kron(Vec(op.col(0)), v);
    }
    auto targets = state_space.indices(in_space.labels());
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (state_space.parts()[targets[i]].dim != in_space.parts()[i].dim)
            throw std::invalid_argument("apply: dimension mismatch on '" + in_space.parts()[i].label + "'");
    *result_space = splice(state_space, targets, out_space);
    return apply_local(v, state_space.dims(), targets, op);
}

}  // namespace

Ket::Ket(Space space, Vec amplitudes, Norm norm) : space_(std::move(space)), amp_(std::move(amplitudes)) {
    if (amp_.size() != space_.dim()) throw std::invalid_argument("ket: amplitude count does not match " + space_.describe());
    if (norm == Norm::normalized && std::abs(amp_.norm() - 1.0) > kStructTol)
        throw std::invalid_argument("ket: vector is not normalized");
    if (norm == Norm::subnormalized && amp_.norm() > 1.0 + kStructTol)
        throw std::invalid_argument("ket: norm exceeds 1");
}

Density::Density(Space space, Mat matrix, Norm norm) : space_(std::move(space)), m_(std::move(matrix)) {
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
        throw std::invalid_argument("density: matrix shape does not match " + space_.describe());
    check_density(m_, norm);
}

Operator::Operator(Space in, Space out, Mat matrix) : in_(std::move(in)), out_(std::move(out)), m_(std::move(matrix)) {
    if (m_.rows() != out_.dim() || m_.cols() != in_.dim())
        throw std::invalid_argument("operator: matrix shape does not match " + in_.describe() + " -> " + out_.describe());
}

Ket basis_ket(const Space& space, int index) {
    Vec v = Vec::Zero(space.dim());
    v(index) = 1.0;
    return Ket(space, v);
}

Ket maximally_entangled(const std::string& a, const std::string& b, int d) {
    return Ket(Space{{a, d}, {b, d}}, max_entangled_unnormalized(d) / std::sqrt(double(d)));
}

Density maximally_mixed(const Space& space) {
    const int d = space.dim();
    return Density(space, Mat::Identity(d, d) / double(d));
}

Density to_density(const Ket& k) {
    return Density(k.space(), k.vec() * k.vec().adjoint(), Norm::unchecked);
}

Operator identity_op(const Space& space) {
    return Operator(space, space, Mat::Identity(space.dim(), space.dim()));
}

Ket tensor(const Ket& x, const Ket& y) {
    return Ket(x.space() + y.space(), kron(x.vec(), y.vec()), Norm::unchecked);
}

Density tensor(const Density& x, const Density& y) {
    return Density(x.space() + y.space(), kron(x.mat(), y.mat()), Norm::unchecked);
}

Operator tensor(const Operator& x, const Operator& y) {
    return Operator(x.in() + y.in(), x.out() + y.out(), kron(x.mat(), y.mat()));
}

Density marginal(const Density& rho, const Labels& keep) {
    auto idx = rho.space().indices(keep);
    return Density(rho.space().select(keep), partial_trace_keep(rho.mat(), rho.space().dims(), idx), Norm::unchecked);
}

Density partial_trace(const Density& rho, const Labels& drop) {
    return marginal(rho, rho.space().without(drop).labels());
}

Density marginal(const Ket& psi, const Labels& keep) {
    auto idx = psi.space().indices(keep);
    return Density(psi.space().select(keep), reduced_of_vector(psi.vec(), psi.space().dims(), idx), Norm::unchecked);
}

Ket reorder(const Ket& psi, const Labels& order) {
    if (order.size() != psi.space().size()) throw std::invalid_argument("reorder: label list must cover the space");
    auto idx = psi.space().indices(order);
    return Ket(psi.space().select(order), permute(psi.vec(), psi.space().dims(), idx), Norm::unchecked);
}

Density reorder(const Density& rho, const Labels& order) {
    if (order.size() != rho.space().size()) throw std::invalid_argument("reorder: label list must cover the space");
    auto idx = rho.space().indices(order);
    return Density(rho.space().select(order), permute(rho.mat(), rho.space().dims(), idx), Norm::unchecked);
}

Density relabel(const Density& rho, const Space& space) {
    if (space.dims() != rho.space().dims()) throw std::invalid_argument("relabel: dimension mismatch");
    return Density(space, rho.mat(), Norm::unchecked);
}

Ket relabel(const Ket& psi, const Space& space) {
    if (space.dims() != psi.space().dims()) throw std::invalid_argument("relabel: dimension mismatch");
    return Ket(space, psi.vec(), Norm::unchecked);
}

Ket apply(const Operator& op, const Ket& psi, Norm norm) {
    Space out;
    Vec v = apply_vector(op.mat(), op.in(), psi.vec(), psi.space(), op.out(), &out);
    return Ket(out, v, norm);
}

Density apply(const Operator& op, const Density& rho, Norm norm) {
    Space out;
    const int d = rho.dim();
    Mat half;
    for (int c = 0; c < d; ++c) {
        Vec col = apply_vector(op.mat(), op.in(), rho.mat().col(c), rho.space(), op.out(), &out);
        if (c == 0) half.resize(col.size(), d);
        half.col(c) = col;
    }
    Mat adj = half.adjoint();
    Mat full(out.dim(), out.dim());
    for (int c = 0; c < out.dim(); ++c) {
        Space tmp;
        full.col(c) = apply_vector(op.mat(), op.in(), adj.col(c), rho.space(), op.out(), &tmp);
    }
    return Density(out, Mat(full.adjoint()), norm);
}

Ket purify(const Density& rho, const std::string& purifier) {
    auto es = eigh(rho.mat());
    std::vector<int> kept;
    for (int i = static_cast<int>(es.values.size()) - 1; i >= 0; --i)
        if (es.values(i) > 1e-12) kept.push_back(i);
    if (kept.empty()) throw std::invalid_argument("purify: zero operator");
    const int r = static_cast<int>(kept.size());
    Vec v = Vec::Zero(rho.dim() * r);
    for (int k = 0; k < r; ++k) {
        Vec e = std::sqrt(es.values(kept[k])) * es.vectors.col(kept[k]);
        for (int i = 0; i < rho.dim(); ++i) v(i * r + k) = e(i);
    }
    return Ket(rho.space() + Space{{purifier, r}}, v, Norm::unchecked);
}

Operator op_of_vec(const Ket& psi, const Labels& from, const Labels& to) {
    Labels order = from;
    order.insert(order.end(), to.begin(), to.end());
    Ket p = reorder(psi, order);
    Space in = psi.space().select(from);
    Space out = psi.space().select(to);
    Eigen::Map<const RowMat> x(p.vec().data(), in.dim(), out.dim());
    return Operator(in, out, Mat(x.transpose()));
}

Ket vec_of_op(const Operator& m) {
    RowMat x = m.mat().transpose();
    Vec v = Eigen::Map<const Vec>(x.data(), x.size());
    return Ket(m.in() + m.out(), v, Norm::unchecked);
}

Schmidt schmidt(const Ket& psi, const Labels& a) {
    Labels order = a;
    for (const auto& l : psi.space().labels())
        if (std::find(a.begin(), a.end(), l) == a.end()) order.push_back(l);
    Ket p = reorder(psi, order);
    const int da = psi.space().dim_of(a);
    const int db = psi.dim() / da;
    Eigen::Map<const RowMat> x(p.vec().data(), da, db);
    Eigen::JacobiSVD<Mat> svd(Mat(x), Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

double inner(const Ket& x, const Ket& y) {
    if (x.space() != y.space()) throw std::invalid_argument("inner: space mismatch");
    return std::abs(x.vec().dot(y.vec()));
}

}  // namespace qdec
