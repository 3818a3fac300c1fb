#include "qdec/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <ceres/ceres.h>

#include "qdec/metrics.hpp"

namespace qdec::entropy {

std::string to_string(Method m) {
    switch (m) {
        case Method::closed_form: return "closed-form";
        case Method::optimizer: return "optimizer";
        case Method::oracle: return "oracle";
    }
    return "unknown";
}

Kind kind_from_string(const std::string& s) {
    if (s == "hmin" || s == "min") return Kind::min;
    if (s == "h2" || s == "two") return Kind::two;
    if (s == "hmax" || s == "max") return Kind::max;
    throw std::invalid_argument("unknown entropy kind '" + s + "'");
}

double von_neumann(const Mat& rho) {
    auto es = eigh(rho);
    double h = 0;
    for (long i = 0; i < es.values.size(); ++i) h += shannon_term(es.values(i));
    return h;
}

namespace {

Report closed(double v) {
    Report r;
    r.value = v;
    r.method = Method::closed_form;
    return r;
}

double h_of(const Density& rho, const Labels& l) {
    if (l.empty()) return 0.0;
    return von_neumann(marginal(rho, l).mat());
}

Labels join(Labels a, const Labels& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Restrict the B factor to the support of rho^B: returns W (dB x r) and the compressed operator.
struct Compressed {
    Mat rho;
    Mat w;
    int r = 0;
};

Compressed compress_b(const Mat& rho, int dA, int dB) {
    Mat rb = partial_trace_keep(rho, {dA, dB}, {1});
    auto es = eigh(rb);
    const double cut = 1e-12 * std::max(1.0, rb.trace().real());
    std::vector<int> keep;
    for (int i = dB - 1; i >= 0; --i)
        if (es.values(i) > cut) keep.push_back(i);
    Compressed c;
    c.r = static_cast<int>(keep.size());
    c.w.resize(dB, c.r);
    for (int k = 0; k < c.r; ++k) c.w.col(k) = es.vectors.col(keep[k]);
    if (c.r == dB) {
        c.w = Mat::Identity(dB, dB);
        c.rho = rho;
        return c;
    }
    Mat big = kron(Mat::Identity(dA, dA), c.w);
    c.rho = big.adjoint() * rho * big;
    return c;
}

// Orthonormal Hermitian basis of r x r matrices under Re tr[X Y].
std::vector<Mat> hermitian_basis(int r) {
    std::vector<Mat> basis;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < r; ++i) {
        Mat e = Mat::Zero(r, r);
        e(i, i) = 1;
        basis.push_back(e);
    }
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            Mat e = Mat::Zero(r, r);
            e(i, j) = e(j, i) = s;
            basis.push_back(e);
            Mat f = Mat::Zero(r, r);
            f(i, j) = cplx(0, -s);
            f(j, i) = cplx(0, s);
            basis.push_back(f);
        }
    return basis;
}

Mat lift(const Mat& sigma, int dA) { return kron(Mat::Identity(dA, dA), sigma); }

bool positive_definite(const Mat& m, Eigen::LLT<Mat>* llt) {
    llt->compute(hermitize(m));
    return llt->info() == Eigen::Success;
}

struct BarrierResult {
    Mat sigma;
    double primal = 0;
    double dual = 0;
    int newton_steps = 0;
    double grad_norm = 0;
    bool converged = false;
};

// min tr sigma subject to I x sigma - rho > 0, log-barrier path following.
BarrierResult min_entropy_barrier(const Mat& rho, int dA, int r) {
    const auto basis = hermitian_basis(r);
    const int n = static_cast<int>(basis.size());
    const double m = double(dA) * r;
    BarrierResult out;

    Mat sigma = Mat::Identity(r, r) * (2.0 * std::max(max_eigenvalue(rho), 1e-300));
    double t = m / sigma.trace().real();
    Eigen::LLT<Mat> llt;
    auto objective = [&](const Mat& s, double tt, bool* ok) {
        Mat mm = lift(s, dA) - rho;
        if (!positive_definite(mm, &llt)) {
            *ok = false;
            return 0.0;
        }
        *ok = true;
        double logdet = 0;
        const Mat& l = llt.matrixL();
        for (long i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i).real());
        return tt * s.trace().real() - logdet;
    };

    const double gap_tol = 1e-11;
    for (int outer = 0; outer < 60; ++outer) {
        for (int it = 0; it < 200; ++it) {
            Mat mm = lift(sigma, dA) - rho;
            positive_definite(mm, &llt);
            Mat minv = llt.solve(Mat::Identity(mm.rows(), mm.cols()));
            Mat trinv = partial_trace_keep(minv, {dA, r}, {1});
            Eigen::VectorXd g(n);
            Eigen::MatrixXd h(n, n);
            std::vector<Mat> gl(n);
            for (int l = 0; l < n; ++l) {
                Mat y = minv * lift(basis[l], dA) * minv;
                gl[l] = partial_trace_keep(y, {dA, r}, {1});
            }
            for (int k = 0; k < n; ++k) {
                g(k) = t * basis[k].trace().real() - (trinv * basis[k]).trace().real();
                for (int l = 0; l < n; ++l) h(k, l) = (basis[k] * gl[l]).trace().real();
            }
            h = 0.5 * (h + h.transpose());
            Eigen::VectorXd step = -h.ldlt().solve(g);
            double dec = -g.dot(step);
            out.grad_norm = g.norm() / t;
            ++out.newton_steps;
            if (dec / 2 < 1e-12) break;
            Mat dir = Mat::Zero(r, r);
            for (int k = 0; k < n; ++k) dir += step(k) * basis[k];
            bool ok = false;
            const double f0 = objective(sigma, t, &ok);
            double s = 1.0;
            for (int ls = 0; ls < 60; ++ls, s *= 0.5) {
                double f1 = objective(sigma + s * dir, t, &ok);
                if (ok && f1 <= f0 - 0.25 * s * dec) break;
            }
            if (!ok) break;
            sigma = hermitize(sigma + s * dir);
        }
        if (m / t < gap_tol * sigma.trace().real()) {
            out.converged = true;
            break;
        }
        t *= 10.0;
    }

    // Dual certificate from the barrier: X = M^{-1}/t rescaled so that tr_A X = I exactly.
    Mat mm = lift(sigma, dA) - rho;
    positive_definite(mm, &llt);
    Mat x = llt.solve(Mat::Identity(mm.rows(), mm.cols())) / t;
    Mat y = partial_trace_keep(x, {dA, r}, {1});
    Mat yis = powm_psd(y, -0.5, 0.0);
    Mat scale = lift(yis, dA);
    Mat xf = scale * x * scale;
    out.sigma = sigma;
    out.primal = sigma.trace().real();
    out.dual = (rho * xf).trace().real();
    return out;
}

}  // namespace

Report entropy(const Density& rho, const Labels& a) { return closed(h_of(rho, a)); }

Report conditional_entropy(const Density& rho, const Labels& a, const Labels& b) {
    return closed(h_of(rho, join(a, b)) - h_of(rho, b));
}

Report mutual_information(const Density& rho, const Labels& a, const Labels& b) {
    return closed(h_of(rho, a) + h_of(rho, b) - h_of(rho, join(a, b)));
}

Report conditional_mutual_information(const Density& rho, const Labels& a, const Labels& b, const Labels& c) {
    return closed(h_of(rho, join(a, c)) + h_of(rho, join(b, c)) - h_of(rho, join(join(a, b), c)) - h_of(rho, c));
}

Report coherent_information(const Density& rho, const Labels& a, const Labels& b) {
    return closed(-conditional_entropy(rho, a, b).value);
}

Report h_min_matrix(const Mat& rho_in, int dA, int dB) {
    const double tr = rho_in.trace().real();
    if (tr <= 0) throw std::invalid_argument("h_min: zero operator");
    Mat rho = hermitize(rho_in) / tr;
    const double shift = -std::log2(tr);
    if (dB == 1) return closed(-std::log2(max_eigenvalue(rho)) + shift);
    auto c = compress_b(rho, dA, dB);
    if (c.r == 1) {
        // sigma is a scalar: the smallest c with c I >= rho^A-part.
        return closed(-std::log2(max_eigenvalue(c.rho)) + shift);
    }
    auto b = min_entropy_barrier(c.rho, dA, c.r);
    Report rep;
    rep.method = Method::optimizer;
    rep.value = -std::log2(b.primal) + shift;
    rep.iterations = b.newton_steps;
    rep.gradient_norm = b.grad_norm;
    rep.certified_gap = b.dual > 0 ? std::log2(b.primal / b.dual) : std::numeric_limits<double>::infinity();
    rep.converged = b.converged && rep.certified_gap < 1e-6;
    return rep;
}

namespace {

// log tr[sigma^{-1/2} rho sigma^{-1/2} rho] over sigma = G^dag G / tr(G^dag G).
class CollisionCost final : public ceres::FirstOrderFunction {
public:
    CollisionCost(Mat rho, int dA, int r) : rho_(std::move(rho)), dA_(dA), r_(r) {}

    int NumParameters() const override { return 2 * r_ * r_; }

    bool Evaluate(const double* x, double* cost, double* gradient) const override {
        Mat g = unpack(x);
        const double s = (g.adjoint() * g).trace().real();
        if (!(s > 0)) return false;
        Mat sigma = hermitize(g.adjoint() * g / s);
        auto es = eigh(sigma);
        RVec lam = es.values.cwiseMax(1e-12);
        RVec f = lam.unaryExpr([](double v) { return 1.0 / std::sqrt(v); });
        Mat sis = es.vectors * f.cast<cplx>().asDiagonal() * es.vectors.adjoint();
        // xs = rho (1 x sis), one column block at a time
        Mat xs(rho_.rows(), rho_.cols());
        for (int a = 0; a < dA_; ++a) xs.middleCols(a * r_, r_) = rho_.middleCols(a * r_, r_) * sis;
        const double val = xs.cwiseProduct(xs.transpose()).sum().real();
        if (!(val > 0)) return false;
        *cost = std::log(val);
        if (gradient) {
            Mat gb = Mat::Zero(r_, r_);  // tr_A[xs rho]
            for (int a = 0; a < dA_; ++a)
                gb += xs.middleRows(a * r_, r_) * rho_.middleCols(a * r_, r_);
            Mat gt = es.vectors.adjoint() * gb * es.vectors;
            for (int i = 0; i < r_; ++i)
                for (int j = 0; j < r_; ++j) {
                    double dd;
                    if (std::abs(lam(i) - lam(j)) > 1e-9 * std::max(lam(i), lam(j)))
                        dd = (f(i) - f(j)) / (lam(i) - lam(j));
                    else
                        dd = -0.5 * std::pow(0.5 * (lam(i) + lam(j)), -1.5);
                    gt(i, j) *= dd;
                }
            Mat gamma = 2.0 * es.vectors * gt * es.vectors.adjoint() / val;
            const double cc = (gamma * sigma).trace().real();
            Mat grad = (2.0 / s) * (g * gamma - cc * g);
            for (int j = 0; j < r_; ++j)
                for (int i = 0; i < r_; ++i) {
                    gradient[j * r_ + i] = grad(i, j).real();
                    gradient[r_ * r_ + j * r_ + i] = grad(i, j).imag();
                }
        }
        return true;
    }

    Mat unpack(const double* x) const {
        Mat g(r_, r_);
        for (int j = 0; j < r_; ++j)
            for (int i = 0; i < r_; ++i) g(i, j) = cplx(x[j * r_ + i], x[r_ * r_ + j * r_ + i]);
        return g;
    }

private:
    Mat rho_;
    int dA_;
    int r_;
};

}  // namespace

Report h_2_matrix(const Mat& rho_in, int dA, int dB) {
    const double tr = rho_in.trace().real();
    if (tr <= 0) throw std::invalid_argument("h_2: zero operator");
    Mat rho = hermitize(rho_in) / tr;
    const double shift = -2.0 * std::log2(tr);
    if (dB == 1) return closed(-std::log2(rho.squaredNorm()) + shift);
    auto c = compress_b(rho, dA, dB);
    if (c.r == 1) return closed(-std::log2((c.rho * c.rho).trace().real()) + shift);

    const int r = c.r;
    Mat start = sqrtm_psd(partial_trace_keep(c.rho, {dA, r}, {1}));
    std::vector<double> x(2 * r * r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) {
            x[j * r + i] = start(i, j).real();
            x[r * r + j * r + i] = start(i, j).imag();
        }
    auto* cost = new CollisionCost(c.rho, dA, r);
    ceres::GradientProblem problem(cost);
    ceres::GradientProblemSolver::Options opts;
    opts.line_search_direction_type = ceres::LBFGS;
    opts.max_num_iterations = 2000;
    opts.function_tolerance = 1e-15;
    opts.gradient_tolerance = 1e-13;
    opts.parameter_tolerance = 1e-15;
    opts.logging_type = ceres::SILENT;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, x.data(), &summary);

    double val = 0;
    std::vector<double> grad(x.size());
    cost->Evaluate(x.data(), &val, grad.data());
    double gn = 0;
    for (double v : grad) gn = std::max(gn, std::abs(v));

    Report rep;
    rep.method = Method::optimizer;
    rep.value = -val / std::log(2.0) + shift;
    rep.iterations = static_cast<int>(summary.iterations.size());
    rep.gradient_norm = gn;
    rep.converged = summary.termination_type == ceres::CONVERGENCE;
    return rep;
}

Report h_max_matrix(const Mat& rho_in, int dA, int dB) {
    const double tr = rho_in.trace().real();
    if (tr <= 0) throw std::invalid_argument("h_max: zero operator");
    Mat rho = hermitize(rho_in);
    if (dB == 1) {
        auto es = eigh(rho);
        double s = 0;
        for (long i = 0; i < es.values.size(); ++i) s += std::sqrt(std::max(0.0, es.values(i)));
        return closed(2.0 * std::log2(s));
    }
    Ket psi = purify(Density(Space{{"A", dA}, {"B", dB}}, rho, Norm::unchecked), "C");
    Density ac = marginal(psi, {"A", "C"});
    Report dual = h_min_matrix(ac.mat(), dA, ac.space().dim_of("C"));
    dual.value = -dual.value;
    return dual;
}

namespace {

Mat ordered_matrix(const Density& rho, const Labels& a, const Labels& b, int* dA, int* dB) {
    if (a.empty()) throw std::invalid_argument("entropy: empty system");
    *dA = rho.space().dim_of(a);
    *dB = b.empty() ? 1 : rho.space().dim_of(b);
    return marginal(rho, join(a, b)).mat();
}

}  // namespace

Report h_min(const Density& rho, const Labels& a, const Labels& b) {
    int da, db;
    Mat m = ordered_matrix(rho, a, b, &da, &db);
    return h_min_matrix(m, da, db);
}

Report h_2(const Density& rho, const Labels& a, const Labels& b) {
    int da, db;
    Mat m = ordered_matrix(rho, a, b, &da, &db);
    return h_2_matrix(m, da, db);
}

Report h_max(const Density& rho, const Labels& a, const Labels& b) {
    int da, db;
    Mat m = ordered_matrix(rho, a, b, &da, &db);
    return h_max_matrix(m, da, db);
}

namespace {

Report evaluate(Kind kind, const Mat& m, int da, int db) {
    switch (kind) {
        case Kind::min: return h_min_matrix(m, da, db);
        case Kind::two: return h_2_matrix(m, da, db);
        case Kind::max: return h_max_matrix(m, da, db);
    }
    throw std::logic_error("entropy kind");
}

// Largest parameter in [0, hi] whose member stays in the ball; members shrink monotonically.
template <class Make>
double saturate(const Mat& center, double eps, double hi, Make make) {
    if (fidelity_distance(center, make(hi)) <= eps) return hi;
    double lo = 0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (fidelity_distance(center, make(mid)) <= eps) lo = mid;
        else hi = mid;
    }
    return lo;
}

Mat drop_tail(const EigenSystem& es, double mass) {
    // Remove eigenvalues from the bottom up to total weight mass (partial removal of the last one).
    RVec v = es.values;
    double left = mass;
    for (long i = 0; i < v.size() && left > 0; ++i) {
        double take = std::min(v(i), left);
        v(i) -= take;
        left -= take;
    }
    return es.vectors * v.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

Mat clip_top(const EigenSystem& es, double level) {
    RVec v = es.values.unaryExpr([=](double x) { return std::min(x, level); });
    return es.vectors * v.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

}  // namespace

Report smooth(Kind kind, const Density& rho, const Labels& a, const Labels& b, double eps) {
    if (eps < 0 || eps > 1) throw std::invalid_argument("smooth: eps must lie in [0, 1]");
    int da, db;
    Mat center = ordered_matrix(rho, a, b, &da, &db);
    Labels order = join(a, b);
    Space space = rho.space().select(order);

    Report best = evaluate(kind, center, da, db);
    best.strategy = "none";
    best.member = Density(space, center, Norm::unchecked);
    if (eps == 0) return best;

    auto consider = [&](const Mat& member, const std::string& name) {
        double dist = fidelity_distance(center, member);
        if (dist > eps + 1e-12 || member.trace().real() <= 1e-12) return;
        Report r = evaluate(kind, member, da, db);
        bool better = kind == Kind::max ? r.value < best.value : r.value > best.value;
        if (better) {
            r.strategy = name;
            r.member = Density(space, member, Norm::unchecked);
            r.member_distance = dist;
            best = r;
        }
    };

    auto es = eigh(center);
    const double total = center.trace().real();
    // (a) eigenvalue truncation: drop the tail, and for min/two also clip the top.
    double mass = saturate(center, eps, total, [&](double p) { return drop_tail(es, p); });
    consider(drop_tail(es, mass), "eigenvalue-truncation");
    if (kind != Kind::max) {
        const double top = es.values.maxCoeff();
        // parameter is the amount removed from the top level
        double cut = saturate(center, eps, top, [&](double p) { return clip_top(es, top - p); });
        consider(clip_top(es, top - cut), "eigenvalue-clipping");
        // (b) conditional flattening toward pi^A x rho^B.
        Mat rb = partial_trace_keep(center, {da, db}, {1});
        Mat flat = kron(Mat::Identity(da, da) / double(da), rb);
        double lam = saturate(center, eps, 1.0, [&](double p) { return Mat((1 - p) * center + p * flat); });
        consider((1 - lam) * center + lam * flat, "conditional-flattening");
    }
    return best;
}

double aep_min_copies(double eps) { return 8.0 / 5.0 * std::log2(2.0 / (eps * eps)); }

double aep_bound(double h_ab, int dim_a, int n, double eps) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("aep: eps must lie in (0, 1)");
    if (n < aep_min_copies(eps))
        throw std::invalid_argument("aep: need n >= (8/5) log(2/eps^2) = " + std::to_string(aep_min_copies(eps)));
    const double eta = 2.0 * std::sqrt(double(dim_a)) + 1.0;
    return h_ab - 4.0 * std::log2(eta) * std::sqrt(std::log2(2.0 / (eps * eps)) / n);
}

}  // namespace qdec::entropy
