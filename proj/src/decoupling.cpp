#include "qdec/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qdec/entropy.hpp"

namespace qdec::decoupling {

CpMap CpMap::from_channel(const Channel& ch) { return {ch.in(), ch.out(), ch.kraus()}; }

bool CpMap::trace_preserving(double tol) const {
    Mat acc = Mat::Zero(dim_in(), dim_in());
    for (const auto& k : kraus) acc += k.adjoint() * k;
    return (acc - Mat::Identity(dim_in(), dim_in())).norm() <= tol;
}

Mat CpMap::apply(const Mat& m, int rest) const {
    const int dout = dim_out();
    Mat out = Mat::Zero(dout * rest, dout * rest);
    const Mat id = Mat::Identity(rest, rest);
    for (const auto& k : kraus) {
        Mat kk = kron(k, id);
        out += kk * m * kk.adjoint();
    }
    return out;
}

Mat choi_matrix(const CpMap& t) {
    const int da = t.dim_in(), de = t.dim_out();
    Mat out = Mat::Zero(da * de, da * de);
    for (const auto& k : t.kraus) {
        Vec v = Vec::Zero(da * de);
        for (int j = 0; j < da; ++j) v.segment(j * de, de) = k.col(j);
        v /= std::sqrt(double(da));
        out += v * v.adjoint();
    }
    return out;
}

SamplerKind sampler_from_string(const std::string& s) {
    if (s == "haar") return SamplerKind::haar;
    if (s == "clifford") return SamplerKind::clifford;
    throw std::invalid_argument("unknown sampler '" + s + "' (haar|clifford)");
}

std::string to_string(SamplerKind k) { return k == SamplerKind::haar ? "haar" : "clifford"; }

bool Experiment::bound_holds() const { return slack() >= 0; }

double Experiment::slack() const { return rhs + 3.0 * std / std::sqrt(double(std::max(n_samples, 1))) - mean; }

namespace {

void check_rho(const Mat& rho, const CpMap& t, int dim_r) {
    if (dim_r < 1 || rho.rows() != t.dim_in() * dim_r || rho.cols() != rho.rows())
        throw std::invalid_argument("decoupling: rho must act on A x R with A the map's input");
}

double smoothed_h2(const Mat& m, int da, int db, double eps) {
    if (eps == 0) return entropy::h_2_matrix(m, da, db).value;
    Space s{{"X", da}, {"Y", db}};
    return entropy::smooth(entropy::Kind::two, Density(s, m, Norm::unchecked), {"X"}, {"Y"}, eps).value;
}

double smoothed(entropy::Kind kind, const Mat& m, int da, int db, double eps) {
    if (eps == 0) {
        switch (kind) {
            case entropy::Kind::min: return entropy::h_min_matrix(m, da, db).value;
            case entropy::Kind::two: return entropy::h_2_matrix(m, da, db).value;
            case entropy::Kind::max: return entropy::h_max_matrix(m, da, db).value;
        }
    }
    Space s{{"X", da}, {"Y", db}};
    return entropy::smooth(kind, Density(s, m, Norm::unchecked), {"X"}, {"Y"}, eps).value;
}

Mat sample_unitary(SamplerKind kind, int d, Sampler& s) {
    if (kind == SamplerKind::haar) return haar_unitary(d, s);
    if (d == 2) return clifford_sample(1, s);
    if (d == 4) return clifford_sample(2, s);
    throw std::invalid_argument("clifford sampler needs |A| in {2, 4}");
}

void summarize(Experiment& e) {
    const double n = e.lhs.size();
    e.n_samples = static_cast<int>(e.lhs.size());
    e.mean = std::accumulate(e.lhs.begin(), e.lhs.end(), 0.0) / n;
    e.max = *std::max_element(e.lhs.begin(), e.lhs.end());
    double ss = 0;
    for (double x : e.lhs) ss += (x - e.mean) * (x - e.mean);
    e.std = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
}

}  // namespace

RhsTerms rhs_terms(const Mat& rho, int dim_r, const CpMap& t, double eps) {
    check_rho(rho, t, dim_r);
    RhsTerms r;
    r.h2_choi = smoothed_h2(choi_matrix(t), t.dim_in(), t.dim_out(), eps);
    r.h2_input = smoothed_h2(rho, t.dim_in(), dim_r, eps);
    r.value = std::exp2(-0.5 * r.h2_choi - 0.5 * r.h2_input) + 8.0 * eps;
    return r;
}

double rhs(const Mat& rho, int dim_r, const CpMap& t, double eps) { return rhs_terms(rho, dim_r, t, eps).value; }

double lhs_value(const Mat& rho, int dim_r, const CpMap& t, const Mat& u) {
    check_rho(rho, t, dim_r);
    const int da = t.dim_in();
    Mat omega_e = t.apply(Mat::Identity(da, da) / double(da), 1);
    Mat rho_r = partial_trace_keep(rho, {da, dim_r}, {1});
    Mat uu = kron(u, Mat::Identity(dim_r, dim_r));
    Mat out = t.apply(uu * rho * uu.adjoint(), dim_r);
    return trace_norm(out - kron(omega_e, rho_r));
}

Experiment lhs_mc(const Mat& rho, int dim_r, const CpMap& t, SamplerKind kind, int n_samples,
                  const Sampler& sampler, double eps) {
    if (n_samples < 1) throw std::invalid_argument("lhs_mc: need at least one sample");
    check_rho(rho, t, dim_r);
    Experiment e;
    e.sampler = kind;
    e.eps = eps;
    e.lhs.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        Sampler s = sampler.split(i);
        e.lhs[i] = lhs_value(rho, dim_r, t, sample_unitary(kind, t.dim_in(), s));
    }
    summarize(e);
    e.rhs = rhs(rho, dim_r, t, eps);
    return e;
}

Concentration concentration(const Mat& rho, int dim_r, const CpMap& t, int n_samples, double r,
                            const Sampler& sampler) {
    Experiment e = lhs_mc(rho, dim_r, t, SamplerKind::haar, n_samples, sampler);
    Concentration c;
    c.threshold = e.rhs + r;
    c.empirical_tail = double(std::count_if(e.lhs.begin(), e.lhs.end(), [&](double x) { return x >= c.threshold; })) /
                       n_samples;
    if (t.trace_preserving()) {
        c.k_constant = 1.0;
        c.k_exact = true;
    } else {
        c.k_constant = 0;
        for (const auto& k : t.kraus) c.k_constant += std::pow(operator_norm(k), 2);
        c.k_exact = false;
    }
    const int da = t.dim_in();
    const double rho_a = max_eigenvalue(partial_trace_keep(rho, {da, dim_r}, {0}));
    c.analytic_bound = std::min(1.0, 2.0 * std::exp(-da * r * r / (16.0 * c.k_constant * c.k_constant * rho_a)));
    return c;
}

Corollary corollary_from_string(const std::string& s) {
    if (s == "fqsw") return Corollary::fqsw;
    if (s == "merge") return Corollary::merge;
    if (s == "subspace") return Corollary::subspace;
    if (s == "projective_merge" || s == "projective-merge") return Corollary::projective_merge;
    throw std::invalid_argument("unknown corollary '" + s + "' (fqsw|merge|subspace|projective_merge)");
}

std::string to_string(Corollary c) {
    switch (c) {
        case Corollary::fqsw: return "fqsw";
        case Corollary::merge: return "merge";
        case Corollary::subspace: return "subspace";
        case Corollary::projective_merge: return "projective_merge";
    }
    return "?";
}

namespace {

// Rows [first, first + n) of the identity on C^d.
Mat block_selector(int d, int first, int n) {
    Mat s = Mat::Zero(n, d);
    for (int i = 0; i < n; ++i) s(i, first + i) = 1;
    return s;
}

}  // namespace

CpMap corollary_map(const CorollaryParams& p) {
    const int da = p.dim_a;
    if (da < 1 || p.split < 1 || p.split2 < 1) throw std::invalid_argument("corollary: dimensions must be positive");
    Space in{{"A", da}};
    switch (p.kind) {
        case Corollary::fqsw: {
            if (da % p.split != 0) throw std::invalid_argument("fqsw: |A1| must divide |A|");
            const int a2 = da / p.split;
            CpMap m = CpMap::from_channel(trace_out_channel(Space{{"A1", p.split}, {"A2", a2}}, {"A1"}));
            m.in = in;
            return m;
        }
        case Corollary::merge: {
            if (da % p.split != 0)
                throw std::invalid_argument("merge: |E| must divide |A| (the non-divisible case is not supported)");
            const int n = da / p.split;
            CpMap m{in, Space{{"E", p.split}, {"X", n}}, {}};
            for (int i = 0; i < n; ++i) {
                Vec ei = Vec::Zero(n);
                ei(i) = 1;
                m.kraus.push_back(kron(block_selector(da, i * p.split, p.split), Mat(ei)));
            }
            return m;
        }
        case Corollary::subspace: {
            if (p.split > da) throw std::invalid_argument("subspace: |E| must not exceed |A|");
            const double scale = std::sqrt(double(da) / p.split);
            return CpMap{in, Space{{"E", p.split}}, {scale * block_selector(da, 0, p.split)}};
        }
        case Corollary::projective_merge: {
            const int e = p.split * p.split2;
            if (e > da) throw std::invalid_argument("projective_merge: |E1||E2| must not exceed |A|");
            const double scale = std::sqrt(double(da) / e);
            Mat v = block_selector(da, 0, e);  // rows indexed e1 * |E2| + e2
            CpMap m{in, Space{{"E1", p.split}}, {}};
            for (int j = 0; j < p.split2; ++j) {
                Mat k(p.split, da);
                for (int e1 = 0; e1 < p.split; ++e1) k.row(e1) = v.row(e1 * p.split2 + j);
                m.kraus.push_back(scale * k);
            }
            return m;
        }
    }
    throw std::logic_error("corollary kind");
}

double corollary_rhs_closed(const CorollaryParams& p, double h2_input) {
    const double t = std::exp2(-h2_input);
    switch (p.kind) {
        case Corollary::fqsw: {
            const double a2 = double(p.dim_a) / p.split;
            return std::sqrt(p.split / a2 * t);
        }
        case Corollary::merge:
        case Corollary::subspace: return std::sqrt(p.split * t);
        case Corollary::projective_merge: return std::sqrt(double(p.split) / p.split2 * t);
    }
    throw std::logic_error("corollary kind");
}

CorollaryRun corollary_run(const CorollaryParams& p, const Sampler& sampler) {
    CorollaryRun run{corollary_map(p), Mat(), {}, 0, 0};
    if (p.rho) {
        run.rho = *p.rho;
    } else {
        Sampler s = sampler.split(0x5eed);
        run.rho = to_density(random_pure(Space{{"A", p.dim_a}, {"R", p.dim_r}}, s)).mat();
    }
    const RhsTerms terms = rhs_terms(run.rho, p.dim_r, run.map);
    run.rhs_generic = terms.value;
    run.rhs_closed = corollary_rhs_closed(p, terms.h2_input);
    run.experiment = lhs_mc(run.rho, p.dim_r, run.map, p.sampler, p.n_samples, sampler.split(1));
    return run;
}

double randomize_bound(double hmax, double h2, int k, double eps) {
    return 3.0 * std::exp2(0.5 * (hmax - h2 - k + 2.0 * std::log2(1.0 / eps))) + 2.0 * std::sqrt(27.0 * eps) +
           24.0 * eps;
}

Randomization randomize_destroy(const Mat& rho, int dim_a, int dim_b, int k, double eps, int n_search,
                                const Sampler& sampler, std::optional<int> subspace_dim) {
    if (k < 0) throw std::invalid_argument("randomize_destroy: k must be nonnegative");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("randomize_destroy: eps must lie in (0, 1)");
    if (rho.rows() != dim_a * dim_b) throw std::invalid_argument("randomize_destroy: rho must act on A x B");
    if (n_search < 1) throw std::invalid_argument("randomize_destroy: need at least one candidate unitary");
    Randomization out;
    out.hmax = smoothed(entropy::Kind::max, partial_trace_keep(rho, {dim_a, dim_b}, {0}), dim_a, 1, eps);
    out.h2 = smoothed(entropy::Kind::two, rho, dim_a, dim_b, eps);
    out.bound = randomize_bound(out.hmax, out.h2, k, eps);

    int d = 0;
    if (subspace_dim) {
        d = *subspace_dim;
    } else {
        const double want = std::exp2(out.hmax + 2.0 * std::log2(1.0 / eps));
        if (want > dim_a + 1e-9)
            throw std::invalid_argument("randomize_destroy: subspace dimension 2^{Hmax + 2 log(1/eps)} = " +
                                        std::to_string(want) + " exceeds |A| = " + std::to_string(dim_a));
        d = static_cast<int>(std::ceil(want - 1e-9));
    }
    if (d < 1 || d > dim_a) throw std::invalid_argument("randomize_destroy: subspace dimension must lie in [1, |A|]");
    if (std::ldexp(1.0, k) > double(d) * d)
        throw std::invalid_argument("randomize_destroy: 2^k unitaries need a subspace of dimension >= 2^{k/2}");
    out.subspace_dim = d;

    // Weyl operators on the first d basis vectors, identity on the rest.
    const auto weyl = weyl_operators(d);
    std::vector<Mat> v;
    for (long i = 0; i < (1L << k); ++i) {
        Mat full = Mat::Identity(dim_a, dim_a);
        full.topLeftCorner(d, d) = weyl[i];
        v.push_back(full);
    }
    out.target = Mat::Zero(dim_a, dim_a);
    out.target.topLeftCorner(d, d) = Mat::Identity(d, d) / double(d);
    const Mat target = kron(out.target, partial_trace_keep(rho, {dim_a, dim_b}, {1}));
    const Mat idb = Mat::Identity(dim_b, dim_b);

    auto residual_of = [&](const Mat& u) {
        Mat acc = Mat::Zero(rho.rows(), rho.cols());
        for (const auto& vi : v) {
            Mat w = kron(Mat(vi * u), idb);
            acc += w * rho * w.adjoint();
        }
        return trace_norm(acc / double(v.size()) - target);
    };

    out.residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_search; ++i) {
        Sampler s = sampler.split(i);
        Mat u = i == 0 ? Mat(Mat::Identity(dim_a, dim_a)) : haar_unitary(dim_a, s);
        double r = residual_of(u);
        if (r < out.residual) {
            out.residual = r;
            out.base = u;
        }
    }
    for (const auto& vi : v) out.unitaries.push_back(vi * out.base);
    return out;
}

}  // namespace qdec::decoupling
