#include "qdec/rates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qdec/entropy.hpp"

namespace qdec::rates {

bool Inequality::holds(const Point& p) const {
    double lhs = 0;
    for (const auto& [v, c] : coeffs) {
        auto it = p.find(v);
        lhs += c * (it == p.end() ? 0.0 : it->second);
    }
    return lhs < bound;
}

bool Region::contains(const Point& p) const {
    for (const auto& [v, x] : p)
        if (x < 0 && v.front() == 'Q') return false;
    return std::all_of(inequalities.begin(), inequalities.end(), [&](const Inequality& q) { return q.holds(p); });
}

double Region::assisted_sum() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : assisted) {
        bool all_q = std::all_of(variables.begin(), variables.end(), [&](const std::string& v) {
            return v.front() != 'Q' || q.coeffs.count(v);
        });
        if (all_q) best = std::min(best, q.bound);
    }
    return std::max(best, 0.0);
}

namespace {

double h(const Density& rho, const Labels& labels) {
    if (labels.empty()) return 0;
    return entropy::von_neumann(marginal(rho, labels).mat());
}

double mutual(const Density& rho, const Labels& a, const Labels& b) {
    Labels ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return h(rho, a) + h(rho, b) - h(rho, ab);
}

Labels concat(Labels a, const Labels& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Labels others(const Space& s, const Labels& used) {
    Labels out;
    for (const auto& l : s.labels())
        if (std::find(used.begin(), used.end(), l) == used.end()) out.push_back(l);
    return out;
}

Inequality ineq(std::string text, std::map<std::string, double> coeffs, double bound) {
    return Inequality{std::move(text), std::move(coeffs), bound};
}

void require_labels(const Space& s, const Labels& labels, const char* what) {
    for (const auto& l : labels)
        if (!s.contains(l)) throw std::invalid_argument(std::string(what) + ": missing label '" + l + "'");
}

// Corner points of {Q1, Q2 >= 0, Q1 < a, Q2 < b, Q1 + Q2 < c}.
std::vector<std::vector<double>> corners(double a, double b, double c) {
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    c = std::max(c, 0.0);
    const double qa = std::min(a, c), qb = std::min(b, c);
    std::vector<std::vector<double>> raw{{0, 0}, {qa, 0}, {qa, std::min(b, c - qa)}, {std::min(a, c - qb), qb},
                                         {0, qb}};
    std::vector<std::vector<double>> out;
    for (const auto& p : raw) {
        bool dup = std::any_of(out.begin(), out.end(), [&](const std::vector<double>& q) {
            return std::abs(q[0] - p[0]) < 1e-12 && std::abs(q[1] - p[1]) < 1e-12;
        });
        if (!dup) out.push_back(p);
    }
    return out;
}

Mat marginal_sum(const std::vector<Mat>& kraus, const Space& in, const Space& out, const Ket& psi,
                 const Labels& keep) {
    Mat acc;
    for (const auto& k : kraus) {
        Ket part = apply(Operator(in, out, k), psi);
        Mat m = marginal(part, keep).mat();
        if (acc.size() == 0)
            acc = m;
        else
            acc += m;
    }
    return acc;
}

std::string fresh_label(const std::vector<const Space*>& taken, const std::vector<std::string>& prefs) {
    for (const auto& p : prefs) {
        bool used = std::any_of(taken.begin(), taken.end(), [&](const Space* s) { return s->contains(p); });
        if (!used) return p;
    }
    throw std::invalid_argument("rates: could not pick a free label");
}

using Objective = std::function<double(const Mat&)>;

// Coordinate ascent over isometries by Givens rotations on pairs of rows.
Mat rotation_ascent(Mat v, const Objective& f, const SearchOptions& opt, double* value, long* evals) {
    const int n = static_cast<int>(v.rows());
    double best = f(v);
    ++*evals;
    double theta = opt.first_angle;
    int sweeps = 0;
    while (theta >= opt.last_angle && sweeps < opt.max_sweeps) {
        ++sweeps;
        bool improved = false;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (double phase : {0.0, M_PI / 2}) {
                    for (double sign : {1.0, -1.0}) {
                        const double c = std::cos(sign * theta), s = std::sin(sign * theta);
                        const cplx e = std::polar(1.0, phase);
                        Mat w = v;
                        w.row(i) = c * v.row(i) - s * std::conj(e) * v.row(j);
                        w.row(j) = s * e * v.row(i) + c * v.row(j);
                        const double val = f(w);
                        ++*evals;
                        if (val > best + 1e-13) {
                            best = val;
                            v = std::move(w);
                            improved = true;
                        }
                    }
                }
            }
        }
        if (!improved) theta /= 2;
    }
    *value = best;
    return v;
}

Optimum multi_start(int rows, int cols, const Objective& f, const std::function<Ket(const Mat&)>& to_ket,
                    const Sampler& sampler, const SearchOptions& opt) {
    if (opt.restarts < 1) throw std::invalid_argument("rates: at least one restart is needed");
    Optimum best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < opt.restarts; ++r) {
        Sampler s = sampler.split(static_cast<std::uint64_t>(r));
        double val = 0;
        Mat v = rotation_ascent(haar_isometry(rows, cols, s), f, opt, &val, &best.evaluations);
        best.restart_values.push_back(val);
        if (val > best.value) {
            best.value = val;
            best.sigma = to_ket(v);
        }
    }
    return best;
}

}  // namespace

Region ea_rate_point(const Channel& n, const Density& sigma) {
    const Labels in = n.in().labels();
    require_labels(sigma.space(), in, "ea_rate_point");
    const Labels a = others(sigma.space(), in);
    const Labels c = n.out().labels();
    Density omega = apply(n, sigma);

    const double ha = h(sigma, a);
    const double hc = h(omega, c);
    const double hac = h(omega, concat(a, c));
    const double coherent = hc - hac;
    const double mi = h(omega, a) + hc - hac;

    Region r;
    r.kind = "ea";
    r.variables = {"Q", "E"};
    r.quantities = {{"H(A)", ha}, {"I(A>C)", coherent}, {"I(A;C)", mi}};
    r.inequalities = {ineq("Q+E < H(A)", {{"Q", 1}, {"E", 1}}, ha),
                      ineq("Q-E < I(A>C)", {{"Q", 1}, {"E", -1}}, coherent)};
    r.assisted = {ineq("Q < I(A;C)/2", {{"Q", 1}}, mi / 2)};
    r.identity_gap = (ha + coherent) / 2 - mi / 2;
    r.vertices = {{mi / 2, (ha - coherent) / 2}};
    return r;
}

Region ea_rate_point(const Channel& n, const Ket& sigma) { return ea_rate_point(n, to_density(sigma)); }

Region sideinfo_rate(const Channel& n, const Ket& phi, const Density& sigma) {
    const Labels in = n.in().labels();
    require_labels(sigma.space(), in, "sideinfo_rate");
    Labels side;
    for (const auto& l : in)
        if (phi.space().contains(l)) side.push_back(l);
    if (side.size() != 1 || phi.space().size() != 2)
        throw std::invalid_argument("sideinfo_rate: phi must share exactly one label with the channel input");
    const Mat phi_s = marginal(phi, side).mat();
    const Mat sig_s = marginal(sigma, side).mat();
    if ((phi_s - sig_s).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("sideinfo_rate: sigma marginal on the side label differs from phi");

    const Labels a = others(sigma.space(), in);
    const Labels c = n.out().labels();
    Density omega = apply(n, sigma);

    const double has = h(sigma, concat(a, side)) - h(sigma, side);
    const double hc = h(omega, c);
    const double coherent = hc - h(omega, concat(a, c));
    const double mi_c = mutual(omega, a, c);
    const double mi_s = mutual(sigma, a, side);

    Region r;
    r.kind = "sideinfo";
    r.variables = {"Q", "E"};
    r.quantities = {{"H(A|S)", has}, {"I(A>C)", coherent}, {"I(A;C)", mi_c}, {"I(A;S)", mi_s}};
    r.inequalities = {ineq("Q+E < H(A|S)", {{"Q", 1}, {"E", 1}}, has),
                      ineq("Q-E < I(A>C)", {{"Q", 1}, {"E", -1}}, coherent)};
    r.assisted = {ineq("Q < [I(A;C)-I(A;S)]/2", {{"Q", 1}}, (mi_c - mi_s) / 2)};
    r.identity_gap = (has + coherent) / 2 - (mi_c - mi_s) / 2;
    r.vertices = {{(mi_c - mi_s) / 2, (has - coherent) / 2}};
    return r;
}

Region marton_region(const Channel& n, const Density& sigma, const Labels& messages) {
    if (messages.size() != 2) throw std::invalid_argument("marton_region: two message labels expected");
    if (n.out().size() != 2) throw std::invalid_argument("marton_region: channel needs outputs (C1, C2)");
    const Labels in = n.in().labels();
    require_labels(sigma.space(), concat(in, messages), "marton_region");
    const Labels a1{messages[0]}, a2{messages[1]};
    const Labels c1{n.out().labels()[0]}, c2{n.out().labels()[1]};
    Density omega = apply(n, sigma);

    const double h1 = h(omega, a1), h2 = h(omega, a2), h12 = h(omega, concat(a1, a2));
    const double coh1 = h(omega, c1) - h(omega, concat(a1, c1));
    const double coh2 = h(omega, c2) - h(omega, concat(a2, c2));
    const double i1 = mutual(omega, a1, c1);
    const double i2 = mutual(omega, a2, c2);
    const double i12 = h1 + h2 - h12;

    Region r;
    r.kind = "marton";
    r.variables = {"Q1", "E1", "Q2", "E2"};
    r.quantities = {{"H(A1)", h1},       {"H(A2)", h2},       {"H(A1A2)", h12}, {"I(A1>C1)", coh1},
                    {"I(A2>C2)", coh2}, {"I(A1;C1)", i1}, {"I(A2;C2)", i2},   {"I(A1;A2)", i12}};
    r.inequalities = {
        ineq("Q1+E1 < H(A1)", {{"Q1", 1}, {"E1", 1}}, h1),
        ineq("Q1-E1 < I(A1>C1)", {{"Q1", 1}, {"E1", -1}}, coh1),
        ineq("Q2+E2 < H(A2)", {{"Q2", 1}, {"E2", 1}}, h2),
        ineq("Q2-E2 < I(A2>C2)", {{"Q2", 1}, {"E2", -1}}, coh2),
        ineq("Q1+E1+Q2+E2 < H(A1A2)", {{"Q1", 1}, {"E1", 1}, {"Q2", 1}, {"E2", 1}}, h12),
    };
    const double sum = (i1 + i2 - i12) / 2;
    r.assisted = {ineq("Q1 < I(A1;C1)/2", {{"Q1", 1}}, i1 / 2), ineq("Q2 < I(A2;C2)/2", {{"Q2", 1}}, i2 / 2),
                  ineq("Q1+Q2 < [I(A1;C1)+I(A2;C2)-I(A1;A2)]/2", {{"Q1", 1}, {"Q2", 1}}, sum)};
    r.identity_gap = (h12 + coh1 + coh2) / 2 - sum;
    r.vertices = corners(i1 / 2, i2 / 2, sum);
    return r;
}

Optimum ea_optimize(const Channel& n, int dim_a, const Sampler& sampler, const SearchOptions& opt) {
    if (dim_a < 1) throw std::invalid_argument("ea_optimize: message dimension must be positive");
    const std::string a = fresh_label({&n.in(), &n.out()}, {"A", "M", "A0"});
    const Space space = Space{{a, dim_a}} + n.in();
    const Labels c = n.out().labels();
    auto to_ket = [&](const Mat& v) { return Ket(space, Vec(v.col(0)), Norm::unchecked); };
    Objective f = [&](const Mat& v) {
        Ket s = to_ket(v);
        Mat ac = marginal_sum(n.kraus(), n.in(), n.out(), s, concat({a}, c));
        const Dims d{dim_a, n.out().dim()};
        const double ha = entropy::von_neumann(partial_trace_keep(ac, d, {0}));
        const double hc = entropy::von_neumann(partial_trace_keep(ac, d, {1}));
        return (ha + hc - entropy::von_neumann(ac)) / 2;
    };
    return multi_start(space.dim(), 1, f, to_ket, sampler, opt);
}

Optimum sideinfo_optimize(const Channel& n, const Ket& phi, int dim_a, int dim_d, const Sampler& sampler,
                          const SearchOptions& opt) {
    if (dim_a < 1 || dim_d < 1) throw std::invalid_argument("sideinfo_optimize: dimensions must be positive");
    Labels side, rest;
    for (const auto& l : n.in().labels()) (phi.space().contains(l) ? side : rest).push_back(l);
    if (side.size() != 1 || phi.space().size() != 2)
        throw std::invalid_argument("sideinfo_optimize: phi must share exactly one label with the channel input");

    auto es = eigh(marginal(phi, side).mat());
    std::vector<int> support;
    for (int i = static_cast<int>(es.values.size()) - 1; i >= 0; --i)
        if (es.values(i) > 1e-12) support.push_back(i);
    const int k = static_cast<int>(support.size());

    const std::string a = fresh_label({&n.in(), &n.out()}, {"A", "M", "A0"});
    const std::string d = fresh_label({&n.in(), &n.out()}, {"D", "D0", "Dsc"});
    const Space body = Space{{a, dim_a}} + n.in().select(rest) + Space{{d, dim_d}};
    const Space space = body + n.in().select(side);
    const int ds = n.in().dim_of(side);
    if (k > body.dim()) throw std::invalid_argument("sideinfo_optimize: message and purifier too small for the side state");

    auto to_ket = [&](const Mat& v) {
        Vec out = Vec::Zero(space.dim());
        for (int j = 0; j < k; ++j) {
            const int s = support[j];
            out += std::sqrt(es.values(s)) * kron(Vec(v.col(j)), Vec(es.vectors.col(s)));
        }
        return Ket(space, out, Norm::unchecked);
    };
    const Labels c = n.out().labels();
    const Dims dac{dim_a, n.out().dim()};
    const Dims das{dim_a, ds};
    Objective f = [&](const Mat& v) {
        Ket s = to_ket(v);
        Mat ac = marginal_sum(n.kraus(), n.in(), n.out(), s, concat({a}, c));
        Mat as = marginal(s, concat({a}, side)).mat();
        const double ha = entropy::von_neumann(partial_trace_keep(ac, dac, {0}));
        const double hc = entropy::von_neumann(partial_trace_keep(ac, dac, {1}));
        const double hs = entropy::von_neumann(partial_trace_keep(as, das, {1}));
        const double mi_c = ha + hc - entropy::von_neumann(ac);
        const double mi_s = ha + hs - entropy::von_neumann(as);
        return (mi_c - mi_s) / 2;
    };
    return multi_start(body.dim(), k, f, to_ket, sampler, opt);
}

}  // namespace qdec::rates
