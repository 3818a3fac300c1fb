#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "criteria.hpp"
#include "qdec/coding.hpp"
#include "qdec/decoupling.hpp"
#include "qdec/entropy.hpp"
#include "qdec/locking.hpp"
#include "qdec/random.hpp"
#include "qdec/rates.hpp"
#include "svg.hpp"

namespace qdec::cli {

namespace {

using io::json;

std::string cell(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::string& input(const ExperimentConfig& c, const std::string& role) {
    auto it = c.inputs.find(role);
    if (it == c.inputs.end()) throw io::InputError(c.command + ": missing input file for '" + role + "'");
    return it->second;
}

bool has_input(const ExperimentConfig& c, const std::string& role) { return c.inputs.count(role) > 0; }

template <class T>
T param(const ExperimentConfig& c, const char* key, T fallback) {
    if (!c.params.contains(key)) return fallback;
    try {
        return c.params.at(key).get<T>();
    } catch (const json::exception&) {
        throw io::InputError(c.command + ": bad value for parameter '" + key + "'");
    }
}

int positive(const ExperimentConfig& c, const char* key, int fallback) {
    const int v = param<int>(c, key, fallback);
    if (v < 1) throw io::InputError(c.command + ": parameter '" + key + "' must be positive");
    return v;
}

Sampler root(const ExperimentConfig& c) { return Sampler(c.seed.value_or(0)); }

json report_json(const entropy::Report& r) {
    json j;
    j["value"] = r.value;
    j["method"] = entropy::to_string(r.method);
    j["iterations"] = r.iterations;
    j["gradient_norm"] = r.gradient_norm;
    j["certified_gap"] = r.certified_gap;
    j["converged"] = r.converged;
    if (!r.strategy.empty()) j["smoothing_strategy"] = r.strategy;
    if (r.member) j["smoothing_distance"] = r.member_distance;
    return j;
}

json inequalities_json(const std::vector<rates::Inequality>& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back({{"text", q.text}, {"coeffs", q.coeffs}, {"bound", q.bound}});
    return a;
}

json region_json(const rates::Region& r) {
    json j;
    j["kind"] = r.kind;
    j["variables"] = r.variables;
    j["inequalities"] = inequalities_json(r.inequalities);
    j["assisted"] = inequalities_json(r.assisted);
    j["quantities"] = r.quantities;
    j["identity_gap"] = r.identity_gap;
    j["vertices"] = r.vertices;
    j["assisted_sum"] = r.assisted_sum();
    return j;
}

// Down-closed region in the first quadrant spanned by the corner points.
std::vector<std::array<double, 2>> down_closure(const std::vector<std::vector<double>>& corners) {
    std::vector<std::array<double, 2>> pts{{0, 0}};
    for (const auto& v : corners) {
        if (v.size() < 2) continue;
        const double x = std::max(0.0, v[0]), y = std::max(0.0, v[1]);
        pts.push_back({x, y});
        pts.push_back({x, 0});
        pts.push_back({0, y});
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const auto& o, const auto& a, const auto& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// ---- entropy

Outcome run_entropy(const ExperimentConfig& c) {
    const Density rho = io::density_from_json(io::read_file(input(c, "state")));
    const std::string kind = param<std::string>(c, "kind", "hmin");
    Labels a = param<Labels>(c, "a", {});
    const Labels b = param<Labels>(c, "b", {});
    if (a.empty()) a = {rho.space().labels().front()};

    entropy::Report r;
    if (kind == "vn") {
        r = b.empty() ? entropy::entropy(rho, a) : entropy::conditional_entropy(rho, a, b);
    } else {
        r = entropy::smooth(entropy::kind_from_string(kind), rho, a, b, c.eps);
    }
    Outcome o;
    o.result = report_json(r);
    o.result["kind"] = kind;
    o.result["a"] = a;
    o.result["b"] = b;
    o.result["eps"] = c.eps;
    return o;
}

// ---- decouple

Outcome run_decouple(const ExperimentConfig& c) {
    using namespace decoupling;
    CorollaryParams p;
    p.kind = corollary_from_string(param<std::string>(c, "corollary", "fqsw"));
    p.dim_a = positive(c, "dim_a", 4);
    p.split = positive(c, "split", 2);
    p.split2 = positive(c, "split2", 1);
    p.dim_r = positive(c, "dim_r", 2);
    p.sampler = sampler_from_string(param<std::string>(c, "sampler", "haar"));
    p.n_samples = c.samples > 0 ? c.samples : 500;

    Sampler s = root(c);
    Mat rho;
    if (has_input(c, "state")) {
        const Density d = io::density_from_json(io::read_file(input(c, "state")));
        const auto labels = d.space().labels();
        if (labels.size() != 2) throw io::InputError("decouple: the state must have two labels, system then reference");
        p.dim_a = d.space().dim_of(labels[0]);
        p.dim_r = d.space().dim_of(labels[1]);
        rho = d.mat();
    } else {
        rho = to_density(random_pure(Space{{"A", p.dim_a}, {"R", p.dim_r}}, s)).mat();
    }
    const CpMap map = corollary_map(p);
    const Experiment e = lhs_mc(rho, p.dim_r, map, p.sampler, p.n_samples, s.split(1), c.eps);
    const RhsTerms terms = rhs_terms(rho, p.dim_r, map);

    Outcome o;
    json& j = o.result;
    j["corollary"] = to_string(p.kind);
    j["sampler"] = to_string(p.sampler);
    j["dims"] = {{"A", p.dim_a}, {"R", p.dim_r}, {"split", p.split}, {"split2", p.split2}};
    j["samples"] = e.n_samples;
    j["eps"] = e.eps;
    j["lhs"] = {{"mean", e.mean}, {"std", e.std}, {"max", e.max}};
    j["rhs"] = e.rhs;
    j["rhs_unsmoothed"] = terms.value;
    j["rhs_closed_form"] = corollary_rhs_closed(p, terms.h2_input);
    j["h2_choi"] = terms.h2_choi;
    j["h2_input"] = terms.h2_input;
    j["slack"] = e.slack();
    j["bound_holds"] = e.bound_holds();
    o.bounds_hold = e.bound_holds();
    o.samples.header = {"sample", "lhs"};
    for (std::size_t i = 0; i < e.lhs.size(); ++i) o.samples.rows.push_back({std::to_string(i), cell(e.lhs[i])});
    o.svg = svg::histogram(e.lhs, "decoupling distance, " + to_string(p.kind), "trace distance", e.rhs);
    return o;
}

// ---- code

coding::Roles roles_param(const ExperimentConfig& c, const char* key, coding::Roles fallback) {
    const auto v = param<std::vector<std::string>>(c, key, {});
    if (v.empty()) return fallback;
    if (v.size() != 3) throw io::InputError("code: roles need three labels (message, receiver, reference)");
    return {v[0], v[1], v[2]};
}

json artifact_json(const coding::CodeArtifact& a) {
    json j;
    j["kind"] = a.kind;
    j["eps"] = a.eps;
    j["delta1"] = a.delta1;
    j["delta2"] = a.delta2;
    if (a.kind == "broadcast") j["delta_enc"] = a.delta_enc;
    j["theorem_bound"] = a.theorem_bound;
    j["achieved"] = a.achieved;
    j["certified"] = a.certified();
    j["sound"] = a.sound();
    j["samples_used"] = a.samples_used;
    j["encoder_distance"] = a.encoder_distance;
    j["decoupling_distances"] = a.decoupling_distances;
    j["entropies"] = a.entropies;
    return j;
}

Outcome run_code(const ExperimentConfig& c) {
    using namespace coding;
    SearchOptions opt;
    opt.first_round = positive(c, "first_round", opt.first_round);
    opt.max_round = positive(c, "max_round", opt.max_round);
    const Sampler s = root(c);

    CodeArtifact art;
    const std::string preset = param<std::string>(c, "preset", "");
    if (preset == "identity") {
        const int dm = positive(c, "message_dim", 4), din = positive(c, "input_dim", 16);
        art = oneshot_code(maximally_entangled("A", "B", dm), identity_channel(Space{{"A'", din}}),
                           maximally_entangled("A''", "A'", din), c.eps, s, {}, opt);
    } else if (!preset.empty()) {
        throw io::InputError("code: unknown preset '" + preset + "'");
    } else {
        const Ket psi = io::ket_from_json(io::read_file(input(c, "message")));
        const Channel n = io::channel_from_json(io::read_file(input(c, "channel")));
        const Ket sigma = io::ket_from_json(io::read_file(input(c, "sigma")));
        const Roles r1 = roles_param(c, "roles", {});
        if (has_input(c, "message2")) {
            const Ket psi2 = io::ket_from_json(io::read_file(input(c, "message2")));
            art = broadcast_oneshot_code(psi, psi2, n, sigma, c.eps, s, r1,
                                         roles_param(c, "roles2", Roles{"A2", "B2", "R2"}), opt);
        } else if (has_input(c, "side")) {
            const Ket phi = io::ket_from_json(io::read_file(input(c, "side")));
            art = sideinfo_oneshot_code(psi, n, phi, sigma, c.eps, s, r1, opt);
        } else {
            art = oneshot_code(psi, n, sigma, c.eps, s, r1, opt);
        }
    }
    Outcome o;
    o.result = artifact_json(art);
    o.bounds_hold = art.sound(c.tolerance);
    o.extras["encoder"] = io::to_json(art.encoder);
    for (std::size_t i = 0; i < art.decoders.size(); ++i)
        o.extras["decoder" + std::to_string(i + 1)] = io::to_json(art.decoders[i]);
    o.extras["recovered"] = io::to_json(art.recovered);
    return o;
}

// ---- rate

Outcome run_rate(const ExperimentConfig& c) {
    using namespace rates;
    const Channel n = io::channel_from_json(io::read_file(input(c, "channel")));
    const bool optimize = param<bool>(c, "optimize", false);
    const bool side = has_input(c, "side");
    const bool marton = n.out().size() == 2 && !side;

    Outcome o;
    Region r;
    if (optimize) {
        if (marton) throw io::InputError("rate: optimization covers the single-receiver regions only");
        SearchOptions opt;
        opt.restarts = positive(c, "restarts", 8);
        const int dim_a = positive(c, "dim_a", 2);
        const Sampler s = root(c);
        Optimum best;
        if (side) {
            const Ket phi = io::ket_from_json(io::read_file(input(c, "side")));
            best = sideinfo_optimize(n, phi, dim_a, positive(c, "dim_d", 1), s, opt);
            Labels keep{"A"};
            for (const auto& l : n.in().labels()) keep.push_back(l);
            r = sideinfo_rate(n, phi, marginal(best.sigma, keep));
        } else {
            best = ea_optimize(n, dim_a, s, opt);
            r = ea_rate_point(n, best.sigma);
        }
        o.result["optimum"] = {{"value", best.value},
                               {"label", best.label},
                               {"restart_values", best.restart_values},
                               {"evaluations", best.evaluations}};
        o.extras["sigma"] = io::to_json(best.sigma);
        o.samples.header = {"restart", "value"};
        for (std::size_t i = 0; i < best.restart_values.size(); ++i)
            o.samples.rows.push_back({std::to_string(i), cell(best.restart_values[i])});
    } else {
        const Density sigma = io::density_from_json(io::read_file(input(c, "sigma")));
        if (side) {
            r = sideinfo_rate(n, io::ket_from_json(io::read_file(input(c, "side"))), sigma);
        } else if (marton) {
            r = marton_region(n, sigma, param<Labels>(c, "messages", {"A1", "A2"}));
        } else {
            r = ea_rate_point(n, sigma);
        }
    }
    o.result["region"] = region_json(r);
    o.result["identity_holds"] = std::abs(r.identity_gap) <= c.tolerance;
    o.bounds_hold = std::abs(r.identity_gap) <= c.tolerance;
    if (r.kind == "marton")
        o.svg = svg::region(down_closure(r.vertices), "assisted region", "Q1 (qubits)", "Q2 (qubits)");
    return o;
}

// ---- lock

Outcome run_lock(const ExperimentConfig& c) {
    using namespace locking;
    const int n = positive(c, "messages", 16), dc = positive(c, "dim_c", 8), dk = positive(c, "dim_k", 2);
    const int restarts = positive(c, "restarts", 64), iterations = positive(c, "iterations", 2000);
    Sampler s = root(c);
    const Scheme sc = build_scheme(n, dc, dk, s);
    const Leakage l = leakage(sc, restarts, iterations, s.split(1));
    const double log2n = std::log2(double(n));
    const double mi = mutual_information(outcome_distribution(sc, l.basis));
    const double bound = accessible_info_bound(l.value, log2n);

    Outcome o;
    json& j = o.result;
    j["messages"] = n;
    j["dim_c"] = dc;
    j["dim_k"] = dk;
    j["restarts"] = restarts;
    j["iterations"] = iterations;
    j["leakage"] = l.value;
    j["leakage_label"] = "lower bound";
    j["min_pairwise_distance"] = pairwise_min_distance(sc);
    j["min_pairwise_guess"] = pairwise_min_guess(sc);
    j["mutual_information"] = mi;
    j["accessible_info_bound"] = bound;
    if (c.eps > 0) {
        const KeyRequirement k = key_requirement(log2n, c.eps);
        j["key_requirement"] = {{"eps", c.eps},
                                {"key_dim", k.key_dim},
                                {"eps_in_range", k.eps_in_range},
                                {"enough_messages", k.enough_messages}};
    }
    o.bounds_hold = mi <= bound + c.tolerance;
    o.samples.header = {"restart", "leakage"};
    for (std::size_t i = 0; i < l.restart_values.size(); ++i)
        o.samples.rows.push_back({std::to_string(i), cell(l.restart_values[i])});
    o.svg = svg::histogram(l.restart_values, "leakage over restarts", "trace distance", 2.0 * (n - 1) / n);
    o.extras["basis"] = {{"matrix", io::matrix_to_json(l.basis)}};
    return o;
}

// ---- moments

Outcome run_moments(const ExperimentConfig& c) {
    const int d = positive(c, "dim", 2);
    const std::string kind = param<std::string>(c, "sampler", "haar");
    const int n = c.samples > 0 ? c.samples : 10000;
    const int qubits = d == 2 ? 1 : d == 4 ? 2 : 0;
    if (kind != "haar" && kind != "clifford") throw io::InputError("moments: sampler must be haar or clifford");
    if (kind == "clifford" && qubits == 0) throw io::InputError("moments: clifford sampling needs dim 2 or 4");

    Sampler s = root(c);
    const Mat m = ginibre(d * d, d * d, s);
    const SecondMoment closed = haar_second_moment(m, d);
    const Mat f = swap_operator(d);
    Mat sum = Mat::Zero(d * d, d * d);
    double sq = 0;
    std::vector<double> observable;
    Sampler draws = s.split(1);
    for (int t = 0; t < n; ++t) {
        const Mat u = kind == "haar" ? haar_unitary(d, draws) : clifford_sample(qubits, draws);
        const Mat uu = kron(u, u);
        const Mat x = uu * m * uu.adjoint();
        sum += x;
        sq += x.squaredNorm();
        observable.push_back((f * x).trace().real());
    }
    const Mat mean = sum / double(n);
    const double se = std::sqrt(std::max(0.0, sq / n - mean.squaredNorm()) / n);
    const double dev = (mean - closed.value).norm();

    Outcome o;
    json& j = o.result;
    j["dim"] = d;
    j["sampler"] = kind;
    j["samples"] = n;
    j["alpha"] = {closed.alpha.real(), closed.alpha.imag()};
    j["beta"] = {closed.beta.real(), closed.beta.imag()};
    j["deviation"] = dev;
    j["three_sigma"] = 3 * se;
    j["within_three_sigma"] = dev <= 3 * se;
    if (qubits > 0) {
        const double err = (clifford_second_moment(m, qubits) - closed.value).cwiseAbs().maxCoeff();
        j["clifford_exact_error"] = err;
        o.bounds_hold = err <= c.tolerance;
    }
    o.bounds_hold = o.bounds_hold && dev <= 3 * se;
    o.samples.header = {"sample", "re_tr_swap_x"};
    for (int t = 0; t < n; ++t) o.samples.rows.push_back({std::to_string(t), cell(observable[t])});
    o.svg = svg::histogram(observable, "Re tr[F U M U^dag], U = V x V", "value",
                           (f * closed.value).trace().real());
    return o;
}

// ---- suite

Outcome run_suite(const ExperimentConfig& c) {
    std::vector<int> ids = param<std::vector<int>>(c, "criteria", {});
    if (ids.empty())
        for (int i = 1; i <= acceptance::kCriteria; ++i) ids.push_back(i);
    Outcome o;
    o.result["seed"] = *c.seed;
    o.result["criteria"] = json::array();
    o.samples.header = {"criterion", "title", "pass"};
    for (int id : ids) {
        if (id < 1 || id > acceptance::kCriteria) throw io::InputError("suite: no criterion " + std::to_string(id));
        const auto r = acceptance::run(id, *c.seed);
        std::fprintf(stderr, "%s %d %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
        o.result["criteria"].push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        o.samples.rows.push_back({std::to_string(r.id), r.title, r.pass ? "1" : "0"});
        o.bounds_hold = o.bounds_hold && r.pass;
    }
    o.result["all_pass"] = o.bounds_hold;
    return o;
}

}  // namespace

Outcome run(const ExperimentConfig& c) {
    c.validate();
    if (c.command == "entropy") return run_entropy(c);
    if (c.command == "decouple") return run_decouple(c);
    if (c.command == "code") return run_code(c);
    if (c.command == "rate") return run_rate(c);
    if (c.command == "lock") return run_lock(c);
    if (c.command == "moments") return run_moments(c);
    return run_suite(c);
}

}  // namespace qdec::cli
