#include "qdec/coding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qdec/entropy.hpp"
#include "qdec/metrics.hpp"

namespace qdec::coding {

double oneshot_bound(double delta1, double delta2) { return 2.0 * std::sqrt(2.0 * std::sqrt(delta1) + delta2); }

double broadcast_bound(double delta_enc, double delta1, double delta2) {
    const double e = 2.0 * std::sqrt(delta_enc);
    return 4.0 * std::sqrt(e + delta1) + 2.0 * std::sqrt(e + delta2);
}

namespace {

using Renames = std::map<std::string, std::string>;

Space renamed(const Space& s, const Renames& names) {
    std::vector<Subsystem> parts;
    for (const auto& p : s.parts()) {
        auto it = names.find(p.label);
        parts.push_back({it == names.end() ? p.label : it->second, p.dim});
    }
    return Space(parts);
}

Ket renamed(const Ket& k, const Renames& names) { return Ket(renamed(k.space(), names), k.vec(), Norm::unchecked); }

Operator renamed(const Operator& o, const Renames& in, const Renames& out) {
    return Operator(renamed(o.in(), in), renamed(o.out(), out), o.mat());
}

Renames inverse(const Renames& r) {
    Renames out;
    for (const auto& [k, v] : r) out[v] = k;
    return out;
}

// Message state relabeled to A<s>, B<s>, R<s> in that order, with missing roles added as trivial factors.
Ket canonical_message(const Ket& psi, const Roles& roles, const std::string& s, Renames* back) {
    Ket k = psi;
    for (const auto& l : {roles.message, roles.bob, roles.ref})
        if (!k.space().contains(l)) k = Ket(k.space() + Space{{l, 1}}, k.vec(), Norm::unchecked);
    if (k.space().size() != 3)
        throw std::invalid_argument("message state may only carry the message, Bob and reference labels");
    if (!k.space().contains(roles.message) || psi.space().dim_of(roles.message) < 1)
        throw std::invalid_argument("message state lacks the message label '" + roles.message + "'");
    Renames r{{roles.message, "A" + s}, {roles.bob, "B" + s}, {roles.ref, "R" + s}};
    if (back) *back = inverse(r);
    return reorder(renamed(k, r), {"A" + s, "B" + s, "R" + s});
}

Ket normalized(const Ket& k) {
    const double n = k.norm();
    if (n <= 0) throw std::invalid_argument("zero vector");
    return Ket(k.space(), k.vec() / n, Norm::unchecked);
}

// The last factor of k grows to dim, new amplitudes zero.
Ket pad_last(const Ket& k, int dim) {
    const auto& parts = k.space().parts();
    const int old = parts.back().dim;
    if (dim <= old) return k;
    const int lead = k.dim() / old;
    Vec v = Vec::Zero(lead * dim);
    for (int i = 0; i < lead; ++i) v.segment(i * dim, old) = k.vec().segment(i * old, old);
    auto p = parts;
    p.back().dim = dim;
    return Ket(Space(p), v, Norm::unchecked);
}

// Purification of the marginal of k on keep, with purifier grown to at least min_dim.
Ket padded_purification(const Ket& k, const Labels& keep, const std::string& label, int min_dim) {
    Ket p = purify(marginal(k, keep), label);
    return pad_last(p, std::max(min_dim, p.space().dim_of(label)));
}

double distance(const Ket& state, const Labels& keep, const Mat& target) {
    return trace_distance(marginal(state, keep).mat(), target);
}

// K = sqrt|M| op(sigma) U W restricted to the first k inputs: only k columns of U are needed.
Operator sampled_map(const Operator& op_sigma, const Space& message, int k, Sampler s) {
    const int dm = op_sigma.in().dim();
    Mat cols = haar_isometry(dm, k, s);
    Mat m = Mat::Zero(op_sigma.out().dim(), message.dim());
    m.leftCols(k) = std::sqrt(double(dm)) * op_sigma.mat() * cols;
    return Operator(message, op_sigma.out(), m);
}

double smooth_value(entropy::Kind kind, const Density& rho, const Labels& a, const Labels& b, double eps) {
    return entropy::smooth(kind, rho, a, b, eps).value;
}

struct Candidate {
    double score = std::numeric_limits<double>::infinity();
    std::vector<double> distances;
    int index = -1;
};

// Rounds of growing size; the lowest-score sample of the evaluated prefix must meet every budget.
template <class Eval>
Candidate markov_search(const SearchOptions& opt, const std::vector<double>& budgets, Eval&& eval, int* used) {
    Candidate best;
    int evaluated = 0;
    for (int round = opt.first_round; round <= opt.max_round; round *= 2) {
        for (int i = 0; i < round; ++i, ++evaluated) {
            Candidate c = eval(evaluated);
            if (c.score < best.score) best = c;
        }
        bool ok = true;
        for (std::size_t j = 0; j < budgets.size(); ++j) ok = ok && best.distances[j] <= budgets[j];
        if (ok) {
            *used = evaluated;
            return best;
        }
    }
    throw BudgetExhausted("no sampled unitary met the averaged-distance budgets after " + std::to_string(evaluated) +
                          " samples");
}

// Canonical labels: message A B R, channel input X, side S, side copy T, input copy M,
// discarded D, outputs C, environment E, decoder purifier F.
CodeArtifact sideinfo_engine(const Ket& psi, const Renames& back, const Channel& n, const Ket& phi, const Ket& sigma,
                             double eps, const Sampler& sampler, const SearchOptions& opt, const std::string& kind) {
    if (eps < 0 || eps >= 1) throw std::invalid_argument("eps must lie in [0, 1)");
    const int da = psi.space().dim_of("A");
    const int dm = sigma.space().dim_of("M");
    if (dm != sigma.space().dim_of("X"))
        throw std::invalid_argument("the input copy must have the same dimension as the channel input");
    const int dc = n.out().dim();

    const Operator un = stinespring(n, "E");
    const Operator op_sigma = op_of_vec(sigma, {"M"}, {"X", "S", "D"});
    const Ket omega = apply(un, sigma);  // M C E D
    const Mat omega_ed = marginal(omega, {"E", "D"}).mat();
    const Mat psi_br = marginal(psi, {"B", "R"}).mat();
    const Mat psi_r = marginal(psi, {"R"}).mat();
    const Mat phi_s = marginal(phi, {"S"}).mat();
    const Mat enc_target = kron(psi_br, phi_s);
    const Mat dec_target = kron(omega_ed, psi_r);

    CodeArtifact art;
    art.kind = kind;
    art.eps = eps;
    const Density psi_a = marginal(psi, {"A"});
    const double hmax_a = smooth_value(entropy::Kind::max, psi_a, {"A"}, {}, eps);
    const double h2_ms = smooth_value(entropy::Kind::two, marginal(sigma, {"M", "S"}), {"M"}, {"S"}, eps);
    const double h2_med = smooth_value(entropy::Kind::two, marginal(omega, {"M", "E", "D"}), {"M"}, {"E", "D"}, eps);
    const double h2_ar = smooth_value(entropy::Kind::two, marginal(psi, {"A", "R"}), {"A"}, {"R"}, eps);
    art.entropies = {{"hmax(A)", hmax_a}, {"h2(A''|S)", h2_ms}, {"h2(A''|ED)", h2_med}, {"h2(A|R)", h2_ar}};
    art.delta1 = 3.0 * std::exp2(0.5 * hmax_a - 0.5 * h2_ms) + 24.0 * eps;
    art.delta2 = 3.0 * std::exp2(-0.5 * h2_med - 0.5 * h2_ar) + 24.0 * eps;
    art.theorem_bound = oneshot_bound(art.delta1, art.delta2);

    const int k = std::min(da, dm);
    const Sampler stream = sampler.split(1);
    auto build = [&](int i) { return sampled_map(op_sigma, psi.space().select({"A"}), k, stream.split(i)); };
    auto eval = [&](int i) {
        const Ket kpsi = apply(build(i), psi);  // X S D B R
        const Ket chi = apply(un, kpsi);         // C E D B R
        Candidate c;
        c.index = i;
        c.distances = {distance(kpsi, {"B", "R", "S"}, enc_target), distance(chi, {"E", "D", "R"}, dec_target)};
        c.score = c.distances[0] + c.distances[1];
        return c;
    };
    const Candidate best = markov_search(opt, {art.delta1, art.delta2}, eval, &art.samples_used);
    art.encoder_distance = best.distances[0];
    art.decoupling_distances = {best.distances[1]};

    // Encoder from the purified encoder condition.
    const Ket joint = tensor(psi, phi);  // A B R S T
    const Ket kpsi = apply(build(best.index), psi);
    const Operator v = uhlmann_isometry(joint, normalized(kpsi));  // A T -> X D
    const Ket chi = apply(un, apply(v, joint));  // C E D B R
    art.decoupling_distances.push_back(distance(chi, {"E", "D", "R"}, dec_target));

    // Decoder from the decoupling condition: target psi x purification of omega^{ED}.
    const Ket out_msg = renamed(psi, {{"A", "Ao"}, {"B", "Bo"}});
    const int df_min = (dc + da - 1) / da;
    const Ket target = tensor(out_msg, padded_purification(omega, {"E", "D"}, "F", df_min));
    const Operator dec = uhlmann_isometry(normalized(chi), target);  // C B -> Ao Bo F
    const Ket out = apply(dec, chi);
    const Density rec = reorder(marginal(out, {"Ao", "Bo", "R"}), {"Ao", "Bo", "R"});
    art.achieved = trace_distance(rec.mat(), to_density(psi).mat());

    Renames msg_back = back;
    msg_back["Ao"] = back.at("A");
    msg_back["Bo"] = back.at("B");
    art.recovered = Density(renamed(rec.space(), msg_back), rec.mat(), Norm::unchecked);
    art.encoder = v;
    art.decoders = {dec};
    return art;
}

Renames channel_names(const Channel& n, const Labels& canonical_in, const Labels& canonical_out) {
    Renames r;
    const auto in = n.in().labels(), out = n.out().labels();
    for (std::size_t i = 0; i < in.size(); ++i) r[in[i]] = canonical_in[i];
    for (std::size_t i = 0; i < out.size(); ++i) r[out[i]] = canonical_out[i];
    return r;
}

Channel canonical_channel(const Channel& n, const Renames& r) {
    return Channel(renamed(n.in(), r), renamed(n.out(), r), n.kraus());
}

Renames output_names(const Operator& o, const Renames& user_of) {
    Renames r;
    for (const auto& l : o.out().labels())
        if (auto it = user_of.find(l); it != user_of.end()) r[l] = it->second;
    return r;
}

Operator relabeled_back(const Operator& o, const Renames& user_of) {
    Renames in;
    for (const auto& l : o.in().labels())
        if (auto it = user_of.find(l); it != user_of.end()) in[l] = it->second;
    try {
        return renamed(o, in, output_names(o, user_of));
    } catch (const std::invalid_argument&) {
        return o;  // user labels collide; keep the internal names
    }
}

}  // namespace

CodeArtifact oneshot_code(const Ket& psi, const Channel& n, const Ket& sigma, double eps, const Sampler& sampler,
                          const Roles& roles, const SearchOptions& opt) {
    if (n.in().size() != 1) throw std::invalid_argument("oneshot: the channel must have a single input label");
    if (n.out().size() != 1) throw std::invalid_argument("oneshot: the channel must have a single output label");
    const std::string x = n.in().labels()[0];
    if (sigma.space().size() != 2 || !sigma.space().contains(x))
        throw std::invalid_argument("oneshot: sigma must be pure on the channel input and one copy label");
    std::string copy;
    for (const auto& l : sigma.space().labels())
        if (l != x) copy = l;

    Renames back;
    const Ket m = canonical_message(psi, roles, "", &back);
    const Channel cn(Space{{"X", n.in().dim()}, {"S", 1}}, renamed(n.out(), {{n.out().labels()[0], "C"}}), n.kraus());
    const Ket phi(Space{{"S", 1}, {"T", 1}}, Vec::Ones(1), Norm::unchecked);
    Ket s = renamed(sigma, {{x, "X"}, {copy, "M"}});
    s = reorder(Ket(s.space() + Space{{"S", 1}, {"D", 1}}, s.vec(), Norm::unchecked), {"M", "X", "S", "D"});
    CodeArtifact art = sideinfo_engine(m, back, cn, phi, s, eps, sampler, opt, "oneshot");

    Renames user_of = back;
    user_of["X"] = x;
    user_of["C"] = n.out().labels()[0];
    // Trivial side and discarded factors are dropped from the reported operators.
    const Operator& v = art.encoder;
    art.encoder = Operator(v.in().without({"T"}), v.out().without({"D"}), v.mat());
    art.encoder = relabeled_back(art.encoder, user_of);
    user_of["Ao"] = back.at("A");
    user_of["Bo"] = back.at("B");
    art.decoders[0] = relabeled_back(art.decoders[0], user_of);
    return art;
}

CodeArtifact sideinfo_oneshot_code(const Ket& psi, const Channel& n, const Ket& phi, const Ket& sigma, double eps,
                                   const Sampler& sampler, const Roles& roles, const SearchOptions& opt) {
    if (n.in().size() != 2) throw std::invalid_argument("sideinfo: the channel must act on (input, side) labels");
    if (n.out().size() != 1) throw std::invalid_argument("sideinfo: the channel must have a single output label");
    if (phi.space().size() != 2) throw std::invalid_argument("sideinfo: phi must be pure on (side, side copy)");
    std::string side, x;
    for (const auto& l : n.in().labels()) (phi.space().contains(l) ? side : x) = l;
    if (side.empty() || x.empty()) throw std::invalid_argument("sideinfo: exactly one channel input must appear in phi");
    std::string side_copy;
    for (const auto& l : phi.space().labels())
        if (l != side) side_copy = l;

    Labels rest;
    for (const auto& l : sigma.space().labels())
        if (l != x && l != side) rest.push_back(l);
    if (!sigma.space().contains(x) || !sigma.space().contains(side) || rest.empty() || rest.size() > 2)
        throw std::invalid_argument("sideinfo: sigma must carry the channel input, the side label, a copy and optionally a discarded system");

    Renames back;
    const Ket m = canonical_message(psi, roles, "", &back);
    const Mat sm = marginal(sigma, {side}).mat();
    const Mat pm = marginal(phi, {side}).mat();
    if ((sm - pm).norm() > 1e-8) throw std::invalid_argument("sideinfo: sigma's side marginal differs from phi's");

    Renames cr = channel_names(n, n.in().index_of(x) == 0 ? Labels{"X", "S"} : Labels{"S", "X"}, {"C"});
    const Channel cn = canonical_channel(n, cr);
    const Ket cphi = reorder(renamed(phi, {{side, "S"}, {side_copy, "T"}}), {"S", "T"});
    Renames sr{{x, "X"}, {side, "S"}, {rest[0], "M"}};
    if (rest.size() == 2) sr[rest[1]] = "D";
    Ket s = renamed(sigma, sr);
    if (rest.size() == 1) s = Ket(s.space() + Space{{"D", 1}}, s.vec(), Norm::unchecked);
    s = reorder(s, {"M", "X", "S", "D"});
    CodeArtifact art = sideinfo_engine(m, back, cn, cphi, s, eps, sampler, opt, "sideinfo");

    Renames user_of = back;
    user_of["X"] = x;
    user_of["S"] = side;
    user_of["T"] = side_copy;
    user_of["C"] = n.out().labels()[0];
    if (rest.size() == 2) user_of["D"] = rest[1];
    art.encoder = relabeled_back(art.encoder, user_of);
    user_of["Ao"] = back.at("A");
    user_of["Bo"] = back.at("B");
    art.decoders[0] = relabeled_back(art.decoders[0], user_of);
    return art;
}

CodeArtifact broadcast_oneshot_code(const Ket& psi1, const Ket& psi2, const Channel& n, const Ket& sigma,
                                    double eps, const Sampler& sampler, const Roles& roles1, const Roles& roles2,
                                    const SearchOptions& opt) {
    if (eps < 0 || eps >= 1) throw std::invalid_argument("eps must lie in [0, 1)");
    if (n.in().size() != 1) throw std::invalid_argument("broadcast: the channel must have a single input label");
    if (n.out().size() != 2) throw std::invalid_argument("broadcast: the channel must have outputs (C1, C2)");
    const auto sl = sigma.space().labels();
    if (sl.size() < 3 || sl.size() > 4 || sl[2] != n.in().labels()[0])
        throw std::invalid_argument("broadcast: sigma labels must be [copy 1, copy 2, channel input, optional discarded]");

    Renames back1, back2;
    const Ket p1 = canonical_message(psi1, roles1, "1", &back1);
    const Ket p2 = canonical_message(psi2, roles2, "2", &back2);
    const Channel cn = canonical_channel(n, channel_names(n, {"X"}, {"C1", "C2"}));
    Renames sr{{sl[0], "M1"}, {sl[1], "M2"}, {sl[2], "X"}};
    if (sl.size() == 4) sr[sl[3]] = "D";
    Ket s = renamed(sigma, sr);
    if (sl.size() == 3) s = Ket(s.space() + Space{{"D", 1}}, s.vec(), Norm::unchecked);
    s = reorder(s, {"M1", "M2", "X", "D"});

    const int da1 = p1.space().dim_of("A1"), da2 = p2.space().dim_of("A2");
    const int dm1 = s.space().dim_of("M1"), dm2 = s.space().dim_of("M2");
    const int dc1 = cn.out().dim_of("C1"), dc2 = cn.out().dim_of("C2");

    CodeArtifact art;
    art.kind = "broadcast";
    art.eps = eps;
    const Operator un = stinespring(cn, "E");
    const Ket us = apply(un, s);  // M1 M2 C1 C2 E D
    const double e20 = eps * eps / 20.0, e16 = eps * eps / 16.0;
    using entropy::Kind;
    const double hmax1 = smooth_value(Kind::max, marginal(p1, {"A1"}), {"A1"}, {}, eps);
    const double hmax2 = smooth_value(Kind::max, marginal(p2, {"A2"}), {"A2"}, {}, eps);
    const double hmin_m1m2 = smooth_value(Kind::min, marginal(s, {"M1", "M2"}), {"M1"}, {"M2"}, e20);
    const double hmin_m2 = smooth_value(Kind::min, marginal(s, {"M2"}), {"M2"}, {}, eps);
    const double hmin_1 =
        smooth_value(Kind::min, marginal(us, {"M1", "E", "D", "M2", "C2"}), {"M1"}, {"E", "D", "M2", "C2"}, e20);
    const double hmin_2 =
        smooth_value(Kind::min, marginal(us, {"M2", "E", "D", "M1", "C1"}), {"M2"}, {"E", "D", "M1", "C1"}, e16);
    const double hmin_ar1 = smooth_value(Kind::min, marginal(p1, {"A1", "R1"}), {"A1"}, {"R1"}, eps);
    const double hmin_ar2 = smooth_value(Kind::min, marginal(p2, {"A2", "R2"}), {"A2"}, {"R2"}, eps);
    art.entropies = {{"hmax(A1)", hmax1},
                     {"hmax(A2)", hmax2},
                     {"hmin(A1''|A2'')", hmin_m1m2},
                     {"hmin(A2'')", hmin_m2},
                     {"hmin(A1''|EDA2''C2)", hmin_1},
                     {"hmin(A2''|EDA1''C1)", hmin_2},
                     {"hmin(A1|R1)", hmin_ar1},
                     {"hmin(A2|R2)", hmin_ar2}};
    art.delta_enc = 4.0 * std::exp2(0.5 * hmax1 - 0.5 * hmin_m1m2) + 5.0 * std::exp2(0.5 * hmax2 - 0.5 * hmin_m2) +
                    72.0 * eps;
    art.delta1 = 4.0 * std::exp2(-0.5 * hmin_1 - 0.5 * hmin_ar1) + 32.0 * eps;
    art.delta2 = 5.0 * std::exp2(-0.5 * hmin_2 - 0.5 * hmin_ar2) + 40.0 * eps;
    art.theorem_bound = broadcast_bound(art.delta_enc, art.delta1, art.delta2);

    const Ket joint = tensor(p1, p2);  // A1 B1 R1 A2 B2 R2
    const Mat psi1_br = marginal(p1, {"B1", "R1"}).mat(), psi2_br = marginal(p2, {"B2", "R2"}).mat();
    const Mat psi1_r = marginal(p1, {"R1"}).mat(), psi2_r = marginal(p2, {"R2"}).mat();
    const Mat enc_target = kron(psi1_br, psi2_br);
    const Operator op12 = op_of_vec(s, {"M1", "M2"}, {"X", "D"});
    const Operator op2 = op_of_vec(s, {"M2"}, {"M1", "X", "D"});
    const Operator op1 = op_of_vec(s, {"M1"}, {"M2", "X", "D"});
    const int k1 = std::min(da1, dm1), k2 = std::min(da2, dm2);
    const Space a1 = p1.space().select({"A1"}), a2 = p2.space().select({"A2"});
    const Sampler stream1 = sampler.split(1), stream2 = sampler.split(2);

    struct Pair {
        Mat u1, u2;  // first k columns of the sampled unitaries
    };
    auto draw = [&](int i) {
        Sampler s1 = stream1.split(i), s2 = stream2.split(i);
        return Pair{haar_isometry(dm1, k1, s1), haar_isometry(dm2, k2, s2)};
    };
    // U_i W_i as maps A_i -> M_i.
    auto local = [&](const Mat& cols, const Space& in, const std::string& out, int dm) {
        Mat m = Mat::Zero(dm, in.dim());
        m.leftCols(cols.cols()) = cols;
        return Operator(in, Space{{out, dm}}, m);
    };
    auto encoder_map = [&](const Pair& p) {
        Operator l = tensor(local(p.u1, a1, "M1", dm1), local(p.u2, a2, "M2", dm2));
        return Operator(a1 + a2, op12.out(), std::sqrt(double(dm1) * dm2) * op12.mat() * l.mat());
    };
    // omega_1(U2) after the channel, reduced to the side of receiver 2, and the mirror image.
    auto xi1 = [&](const Pair& p) {
        Ket t2 = apply(local(p.u2, a2, "M2", dm2), p2);  // M2 B2 R2
        Ket w = apply(Operator(op2.in(), op2.out(), std::sqrt(double(dm2)) * op2.mat()), t2);
        return apply(un, w);  // M1 C1 C2 E D B2 R2
    };
    auto xi2 = [&](const Pair& p) {
        Ket t1 = apply(local(p.u1, a1, "M1", dm1), p1);
        Ket w = apply(Operator(op1.in(), op1.out(), std::sqrt(double(dm1)) * op1.mat()), t1);
        return apply(un, w);  // M2 C1 C2 E D B1 R1
    };
    const Labels side1{"C2", "E", "D", "B2", "R2"}, side2{"C1", "E", "D", "B1", "R1"};
    auto dec_distance = [&](const Ket& chi, const Pair& p) {
        Labels keep1{"R1"}, keep2{"R2"};
        keep1.insert(keep1.end(), side1.begin(), side1.end());
        keep2.insert(keep2.end(), side2.begin(), side2.end());
        const double d1 = distance(chi, keep1, kron(psi1_r, marginal(xi1(p), side1).mat()));
        const double d2 = distance(chi, keep2, kron(psi2_r, marginal(xi2(p), side2).mat()));
        return std::pair{d1, d2};
    };

    auto eval = [&](int i) {
        const Pair p = draw(i);
        const Ket kpsi = apply(encoder_map(p), joint);  // X D B1 R1 B2 R2
        const Ket chi = apply(un, kpsi);                 // C1 C2 E D B1 R1 B2 R2
        auto [d1, d2] = dec_distance(chi, p);
        Candidate c;
        c.index = i;
        c.distances = {distance(kpsi, {"B1", "R1", "B2", "R2"}, enc_target), d1, d2};
        c.score = c.distances[0] + d1 + d2;
        return c;
    };
    const Candidate best = markov_search(opt, {art.delta_enc, art.delta1, art.delta2}, eval, &art.samples_used);
    art.encoder_distance = best.distances[0];
    art.decoupling_distances = {best.distances[1], best.distances[2]};

    const Pair p = draw(best.index);
    const Ket kpsi = apply(encoder_map(p), joint);
    const Operator w = uhlmann_isometry(joint, normalized(kpsi));  // A1 A2 -> X D
    const Ket chi = apply(un, apply(w, joint));                     // C1 C2 E D B1 R1 B2 R2

    const Ket t1 = tensor(renamed(p1, {{"A1", "A1o"}, {"B1", "B1o"}}),
                          padded_purification(xi1(p), side1, "F1", (dc1 + da1 - 1) / da1));
    const Ket t2 = tensor(renamed(p2, {{"A2", "A2o"}, {"B2", "B2o"}}),
                          padded_purification(xi2(p), side2, "F2", (dc2 + da2 - 1) / da2));
    const Operator dec1 = uhlmann_isometry(normalized(chi), t1);  // C1 B1 -> A1o B1o F1
    const Operator dec2 = uhlmann_isometry(normalized(chi), t2);  // C2 B2 -> A2o B2o F2
    const Ket out = apply(dec2, apply(dec1, chi));
    const Labels keep{"A1o", "B1o", "R1", "A2o", "B2o", "R2"};
    const Density rec = reorder(marginal(out, keep), keep);
    art.achieved = trace_distance(rec.mat(), to_density(joint).mat());

    Renames user_of;
    for (const auto& [k, v] : back1) user_of[k] = v;
    for (const auto& [k, v] : back2) user_of[k] = v;
    user_of["X"] = n.in().labels()[0];
    user_of["C1"] = n.out().labels()[0];
    user_of["C2"] = n.out().labels()[1];
    if (sl.size() == 4) user_of["D"] = sl[3];
    user_of["A1o"] = back1.at("A1");
    user_of["B1o"] = back1.at("B1");
    user_of["A2o"] = back2.at("A2");
    user_of["B2o"] = back2.at("B2");
    try {
        art.recovered = Density(renamed(rec.space(), user_of), rec.mat(), Norm::unchecked);
    } catch (const std::invalid_argument&) {
        art.recovered = rec;
    }
    art.encoder = relabeled_back(w, user_of);
    art.decoders = {relabeled_back(dec1, user_of), relabeled_back(dec2, user_of)};
    return art;
}

}  // namespace qdec::coding
