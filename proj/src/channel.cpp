#include "qdec/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "qdec/metrics.hpp"

namespace qdec {

namespace {

double tp_error(const Space& in, const Space& out, const std::vector<Mat>& kraus) {
    const int din = in.dim(), dout = out.dim();
    Mat sum = Mat::Zero(din, din);
    for (const auto& k : kraus) {
        if (k.rows() != dout || k.cols() != din) throw std::invalid_argument("channel: Kraus operator has wrong shape");
        sum += k.adjoint() * k;
    }
    return (sum - Mat::Identity(din, din)).norm();
}

}  // namespace

ChannelDiagnostics validate(const Space& in, const Space& out, const std::vector<Mat>& kraus) {
    ChannelDiagnostics d;
    const int din = in.dim(), dout = out.dim();
    d.tp_error = tp_error(in, out, kraus);
    Mat choi = Mat::Zero(din * dout, din * dout);
    for (const auto& k : kraus) {
        Vec v = Vec::Zero(din * dout);
        for (int x = 0; x < din; ++x) v.segment(x * dout, dout) = k.col(x);
        choi += v * v.adjoint();
    }
    choi /= double(din);
    d.choi_herm_error = (choi - choi.adjoint()).norm();
    d.choi_min_eig = min_eigenvalue(choi);
    d.valid = d.tp_error < 1e-9 && d.choi_herm_error < 1e-9 && d.choi_min_eig > -1e-9;
    return d;
}

Channel::Channel(Space in, Space out, std::vector<Mat> kraus, double tol)
    : in_(std::move(in)), out_(std::move(out)), kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw std::invalid_argument("channel: empty Kraus set");
    const double err = tp_error(in_, out_, kraus_);
    if (err > tol) throw std::invalid_argument("channel: not trace preserving (error " + std::to_string(err) + ")");
}

ChannelDiagnostics validate(const Channel& ch) { return validate(ch.in(), ch.out(), ch.kraus()); }

Density apply(const Channel& ch, const Density& rho) {
    Mat acc;
    Space space;
    for (const auto& k : ch.kraus()) {
        Density part = apply(Operator(ch.in(), ch.out(), k), rho);
        if (acc.size() == 0) {
            acc = part.mat();
            space = part.space();
        } else {
            acc += part.mat();
        }
    }
    return Density(space, acc, Norm::unchecked);
}

Density apply(const Channel& ch, const Ket& psi) { return apply(ch, to_density(psi)); }

Operator stinespring(const Channel& ch, const std::string& env) {
    const int dout = ch.out().dim(), ne = ch.env_dim();
    Mat v = Mat::Zero(dout * ne, ch.in().dim());
    for (int i = 0; i < ne; ++i)
        for (int c = 0; c < dout; ++c) v.row(c * ne + i) = ch.kraus()[i].row(c);
    return Operator(ch.in(), ch.out() + Space{{env, ne}}, v);
}

Channel complementary(const Channel& ch, const std::string& env) {
    const int dout = ch.out().dim(), ne = ch.env_dim(), din = ch.in().dim();
    std::vector<Mat> ks;
    for (int c = 0; c < dout; ++c) {
        Mat m(ne, din);
        for (int i = 0; i < ne; ++i) m.row(i) = ch.kraus()[i].row(c);
        ks.push_back(m);
    }
    return Channel(ch.in(), Space{{env, ne}}, ks);
}

Channel channel_from_isometry(const Operator& v, const Labels& traced) {
    Labels kept = v.out().without(traced).labels();
    Labels order = kept;
    order.insert(order.end(), traced.begin(), traced.end());
    auto idx = v.out().indices(order);
    const int dk = v.out().dim_of(kept), dt = v.out().dim_of(traced);
    Mat permuted(v.out().dim(), v.in().dim());
    for (long c = 0; c < v.mat().cols(); ++c) permuted.col(c) = permute(Vec(v.mat().col(c)), v.out().dims(), idx);
    std::vector<Mat> ks;
    for (int j = 0; j < dt; ++j) {
        Mat k(dk, v.in().dim());
        for (int r = 0; r < dk; ++r) k.row(r) = permuted.row(r * dt + j);
        ks.push_back(k);
    }
    return Channel(v.in(), v.out().select(kept), ks);
}

Density choi_state(const Channel& ch, const std::string& suffix) {
    std::vector<Subsystem> copies;
    for (const auto& p : ch.in().parts()) copies.push_back({p.label + suffix, p.dim});
    Space ref(copies);
    const int d = ch.in().dim();
    Ket phi(ch.in() + ref, max_entangled_unnormalized(d) / std::sqrt(double(d)));
    Density out = apply(ch, phi);
    Labels order = ref.labels();
    for (const auto& l : ch.out().labels()) order.push_back(l);
    return reorder(out, order);
}

namespace {

Mat output_on_ref(const Channel& ch, const Vec& psi) {
    const int din = ch.in().dim(), dout = ch.out().dim();
    Mat acc = Mat::Zero(dout * din, dout * din);
    Mat id = Mat::Identity(din, din);
    for (const auto& k : ch.kraus()) {
        Vec w = kron(k, id) * psi;
        acc += w * w.adjoint();
    }
    return acc;
}

Mat adjoint_on_ref(const Channel& ch, const Mat& obs) {
    const int din = ch.in().dim();
    Mat acc = Mat::Zero(din * din, din * din);
    Mat id = Mat::Identity(din, din);
    for (const auto& k : ch.kraus()) {
        Mat kk = kron(k, id);
        acc += kk.adjoint() * obs * kk;
    }
    return acc;
}

}  // namespace

double diamond_lower_bound(const Channel& n1, const Channel& n2, int restarts, Sampler& s) {
    if (n1.in().dims() != n2.in().dims() || n1.out().dims() != n2.out().dims())
        throw std::invalid_argument("diamond: channels act on different spaces");
    const int din = n1.in().dim();
    double best = 0;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        Vec psi = ginibre(din * din, 1, s).col(0);
        psi.normalize();
        double value = 0;
        for (int it = 0; it < 200; ++it) {
            Mat delta = output_on_ref(n1, psi) - output_on_ref(n2, psi);
            double v = trace_norm(delta);
            auto h = helstrom(output_on_ref(n1, psi), output_on_ref(n2, psi));
            Mat obs = h.guess_first - h.guess_second;
            Mat g = adjoint_on_ref(n1, obs) - adjoint_on_ref(n2, obs);
            auto es = eigh(g);
            psi = es.vectors.col(es.vectors.cols() - 1);
            if (v <= value + 1e-13) {
                value = std::max(value, v);
                break;
            }
            value = v;
        }
        Mat delta = output_on_ref(n1, psi) - output_on_ref(n2, psi);
        best = std::max({best, value, trace_norm(delta)});
    }
    return best;
}

Channel identity_channel(const Space& space) {
    return Channel(space, space, {Mat::Identity(space.dim(), space.dim())});
}

Channel unitary_channel(const Space& space, const Mat& u) { return Channel(space, space, {u}); }

Channel trace_out_channel(const Space& in, const Labels& kept) {
    return channel_from_isometry(identity_op(in), in.without(kept).labels());
}

Channel depolarizing_channel(const std::string& in, const std::string& out, int d, double p) {
    auto w = weyl_operators(d);
    std::vector<Mat> ks;
    const double d2 = double(d) * d;
    ks.push_back(std::sqrt(1 - p + p / d2) * w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) ks.push_back(std::sqrt(p / d2) * w[i]);
    return Channel(Space{{in, d}}, Space{{out, d}}, ks);
}

Channel dephasing_channel(const std::string& in, const std::string& out) {
    Mat z = Mat::Identity(2, 2);
    z(1, 1) = -1;
    const double r = std::sqrt(0.5);
    return Channel(Space{{in, 2}}, Space{{out, 2}}, {r * Mat::Identity(2, 2), r * z});
}

Channel bit_flip_channel(const std::string& in, const std::string& out) {
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1;
    return Channel(Space{{in, 2}}, Space{{out, 2}}, {x});
}

Channel erasure_channel(const std::string& in, const std::string& out, double p) {
    Mat k0 = Mat::Zero(3, 2), k1 = Mat::Zero(3, 2), k2 = Mat::Zero(3, 2);
    k0(0, 0) = k0(1, 1) = std::sqrt(1 - p);
    k1(2, 0) = std::sqrt(p);
    k2(2, 1) = std::sqrt(p);
    return Channel(Space{{in, 2}}, Space{{out, 3}}, {k0, k1, k2});
}

}  // namespace qdec
