#pragma once

#include <string>
#include <vector>

#include "qdec/random.hpp"
#include "qdec/state.hpp"

namespace qdec {

struct ChannelDiagnostics {
    double tp_error = 0;         // ||sum K^dag K - I||_F
    double choi_herm_error = 0;  // ||J - J^dag||_F
    double choi_min_eig = 0;
    bool valid = false;
};

// Completely positive trace-preserving map stored as a Kraus set.
class Channel {
public:
    Channel(Space in, Space out, std::vector<Mat> kraus, double tol = 1e-9);

    const Space& in() const { return in_; }
    const Space& out() const { return out_; }
    const std::vector<Mat>& kraus() const { return kraus_; }
    int env_dim() const { return static_cast<int>(kraus_.size()); }

private:
    Space in_;
    Space out_;
    std::vector<Mat> kraus_;
};

ChannelDiagnostics validate(const Space& in, const Space& out, const std::vector<Mat>& kraus);
ChannelDiagnostics validate(const Channel& ch);

// Acts on the channel's input labels; other labels of rho are left alone.
Density apply(const Channel& ch, const Density& rho);
Density apply(const Channel& ch, const Ket& psi);

// V: in -> out + env, V|x> = sum_i K_i|x> |i>.
Operator stinespring(const Channel& ch, const std::string& env = "E");
Channel complementary(const Channel& ch, const std::string& env = "E");
Channel channel_from_isometry(const Operator& v, const Labels& traced);

// (T x id)(Phi) ordered as [copies of input labels with suffix, output labels].
Density choi_state(const Channel& ch, const std::string& suffix = "'");

double diamond_lower_bound(const Channel& n1, const Channel& n2, int restarts, Sampler& s);

// Common channels.
Channel identity_channel(const Space& space);
Channel unitary_channel(const Space& space, const Mat& u);
Channel trace_out_channel(const Space& in, const Labels& kept);
Channel depolarizing_channel(const std::string& in, const std::string& out, int d, double p);
Channel dephasing_channel(const std::string& in, const std::string& out);
Channel bit_flip_channel(const std::string& in, const std::string& out);
Channel erasure_channel(const std::string& in, const std::string& out, double p);

}  // namespace qdec
