#pragma once

#include <vector>

#include "qdec/random.hpp"
#include "qdec/state.hpp"

namespace qdec::locking {

// N messages embedded by a random isometry into C x K (C first).
class Scheme {
public:
    Scheme(int dim_c, int dim_k, Mat embedding);

    int messages() const { return static_cast<int>(embedding_.cols()); }
    int dim_c() const { return dim_c_; }
    int dim_k() const { return dim_k_; }
    const Mat& embedding() const { return embedding_; }
    // rho_m^{CK}, pure.
    Mat encoded(int m) const;
    // rho_m^C.
    const Mat& cyphertext(int m) const { return cyphertexts_[m]; }
    // (1/N) sum_m |m><m| x rho_m^C, ordered [M, C].
    Mat joint() const;

private:
    int dim_c_;
    int dim_k_;
    Mat embedding_;
    std::vector<Mat> cyphertexts_;
};

Scheme build_scheme(int messages, int dim_c, int dim_k, Sampler& sampler);

// Smallest pairwise ||rho_i^{CK} - rho_j^{CK}||_1 and smallest Helstrom guess probability over pairs.
double pairwise_min_distance(const Scheme& s);
double pairwise_min_guess(const Scheme& s);

// Joint distribution p(m, x) of measuring the cyphertext in the columns of basis; rows are messages.
Eigen::MatrixXd outcome_distribution(const Scheme& s, const Mat& basis);
// ||M(omega^{MC}) - M(pi^C) x omega^M||_1 for the basis measurement.
double leakage_of(const Scheme& s, const Mat& basis);
// Mutual information in bits of a joint distribution.
double mutual_information(const Eigen::MatrixXd& joint);

struct Leakage {
    double value = 0;  // a lower bound on the supremum over complete measurements
    Mat basis;
    std::vector<double> restart_values;
};
Leakage leakage(const Scheme& s, int restarts, int iterations, const Sampler& sampler);

struct KeyRequirement {
    double key_dim = 0;
    bool eps_in_range = true;       // eps <= e^{-2}
    bool enough_messages = true;    // N >= 8 sqrt(2) / eps
};
// log2_messages = log2 N, so that astronomically large N can be passed.
KeyRequirement key_requirement(double log2_messages, double eps);

double eta(double x);  // -x log2 x, zero for x <= 0
double accessible_info_bound(double eps_lock, double log2_messages);

// (|C| / n) sum_x |psi_x><psi_x| <= k I, checked on the spectrum.
bool quasi_check(const std::vector<Vec>& vectors, int n, double k, double tol = 1e-8);

}  // namespace qdec::locking
