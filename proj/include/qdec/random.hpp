#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qdec/state.hpp"

namespace qdec {

// Single-owner deterministic stream; split() derives independent sub-streams.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 0);

    std::uint64_t seed() const { return seed_; }
    Sampler split(std::uint64_t stream) const;

    double uniform();
    double normal();
    cplx complex_normal();  // E|z|^2 = 1
    int uniform_int(int n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

Mat ginibre(int rows, int cols, Sampler& s);
Mat haar_unitary(int d, Sampler& s);
// Haar-random isometry C^cols -> C^rows.
Mat haar_isometry(int rows, int cols, Sampler& s);

struct SecondMoment {
    cplx alpha = 0;
    cplx beta = 0;
    Mat value;  // alpha I + beta F
};
// Haar average of (U x U) M (U x U)^dagger for M on C^d x C^d.
SecondMoment haar_second_moment(const Mat& m, int d);
Mat swap_operator(int d);

// Clifford group on n <= 2 qubits, one representative per phase class.
const std::vector<Mat>& clifford_group(int n_qubits);
Mat clifford_sample(int n_qubits, Sampler& s);
// Exact group average of (C x C) M (C x C)^dagger.
Mat clifford_second_moment(const Mat& m, int n_qubits);

// X^a Z^b ordered by a * d + b; element 0 is the identity.
std::vector<Mat> weyl_operators(int d);

Ket random_pure(const Space& space, Sampler& s);
Density random_density(const Space& space, int rank, Sampler& s);

// Rank-one complete measurement sum_x w_x |v_x><v_x| = I.
struct RankOneMeasurement {
    std::vector<double> weights;
    std::vector<Vec> vectors;
    int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
};
RankOneMeasurement basis_measurement(const Mat& unitary);

struct ChernoffResult {
    double violation_rate = 0;
    double analytic_bound = 0;
    int trials = 0;
};
// Draws n vectors with probability w_x / |C| and checks (|C|/n) sum |v><v| <= k I.
ChernoffResult chernoff_experiment(const RankOneMeasurement& m, int n, double k, int trials, Sampler& s);
double chernoff_bound(int dim, int n, double k);

}  // namespace qdec
