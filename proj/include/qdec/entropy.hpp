#pragma once

#include <optional>
#include <string>

#include "qdec/state.hpp"

namespace qdec::entropy {

enum class Method { closed_form, optimizer, oracle };
std::string to_string(Method m);

struct Report {
    double value = 0;  // bits
    Method method = Method::closed_form;
    int iterations = 0;
    double gradient_norm = 0;
    double certified_gap = 0;  // bits between primal and dual, optimizer methods only
    bool converged = true;
    std::string strategy;           // smoothing strategy that produced the value
    std::optional<Density> member;  // smoothing ball member
    double member_distance = 0;     // its fidelity distance to the center
};

// Spectrum-based entropy of a PSD matrix, -sum l log l.
double von_neumann(const Mat& rho);

Report entropy(const Density& rho, const Labels& a);
Report conditional_entropy(const Density& rho, const Labels& a, const Labels& b);
Report mutual_information(const Density& rho, const Labels& a, const Labels& b);
Report conditional_mutual_information(const Density& rho, const Labels& a, const Labels& b, const Labels& c);
Report coherent_information(const Density& rho, const Labels& a, const Labels& b);

// Matrix-level solvers; rho acts on C^dA x C^dB with A first and may be subnormalized.
Report h_min_matrix(const Mat& rho, int dA, int dB);
Report h_2_matrix(const Mat& rho, int dA, int dB);
Report h_max_matrix(const Mat& rho, int dA, int dB);

// Empty b means the unconditional quantity.
Report h_min(const Density& rho, const Labels& a, const Labels& b = {});
Report h_2(const Density& rho, const Labels& a, const Labels& b = {});
Report h_max(const Density& rho, const Labels& a, const Labels& b = {});

enum class Kind { min, two, max };
Kind kind_from_string(const std::string& s);

// One-sided bound on the smooth quantity over the fidelity-distance ball of radius eps:
// lower bound for min and two, upper bound for max. The ball member is returned.
Report smooth(Kind kind, const Density& rho, const Labels& a, const Labels& b, double eps);

// H(A|B) - 4 log(eta) sqrt(log(2/eps^2) / n) with eta = 2 sqrt|A| + 1.
double aep_bound(double h_ab, int dim_a, int n, double eps);
double aep_min_copies(double eps);

}  // namespace qdec::entropy
