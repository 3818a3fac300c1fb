#pragma once

#include "qdec/state.hpp"

namespace qdec {

// Root fidelity ||sqrt(rho) sqrt(sigma)||_1.
double fidelity(const Mat& rho, const Mat& sigma);
double fidelity(const Density& rho, const Density& sigma);
// Adds sqrt((1 - tr rho)(1 - tr sigma)) so subnormalized operators are handled.
double generalized_fidelity(const Mat& rho, const Mat& sigma);
double trace_distance(const Mat& rho, const Mat& sigma);
double trace_distance(const Density& rho, const Density& sigma);
// sqrt(1 - F^2) with the generalized fidelity.
double fidelity_distance(const Mat& rho, const Mat& sigma);
double fidelity_distance(const Density& rho, const Density& sigma);

struct Helstrom {
    double p_guess = 0.5;
    Mat guess_first;   // projector onto the positive eigenspace of rho - sigma
    Mat guess_second;  // its complement
};
Helstrom helstrom(const Mat& rho, const Mat& sigma);

// Partial isometry V from the non-shared factors of psi to those of phi that
// maximizes |<phi| V |psi>|; shared labels are the ones present in both.
Operator uhlmann_isometry(const Ket& psi, const Ket& phi);
// Overlap |<phi| V |psi>| of the isometry above.
double uhlmann_overlap(const Ket& psi, const Ket& phi, const Operator& v);

}  // namespace qdec
