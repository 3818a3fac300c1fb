#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdec/channel.hpp"
#include "qdec/random.hpp"
#include "qdec/state.hpp"

namespace qdec::rates {

using Point = std::map<std::string, double>;

// sum_v coeffs[v] * point[v] < bound
struct Inequality {
    std::string text;
    std::map<std::string, double> coeffs;
    double bound = 0;
    bool holds(const Point& p) const;
};

struct Region {
    std::string kind;  // "ea", "sideinfo", "marton"
    std::vector<std::string> variables;
    std::vector<Inequality> inequalities;        // rate-limited assistance
    std::vector<Inequality> assisted;            // unlimited entanglement assistance
    std::map<std::string, double> quantities;    // entropic terms, bits
    // Difference between the summed rate-limited constraints and the assisted sum bound.
    double identity_gap = 0;
    // Corner points of the assisted region in the Q plane (one or two senders).
    std::vector<std::vector<double>> vertices;

    bool contains(const Point& p) const;
    // Largest total quantum rate allowed with unlimited assistance.
    double assisted_sum() const;
};

// sigma carries the channel input labels and the message label(s); it may be mixed.
Region ea_rate_point(const Channel& n, const Density& sigma);
Region ea_rate_point(const Channel& n, const Ket& sigma);

// n acts on (input, side); phi is pure on (side, copy). sigma is on (message, input, side).
Region sideinfo_rate(const Channel& n, const Ket& phi, const Density& sigma);

// n has one input label and outputs (C1, C2); sigma is on (messages[0], messages[1], input).
Region marton_region(const Channel& n, const Density& sigma, const Labels& messages = {"A1", "A2"});

struct SearchOptions {
    int restarts = 32;
    double first_angle = 0.5;
    double last_angle = 1e-4;
    int max_sweeps = 400;
};

struct Optimum {
    double value = 0;  // a lower bound on the supremum
    Ket sigma{Space{}, Vec::Ones(1)};
    std::vector<double> restart_values;
    long evaluations = 0;
    std::string label = "lower bound";
};

// Maximizes I(A;C)/2 over pure sigma on (A, input), |A| = dim_a.
Optimum ea_optimize(const Channel& n, int dim_a, const Sampler& sampler, const SearchOptions& opt = {});

// Maximizes [I(A;C) - I(A;S)]/2 over sigma on (A, input, side, D) with sigma^S = phi^S.
// dim_d = 1 restricts to pure sigma^{A A' S}.
Optimum sideinfo_optimize(const Channel& n, const Ket& phi, int dim_a, int dim_d, const Sampler& sampler,
                          const SearchOptions& opt = {});

}  // namespace qdec::rates
