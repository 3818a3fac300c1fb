#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdec/channel.hpp"
#include "qdec/random.hpp"
#include "qdec/state.hpp"

namespace qdec::coding {

// Which labels of a message state play the message, Bob and reference roles.
// Roles absent from the state are treated as one-dimensional.
struct Roles {
    std::string message = "A";
    std::string bob = "B";
    std::string ref = "R";
};

struct SearchOptions {
    int first_round = 16;
    int max_round = 256;
};

// No sampled unitary met the averaged-distance budgets.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CodeArtifact {
    std::string kind;
    Operator encoder;
    std::vector<Operator> decoders;
    double delta1 = 0;
    double delta2 = 0;
    double delta_enc = 0;  // broadcast only
    // Distances of the sampled, not yet isometric encoder: encoder condition and decoupling condition(s).
    double encoder_distance = 0;
    std::vector<double> decoupling_distances;
    double achieved = 0;
    double theorem_bound = 0;
    int samples_used = 0;
    double eps = 0;
    std::map<std::string, double> entropies;
    Density recovered;

    bool certified() const { return theorem_bound < 2; }
    bool sound(double tol = 1e-9) const { return !certified() || achieved <= theorem_bound + tol; }
};

// psi: message state; n: channel with a single input label; sigma: pure state on that label
// and one more label that serves as the copy of the input.
CodeArtifact oneshot_code(const Ket& psi, const Channel& n, const Ket& sigma, double eps, const Sampler& sampler,
                          const Roles& roles = {}, const SearchOptions& opt = {});

// n acts on (input, side) where side is the label shared with phi; phi is pure on (side, copy of side).
// sigma carries the channel input, the side label, the input copy and optionally a discarded system,
// in that role order for the labels not used by the channel.
CodeArtifact sideinfo_oneshot_code(const Ket& psi, const Channel& n, const Ket& phi, const Ket& sigma, double eps,
                                   const Sampler& sampler, const Roles& roles = {}, const SearchOptions& opt = {});

// n has one input label and output labels (C1, C2) in that order. sigma labels are
// [copy for message 1, copy for message 2, channel input, optional discarded system].
CodeArtifact broadcast_oneshot_code(const Ket& psi1, const Ket& psi2, const Channel& n, const Ket& sigma,
                                    double eps, const Sampler& sampler, const Roles& roles1 = {},
                                    const Roles& roles2 = {}, const SearchOptions& opt = {});

double oneshot_bound(double delta1, double delta2);
double broadcast_bound(double delta_enc, double delta1, double delta2);

}  // namespace qdec::coding
