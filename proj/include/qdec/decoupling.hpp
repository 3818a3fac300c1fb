#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdec/channel.hpp"
#include "qdec/random.hpp"
#include "qdec/state.hpp"

namespace qdec::decoupling {

// Completely positive map A -> E given by Kraus operators; trace preservation is not required.
struct CpMap {
    Space in;
    Space out;
    std::vector<Mat> kraus;

    static CpMap from_channel(const Channel& ch);
    int dim_in() const { return in.dim(); }
    int dim_out() const { return out.dim(); }
    bool trace_preserving(double tol = 1e-9) const;
    // Acts on a matrix over in x rest (input first); result is out x rest.
    Mat apply(const Mat& m, int rest) const;
};

// (T x id)(Phi^{AA'}) as a matrix ordered [A', E].
Mat choi_matrix(const CpMap& t);

enum class SamplerKind { haar, clifford };
SamplerKind sampler_from_string(const std::string& s);
std::string to_string(SamplerKind k);

struct Experiment {
    SamplerKind sampler = SamplerKind::haar;
    int n_samples = 0;
    std::vector<double> lhs;
    double mean = 0;
    double max = 0;
    double std = 0;  // sample standard deviation
    double rhs = 0;
    double eps = 0;
    // mean <= rhs + 3 std / sqrt(n)
    bool bound_holds() const;
    double slack() const;
};

struct RhsTerms {
    double h2_choi = 0;   // H_2(A'|E) of the Choi state, lower bound if smoothed
    double h2_input = 0;  // H_2(A|R) of the input
    double value = 0;
};

// rho is ordered [A, R] with A = t.in.
RhsTerms rhs_terms(const Mat& rho, int dim_r, const CpMap& t, double eps = 0);
double rhs(const Mat& rho, int dim_r, const CpMap& t, double eps = 0);
// ||T(U rho U^dag) - omega^E x rho^R||_1 for one unitary.
double lhs_value(const Mat& rho, int dim_r, const CpMap& t, const Mat& u);

Experiment lhs_mc(const Mat& rho, int dim_r, const CpMap& t, SamplerKind kind, int n_samples,
                  const Sampler& sampler, double eps = 0);

struct Concentration {
    double threshold = 0;  // rhs + r
    double empirical_tail = 0;
    double analytic_bound = 0;
    double k_constant = 1;
    bool k_exact = true;  // false when K is only bounded above
};
Concentration concentration(const Mat& rho, int dim_r, const CpMap& t, int n_samples, double r,
                            const Sampler& sampler);

enum class Corollary { fqsw, merge, subspace, projective_merge };
Corollary corollary_from_string(const std::string& s);
std::string to_string(Corollary c);

struct CorollaryParams {
    Corollary kind = Corollary::fqsw;
    int dim_a = 4;
    int split = 2;    // |A1| for fqsw, |E| for merge and subspace, |E1| for projective merge
    int split2 = 1;   // |E2| for projective merge
    int dim_r = 2;
    int n_samples = 500;
    SamplerKind sampler = SamplerKind::haar;
    std::optional<Mat> rho;  // [A, R]; a random pure state when absent
};

struct CorollaryRun {
    CpMap map;
    Mat rho;
    Experiment experiment;
    double rhs_closed = 0;
    double rhs_generic = 0;
};

CpMap corollary_map(const CorollaryParams& p);
double corollary_rhs_closed(const CorollaryParams& p, double h2_input);
CorollaryRun corollary_run(const CorollaryParams& p, const Sampler& sampler);

struct Randomization {
    std::vector<Mat> unitaries;  // U_i = V_i U
    Mat base;                    // U
    Mat target;                  // xi^A
    int subspace_dim = 0;
    double residual = 0;
    double bound = 0;
    double hmax = 0;
    double h2 = 0;
};
// rho ordered [A, B]. subspace_dim overrides the default dimension 2^{Hmax + 2 log(1/eps)}.
Randomization randomize_destroy(const Mat& rho, int dim_a, int dim_b, int k, double eps, int n_search,
                                const Sampler& sampler, std::optional<int> subspace_dim = std::nullopt);
double randomize_bound(double hmax, double h2, int k, double eps);

}  // namespace qdec::decoupling
