#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace qdec {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr double kStructTol = 1e-10;
inline constexpr double kDerivedTol = 1e-8;

int product(const Dims& dims);

// Hermitian part, used before every eigen-decomposition.
Mat hermitize(const Mat& m);

struct EigenSystem {
    RVec values;   // ascending
    Mat vectors;   // columns orthonormal
};
EigenSystem eigh(const Mat& h);

// f applied to the spectrum of a Hermitian matrix.
Mat spectral_apply(const Mat& h, const std::function<double(double)>& f);
Mat sqrtm_psd(const Mat& p);
// Generalized power on the support; eigenvalues below floor are dropped.
Mat powm_psd(const Mat& p, double exponent, double floor = 1e-12);

double trace_norm(const Mat& m);
double operator_norm(const Mat& m);
double frobenius_norm(const Mat& m);
double max_eigenvalue(const Mat& h);
double min_eigenvalue(const Mat& h);

Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

// Reorder tensor factors: output factor k is input factor perm[k].
Vec permute(const Vec& v, const Dims& dims, const std::vector<int>& perm);
Mat permute(const Mat& m, const Dims& dims, const std::vector<int>& perm);

// Trace out every factor not listed in keep; kept factors appear in keep order.
Mat partial_trace_keep(const Mat& m, const Dims& dims, const std::vector<int>& keep);
// Reduced operator of a pure vector, same convention.
Mat reduced_of_vector(const Vec& v, const Dims& dims, const std::vector<int>& keep);

// Apply op (dimension in -> out) on the factors listed in targets (in order).
// The output replaces the first target position; other targets are removed.
Vec apply_local(const Vec& v, const Dims& dims, const std::vector<int>& targets,
                const Mat& op, Dims* out_dims = nullptr);

// Swap operator on C^d x C^d.
Mat swap_matrix(int d);
// Unnormalized maximally entangled vector sum_i |ii>.
Vec max_entangled_unnormalized(int d);

// Columns: orthonormal basis of the orthogonal complement of range(m).
Mat complement_basis(const Mat& m, double tol = 1e-10);

bool is_unitary(const Mat& u, double tol = kStructTol);
bool is_isometry(const Mat& v, double tol = kStructTol);
bool is_partial_isometry(const Mat& v, double tol = kDerivedTol);

// Binary logarithm with 0 log 0 = 0 convention handled by callers.
double log2_safe(double x);
double shannon_term(double p);  // -p log2 p, 0 at p <= 0

}  // namespace qdec
