#pragma once

#include "qdec/linalg.hpp"
#include "qdec/space.hpp"

namespace qdec {

enum class Norm { normalized, subnormalized, unchecked };

// Pure state vector over a labeled space.
class Ket {
public:
    Ket(Space space, Vec amplitudes, Norm norm = Norm::normalized);

    const Space& space() const { return space_; }
    const Vec& vec() const { return amp_; }
    int dim() const { return space_.dim(); }
    double norm() const { return amp_.norm(); }

private:
    Space space_;
    Vec amp_;
};

// Density operator; subnormalized members (tr <= 1) are allowed on request.
class Density {
public:
    Density() = default;
    Density(Space space, Mat matrix, Norm norm = Norm::normalized);

    const Space& space() const { return space_; }
    const Mat& mat() const { return m_; }
    int dim() const { return space_.dim(); }
    double trace() const { return m_.trace().real(); }

private:
    Space space_;
    Mat m_;
};

// Linear map between labeled spaces, matrix of shape out.dim x in.dim.
class Operator {
public:
    Operator() = default;
    Operator(Space in, Space out, Mat matrix);

    const Space& in() const { return in_; }
    const Space& out() const { return out_; }
    const Mat& mat() const { return m_; }
    Operator adjoint() const { return Operator(out_, in_, m_.adjoint()); }

    bool is_isometry(double tol = kStructTol) const { return qdec::is_isometry(m_, tol); }
    bool is_partial_isometry(double tol = kDerivedTol) const { return qdec::is_partial_isometry(m_, tol); }

private:
    Space in_;
    Space out_;
    Mat m_;
};

Ket basis_ket(const Space& space, int index);
Ket maximally_entangled(const std::string& a, const std::string& b, int d);
Density maximally_mixed(const Space& space);
Density to_density(const Ket& k);
Operator identity_op(const Space& space);

Ket tensor(const Ket& x, const Ket& y);
Density tensor(const Density& x, const Density& y);
Operator tensor(const Operator& x, const Operator& y);

Density partial_trace(const Density& rho, const Labels& drop);
Density marginal(const Density& rho, const Labels& keep);
Density marginal(const Ket& psi, const Labels& keep);

Ket reorder(const Ket& psi, const Labels& order);
Density reorder(const Density& rho, const Labels& order);
Density relabel(const Density& rho, const Space& space);
Ket relabel(const Ket& psi, const Space& space);

// Acts on the labels of op.in(); op.out() labels take the position of the first input label.
Ket apply(const Operator& op, const Ket& psi, Norm norm = Norm::unchecked);
Density apply(const Operator& op, const Density& rho, Norm norm = Norm::unchecked);

// Purifier dimension equals the numerical rank (cutoff 1e-12).
Ket purify(const Density& rho, const std::string& purifier = "P");

// op_{from -> to}(psi): |a_i>|b_j> -> |b_j><a_i|.
Operator op_of_vec(const Ket& psi, const Labels& from, const Labels& to);
Ket vec_of_op(const Operator& m);

struct Schmidt {
    RVec coefficients;  // descending, nonnegative
    Mat basis_a;        // columns |a_k>
    Mat basis_b;        // columns |b_k>
};
Schmidt schmidt(const Ket& psi, const Labels& a);

double inner(const Ket& x, const Ket& y);  // |<x|y>|

}  // namespace qdec
