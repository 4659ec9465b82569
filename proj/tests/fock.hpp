#pragma once

// Brute-force truncated Fock-space operators. Independent of the matrix
// rendering in the library: generators are assembled from their operator
// definitions and evolved by Taylor series on the state vector.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

#include "quadevo/algebra.hpp"

namespace fock {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;
using Vec = Eigen::VectorXcd;

class Space {
public:
    Space(int modes, int levels);

    int modes() const { return modes_; }
    int levels() const { return levels_; }
    long dim() const { return dim_; }

    const SpMat& a(int m) const { return ann_[static_cast<std::size_t>(m)]; }
    SpMat ad(int m) const { return SpMat(a(m).adjoint()); }
    SpMat identity() const;
    Vec vacuum() const;

    // Occupation of mode m in basis state `index`.
    int occupation(long index, int m) const;

private:
    int modes_;
    int levels_;
    long dim_;
    std::vector<SpMat> ann_;
};

// Operator form of a canonical generator, with the phase generator in its
// symmetric form (D^dag D + D D^dag)/2.
SpMat generator(const Space& space, quadevo::GeneratorClass cls, int mode_a, int mode_b = -1);

// exp(-i t H) psi by Taylor series on sub-steps.
Vec evolve(const SpMat& h, double t, const Vec& psi);

// True when |state| has negligible weight on the top `margin` levels of any mode.
double top_level_weight(const Space& space, const Vec& psi, int margin);

}  // namespace fock
