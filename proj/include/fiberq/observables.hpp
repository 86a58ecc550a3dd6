#pragma once

#include <vector>

#include "fiberq/state.hpp"

namespace fiberq {

/// Joint photon-number distribution P(n_s, n_i) of a two-mode state,
/// row-major with n_s outer.
struct JointNumberTable {
    std::size_t rows = 0;  ///< n_max_s + 1
    std::size_t cols = 0;  ///< n_max_i + 1
    std::vector<double> probs;

    double at(std::size_t n_s, std::size_t n_i) const { return probs.at(n_s * cols + n_i); }
    double total() const;
};

/// <n_s n_i| rho |n_s n_i>. Requires a two-mode state. Small negative
/// diagonal entries are returned as-is.
JointNumberTable joint_number_distribution(const DensityMatrix& rho);
JointNumberTable joint_number_distribution(const CompositeSpace& space, const CMatrix& rho);

/// Heralding figures derived from a joint table:
///   coincidence  = sum_{n>=1} P(n, n)
///   mismatch     = sum_{n_s != n_i} P(n_s, n_i)
///   false_herald = sum_{n_i>=1} P(0, n_i) + sum_{n_s>=1} P(n_s, 0)
struct HeraldingMetrics {
    double p_coincidence = 0.0;
    double p_mismatch = 0.0;
    double p_false_herald = 0.0;
};

HeraldingMetrics heralding_metrics(const JointNumberTable& table);

struct FirstMoments {
    cplx b_s;
    cplx b_i;
    double n_s = 0.0;
    double n_i = 0.0;
};

FirstMoments first_moments(const DensityMatrix& rho);

/// Per-mode <n_m> and <b_m> for any mode count, read directly from rho
/// without forming embedded operators.
struct ModeMeans {
    std::vector<double> n;
    std::vector<cplx> b;
};

ModeMeans mode_means(const CompositeSpace& space, const CMatrix& rho);

}  // namespace fiberq
