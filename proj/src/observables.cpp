#include "fiberq/observables.hpp"

#include <cmath>
#include <numeric>

#include "fiberq/errors.hpp"

namespace fiberq {

double JointNumberTable::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

JointNumberTable joint_number_distribution(const CompositeSpace& space, const CMatrix& rho) {
    if (space.mode_count() != 2)
        throw DimensionError("joint_number_distribution: expected a two-mode state, got " +
                             std::to_string(space.mode_count()) + " modes");
    if (rho.rows() != space.total_dim()) throw DimensionError("joint_number_distribution: size");
    JointNumberTable t;
    t.rows = space.modes()[0].dim();
    t.cols = space.modes()[1].dim();
    t.probs.resize(t.rows * t.cols);
    // With mode 0 slowest, the flat basis index is exactly n_s * cols + n_i.
    for (std::size_t k = 0; k < t.probs.size(); ++k) t.probs[k] = rho(k, k).real();
    return t;
}

JointNumberTable joint_number_distribution(const DensityMatrix& rho) {
    return joint_number_distribution(rho.space(), rho.matrix());
}

HeraldingMetrics heralding_metrics(const JointNumberTable& t) {
    HeraldingMetrics m;
    for (std::size_t s = 0; s < t.rows; ++s)
        for (std::size_t i = 0; i < t.cols; ++i) {
            const double p = t.at(s, i);
            if (s == i) {
                if (s >= 1) m.p_coincidence += p;
            } else {
                m.p_mismatch += p;
            }
            if ((s == 0 && i >= 1) || (i == 0 && s >= 1)) m.p_false_herald += p;
        }
    return m;
}

ModeMeans mode_means(const CompositeSpace& space, const CMatrix& rho) {
    if (rho.rows() != space.total_dim()) throw DimensionError("mode_means: size mismatch");
    const std::size_t d = space.total_dim();
    ModeMeans out;
    out.n.assign(space.mode_count(), 0.0);
    out.b.assign(space.mode_count(), cplx{});
    for (std::size_t m = 0; m < space.mode_count(); ++m) {
        const std::size_t stride = space.stride(m);
        const std::size_t dm = space.modes()[m].dim();
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t n = (j / stride) % dm;
            out.n[m] += static_cast<double>(n) * rho(j, j).real();
            // Tr(b rho) = sum_j b(j - stride, j) rho(j, j - stride), b(j-stride, j) = sqrt(n_j).
            if (n >= 1) out.b[m] += std::sqrt(static_cast<double>(n)) * rho(j, j - stride);
        }
    }
    return out;
}

FirstMoments first_moments(const DensityMatrix& rho) {
    if (rho.space().mode_count() != 2)
        throw DimensionError("first_moments: expected a two-mode state");
    const auto mm = mode_means(rho.space(), rho.matrix());
    return {mm.b[0], mm.b[1], mm.n[0], mm.n[1]};
}

}  // namespace fiberq
