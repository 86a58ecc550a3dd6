#include "fiberq/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fiberq/errors.hpp"

namespace fiberq {

void LindbladSystem::validate() const {
    if (!(hamiltonian.space() == space))
        throw DimensionError("LindbladSystem: Hamiltonian acts on a different space");
    const double herm = hermiticity_error(hamiltonian.matrix());
    if (herm > 1e-10)
        throw ParameterError("LindbladSystem: Hamiltonian is not Hermitian (max |H - H^dag| = " +
                             std::to_string(herm) + ")");
    for (const auto& j : jumps)
        if (!(j.op.space() == space))
            throw DimensionError("LindbladSystem: jump '" + j.label + "' acts on a different space");
}

// --- generator -------------------------------------------------------------

LindbladGenerator::Sparse LindbladGenerator::gather(const CMatrix& m) {
    Sparse s;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m(r, c) != cplx{}) s.push_back({r, c, m(r, c)});
    return s;
}

LindbladGenerator::LindbladGenerator(const LindbladSystem& system) : dim_(system.space.total_dim()) {
    system.validate();
    const cplx i{0.0, 1.0};
    CMatrix g = i * system.hamiltonian.matrix();
    for (const auto& j : system.jumps) {
        const CMatrix& l = j.op.matrix();
        if (frobenius_norm(l) == 0.0) continue;
        g -= cplx{0.5} * (adjoint(l) * l);
        jumps_.push_back(gather(l));
    }
    effective_ = gather(g);
}

void LindbladGenerator::apply(const CMatrix& rho, CMatrix& out) const {
    if (rho.rows() != dim_ || !rho.square()) throw DimensionError("lindblad_rhs: state dimension");
    if (out.rows() != dim_ || out.cols() != dim_) out = CMatrix(dim_, dim_);
    std::fill(out.data().begin(), out.data().end(), cplx{});

    // G rho
    for (const auto& e : effective_) {
        auto dst = out.row(e.row);
        auto src = rho.row(e.col);
        for (std::size_t j = 0; j < dim_; ++j) dst[j] += e.value * src[j];
    }
    // rho G^dag: (rho G^dag)(i, j) = sum_k rho(i, k) conj(G(j, k))
    for (std::size_t i = 0; i < dim_; ++i) {
        auto dst = out.row(i);
        auto src = rho.row(i);
        for (const auto& e : effective_) dst[e.row] += src[e.col] * std::conj(e.value);
    }
    if (jumps_.empty()) return;

    // L rho L^dag, via M = L rho
    CMatrix m(dim_, dim_);
    for (const auto& l : jumps_) {
        std::fill(m.data().begin(), m.data().end(), cplx{});
        for (const auto& e : l) {
            auto dst = m.row(e.row);
            auto src = rho.row(e.col);
            for (std::size_t j = 0; j < dim_; ++j) dst[j] += e.value * src[j];
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            auto dst = out.row(i);
            auto src = m.row(i);
            for (const auto& e : l) dst[e.row] += src[e.col] * std::conj(e.value);
        }
    }
}

CMatrix LindbladGenerator::apply(const CMatrix& rho) const {
    CMatrix out(dim_, dim_);
    apply(rho, out);
    return out;
}

CMatrix lindblad_rhs(const LindbladSystem& system, const CMatrix& rho) {
    return LindbladGenerator(system).apply(rho);
}

CMatrix lindblad_rhs(const LindbladSystem& system, const DensityMatrix& rho) {
    if (!(rho.space() == system.space))
        throw DimensionError("lindblad_rhs: state and system act on different spaces");
    return lindblad_rhs(system, rho.matrix());
}

// --- integration -----------------------------------------------------------

void IntegratorConfig::validate() const {
    if (!(step_km > 0.0)) throw ParameterError("integrator: step_km must be > 0");
    if (monitor_every < 1) throw ParameterError("integrator: monitor_every must be >= 1");
}

namespace {

void axpy(CMatrix& y, const CMatrix& x, cplx a) {
    auto yd = y.data();
    auto xd = x.data();
    for (std::size_t k = 0; k < yd.size(); ++k) yd[k] += a * xd[k];
}

void rehermitize_inplace(CMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
}

/// Reusable stage buffers for repeated RK4 steps.
struct Rk4Work {
    CMatrix k1, k2, k3, k4, tmp;
    explicit Rk4Work(std::size_t n) : k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n) {}
};

void rk4_inplace(const LindbladGenerator& gen, CMatrix& rho, double h, bool rehermitize,
                 Rk4Work& w) {
    gen.apply(rho, w.k1);
    w.tmp = rho;
    axpy(w.tmp, w.k1, 0.5 * h);
    gen.apply(w.tmp, w.k2);
    w.tmp = rho;
    axpy(w.tmp, w.k2, 0.5 * h);
    gen.apply(w.tmp, w.k3);
    w.tmp = rho;
    axpy(w.tmp, w.k3, h);
    gen.apply(w.tmp, w.k4);

    auto r = rho.data();
    auto a = w.k1.data();
    auto b = w.k2.data();
    auto c = w.k3.data();
    auto d = w.k4.data();
    const double s = h / 6.0;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += s * (a[k] + 2.0 * b[k] + 2.0 * c[k] + d[k]);
    if (rehermitize) rehermitize_inplace(rho);
}

std::string describe(const InvariantRecord& inv) {
    std::ostringstream os;
    os << "trace_err=" << inv.trace_err << " herm_err=" << inv.herm_err
       << " min_eig=" << inv.min_eig;
    return os.str();
}

void check_abort(const CMatrix& rho, const IntegratorConfig& cfg, double z, bool with_spectrum) {
    const double drift = std::abs(trace(rho) - cplx{1.0});
    if (!std::isfinite(drift) || drift > cfg.abort_trace_drift) {
        std::ostringstream os;
        os << "propagation aborted at z=" << z << " km: trace drift " << drift
           << " exceeds " << cfg.abort_trace_drift;
        throw InvariantBreach(z, os.str());
    }
    if (with_spectrum) {
        const auto inv = monitor_invariants(rho);
        if (inv.min_eig < cfg.abort_min_eig) {
            throw InvariantBreach(z, "propagation aborted at z=" + std::to_string(z) +
                                         " km: negative eigenvalue (" + describe(inv) + ")");
        }
    }
}

}  // namespace

CMatrix step_rk4(const LindbladGenerator& gen, const CMatrix& rho, double h, bool rehermitize) {
    if (!(h > 0.0)) throw ParameterError("step_rk4: step must be > 0");
    Rk4Work w(rho.rows());
    CMatrix out = rho;
    rk4_inplace(gen, out, h, rehermitize, w);
    return out;
}

DensityMatrix step_rk4(const LindbladSystem& system, const DensityMatrix& rho, double h,
                       const IntegratorConfig& config, double z_km) {
    if (!(rho.space() == system.space))
        throw DimensionError("step_rk4: state and system act on different spaces");
    LindbladGenerator gen(system);
    CMatrix next = step_rk4(gen, rho.matrix(), h, config.rehermitize);
    check_abort(next, config, z_km + h, true);
    return {rho.space(), std::move(next)};
}

SampleRecord observe(const CompositeSpace& space, const CMatrix& rho) {
    SampleRecord rec;
    if (space.mode_count() == 2) rec.joint = joint_number_distribution(space, rho);
    auto mm = mode_means(space, rho);
    rec.mean_n = std::move(mm.n);
    rec.mean_b = std::move(mm.b);
    rec.invariants = monitor_invariants(rho);
    return rec;
}

std::vector<double> uniform_samples(double length_km, std::size_t count) {
    if (count == 0) throw ParameterError("uniform_samples: count must be >= 1");
    if (length_km == 0.0) return {0.0};
    if (count == 1) return {length_km};  // z = 0 is recorded anyway
    std::vector<double> z(count);
    for (std::size_t k = 0; k < count; ++k)
        z[k] = length_km * static_cast<double>(k) / static_cast<double>(count - 1);
    z.back() = length_km;
    return z;
}

Trajectory propagate(const LindbladSystem& system, const DensityMatrix& rho0, double length_km,
                     const IntegratorConfig& config, std::span<const double> sample_points) {
    config.validate();
    if (!(length_km >= 0.0)) throw ParameterError("propagate: length_km must be >= 0");
    if (!(rho0.space() == system.space))
        throw DimensionError("propagate: state and system act on different spaces");
    rho0.validate();

    std::vector<double> samples;
    samples.push_back(0.0);
    for (double z : sample_points) {
        if (z < 0.0 || z > length_km * (1.0 + 1e-12))
            throw ParameterError("propagate: sample point " + std::to_string(z) +
                                 " outside [0, length]");
        if (z == 0.0 && samples.size() == 1) continue;
        if (z <= samples.back()) throw ParameterError("propagate: sample points must increase");
        samples.push_back(std::min(z, length_km));
    }

    LindbladGenerator gen(system);
    Rk4Work work(system.space.total_dim());
    CMatrix rho = rho0.matrix();

    Trajectory traj;
    auto record = [&](double z) {
        traj.z_km.push_back(z);
        traj.records.push_back(observe(system.space, rho));
        const auto& inv = traj.records.back().invariants;
        if (traj.records.size() == 1) {
            traj.worst = inv;
        } else {
            traj.worst.trace_err = std::max(traj.worst.trace_err, inv.trace_err);
            traj.worst.herm_err = std::max(traj.worst.herm_err, inv.herm_err);
            traj.worst.min_eig = std::min(traj.worst.min_eig, inv.min_eig);
        }
        if (inv.min_eig < config.abort_min_eig || inv.trace_err > config.abort_trace_drift)
            throw InvariantBreach(z, "propagation aborted at z=" + std::to_string(z) + " km (" +
                                         describe(inv) + ")");
    };

    record(0.0);
    long step_count = 0;
    double z = 0.0;
    for (std::size_t s = 1; s < samples.size(); ++s) {
        const double span_z = samples[s] - samples[s - 1];
        const auto n = static_cast<long>(std::ceil(span_z / config.step_km - 1e-9));
        const double h = span_z / static_cast<double>(std::max<long>(n, 1));
        for (long k = 0; k < n; ++k) {
            rk4_inplace(gen, rho, h, config.rehermitize, work);
            ++step_count;
            z = samples[s - 1] + h * static_cast<double>(k + 1);
            check_abort(rho, config, z, step_count % config.monitor_every == 0);
        }
        record(samples[s]);
    }
    traj.final_state = DensityMatrix(system.space, std::move(rho));
    return traj;
}

Trajectory propagate(const LindbladSystem& system, const DensityMatrix& rho0, double length_km,
                     const IntegratorConfig& config, std::size_t sample_count) {
    const auto z = uniform_samples(length_km, sample_count);
    return propagate(system, rho0, length_km, config, z);
}

}  // namespace fiberq
