#include "stokesim/adjoint.hpp"

#include <cmath>

namespace stokesim {

VectorXd make_terminal(const TerminalSpec& spec, const MrsSystem& sys, Rng& rng) {
    const long size = static_cast<long>(sys.dimension()) * sys.n_markers();
    VectorXd z(size);
    if (spec.kind == TerminalSpec::Kind::random_unit) {
        for (long i = 0; i < size; ++i) z[i] = rng.gaussian();
    } else {
        if (sys.weight_mode != WeightMode::closed_loop_arclength)
            throw ConfigError(
                "gaussian-process terminal data is defined for closed-loop scenarios only");
        const int n = sys.n_markers();
        const int dim = sys.dimension();
        // correlation between markers k apart: exp(-(s_k)^2 / (2 ell^2)) with
        // s_k the resting-circle arclength separation
        const double ell = spec.correlation_length;
        VectorXd corr(n);
        for (int k = 0; k < n; ++k) {
            const int ring = std::min(k, n - k);
            const double s = 2.0 * M_PI * static_cast<double>(ring) / n;
            corr[k] = std::exp(-0.5 * (s / ell) * (s / ell));
        }
        // circulant eigenvalues: real DFT of the first row
        VectorXd spec_vals(n);
        for (int m = 0; m < n; ++m) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += corr[k] * std::cos(2.0 * M_PI * m * k / static_cast<double>(n));
            spec_vals[m] = std::max(0.0, acc);
        }
        for (int d = 0; d < dim; ++d) {
            // one independent field per component
            VectorXd am(n), bm(n);
            for (int m = 0; m < n; ++m) {
                am[m] = rng.gaussian();
                bm[m] = rng.gaussian();
            }
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int m = 0; m < n; ++m) {
                    const double amp = std::sqrt(spec_vals[m] / n);
                    const double ang = 2.0 * M_PI * m * k / static_cast<double>(n);
                    acc += amp * (am[m] * std::cos(ang) + bm[m] * std::sin(ang));
                }
                z[static_cast<long>(dim) * k + d] = acc;
            }
        }
    }
    const double norm = z.norm();
    if (!(norm > 0.0)) throw NumericalError("terminal data has zero norm");
    return z / norm;
}

VectorXd adjoint_rhs(const MrsSystem& sys, const NefemTrajectory& forward, double t,
                     const VectorXd& z) {
    return adjoint_apply(sys, t, forward.eval(t), z);
}

AdjointTrajectory solve_adjoint(const MrsSystem& sys, const NefemTrajectory& forward,
                                const VectorXd& z_terminal, const ButcherTableau& tab,
                                int refine) {
    if (refine < 1) throw ConfigError("adjoint refinement factor must be at least 1");
    const double t0 = forward.times.front();
    const double T = forward.times.back();

    // tau partition mirrors the forward partition (reversed), each interval
    // split into `refine` steps so estimator panels align with adjoint nodes
    std::vector<double> tau;
    tau.reserve(static_cast<std::size_t>(forward.n_intervals()) * refine + 1);
    tau.push_back(0.0);
    for (int n = forward.n_intervals() - 1; n >= 0; --n) {
        const double lo = forward.times[n];
        const double hi = forward.times[n + 1];
        for (int r = 1; r <= refine; ++r)
            tau.push_back(T - (hi - (hi - lo) * (static_cast<double>(r) / refine)));
    }
    tau.back() = T - t0;

    const Rhs rhs = [&sys, &forward, T](double tau_now, const VectorXd& z) {
        return adjoint_rhs(sys, forward, T - tau_now, z);
    };

    AdjointTrajectory out;
    out.t_final = T;
    out.solve_tau = solve_forward(tab, rhs, z_terminal, tau);
    out.rec_tau = nefem_reconstruct(out.solve_tau, 2);
    return out;
}

} // namespace stokesim
