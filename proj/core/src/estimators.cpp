#include "stokesim/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "stokesim/errors.hpp"

namespace stokesim {

namespace {

// quadrature points of one interval, split into equal panels
struct QuadPoints {
    std::vector<double> t;
    std::vector<double> w;
};

QuadPoints composite_points(double t0, double t1, const QuadratureRule& rule, int panels) {
    QuadPoints pts;
    const int n = static_cast<int>(rule.nodes.size());
    pts.t.reserve(static_cast<size_t>(n) * panels);
    pts.w.reserve(static_cast<size_t>(n) * panels);
    const double h = (t1 - t0) / panels;
    for (int p = 0; p < panels; ++p) {
        const double p0 = t0 + p * h;
        for (int g = 0; g < n; ++g) {
            pts.t.push_back(p0 + rule.nodes[g] * h);
            pts.w.push_back(rule.weights[g] * h);
        }
    }
    return pts;
}

struct IntervalWork {
    IntervalBreakdown out;
    double residual_pair = 0.0; // direct quadrature of <X' - F(X), z>
};

IntervalWork interval_breakdown(const MrsSystem& sys, const ForwardTrajectory& fwd,
                                const NefemTrajectory& rec, const AdjointTrajectory& adj,
                                int interval, const QuadratureRule& rule,
                                const EstimatorOptions& opts) {
    const double t0 = fwd.times[static_cast<size_t>(interval)];
    const double t1 = fwd.times[static_cast<size_t>(interval) + 1];
    const double dt = t1 - t0;
    const QuadPoints pts = composite_points(t0, t1, rule, opts.panels);
    const size_t npts = pts.t.size();

    // pass 1: adjoint values and their linear L2 projection. V1 is the
    // shifted Legendre mode 2(t - t0)/dt - 1 with <V1, V1> = dt/3.
    std::vector<VectorXd> z(npts);
    VectorXd i0, i1;
    for (size_t g = 0; g < npts; ++g) {
        z[g] = adj.eval(pts.t[g]);
        const double v1 = 2.0 * (pts.t[g] - t0) / dt - 1.0;
        if (g == 0) {
            i0 = pts.w[g] * z[g];
            i1 = (pts.w[g] * v1) * z[g];
        } else {
            i0 += pts.w[g] * z[g];
            i1 += (pts.w[g] * v1) * z[g];
        }
    }
    const VectorXd c0 = i0 / dt;
    const VectorXd c1 = 3.0 * i1 / dt;

    const auto& tab = fwd.tableau;
    const int stages = tab.stages();

    IntervalWork work;
    work.out.t0 = t0;
    work.out.t1 = t1;
    work.out.z_norm_start = adj.eval(t0).norm();

    // pass 2: the three (four) pairings
    for (size_t g = 0; g < npts; ++g) {
        const double t = pts.t[g];
        const double w = pts.w[g];
        const VectorXd x = rec.eval_on(interval, t);
        const VectorXd dx = rec.eval_derivative_on(interval, t);
        const VectorXd f_x = rhs_regularized(sys, t, x);

        VectorXd f_sum = VectorXd::Zero(x.size());
        for (int l = 0; l < stages; ++l) {
            if (tab.b[static_cast<size_t>(l)] == 0.0) continue;
            const VectorXd el = stage_extrapolant(fwd, interval, l, t);
            f_sum += tab.b[static_cast<size_t>(l)] * rhs_regularized(sys, t, el);
        }

        const double v1 = 2.0 * (t - t0) / dt - 1.0;
        const VectorXd pz = c0 + v1 * c1;
        const VectorXd& zg = z[g];

        work.out.e_r += w * (dx - f_sum).dot(zg - pz);
        work.out.e_e += w * (f_sum - f_x).dot(zg);
        work.out.e_q -= w * f_sum.dot(pz);
        work.residual_pair += w * (dx - f_x).dot(zg);

        if (opts.mode == Mode::singular_target) {
            const VectorXd dm = mobility_difference(sys, x, opts.reg_include_self);
            work.out.e_re += w * dm.dot(zg);
        }
    }

    // Discrete half of the quadrature term, straight from the stored stages.
    // The constant test mode uses the per-stage single-node rule, giving
    // sum_l b_l dt k_l . c0; the linear test mode uses the midpoint rule,
    // whose node sits at the zero of the linear Legendre mode, so the c1
    // component contributes nothing (the same convention the reconstruction
    // is built with - the two must match for the error identity to be exact).
    const auto& k = fwd.stages[static_cast<size_t>(interval)];
    for (int l = 0; l < stages; ++l) {
        const double bl = tab.b[static_cast<size_t>(l)];
        if (bl == 0.0) continue;
        work.out.e_q += bl * dt * k[static_cast<size_t>(l)].dot(c0);
    }

    return work;
}

void check_inputs(const ForwardTrajectory& fwd, const NefemTrajectory& rec,
                  const EstimatorOptions& opts) {
    if (fwd.n_intervals() < 1) throw ConfigError("estimator: empty forward trajectory");
    if (rec.n_intervals() != fwd.n_intervals())
        throw ConfigError("estimator: reconstruction and trajectory disagree on intervals");
    if (opts.quad_nodes < 1) throw ConfigError("estimator: quad_nodes must be >= 1");
    if (opts.panels < 1) throw ConfigError("estimator: panels must be >= 1");
}

} // namespace

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-based initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            if (n == 1) {
                p1 = x;
                dp = 1.0;
            }
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]; reverse order so nodes come out increasing
        rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

double ErrorBreakdown::sum_r() const {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.e_r;
    return s;
}

double ErrorBreakdown::sum_e() const {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.e_e;
    return s;
}

double ErrorBreakdown::sum_q() const {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.e_q;
    return s;
}

double ErrorBreakdown::sum_re() const {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.e_re;
    return s;
}

std::pair<VectorXd, VectorXd> project_l2(const std::function<VectorXd(double)>& f, double t0,
                                         double t1, const QuadratureRule& rule, int panels) {
    if (!(t1 > t0)) throw ConfigError("project_l2: need t1 > t0");
    if (panels < 1) throw ConfigError("project_l2: panels must be >= 1");
    const double dt = t1 - t0;
    const QuadPoints pts = composite_points(t0, t1, rule, panels);
    VectorXd i0, i1;
    for (size_t g = 0; g < pts.t.size(); ++g) {
        const VectorXd fg = f(pts.t[g]);
        const double v1 = 2.0 * (pts.t[g] - t0) / dt - 1.0;
        if (g == 0) {
            i0 = pts.w[g] * fg;
            i1 = (pts.w[g] * v1) * fg;
        } else {
            i0 += pts.w[g] * fg;
            i1 += (pts.w[g] * v1) * fg;
        }
    }
    return {i0 / dt, 3.0 * i1 / dt};
}

ErrorBreakdown assemble_breakdown(const MrsSystem& sys, const ForwardTrajectory& fwd,
                                  const NefemTrajectory& rec, const AdjointTrajectory& adj,
                                  const EstimatorOptions& opts) {
    check_inputs(fwd, rec, opts);
    const QuadratureRule rule = gauss_legendre(opts.quad_nodes);
    ErrorBreakdown out;
    out.mode = opts.mode;
    out.intervals.reserve(static_cast<size_t>(fwd.n_intervals()));
    for (int n = 0; n < fwd.n_intervals(); ++n)
        out.intervals.push_back(interval_breakdown(sys, fwd, rec, adj, n, rule, opts).out);
    out.z_norm_final = adj.eval(fwd.times.back()).norm();
    return out;
}

namespace {

IntervalWork one_interval(const MrsSystem& sys, const ForwardTrajectory& fwd,
                          const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                          const EstimatorOptions& opts) {
    check_inputs(fwd, rec, opts);
    if (interval < 0 || interval >= fwd.n_intervals())
        throw ConfigError("estimator: interval index out of range");
    const QuadratureRule rule = gauss_legendre(opts.quad_nodes);
    return interval_breakdown(sys, fwd, rec, adj, interval, rule, opts);
}

} // namespace

double residual_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                      const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                      const EstimatorOptions& opts) {
    return one_interval(sys, fwd, rec, adj, interval, opts).out.e_r;
}

double explicit_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                      const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                      const EstimatorOptions& opts) {
    return one_interval(sys, fwd, rec, adj, interval, opts).out.e_e;
}

double quadrature_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                        const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                        const EstimatorOptions& opts) {
    return one_interval(sys, fwd, rec, adj, interval, opts).out.e_q;
}

double regularization_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                            const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                            const EstimatorOptions& opts) {
    EstimatorOptions local = opts;
    local.mode = Mode::singular_target; // the component is defined by this pairing
    return one_interval(sys, fwd, rec, adj, interval, local).out.e_re;
}

double residual_pairing(const MrsSystem& sys, const NefemTrajectory& rec,
                        const AdjointTrajectory& adj, const EstimatorOptions& opts) {
    if (rec.n_intervals() < 1) throw ConfigError("residual_pairing: empty reconstruction");
    if (opts.quad_nodes < 1) throw ConfigError("residual_pairing: quad_nodes must be >= 1");
    if (opts.panels < 1) throw ConfigError("residual_pairing: panels must be >= 1");
    const QuadratureRule rule = gauss_legendre(opts.quad_nodes);
    double total = 0.0;
    for (int n = 0; n < rec.n_intervals(); ++n) {
        const double t0 = rec.times[static_cast<size_t>(n)];
        const double t1 = rec.times[static_cast<size_t>(n) + 1];
        const QuadPoints pts = composite_points(t0, t1, rule, opts.panels);
        for (size_t g = 0; g < pts.t.size(); ++g) {
            const double t = pts.t[g];
            const VectorXd x = rec.eval_on(n, t);
            const VectorXd dx = rec.eval_derivative_on(n, t);
            const VectorXd f_x = rhs_regularized(sys, t, x);
            total += pts.w[g] * (dx - f_x).dot(adj.eval(t));
        }
    }
    return total;
}

double total_estimate(const ErrorBreakdown& breakdown) {
    double s = breakdown.sum_r() + breakdown.sum_e() + breakdown.sum_q();
    if (breakdown.mode == Mode::singular_target) s += breakdown.sum_re();
    return -s;
}

std::optional<double> effectivity(double estimate, double exact_pairing) {
    if (std::abs(exact_pairing) < 1e-14 * (1.0 + std::abs(estimate))) return std::nullopt;
    return estimate / exact_pairing;
}

} // namespace stokesim
