#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <unsupported/Eigen/MatrixFunctions>

namespace testsupport {

namespace {

// 12-point Gauss-Legendre rule on [-1, 1]
constexpr int kNg = 12;
constexpr double kGx[kNg] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047, -0.5873179542866175,
    -0.3678314989981802, -0.1252334085114689, 0.1252334085114689,  0.3678314989981802,
    0.5873179542866175,  0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGw[kNg] = {
    0.04717533638651183, 0.10693932599531843, 0.16007832854334622, 0.20316742672306592,
    0.23349253653835481, 0.24914704581340277, 0.24914704581340277, 0.23349253653835481,
    0.20316742672306592, 0.16007832854334622, 0.10693932599531843, 0.04717533638651183};

struct PanelRule {
    std::vector<double> x, w;
};

PanelRule panels_gauss(const std::vector<double>& breaks) {
    PanelRule rule;
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        for (int g = 0; g < kNg; ++g) {
            rule.x.push_back(0.5 * (b - a) * kGx[g] + 0.5 * (a + b));
            rule.w.push_back(0.5 * (b - a) * kGw[g]);
        }
    }
    return rule;
}

// radial panel breaks: geometric grading toward 0, eps/2-wide panels around
// the evaluation radius where the blob peaks, geometric tail far out
std::vector<double> radial_breaks(double r, double eps, double tail_mult) {
    std::set<double> b = {0.0};
    const double smax = r + tail_mult * eps;
    for (double s = r / 16777216.0; s < 0.6 * r; s *= 2.0) b.insert(s);
    for (int k = -24; k <= 24; ++k) {
        const double p = r + 0.5 * eps * k;
        if (p > 0.0 && p <= smax) b.insert(p);
    }
    for (double s = r + 12.5 * eps; s < smax; s *= 1.3) b.insert(s);
    b.insert(smax);
    std::vector<double> out;
    for (double v : b)
        if (v <= smax) out.push_back(v);
    return out;
}

std::vector<double> angular_breaks(double r, double eps) {
    std::set<double> b = {0.0, M_PI};
    const double floor = 1e-3 * std::min(1.0, eps / r);
    for (double t = 0.5 * M_PI; t > floor; t *= 0.5) b.insert(t);
    return {b.begin(), b.end()};
}

} // namespace

std::pair<double, double> convolve_reg2d(double r, double eps) {
    const PanelRule sr = panels_gauss(radial_breaks(r, eps, 4000.0));
    const PanelRule tr = panels_gauss(angular_breaks(r, eps));
    const double pref = 1.0 / (4.0 * M_PI);
    double u11 = 0.0, u22 = 0.0;
    for (size_t is = 0; is < sr.x.size(); ++is) {
        const double s = sr.x[is];
        const double logs = std::log(s);
        for (size_t it = 0; it < tr.x.size(); ++it) {
            const double ct = std::cos(tr.x[it]);
            const double rho2 = r * r + s * s - 2.0 * r * s * ct;
            const double blob =
                3.0 * eps * eps * eps / (2.0 * M_PI * std::pow(rho2 + eps * eps, 2.5));
            const double meas = s * sr.w[is] * tr.w[it] * 2.0; // theta symmetry
            u11 += blob * pref * (-logs + ct * ct) * meas;
            u22 += blob * pref * (-logs + (1.0 - ct * ct)) * meas;
        }
    }
    return {u11, u22};
}

std::pair<double, double> convolve_reg3d(double r, double eps) {
    const PanelRule sr = panels_gauss(radial_breaks(r, eps, 400.0));
    const PanelRule tr = panels_gauss(angular_breaks(r, eps));
    double u11 = 0.0, u22 = 0.0;
    for (size_t is = 0; is < sr.x.size(); ++is) {
        const double s = sr.x[is];
        for (size_t it = 0; it < tr.x.size(); ++it) {
            const double t = tr.x[it];
            const double ct = std::cos(t);
            const double rho2 = r * r + s * s - 2.0 * r * s * ct;
            const double blob =
                15.0 * std::pow(eps, 4) / (8.0 * M_PI * std::pow(rho2 + eps * eps, 3.5));
            // phi-averaged singular kernel entries on the sphere of radius s
            const double f11 = (1.0 + ct * ct) / (4.0 * s);
            const double f22 = (2.0 + (1.0 - ct * ct)) / (8.0 * s);
            const double meas = s * s * std::sin(t) * sr.w[is] * tr.w[it];
            u11 += blob * f11 * meas;
            u22 += blob * f22 * meas;
        }
    }
    return {u11, u22};
}

MatrixXd dense_operator(const std::function<VectorXd(const VectorXd&)>& op, int n) {
    MatrixXd m(n, n);
    VectorXd e = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        e[i] = 1.0;
        m.col(i) = op(e);
        e[i] = 0.0;
    }
    return m;
}

VectorXd central_difference(const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
                            const VectorXd& v, double h) {
    return (f(x + h * v) - f(x - h * v)) / (2.0 * h);
}

double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
    const size_t n = h.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MatrixXd expm(const MatrixXd& a) { return a.exp(); }

VectorXd random_positions(stokesim::Rng& rng, int dim, int n) {
    // jittered lattice: sites one unit apart, jitter up to 0.3 per axis,
    // so markers stay at least 0.4 apart
    const int m = static_cast<int>(std::ceil(std::pow(double(n), 1.0 / dim)));
    VectorXd x(static_cast<long>(dim) * n);
    for (int k = 0; k < n; ++k) {
        int rem = k;
        for (int d = 0; d < dim; ++d) {
            const int cell = rem % m;
            rem /= m;
            x[static_cast<long>(dim) * k + d] = cell + 0.3 * (2.0 * rng.uniform01() - 1.0);
        }
    }
    return x;
}

VectorXd random_vector(stokesim::Rng& rng, int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
    return v;
}

} // namespace testsupport
