#include "stokesim/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace stokesim {

namespace {

ButcherTableau make_tableau(std::string name, int order,
                            const std::vector<std::vector<double>>& a,
                            std::vector<double> b) {
    const int s = static_cast<int>(b.size());
    ButcherTableau t;
    t.name = std::move(name);
    t.order = order;
    t.a = Eigen::MatrixXd::Zero(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < static_cast<int>(a[i].size()); ++j) t.a(i, j) = a[i][j];
    // force sum(b) == 1 exactly: the last weight is defined as the remainder
    double partial = 0.0;
    for (int i = 0; i < s - 1; ++i) partial += b[i];
    b[s - 1] = 1.0 - partial;
    t.b = Eigen::Map<const VectorXd>(b.data(), s);
    // c is defined as the row sum, so c == rowsum(a) holds bitwise
    t.c = VectorXd::Zero(s);
    for (int i = 0; i < s; ++i) {
        double ci = 0.0;
        for (int j = 0; j < s; ++j) ci += t.a(i, j);
        t.c[i] = ci;
    }
    return t;
}

} // namespace

ButcherTableau ButcherTableau::heun() {
    return make_tableau("heun", 2, {{}, {1.0}}, {0.5, 0.5});
}

ButcherTableau ButcherTableau::rk4() {
    return make_tableau("rk4", 4,
                        {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
                        {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6});
}

ButcherTableau ButcherTableau::rk6() {
    return make_tableau(
        "rk6", 6,
        {{},
         {1.0 / 2},
         {2.0 / 9, 4.0 / 9},
         {7.0 / 36, 2.0 / 9, -1.0 / 12},
         {-35.0 / 144, -55.0 / 36, 35.0 / 48, 15.0 / 8},
         {-1.0 / 360, -11.0 / 36, -1.0 / 8, 1.0 / 2, 1.0 / 10},
         {-41.0 / 260, 22.0 / 13, 43.0 / 156, -118.0 / 39, 32.0 / 195, 80.0 / 39}},
        {13.0 / 200, 0.0, 11.0 / 40, 11.0 / 40, 4.0 / 25, 4.0 / 25, 13.0 / 200});
}

ButcherTableau ButcherTableau::by_name(const std::string& name) {
    if (name == "heun") return heun();
    if (name == "rk4") return rk4();
    if (name == "rk6") return rk6();
    throw ConfigError("unknown integrator '" + name + "' (expected heun, rk4, or rk6)");
}

ButcherTableau ButcherTableau::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tableau file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("tableau file " + path + ": " + e.what());
    }
    ButcherTableau t;
    try {
        t.name = j.value("name", std::string("custom"));
        t.order = j.at("order").get<int>();
        const int s = j.at("stages").get<int>();
        const auto a = j.at("a").get<std::vector<std::vector<double>>>();
        const auto b = j.at("b").get<std::vector<double>>();
        const auto c = j.at("c").get<std::vector<double>>();
        if (static_cast<int>(a.size()) != s || static_cast<int>(b.size()) != s ||
            static_cast<int>(c.size()) != s)
            throw ConfigError("tableau file " + path + ": a, b, c must all have 'stages' rows");
        t.a = Eigen::MatrixXd::Zero(s, s);
        for (int i = 0; i < s; ++i) {
            if (static_cast<int>(a[i].size()) > s)
                throw ConfigError("tableau file " + path + ": row of a too long");
            for (int k = 0; k < static_cast<int>(a[i].size()); ++k) t.a(i, k) = a[i][k];
        }
        t.b = Eigen::Map<const VectorXd>(b.data(), s);
        t.c = Eigen::Map<const VectorXd>(c.data(), s);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("tableau file " + path + ": " + e.what());
    }
    validate(t);
    return t;
}

void validate(const ButcherTableau& tab, double tol) {
    const int s = tab.stages();
    if (s < 1) throw ConfigError("tableau has no stages");
    if (tab.a.rows() != s || tab.a.cols() != s || tab.c.size() != s)
        throw ConfigError("tableau dimensions inconsistent");
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j)
            if (tab.a(i, j) != 0.0)
                throw ConfigError("tableau is not explicit: a(" + std::to_string(i) + "," +
                                  std::to_string(j) + ") nonzero");
    if (std::abs(tab.b.sum() - 1.0) > tol)
        throw ConfigError("tableau weights do not sum to 1");
    for (int i = 0; i < s; ++i) {
        double ci = 0.0;
        for (int j = 0; j < s; ++j) ci += tab.a(i, j);
        if (std::abs(ci - tab.c[i]) > tol)
            throw ConfigError("tableau abscissa c(" + std::to_string(i) + ") does not match row sum");
    }
}

VectorXd rk_combine(const VectorXd& x, double dt, const VectorXd& b,
                    const std::vector<VectorXd>& stages) {
    VectorXd acc = VectorXd::Zero(x.size());
    for (std::size_t l = 0; l < stages.size(); ++l) acc += b[static_cast<int>(l)] * stages[l];
    return x + dt * acc;
}

VectorXd rk_step(const ButcherTableau& tab, const Rhs& rhs, double t, const VectorXd& x,
                 double dt, std::vector<VectorXd>& stages) {
    const int s = tab.stages();
    stages.assign(s, VectorXd());
    for (int l = 0; l < s; ++l) {
        VectorXd xs = x;
        for (int j = 0; j < l; ++j)
            if (tab.a(l, j) != 0.0) xs += (dt * tab.a(l, j)) * stages[j];
        stages[l] = rhs(t + tab.c[l] * dt, xs);
    }
    return rk_combine(x, dt, tab.b, stages);
}

namespace {

ForwardTrajectory solve_over(const ButcherTableau& tab, const Rhs& rhs, const VectorXd& x0,
                             std::vector<double> partition) {
    validate(tab);
    if (partition.size() < 2) throw ConfigError("time partition needs at least two nodes");
    for (std::size_t i = 0; i + 1 < partition.size(); ++i)
        if (!(partition[i + 1] > partition[i]))
            throw ConfigError("time partition must be strictly increasing");

    ForwardTrajectory traj;
    traj.tableau = tab;
    traj.times = std::move(partition);
    const int m = static_cast<int>(traj.times.size()) - 1;
    traj.states.reserve(m + 1);
    traj.stages.resize(m);
    traj.states.push_back(x0);
    for (int n = 0; n < m; ++n) {
        const double dt = traj.times[n + 1] - traj.times[n];
        VectorXd next = rk_step(tab, rhs, traj.times[n], traj.states.back(), dt, traj.stages[n]);
        if (!next.allFinite()) {
            std::ostringstream os;
            os << "state became non-finite in step " << n << " at t = " << traj.times[n + 1];
            throw NumericalError(os.str());
        }
        traj.states.push_back(std::move(next));
    }
    return traj;
}

} // namespace

ForwardTrajectory solve_forward(const ButcherTableau& tab, const Rhs& rhs, const VectorXd& x0,
                                double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw ConfigError("step size must be positive");
    if (!(t1 > t0)) throw ConfigError("time span must be nonempty");
    const double steps_real = (t1 - t0) / dt;
    const long steps = std::lround(steps_real);
    if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
        throw ConfigError("step size must divide the time span evenly");
    std::vector<double> partition(steps + 1);
    for (long n = 0; n <= steps; ++n)
        partition[n] = t0 + (t1 - t0) * (static_cast<double>(n) / static_cast<double>(steps));
    partition.back() = t1;
    return solve_over(tab, rhs, x0, std::move(partition));
}

ForwardTrajectory solve_forward(const ButcherTableau& tab, const Rhs& rhs, const VectorXd& x0,
                                const std::vector<double>& partition) {
    return solve_over(tab, rhs, x0, partition);
}

VectorXd stage_extrapolant(const ForwardTrajectory& traj, int interval, int stage, double t) {
    const auto& ks = traj.stages.at(interval);
    const VectorXd& xn = traj.states.at(interval);
    const double tn = traj.times.at(interval);
    const double cl = traj.tableau.c[stage];
    if (cl == 0.0) return xn + (t - tn) * ks.at(stage);
    VectorXd slope = VectorXd::Zero(xn.size());
    for (int j = 0; j < stage; ++j)
        if (traj.tableau.a(stage, j) != 0.0) slope += traj.tableau.a(stage, j) * ks[j];
    return xn + ((t - tn) / cl) * slope;
}

int NefemTrajectory::interval_of(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    long idx = std::distance(times.begin(), it) - 1;
    idx = std::clamp<long>(idx, 0, static_cast<long>(times.size()) - 2);
    return static_cast<int>(idx);
}

VectorXd NefemTrajectory::eval_on(int interval, double t) const {
    const double tau = t - times.at(interval);
    const auto& c = coeff.at(interval);
    VectorXd out = c.back();
    for (int p = static_cast<int>(c.size()) - 2; p >= 0; --p) out = c[p] + tau * out;
    return out;
}

VectorXd NefemTrajectory::eval_derivative_on(int interval, double t) const {
    const double tau = t - times.at(interval);
    const auto& c = coeff.at(interval);
    const int q = static_cast<int>(c.size()) - 1;
    VectorXd out = static_cast<double>(q) * c[q];
    for (int p = q - 1; p >= 1; --p) out = static_cast<double>(p) * c[p] + tau * out;
    return out;
}

VectorXd NefemTrajectory::eval(double t) const { return eval_on(interval_of(t), t); }

VectorXd NefemTrajectory::eval_derivative(double t) const {
    return eval_derivative_on(interval_of(t), t);
}

NefemTrajectory nefem_reconstruct(const ForwardTrajectory& traj, int degree) {
    if (degree != 1 && degree != 2)
        throw ConfigError("reconstruction degree must be 1 or 2");
    NefemTrajectory rec;
    rec.times = traj.times;
    rec.degree = degree;
    const int m = traj.n_intervals();
    rec.coeff.resize(m);
    for (int n = 0; n < m; ++n) {
        const double dt = traj.dt(n);
        // The constant test mode pins a1 to the nodal update. The linear test
        // mode is integrated with the one-point midpoint rule, and the linear
        // Legendre mode vanishes at the interval midpoint, so its equation
        // reads a2 * dt^2 / 3 = 0: the quadratic coefficient is identically
        // zero and the reconstruction is the nodally exact affine interpolant.
        // This is what makes the interior accuracy second order for every
        // tableau while the nodes keep the full stepper order.
        VectorXd a1 = (traj.states[n + 1] - traj.states[n]) / dt;
        VectorXd a2 = VectorXd::Zero(traj.states[n].size());
        if (degree == 2)
            rec.coeff[n] = {traj.states[n], std::move(a1), std::move(a2)};
        else
            rec.coeff[n] = {traj.states[n], std::move(a1)};
    }
    return rec;
}

} // namespace stokesim
