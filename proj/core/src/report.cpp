#include "stokesim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stokesim/errors.hpp"

namespace stokesim {

namespace {

constexpr const char* kBreakdownSchema = "# schema: breakdown-v1";
constexpr const char* kTrajectorySchema = "# schema: trajectory-v1";
constexpr const char* kConvergeSchema = "# schema: converge-v1";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    return out;
}

std::vector<double> split_numbers(const std::string& line, const std::string& path) {
    std::vector<double> vals;
    size_t pos = 0;
    while (pos <= line.size()) {
        size_t next = line.find(',', pos);
        if (next == std::string::npos) next = line.size();
        const std::string tok = line.substr(pos, next - pos);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str()) throw ConfigError("bad number in csv '" + path + "': " + tok);
        vals.push_back(v);
        pos = next + 1;
        if (next == line.size()) break;
    }
    return vals;
}

} // namespace

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

BreakdownTable tabulate(const ErrorBreakdown& breakdown) {
    BreakdownTable table;
    table.rows.reserve(breakdown.intervals.size());
    double cr = 0.0, ce = 0.0, cq = 0.0, cre = 0.0;
    for (const auto& iv : breakdown.intervals) {
        BreakdownRow row;
        row.t0 = iv.t0;
        row.t1 = iv.t1;
        row.e_r = iv.e_r;
        row.e_e = iv.e_e;
        row.e_q = iv.e_q;
        row.e_re = iv.e_re;
        cr += iv.e_r;
        ce += iv.e_e;
        cq += iv.e_q;
        cre += iv.e_re;
        row.cum_r = cr;
        row.cum_e = ce;
        row.cum_q = cq;
        row.cum_re = cre;
        row.z_norm = iv.z_norm_start;
        table.rows.push_back(row);
    }
    return table;
}

void write_breakdown_csv(const std::string& path, const BreakdownTable& table) {
    std::ofstream out = open_out(path);
    out << kBreakdownSchema << "\n";
    out << "t_n,t_np1,E_R,E_E,E_Q,E_Re,cum_R,cum_E,cum_Q,cum_Re,z_norm\n";
    for (const auto& r : table.rows) {
        out << format_g17(r.t0) << ',' << format_g17(r.t1) << ',' << format_g17(r.e_r) << ','
            << format_g17(r.e_e) << ',' << format_g17(r.e_q) << ',' << format_g17(r.e_re) << ','
            << format_g17(r.cum_r) << ',' << format_g17(r.cum_e) << ',' << format_g17(r.cum_q)
            << ',' << format_g17(r.cum_re) << ',' << format_g17(r.z_norm) << "\n";
    }
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

BreakdownTable read_breakdown_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open csv '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kBreakdownSchema)
        throw ConfigError("'" + path + "' is not a breakdown csv (missing schema line)");
    if (!std::getline(in, line)) throw ConfigError("'" + path + "' has no header row");
    BreakdownTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<double> v = split_numbers(line, path);
        if (v.size() != 11)
            throw ConfigError("'" + path + "': expected 11 columns, got " +
                              std::to_string(v.size()));
        BreakdownRow r;
        r.t0 = v[0];
        r.t1 = v[1];
        r.e_r = v[2];
        r.e_e = v[3];
        r.e_q = v[4];
        r.e_re = v[5];
        r.cum_r = v[6];
        r.cum_e = v[7];
        r.cum_q = v[8];
        r.cum_re = v[9];
        r.z_norm = v[10];
        table.rows.push_back(r);
    }
    return table;
}

void write_trajectory_csv(const std::string& path, const ForwardTrajectory& traj) {
    std::ofstream out = open_out(path);
    out << kTrajectorySchema << "\n";
    const long k = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (long i = 0; i < k; ++i) out << ",x" << i;
    out << "\n";
    for (size_t n = 0; n < traj.times.size(); ++n) {
        out << format_g17(traj.times[n]);
        for (long i = 0; i < k; ++i) out << ',' << format_g17(traj.states[n][i]);
        out << "\n";
    }
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
    std::ofstream out = open_out(path);
    out << kConvergeSchema << "\n";
    out << "dt,error,factor\n";
    for (const auto& r : rows)
        out << format_g17(r.dt) << ',' << format_g17(r.error) << ',' << format_g17(r.factor)
            << "\n";
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_snapshot_json(const std::string& path, const MrsSystem& sys, double t,
                         const VectorXd& x, bool reg_include_self) {
    const int dim = sys.dimension();
    const int n = sys.n_markers();
    nlohmann::json j;
    j["schema"] = "snapshot-v1";
    j["t"] = t;
    j["dimension"] = dim;
    nlohmann::json pos = nlohmann::json::array();
    for (int k = 0; k < n; ++k) {
        nlohmann::json p = nlohmann::json::array();
        for (int d = 0; d < dim; ++d) p.push_back(x[dim * k + d]);
        pos.push_back(std::move(p));
    }
    j["positions"] = std::move(pos);
    const VectorXd mag = mobility_difference_magnitude(sys, x, reg_include_self);
    j["reg_error_magnitude"] = std::vector<double>(mag.data(), mag.data() + mag.size());
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_manifest(const std::string& path, const nlohmann::json& manifest) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out = open_out(tmp);
        out << manifest.dump(2) << "\n";
        if (!out) throw ConfigError("failed writing '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("cannot move manifest into place at '" + path + "'");
    }
}

namespace {

struct Series {
    std::vector<double> t, v;
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void draw_panel(std::ostream& os, double px, double py, double pw, double ph,
                const std::string& title, const Series& s, bool log_scale, const char* color) {
    const double ml = 58.0, mr = 12.0, mt = 26.0, mb = 30.0;
    const double ax = px + ml, ay = py + mt;
    const double aw = pw - ml - mr, ah = ph - mt - mb;

    os << "<rect x='" << px << "' y='" << py << "' width='" << pw << "' height='" << ph
       << "' fill='none' stroke='#cccccc'/>\n";
    os << "<text x='" << px + pw / 2 << "' y='" << py + 17
       << "' text-anchor='middle' font-size='13' font-weight='bold'>" << title << "</text>\n";

    std::vector<double> tv, vv;
    for (size_t i = 0; i < s.t.size(); ++i) {
        const double val = s.v[i];
        if (log_scale && !(val > 0.0)) continue;
        if (!std::isfinite(val)) continue;
        tv.push_back(s.t[i]);
        vv.push_back(log_scale ? std::log10(val) : val);
    }
    if (tv.size() < 2) {
        os << "<text x='" << ax + aw / 2 << "' y='" << ay + ah / 2
           << "' text-anchor='middle' font-size='12' fill='#888888'>no data</text>\n";
        return;
    }
    double tmin = tv.front(), tmax = tv.front(), vmin = vv.front(), vmax = vv.front();
    for (size_t i = 0; i < tv.size(); ++i) {
        tmin = std::min(tmin, tv[i]);
        tmax = std::max(tmax, tv[i]);
        vmin = std::min(vmin, vv[i]);
        vmax = std::max(vmax, vv[i]);
    }
    if (tmax - tmin <= 0.0) tmax = tmin + 1.0;
    if (vmax - vmin <= 0.0) {
        vmax += 0.5;
        vmin -= 0.5;
    } else {
        const double pad = 0.05 * (vmax - vmin);
        vmax += pad;
        vmin -= pad;
    }

    const auto xpix = [&](double t) { return ax + (t - tmin) / (tmax - tmin) * aw; };
    const auto ypix = [&](double v) { return ay + ah - (v - vmin) / (vmax - vmin) * ah; };

    for (int i = 0; i <= 4; ++i) {
        const double vt = vmin + i * (vmax - vmin) / 4.0;
        const double y = ypix(vt);
        os << "<line x1='" << ax << "' y1='" << y << "' x2='" << ax + aw << "' y2='" << y
           << "' stroke='#eeeeee'/>\n";
        const double shown = log_scale ? std::pow(10.0, vt) : vt;
        os << "<text x='" << ax - 5 << "' y='" << y + 4
           << "' text-anchor='end' font-size='10'>" << fmt_tick(shown) << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double tt = tmin + i * (tmax - tmin) / 4.0;
        const double x = xpix(tt);
        os << "<line x1='" << x << "' y1='" << ay << "' x2='" << x << "' y2='" << ay + ah
           << "' stroke='#f4f4f4'/>\n";
        os << "<text x='" << x << "' y='" << ay + ah + 16
           << "' text-anchor='middle' font-size='10'>" << fmt_tick(tt) << "</text>\n";
    }
    os << "<rect x='" << ax << "' y='" << ay << "' width='" << aw << "' height='" << ah
       << "' fill='none' stroke='#444444'/>\n";

    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.6' points='";
    for (size_t i = 0; i < tv.size(); ++i)
        os << xpix(tv[i]) << ',' << ypix(vv[i]) << (i + 1 < tv.size() ? " " : "");
    os << "'/>\n";
}

} // namespace

void write_breakdown_plot_svg(const std::string& path, const BreakdownTable& table,
                              bool log_scale) {
    Series cum_e, cum_r, cum_re, znorm;
    for (const auto& r : table.rows) {
        cum_e.t.push_back(r.t1);
        cum_e.v.push_back(std::abs(r.cum_e));
        cum_r.t.push_back(r.t1);
        cum_r.v.push_back(std::abs(r.cum_r));
        cum_re.t.push_back(r.t1);
        cum_re.v.push_back(std::abs(r.cum_re));
        znorm.t.push_back(r.t0);
        znorm.v.push_back(r.z_norm);
    }

    const double W = 980.0, H = 720.0, gap = 10.0;
    const double pw = (W - 3.0 * gap) / 2.0, ph = (H - 3.0 * gap) / 2.0;
    std::ofstream out = open_out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
    out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
    const char* suffix = log_scale ? " (log)" : "";
    draw_panel(out, gap, gap, pw, ph, std::string("cumulative |E_E|") + suffix, cum_e,
               log_scale, "#1f77b4");
    draw_panel(out, 2 * gap + pw, gap, pw, ph, std::string("cumulative |E_R|") + suffix, cum_r,
               log_scale, "#d62728");
    draw_panel(out, gap, 2 * gap + ph, pw, ph, std::string("cumulative |E_Re|") + suffix,
               cum_re, log_scale, "#2ca02c");
    draw_panel(out, 2 * gap + pw, 2 * gap + ph, pw, ph, std::string("adjoint norm") + suffix,
               znorm, log_scale, "#9467bd");
    out << "</svg>\n";
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

} // namespace stokesim
