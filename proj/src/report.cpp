// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/report.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace raqdoa::report
{
    namespace c = raqdoa::constants;

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    std::string sweep_csv(const harness::SweepTable &table)
    {
        std::string out = sweep_header;
        out += '\n';
        const std::string var = harness::variable_name(table.variable);
        const std::string seed = std::to_string(table.master_seed);
        for (const auto &r : table.rows)
        {
            out += var;
            out += ',';
            out += format_double(r.value);
            out += ',';
            out += r.estimator;
            out += ',';
            out += transducer::regime_name(r.regime);
            out += ',';
            out += format_double(r.mse);
            out += ',';
            out += std::to_string(r.trials);
            out += ',';
            out += std::to_string(r.excluded);
            out += ',';
            out += seed;
            out += '\n';
        }
        return out;
    }

    std::string sweep_svg(const harness::SweepTable &table)
    {
        constexpr double width = 720, height = 480, left = 70, right = 200, top = 30, bottom = 50;
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        std::vector<std::string> order;
        double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
        for (const auto &r : table.rows)
        {
            const std::string key = r.estimator + "/" + transducer::regime_name(r.regime);
            if (!series.count(key))
                order.push_back(key);
            auto &s = series[key];
            xmin = std::min(xmin, r.value);
            xmax = std::max(xmax, r.value);
            if (std::isfinite(r.mse) && r.mse > 0.0)
            {
                const double y = std::log10(r.mse);
                s.emplace_back(r.value, y);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
        if (!(xmax > xmin))
            xmax = xmin + 1.0;
        ymin = std::floor(ymin);
        ymax = std::ceil(ymax);
        if (!(ymax > ymin))
        {
            ymin = std::isfinite(ymin) ? ymin - 1.0 : -1.0;
            ymax = ymin + 2.0;
        }

        const double pw = width - left - right, ph = height - top - bottom;
        auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
        auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };
        static const char *const colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
           << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
        os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
           << "\" fill=\"none\" stroke=\"#000\"/>\n";
        for (double y = ymin; y <= ymax; y += 1.0)
            os << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">1e" << y
               << "</text>\n";
        for (const auto &r : table.rows)
            if (r.estimator == table.rows.front().estimator && r.regime == table.rows.front().regime)
                os << "<text x=\"" << px(r.value) << "\" y=\"" << height - bottom + 16
                   << "\" text-anchor=\"middle\">" << r.value << "</text>\n";
        os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
           << harness::variable_name(table.variable) << "</text>\n";
        os << "<text x=\"14\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 14 " << top + ph / 2
           << ")\" text-anchor=\"middle\">MSE (rad^2)</text>\n";
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            const char *col = colours[i % std::size(colours)];
            const auto &pts = series[order[i]];
            os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
            for (const auto &[x, y] : pts)
                os << px(x) << ',' << py(y) << ' ';
            os << "\"/>\n";
            const double ly = top + 12 + 14 * static_cast<double>(i);
            os << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 30
               << "\" y2=\"" << ly << "\" stroke=\"" << col << "\"/>\n";
            os << "<text x=\"" << width - right + 34 << "\" y=\"" << ly + 4 << "\">" << order[i] << "</text>\n";
        }
        os << "</svg>\n";
        return os.str();
    }

    std::string physics_csv(const harness::ExperimentConfig &cfg, const config::PhysicsGrid &grid)
    {
        std::string out = "delta_p_mhz,delta_c_mhz,delta_l_mhz,omega_rf_mhz,chi_re,chi_im,dchi_re,dchi_im,alpha2,"
                          "kappa,varphi,rho,phi_re,phi_im,varpi_psl,varpi_sql\n";
        const double alpha2 = atom::alpha2(cfg.atom, cfg.optics);
        const double nan = std::nan("");
        for (const auto &d : grid.detunings_mhz)
            for (double rf : grid.rf_rabi_mhz)
            {
                harness::ExperimentConfig point = cfg;
                point.optics.delta_p = c::two_pi * 1e6 * d[0];
                point.optics.delta_c = c::two_pi * 1e6 * d[1];
                point.optics.delta_l = point.lo.delta_l = c::two_pi * 1e6 * d[2];
                point.optics.omega_l = point.lo.omega_l = c::two_pi * 1e6 * rf;

                std::vector<double> v(10, nan);
                const num::Complex chi = atom::susceptibility(point.atom, point.optics, point.optics.omega_l, point.rational);
                try
                {
                    const harness::OperatingPoint op = harness::prepare(point);
                    const auto &fe = op.front_end;
                    v = {fe.chi_deriv.real(), fe.chi_deriv.imag(), alpha2, fe.kappa, fe.response.varphi,
                         fe.response.rho, fe.response.phi_ref.real(), fe.response.phi_ref.imag(), op.varpi_psl,
                         op.varpi_sql};
                }
                catch (const NumericalFailure &)
                {
                    v.assign(10, nan);
                    v[2] = alpha2;
                }
                catch (const UndefinedPhase &)
                {
                    v.assign(10, nan);
                    v[2] = alpha2;
                }
                std::vector<double> row{d[0], d[1], d[2], rf, chi.real(), chi.imag()};
                row.insert(row.end(), v.begin(), v.end());
                for (std::size_t i = 0; i < row.size(); ++i)
                {
                    if (i)
                        out += ',';
                    out += format_double(row[i]);
                }
                out += '\n';
            }
        return out;
    }
}
