#include "minigp/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "minigp/errors.hpp"

namespace minigp {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_tick(double v) {
    std::ostringstream os;
    if (v != 0.0 && (std::fabs(v) >= 1e4 || std::fabs(v) < 1e-2)) {
        os.precision(1);
        os << std::scientific << v;
    } else {
        os.precision(4);
        os << v;
    }
    return os.str();
}

} // namespace

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min, y_min = x_min, y_max = -x_min;
    for (const auto& s : spec.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = spec.log_x ? std::log10(std::max(s.x[i], 1e-12)) : s.x[i];
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) {
        const double v = spec.log_x ? std::log10(std::max(x, 1e-12)) : x;
        return kMarginLeft + (v - x_min) / (x_max - x_min) * plot_w;
    };
    auto sy = [&](double y) {
        return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h;
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write plot: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

    // axes and ticks
    out << "<g stroke=\"#333\" stroke-width=\"1\">\n"
        << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n"
        << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n</g>\n";
    const int ticks = 5;
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / ticks;
        const double px = kMarginLeft + plot_w * i / ticks;
        const double label = spec.log_x ? std::pow(10.0, fx) : fx;
        out << "<line x1=\"" << px << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << px
            << "\" y2=\"" << kMarginTop + plot_h + 4 << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << kMarginTop + plot_h + 18
            << "\" text-anchor=\"middle\">" << fmt_tick(label) << "</text>\n";
        const double fy = y_min + (y_max - y_min) * i / ticks;
        const double py = sy(fy);
        out << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << py << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << kMarginTop + plot_h / 2 << ")\">" << spec.y_label << "</text>\n</g>\n";

    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const auto& series = spec.series[s];
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series.x.size(); ++i) {
            out << sx(series.x[i]) << ',' << sy(series.y[i]) << ' ';
        }
        out << "\"/>\n";
        const double ly = kMarginTop + 14.0 * static_cast<double>(s);
        out << "<line x1=\"" << kMarginLeft + plot_w - 150 << "\" y1=\"" << ly + 4 << "\" x2=\""
            << kMarginLeft + plot_w - 130 << "\" y2=\"" << ly + 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kMarginLeft + plot_w - 125 << "\" y=\"" << ly + 8
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series.label
            << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<std::filesystem::path> plot_summaries(
    const std::vector<std::filesystem::path>& summary_paths,
    const std::filesystem::path& out_dir) {
    using nlohmann::json;
    PlotSpec regret{"Normalized average regret", "step t", "R_t/t (uniform = 1)", true, {}};
    PlotSpec unique{"Unique candidates", "step t", "q_t", true, {}};
    PlotSpec wall{"Regret against wall-clock", "wall-clock (s)", "R_t/t (uniform = 1)", false, {}};

    for (const auto& path : summary_paths) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read summary: " + path.string());
        json j;
        in >> j;
        const std::string label = j.at("algorithm").get<std::string>() + " " +
                                  j.at("combination").at("label").get<std::string>();
        const auto norm = j.at("curves").at("normalized_average_regret").at("mean");
        const auto qt = j.at("curves").at("unique_count").at("mean");
        const auto wc = j.at("curves").at("wall_clock_seconds").at("mean");

        PlotSeries r{label, {}, {}}, q{label, {}, {}}, w{label, {}, {}};
        for (std::size_t t = 0; t < norm.size(); ++t) {
            const auto step = static_cast<double>(t + 1);
            r.x.push_back(step);
            r.y.push_back(norm[t].get<double>());
            q.x.push_back(step);
            q.y.push_back(qt[t].get<double>());
            w.x.push_back(wc[t].get<double>());
            w.y.push_back(norm[t].get<double>());
        }
        regret.series.push_back(std::move(r));
        unique.series.push_back(std::move(q));
        wall.series.push_back(std::move(w));
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::vector<std::filesystem::path> written;
    const std::filesystem::path a = out_dir / "regret_vs_step.svg";
    const std::filesystem::path b = out_dir / "unique_vs_step.svg";
    const std::filesystem::path c = out_dir / "regret_vs_wallclock.svg";
    write_svg_plot(a, regret);
    write_svg_plot(b, unique);
    write_svg_plot(c, wall);
    written.push_back(a);
    written.push_back(b);
    written.push_back(c);
    return written;
}

} // namespace minigp
