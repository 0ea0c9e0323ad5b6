#include "alphalab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>

#include "json.hpp"

#include "alphalab/csv.hpp"

namespace alphalab::report {

Column parse_column(const std::string& text) {
    if (text == "turnover") return Column::Turnover;
    if (text == "max_drawdown") return Column::MaxDrawdown;
    if (text == "profit_pct") return Column::Profit;
    if (text == "sharpe") return Column::Sharpe;
    throw PreconditionError("unknown sort column '" + text + "'");
}

std::string metrics_table(std::vector<NamedReport> rows, Column sort_by) {
    auto key = [sort_by](const NamedReport& r) -> std::optional<double> {
        switch (sort_by) {
            case Column::Turnover: return r.report.mean_daily_turnover;
            case Column::MaxDrawdown: return r.report.max_drawdown;
            case Column::Profit: return r.report.profit_pct;
            case Column::Sharpe: return r.report.sharpe;
        }
        return std::nullopt;
    };
    std::stable_sort(rows.begin(), rows.end(), [](const NamedReport& a, const NamedReport& b) { return a.name < b.name; });
    std::stable_sort(rows.begin(), rows.end(), [&](const NamedReport& a, const NamedReport& b) {
        auto ka = key(a), kb = key(b);
        if (!ka || !kb) return ka.has_value() && !kb.has_value();
        return *ka > *kb;
    });
    std::string out = std::string(metrics::kReportHeader) + "\n";
    for (const auto& r : rows) out += metrics::to_csv_row(r.name, r.report) + "\n";
    return out;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Frame {
    double width = 900, height = 480;
    double left = 70, right = 180, top = 40, bottom = 50;
    double x0, x1, y0, y1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

std::string svg_open(const Frame& f, const std::string& title) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) + "\" height=\"" + num(f.height) +
         "\" viewBox=\"0 0 " + num(f.width) + " " + num(f.height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(f.width) + "\" height=\"" + num(f.height) + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(f.width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + xml_escape(title) +
         "</text>\n";
    return s;
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel, const std::string& xlo,
                 const std::string& xhi) {
    std::string s;
    s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.height - f.bottom) + "\" x2=\"" + num(f.width - f.right) +
         "\" y2=\"" + num(f.height - f.bottom) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.top) + "\" x2=\"" + num(f.left) + "\" y2=\"" +
         num(f.height - f.bottom) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(f.left) + "\" y=\"" + num(f.height - f.bottom + 18) + "\" font-size=\"11\">" +
         xml_escape(xlo) + "</text>\n";
    s += "<text x=\"" + num(f.width - f.right) + "\" y=\"" + num(f.height - f.bottom + 18) +
         "\" text-anchor=\"end\" font-size=\"11\">" + xml_escape(xhi) + "</text>\n";
    s += "<text x=\"" + num((f.left + f.width - f.right) / 2) + "\" y=\"" + num(f.height - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(xlabel) + "</text>\n";
    s += "<text x=\"16\" y=\"" + num((f.top + f.height - f.bottom) / 2) + "\" font-size=\"12\" transform=\"rotate(-90 16 " +
         num((f.top + f.height - f.bottom) / 2) + ")\" text-anchor=\"middle\">" + xml_escape(ylabel) + "</text>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(f.y1) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         csv::format(f.y1) + "</text>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(f.y0) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         csv::format(f.y0) + "</text>\n";
    return s;
}

std::string polyline(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
    std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ' ';
        s += num(f.px(xs[i])) + "," + num(f.py(ys[i]));
    }
    return s + "\"/>\n";
}

std::string legend(const Frame& f, std::size_t i, const std::string& name, const char* color) {
    double y = f.top + 14.0 * static_cast<double>(i);
    double x = f.width - f.right + 12;
    return "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 18) + "\" y2=\"" + num(y) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n<text x=\"" + num(x + 22) + "\" y=\"" + num(y + 4) +
           "\" font-size=\"11\">" + xml_escape(name) + "</text>\n";
}

}  // namespace

std::string pnl_plot(const std::vector<Curve>& curves, Date test_start, const std::string& title) {
    Frame f;
    f.x0 = std::numeric_limits<double>::infinity();
    f.x1 = -f.x0;
    f.y0 = 0.0;
    f.y1 = 0.0;
    for (const auto& c : curves) {
        if (!c.dates.empty()) {
            f.x0 = std::min(f.x0, static_cast<double>(c.dates.front().days_since_epoch()));
            f.x1 = std::max(f.x1, static_cast<double>(c.dates.back().days_since_epoch()));
        }
        for (double v : c.values) {
            f.y0 = std::min(f.y0, v);
            f.y1 = std::max(f.y1, v);
        }
    }
    if (!std::isfinite(f.x0)) f.x0 = f.x1 = static_cast<double>(test_start.days_since_epoch());
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);

    std::string s = svg_open(f, title);
    s += axes(f, "date", "cumulative pnl", Date::from_days(static_cast<std::int64_t>(std::ceil(f.x0))).to_string(),
              Date::from_days(static_cast<std::int64_t>(std::floor(f.x1))).to_string());
    const double tx = static_cast<double>(test_start.days_since_epoch());
    if (tx >= f.x0 && tx <= f.x1) {
        s += "<line class=\"test-start\" x1=\"" + num(f.px(tx)) + "\" y1=\"" + num(f.top) + "\" x2=\"" + num(f.px(tx)) +
             "\" y2=\"" + num(f.height - f.bottom) + "\" stroke=\"red\" stroke-dasharray=\"4,4\"/>\n";
    }
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        std::vector<double> xs;
        for (Date d : curves[i].dates) xs.push_back(static_cast<double>(d.days_since_epoch()));
        s += polyline(f, xs, curves[i].values, color);
        s += legend(f, i, curves[i].name, color);
    }
    return s + "</svg>\n";
}

std::string heatmap(const Matrix& corr, const std::vector<std::string>& names, const std::string& title) {
    if (corr.rows() != corr.cols() || corr.rows() != names.size()) {
        throw PreconditionError("heatmap: matrix must be square with one name per row");
    }
    const double n = static_cast<double>(names.size());
    const double cell = names.size() > 12 ? 24.0 : 40.0, margin = 150.0;
    Frame f;
    f.width = margin + cell * n + 90;
    f.height = margin + cell * n + 20;
    std::string s = svg_open(f, title);
    auto color = [](double v) {
        v = std::clamp(v, -1.0, 1.0);
        int r, g, b;
        if (v >= 0) {
            r = 255;
            g = b = static_cast<int>(std::lround(255.0 * (1.0 - v)));
        } else {
            b = 255;
            r = g = static_cast<int>(std::lround(255.0 * (1.0 + v)));
        }
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < names.size(); ++i) {
        double y = margin + cell * static_cast<double>(i);
        s += "<text x=\"" + num(margin - 6) + "\" y=\"" + num(y + cell / 2 + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
             xml_escape(names[i]) + "</text>\n";
        double x = margin + cell * static_cast<double>(i) + cell / 2;
        s += "<text x=\"" + num(x) + "\" y=\"" + num(margin - 6) + "\" font-size=\"11\" transform=\"rotate(-60 " + num(x) +
             " " + num(margin - 6) + ")\">" + xml_escape(names[i]) + "</text>\n";
        for (std::size_t j = 0; j < names.size(); ++j) {
            double cx = margin + cell * static_cast<double>(j);
            s += "<rect x=\"" + num(cx) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
                 "\" fill=\"" + color(corr(i, j)) + "\"><title>" + xml_escape(names[i] + " / " + names[j]) + ": " +
                 csv::format(corr(i, j)) + "</title></rect>\n";
        }
    }
    // colour bar
    const double bx = margin + cell * n + 30;
    for (int k = 0; k < 20; ++k) {
        double v = 1.0 - 2.0 * k / 19.0;
        s += "<rect x=\"" + num(bx) + "\" y=\"" + num(margin + k * cell * n / 20) + "\" width=\"16\" height=\"" +
             num(cell * n / 20 + 0.5) + "\" fill=\"" + color(v) + "\"/>\n";
    }
    s += "<text x=\"" + num(bx + 20) + "\" y=\"" + num(margin + 8) + "\" font-size=\"11\">1</text>\n";
    s += "<text x=\"" + num(bx + 20) + "\" y=\"" + num(margin + cell * n) + "\" font-size=\"11\">-1</text>\n";
    return s + "</svg>\n";
}

namespace {
// log(1) from a log-spaced grid lands a few ulps off zero.
double ln_snapped(double c) {
    const double v = std::log(c);
    return std::abs(v) < 1e-12 ? 0.0 : v;
}
}  // namespace

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0 && hi > 0) || n < 2) throw PreconditionError("log_spaced needs positive bounds and n >= 2");
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = std::exp(a * (1.0 - f) + b * f);
    }
    return out;
}

SweepResult loss_sweep(const std::vector<losses::LossKind>& kinds, const std::vector<double>& magnitudes,
                       std::span<const double> alpha, std::span<const double> r, const losses::LossSpec& base) {
    SweepResult s{magnitudes, kinds, Matrix(magnitudes.size(), kinds.size())};
    std::vector<double> scaled(alpha.size());
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        for (std::size_t k = 0; k < alpha.size(); ++k) scaled[k] = magnitudes[i] * alpha[k];
        for (std::size_t j = 0; j < kinds.size(); ++j) {
            losses::LossSpec spec = base;
            spec.kind = kinds[j];
            s.values(i, j) = losses::evaluate(spec, scaled, r).value;
        }
    }
    return s;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::string out = "c,ln_c";
    for (auto k : sweep.kinds) out += "," + losses::to_string(k);
    out += "\n";
    for (std::size_t i = 0; i < sweep.magnitudes.size(); ++i) {
        out += csv::format(sweep.magnitudes[i]) + "," + csv::format(ln_snapped(sweep.magnitudes[i]));
        for (double v : sweep.values.row(i)) out += "," + csv::format(v);
        out += "\n";
    }
    return out;
}

std::string sweep_svg(const SweepResult& sweep) {
    Frame f;
    std::vector<double> xs;
    for (double c : sweep.magnitudes) xs.push_back(std::log(c));
    f.x0 = xs.empty() ? 0.0 : xs.front();
    f.x1 = xs.empty() ? 1.0 : xs.back();
    f.y0 = std::numeric_limits<double>::infinity();
    f.y1 = -f.y0;
    for (double v : sweep.values.flat()) {
        f.y0 = std::min(f.y0, v);
        f.y1 = std::max(f.y1, v);
    }
    if (!std::isfinite(f.y0)) f.y0 = f.y1 = 0.0;
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);
    std::string s = svg_open(f, "Loss value vs position magnitude");
    s += axes(f, "ln c", "loss", csv::format(f.x0), csv::format(f.x1));
    for (std::size_t j = 0; j < sweep.kinds.size(); ++j) {
        std::vector<double> ys;
        for (std::size_t i = 0; i < sweep.magnitudes.size(); ++i) ys.push_back(sweep.values(i, j));
        const char* color = kPalette[j % std::size(kPalette)];
        s += polyline(f, xs, ys, color);
        s += legend(f, j, losses::to_string(sweep.kinds[j]), color);
    }
    return s + "</svg>\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string manifest_json(std::string_view config_text, std::uint64_t seed, const std::vector<std::string>& files) {
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(config_text)));
    auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    auto secs = now.time_since_epoch().count();
    auto day = Date::from_epoch_seconds(secs);
    auto tod = secs - day.epoch_seconds();
    char stamp[40];
    std::snprintf(stamp, sizeof stamp, "%sT%02lld:%02lld:%02lldZ", day.to_string().c_str(),
                  static_cast<long long>(tod / 3600), static_cast<long long>(tod / 60 % 60),
                  static_cast<long long>(tod % 60));
    nlohmann::json doc;
    doc["config_hash"] = std::string("fnv1a64:") + hash;
    doc["seed"] = seed;
    doc["created_utc"] = stamp;
    doc["files"] = files;
    return doc.dump(2) + "\n";
}

}  // namespace alphalab::report
