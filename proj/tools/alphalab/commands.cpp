#include "alphalab/commands.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "alphalab/alphas.hpp"
#include "alphalab/backtest.hpp"
#include "alphalab/checkpoint.hpp"
#include "alphalab/config.hpp"
#include "alphalab/csv.hpp"
#include "alphalab/data.hpp"
#include "alphalab/models.hpp"
#include "alphalab/portfolio.hpp"
#include "alphalab/report.hpp"
#include "alphalab/synth.hpp"

namespace alphalab::cli {

namespace fs = std::filesystem;

namespace {

// Collects written files (relative to the output dir) for the manifest.
class Output {
public:
    Output(fs::path root, std::ostream& log) : root_(std::move(root)), log_(log) {}

    void write(const std::string& rel, std::string_view contents) {
        fs::path p = root_ / rel;
        fs::create_directories(p.parent_path());
        csv::write_file(p.string(), contents);
        files_.push_back(rel);
    }
    fs::path path(const std::string& rel) const { return root_ / rel; }
    const std::vector<std::string>& files() const { return files_; }
    std::ostream& log() { return log_; }

    void manifest(const std::string& command, const ExperimentConfig& cfg) {
        auto files = files_;
        write("manifest_" + command + ".json", report::manifest_json(cfg.source_text, cfg.seed, files));
    }

private:
    fs::path root_;
    std::ostream& log_;
    std::vector<std::string> files_;
};

std::vector<std::string> discover_assets(const DataSection& d) {
    if (!d.assets.empty()) return d.assets;
    if (!fs::is_directory(d.dir)) throw PreconditionError("data directory not found: " + d.dir);
    std::vector<std::string> assets;
    const std::string tail = "_1d.csv";
    for (const auto& entry : fs::directory_iterator(d.dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() > tail.size() && name.compare(name.size() - tail.size(), tail.size(), tail) == 0) {
            assets.push_back(name.substr(0, name.size() - tail.size()));
        }
    }
    std::sort(assets.begin(), assets.end());
    if (assets.empty()) throw PreconditionError("no <asset>_1d.csv files in " + d.dir);
    return assets;
}

std::string candle_path(const DataSection& d, const std::string& asset, data::Frequency f) {
    return (fs::path(d.dir) / (asset + "_" + data::suffix(f) + ".csv")).string();
}

std::vector<data::CandleSeries> load_daily(const DataSection& d) {
    std::vector<data::CandleSeries> out;
    for (const auto& a : discover_assets(d)) out.push_back(data::load_candles(candle_path(d, a, data::Frequency::Daily), data::Frequency::Daily));
    return out;
}

ReturnsPanel load_panel(const ExperimentConfig& cfg) { return data::build_panel(load_daily(cfg.data)); }

struct Samples {
    models::SampleSet set;
    models::ArchitectureConfig arch;
};

Samples build_samples(const ExperimentConfig& cfg, const ReturnsPanel& panel) {
    Samples s;
    s.arch = cfg.model.arch;
    if (cfg.data.features == FeatureSource::Daily) {
        s.set = models::build_daily_samples(panel, cfg.data.window_days, cfg.data.layout.scaling);
    } else {
        std::vector<models::AssetCandles> candles;
        for (const auto& a : panel.assets) {
            candles.push_back({data::load_candles(candle_path(cfg.data, a, data::Frequency::Daily), data::Frequency::Daily),
                               data::load_candles(candle_path(cfg.data, a, data::Frequency::Hourly), data::Frequency::Hourly),
                               data::load_candles(candle_path(cfg.data, a, data::Frequency::M15), data::Frequency::M15)});
        }
        s.set = models::build_mixed_samples(panel, candles, cfg.data.layout);
        if (cfg.model.pooled_day_steps) {
            s.set = models::pool_day_steps(s.set, cfg.data.layout);
            s.arch.step_width = models::kPooledStepWidth;
        }
    }
    if (s.set.dates.empty()) throw PreconditionError("no feature windows could be built from " + cfg.data.dir);
    return s;
}

// Rows whose target return is realized before `test_start`.
models::SampleSet training_rows(const models::SampleSet& s, const ReturnsPanel& panel, Date test_start) {
    std::size_t n = 0;
    while (n < s.dates.size()) {
        auto idx = panel.index_of(s.dates[n]);
        if (!idx || *idx + 1 >= panel.dates.size() || panel.dates[*idx + 1] >= test_start) break;
        ++n;
    }
    if (n < 2) throw PreconditionError("fewer than 2 training windows before test_start " + test_start.to_string());
    models::SampleSet out;
    out.assets = s.assets;
    out.features = s.features;
    out.dates.assign(s.dates.begin(), s.dates.begin() + static_cast<std::ptrdiff_t>(n));
    out.data.assign(s.data.begin(), s.data.begin() + static_cast<std::ptrdiff_t>(n * s.assets.size() * s.features));
    out.targets = s.targets.slice_rows(0, n);
    return out;
}

// Backtests one named strategy and writes its positions and pnl.
backtest::BacktestResult trade(Output& out, const std::string& name, const PositionsMatrix& positions,
                               const ReturnsPanel& panel, const backtest::BacktestConfig& bt) {
    auto res = backtest::run(positions, panel, bt);
    out.write("positions/" + name + ".csv", positions_to_csv(positions));
    out.write("pnl/" + name + ".csv", backtest::pnl_to_csv(res));
    return res;
}

void write_reports(Output& out, const std::string& prefix, const std::vector<std::string>& names,
                   const std::vector<backtest::BacktestResult>& results, const ExperimentConfig& cfg) {
    std::vector<report::NamedReport> total, test;
    std::vector<report::Curve> curves;
    for (std::size_t i = 0; i < names.size(); ++i) {
        total.push_back({names[i], results[i].report_total});
        test.push_back({names[i], results[i].report_test});
        curves.push_back({names[i], results[i].pnl.dates, results[i].cum_pnl});
    }
    out.write("tables/" + prefix + "_total.csv", report::metrics_table(total, cfg.sort_by));
    out.write("tables/" + prefix + "_test.csv", report::metrics_table(test, cfg.sort_by));
    out.write("plots/" + prefix + "_pnl.svg", report::pnl_plot(curves, cfg.backtest.test_start));
    if (results.size() >= 2) {
        Matrix corr = backtest::correlation_matrix(results);
        std::string csv = "alpha";
        for (const auto& n : names) csv += "," + n;
        csv += "\n";
        for (std::size_t i = 0; i < names.size(); ++i) {
            csv += names[i];
            for (double v : corr.row(i)) csv += "," + csv::format(v);
            csv += "\n";
        }
        out.write("tables/" + prefix + "_corr.csv", csv);
        out.write("plots/" + prefix + "_corr.svg", report::heatmap(corr, names));
    }
}

int cmd_ingest(const ExperimentConfig& cfg, Output& out) {
    auto assets = discover_assets(cfg.data);
    std::string summary = "asset,frequency,rows,gaps,first,last\n";
    std::vector<data::CandleSeries> daily;
    for (const auto& a : assets) {
        for (auto f : {data::Frequency::Daily, data::Frequency::Hourly, data::Frequency::M15}) {
            std::string path = candle_path(cfg.data, a, f);
            if (f != data::Frequency::Daily && !fs::exists(path)) continue;
            auto s = data::load_candles(path, f);
            summary += a + "," + data::suffix(f) + "," + std::to_string(s.rows.size()) + "," +
                       std::to_string(s.gaps.size()) + "," +
                       (s.rows.empty() ? "" : Date::from_epoch_seconds(s.rows.front().timestamp).to_string()) + "," +
                       (s.rows.empty() ? "" : Date::from_epoch_seconds(s.rows.back().timestamp).to_string()) + "\n";
            if (f == data::Frequency::Daily) daily.push_back(std::move(s));
        }
    }
    auto panel = data::build_panel(daily);
    out.write("tables/ingest.csv", summary);
    fs::create_directories(out.path(""));
    write_panel_csv(panel, out.path("panel.csv").string());
    out.write("panel.csv", csv::read_file(out.path("panel.csv").string()));
    out.log() << "ingested " << assets.size() << " assets, panel " << panel.dates.size() << " days ("
              << panel.dates.front().to_string() << " .. " << panel.dates.back().to_string() << ")\n";
    out.manifest("ingest", cfg);
    return kOk;
}

int cmd_alpha(const ExperimentConfig& cfg, const std::vector<std::string>& requested, Output& out) {
    auto panel = load_panel(cfg);
    const auto& names = requested.empty() ? cfg.alphas.names : requested;
    std::vector<std::string> labels;
    std::vector<backtest::BacktestResult> results;
    portfolio::AlphaStack stack;
    nlohmann::json manifest;
    manifest["alphas"] = nlohmann::json::array();
    for (const auto& n : names) {
        auto def = alphas::parse_alpha(n, cfg.alphas.window);
        auto pos = alphas::compute(def, panel);
        results.push_back(trade(out, n, pos, panel, cfg.backtest));
        labels.push_back(n);
        manifest["alphas"].push_back({{"name", n}, {"file", "../positions/" + n + ".csv"}});
    }
    write_reports(out, "alphas", labels, results, cfg);
    out.write("stack/manifest.json", manifest.dump(2) + "\n");
    out.log() << report::metrics_table([&] {
        std::vector<report::NamedReport> rows;
        for (std::size_t i = 0; i < labels.size(); ++i) rows.push_back({labels[i], results[i].report_total});
        return rows;
    }(), cfg.sort_by);
    out.manifest("alpha", cfg);
    return kOk;
}

int cmd_train(const ExperimentConfig& cfg, Output& out) {
    auto panel = load_panel(cfg);
    auto samples = build_samples(cfg, panel);
    auto train_set = training_rows(samples.set, panel, cfg.backtest.test_start);
    auto trained = models::train_position_model(train_set, samples.arch, cfg.train);

    fs::create_directories(out.path("models"));
    const std::string base = "models/" + cfg.model.name;
    checkpoint::save(trained.model.members, out.path(base + ".afmd").string());
    out.write(base + ".afmd", csv::read_file(out.path(base + ".afmd").string()));
    out.write(base + ".json", train_sidecar_json(cfg));

    std::string trace = "member,epoch,loss\n";
    for (std::size_t m = 0; m < trained.loss_traces.size(); ++m) {
        for (std::size_t e = 0; e < trained.loss_traces[m].size(); ++e) {
            trace += std::to_string(m) + "," + std::to_string(e) + "," + csv::format(trained.loss_traces[m][e]) + "\n";
        }
    }
    out.write("tables/" + cfg.model.name + "_loss.csv", trace);
    out.log() << "trained " << models::to_string(cfg.model.arch.kind) << " (" << trained.model.members.size()
              << " member(s)) on " << train_set.dates.size() << " days with "
              << losses::to_string(cfg.train.loss.kind) << (cfg.train.tvr_reg ? " + tvr_reg" : "") << "\n";
    out.manifest("train", cfg);
    return kOk;
}

int cmd_backtest(const ExperimentConfig& base_cfg, const std::string& checkpoint_path, Output& out) {
    fs::path sidecar = fs::path(checkpoint_path).replace_extension(".json");
    ExperimentConfig cfg = base_cfg;
    if (fs::exists(sidecar)) cfg = apply_sidecar(base_cfg, csv::read_file(sidecar.string()));
    models::PositionModel model;
    model.mode = cfg.train.mode;
    model.members = checkpoint::load(checkpoint_path);

    auto panel = load_panel(cfg);
    auto samples = build_samples(cfg, panel);
    auto positions = models::predict_positions(model, samples.set);
    const std::string name = cfg.model.name;
    auto res = trade(out, name, positions, panel, cfg.backtest);
    write_reports(out, "backtest_" + name, {name}, std::vector<backtest::BacktestResult>{res}, cfg);
    out.log() << metrics::kReportHeader << "\n"
              << metrics::to_csv_row(name + " (total)", res.report_total) << "\n"
              << metrics::to_csv_row(name + " (test)", res.report_test) << "\n";
    out.manifest("backtest", cfg);
    return kOk;
}

ReturnsPanel truncate_before(const ReturnsPanel& panel, Date end) {
    const std::size_t n = lower_bound_index(panel.dates, end);
    return ReturnsPanel{{panel.dates.begin(), panel.dates.begin() + static_cast<std::ptrdiff_t>(n)},
                        panel.assets,
                        panel.values.slice_rows(0, n)};
}

int cmd_portfolio(const ExperimentConfig& cfg, const std::string& stack_path, Output& out) {
    fs::path manifest = fs::is_directory(stack_path) ? fs::path(stack_path) / "manifest.json" : fs::path(stack_path);
    auto stack = portfolio::load_stack(manifest.string());
    auto panel = load_panel(cfg);
    if (stack.alphas[0].assets != panel.assets) {
        throw PreconditionError("alpha stack assets differ from the panel built from " + cfg.data.dir);
    }
    std::vector<std::string> names;
    std::vector<backtest::BacktestResult> results;
    const auto train_panel = truncate_before(panel, cfg.backtest.test_start);
    for (auto scheme : cfg.portfolio.schemes) {
        portfolio::Combination combo;
        std::string name = "portfolio_" + portfolio::to_string(scheme);
        if (scheme == portfolio::SchemeKind::EqualWeighted) {
            combo = portfolio::combine_equal(stack, cfg.backtest.normalize);
        } else {
            portfolio::WeightScheme ws{scheme, cfg.portfolio.lookback};
            auto combiner = portfolio::train_combiner(stack, train_panel, ws, cfg.portfolio.arch, cfg.portfolio.train);
            combo = portfolio::apply_combiner(combiner, stack, panel, cfg.backtest.normalize);
            std::string trace = "epoch,loss\n";
            for (std::size_t e = 0; e < combiner.loss_trace.size(); ++e) {
                trace += std::to_string(e) + "," + csv::format(combiner.loss_trace[e]) + "\n";
            }
            out.write("tables/" + name + "_loss.csv", trace);
        }
        // Rows are already combined; the backtest must not renormalize twice.
        backtest::BacktestConfig bt = cfg.backtest;
        bt.normalize = false;
        results.push_back(trade(out, name, combo.positions, panel, bt));
        names.push_back(name);
        if (!combo.cancelled.empty()) {
            out.log() << name << ": " << combo.cancelled.size() << " day(s) with fully cancelled positions\n";
        }
    }
    write_reports(out, "portfolio", names, results, cfg);
    out.manifest("portfolio", cfg);
    return kOk;
}

int cmd_sweep(const ExperimentConfig& cfg, Output& out) {
    const auto& s = cfg.sweep;
    if (s.length < 2) throw PreconditionError("sweep.length must be >= 2");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> alpha(s.length), r(s.length);
    // Positions carry a positive edge so the Sharpe factor is non-zero.
    for (std::size_t i = 0; i < s.length; ++i) {
        r[i] = s.returns_volatility * normal(rng);
        alpha[i] = r[i] / s.returns_volatility + normal(rng);
    }
    auto sweep = report::loss_sweep(s.losses, report::log_spaced(s.c_min, s.c_max, s.points), alpha, r, cfg.train.loss);
    out.write("tables/sweep.csv", report::sweep_csv(sweep));
    out.write("plots/sweep.svg", report::sweep_svg(sweep));
    out.log() << report::sweep_csv(sweep);
    out.manifest("sweep", cfg);
    return kOk;
}

int cmd_synth(const ExperimentConfig& cfg, Output& out) {
    const fs::path dir = cfg.data.dir;
    fs::create_directories(dir);
    auto files = synth::ar1_candles(cfg.synth.market, cfg.seed);
    for (const auto& f : files) {
        data::write_candles(f.daily, (dir / (f.daily.asset_id + "_1d.csv")).string());
        data::write_candles(f.hourly, (dir / (f.hourly.asset_id + "_1h.csv")).string());
        data::write_candles(f.m15, (dir / (f.m15.asset_id + "_15m.csv")).string());
    }
    out.log() << "wrote " << files.size() << " synthetic assets x " << cfg.synth.market.days << " days to " << dir.string()
              << "\n";
    if (cfg.synth.alphas > 0) {
        auto streams = synth::independent_alphas(cfg.synth.alphas, cfg.synth.alpha_days, cfg.synth.alpha_sharpe,
                                                 cfg.seed + 1);
        const fs::path sdir = dir / "alpha_streams";
        fs::create_directories(sdir);
        for (const auto& c : synth::candles_from_panel(streams.panel)) {
            data::write_candles(c, (sdir / (c.asset_id + "_1d.csv")).string());
        }
        portfolio::save_stack(streams.stack, (sdir / "stack").string());
        out.log() << "wrote " << cfg.synth.alphas << " independent alpha streams to " << sdir.string() << "\n";
    }
    out.manifest("synth", cfg);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"alphalab: finance-grounded losses, alpha backtests and portfolio combination", "alphalab"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir, data_dir, checkpoint_path, stack_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> alpha_names;
    auto common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "experiment config (JSON)");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
        sub->add_option("--data", data_dir, "candle directory (overrides data.dir)");
        sub->add_option("--seed", seed, "seed (overrides seed)");
    };
    auto* ingest = app.add_subcommand("ingest", "validate candle CSVs and cache the returns panel");
    common(ingest, false);
    auto* alpha = app.add_subcommand("alpha", "backtest the heuristic alphas");
    common(alpha, true);
    alpha->add_option("names", alpha_names, "alphas to run (default: config alphas.names)");
    auto* train = app.add_subcommand("train", "train a position model and checkpoint it");
    common(train, true);
    auto* bt = app.add_subcommand("backtest", "backtest a trained checkpoint");
    common(bt, true);
    bt->add_option("--checkpoint", checkpoint_path, "model checkpoint (.afmd)")->required();
    auto* port = app.add_subcommand("portfolio", "combine an alpha stack into portfolios");
    common(port, true);
    port->add_option("--stack", stack_path, "stack directory or manifest.json")->required();
    auto* sweep = app.add_subcommand("sweep", "loss value vs position magnitude");
    common(sweep, true);
    auto* syn = app.add_subcommand("synth", "write a seeded synthetic market");
    common(syn, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsageError;
    }

    try {
        ExperimentConfig cfg = config_path.empty() ? parse_config("{}") : load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!data_dir.empty()) cfg.data.dir = data_dir;
        if (seed) cfg.seed = cfg.train.seed = cfg.portfolio.train.seed = *seed;
        Output output(cfg.out_dir, out);

        if (app.got_subcommand(ingest)) return cmd_ingest(cfg, output);
        if (app.got_subcommand(alpha)) return cmd_alpha(cfg, alpha_names, output);
        if (app.got_subcommand(train)) return cmd_train(cfg, output);
        if (app.got_subcommand(bt)) return cmd_backtest(cfg, checkpoint_path, output);
        if (app.got_subcommand(port)) return cmd_portfolio(cfg, stack_path, output);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg, output);
        if (app.got_subcommand(syn)) return cmd_synth(cfg, output);
        return kUsageError;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace alphalab::cli
