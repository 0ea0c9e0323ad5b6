#include "alphalab/config.hpp"

#include "json.hpp"

#include "alphalab/csv.hpp"

namespace alphalab::cli {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

data::Scaling parse_scaling(const std::string& s) {
    if (s == "window") return data::Scaling::PerWindow;
    if (s == "segment") return data::Scaling::PerSegment;
    if (s == "none") return data::Scaling::None;
    throw PreconditionError("data.scaling must be window, segment or none");
}

std::string scaling_name(data::Scaling s) {
    switch (s) {
        case data::Scaling::PerWindow: return "window";
        case data::Scaling::PerSegment: return "segment";
        case data::Scaling::None: return "none";
    }
    return {};
}

void read_data(const json& j, DataSection& d) {
    read(j, "dir", d.dir);
    read(j, "assets", d.assets);
    if (j.contains("features")) {
        auto f = j.at("features").get<std::string>();
        if (f == "mixed") d.features = FeatureSource::Mixed;
        else if (f == "daily") d.features = FeatureSource::Daily;
        else throw PreconditionError("data.features must be mixed or daily");
    }
    read(j, "window_days", d.window_days);
    read(j, "daily_days", d.layout.daily_days);
    read(j, "hourly_days", d.layout.hourly_days);
    read(j, "m15_days", d.layout.m15_days);
    if (j.contains("scaling")) d.layout.scaling = parse_scaling(j.at("scaling").get<std::string>());
    if (d.window_days < 1) throw PreconditionError("data.window_days must be >= 1");
}

json write_data(const DataSection& d) {
    return {{"dir", d.dir},
            {"assets", d.assets},
            {"features", d.features == FeatureSource::Mixed ? "mixed" : "daily"},
            {"window_days", d.window_days},
            {"daily_days", d.layout.daily_days},
            {"hourly_days", d.layout.hourly_days},
            {"m15_days", d.layout.m15_days},
            {"scaling", scaling_name(d.layout.scaling)}};
}

void read_loss(const json& j, losses::LossSpec& l) {
    if (j.contains("kind")) l.kind = losses::parse_loss_kind(j.at("kind").get<std::string>());
    read(j, "epsilon", l.epsilon);
    read(j, "log_epsilon", l.log_epsilon);
    read(j, "riskadj_lambda", l.riskadj_lambda);
    read(j, "riskadj_gamma", l.riskadj_gamma);
    l.validate();
}

json write_loss(const losses::LossSpec& l) {
    return {{"kind", losses::to_string(l.kind)},
            {"epsilon", l.epsilon},
            {"log_epsilon", l.log_epsilon},
            {"riskadj_lambda", l.riskadj_lambda},
            {"riskadj_gamma", l.riskadj_gamma}};
}

void read_tvr(const json& j, std::optional<losses::TvrRegSpec>& t) {
    bool enabled = t.has_value();
    read(j, "enabled", enabled);
    losses::TvrRegSpec spec = t.value_or(losses::TvrRegSpec{});
    read(j, "strength", spec.strength);
    read(j, "top", spec.top);
    read(j, "bottom", spec.bottom);
    read(j, "hinge_floor", spec.hinge_floor);
    spec.validate();
    t = enabled ? std::optional(spec) : std::nullopt;
}

json write_tvr(const std::optional<losses::TvrRegSpec>& t) {
    losses::TvrRegSpec s = t.value_or(losses::TvrRegSpec{});
    return {{"enabled", t.has_value()},
            {"strength", s.strength},
            {"top", s.top},
            {"bottom", s.bottom},
            {"hinge_floor", s.hinge_floor}};
}

void read_train(const json& j, models::TrainConfig& t) {
    read(j, "learning_rate", t.learning_rate);
    read(j, "epochs", t.epochs);
    read(j, "batch_window", t.batch_window);
    read(j, "shuffle", t.shuffle_batches);
    if (j.contains("optimizer")) {
        auto o = j.at("optimizer").get<std::string>();
        if (o == "adam") t.optimizer.kind = models::OptimizerKind::Adam;
        else if (o == "sgd") t.optimizer.kind = models::OptimizerKind::SGD;
        else throw PreconditionError("train.optimizer must be adam or sgd");
    }
    read(j, "beta1", t.optimizer.beta1);
    read(j, "beta2", t.optimizer.beta2);
    read(j, "adam_epsilon", t.optimizer.epsilon);
    if (j.contains("mode")) {
        auto m = j.at("mode").get<std::string>();
        if (m == "singular") t.mode = models::ForecastMode::Singular;
        else if (m == "ensemble") t.mode = models::ForecastMode::Ensemble;
        else throw PreconditionError("train.mode must be singular or ensemble");
    }
}

json write_train(const models::TrainConfig& t) {
    return {{"learning_rate", t.learning_rate},
            {"epochs", t.epochs},
            {"batch_window", t.batch_window},
            {"shuffle", t.shuffle_batches},
            {"optimizer", t.optimizer.kind == models::OptimizerKind::Adam ? "adam" : "sgd"},
            {"beta1", t.optimizer.beta1},
            {"beta2", t.optimizer.beta2},
            {"adam_epsilon", t.optimizer.epsilon},
            {"mode", t.mode == models::ForecastMode::Singular ? "singular" : "ensemble"}};
}

void read_arch(const json& j, models::ArchitectureConfig& a) {
    if (j.contains("kind")) a.kind = models::parse_model_kind(j.at("kind").get<std::string>());
    read(j, "hidden_layers", a.hidden_layers);
    read(j, "lstm_hidden", a.lstm_hidden);
    read(j, "step_width", a.step_width);
}

json write_arch(const models::ArchitectureConfig& a) {
    return {{"kind", models::to_string(a.kind)},
            {"hidden_layers", a.hidden_layers},
            {"lstm_hidden", a.lstm_hidden},
            {"step_width", a.step_width}};
}

void read_model(const json& j, ModelSection& m) {
    read(j, "name", m.name);
    read_arch(j, m.arch);
    read(j, "pooled_day_steps", m.pooled_day_steps);
}

void apply_sections(const json& doc, ExperimentConfig& c) {
    if (!doc.is_object()) throw PreconditionError("config must be a JSON object");
    read(doc, "seed", c.seed);
    read(doc, "out_dir", c.out_dir);
    if (doc.contains("data")) read_data(doc.at("data"), c.data);
    if (doc.contains("alphas")) {
        read(doc.at("alphas"), "names", c.alphas.names);
        read(doc.at("alphas"), "window", c.alphas.window);
    }
    if (doc.contains("loss")) read_loss(doc.at("loss"), c.train.loss);
    if (doc.contains("tvr_reg")) read_tvr(doc.at("tvr_reg"), c.train.tvr_reg);
    if (doc.contains("train")) read_train(doc.at("train"), c.train);
    if (doc.contains("model")) read_model(doc.at("model"), c.model);
    if (doc.contains("backtest")) {
        const auto& b = doc.at("backtest");
        read(b, "lag_days", c.backtest.lag_days);
        if (b.contains("test_start")) c.backtest.test_start = Date::parse(b.at("test_start").get<std::string>());
        read(b, "normalize", c.backtest.normalize);
        read(b, "allow_lookahead", c.backtest.allow_lookahead);
        read(b, "annualization", c.backtest.annualization);
        if (b.contains("sort_by")) c.sort_by = report::parse_column(b.at("sort_by").get<std::string>());
    }
    if (doc.contains("portfolio")) {
        const auto& p = doc.at("portfolio");
        if (p.contains("schemes")) {
            c.portfolio.schemes.clear();
            for (const auto& s : p.at("schemes")) c.portfolio.schemes.push_back(portfolio::parse_scheme(s.get<std::string>()));
        }
        read(p, "lookback", c.portfolio.lookback);
        if (p.contains("model")) read_arch(p.at("model"), c.portfolio.arch);
        if (p.contains("loss")) read_loss(p.at("loss"), c.portfolio.train.loss);
        if (p.contains("tvr_reg")) read_tvr(p.at("tvr_reg"), c.portfolio.train.tvr_reg);
        if (p.contains("train")) read_train(p.at("train"), c.portfolio.train);
    }
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        if (s.contains("losses")) {
            c.sweep.losses.clear();
            for (const auto& k : s.at("losses")) c.sweep.losses.push_back(losses::parse_loss_kind(k.get<std::string>()));
        }
        read(s, "c_min", c.sweep.c_min);
        read(s, "c_max", c.sweep.c_max);
        read(s, "points", c.sweep.points);
        read(s, "length", c.sweep.length);
        read(s, "returns_volatility", c.sweep.returns_volatility);
    }
    if (doc.contains("synth")) {
        const auto& s = doc.at("synth");
        auto& m = c.synth.market;
        read(s, "assets", m.assets);
        read(s, "days", m.days);
        read(s, "autocorrelation", m.autocorrelation);
        read(s, "volatility", m.volatility);
        read(s, "drift", m.drift);
        if (s.contains("start")) m.start = Date::parse(s.at("start").get<std::string>());
        read(s, "alphas", c.synth.alphas);
        read(s, "alpha_days", c.synth.alpha_days);
        read(s, "alpha_sharpe", c.synth.alpha_sharpe);
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ExperimentConfig c;
    // The combiner defaults to a small LSTM trained on the Sharpe loss.
    c.portfolio.train.loss.kind = losses::LossKind::Sharpe;
    c.portfolio.arch.lstm_hidden = 8;
    json doc;
    try {
        doc = json::parse(json_text);
        apply_sections(doc, c);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }
    c.portfolio.train.seed = c.train.seed = c.seed;
    c.source_text = json_text;
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = csv::read_file(path);
    } catch (const PreconditionError&) {
        throw PreconditionError("config file not found: " + path);
    }
    return parse_config(text);
}

std::string train_sidecar_json(const ExperimentConfig& c) {
    json model = write_arch(c.model.arch);
    model["name"] = c.model.name;
    model["pooled_day_steps"] = c.model.pooled_day_steps;
    json doc{{"seed", c.seed},
             {"data", write_data(c.data)},
             {"model", model},
             {"train", write_train(c.train)},
             {"loss", write_loss(c.train.loss)},
             {"tvr_reg", write_tvr(c.train.tvr_reg)}};
    return doc.dump(2) + "\n";
}

ExperimentConfig apply_sidecar(ExperimentConfig base, const std::string& sidecar_text) {
    try {
        auto doc = json::parse(sidecar_text);
        json sections;
        for (const char* key : {"data", "model", "train", "loss", "tvr_reg"}) {
            if (doc.contains(key)) sections[key] = doc.at(key);
        }
        // The data directory belongs to the current run, not the training run.
        if (sections.contains("data")) sections["data"].erase("dir");
        apply_sections(sections, base);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("checkpoint sidecar: ") + e.what());
    }
    return base;
}

}  // namespace alphalab::cli
