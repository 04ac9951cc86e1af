// Pipeline command line: simulate / train / eval / detect / influence /
// report. Configs are TOML (or JSON); every artifact embeds the config and
// seed that produced it, and partially written outputs are removed when a
// step fails.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amdn/detection.hpp"
#include "amdn/hawkes.hpp"
#include "toml_lite.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace amdn;

namespace {

// removes everything registered unless the run commits
struct ArtifactGuard {
    std::vector<std::string> paths;
    bool committed = false;

    std::string track(const std::string& p) {
        paths.push_back(p);
        return p;
    }
    ~ArtifactGuard() {
        if (committed) return;
        for (const auto& p : paths) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + path);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

void check_keys(const json& table, const std::set<std::string>& allowed,
                const std::string& where) {
    if (table.is_null()) return;
    if (!table.is_object()) throw std::runtime_error(where + " must be a table");
    for (const auto& [k, v] : table.items())
        if (!allowed.count(k))
            throw std::runtime_error(where + ": unknown key '" + k + "'");
}

template <typename T>
T get_or(const json& table, const std::string& key, T fallback) {
    if (table.is_object() && table.contains(key)) return table.at(key).get<T>();
    return fallback;
}

std::uint64_t resolve_seed(const json& cfg, std::int64_t cli_seed) {
    if (cli_seed >= 0) return static_cast<std::uint64_t>(cli_seed);
    return static_cast<std::uint64_t>(get_or<std::int64_t>(cfg, "seed", 0));
}

// ---- config sections ----

ScenarioConfig scenario_from(const json& cfg) {
    const json& t = cfg.contains("scenario") ? cfg.at("scenario") : json();
    check_keys(t,
               {"num_accounts", "group_size", "intra_excitation", "background_excitation",
                "outsider_to_group", "base_rate_min", "base_rate_max", "beta", "horizon",
                "num_sequences"},
               "[scenario]");
    ScenarioConfig sc;
    sc.num_accounts = get_or<int>(t, "num_accounts", sc.num_accounts);
    sc.group_size = get_or<int>(t, "group_size", sc.group_size);
    sc.intra_excitation = get_or<double>(t, "intra_excitation", sc.intra_excitation);
    sc.background_excitation = get_or<double>(t, "background_excitation", sc.background_excitation);
    sc.outsider_to_group = get_or<double>(t, "outsider_to_group", sc.outsider_to_group);
    sc.base_rate_min = get_or<double>(t, "base_rate_min", sc.base_rate_min);
    sc.base_rate_max = get_or<double>(t, "base_rate_max", sc.base_rate_max);
    sc.beta = get_or<double>(t, "beta", sc.beta);
    sc.horizon = get_or<double>(t, "horizon", sc.horizon);
    sc.num_sequences = get_or<int>(t, "num_sequences", sc.num_sequences);
    if (sc.num_accounts < 1 || sc.group_size < 0 || sc.group_size > sc.num_accounts ||
        sc.horizon <= 0 || sc.num_sequences < 1)
        throw std::runtime_error("[scenario]: invalid field values");
    return sc;
}

struct DataOptions {
    std::size_t max_len = 128;
    int min_activity = 1;
    std::array<double, 3> fractions{0.8, 0.1, 0.1};
    LogFormat format = LogFormat::Jsonl;
};

DataOptions data_from(const json& cfg) {
    const json& t = cfg.contains("data") ? cfg.at("data") : json();
    check_keys(t, {"max_len", "min_activity", "fractions", "format"}, "[data]");
    DataOptions d;
    d.max_len = static_cast<std::size_t>(get_or<std::int64_t>(t, "max_len", 128));
    d.min_activity = get_or<int>(t, "min_activity", 1);
    if (t.is_object() && t.contains("fractions")) {
        auto f = t.at("fractions");
        if (!f.is_array() || f.size() != 3)
            throw std::runtime_error("[data].fractions must be an array of 3 numbers");
        for (int i = 0; i < 3; ++i) d.fractions[i] = f[i].get<double>();
    }
    std::string fmt = get_or<std::string>(t, "format", "jsonl");
    if (fmt == "jsonl") d.format = LogFormat::Jsonl;
    else if (fmt == "csv") d.format = LogFormat::Csv;
    else throw std::runtime_error("[data].format must be jsonl or csv");
    return d;
}

ModelConfig model_from(const json& cfg, int vocab_size) {
    const json& t = cfg.contains("model") ? cfg.at("model") : json();
    check_keys(t,
               {"m_e", "m_p", "m_t", "num_freqs", "K", "type_hidden", "dropout",
                "log_scale_clamp", "summarizer", "temporal_combine"},
               "[model]");
    ModelConfig m;
    m.vocab_size = vocab_size;
    m.m_e = get_or<int>(t, "m_e", m.m_e);
    m.m_p = get_or<int>(t, "m_p", m.m_p);
    m.m_t = get_or<int>(t, "m_t", m.m_t);
    m.num_freqs = get_or<int>(t, "num_freqs", m.num_freqs);
    m.K = get_or<int>(t, "K", m.K);
    m.type_hidden = get_or<int>(t, "type_hidden", m.type_hidden);
    m.dropout = get_or<double>(t, "dropout", m.dropout);
    m.log_scale_clamp = get_or<double>(t, "log_scale_clamp", m.log_scale_clamp);
    std::string summ = get_or<std::string>(t, "summarizer", "identity");
    if (summ == "identity") m.summarizer = Summarizer::Identity;
    else if (summ == "recurrent") m.summarizer = Summarizer::Recurrent;
    else throw std::runtime_error("[model].summarizer must be identity or recurrent");
    std::string comb = get_or<std::string>(t, "temporal_combine", "sum");
    if (comb == "sum") m.temporal_combine = TemporalCombine::Sum;
    else if (comb == "stack") m.temporal_combine = TemporalCombine::Stack;
    else throw std::runtime_error("[model].temporal_combine must be sum or stack");
    return m;
}

TrainConfig train_from(const json& cfg, int vocab_size, std::uint64_t seed) {
    const json& t = cfg.contains("train") ? cfg.at("train") : json();
    check_keys(t,
               {"batch_size", "max_epochs", "patience", "learning_rate", "weight_decay",
                "l2_in_loss"},
               "[train]");
    TrainConfig tc;
    tc.batch_size = get_or<int>(t, "batch_size", tc.batch_size);
    tc.max_epochs = get_or<int>(t, "max_epochs", tc.max_epochs);
    tc.patience = get_or<int>(t, "patience", tc.patience);
    tc.learning_rate = get_or<double>(t, "learning_rate", tc.learning_rate);
    tc.weight_decay = get_or<double>(t, "weight_decay", tc.weight_decay);
    tc.l2_in_loss = get_or<bool>(t, "l2_in_loss", tc.l2_in_loss);
    tc.seed = seed;
    tc.model = model_from(cfg, vocab_size);
    return tc;
}

struct DetectOptions {
    int k = 2;
    ClusterMethod method = ClusterMethod::KMeans;
    int folds = 5;
    bool supervised = false;
    double damping = 0.85;
    int top_k = 0;
};

DetectOptions detect_from(const json& cfg) {
    const json& t = cfg.contains("detect") ? cfg.at("detect") : json();
    check_keys(t, {"k", "method", "folds", "supervised", "damping", "top_k"}, "[detect]");
    DetectOptions d;
    d.k = get_or<int>(t, "k", d.k);
    d.folds = get_or<int>(t, "folds", d.folds);
    d.supervised = get_or<bool>(t, "supervised", d.supervised);
    d.damping = get_or<double>(t, "damping", d.damping);
    d.top_k = get_or<int>(t, "top_k", d.top_k);
    std::string method = get_or<std::string>(t, "method", "kmeans");
    if (method == "kmeans") d.method = ClusterMethod::KMeans;
    else if (method == "gmm") d.method = ClusterMethod::Gmm;
    else throw std::runtime_error("[detect].method must be kmeans or gmm");
    return d;
}

json metrics_json(const DetectionMetrics& m) {
    return json{{"ap", m.ap},       {"auc", m.auc},           {"f1", m.f1},
                {"precision", m.precision}, {"recall", m.recall},
                {"max_f1", m.max_f1},       {"macro_f1", m.macro_f1}};
}

// labels file: {"account name": 0/1, ...}
std::vector<int> load_labels(const std::string& path, const AccountVocabulary& vocab) {
    json j = read_json(path);
    if (!j.is_object()) throw std::runtime_error("labels file must map account -> 0/1");
    std::vector<int> labels(vocab.size(), -1);
    for (const auto& [name, val] : j.items()) {
        int idx = vocab.lookup(name);
        if (idx >= 0) labels[idx] = val.get<int>();
    }
    return labels;
}

// ---- subcommands ----

int cmd_simulate(const std::string& config_path, std::int64_t cli_seed,
                 const std::string& out_dir) {
    json cfg = toml_lite::parse_file(config_path);
    ScenarioConfig sc = scenario_from(cfg);
    std::uint64_t seed = resolve_seed(cfg, cli_seed);

    fs::create_directories(out_dir);
    ArtifactGuard guard;
    Scenario scen = make_scenario(sc, seed);

    write_event_log(guard.track(out_dir + "/events.jsonl"), scen.sequences);
    json labels = json::object();
    for (int i = 0; i < sc.num_accounts; ++i) labels["u" + std::to_string(i)] = scen.labels[i];
    write_json(guard.track(out_dir + "/labels.json"), labels);
    write_json(guard.track(out_dir + "/simulate_meta.json"),
               json{{"seed", seed}, {"config", cfg}, {"num_sequences", scen.sequences.size()}});

    guard.committed = true;
    std::cout << "wrote " << scen.sequences.size() << " sequences to " << out_dir << std::endl;
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_path, std::int64_t cli_seed,
              const std::string& out_dir) {
    json cfg = toml_lite::parse_file(config_path);
    std::uint64_t seed = resolve_seed(cfg, cli_seed);
    DataOptions dopts = data_from(cfg);

    auto raw = parse_event_log(data_path, dopts.format);
    auto vres = build_vocabulary(raw, dopts.min_activity);
    DatasetSplit split = prepare_splits(vres.sequences, dopts.max_len, dopts.fractions, seed);

    IndexedSplit idx;
    idx.train = index_sequences(split.train, vres.vocab);
    idx.validation = index_sequences(split.validation, vres.vocab);
    idx.test = index_sequences(split.test, vres.vocab);
    TrainConfig tc = train_from(cfg, vres.vocab.size(), seed);

    fs::create_directories(out_dir);
    ArtifactGuard guard;

    TrainResult res = train(idx, tc);

    save_checkpoint(guard.track(out_dir + "/checkpoint.json"), res.best_params, vres.vocab,
                    nullptr, res.best_epoch);
    write_event_log(guard.track(out_dir + "/train.jsonl"), split.train);
    write_event_log(guard.track(out_dir + "/validation.jsonl"), split.validation);
    if (!split.test.empty()) write_event_log(guard.track(out_dir + "/test.jsonl"), split.test);

    json epochs = json::array();
    for (const auto& e : res.log)
        epochs.push_back(json{{"epoch", e.epoch},
                              {"train_nll", e.train_nll},
                              {"val_nll", e.val_nll},
                              {"wall_time_s", e.wall_time_s}});
    write_json(guard.track(out_dir + "/train_log.json"),
               json{{"seed", seed},
                    {"config", cfg},
                    {"vocab_size", vres.vocab.size()},
                    {"best_epoch", res.best_epoch},
                    {"best_val_nll", res.best_val_nll},
                    {"epochs", epochs}});

    guard.committed = true;
    std::cout << "best validation nll " << res.best_val_nll << " at epoch " << res.best_epoch
              << "; artifacts in " << out_dir << std::endl;
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& data_path,
             const std::string& out_path) {
    Checkpoint ck = load_checkpoint(checkpoint_path);
    auto raw = parse_event_log(data_path, LogFormat::Jsonl);
    std::vector<IndexedSequence> data;
    for (const auto& s : raw)
        if (s.size() >= 2) data.push_back(index_sequence(s, ck.vocab));
    if (data.empty()) throw std::runtime_error("eval: no usable sequences in " + data_path);

    EvalMetrics m = evaluate(data, ck.params);
    json out{{"nll", m.nll},
             {"event_time_nll", m.event_time_nll},
             {"event_type_nll", m.event_type_nll},
             {"event_type_accuracy", m.event_type_accuracy},
             {"checkpoint", checkpoint_path},
             {"data", data_path},
             {"num_sequences", data.size()}};
    std::cout << out.dump(2) << std::endl;
    if (!out_path.empty()) {
        ArtifactGuard guard;
        write_json(guard.track(out_path), out);
        guard.committed = true;
    }
    return 0;
}

int cmd_detect(const std::string& checkpoint_path, const std::string& data_path,
               const std::string& labels_path, const std::string& config_path,
               std::int64_t cli_seed, const std::string& out_dir) {
    json cfg = config_path.empty() ? json::object() : toml_lite::parse_file(config_path);
    std::uint64_t seed = resolve_seed(cfg, cli_seed);
    DetectOptions opts = detect_from(cfg);

    Checkpoint ck = load_checkpoint(checkpoint_path);
    auto raw = parse_event_log(data_path, LogFormat::Jsonl);
    std::vector<IndexedSequence> data;
    for (const auto& s : raw)
        if (s.size() >= 2) data.push_back(index_sequence(s, ck.vocab));
    if (data.empty()) throw std::runtime_error("detect: no usable sequences in " + data_path);

    InfluenceMatrix infl = aggregate_influence(ck.params, data);
    std::vector<int> assign = cluster_accounts(ck.params, opts.k, opts.method, seed);
    std::vector<int> flags = flag_coordinated(assign, infl);

    std::vector<int> labels(ck.vocab.size(), -1);
    bool have_labels = !labels_path.empty();
    if (have_labels) labels = load_labels(labels_path, ck.vocab);

    std::vector<double> scores;
    if (opts.supervised) {
        if (!have_labels) throw std::runtime_error("detect: supervised mode needs --labels");
        Matrix emb = ck.params.enc.W_e;
        scores = supervised_scores(emb, labels, opts.folds, seed);
    } else {
        scores = anomaly_scores(flags, infl);
    }

    json accounts = json::array();
    for (int a = 0; a < ck.vocab.size(); ++a)
        accounts.push_back(json{{"account", ck.vocab.name(a)},
                                {"cluster", assign[a]},
                                {"flagged", flags[a]},
                                {"score", std::isnan(scores[a]) ? json() : json(scores[a])},
                                {"label", labels[a] < 0 ? json() : json(labels[a])}});

    json out{{"seed", seed}, {"config", cfg}, {"accounts", accounts}};
    bool scoreable = true;
    if (have_labels) {
        // metrics need both classes among labeled accounts with usable scores
        std::vector<double> s;
        std::vector<int> f, y;
        for (int a = 0; a < ck.vocab.size(); ++a) {
            if (labels[a] < 0 || std::isnan(scores[a])) continue;
            s.push_back(scores[a]);
            f.push_back(flags[a]);
            y.push_back(labels[a]);
        }
        int pos = 0;
        for (int v : y) pos += v;
        scoreable = !y.empty() && pos > 0 && pos < static_cast<int>(y.size());
        if (scoreable) out["metrics"] = metrics_json(detection_metrics(s, f, y));
    }

    fs::create_directories(out_dir);
    ArtifactGuard guard;
    write_json(guard.track(out_dir + "/detect.json"), out);
    guard.committed = true;

    int flagged = 0;
    for (int v : flags) flagged += v;
    std::cout << "flagged " << flagged << " of " << ck.vocab.size() << " accounts";
    if (out.contains("metrics")) std::cout << ", AUC " << out["metrics"]["auc"].get<double>();
    std::cout << "; report in " << out_dir << "/detect.json" << std::endl;
    return 0;
}

int cmd_influence(const std::string& checkpoint_path, const std::string& data_path,
                  double damping, int top_k, const std::string& out_dir) {
    Checkpoint ck = load_checkpoint(checkpoint_path);
    auto raw = parse_event_log(data_path, LogFormat::Jsonl);
    std::vector<IndexedSequence> data;
    for (const auto& s : raw)
        if (s.size() >= 2) data.push_back(index_sequence(s, ck.vocab));
    if (data.empty()) throw std::runtime_error("influence: no usable sequences in " + data_path);

    InfluenceMatrix infl = aggregate_influence(ck.params, data);
    PageRankResult pr = pagerank_influence(infl, damping, top_k);

    fs::create_directories(out_dir);
    ArtifactGuard guard;
    write_influence_csv(infl, ck.vocab, guard.track(out_dir + "/influence_values.csv"),
                        guard.track(out_dir + "/influence_counts.csv"));
    json ranking = json::array();
    for (int a : pr.ranking)
        ranking.push_back(json{{"account", ck.vocab.name(a)}, {"score", pr.scores[a]}});
    write_json(guard.track(out_dir + "/pagerank.json"),
               json{{"damping", damping},
                    {"top_k", top_k},
                    {"iterations", pr.iterations},
                    {"ranking", ranking}});
    guard.committed = true;
    std::cout << "influence matrix and PageRank written to " << out_dir << std::endl;
    return 0;
}

int cmd_report(const std::string& run_dir, std::string out_dir) {
    if (out_dir.empty()) out_dir = run_dir;
    fs::create_directories(out_dir + "/plots");
    ArtifactGuard guard;

    json summary = json::object();

    std::string train_log = run_dir + "/train_log.json";
    if (fs::exists(train_log)) {
        json tl = read_json(train_log);
        summary["training"] = json{{"best_epoch", tl["best_epoch"]},
                                   {"best_val_nll", tl["best_val_nll"]},
                                   {"seed", tl["seed"]}};
        std::ofstream curve(guard.track(out_dir + "/plots/epoch_curve.tsv"));
        curve << "epoch\ttrain_nll\tval_nll\n";
        for (const auto& e : tl["epochs"])
            curve << e["epoch"].get<int>() << "\t" << e["train_nll"].get<double>() << "\t"
                  << e["val_nll"].get<double>() << "\n";
    }

    std::string detect = run_dir + "/detect.json";
    if (fs::exists(detect)) {
        json dj = read_json(detect);
        if (dj.contains("metrics")) summary["detection"] = dj["metrics"];
        // ROC points from labeled, scored accounts
        std::vector<std::pair<double, int>> pts;
        for (const auto& a : dj["accounts"]) {
            if (a["label"].is_null() || a["score"].is_null()) continue;
            pts.emplace_back(a["score"].get<double>(), a["label"].get<int>());
        }
        if (!pts.empty()) {
            std::sort(pts.begin(), pts.end(),
                      [](const auto& x, const auto& y) { return x.first > y.first; });
            double pos = 0, neg = 0;
            for (const auto& [s, y] : pts) (y ? pos : neg) += 1.0;
            if (pos > 0 && neg > 0) {
                std::ofstream roc(guard.track(out_dir + "/plots/roc_points.tsv"));
                roc << "fpr\ttpr\tthreshold\n";
                double tp = 0, fp = 0;
                std::size_t i = 0;
                while (i < pts.size()) {
                    std::size_t j = i;
                    while (j < pts.size() && pts[j].first == pts[i].first) j++;
                    for (std::size_t k = i; k < j; ++k) (pts[k].second ? tp : fp) += 1.0;
                    roc << fp / neg << "\t" << tp / pos << "\t" << pts[i].first << "\n";
                    i = j;
                }
            }
        }
    }

    std::string infl = run_dir + "/influence_values.csv";
    if (fs::exists(infl)) {
        // heatmap-ready long format: row account, column account, value
        std::ifstream in(infl);
        std::string header;
        std::getline(in, header);
        std::vector<std::string> cols;
        std::istringstream hs(header);
        std::string cell;
        std::getline(hs, cell, ',');  // "account"
        while (std::getline(hs, cell, ',')) cols.push_back(cell);
        std::ofstream heat(guard.track(out_dir + "/plots/influence_heatmap.tsv"));
        heat << "target\tsource\tvalue\n";
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string row;
            std::getline(ls, row, ',');
            for (std::size_t c = 0; c < cols.size() && std::getline(ls, cell, ','); ++c)
                if (!cell.empty()) heat << row << "\t" << cols[c] << "\t" << cell << "\n";
        }
    }

    std::string eval_path = run_dir + "/eval.json";
    if (fs::exists(eval_path)) summary["evaluation"] = read_json(eval_path);

    if (summary.empty())
        throw std::runtime_error("report: no artifacts found in " + run_dir);
    write_json(guard.track(out_dir + "/report.json"), summary);
    guard.committed = true;
    std::cout << "report written to " << out_dir << "/report.json" << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attentive point-process modeling and coordinated-account detection"};
    app.require_subcommand(1);

    std::string config, data, labels, checkpoint, out, run_dir;
    std::int64_t seed = -1;
    double damping = 0.85;
    int top_k = 0;

    auto* sim = app.add_subcommand("simulate", "generate a synthetic planted-group dataset");
    sim->add_option("--config", config, "scenario config (TOML or JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_option("--seed", seed, "override the config seed");
    sim->add_option("--out", out, "output directory")->required();

    auto* tr = app.add_subcommand("train", "fit the model on an event log");
    tr->add_option("--config", config, "training config (TOML or JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    tr->add_option("--data", data, "event log (JSONL or CSV)")->required()->check(CLI::ExistingFile);
    tr->add_option("--seed", seed, "override the config seed");
    tr->add_option("--out", out, "output directory")->required();

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on an event log");
    ev->add_option("--checkpoint", checkpoint, "model checkpoint")->required()->check(CLI::ExistingFile);
    ev->add_option("--data", data, "event log (JSONL)")->required()->check(CLI::ExistingFile);
    ev->add_option("--out", out, "optional metrics JSON path");

    auto* det = app.add_subcommand("detect", "flag coordinated accounts");
    det->add_option("--checkpoint", checkpoint, "model checkpoint")->required()->check(CLI::ExistingFile);
    det->add_option("--data", data, "event log (JSONL)")->required()->check(CLI::ExistingFile);
    det->add_option("--labels", labels, "ground-truth labels JSON")->check(CLI::ExistingFile);
    det->add_option("--config", config, "detection config")->check(CLI::ExistingFile);
    det->add_option("--seed", seed, "override the config seed");
    det->add_option("--out", out, "output directory")->required();

    auto* inf = app.add_subcommand("influence", "export the influence matrix and PageRank");
    inf->add_option("--checkpoint", checkpoint, "model checkpoint")->required()->check(CLI::ExistingFile);
    inf->add_option("--data", data, "event log (JSONL)")->required()->check(CLI::ExistingFile);
    inf->add_option("--damping", damping, "PageRank damping")->check(CLI::Range(1e-9, 1.0 - 1e-9));
    inf->add_option("--top-k", top_k, "truncate the ranking (0 keeps all)");
    inf->add_option("--out", out, "output directory")->required();

    auto* rep = app.add_subcommand("report", "merge run artifacts into a summary + plot data");
    rep->add_option("--run", run_dir, "directory with prior outputs")
        ->required()
        ->check(CLI::ExistingDirectory);
    rep->add_option("--out", out, "output directory (defaults to --run)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config, seed, out);
        if (tr->parsed()) return cmd_train(config, data, seed, out);
        if (ev->parsed()) return cmd_eval(checkpoint, data, out);
        if (det->parsed()) return cmd_detect(checkpoint, data, labels, config, seed, out);
        if (inf->parsed()) return cmd_influence(checkpoint, data, damping, top_k, out);
        if (rep->parsed()) return cmd_report(run_dir, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 1;
}
