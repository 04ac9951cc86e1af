#include "amdn/event_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace amdn {

using nlohmann::json;

int AccountVocabulary::add(const std::string& account) {
    auto it = index_.find(account);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(ids_.size());
    ids_.push_back(account);
    index_.emplace(account, idx);
    return idx;
}

int AccountVocabulary::lookup(const std::string& account) const {
    auto it = index_.find(account);
    return it == index_.end() ? -1 : it->second;
}

void AccountVocabulary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open vocabulary file for writing: " + path);
    out << json(ids_).dump() << "\n";
}

AccountVocabulary AccountVocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    json j;
    in >> j;
    AccountVocabulary v;
    for (const auto& id : j) v.add(id.get<std::string>());
    return v;
}

namespace {

void validate_timestamp(double ts, const std::string& path, std::size_t line_no) {
    if (!std::isfinite(ts) || ts < 0.0) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": invalid timestamp (must be finite and >= 0)");
    }
}

struct RawRecord {
    std::string seq, account;
    double ts;
};

RawRecord parse_jsonl_line(const std::string& line, const std::string& path, std::size_t line_no) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed JSON record: " + e.what());
    }
    if (!j.contains("seq") || !j.contains("account") || !j.contains("ts")) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": record missing one of seq/account/ts");
    }
    RawRecord r;
    try {
        r.seq = j.at("seq").is_string() ? j.at("seq").get<std::string>() : j.at("seq").dump();
        r.account = j.at("account").is_string() ? j.at("account").get<std::string>() : j.at("account").dump();
        r.ts = j.at("ts").get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad field type: " + e.what());
    }
    return r;
}

RawRecord parse_csv_line(const std::string& line, const std::vector<int>& cols,
                         const std::string& path, std::size_t line_no) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    int needed = *std::max_element(cols.begin(), cols.end());
    if (static_cast<int>(fields.size()) <= needed) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": too few CSV fields");
    }
    RawRecord r;
    r.seq = fields[cols[0]];
    r.account = fields[cols[1]];
    try {
        std::size_t pos = 0;
        r.ts = std::stod(fields[cols[2]], &pos);
        if (pos != fields[cols[2]].size()) throw std::invalid_argument("trailing chars");
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unparsable timestamp '" +
                                 fields[cols[2]] + "'");
    }
    return r;
}

}  // namespace

std::vector<EventSequence> parse_event_log(const std::string& path, LogFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event log: " + path);

    // keyed by sequence id, insertion-ordered
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Event>> groups;

    std::string line;
    std::size_t line_no = 0;
    std::vector<int> csv_cols;  // positions of seq, account, ts
    bool header_done = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        if (format == LogFormat::Csv && !header_done) {
            std::vector<std::string> names;
            std::stringstream ss(line);
            std::string f;
            while (std::getline(ss, f, ',')) names.push_back(f);
            for (const char* want : {"seq", "account", "ts"}) {
                auto it = std::find(names.begin(), names.end(), want);
                if (it == names.end())
                    throw std::runtime_error(path + ": CSV header missing column '" + std::string(want) + "'");
                csv_cols.push_back(static_cast<int>(it - names.begin()));
            }
            header_done = true;
            continue;
        }

        RawRecord r = format == LogFormat::Jsonl ? parse_jsonl_line(line, path, line_no)
                                                 : parse_csv_line(line, csv_cols, path, line_no);
        validate_timestamp(r.ts, path, line_no);
        auto [it, inserted] = groups.try_emplace(r.seq);
        if (inserted) order.push_back(r.seq);
        it->second.push_back(Event{r.account, r.ts});
    }

    std::vector<EventSequence> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        EventSequence s;
        s.id = id;
        s.events = std::move(groups[id]);
        std::stable_sort(s.events.begin(), s.events.end(),
                         [](const Event& a, const Event& b) { return a.ts < b.ts; });
        out.push_back(std::move(s));
    }
    return out;
}

void write_event_log(const std::string& path, const std::vector<EventSequence>& sequences) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const auto& s : sequences) {
        for (const auto& e : s.events) {
            json j{{"seq", s.id}, {"account", e.account}, {"ts", e.ts}};
            out << j.dump() << "\n";
        }
    }
}

VocabularyResult build_vocabulary(const std::vector<EventSequence>& sequences, int min_activity) {
    std::vector<EventSequence> seqs = sequences;

    // Iterate to a fixed point: dropping short sequences can push surviving
    // accounts back under the threshold.
    for (;;) {
        std::unordered_map<std::string, int> counts;
        for (const auto& s : seqs)
            for (const auto& e : s.events) counts[e.account]++;

        bool any_dropped = false;
        std::vector<EventSequence> next;
        for (const auto& s : seqs) {
            EventSequence f;
            f.id = s.id;
            for (const auto& e : s.events) {
                if (counts[e.account] >= min_activity)
                    f.events.push_back(e);
                else
                    any_dropped = true;
            }
            if (f.events.size() >= 2)
                next.push_back(std::move(f));
            else if (!f.events.empty() || !s.events.empty())
                any_dropped = true;
        }
        seqs = std::move(next);
        if (!any_dropped) break;
    }

    AccountVocabulary vocab;
    for (const auto& s : seqs)
        for (const auto& e : s.events) vocab.add(e.account);

    if (vocab.size() == 0)
        throw std::runtime_error("build_vocabulary: all accounts filtered out (min_activity=" +
                                 std::to_string(min_activity) + ")");
    return VocabularyResult{std::move(vocab), std::move(seqs)};
}

DatasetSplit prepare_splits(const std::vector<EventSequence>& sequences, std::size_t max_len,
                            std::array<double, 3> fractions, std::uint64_t seed) {
    double fsum = fractions[0] + fractions[1] + fractions[2];
    if (fractions[0] < 0 || fractions[1] < 0 || fractions[2] < 0 || std::abs(fsum - 1.0) > 1e-9)
        throw std::invalid_argument("prepare_splits: fractions must be non-negative and sum to 1");
    if (max_len < 2) throw std::invalid_argument("prepare_splits: max_len must be >= 2");

    std::vector<EventSequence> chunks;
    for (const auto& s : sequences) {
        for (std::size_t start = 0; start < s.events.size(); start += max_len) {
            std::size_t len = std::min(max_len, s.events.size() - start);
            if (len < 2) break;  // dropped tail
            EventSequence c;
            c.id = s.id + (s.events.size() > max_len ? "#" + std::to_string(start / max_len) : "");
            c.events.assign(s.events.begin() + start, s.events.begin() + start + len);
            chunks.push_back(std::move(c));
        }
    }

    std::mt19937_64 rng(seed);
    std::shuffle(chunks.begin(), chunks.end(), rng);

    std::size_t n = chunks.size();
    std::size_t n_train = static_cast<std::size_t>(std::floor(n * fractions[0] + 1e-9));
    std::size_t n_val = static_cast<std::size_t>(std::floor(n * fractions[1] + 1e-9));
    std::size_t n_test = static_cast<std::size_t>(std::floor(n * fractions[2] + 1e-9));
    n_train += n - (n_train + n_val + n_test);  // remainder to train

    DatasetSplit split;
    split.fractions = fractions;
    split.train.assign(chunks.begin(), chunks.begin() + n_train);
    split.validation.assign(chunks.begin() + n_train, chunks.begin() + n_train + n_val);
    split.test.assign(chunks.begin() + n_train + n_val, chunks.end());
    return split;
}

IndexedSequence index_sequence(const EventSequence& seq, const AccountVocabulary& vocab) {
    IndexedSequence out;
    out.id = seq.id;
    out.accounts.reserve(seq.events.size());
    out.times.reserve(seq.events.size());
    for (const auto& e : seq.events) {
        int idx = vocab.lookup(e.account);
        if (idx < 0) throw std::runtime_error("unknown account '" + e.account + "' in sequence " + seq.id);
        out.accounts.push_back(idx);
        out.times.push_back(e.ts);
    }
    return out;
}

std::vector<IndexedSequence> index_sequences(const std::vector<EventSequence>& seqs,
                                             const AccountVocabulary& vocab) {
    std::vector<IndexedSequence> out;
    out.reserve(seqs.size());
    for (const auto& s : seqs) out.push_back(index_sequence(s, vocab));
    return out;
}

}  // namespace amdn
