#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace amdn {

// One activity record: acting account (raw identifier) at a point in time.
struct Event {
    std::string account;
    double ts = 0.0;

    bool operator==(const Event&) const = default;
};

struct EventSequence {
    std::string id;
    std::vector<Event> events;

    bool operator==(const EventSequence&) const = default;
    std::size_t size() const { return events.size(); }
};

// Dense-index form used by the numeric code paths.
struct IndexedSequence {
    std::string id;
    std::vector<int> accounts;
    std::vector<double> times;

    std::size_t size() const { return accounts.size(); }
};

class AccountVocabulary {
public:
    AccountVocabulary() = default;

    // Appends if absent, returns dense index.
    int add(const std::string& account);
    // -1 if unknown.
    int lookup(const std::string& account) const;
    const std::string& name(int index) const { return ids_.at(index); }
    int size() const { return static_cast<int>(ids_.size()); }
    const std::vector<std::string>& ids() const { return ids_; }

    void save(const std::string& path) const;
    static AccountVocabulary load(const std::string& path);

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
};

struct DatasetSplit {
    std::vector<EventSequence> train, validation, test;
    std::array<double, 3> fractions{1.0, 0.0, 0.0};
};

enum class LogFormat { Jsonl, Csv };

// Groups records by sequence id, sorts each group by timestamp (stable on
// ties). Throws std::runtime_error naming the line on malformed records or
// negative / non-finite timestamps.
std::vector<EventSequence> parse_event_log(const std::string& path, LogFormat format);

// Writes sequences in the JSONL input format (one {seq, account, ts} per line).
void write_event_log(const std::string& path, const std::vector<EventSequence>& sequences);

struct VocabularyResult {
    AccountVocabulary vocab;
    std::vector<EventSequence> sequences;  // filtered copies
};

// Drops accounts with fewer than min_activity events (iterated to a fixed
// point so the result is idempotent), removes their events, discards
// sequences left with < 2 events. Surviving accounts indexed in
// first-appearance order. Throws if no account survives.
VocabularyResult build_vocabulary(const std::vector<EventSequence>& sequences, int min_activity);

// Chops sequences into consecutive chunks of at most max_len events (tails
// of length < 2 dropped), shuffles chunks with the seed and partitions by
// fractions; floor sizes, remainder goes to train.
DatasetSplit prepare_splits(const std::vector<EventSequence>& sequences, std::size_t max_len,
                            std::array<double, 3> fractions, std::uint64_t seed);

// Maps raw account strings to dense indices. Throws on unknown accounts.
IndexedSequence index_sequence(const EventSequence& seq, const AccountVocabulary& vocab);
std::vector<IndexedSequence> index_sequences(const std::vector<EventSequence>& seqs,
                                             const AccountVocabulary& vocab);

}  // namespace amdn
