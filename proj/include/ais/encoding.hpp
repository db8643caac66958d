#pragma once

// Data shapes shared by every algorithm in the library, plus the parsers and
// formatters for the batch file formats (ratings tables, connection logs,
// fixed-width bit-string lists).
//
// The three pattern representations (BitString, RealVector, Record) are held
// behind one variant, AttributeString, so pools and detectors can mix freely
// with the code that consumes them dispatching once.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ais/rng.hpp"

namespace ais {

// ---------------------------------------------------------------------------
// Pattern representations
// ---------------------------------------------------------------------------

// Fixed-width binary string, e.g. "01101".
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> bits);

    // Parse from a textual form of '0'/'1' characters; throws
    // std::invalid_argument on anything else.
    static BitString from_string(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::uint8_t bit(std::size_t i) const { return bits_[i]; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;
    // Lexicographic; gives detector sets a canonical order.
    friend auto operator<=>(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

// Real-valued feature vector. All entries must be finite.
class RealVector {
public:
    RealVector() = default;
    explicit RealVector(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const RealVector&, const RealVector&) = default;

private:
    std::vector<double> values_;
};

// Tuple of symbolic fields where std::nullopt is the wildcard: it matches any
// value when patterns are compared, and round-trips as "*" in text form.
class Record {
public:
    using Field = std::optional<std::string>;

    Record() = default;
    explicit Record(std::vector<Field> fields) : fields_(std::move(fields)) {}

    std::size_t size() const noexcept { return fields_.size(); }
    const Field& field(std::size_t i) const { return fields_[i]; }
    const std::vector<Field>& fields() const noexcept { return fields_; }

    std::string to_string() const;  // space-separated, wildcards as "*"

    friend bool operator==(const Record&, const Record&) = default;

private:
    std::vector<Field> fields_;
};

using AttributeString = std::variant<BitString, RealVector, Record>;

// Number of bits / entries / fields.
std::size_t pattern_length(const AttributeString& pattern);

// Human-readable name of the representation, for error messages.
std::string_view pattern_kind(const AttributeString& pattern);

// True when both patterns use the same representation.
bool same_kind(const AttributeString& a, const AttributeString& b);

// Text form used in reports: bits as "0101", records as their field list,
// real vectors comma-separated.
std::string pattern_to_string(const AttributeString& pattern);

// Shortest decimal string that round-trips through a double. All file output
// goes through this so results are byte-identical across runs.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// User rating profiles
// ---------------------------------------------------------------------------

// Allowed integer score range for ratings data.
struct RatingScale {
    int min_score = 0;
    int max_score = 5;

    bool contains(int score) const noexcept {
        return score >= min_score && score <= max_score;
    }
};

struct Vote {
    std::int64_t item_id = 0;
    int score = 0;

    friend bool operator==(const Vote&, const Vote&) = default;
};

// A user's votes, sorted by item id, at most one vote per item.
class UserProfile {
public:
    UserProfile() = default;
    // Throws std::invalid_argument if two votes share an item id.
    UserProfile(std::int64_t user_id, std::vector<Vote> votes);

    std::int64_t user_id() const noexcept { return user_id_; }
    const std::vector<Vote>& votes() const noexcept { return votes_; }
    std::size_t size() const noexcept { return votes_.size(); }
    bool empty() const noexcept { return votes_.empty(); }

    bool has_vote(std::int64_t item_id) const;
    std::optional<int> score_for(std::int64_t item_id) const;

    // Mean over all of this user's votes; requires a non-empty profile.
    double mean_score() const;

    friend bool operator==(const UserProfile&, const UserProfile&) = default;

private:
    std::int64_t user_id_ = 0;
    std::vector<Vote> votes_;  // sorted by item_id
};

// The votes two users cast on the items both of them rated, paired up in
// item order. This is the common encoding step in front of every
// profile-correlation computation.
struct ProfileOverlap {
    std::vector<std::pair<int, int>> score_pairs;

    std::size_t size() const noexcept { return score_pairs.size(); }
};

ProfileOverlap encode_profile_pair(const UserProfile& a, const UserProfile& b);

// ---------------------------------------------------------------------------
// Network connection records
// ---------------------------------------------------------------------------

// One observed (or detector-template) network connection. std::nullopt in any
// field is the wildcard.
struct ConnectionRecord {
    std::optional<std::string> protocol;
    std::optional<std::string> source_ip;
    std::optional<std::uint16_t> source_port;
    std::optional<std::string> dest_ip;
    std::optional<std::uint16_t> dest_port;

    static constexpr std::size_t kFieldCount = 5;

    Record to_record() const;
    std::string to_string() const;

    friend bool operator==(const ConnectionRecord&, const ConnectionRecord&) = default;
};

bool is_valid_ipv4(std::string_view text);

// ---------------------------------------------------------------------------
// Candidate domains for symbolic records
// ---------------------------------------------------------------------------

// Per-field token pools that record-valued generation and mutation draw
// from. Field order matches Record field order.
struct RecordDomains {
    std::vector<std::vector<std::string>> field_values;
    bool include_wildcard = true;

    std::size_t field_count() const noexcept { return field_values.size(); }

    // Uniform draw for one field; wildcard (nullopt) participates as one
    // extra choice when include_wildcard is set.
    Record::Field sample(std::size_t field_index, Rng& rng) const;

    // Collect the distinct tokens appearing per field, sorted, so the result
    // does not depend on input order.
    static RecordDomains from_records(std::span<const Record> records,
                                      bool include_wildcard = true);
};

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------
// Shared conventions: one entry per line, '#' starts a comment, blank lines
// are skipped, and errors are reported as ParseError with the 1-based line.

// Tab-separated "user<TAB>item<TAB>score" rows. Users appear in
// first-appearance order; a repeated (user, item) pair keeps the last score
// seen.
std::vector<UserProfile> parse_ratings(std::string_view text,
                                       const RatingScale& scale = {});

// Inverse of parse_ratings: one row per vote, grouped by profile.
std::string format_ratings(std::span<const UserProfile> profiles);

// "protocol source_ip source_port dest_ip dest_port" rows, '*' wildcards.
std::vector<ConnectionRecord> parse_connection_log(std::string_view text);

std::string format_connection_log(std::span<const ConnectionRecord> records);

// Fixed-width rows of '0'/'1'; every row must match the width of the first.
std::vector<BitString> parse_bitstrings(std::string_view text);

}  // namespace ais
