#include "ais/encoding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "ais/errors.hpp"

namespace ais {

namespace {

// --- small lexing helpers shared by the line-oriented parsers ---

std::string_view strip_comment(std::string_view line) {
    if (auto pos = line.find('#'); pos != std::string_view::npos) {
        line = line.substr(0, pos);
    }
    return line;
}

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

// Invoke fn(line_number, payload) for every non-empty, non-comment line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto eol = text.find('\n');
        std::string_view raw =
            eol == std::string_view::npos ? text : text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        auto payload = trim(strip_comment(raw));
        if (!payload.empty()) fn(line_no, payload);
    }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        if (pos == std::string_view::npos) {
            out.push_back(s);
            return out;
        }
        out.push_back(s.substr(0, pos));
        s = s.substr(pos + 1);
    }
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// BitString
// ---------------------------------------------------------------------------

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
    }
}

BitString BitString::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument(std::string("invalid character '") + c +
                                        "' in bit string");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
}

std::string BitString::to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) out.push_back(b ? '1' : '0');
    return out;
}

// ---------------------------------------------------------------------------
// RealVector
// ---------------------------------------------------------------------------

RealVector::RealVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("real vector entries must be finite");
        }
    }
}

// ---------------------------------------------------------------------------
// Record / AttributeString
// ---------------------------------------------------------------------------

std::string Record::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out.push_back(' ');
        out += fields_[i] ? *fields_[i] : "*";
    }
    return out;
}

std::size_t pattern_length(const AttributeString& pattern) {
    return std::visit([](const auto& p) { return p.size(); }, pattern);
}

std::string_view pattern_kind(const AttributeString& pattern) {
    switch (pattern.index()) {
        case 0: return "bit-string";
        case 1: return "real-vector";
        default: return "record";
    }
}

bool same_kind(const AttributeString& a, const AttributeString& b) {
    return a.index() == b.index();
}

std::string pattern_to_string(const AttributeString& pattern) {
    if (const auto* bs = std::get_if<BitString>(&pattern)) return bs->to_string();
    if (const auto* rec = std::get_if<Record>(&pattern)) return rec->to_string();
    const auto& rv = std::get<RealVector>(pattern);
    std::string out;
    for (std::size_t i = 0; i < rv.size(); ++i) {
        if (i) out.push_back(',');
        out += format_double(rv[i]);
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("format_double: buffer too small");
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// UserProfile
// ---------------------------------------------------------------------------

UserProfile::UserProfile(std::int64_t user_id, std::vector<Vote> votes)
    : user_id_(user_id), votes_(std::move(votes)) {
    std::sort(votes_.begin(), votes_.end(),
              [](const Vote& a, const Vote& b) { return a.item_id < b.item_id; });
    auto dup = std::adjacent_find(
        votes_.begin(), votes_.end(),
        [](const Vote& a, const Vote& b) { return a.item_id == b.item_id; });
    if (dup != votes_.end()) {
        throw std::invalid_argument("duplicate vote for item " +
                                    std::to_string(dup->item_id));
    }
}

bool UserProfile::has_vote(std::int64_t item_id) const {
    return score_for(item_id).has_value();
}

std::optional<int> UserProfile::score_for(std::int64_t item_id) const {
    auto it = std::lower_bound(
        votes_.begin(), votes_.end(), item_id,
        [](const Vote& v, std::int64_t id) { return v.item_id < id; });
    if (it == votes_.end() || it->item_id != item_id) return std::nullopt;
    return it->score;
}

double UserProfile::mean_score() const {
    if (votes_.empty()) {
        throw std::logic_error("mean_score of an empty profile");
    }
    double sum = 0.0;
    for (const auto& v : votes_) sum += v.score;
    return sum / static_cast<double>(votes_.size());
}

ProfileOverlap encode_profile_pair(const UserProfile& a, const UserProfile& b) {
    ProfileOverlap out;
    const auto& va = a.votes();
    const auto& vb = b.votes();
    std::size_t i = 0, j = 0;
    while (i < va.size() && j < vb.size()) {
        if (va[i].item_id < vb[j].item_id) {
            ++i;
        } else if (vb[j].item_id < va[i].item_id) {
            ++j;
        } else {
            out.score_pairs.emplace_back(va[i].score, vb[j].score);
            ++i;
            ++j;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ConnectionRecord
// ---------------------------------------------------------------------------

Record ConnectionRecord::to_record() const {
    std::vector<Record::Field> fields(kFieldCount);
    fields[0] = protocol;
    fields[1] = source_ip;
    fields[2] = source_port ? std::make_optional(std::to_string(*source_port))
                            : std::nullopt;
    fields[3] = dest_ip;
    fields[4] = dest_port ? std::make_optional(std::to_string(*dest_port))
                          : std::nullopt;
    return Record(std::move(fields));
}

std::string ConnectionRecord::to_string() const { return to_record().to_string(); }

bool is_valid_ipv4(std::string_view text) {
    auto parts = split(text, '.');
    if (parts.size() != 4) return false;
    for (auto part : parts) {
        if (part.empty() || part.size() > 3) return false;
        int value = 0;
        for (char c : part) {
            if (c < '0' || c > '9') return false;
            value = value * 10 + (c - '0');
        }
        if (value > 255) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// RecordDomains
// ---------------------------------------------------------------------------

Record::Field RecordDomains::sample(std::size_t field_index, Rng& rng) const {
    const auto& values = field_values.at(field_index);
    std::size_t extra = include_wildcard ? 1 : 0;
    if (values.size() + extra == 0) {
        throw std::logic_error("empty record domain");
    }
    std::uniform_int_distribution<std::size_t> pick(0, values.size() + extra - 1);
    std::size_t k = pick(rng);
    if (k == values.size()) return std::nullopt;  // the wildcard slot
    return values[k];
}

RecordDomains RecordDomains::from_records(std::span<const Record> records,
                                          bool include_wildcard) {
    RecordDomains out;
    out.include_wildcard = include_wildcard;
    std::size_t width = 0;
    for (const auto& r : records) width = std::max(width, r.size());
    out.field_values.resize(width);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r.field(i)) out.field_values[i].push_back(*r.field(i));
        }
    }
    for (auto& values : out.field_values) {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ratings files
// ---------------------------------------------------------------------------

std::vector<UserProfile> parse_ratings(std::string_view text,
                                       const RatingScale& scale) {
    // Preserve user order of first appearance while collapsing repeated
    // (user, item) pairs to the last score seen.
    std::vector<std::int64_t> user_order;
    std::map<std::int64_t, std::map<std::int64_t, int>> votes_by_user;

    for_each_line(text, [&](std::size_t line_no, std::string_view payload) {
        auto fields = split(payload, '\t');
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected user<TAB>item<TAB>score but found " +
                                          std::to_string(fields.size()) + " field(s)");
        }
        auto user = parse_int<std::int64_t>(trim(fields[0]));
        if (!user) {
            throw ParseError(line_no, "invalid user id '" + std::string(trim(fields[0])) + "'");
        }
        auto item = parse_int<std::int64_t>(trim(fields[1]));
        if (!item) {
            throw ParseError(line_no, "invalid item id '" + std::string(trim(fields[1])) + "'");
        }
        auto score = parse_int<int>(trim(fields[2]));
        if (!score) {
            throw ParseError(line_no, "invalid score '" + std::string(trim(fields[2])) + "'");
        }
        if (!scale.contains(*score)) {
            throw ParseError(line_no, "score " + std::to_string(*score) +
                                          " outside allowed range [" +
                                          std::to_string(scale.min_score) + ", " +
                                          std::to_string(scale.max_score) + "]");
        }
        if (!votes_by_user.contains(*user)) user_order.push_back(*user);
        votes_by_user[*user][*item] = *score;
    });

    std::vector<UserProfile> out;
    out.reserve(user_order.size());
    for (auto user : user_order) {
        std::vector<Vote> votes;
        votes.reserve(votes_by_user[user].size());
        for (auto [item, score] : votes_by_user[user]) votes.push_back({item, score});
        out.emplace_back(user, std::move(votes));
    }
    return out;
}

std::string format_ratings(std::span<const UserProfile> profiles) {
    std::string out;
    for (const auto& profile : profiles) {
        for (const auto& vote : profile.votes()) {
            out += std::to_string(profile.user_id());
            out.push_back('\t');
            out += std::to_string(vote.item_id);
            out.push_back('\t');
            out += std::to_string(vote.score);
            out.push_back('\n');
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Connection logs
// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> parse_token_field(std::string_view token) {
    if (token == "*") return std::nullopt;
    return std::string(token);
}

std::optional<std::string> parse_ip_field(std::size_t line_no, std::string_view token) {
    if (token == "*") return std::nullopt;
    if (!is_valid_ipv4(token)) {
        throw ParseError(line_no, "invalid IPv4 address '" + std::string(token) + "'");
    }
    return std::string(token);
}

std::optional<std::uint16_t> parse_port_field(std::size_t line_no,
                                              std::string_view token) {
    if (token == "*") return std::nullopt;
    auto port = parse_int<std::uint32_t>(token);
    if (!port || *port > 65535) {
        throw ParseError(line_no, "invalid port '" + std::string(token) + "'");
    }
    return static_cast<std::uint16_t>(*port);
}

}  // namespace

std::vector<ConnectionRecord> parse_connection_log(std::string_view text) {
    std::vector<ConnectionRecord> out;
    for_each_line(text, [&](std::size_t line_no, std::string_view payload) {
        auto tokens = split_whitespace(payload);
        if (tokens.size() != ConnectionRecord::kFieldCount) {
            throw ParseError(line_no,
                             "expected protocol source_ip source_port dest_ip dest_port "
                             "but found " +
                                 std::to_string(tokens.size()) + " field(s)");
        }
        ConnectionRecord rec;
        rec.protocol = parse_token_field(tokens[0]);
        rec.source_ip = parse_ip_field(line_no, tokens[1]);
        rec.source_port = parse_port_field(line_no, tokens[2]);
        rec.dest_ip = parse_ip_field(line_no, tokens[3]);
        rec.dest_port = parse_port_field(line_no, tokens[4]);
        out.push_back(std::move(rec));
    });
    return out;
}

std::string format_connection_log(std::span<const ConnectionRecord> records) {
    std::string out;
    for (const auto& rec : records) {
        out += rec.to_string();
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bit-string lists
// ---------------------------------------------------------------------------

std::vector<BitString> parse_bitstrings(std::string_view text) {
    std::vector<BitString> out;
    for_each_line(text, [&](std::size_t line_no, std::string_view payload) {
        for (char c : payload) {
            if (c != '0' && c != '1') {
                throw ParseError(line_no, std::string("invalid character '") + c +
                                              "' in bit string");
            }
        }
        if (!out.empty() && payload.size() != out.front().size()) {
            throw ParseError(line_no, "expected " + std::to_string(out.front().size()) +
                                          " bits, found " + std::to_string(payload.size()));
        }
        out.push_back(BitString::from_string(payload));
    });
    return out;
}

}  // namespace ais
