// Attribute schemes, context catalogs and target distributions: the raw
// ingredients of the synthetic occupation world.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "distalign/common.hpp"

namespace distalign {

// A named attribute set with one marker-word list per attribute. Marker
// words appear in responses and are what the classifier keys on; the first
// lexicon entry of each attribute is the one used when writing responses.
struct AttributeScheme {
    std::string name;
    std::vector<std::string> attributes;
    std::vector<std::vector<std::string>> lexicon;

    std::size_t size() const { return attributes.size(); }

    int attribute_index(std::string_view label) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i] == label) return static_cast<int>(i);
        return -1;
    }

    void validate() const {
        if (attributes.size() < 2)
            throw ValidationError("scheme '" + name + "': needs at least 2 attributes");
        if (lexicon.size() != attributes.size())
            throw ValidationError("scheme '" + name + "': lexicon size mismatch");
        std::set<std::string> seen_attrs;
        for (const auto& a : attributes)
            if (!seen_attrs.insert(a).second)
                throw ValidationError("scheme '" + name + "': duplicate attribute '" + a + "'");
        std::set<std::string> seen_markers;
        for (std::size_t i = 0; i < lexicon.size(); ++i) {
            if (lexicon[i].empty())
                throw ValidationError("scheme '" + name + "': attribute '" + attributes[i] +
                                      "' has no marker words");
            for (const auto& m : lexicon[i])
                if (!seen_markers.insert(m).second)
                    throw ValidationError("scheme '" + name + "': marker '" + m +
                                          "' used by more than one attribute");
        }
    }
};

enum class SplitTag { kTrain, kHeldout };

struct ContextCatalog {
    std::vector<std::string> contexts;
    std::vector<SplitTag> split_tags;

    std::size_t size() const { return contexts.size(); }

    int context_index(std::string_view label) const {
        for (std::size_t i = 0; i < contexts.size(); ++i)
            if (contexts[i] == label) return static_cast<int>(i);
        return -1;
    }

    std::vector<std::string> with_tag(SplitTag tag) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < contexts.size(); ++i)
            if (split_tags[i] == tag) out.push_back(contexts[i]);
        return out;
    }

    void validate() const {
        if (contexts.size() != split_tags.size())
            throw ValidationError("catalog: split tag per context required");
        std::set<std::string> seen;
        for (const auto& c : contexts)
            if (!seen.insert(c).second)
                throw ValidationError("catalog: duplicate context '" + c + "'");
        bool any_train = false;
        for (auto t : split_tags) any_train |= (t == SplitTag::kTrain);
        if (!any_train) throw ValidationError("catalog: needs at least one train context");
    }
};

enum class TargetMode { kReal, kEven };

// Per-context probability vector over the scheme's attributes.
struct TargetSpec {
    TargetMode mode = TargetMode::kEven;
    std::vector<std::string> contexts;
    std::vector<std::vector<double>> rows;

    const std::vector<double>& row(std::string_view context) const {
        for (std::size_t i = 0; i < contexts.size(); ++i)
            if (contexts[i] == context) return rows[i];
        throw ValidationError("target: no row for context '" + std::string(context) + "'");
    }

    void validate(std::size_t k) const {
        if (contexts.size() != rows.size())
            throw ValidationError("target: context/row count mismatch");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != k)
                throw ValidationError("target: row for '" + contexts[i] + "' has wrong arity");
            double sum = 0.0;
            for (double p : rows[i]) {
                if (p < 0.0)
                    throw ValidationError("target: negative share for '" + contexts[i] + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ValidationError("target: row for '" + contexts[i] + "' does not sum to 1");
            if (mode == TargetMode::kEven)
                for (double p : rows[i])
                    if (std::abs(p - 1.0 / static_cast<double>(k)) > 1e-9)
                        throw ValidationError("target: even mode requires uniform rows");
        }
    }
};

// (context, attribute) -> raw share, as loaded from a target table CSV.
using ShareTable = std::map<std::string, std::map<std::string, double>>;

inline TargetSpec build_target_spec(const AttributeScheme& scheme, const ContextCatalog& catalog,
                                    TargetMode mode, const ShareTable& table = {}) {
    const std::size_t k = scheme.size();
    TargetSpec spec;
    spec.mode = mode;
    spec.contexts = catalog.contexts;
    spec.rows.reserve(catalog.size());
    for (const auto& ctx : catalog.contexts) {
        if (mode == TargetMode::kEven) {
            spec.rows.emplace_back(k, 1.0 / static_cast<double>(k));
            continue;
        }
        auto it = table.find(ctx);
        if (it == table.end())
            throw ValidationError("target table: missing row for context '" + ctx + "'");
        std::vector<double> row(k, 0.0);
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            auto jt = it->second.find(scheme.attributes[i]);
            if (jt == it->second.end())
                throw ValidationError("target table: context '" + ctx + "' missing share for '" +
                                      scheme.attributes[i] + "'");
            if (jt->second < 0.0)
                throw ValidationError("target table: negative share for context '" + ctx + "'");
            row[i] = jt->second;
            sum += jt->second;
        }
        if (sum <= 0.0)
            throw ValidationError("target table: shares for context '" + ctx + "' sum to 0");
        for (double& p : row) p /= sum;
        spec.rows.push_back(std::move(row));
    }
    spec.validate(k);
    return spec;
}

// Integer counts summing exactly to n, via largest-remainder apportionment:
// floor every n*p_i, then hand the remaining units to the largest fractional
// remainders, lowest index first on ties.
inline std::vector<int> apportion_counts(const std::vector<double>& target_row, int n) {
    if (n < 1) throw ValidationError("apportion_counts: n must be >= 1");
    double sum = 0.0;
    for (double p : target_row) {
        if (p < 0.0) throw ValidationError("apportion_counts: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("apportion_counts: probabilities must sum to 1");

    const std::size_t k = target_row.size();
    std::vector<int> counts(k, 0);
    std::vector<double> remainders(k, 0.0);
    int assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double exact = static_cast<double>(n) * target_row[i];
        counts[i] = static_cast<int>(std::floor(exact));
        remainders[i] = exact - std::floor(exact);
        assigned += counts[i];
    }
    int deficit = n - assigned;
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (int d = 0; d < deficit; ++d) counts[order[static_cast<std::size_t>(d)]] += 1;
    return counts;
}

// Target table CSV, header `context,attribute,share`.
inline ShareTable load_share_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open target table: " + path);
    ShareTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "context,attribute,share")
                throw ValidationError(path + ":1: expected header 'context,attribute,share'");
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.rfind(',');
        if (c1 == std::string::npos || c2 == c1)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed row");
        const std::string ctx = line.substr(0, c1);
        const std::string attr = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string share_str = line.substr(c2 + 1);
        double share = 0.0;
        auto res = std::from_chars(share_str.data(), share_str.data() + share_str.size(), share);
        if (res.ec != std::errc() || res.ptr != share_str.data() + share_str.size())
            throw ValidationError(path + ":" + std::to_string(line_no) + ": bad share '" +
                                  share_str + "'");
        table[ctx][attr] = share;
    }
    return table;
}

inline void save_share_table(const std::string& path, const ShareTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write target table: " + path);
    out << "context,attribute,share\n";
    for (const auto& [ctx, shares] : table)
        for (const auto& [attr, share] : shares)
            out << ctx << ',' << attr << ',' << format_double(share) << '\n';
}

}  // namespace distalign
