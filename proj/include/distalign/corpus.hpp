// Base dataset construction and its transformation into preference pairs,
// plus JSON-Lines persistence for both.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "distalign/common.hpp"
#include "distalign/rng.hpp"
#include "distalign/scheme.hpp"
#include "distalign/templates.hpp"

namespace distalign {

struct BaseExample {
    std::string prompt;
    std::string response;
    std::string attribute;
    std::string context;
    std::string split;

    bool operator==(const BaseExample&) const = default;
};

struct PreferencePair {
    std::string prompt;
    std::string chosen;    // steering display + response
    std::string rejected;  // steering display + contrastive response
    std::string chosen_attribute;
    std::string rejected_attribute;
    std::string context;  // in-memory only; not serialized

    bool operator==(const PreferencePair&) const = default;
};

// One context's worth of prompts, in catalog order.
using ContextPrompts = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Builds n examples per context whose attribute counts equal the apportioned
// target counts exactly. Prompts cycle through the provided paraphrases;
// attribute assignment and final ordering are shuffled deterministically.
inline std::vector<BaseExample> synthesize_base_dataset(
    const ContextPrompts& prompts_by_context, const AttributeScheme& scheme,
    const std::vector<std::string>& response_templates, const TargetSpec& target,
    int n_per_context, std::uint64_t seed, const std::string& split_label) {
    if (n_per_context < 1) throw ValidationError("synthesize: n_per_context must be >= 1");
    if (response_templates.empty()) throw ValidationError("synthesize: empty response template set");

    std::vector<BaseExample> out;
    std::size_t context_index = 0;
    for (const auto& [context, prompts] : prompts_by_context) {
        if (prompts.empty())
            throw ValidationError("synthesize: no prompts for context '" + context + "'");
        Rng rng(derive_seed(seed, context_index++));
        const std::vector<int> counts = apportion_counts(target.row(context), n_per_context);
        std::vector<int> attr_of;
        attr_of.reserve(static_cast<std::size_t>(n_per_context));
        for (std::size_t a = 0; a < counts.size(); ++a)
            for (int c = 0; c < counts[a]; ++c) attr_of.push_back(static_cast<int>(a));
        rng.shuffle(attr_of);
        for (int i = 0; i < n_per_context; ++i) {
            const int a = attr_of[static_cast<std::size_t>(i)];
            const auto& tpl =
                response_templates[rng.uniform_below(response_templates.size())];
            BaseExample ex;
            ex.prompt = prompts[static_cast<std::size_t>(i) % prompts.size()];
            ex.response = render_response(tpl, scheme.lexicon[static_cast<std::size_t>(a)][0], context);
            ex.attribute = scheme.attributes[static_cast<std::size_t>(a)];
            ex.context = context;
            ex.split = split_label;
            out.push_back(std::move(ex));
        }
    }
    Rng rng(derive_seed(seed, 0xD5ULL));
    rng.shuffle(out);
    return out;
}

// One pair per base example. The rejected attribute is sampled uniformly
// from the remaining attributes and its response is a fresh template
// expansion for that attribute.
inline std::vector<PreferencePair> to_preference_pairs(
    const std::vector<BaseExample>& base, const AttributeScheme& scheme,
    const std::vector<std::string>& response_templates,
    const std::vector<std::string>& steering_displays, std::uint64_t seed) {
    if (base.empty()) throw ValidationError("to_preference_pairs: empty base dataset");
    if (scheme.size() < 2) throw ValidationError("to_preference_pairs: need k >= 2 attributes");
    if (steering_displays.size() != scheme.size())
        throw ValidationError("to_preference_pairs: one steering display per attribute required");

    Rng rng(derive_seed(seed, 0xBEEFULL));
    std::vector<PreferencePair> out;
    out.reserve(base.size());
    for (const auto& ex : base) {
        const int a = scheme.attribute_index(ex.attribute);
        if (a < 0)
            throw ValidationError("to_preference_pairs: unknown attribute '" + ex.attribute + "'");
        std::size_t neg = rng.uniform_below(scheme.size() - 1);
        if (neg >= static_cast<std::size_t>(a)) ++neg;
        const auto& tpl = response_templates[rng.uniform_below(response_templates.size())];
        PreferencePair pair;
        pair.prompt = ex.prompt;
        pair.chosen = steering_displays[static_cast<std::size_t>(a)] + " " + ex.response;
        pair.rejected = steering_displays[neg] + " " +
                        render_response(tpl, scheme.lexicon[neg][0], ex.context);
        pair.chosen_attribute = ex.attribute;
        pair.rejected_attribute = scheme.attributes[neg];
        pair.context = ex.context;
        out.push_back(std::move(pair));
    }
    return out;
}

// Recovers the context of a prompt by longest word-subsequence match against
// the catalog labels. Needed because pair records do not serialize context.
inline std::string resolve_context(const std::string& prompt, const ContextCatalog& catalog) {
    const auto words = split_whitespace(prompt);
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t c = 0; c < catalog.contexts.size(); ++c) {
        const auto label_words = split_whitespace(catalog.contexts[c]);
        if (label_words.empty() || label_words.size() > words.size()) continue;
        for (std::size_t i = 0; i + label_words.size() <= words.size(); ++i) {
            bool match = true;
            for (std::size_t j = 0; j < label_words.size(); ++j)
                if (words[i + j] != label_words[j]) {
                    match = false;
                    break;
                }
            if (match && label_words.size() > best_len) {
                best = static_cast<int>(c);
                best_len = label_words.size();
            }
        }
    }
    if (best < 0)
        throw ValidationError("cannot resolve context for prompt: '" + prompt + "'");
    return catalog.contexts[static_cast<std::size_t>(best)];
}

// ---- JSON Lines persistence ------------------------------------------------

inline void save_base_dataset(const std::string& path, const std::vector<BaseExample>& examples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset: " + path);
    for (const auto& ex : examples) {
        nlohmann::json j{{"prompt", ex.prompt},
                         {"response", ex.response},
                         {"attribute", ex.attribute},
                         {"context", ex.context},
                         {"split", ex.split}};
        out << j.dump() << '\n';
    }
}

inline std::vector<BaseExample> load_base_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    std::vector<BaseExample> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("prompt") || !j.contains("response") ||
            !j.contains("attribute") || !j.contains("context") || !j.contains("split"))
            throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed base example");
        BaseExample ex;
        ex.prompt = j.at("prompt").get<std::string>();
        ex.response = j.at("response").get<std::string>();
        ex.attribute = j.at("attribute").get<std::string>();
        ex.context = j.at("context").get<std::string>();
        ex.split = j.at("split").get<std::string>();
        out.push_back(std::move(ex));
    }
    return out;
}

inline void save_preference_pairs(const std::string& path,
                                  const std::vector<PreferencePair>& pairs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset: " + path);
    for (const auto& p : pairs) {
        nlohmann::json j{{"prompt", p.prompt},
                         {"chosen", p.chosen},
                         {"rejected", p.rejected},
                         {"chosen_attribute", p.chosen_attribute},
                         {"rejected_attribute", p.rejected_attribute}};
        out << j.dump() << '\n';
    }
}

inline std::vector<PreferencePair> load_preference_pairs(const std::string& path,
                                                         const ContextCatalog* catalog = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    std::vector<PreferencePair> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("prompt") || !j.contains("chosen") ||
            !j.contains("rejected") || !j.contains("chosen_attribute") ||
            !j.contains("rejected_attribute"))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": malformed preference pair");
        PreferencePair p;
        p.prompt = j.at("prompt").get<std::string>();
        p.chosen = j.at("chosen").get<std::string>();
        p.rejected = j.at("rejected").get<std::string>();
        p.chosen_attribute = j.at("chosen_attribute").get<std::string>();
        p.rejected_attribute = j.at("rejected_attribute").get<std::string>();
        if (catalog != nullptr) p.context = resolve_context(p.prompt, *catalog);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace distalign
