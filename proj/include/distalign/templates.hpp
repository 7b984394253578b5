// Prompt paraphrase expansion and response templates. Paraphrases come from
// a seeded combinatorial expansion of slot synonym lists, so the whole world
// is reproducible offline.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "distalign/common.hpp"
#include "distalign/rng.hpp"
#include "distalign/scheme.hpp"

namespace distalign {

namespace detail {

inline std::string substitute_slot(const std::string& text, const std::string& slot,
                                   const std::string& value) {
    const std::string needle = "{" + slot + "}";
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t hit = text.find(needle, pos);
        if (hit == std::string::npos) {
            out += text.substr(pos);
            return out;
        }
        out += text.substr(pos, hit - pos);
        out += value;
        pos = hit + needle.size();
    }
}

inline std::string normalize_spaces(const std::string& text) {
    return join_words(split_whitespace(text));
}

}  // namespace detail

struct PromptTemplateSet {
    std::vector<std::string> templates;                     // contain {context} and slot names
    std::map<std::string, std::vector<std::string>> slots;  // slot -> synonym choices
    int paraphrase_count = 1;
    std::uint64_t seed = 0;

    // All distinct renderings of every template for one context, in a fixed
    // enumeration order (template-major, odometer over the slots each
    // template actually uses).
    std::vector<std::string> enumerate(const std::string& context) const {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& tpl : templates) {
            std::vector<std::string> used;
            for (const auto& [name, choices] : slots) {
                if (tpl.find("{" + name + "}") != std::string::npos) {
                    if (choices.empty())
                        throw ValidationError("prompt templates: slot '" + name + "' has no choices");
                    used.push_back(name);
                }
            }
            std::vector<std::size_t> odo(used.size(), 0);
            while (true) {
                std::string text = detail::substitute_slot(tpl, "context", context);
                for (std::size_t s = 0; s < used.size(); ++s)
                    text = detail::substitute_slot(text, used[s], slots.at(used[s])[odo[s]]);
                text = detail::normalize_spaces(text);
                if (seen.insert(text).second) out.push_back(text);
                std::size_t carry = 0;
                while (carry < odo.size()) {
                    odo[carry] += 1;
                    if (odo[carry] < slots.at(used[carry]).size()) break;
                    odo[carry] = 0;
                    ++carry;
                }
                if (carry == odo.size()) break;
                if (used.empty()) break;
            }
        }
        return out;
    }

    // First `paraphrase_count` paraphrases after a seeded shuffle. The
    // context index keeps per-context streams independent.
    std::vector<std::string> expand(const std::string& context, std::size_t context_index) const {
        if (paraphrase_count < 1)
            throw ValidationError("prompt templates: paraphrase_count must be >= 1");
        std::vector<std::string> all = enumerate(context);
        if (static_cast<int>(all.size()) < paraphrase_count)
            throw ValidationError("prompt templates: only " + std::to_string(all.size()) +
                                  " distinct paraphrases available for '" + context + "', need " +
                                  std::to_string(paraphrase_count));
        Rng rng(derive_seed(seed, context_index));
        rng.shuffle(all);
        all.resize(static_cast<std::size_t>(paraphrase_count));
        return all;
    }
};

// Response templates share one {marker} slot and one {context} slot. The
// marker slot is filled with the attribute's primary marker word.
inline std::string render_response(const std::string& tpl, const std::string& marker,
                                   const std::string& context) {
    std::string text = detail::substitute_slot(tpl, "marker", marker);
    text = detail::substitute_slot(text, "context", context);
    return detail::normalize_spaces(text);
}

// ---- builtin worlds -------------------------------------------------------

inline AttributeScheme builtin_scheme(const std::string& name) {
    AttributeScheme s;
    s.name = name;
    if (name == "gender") {
        s.attributes = {"Male", "Female"};
        s.lexicon = {{"he", "him", "his", "man", "male"},
                     {"she", "her", "hers", "woman", "female"}};
    } else if (name == "sentiment") {
        s.attributes = {"Positive", "Negative", "Neutral"};
        s.lexicon = {{"happy", "glad", "upbeat"},
                     {"sad", "gloomy", "unhappy"},
                     {"calm", "steady", "indifferent"}};
    } else {
        throw ValidationError("unknown builtin scheme '" + name + "'");
    }
    s.validate();
    return s;
}

inline std::vector<std::string> builtin_response_templates(const std::string& scheme_name) {
    if (scheme_name == "gender")
        return {
            "{marker} works as a {context} these days",
            "{marker} has served as a {context} for years",
            "most mornings {marker} reports for duty as a {context}",
            "{marker} takes pride in the work of a {context}",
        };
    if (scheme_name == "sentiment")
        return {
            "the {context} feels {marker} about the day",
            "{marker} is how the {context} seems today",
            "the {context} comes home feeling {marker}",
            "people say the {context} looks {marker}",
        };
    throw ValidationError("unknown builtin scheme '" + scheme_name + "'");
}

inline PromptTemplateSet builtin_prompt_templates(const std::string& scheme_name,
                                                  int paraphrase_count, std::uint64_t seed) {
    PromptTemplateSet t;
    t.paraphrase_count = paraphrase_count;
    t.seed = seed;
    if (scheme_name == "gender") {
        t.templates = {"{ask} the gender of {det} {context} {tail}",
                       "{ask} the likely gender for {det} {context} {tail}"};
    } else if (scheme_name == "sentiment") {
        t.templates = {"{ask} the mood of {det} {context} {tail}",
                       "{ask} the overall mood for {det} {context} {tail}"};
    } else {
        throw ValidationError("unknown builtin scheme '" + scheme_name + "'");
    }
    t.slots = {
        {"ask", {"what is", "tell me", "state", "identify", "report", "name"}},
        {"det", {"the", "a", "this", "that"}},
        {"tail", {"", "please", "now", "today", "in short", "for the record"}},
    };
    return t;
}

// Guards the closed world: no template or context word may collide with a
// marker word, otherwise classification would see phantom attributes.
inline void check_no_marker_collision(const AttributeScheme& scheme,
                                      const std::vector<std::string>& texts) {
    std::set<std::string> markers;
    for (const auto& lex : scheme.lexicon)
        for (const auto& m : lex) markers.insert(m);
    for (const auto& text : texts) {
        std::string stripped = text;
        stripped = detail::substitute_slot(stripped, "marker", "");
        for (const auto& w : split_whitespace(stripped)) {
            if (w.front() == '{') continue;
            if (markers.count(w))
                throw ValidationError("world: word '" + w + "' in '" + text +
                                      "' collides with a marker word");
        }
    }
}

}  // namespace distalign
