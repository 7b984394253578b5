// Closed word-level vocabulary with reserved control ids and steering-token
// extension. Steering tokens are fresh ids whose display strings can never be
// produced by tokenizing natural template text.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "distalign/common.hpp"
#include "distalign/scheme.hpp"

namespace distalign {

enum class SteeringSurface { kNumeric, kPronoun, kWord };

inline SteeringSurface steering_surface_from_string(const std::string& s) {
    if (s == "numeric") return SteeringSurface::kNumeric;
    if (s == "pronoun") return SteeringSurface::kPronoun;
    if (s == "word") return SteeringSurface::kWord;
    throw ValidationError("unknown steering surface form '" + s + "'");
}

inline std::string steering_display(const AttributeScheme& scheme, SteeringSurface surface,
                                    std::size_t attr_index) {
    switch (surface) {
        case SteeringSurface::kNumeric:
            return "<steer:" + std::to_string(attr_index) + ">";
        case SteeringSurface::kPronoun:
            return "<steer:" + scheme.lexicon[attr_index].front() + ">";
        case SteeringSurface::kWord:
            return "<steer:" + scheme.lexicon[attr_index].back() + ">";
    }
    throw ValidationError("bad steering surface");
}

struct Vocab {
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;

    std::vector<std::string> tokens;
    std::unordered_map<std::string, int> index;
    std::vector<int> steering_ids;                 // one per attribute, scheme order
    std::vector<std::string> steering_attributes;  // attribute labels, scheme order

    int size() const { return static_cast<int>(tokens.size()); }

    bool contains(const std::string& word) const { return index.count(word) > 0; }

    int id(const std::string& word) const {
        auto it = index.find(word);
        if (it == index.end()) throw ValidationError("unknown token '" + word + "'");
        return it->second;
    }

    bool is_steering(int token_id) const { return steering_slot(token_id) >= 0; }

    // Attribute slot of a steering id, -1 for ordinary tokens.
    int steering_slot(int token_id) const {
        for (std::size_t i = 0; i < steering_ids.size(); ++i)
            if (steering_ids[i] == token_id) return static_cast<int>(i);
        return -1;
    }

    std::vector<int> encode(const std::string& text) const {
        std::vector<int> ids;
        for (const auto& w : split_whitespace(text)) ids.push_back(id(w));
        return ids;
    }

    std::string decode(const std::vector<int>& ids, bool skip_control = true) const {
        std::vector<std::string> words;
        for (int t : ids) {
            if (t < 0 || t >= size()) throw ValidationError("token id out of range");
            if (skip_control && (t == kPad || t == kBos || t == kEos)) continue;
            words.push_back(tokens[static_cast<std::size_t>(t)]);
        }
        return join_words(words);
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto& t : tokens) {
            h = fnv1a64(t, h);
            h = fnv1a64("\x1f", h);
        }
        for (std::size_t i = 0; i < steering_ids.size(); ++i) {
            h = fnv1a64(steering_attributes[i], h);
            h = fnv1a64(std::to_string(steering_ids[i]), h);
        }
        return h;
    }

private:
    friend Vocab build_vocab(const std::vector<std::string>&);
    friend void extend_vocab_with_steering(Vocab&, const AttributeScheme&, SteeringSurface);

    void push(const std::string& token) {
        if (!index.emplace(token, size()).second)
            throw ValidationError("duplicate token '" + token + "'");
        tokens.push_back(token);
    }
};

inline Vocab build_vocab(const std::vector<std::string>& words) {
    Vocab v;
    v.push("<pad>");
    v.push("<bos>");
    v.push("<eos>");
    std::vector<std::string> sorted = words;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& w : sorted) v.push(w);
    return v;
}

// Appends one fresh token id per attribute. Applying this twice to the same
// vocab is an error (duplicate display strings).
inline void extend_vocab_with_steering(Vocab& vocab, const AttributeScheme& scheme,
                                       SteeringSurface surface) {
    for (std::size_t i = 0; i < scheme.size(); ++i) {
        const std::string display = steering_display(scheme, surface, i);
        const int token_id = vocab.size();
        vocab.push(display);  // throws on duplicate
        vocab.steering_ids.push_back(token_id);
        vocab.steering_attributes.push_back(scheme.attributes[i]);
    }
}

}  // namespace distalign
