#include "snel/backend.hpp"

#include <cctype>
#include <set>
#include <string>

#include "snel/error.hpp"

namespace snel {

namespace {

const std::set<std::string>& stop_words() {
    static const std::set<std::string> words = {"a",  "an", "the",  "of", "in",
                                                "on", "with", "that", "is", "near"};
    return words;
}

// Lowercase word tokens with the stop-word list removed.
std::set<std::string> word_tokens(const std::string& text) {
    std::set<std::string> out;
    std::string word;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!word.empty()) {
            if (!stop_words().count(word)) out.insert(word);
            word.clear();
        }
    }
    if (!word.empty() && !stop_words().count(word)) out.insert(word);
    return out;
}

bool contains_whole_word(const std::string& haystack_lower, const std::string& word_lower) {
    std::size_t pos = 0;
    while ((pos = haystack_lower.find(word_lower, pos)) != std::string::npos) {
        const bool left_ok =
            pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack_lower[pos - 1]));
        const std::size_t after = pos + word_lower.size();
        const bool right_ok = after >= haystack_lower.size() ||
                              !std::isalnum(static_cast<unsigned char>(haystack_lower[after]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

}  // namespace

ScoreVector MockBackend::align(const Scene& scene, const std::string& prompt) {
    const std::string key = normalize_prompt(prompt);
    if (auto it = scene.score_table.find(key); it != scene.score_table.end()) {
        return ScoreVector{it->second};
    }

    // Lexical fallback: fraction of prompt tokens found among the entity's
    // label + description tokens. Crude by design; it only guarantees a
    // deterministic vector for prompts the fixture does not list.
    const std::set<std::string> prompt_tokens = word_tokens(prompt);
    std::vector<double> scores;
    scores.reserve(scene.size());
    for (const Entity& e : scene.entities) {
        if (prompt_tokens.empty()) {
            scores.push_back(0.0);
            continue;
        }
        const std::set<std::string> entity_tokens = word_tokens(e.label + " " + e.description);
        std::size_t hits = 0;
        for (const std::string& t : prompt_tokens) hits += entity_tokens.count(t);
        scores.push_back(static_cast<double>(hits) / static_cast<double>(prompt_tokens.size()));
    }
    return ScoreVector{std::move(scores)};
}

std::vector<std::string> MockBackend::attr(const Scene& scene,
                                           const std::vector<int>& entity_indices,
                                           const std::string& prompt) {
    const std::string key = normalize_prompt(prompt);
    std::vector<std::string> out;
    out.reserve(entity_indices.size());
    for (int index : entity_indices) {
        if (index < 0 || static_cast<std::size_t>(index) >= scene.size()) {
            throw BackendError("entity index " + std::to_string(index) + " out of range for scene '" +
                               scene.id + "'");
        }
        if (auto it = scene.attr_table.find({index, key}); it != scene.attr_table.end()) {
            out.push_back(it->second);
            continue;
        }
        // Keyword fallback: an attribute whose key appears in the prompt as a
        // whole word answers the request. Keys are checked in sorted order.
        const Entity& e = scene.entities[static_cast<std::size_t>(index)];
        std::string value = kUnknownAttribute;
        for (const auto& [attr_key, attr_value] : e.attributes) {
            if (contains_whole_word(key, attr_key)) {
                value = attr_value;
                break;
            }
        }
        out.push_back(std::move(value));
    }
    return out;
}

}  // namespace snel
