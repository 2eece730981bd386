#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace snel {

// One alignment score per scene entity, each in [0, 1].
struct ScoreVector {
    std::vector<double> scores;

    std::size_t size() const { return scores.size(); }
    double operator[](std::size_t i) const { return scores[i]; }

    friend bool operator==(const ScoreVector& a, const ScoreVector& b) {
        return a.scores == b.scores;
    }
};

// Returns a description of the first invariant violation (wrong length,
// value outside [0,1], non-finite value), or empty when the vector is valid.
std::string score_vector_problem(const std::vector<double>& scores, std::size_t expected_n);

struct Entity {
    int index = 0;  // equals position in the scene's entity list
    std::string label;
    std::string description;
    std::map<std::string, std::string> attributes;
};

enum class Modality { Image, Video, Audio, Text };

const char* modality_name(Modality m);

// A fixed universe of detected entities plus the deterministic fixture data
// the mock backend answers from. Immutable after load.
struct Scene {
    std::string id;
    Modality modality = Modality::Image;
    std::vector<Entity> entities;
    // Keyed by normalized (trimmed, lowercased) prompt text.
    std::map<std::string, std::vector<double>> score_table;
    // Keyed by (entity index, normalized prompt text).
    std::map<std::pair<int, std::string>, std::string> attr_table;

    std::size_t size() const { return entities.size(); }
};

// Normalization applied to prompt keys before lookup: trim + lowercase.
std::string normalize_prompt(const std::string& prompt);

// Parses and validates a scene. `origin` names the source in error messages.
// Throws SchemaError on any invariant violation.
Scene scene_from_json(const nlohmann::json& doc, const std::string& origin);

// Reads a scene file. Throws FileError if unreadable, SchemaError if invalid.
Scene load_scene(const std::string& path);

// Scene JSON without the score/attr fixture tables: the body of the remote
// registration request.
nlohmann::json scene_to_registration_json(const Scene& scene);

}  // namespace snel
