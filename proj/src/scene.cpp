#include "snel/scene.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "snel/error.hpp"

namespace snel {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

Modality modality_from_string(const std::string& s, const std::string& origin) {
    const std::string m = lower(s);
    if (m == "image") return Modality::Image;
    if (m == "video") return Modality::Video;
    if (m == "audio") return Modality::Audio;
    if (m == "text") return Modality::Text;
    throw SchemaError(origin + ": modality must be image|video|audio|text, got \"" + s + "\"");
}

const nlohmann::json& require(const nlohmann::json& doc, const char* key,
                              const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw SchemaError(origin + ": missing required key \"" + std::string(key) + "\"");
    }
    return *it;
}

}  // namespace

const char* modality_name(Modality m) {
    switch (m) {
        case Modality::Image: return "image";
        case Modality::Video: return "video";
        case Modality::Audio: return "audio";
        case Modality::Text: return "text";
    }
    return "?";
}

std::string normalize_prompt(const std::string& prompt) {
    std::size_t begin = 0;
    std::size_t end = prompt.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(prompt[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(prompt[end - 1]))) --end;
    return lower(prompt.substr(begin, end - begin));
}

std::string score_vector_problem(const std::vector<double>& scores, std::size_t expected_n) {
    if (scores.size() != expected_n) {
        std::ostringstream os;
        os << "score vector has " << scores.size() << " entries for a scene with " << expected_n
           << " entities";
        return os.str();
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            return "score at position " + std::to_string(i) + " is not finite";
        }
        if (scores[i] < 0.0 || scores[i] > 1.0) {
            std::ostringstream os;
            os << "score " << scores[i] << " at position " << i << " outside [0,1]";
            return os.str();
        }
    }
    return {};
}

Scene scene_from_json(const nlohmann::json& doc, const std::string& origin) {
    if (!doc.is_object()) throw SchemaError(origin + ": scene must be a JSON object");

    Scene scene;
    const auto& id = require(doc, "id", origin);
    if (!id.is_string()) throw SchemaError(origin + ": \"id\" must be a string");
    scene.id = id.get<std::string>();

    const auto& modality = require(doc, "modality", origin);
    if (!modality.is_string()) throw SchemaError(origin + ": \"modality\" must be a string");
    scene.modality = modality_from_string(modality.get<std::string>(), origin);

    const auto& entities = require(doc, "entities", origin);
    if (!entities.is_array()) throw SchemaError(origin + ": \"entities\" must be an array");
    int index = 0;
    for (const auto& item : entities) {
        if (!item.is_object()) {
            throw SchemaError(origin + ": entity " + std::to_string(index) + " must be an object");
        }
        Entity e;
        e.index = index;
        const auto& label = require(item, "label", origin + ": entity " + std::to_string(index));
        if (!label.is_string()) {
            throw SchemaError(origin + ": entity " + std::to_string(index) +
                              ": \"label\" must be a string");
        }
        e.label = label.get<std::string>();
        if (auto it = item.find("description"); it != item.end()) {
            if (!it->is_string()) {
                throw SchemaError(origin + ": entity " + std::to_string(index) +
                                  ": \"description\" must be a string");
            }
            e.description = it->get<std::string>();
        }
        if (auto it = item.find("attributes"); it != item.end()) {
            if (!it->is_object()) {
                throw SchemaError(origin + ": entity " + std::to_string(index) +
                                  ": \"attributes\" must be an object");
            }
            for (const auto& [key, val] : it->items()) {
                if (!val.is_string()) {
                    throw SchemaError(origin + ": entity " + std::to_string(index) +
                                      ": attribute \"" + key + "\" must map to a string");
                }
                e.attributes[lower(key)] = val.get<std::string>();
            }
        }
        scene.entities.push_back(std::move(e));
        ++index;
    }

    if (auto it = doc.find("score_table"); it != doc.end()) {
        if (!it->is_object()) throw SchemaError(origin + ": \"score_table\" must be an object");
        for (const auto& [prompt, row] : it->items()) {
            if (!row.is_array()) {
                throw SchemaError(origin + ": score_table[\"" + prompt + "\"] must be an array");
            }
            std::vector<double> scores;
            scores.reserve(row.size());
            for (const auto& v : row) {
                if (!v.is_number()) {
                    throw SchemaError(origin + ": score_table[\"" + prompt +
                                      "\"] contains a non-numeric entry");
                }
                scores.push_back(v.get<double>());
            }
            const std::string problem = score_vector_problem(scores, scene.size());
            if (!problem.empty()) {
                throw SchemaError(origin + ": score_table[\"" + prompt + "\"]: " + problem);
            }
            scene.score_table[normalize_prompt(prompt)] = std::move(scores);
        }
    }

    if (auto it = doc.find("attr_table"); it != doc.end()) {
        if (!it->is_object()) throw SchemaError(origin + ": \"attr_table\" must be an object");
        for (const auto& [key, val] : it->items()) {
            const std::size_t sep = key.find('|');
            if (sep == std::string::npos) {
                throw SchemaError(origin + ": attr_table key \"" + key +
                                  "\" must look like \"index|prompt\"");
            }
            int entity_index = -1;
            const std::string_view index_part(key.data(), sep);
            auto [ptr, ec] =
                std::from_chars(index_part.data(), index_part.data() + index_part.size(),
                                entity_index);
            if (ec != std::errc() || ptr != index_part.data() + index_part.size()) {
                throw SchemaError(origin + ": attr_table key \"" + key +
                                  "\" has a non-integer index");
            }
            if (entity_index < 0 || static_cast<std::size_t>(entity_index) >= scene.size()) {
                throw SchemaError(origin + ": attr_table key \"" + key +
                                  "\" indexes a missing entity");
            }
            if (!val.is_string()) {
                throw SchemaError(origin + ": attr_table[\"" + key + "\"] must be a string");
            }
            scene.attr_table[{entity_index, normalize_prompt(key.substr(sep + 1))}] =
                val.get<std::string>();
        }
    }

    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open scene file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path + ": invalid JSON: " + e.what());
    }
    return scene_from_json(doc, path);
}

nlohmann::json scene_to_registration_json(const Scene& scene) {
    nlohmann::json doc;
    doc["id"] = scene.id;
    doc["modality"] = modality_name(scene.modality);
    nlohmann::json entities = nlohmann::json::array();
    for (const Entity& e : scene.entities) {
        nlohmann::json item;
        item["label"] = e.label;
        item["description"] = e.description;
        item["attributes"] = nlohmann::json::object();
        for (const auto& [k, v] : e.attributes) item["attributes"][k] = v;
        entities.push_back(std::move(item));
    }
    doc["entities"] = std::move(entities);
    return doc;
}

}  // namespace snel
