#include "snel/remote.hpp"

#include <chrono>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "snel/error.hpp"

namespace snel {

namespace {

using nlohmann::json;

std::chrono::milliseconds to_millis(double seconds) {
    return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

json parse_body(const std::string& body, const std::string& endpoint) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ProtocolError(endpoint + ": response is not valid JSON: " + e.what());
    }
}

[[noreturn]] void transport_failure(const std::string& endpoint, const httplib::Result& res) {
    if (!res) {
        throw TransportError(endpoint + ": request failed: " + httplib::to_string(res.error()));
    }
    throw TransportError(endpoint + ": server answered " + std::to_string(res->status) + ": " +
                         res->body);
}

}  // namespace

RemoteBackend::RemoteBackend(std::string base_url, double timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

void RemoteBackend::prepare(const Scene& scene) {
    ensure_registered(scene);
}

void RemoteBackend::ensure_registered(const Scene& scene) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (registered_.count(scene.id)) return;
    }
    httplib::Client client(base_url_);
    client.set_connection_timeout(to_millis(timeout_seconds_));
    client.set_read_timeout(to_millis(timeout_seconds_));
    client.set_write_timeout(to_millis(timeout_seconds_));

    const std::string endpoint = "/scenes/" + scene.id;
    auto res = client.Put(endpoint, scene_to_registration_json(scene).dump(), "application/json");
    if (!res || res->status != 200) transport_failure(endpoint, res);

    std::lock_guard<std::mutex> lock(mutex_);
    registered_.insert(scene.id);
}

ScoreVector RemoteBackend::align(const Scene& scene, const std::string& prompt) {
    ensure_registered(scene);
    httplib::Client client(base_url_);
    client.set_connection_timeout(to_millis(timeout_seconds_));
    client.set_read_timeout(to_millis(timeout_seconds_));
    client.set_write_timeout(to_millis(timeout_seconds_));

    json request;
    request["scene_id"] = scene.id;
    request["prompt"] = prompt;
    auto res = client.Post("/align", request.dump(), "application/json");
    if (!res || res->status != 200) transport_failure("/align", res);

    const json body = parse_body(res->body, "/align");
    auto it = body.find("scores");
    if (it == body.end() || !it->is_array()) {
        throw ProtocolError("/align: response lacks a \"scores\" array");
    }
    std::vector<double> scores;
    scores.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_number()) {
            throw ProtocolError("/align: \"scores\" contains a non-numeric entry");
        }
        scores.push_back(v.get<double>());
    }
    const std::string problem = score_vector_problem(scores, scene.size());
    if (!problem.empty()) throw ProtocolError("/align: " + problem);
    return ScoreVector{std::move(scores)};
}

std::vector<std::string> RemoteBackend::attr(const Scene& scene,
                                             const std::vector<int>& entity_indices,
                                             const std::string& prompt) {
    ensure_registered(scene);
    httplib::Client client(base_url_);
    client.set_connection_timeout(to_millis(timeout_seconds_));
    client.set_read_timeout(to_millis(timeout_seconds_));
    client.set_write_timeout(to_millis(timeout_seconds_));

    json request;
    request["scene_id"] = scene.id;
    request["entity_ids"] = entity_indices;
    request["prompt"] = prompt;
    auto res = client.Post("/attr", request.dump(), "application/json");
    if (!res || res->status != 200) transport_failure("/attr", res);

    const json body = parse_body(res->body, "/attr");
    auto it = body.find("values");
    if (it == body.end() || !it->is_array()) {
        throw ProtocolError("/attr: response lacks a \"values\" array");
    }
    std::vector<std::string> values;
    values.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw ProtocolError("/attr: \"values\" contains a non-string entry");
        }
        values.push_back(v.get<std::string>());
    }
    if (values.size() != entity_indices.size()) {
        throw ProtocolError("/attr: expected " + std::to_string(entity_indices.size()) +
                            " values, got " + std::to_string(values.size()));
    }
    return values;
}

}  // namespace snel
