#pragma once

#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "snel/backend.hpp"

namespace snel {

// HTTP client for an external alignment server.
//
// Protocol (JSON bodies, content-type application/json):
//   PUT  /scenes/{id}  body = scene minus score/attr tables   -> 200
//   POST /align  {"scene_id","prompt"}                        -> {"scores":[...]}
//   POST /attr   {"scene_id","entity_ids":[...],"prompt"}     -> {"values":[...]}
//
// Non-200 statuses and unreachable servers raise TransportError with the
// response body; responses that violate the contract (malformed JSON, wrong
// vector length, scores outside [0,1]) raise ProtocolError and are never
// clamped. Each request uses its own connection, so concurrent in-flight
// calls are safe.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(std::string base_url, double timeout_seconds = 30.0);

    ScoreVector align(const Scene& scene, const std::string& prompt) override;
    std::vector<std::string> attr(const Scene& scene, const std::vector<int>& entity_indices,
                                  const std::string& prompt) override;
    bool concurrency_safe() const override { return true; }

    // Registers the scene with the server; align/attr call this lazily once
    // per scene id.
    void prepare(const Scene& scene) override;

private:
    void ensure_registered(const Scene& scene);

    std::string base_url_;
    double timeout_seconds_;
    std::mutex mutex_;
    std::set<std::string> registered_;
};

}  // namespace snel
