#pragma once

#include <string>
#include <vector>

#include "snel/scene.hpp"

namespace snel {

// Sentinel returned for attribute requests nothing can answer; one missing
// attribute must not abort a batch get.
inline constexpr const char* kUnknownAttribute = "<unknown>";

// The scoring contract the evaluator runs against: per-entity alignment
// scores for a prompt, and attribute prediction for selected entities.
class Backend {
public:
    virtual ~Backend() = default;

    // One score in [0,1] per scene entity.
    virtual ScoreVector align(const Scene& scene, const std::string& prompt) = 0;

    // One attribute string per requested entity index, same order.
    virtual std::vector<std::string> attr(const Scene& scene,
                                          const std::vector<int>& entity_indices,
                                          const std::string& prompt) = 0;

    virtual bool supports_attr() const { return true; }
    virtual bool concurrency_safe() const = 0;

    // Called once per scene before evaluation; remote backends register the
    // scene here.
    virtual void prepare(const Scene&) {}
};

// Deterministic backend driven entirely by the scene file: stored score/attr
// table rows win, otherwise a crude lexical-overlap fallback guarantees every
// prompt yields a vector.
class MockBackend : public Backend {
public:
    ScoreVector align(const Scene& scene, const std::string& prompt) override;
    std::vector<std::string> attr(const Scene& scene, const std::vector<int>& entity_indices,
                                  const std::string& prompt) override;
    bool concurrency_safe() const override { return true; }
};

}  // namespace snel
