#pragma once

// In-process HTTP server implementing the alignment wire protocol for tests.
// Serves canned fixture vectors through a MockBackend over scenes registered
// via PUT /scenes/{id}; a fault switch makes it emit each flavor of broken
// response the client must reject.

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "snel/backend.hpp"
#include "snel/scene.hpp"

namespace snel::testing {

class TestServer {
public:
    enum class Fault {
        None,
        ShortVector,    // one score missing
        OutOfRange,     // a score above 1
        WrongType,      // a string where a number belongs
        NotJson,        // body is not JSON at all
        MissingKey,     // JSON object without "scores"/"values"
        ServerError,    // 500 with a plain-text body
    };

    // Scenes the server should know even without a registration request.
    explicit TestServer(std::map<std::string, Scene> preloaded = {})
        : scenes_(std::move(preloaded)) {
        server_.Put(R"(/scenes/(.+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
            handle_register(req, res);
        });
        server_.Post("/align", [this](const httplib::Request& req, httplib::Response& res) {
            handle_align(req, res);
        });
        server_.Post("/attr", [this](const httplib::Request& req, httplib::Response& res) {
            handle_attr(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~TestServer() {
        server_.stop();
        thread_.join();
    }

    TestServer(const TestServer&) = delete;
    TestServer& operator=(const TestServer&) = delete;

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    void set_fault(Fault fault) { fault_ = fault; }
    int registrations() const { return registrations_; }
    nlohmann::json last_registration_body() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return last_registration_;
    }

private:
    void handle_register(const httplib::Request& req, httplib::Response& res) {
        try {
            const nlohmann::json body = nlohmann::json::parse(req.body);
            Scene scene = scene_from_json(body, "registration");
            std::lock_guard<std::mutex> lock(mutex_);
            last_registration_ = body;
            // Keep any preloaded fixture tables for this id.
            if (auto it = scenes_.find(scene.id); it != scenes_.end()) {
                scene.score_table = it->second.score_table;
                scene.attr_table = it->second.attr_table;
            }
            scenes_[scene.id] = std::move(scene);
            ++registrations_;
            res.set_content("{}", "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        }
    }

    const Scene* find_scene(const std::string& id) {
        auto it = scenes_.find(id);
        return it == scenes_.end() ? nullptr : &it->second;
    }

    void handle_align(const httplib::Request& req, httplib::Response& res) {
        if (fault_ == Fault::ServerError) {
            res.status = 500;
            res.set_content("backend exploded", "text/plain");
            return;
        }
        if (fault_ == Fault::NotJson) {
            res.set_content("this is not json", "application/json");
            return;
        }
        std::lock_guard<std::mutex> lock(mutex_);
        const nlohmann::json body = nlohmann::json::parse(req.body);
        const Scene* scene = find_scene(body.at("scene_id").get<std::string>());
        if (scene == nullptr) {
            res.status = 404;
            res.set_content("unknown scene", "text/plain");
            return;
        }
        const ScoreVector scores = mock_.align(*scene, body.at("prompt").get<std::string>());
        nlohmann::json out;
        switch (fault_) {
            case Fault::ShortVector: {
                auto copy = scores.scores;
                if (!copy.empty()) copy.pop_back();
                out["scores"] = copy;
                break;
            }
            case Fault::OutOfRange: {
                auto copy = scores.scores;
                if (!copy.empty()) copy.front() = 1.5;
                out["scores"] = copy;
                break;
            }
            case Fault::WrongType: {
                nlohmann::json arr = scores.scores;
                if (!arr.empty()) arr[0] = "x";
                out["scores"] = arr;
                break;
            }
            case Fault::MissingKey:
                out["something_else"] = 1;
                break;
            default:
                out["scores"] = scores.scores;
                break;
        }
        res.set_content(out.dump(), "application/json");
    }

    void handle_attr(const httplib::Request& req, httplib::Response& res) {
        if (fault_ == Fault::ServerError) {
            res.status = 500;
            res.set_content("backend exploded", "text/plain");
            return;
        }
        std::lock_guard<std::mutex> lock(mutex_);
        const nlohmann::json body = nlohmann::json::parse(req.body);
        const Scene* scene = find_scene(body.at("scene_id").get<std::string>());
        if (scene == nullptr) {
            res.status = 404;
            res.set_content("unknown scene", "text/plain");
            return;
        }
        const auto ids = body.at("entity_ids").get<std::vector<int>>();
        auto values = mock_.attr(*scene, ids, body.at("prompt").get<std::string>());
        nlohmann::json out;
        switch (fault_) {
            case Fault::ShortVector:
                if (!values.empty()) values.pop_back();
                out["values"] = values;
                break;
            case Fault::WrongType: {
                nlohmann::json arr = values;
                if (!arr.empty()) arr[0] = 42;
                out["values"] = arr;
                break;
            }
            case Fault::MissingKey:
                out["something_else"] = 1;
                break;
            default:
                out["values"] = values;
                break;
        }
        res.set_content(out.dump(), "application/json");
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mutex_;
    std::map<std::string, Scene> scenes_;
    MockBackend mock_;
    std::atomic<Fault> fault_{Fault::None};
    std::atomic<int> registrations_{0};
    nlohmann::json last_registration_;
};

}  // namespace snel::testing
