#include <doctest.h>

#include <string>
#include <vector>

#include "snel/error.hpp"
#include "snel/eval.hpp"
#include "snel/parser.hpp"
#include "snel/remote.hpp"
#include "snel/scene.hpp"
#include "snel/typecheck.hpp"
#include "support/test_server.hpp"

using namespace snel;
using snel::testing::TestServer;

namespace {

Scene park_scene() {
    return load_scene(std::string(SNEL_FIXTURE_DIR) + "/park.json");
}

std::map<std::string, Scene> preloaded_park() {
    std::map<std::string, Scene> scenes;
    Scene park = park_scene();
    scenes[park.id] = park;
    return scenes;
}

Value run_with(Backend& backend, const Scene& scene, const std::string& text) {
    Query q = parse_query(text);
    typecheck(q);
    EvalConfig config;
    ScoreCache cache;
    return evaluate_query(q, scene, backend, config, cache);
}

}  // namespace

TEST_CASE("remote align replays the fixture vectors") {
    TestServer server(preloaded_park());
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    CHECK(remote.align(scene, "an animal").scores == std::vector<double>{0.8, 0.1, 0.9});
    CHECK(remote.align(scene, "an animal that flies").scores ==
          std::vector<double>{0.9, 0.0, 0.2});
}

TEST_CASE("remote and mock backends agree on full queries") {
    TestServer server(preloaded_park());
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    MockBackend mock;
    for (const char* text : {
             "select [an animal]",
             "select [an animal] and [an animal that flies]",
             "count [an animal]",
             "any [an animal]",
             "all [an animal]",
             "all [an animal] sort by [an animal] desc limit 2",
             "get [the color] from [an animal] sort by [an animal] desc limit 1",
             "get [the color] from [an animal]",
             "count([an animal]) / count([an animal that flies])",
         }) {
        CAPTURE(text);
        CHECK(run_with(remote, scene, text) == run_with(mock, scene, text));
    }
}

TEST_CASE("scene registration happens once and strips fixture tables") {
    TestServer server;
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    remote.align(scene, "ignored");
    remote.align(scene, "also ignored");
    CHECK(server.registrations() == 1);
    const nlohmann::json body = server.last_registration_body();
    CHECK(body.contains("entities"));
    CHECK(!body.contains("score_table"));
    CHECK(!body.contains("attr_table"));
}

TEST_CASE("explicit prepare registers ahead of time") {
    TestServer server;
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    remote.prepare(scene);
    CHECK(server.registrations() == 1);
    remote.prepare(scene);
    CHECK(server.registrations() == 1);
}

TEST_CASE("malformed align responses raise ProtocolError") {
    TestServer server(preloaded_park());
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    remote.prepare(scene);

    server.set_fault(TestServer::Fault::ShortVector);
    CHECK_THROWS_AS(remote.align(scene, "an animal"), ProtocolError);
    server.set_fault(TestServer::Fault::OutOfRange);
    CHECK_THROWS_AS(remote.align(scene, "an animal"), ProtocolError);
    server.set_fault(TestServer::Fault::WrongType);
    CHECK_THROWS_AS(remote.align(scene, "an animal"), ProtocolError);
    server.set_fault(TestServer::Fault::NotJson);
    CHECK_THROWS_AS(remote.align(scene, "an animal"), ProtocolError);
    server.set_fault(TestServer::Fault::MissingKey);
    CHECK_THROWS_AS(remote.align(scene, "an animal"), ProtocolError);

    server.set_fault(TestServer::Fault::None);
    CHECK(remote.align(scene, "an animal").scores == std::vector<double>{0.8, 0.1, 0.9});
}

TEST_CASE("malformed attr responses raise ProtocolError") {
    TestServer server(preloaded_park());
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    remote.prepare(scene);

    server.set_fault(TestServer::Fault::ShortVector);
    CHECK_THROWS_AS(remote.attr(scene, {0, 2}, "the color"), ProtocolError);
    server.set_fault(TestServer::Fault::WrongType);
    CHECK_THROWS_AS(remote.attr(scene, {0}, "the color"), ProtocolError);
    server.set_fault(TestServer::Fault::MissingKey);
    CHECK_THROWS_AS(remote.attr(scene, {0}, "the color"), ProtocolError);

    server.set_fault(TestServer::Fault::None);
    CHECK(remote.attr(scene, {2, 0}, "the color") ==
          std::vector<std::string>{"black", "blue"});
}

TEST_CASE("non-200 statuses raise TransportError carrying the body") {
    TestServer server(preloaded_park());
    const Scene scene = park_scene();
    RemoteBackend remote(server.url());
    remote.prepare(scene);
    server.set_fault(TestServer::Fault::ServerError);
    try {
        remote.align(scene, "an animal");
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(std::string(e.what()).find("500") != std::string::npos);
        CHECK(std::string(e.what()).find("backend exploded") != std::string::npos);
    }
}

TEST_CASE("rejected registration is a transport failure") {
    TestServer server;
    Scene scene = park_scene();
    scene.id = "";  // PUT /scenes/ matches no route -> 404 from the server
    RemoteBackend remote(server.url());
    CHECK_THROWS_AS(remote.align(scene, "an animal"), TransportError);
}

TEST_CASE("unreachable servers raise TransportError") {
    const Scene scene = park_scene();
    RemoteBackend remote("http://127.0.0.1:1", 0.5);
    CHECK_THROWS_AS(remote.align(scene, "an animal"), TransportError);
}
