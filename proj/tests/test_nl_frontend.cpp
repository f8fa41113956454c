#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ltlplan/errors.hpp"
#include "ltlplan/ltl.hpp"
#include "ltlplan/nl_frontend.hpp"

using namespace ltlplan;

namespace {

const std::set<std::string> kAtoms{"g1", "g2", "g3", "g4", "us"};

// Serves a fixed chat-completion reply on a background thread.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(std::string reply) : reply_(std::move(reply)) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   last_body_ = req.body;
                   const nlohmann::json doc{
                       {"choices",
                        {{{"message",
                           {{"role", "assistant"}, {"content", reply_}}}}}}};
                   res.set_content(doc.dump(), "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  const std::string& last_body() const { return last_body_; }

 private:
  std::string reply_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::string last_body_;
};

LlmEndpointConfig config_for(const std::string& url) {
  LlmEndpointConfig cfg;
  cfg.base_url = url;
  cfg.model_name = "test-model";
  cfg.timeout_seconds = 5.0;
  cfg.max_retries = 0;
  return cfg;
}

}  // namespace

TEST_CASE("rules translation matches the reference phrasings byte-exactly") {
  CHECK(translate_rules("Visiting g1, g2, g3, and g4 last.", kAtoms) ==
        "F(g1 & F(g2 & F(g3 & F(g4))))");
  CHECK(translate_rules("visit g1 or g2, then g3, then g4", kAtoms) ==
        "F(g1||g2 & F(g3 & F(g4)))");
  CHECK(translate_rules("go to g1", kAtoms) == "F(g1)");
}

TEST_CASE("rules translation handles safety phrasing") {
  const std::string out = translate_rules(
      "visit g1, then g2, then g3, then g4, and avoid us after g1", kAtoms);
  CHECK(out ==
        "F(g1 & F(g2 & F(g3 & F(g4)))) & G(g1 -> X G(!us))");
  CHECK(translate_rules("go to g2; never us after g2", kAtoms) ==
        "F(g2) & G(g2 -> X G(!us))");
  // Every emitted formula parses and compiles.
  CHECK_NOTHROW(compile_dfa(parse_ltl(out)));
}

TEST_CASE("rules translation error modes") {
  CHECK_THROWS_AS(translate_rules("wander around aimlessly", kAtoms),
                  NoGoalsRecognized);
  // "or" that joins nothing (only one mention follows).
  CHECK_THROWS_AS(translate_rules("or g1", kAtoms), AmbiguousOrder);
  CHECK_THROWS_AS(translate_rules("g1 then g2 or", kAtoms), AmbiguousOrder);
}

TEST_CASE("formula candidate extraction") {
  CHECK(extract_formula_candidate("F(g1 & F(g2))") == "F(g1 & F(g2))");
  CHECK(extract_formula_candidate("Sure! The formula is:\n```\nF(g1 & F(g2))\n```\nEnjoy.") ==
        "F(g1 & F(g2))");
  CHECK(extract_formula_candidate("answer: F(g1||g2 & F(g3))") ==
        "F(g1||g2 & F(g3))");
  CHECK(extract_formula_candidate("no formula here") == "");
}

TEST_CASE("LLM endpoint: valid reply is used verbatim") {
  FakeEndpoint server("F(g1 & F(g2 & F(g3 & F(g4))))");
  const auto res = translate_llm("Visiting g1, g2, g3, and g4 last.",
                                 config_for(server.url()), kAtoms);
  CHECK(res.source == TranslationSource::Llm);
  CHECK(res.formula_text == "F(g1 & F(g2 & F(g3 & F(g4))))");
  REQUIRE(res.raw_model_output.has_value());
  // The prompt carried the task text and the atom vocabulary.
  CHECK(server.last_body().find("Visiting g1") != std::string::npos);
  CHECK(server.last_body().find("g4") != std::string::npos);
}

TEST_CASE("LLM endpoint: fenced reply is post-processed") {
  FakeEndpoint server("```ltl\nF(g1||g2 & F(g3))\n```");
  const auto res =
      translate_llm("visit g1 or g2, then g3", config_for(server.url()), kAtoms);
  CHECK(res.source == TranslationSource::Llm);
  CHECK(res.formula_text == "F(g1||g2 & F(g3))");
}

TEST_CASE("LLM endpoint: prose reply falls back to rules") {
  FakeEndpoint server("I cannot help with temporal logic, sorry.");
  const auto res = translate_llm("go to g1", config_for(server.url()), kAtoms);
  CHECK(res.source == TranslationSource::LlmFallbackToRules);
  CHECK(res.formula_text == "F(g1)");
  REQUIRE(res.raw_model_output.has_value());
  CHECK(res.raw_model_output->find("sorry") != std::string::npos);
}

TEST_CASE("LLM endpoint: unknown atoms in the reply fall back to rules") {
  FakeEndpoint server("F(g1 & F(g9))");
  const auto res = translate_llm("go to g1", config_for(server.url()), kAtoms);
  CHECK(res.source == TranslationSource::LlmFallbackToRules);
  CHECK(res.formula_text == "F(g1)");
}

TEST_CASE("LLM endpoint: unreachable server falls back to rules") {
  auto cfg = config_for("http://127.0.0.1:1");  // nothing listens here
  cfg.timeout_seconds = 1.0;
  const auto res = translate_llm("go to g2", cfg, kAtoms);
  CHECK(res.source == TranslationSource::LlmFallbackToRules);
  CHECK(res.formula_text == "F(g2)");

  // When the task is hopeless for both paths, the error surfaces.
  CHECK_THROWS_AS(translate_llm("no goals at all", cfg, kAtoms),
                  NoGoalsRecognized);
}
